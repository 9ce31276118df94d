//! Built structures for one invocation and evaluation of expressions.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use qcomm_core::braided::Braiding;
use qcomm_core::qplane::{build_qplane_over, ExtendedPlane, ModuleAlgebra};
use qcomm_core::toy::{toy_hopf, toy_plane};
use qcomm_core::uqsl2::{build_uqsl2, pbw_label};
use qcomm_core::{field, tensor, Element, HopfData, Scalar};

use crate::error::CliError;
use crate::expr::{parse, Expr, Node};

/// The module-algebra a session works in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Space {
    /// The reduced quantum plane over U_q(sl2).
    A0,
    /// The plane extended by its derivatives (order 3 only).
    E,
    /// The plane over the cyclic group algebra with trivial R-matrix.
    Z3,
    /// A list of basis elements: the plane if they all lie in it, else the
    /// extension; used by `export qlie`.
    Span(Vec<String>),
}

impl FromStr for Space {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "A0" => Space::A0,
            "E" => Space::E,
            "Z3" => Space::Z3,
            _ if s.contains(',') || !s.trim().is_empty() => {
                let names: Vec<String> = s.split(',').map(|n| n.trim().to_string()).collect();
                if names.iter().any(String::is_empty) {
                    return Err(CliError::Usage(format!("malformed span `{s}`")));
                }
                Space::Span(names)
            }
            _ => return Err(CliError::Usage(format!("unknown space `{s}`"))),
        })
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::A0 => f.write_str("A0"),
            Space::E => f.write_str("E"),
            Space::Z3 => f.write_str("Z3"),
            Space::Span(names) => write!(f, "span{{{}}}", names.join(", ")),
        }
    }
}

/// A value produced by the evaluator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Scalar(Scalar),
    Hopf(Element),
    Module(Element),
    Tensor(Element),
}

/// Hopf algebra, module-algebra and braiding for one `--order`/`--space`;
/// the module side is built on first use.
pub struct Session {
    order: u32,
    space: Space,
    hopf: Arc<HopfData>,
    braiding: OnceLock<Result<Braiding, String>>,
    extended: OnceLock<Result<ExtendedPlane, String>>,
}

impl Session {
    pub fn new(order: u32, space: Space) -> Result<Self, CliError> {
        field(order)?;
        let hopf = match space {
            Space::Z3 => toy_hopf(order)?,
            _ => Arc::new(build_uqsl2(order)?),
        };
        Ok(Session {
            order,
            space,
            hopf,
            braiding: OnceLock::new(),
            extended: OnceLock::new(),
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn hopf(&self) -> &Arc<HopfData> {
        &self.hopf
    }

    fn extended(&self) -> Result<&ExtendedPlane, CliError> {
        self.extended
            .get_or_init(|| {
                let plane = build_qplane_over(self.hopf.clone()).map_err(|e| e.to_string())?;
                ExtendedPlane::build_over(plane).map_err(|e| e.to_string())
            })
            .as_ref()
            .map_err(|e| CliError::Usage(e.clone()))
    }

    fn build_module(&self) -> Result<ModuleAlgebra, CliError> {
        Ok(match &self.space {
            Space::A0 => build_qplane_over(self.hopf.clone())?,
            Space::E => self.extended()?.module.clone(),
            Space::Z3 => toy_plane(self.order)?,
            Space::Span(names) => {
                let plane = build_qplane_over(self.hopf.clone())?;
                if names.iter().all(|n| plane.basis().find(n).is_some()) {
                    plane
                } else {
                    self.extended()?.module.clone()
                }
            }
        })
    }

    /// The braiding on the session's module-algebra.
    pub fn braiding(&self) -> Result<&Braiding, CliError> {
        self.braiding
            .get_or_init(|| {
                let m = self.build_module().map_err(|e| e.to_string())?;
                Braiding::new(Arc::new(m)).map_err(|e| e.to_string())
            })
            .as_ref()
            .map_err(|e| CliError::Usage(e.clone()))
    }

    pub fn module(&self) -> Result<&Arc<ModuleAlgebra>, CliError> {
        Ok(self.braiding()?.module())
    }

    /// The extension data, when the space is `E` or a span inside it.
    pub fn extended_plane(&self) -> Result<&ExtendedPlane, CliError> {
        self.extended()
    }

    /// Basis indices of a `Span` space (all of the basis otherwise).
    pub fn span(&self) -> Result<Vec<u32>, CliError> {
        let b = self.braiding()?;
        match &self.space {
            Space::Span(names) => names
                .iter()
                .map(|n| {
                    b.basis()
                        .find(n)
                        .ok_or_else(|| CliError::Usage(format!("`{n}` is not a basis element")))
                })
                .collect(),
            _ => Ok((0..b.dim() as u32).collect()),
        }
    }

    fn hopf_atom(&self, name: &str) -> Result<Element, CliError> {
        let n = self.order;
        let label = match (name, &self.space) {
            ("K" | "g", Space::Z3) => "g^1".to_string(),
            ("Ki", Space::Z3) => format!("g^{}", n - 1),
            ("K", _) => pbw_label(0, 1, 0),
            ("Ki", _) => pbw_label(0, n - 1, 0),
            ("Xp", _) => pbw_label(0, 0, 1),
            ("Xm", _) => pbw_label(1, 0, 0),
            _ => String::new(),
        };
        self.hopf
            .algebra()
            .element(&label)
            .map_err(|_| CliError::Usage(format!("atom `{name}` is not available in space {}", self.space)))
    }

    fn module_atom(&self, name: &str) -> Result<Element, CliError> {
        let b = self.braiding()?;
        b.basis()
            .find(name)
            .map(|i| b.algebra().basis_element(i))
            .ok_or_else(|| CliError::Usage(format!("atom `{name}` is not available in space {}", self.space)))
    }

    fn to_module(&self, v: Value) -> Result<Element, CliError> {
        match v {
            Value::Scalar(s) => Ok(self.braiding()?.algebra().one().scale(&s)),
            Value::Module(e) => Ok(e),
            v => Err(CliError::Usage(format!("expected a module-algebra element, got {v:?}"))),
        }
    }

    fn lift(&self, v: Value, like: &Value) -> Result<Value, CliError> {
        let Value::Scalar(s) = v else { return Ok(v) };
        Ok(match like {
            Value::Scalar(_) => Value::Scalar(s),
            Value::Hopf(_) => Value::Hopf(self.hopf.algebra().one().scale(&s)),
            Value::Module(_) => Value::Module(self.braiding()?.algebra().one().scale(&s)),
            Value::Tensor(_) => Value::Tensor(self.braiding()?.algebra().unit_tensor(2).scale(&s)),
        })
    }

    fn binary(&self, a: Value, b: Value, op: Op) -> Result<Value, CliError> {
        let a = self.lift(a, &b)?;
        let b = self.lift(b, &a)?;
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(match op {
                Op::Add => x + y,
                Op::Sub => x - y,
                Op::Mul => x * y,
            }),
            (Value::Hopf(x), Value::Hopf(y)) => Value::Hopf(op.apply(&x, &y, |u, v| self.hopf.algebra().mul(u, v))),
            (Value::Module(x), Value::Module(y)) => {
                let alg = self.braiding()?.algebra();
                Value::Module(op.apply(&x, &y, |u, v| alg.mul(u, v)))
            }
            (Value::Tensor(x), Value::Tensor(y)) => {
                let alg = self.braiding()?.algebra();
                Value::Tensor(op.apply(&x, &y, |u, v| alg.mul_tensor(u, v)))
            }
            (a, b) => return Err(CliError::Usage(format!("cannot combine {a:?} and {b:?}"))),
        })
    }

    fn scale(&self, v: Value, s: &Scalar) -> Value {
        match v {
            Value::Scalar(x) => Value::Scalar(x * s),
            Value::Hopf(e) => Value::Hopf(e.scale(s)),
            Value::Module(e) => Value::Module(e.scale(s)),
            Value::Tensor(e) => Value::Tensor(e.scale(s)),
        }
    }

    /// Evaluates a sort-checked expression.
    pub fn eval(&self, e: &Expr) -> Result<Value, CliError> {
        let f = field(self.order)?;
        Ok(match &e.node {
            Node::Int(n) => Value::Scalar(f.from_int(*n)),
            Node::Atom(a) => match a.as_str() {
                "q" => Value::Scalar(f.q()),
                "one" => Value::Scalar(f.one()),
                "x" | "y" | "dx" | "dy" => Value::Module(self.module_atom(a)?),
                _ => Value::Hopf(self.hopf_atom(a)?),
            },
            Node::Neg(a) => self.scale(self.eval(a)?, &-f.one()),
            Node::Add(a, b) => self.binary(self.eval(a)?, self.eval(b)?, Op::Add)?,
            Node::Sub(a, b) => self.binary(self.eval(a)?, self.eval(b)?, Op::Sub)?,
            Node::Mul(a, b) => self.binary(self.eval(a)?, self.eval(b)?, Op::Mul)?,
            Node::Div(a, b) => {
                let Value::Scalar(d) = self.eval(b)? else {
                    return Err(CliError::Usage("can only divide by a scalar".into()));
                };
                let inv = d.inv()?;
                self.scale(self.eval(a)?, &inv)
            }
            Node::Pow(a, k) => {
                let base = self.eval(a)?;
                match base {
                    Value::Scalar(s) if *k < 0 => Value::Scalar(s.inv()?.pow(k.unsigned_abs() as u32)),
                    Value::Scalar(s) => Value::Scalar(s.pow(*k as u32)),
                    v => {
                        let mut acc = self.lift(Value::Scalar(f.one()), &v)?;
                        for _ in 0..*k {
                            acc = self.binary(acc, v.clone(), Op::Mul)?;
                        }
                        acc
                    }
                }
            }
            Node::Tensor(a, b) => {
                let (u, v) = (self.eval(a)?, self.eval(b)?);
                Value::Tensor(tensor(&self.to_module(u)?, &self.to_module(v)?))
            }
            Node::Comm(a, b) => {
                let (u, v) = (self.eval(a)?, self.eval(b)?);
                let (u, v) = (self.to_module(u)?, self.to_module(v)?);
                Value::Module(self.braiding()?.q_commutator(&u, &v))
            }
            Node::Chi(a, b) => {
                let (u, v) = (self.eval(a)?, self.eval(b)?);
                let t = tensor(&self.to_module(u)?, &self.to_module(v)?);
                Value::Tensor(self.braiding()?.chi(&t))
            }
            Node::Act(h, a) => {
                let h = match self.eval(h)? {
                    Value::Scalar(s) => self.hopf.algebra().one().scale(&s),
                    Value::Hopf(h) => h,
                    v => return Err(CliError::Usage(format!("act needs a Hopf-algebra element, got {v:?}"))),
                };
                let m = self.module()?;
                match self.eval(a)? {
                    Value::Tensor(t) => Value::Tensor(m.act_tensor(&self.hopf.coproduct(&h), &t)),
                    v => Value::Module(m.act(&h, &self.to_module(v)?)),
                }
            }
        })
    }

    /// Parses and evaluates `src`.
    pub fn eval_str(&self, src: &str) -> Result<Value, CliError> {
        let (e, _) = parse(src)?;
        self.eval(&e)
    }

    /// Canonical printed form of a value.
    pub fn print(&self, v: &Value) -> Result<String, CliError> {
        Ok(match v {
            Value::Scalar(s) => s.pretty(),
            Value::Hopf(e) => e.pretty(self.hopf.basis()),
            Value::Module(e) | Value::Tensor(e) => e.pretty(self.braiding()?.basis()),
        })
    }
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Sub,
    Mul,
}

impl Op {
    fn apply(self, x: &Element, y: &Element, mul: impl Fn(&Element, &Element) -> Element) -> Element {
        match self {
            Op::Add => x.add(y),
            Op::Sub => x.sub(y),
            Op::Mul => mul(x, y),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(s: &Session, src: &str) -> String {
        s.print(&s.eval_str(src).unwrap()).unwrap()
    }

    #[test]
    fn plane_examples() {
        let s = Session::new(3, Space::A0).unwrap();
        assert_eq!(show(&s, "[x, x]"), "(1-q^2) x^2");
        assert_eq!(show(&s, "chi(y, x)"), "q * x (x) y");
        assert_eq!(show(&s, "x*y - q*y*x"), "0");
        assert_eq!(show(&s, "q^-1 * q"), "1");
        assert_eq!(show(&s, "act(K, x)"), "q * x");
        assert_eq!(show(&s, "act(Xp, y)"), "x");
        assert_eq!(show(&s, "act(K, x (x) y)"), "x (x) y");
        assert_eq!(show(&s, "Xp Xm - Xm Xp"), show(&s, "(K - Ki)/(q - q^-1)"));
        assert!(s.eval_str("dx").is_err());
    }

    #[test]
    fn spaces_parse() {
        assert_eq!("A0".parse::<Space>().unwrap(), Space::A0);
        assert_eq!(
            "x, y".parse::<Space>().unwrap(),
            Space::Span(vec!["x".into(), "y".into()])
        );
        assert!("x,,y".parse::<Space>().is_err());
    }

    #[test]
    fn toy_space() {
        let s = Session::new(3, Space::Z3).unwrap();
        assert_eq!(show(&s, "act(g, x)"), "q * x");
        assert_eq!(show(&s, "chi(x, y)"), "y (x) x");
        assert!(s.eval_str("Xp").is_err());
    }
}
