//! Expression language: lexer, recursive-descent parser and sort checker.
//!
//! ```text
//! expr   := ['+'|'-'] tensor (('+'|'-') tensor)*
//! tensor := term ('(x)' term)*
//! term   := factor (['*'|'/'] factor)*        juxtaposition multiplies
//! factor := '-' factor | primary ['^' ['-'] int]
//! primary:= int | atom | '(' expr ')' | '[' expr ',' expr ']'
//!         | 'chi(' expr ',' expr ')' | 'act(' expr ',' expr ')'
//! ```
//!
//! The literal token `(x)` is the tensor sign, matching the printer.

use std::fmt;

use crate::error::CliError;

/// Atoms of the Hopf algebra: `g` is the generator of the cyclic toy.
pub const H_ATOMS: [&str; 5] = ["K", "Ki", "Xp", "Xm", "g"];
/// Atoms of the module-algebra.
pub const A_ATOMS: [&str; 4] = ["x", "y", "dx", "dy"];
/// Scalar atoms.
pub const S_ATOMS: [&str; 2] = ["q", "one"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Int(i64),
    Atom(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Tensor(Box<Expr>, Box<Expr>),
    /// `[a, b]`, the braided commutator.
    Comm(Box<Expr>, Box<Expr>),
    /// `chi(a, b)`.
    Chi(Box<Expr>, Box<Expr>),
    /// `act(h, e)`.
    Act(Box<Expr>, Box<Expr>),
}

/// A node with its byte offset in the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub node: Node,
    pub pos: usize,
}

/// What an expression evaluates to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sort {
    Scalar,
    /// An element of the Hopf algebra.
    Hopf,
    /// An element of the module-algebra.
    Module,
    /// A degree-2 tensor over the module-algebra.
    Tensor,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Scalar => "scalar",
            Sort::Hopf => "Hopf-algebra element",
            Sort::Module => "module-algebra element",
            Sort::Tensor => "tensor",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    TensorSign,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::TensorSign => f.write_str("`(x)`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn syntax(pos: usize, msg: impl Into<String>) -> CliError {
    CliError::Syntax { pos, msg: msg.into() }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, CliError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = src[start..i]
                    .parse()
                    .map_err(|_| syntax(start, "integer literal too large"))?;
                out.push((Tok::Int(n), start));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            b'(' if src[i..].starts_with("(x)") => {
                i += 2;
                Tok::TensorSign
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBrack,
            b']' => Tok::RBrack,
            b',' => Tok::Comma,
            _ => {
                let ch = src[i..].chars().next().unwrap();
                return Err(syntax(i, format!("unexpected character `{ch}`")));
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), CliError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected {want}, found {}", self.peek())))
        }
    }

    fn expr(&mut self) -> Result<Expr, CliError> {
        let pos = self.pos();
        let mut lhs = match self.peek() {
            Tok::Minus => {
                self.bump();
                let t = self.tensor()?;
                Expr { node: Node::Neg(Box::new(t)), pos }
            }
            Tok::Plus => {
                self.bump();
                self.tensor()?
            }
            _ => self.tensor()?,
        };
        loop {
            let pos = self.pos();
            let add = match self.peek() {
                Tok::Plus => true,
                Tok::Minus => false,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = Box::new(self.tensor()?);
            let node = if add { Node::Add(Box::new(lhs), rhs) } else { Node::Sub(Box::new(lhs), rhs) };
            lhs = Expr { node, pos };
        }
    }

    fn tensor(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.term()?;
        while *self.peek() == Tok::TensorSign {
            let pos = self.pos();
            self.bump();
            let rhs = self.term()?;
            lhs = Expr {
                node: Node::Tensor(Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
        Ok(lhs)
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Tok::Int(_) | Tok::Ident(_) | Tok::LParen | Tok::LBrack)
    }

    fn term(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.factor()?;
        loop {
            let pos = self.pos();
            let div = match self.peek() {
                Tok::Star => {
                    self.bump();
                    false
                }
                Tok::Slash => {
                    self.bump();
                    true
                }
                _ if self.starts_factor() => false,
                _ => return Ok(lhs),
            };
            let rhs = Box::new(self.factor()?);
            let node = if div { Node::Div(Box::new(lhs), rhs) } else { Node::Mul(Box::new(lhs), rhs) };
            lhs = Expr { node, pos };
        }
    }

    fn factor(&mut self) -> Result<Expr, CliError> {
        let pos = self.pos();
        if *self.peek() == Tok::Minus {
            self.bump();
            let inner = self.factor()?;
            return Ok(Expr { node: Node::Neg(Box::new(inner)), pos });
        }
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let neg = *self.peek() == Tok::Minus;
        if neg {
            self.bump();
        }
        match self.bump() {
            (Tok::Int(n), _) => Ok(Expr {
                node: Node::Pow(Box::new(base), if neg { -n } else { n }),
                pos,
            }),
            (t, p) => Err(syntax(p, format!("expected an integer exponent, found {t}"))),
        }
    }

    fn pair(&mut self, close: Tok) -> Result<(Box<Expr>, Box<Expr>), CliError> {
        let a = self.expr()?;
        self.expect(Tok::Comma)?;
        let b = self.expr()?;
        self.expect(close)?;
        Ok((Box::new(a), Box::new(b)))
    }

    fn primary(&mut self) -> Result<Expr, CliError> {
        let (tok, pos) = self.bump();
        let node = match tok {
            Tok::Int(n) => Node::Int(n),
            Tok::Ident(name) if (name == "chi" || name == "act") && *self.peek() == Tok::LParen => {
                self.bump();
                let (a, b) = self.pair(Tok::RParen)?;
                if name == "chi" {
                    Node::Chi(a, b)
                } else {
                    Node::Act(a, b)
                }
            }
            Tok::Ident(name) => {
                if !(H_ATOMS.contains(&name.as_str())
                    || A_ATOMS.contains(&name.as_str())
                    || S_ATOMS.contains(&name.as_str()))
                {
                    return Err(syntax(pos, format!("unknown atom `{name}`")));
                }
                Node::Atom(name)
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                return Ok(e);
            }
            Tok::LBrack => {
                let (a, b) = self.pair(Tok::RBrack)?;
                Node::Comm(a, b)
            }
            t => return Err(syntax(pos, format!("expected an operand, found {t}"))),
        };
        Ok(Expr { node, pos })
    }
}

/// A sort together with an atom that fixed it, for error messages.
#[derive(Debug, Clone)]
struct Typed {
    sort: Sort,
    witness: Option<String>,
}

fn describe(t: &Typed) -> String {
    match (&t.witness, t.sort) {
        (Some(w), Sort::Hopf) => format!("{w} is an H-atom"),
        (Some(w), Sort::Module) => format!("{w} is an A-atom"),
        (Some(w), s) => format!("{w} gives a {s}"),
        (None, s) => format!("operand is a {s}"),
    }
}

fn mixed(pos: usize, a: &Typed, b: &Typed) -> CliError {
    CliError::Type {
        pos,
        msg: format!("mixed algebras: {}, {}", describe(a), describe(b)),
    }
}

fn type_err(pos: usize, msg: impl Into<String>) -> CliError {
    CliError::Type { pos, msg: msg.into() }
}

/// Joins the sorts of two operands of `+`, `-` or `*`: scalars promote.
fn join(pos: usize, a: Typed, b: Typed) -> Result<Typed, CliError> {
    match (a.sort, b.sort) {
        (Sort::Scalar, _) => Ok(b),
        (_, Sort::Scalar) => Ok(a),
        (x, y) if x == y => Ok(a),
        (Sort::Hopf, _) | (_, Sort::Hopf) => Err(mixed(pos, &a, &b)),
        _ => Err(type_err(pos, format!("cannot combine a {} with a {}", a.sort, b.sort))),
    }
}

/// Both operands must live in the module-algebra (scalars promote).
fn module_pair(pos: usize, what: &str, a: Typed, b: Typed) -> Result<(), CliError> {
    if a.sort == Sort::Hopf || b.sort == Sort::Hopf {
        let (h, other) = if a.sort == Sort::Hopf { (&a, &b) } else { (&b, &a) };
        return Err(if other.sort == Sort::Module {
            mixed(pos, &a, &b)
        } else {
            type_err(pos, format!("{what} needs module-algebra elements: {}", describe(h)))
        });
    }
    if a.sort == Sort::Tensor || b.sort == Sort::Tensor {
        return Err(type_err(pos, format!("{what} needs module-algebra elements, not a tensor")));
    }
    Ok(())
}

fn check(e: &Expr) -> Result<Typed, CliError> {
    let pos = e.pos;
    Ok(match &e.node {
        Node::Int(_) => Typed {
            sort: Sort::Scalar,
            witness: None,
        },
        Node::Atom(a) => {
            let sort = if H_ATOMS.contains(&a.as_str()) {
                Sort::Hopf
            } else if A_ATOMS.contains(&a.as_str()) {
                Sort::Module
            } else {
                Sort::Scalar
            };
            Typed {
                sort,
                witness: Some(a.clone()),
            }
        }
        Node::Neg(a) => check(a)?,
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => join(pos, check(a)?, check(b)?)?,
        Node::Div(a, b) => {
            let d = check(b)?;
            if d.sort != Sort::Scalar {
                return Err(type_err(pos, format!("can only divide by a scalar: {}", describe(&d))));
            }
            check(a)?
        }
        Node::Pow(a, n) => {
            let t = check(a)?;
            if *n < 0 && t.sort != Sort::Scalar {
                return Err(type_err(pos, "negative powers are only defined for scalars"));
            }
            t
        }
        Node::Tensor(a, b) => {
            module_pair(pos, "the tensor sign", check(a)?, check(b)?)?;
            Typed {
                sort: Sort::Tensor,
                witness: None,
            }
        }
        Node::Comm(a, b) => {
            module_pair(pos, "the commutator", check(a)?, check(b)?)?;
            Typed {
                sort: Sort::Module,
                witness: None,
            }
        }
        Node::Chi(a, b) => {
            module_pair(pos, "the braiding", check(a)?, check(b)?)?;
            Typed {
                sort: Sort::Tensor,
                witness: None,
            }
        }
        Node::Act(h, a) => {
            let th = check(h)?;
            if !matches!(th.sort, Sort::Scalar | Sort::Hopf) {
                return Err(type_err(h.pos, format!("act needs a Hopf-algebra element first: {}", describe(&th))));
            }
            let ta = check(a)?;
            match ta.sort {
                Sort::Hopf => return Err(type_err(a.pos, "act needs a module-algebra element or tensor second")),
                Sort::Scalar => Typed {
                    sort: Sort::Module,
                    witness: None,
                },
                _ => ta,
            }
        }
    })
}

/// Sort of a tree assembled outside the parser.
pub fn typecheck(e: &Expr) -> Result<Sort, CliError> {
    Ok(check(e)?.sort)
}

/// Parses and sort-checks `src`.
pub fn parse(src: &str) -> Result<(Expr, Sort), CliError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.pos(), format!("unexpected {}", p.peek())));
    }
    let sort = check(&e)?.sort;
    Ok((e, sort))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(src: &str) -> Node {
        parse(src).unwrap().0.node
    }

    #[test]
    fn commutator_node() {
        match node("[x, dx]") {
            Node::Comm(a, b) => {
                assert_eq!(a.node, Node::Atom("x".into()));
                assert_eq!(b.node, Node::Atom("dx".into()));
            }
            n => panic!("{n:?}"),
        }
    }

    #[test]
    fn precedence() {
        let (e, sort) = parse("q^2 * x * y").unwrap();
        assert_eq!(sort, Sort::Module);
        let Node::Mul(l, r) = e.node else { panic!() };
        assert_eq!(r.node, Node::Atom("y".into()));
        let Node::Mul(s, _) = l.node else { panic!() };
        assert!(matches!(s.node, Node::Pow(_, 2)));
        let Node::Sub(a, _) = node("1 - q^2 x") else { panic!() };
        assert_eq!(a.node, Node::Int(1));
    }

    #[test]
    fn juxtaposition_and_tensor_sign() {
        assert_eq!(parse("(1-q^2) x^2").unwrap().1, Sort::Module);
        let (e, sort) = parse("q * x (x) y + (q^2-1) x (x) y").unwrap();
        assert_eq!(sort, Sort::Tensor);
        assert!(matches!(e.node, Node::Add(..)));
        assert_eq!(parse("(q^2-q)/3").unwrap().1, Sort::Scalar);
        assert_eq!(parse("Xm K^2 Xp").unwrap().1, Sort::Hopf);
    }

    #[test]
    fn mixed_algebras_rejected() {
        let err = parse("[x, K]").unwrap_err();
        assert!(matches!(err, CliError::Type { .. }), "{err}");
        assert!(err.to_string().contains("K is an H-atom"), "{err}");
        assert!(err.to_string().contains("x an A-atom") || err.to_string().contains("x is an A-atom"));
        assert!(parse("K + x").is_err());
        assert!(parse("act(K, x)").is_ok());
        assert!(parse("act(x, K)").is_err());
        assert!(parse("x^-1").is_err());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse("x + * y").unwrap_err() {
            CliError::Syntax { pos, .. } => assert_eq!(pos, 4),
            e => panic!("{e:?}"),
        }
        match parse("[x, y").unwrap_err() {
            CliError::Syntax { pos, .. } => assert_eq!(pos, 5),
            e => panic!("{e:?}"),
        }
        assert!(parse("z").is_err());
        assert!(parse("x $ y").is_err());
        assert!(parse("").is_err());
    }
}
