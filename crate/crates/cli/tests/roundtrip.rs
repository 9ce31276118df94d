//! Printing a value and parsing the text back gives the same value; a
//! printed scalar multiple of the unit reads back as a scalar.

use std::sync::OnceLock;

use proptest::prelude::*;
use qcomm_cli::{Session, Space, Value};
use qcomm_core::{field, Element, Scalar};

fn session(space: Space) -> &'static Session {
    static A0: OnceLock<Session> = OnceLock::new();
    static E: OnceLock<Session> = OnceLock::new();
    let cell = if space == Space::E { &E } else { &A0 };
    cell.get_or_init(|| Session::new(3, space).unwrap())
}

fn scalar(c: &[i64], den: i64) -> Scalar {
    let f = field(3).unwrap();
    let mut s = f.zero();
    for (k, n) in c.iter().enumerate() {
        s += &(f.from_int(*n) * f.q_pow(k as i64));
    }
    s.div(&f.from_int(den)).unwrap()
}

fn terms() -> impl Strategy<Value = Vec<(u32, Vec<i64>, i64)>> {
    prop::collection::vec((0u32..1000, prop::collection::vec(-3i64..=3, 3), 1i64..=4), 0..5)
}

fn element(arity: usize, dim: u32, ts: &[(u32, Vec<i64>, i64)]) -> Element {
    let mut e = Element::zero(arity);
    for (k, c, d) in ts {
        let key: Vec<u32> = (0..arity).map(|s| (k / dim.pow(s as u32)) % dim).collect();
        e.add_scaled(&scalar(c, *d), &Element::basis(&key, field(3).unwrap().one()));
    }
    e
}

fn round_trip(s: &Session, v: Value) -> Result<(), TestCaseError> {
    let text = s.print(&v).unwrap();
    let back = s.eval_str(&text).map_err(|e| TestCaseError::fail(format!("`{text}`: {e}")))?;
    let back = match (&v, back) {
        (Value::Module(_), Value::Scalar(c)) => Value::Module(s.braiding().unwrap().algebra().one().scale(&c)),
        (Value::Hopf(_), Value::Scalar(c)) => Value::Hopf(s.hopf().algebra().one().scale(&c)),
        (Value::Tensor(_), Value::Scalar(c)) => Value::Tensor(s.braiding().unwrap().algebra().unit_tensor(2).scale(&c)),
        (_, b) => b,
    };
    prop_assert_eq!(back, v, "text `{}`", text);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalars(c in prop::collection::vec(-5i64..=5, 3), d in 1i64..=6) {
        round_trip(session(Space::A0), Value::Scalar(scalar(&c, d)))?;
    }

    #[test]
    fn plane_elements(ts in terms()) {
        round_trip(session(Space::A0), Value::Module(element(1, 9, &ts)))?;
    }

    #[test]
    fn extension_elements(ts in terms()) {
        round_trip(session(Space::E), Value::Module(element(1, 81, &ts)))?;
    }

    #[test]
    fn plane_tensors(ts in terms()) {
        round_trip(session(Space::A0), Value::Tensor(element(2, 9, &ts)))?;
    }

    #[test]
    fn hopf_elements(ts in terms()) {
        round_trip(session(Space::A0), Value::Hopf(element(1, 27, &ts)))?;
    }
}
