//! Exact arithmetic in the cyclotomic field ℚ(q), where q is a primitive
//! N-th root of unity for odd N.
//!
//! Elements are stored as dense coefficient vectors over the power basis
//! `1, q, …, q^{φ(N)-1}`, always reduced modulo the cyclotomic polynomial
//! Φ_N. Coefficients are `i128` rationals with checked arithmetic: an
//! overflow panics instead of producing a wrong answer.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

const OVERFLOW: &str = "exact rational arithmetic overflowed i128";

#[inline]
fn radd(a: &Rational, b: &Rational) -> Rational {
    a.checked_add(b).expect(OVERFLOW)
}

#[inline]
fn rsub(a: &Rational, b: &Rational) -> Rational {
    a.checked_sub(b).expect(OVERFLOW)
}

#[inline]
fn rmul(a: &Rational, b: &Rational) -> Rational {
    a.checked_mul(b).expect(OVERFLOW)
}

fn rdiv(a: &Rational, b: &Rational) -> Rational {
    rmul(a, &b.recip())
}

/// The field ℚ(q) with q a primitive `order`-th root of unity.
///
/// Instances are interned: [`field`] returns the same `'static` reference for
/// a given order, so scalars carry a pointer instead of a copy of Φ_N.
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    order: u32,
    degree: usize,
    /// Monic integer coefficients of Φ_N, low degree first.
    phi: Vec<i128>,
    /// `q^k mod Φ_N` for `k < powers.len()`.
    powers: Vec<Vec<i128>>,
    prime: bool,
}

type Poly = Vec<i128>;

fn poly_divexact(num: &Poly, den: &Poly) -> Poly {
    let mut rem = num.clone();
    let dd = den.len() - 1;
    let lead = *den.last().unwrap();
    let mut quot = vec![0i128; rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd] / lead;
        quot[k] = c;
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|c| *c == 0));
    quot
}

fn cyclotomic_poly(n: u32) -> Poly {
    let mut p = vec![0i128; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = poly_divexact(&p, &cyclotomic_poly(d));
        }
    }
    p
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}


impl CyclotomicField {
    fn build(order: u32) -> Self {
        let phi = cyclotomic_poly(order);
        let degree = phi.len() - 1;
        let count = (order as usize).max(2 * degree);
        let mut powers = Vec::with_capacity(count);
        let mut cur = vec![0i128; degree];
        cur[0] = 1;
        for _ in 0..count {
            powers.push(cur.clone());
            // multiply by q, then eliminate q^degree with the monic Φ_N
            let top = cur[degree - 1];
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            for (i, c) in cur.iter_mut().enumerate() {
                *c -= top * phi[i];
            }
        }
        CyclotomicField {
            order,
            degree,
            phi,
            powers,
            prime: is_prime(order),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Degree φ(N) of the field over ℚ.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn cyclotomic_polynomial(&self) -> &[i128] {
        &self.phi
    }

    pub fn zero(&'static self) -> Scalar {
        Scalar {
            field: self,
            num: SmallVec::from_elem(0, self.degree),
            den: 1,
        }
    }

    pub fn one(&'static self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&'static self, n: i64) -> Scalar {
        let mut s = self.zero();
        s.num[0] = n as i128;
        s
    }

    pub fn from_rational(&'static self, r: Rational) -> Scalar {
        let mut s = self.zero();
        s.num[0] = *r.numer();
        s.den = *r.denom();
        s.normalize();
        s
    }

    /// The generator q.
    pub fn q(&'static self) -> Scalar {
        self.q_pow(1)
    }

    /// `q^k`, reduced to `q^{k mod N}`; negative exponents allowed.
    pub fn q_pow(&'static self, k: i64) -> Scalar {
        let e = k.rem_euclid(self.order as i64) as usize;
        Scalar {
            field: self,
            num: SmallVec::from_slice(&self.powers[e]),
            den: 1,
        }
    }

    /// The q-integer `[n]_{q^base} = 1 + q^base + … + q^{base(n-1)}`.
    pub fn q_integer(&'static self, n: u32, base: i64) -> Scalar {
        let mut s = self.zero();
        for i in 0..n as i64 {
            s += &self.q_pow(base * i);
        }
        s
    }

    /// Reduces integer coefficients on `1, q, q², …` of any length modulo Φ_N.
    fn reduce_integers(&'static self, full: &[i128], den: i128) -> Scalar {
        let mut num: SmallVec<[i128; 4]> = SmallVec::from_elem(0, self.degree);
        let n = self.order as usize;
        for (k, c) in full.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            if k < self.degree {
                num[k] = iadd(num[k], *c);
                continue;
            }
            for (o, p) in num.iter_mut().zip(&self.powers[k % n]) {
                if *p != 0 {
                    *o = iadd(*o, imul(*c, *p));
                }
            }
        }
        let mut s = Scalar { field: self, num, den };
        s.normalize();
        s
    }

    /// Builds a scalar from coefficients on `1, q, q², …` of any length,
    /// reducing modulo Φ_N.
    pub fn from_coeffs(&'static self, coeffs: &[Rational]) -> Scalar {
        let den = coeffs.iter().fold(1i128, |acc, c| acc.lcm(c.denom()));
        let full: Vec<i128> = coeffs.iter().map(|c| imul(*c.numer(), den / c.denom())).collect();
        self.reduce_integers(&full, den)
    }

    /// Decodes the common-denominator JSON form.
    pub fn from_json(&'static self, repr: &ScalarJson) -> Result<Scalar> {
        if repr.den <= 0 {
            return Err(Error::Malformed(format!("scalar denominator {} must be positive", repr.den)));
        }
        if repr.coeffs.len() != self.degree {
            return Err(Error::Malformed(format!(
                "scalar has {} coefficients, field of order {} needs {}",
                repr.coeffs.len(),
                self.order,
                self.degree
            )));
        }
        let mut s = Scalar {
            field: self,
            num: SmallVec::from_slice(&repr.coeffs),
            den: repr.den,
        };
        s.normalize();
        Ok(s)
    }
}

/// Returns the interned field of the given odd order `N ≥ 3`.
pub fn field(order: u32) -> Result<&'static CyclotomicField> {
    if order < 3 || order.is_multiple_of(2) {
        return Err(Error::InvalidOrder(order));
    }
    static FIELDS: OnceLock<Mutex<HashMap<u32, &'static CyclotomicField>>> = OnceLock::new();
    let mut map = FIELDS.get_or_init(Default::default).lock().unwrap();
    Ok(*map
        .entry(order)
        .or_insert_with(|| Box::leak(Box::new(CyclotomicField::build(order)))))
}

#[inline]
fn iadd(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect(OVERFLOW)
}

#[inline]
fn imul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect(OVERFLOW)
}

/// An element of ℚ(q), stored as integer numerators on `1, q, …` over one
/// positive denominator, in lowest terms.
#[derive(Clone)]
pub struct Scalar {
    field: &'static CyclotomicField,
    num: SmallVec<[i128; 4]>,
    den: i128,
}

/// Serialized scalar: `value = (Σ coeffs[k] q^k) / den` in reduced form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarJson {
    pub den: i128,
    pub coeffs: Vec<i128>,
}

impl Scalar {
    pub fn field(&self) -> &'static CyclotomicField {
        self.field
    }

    fn normalize(&mut self) {
        if self.den == 1 {
            return;
        }
        if self.den < 0 {
            self.den = self.den.checked_neg().expect(OVERFLOW);
            for c in self.num.iter_mut() {
                *c = c.checked_neg().expect(OVERFLOW);
            }
        }
        let g = self.num.iter().fold(self.den, |g, c| g.gcd(c));
        if g > 1 {
            self.den /= g;
            for c in self.num.iter_mut() {
                *c /= g;
            }
        }
        if self.num.iter().all(|c| *c == 0) {
            self.den = 1;
        }
    }

    /// Reduced coefficients on `1, q, …, q^{φ(N)-1}`.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.num.iter().map(|c| Rational::new(*c, self.den)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| *c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.den == 1 && self.num[0] == 1 && self.num[1..].iter().all(|c| *c == 0)
    }

    fn check(&self, other: &Scalar) {
        assert!(
            std::ptr::eq(self.field, other.field),
            "{}",
            Error::FieldMismatch(self.field.order, other.field.order)
        );
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = self.field.degree;
        // column j of the multiplication matrix is self * q^j
        let mut m: Vec<Vec<Rational>> = vec![vec![Rational::zero(); d + 1]; d];
        for j in 0..d {
            let col = self * &self.field.q_pow(j as i64);
            for (row, c) in m.iter_mut().zip(col.coeffs()) {
                row[j] = c;
            }
        }
        m[0][d] = Rational::one();
        for c in 0..d {
            let p = (c..d).find(|r| !m[*r][c].is_zero()).ok_or(Error::DivisionByZero)?;
            m.swap(c, p);
            let piv = m[c][c];
            for v in m[c].iter_mut() {
                *v = rdiv(v, &piv);
            }
            let pivot = m[c].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != c && !row[c].is_zero() {
                    let f = row[c];
                    for (v, p) in row.iter_mut().zip(&pivot) {
                        *v = rsub(v, &rmul(&f, p));
                    }
                }
            }
        }
        let sol: Vec<Rational> = m.iter().map(|row| row[d]).collect();
        Ok(self.field.from_coeffs(&sol))
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Complex conjugation, the Galois automorphism q ↦ q⁻¹.
    pub fn conj(&self) -> Scalar {
        let n = self.field.order as usize;
        let mut full = vec![0i128; n];
        for (k, c) in self.num.iter().enumerate() {
            full[(n - k) % n] = *c;
        }
        self.field.reduce_integers(&full, self.den)
    }

    pub fn scale(&self, r: &Rational) -> Scalar {
        let mut s = Scalar {
            field: self.field,
            num: self.num.iter().map(|c| imul(*c, *r.numer())).collect(),
            den: imul(self.den, *r.denom()),
        };
        s.normalize();
        s
    }

    /// If the scalar is rational, returns it.
    pub fn as_rational(&self) -> Option<Rational> {
        self.num[1..]
            .iter()
            .all(|c| *c == 0)
            .then(|| Rational::new(self.num[0], self.den))
    }

    pub fn to_json(&self) -> ScalarJson {
        ScalarJson {
            den: self.den,
            coeffs: self.num.to_vec(),
        }
    }

    /// Chooses the representation used for printing: integer numerators on
    /// `q^0 … q^{N-1}` and a positive common denominator.
    ///
    /// For prime N the vector is only defined up to multiples of
    /// `1 + q + … + q^{N-1}`; the sparsest representative with the smallest
    /// coefficients is taken, so that e.g. `-1-q` prints as `-q^2`.
    pub fn display_terms(&self) -> (Vec<(i128, usize)>, i128) {
        let n = self.field.order as usize;
        let mut base = vec![Rational::zero(); n];
        base[..self.num.len()].clone_from_slice(&self.coeffs());
        let chosen = if self.field.prime {
            let mut shifts = vec![Rational::zero()];
            shifts.extend(base.iter().filter(|c| !c.is_zero()).map(|c| -c));
            let score = |v: &[Rational]| {
                let nnz = v.iter().filter(|c| !c.is_zero()).count();
                let max = v.iter().map(|c| c.abs()).max().unwrap_or_else(Rational::zero);
                let sum = v.iter().fold(Rational::zero(), |a, c| radd(&a, &c.abs()));
                (nnz, max, sum)
            };
            let mut best: Option<(Vec<Rational>, (usize, Rational, Rational))> = None;
            for t in shifts {
                let v: Vec<Rational> = base.iter().map(|c| radd(c, &t)).collect();
                let s = score(&v);
                if best.as_ref().is_none_or(|(_, bs)| s < *bs) {
                    best = Some((v, s));
                }
            }
            best.unwrap().0
        } else {
            base
        };
        let den = chosen.iter().fold(1i128, |acc, c| acc.lcm(c.denom()));
        let terms = chosen
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (c.numer() * (den / c.denom()), k))
            .collect();
        (terms, den)
    }

    /// Number of nonzero terms in the printed form.
    pub fn display_len(&self) -> usize {
        self.display_terms().0.len()
    }

    /// Pretty form, e.g. `1-q^2`, `(q^2-q)/3`, `-3q^2`.
    pub fn pretty(&self) -> String {
        let (mut terms, den) = self.display_terms();
        if terms.is_empty() {
            return "0".to_string();
        }
        // positive terms first, each group by ascending power
        terms.sort_by_key(|(c, k)| (*c < 0, *k));
        let mut body = String::new();
        for (i, (c, k)) in terms.iter().enumerate() {
            if *c < 0 {
                body.push('-');
            } else if i > 0 {
                body.push('+');
            }
            let mag = c.abs();
            match k {
                0 => body.push_str(&mag.to_string()),
                _ => {
                    if mag != 1 {
                        body.push_str(&mag.to_string());
                    }
                    body.push('q');
                    if *k > 1 {
                        body.push_str(&format!("^{k}"));
                    }
                }
            }
        }
        if den == 1 {
            body
        } else if terms.len() > 1 {
            format!("({body})/{den}")
        } else {
            format!("{body}/{den}")
        }
    }

    /// `self + sign * rhs`.
    fn add_signed(&self, rhs: &Scalar, negate: bool) -> Scalar {
        self.check(rhs);
        let combine = |a: i128, b: i128| {
            if negate {
                a.checked_sub(b).expect(OVERFLOW)
            } else {
                iadd(a, b)
            }
        };
        if self.den == rhs.den {
            let mut s = Scalar {
                field: self.field,
                num: self.num.iter().zip(&rhs.num).map(|(a, b)| combine(*a, *b)).collect(),
                den: self.den,
            };
            s.normalize();
            return s;
        }
        let l = self.den.lcm(&rhs.den);
        let (fa, fb) = (l / self.den, l / rhs.den);
        let mut s = Scalar {
            field: self.field,
            num: self
                .num
                .iter()
                .zip(&rhs.num)
                .map(|(a, b)| combine(imul(*a, fa), imul(*b, fb)))
                .collect(),
            den: l,
        };
        s.normalize();
        s
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.den == other.den && self.num == other.num
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self.pretty())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.add_signed(rhs, false)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.add_signed(rhs, true)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        let d = self.field.degree;
        let den = imul(self.den, rhs.den);
        if d == 2 {
            // fast path for N = 3: q² = -1 - q
            let (a, b) = (self.num[0], self.num[1]);
            let (c, e) = (rhs.num[0], rhs.num[1]);
            let ac = imul(a, c);
            let be = imul(b, e);
            let cross = iadd(imul(a, e), imul(b, c));
            let mut s = Scalar {
                field: self.field,
                num: SmallVec::from_slice(&[ac.checked_sub(be).expect(OVERFLOW), cross.checked_sub(be).expect(OVERFLOW)]),
                den,
            };
            s.normalize();
            return s;
        }
        let mut full: SmallVec<[i128; 16]> = SmallVec::from_elem(0, 2 * d - 1);
        for (i, a) in self.num.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if *b != 0 {
                    full[i + j] = iadd(full[i + j], imul(*a, *b));
                }
            }
        }
        self.field.reduce_integers(&full, den)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            field: self.field,
            num: self.num.iter().map(|c| c.checked_neg().expect(OVERFLOW)).collect(),
            den: self.den,
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if self.den == 1 && rhs.den == 1 {
            self.check(rhs);
            for (a, b) in self.num.iter_mut().zip(&rhs.num) {
                *a = iadd(*a, *b);
            }
        } else {
            *self = self.add_signed(rhs, false);
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        if self.den == 1 && rhs.den == 1 {
            self.check(rhs);
            for (a, b) in self.num.iter_mut().zip(&rhs.num) {
                *a = a.checked_sub(*b).expect(OVERFLOW);
            }
        } else {
            *self = self.add_signed(rhs, true);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f3() -> &'static CyclotomicField {
        field(3).unwrap()
    }

    fn s(a: i64, b: i64) -> Scalar {
        let f = f3();
        f.from_int(a) + f.from_int(b) * f.q()
    }

    #[test]
    fn rejects_even_and_small_orders() {
        assert_eq!(field(4).unwrap_err(), Error::InvalidOrder(4));
        assert_eq!(field(1).unwrap_err(), Error::InvalidOrder(1));
        assert!(field(9).is_ok());
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(field(3).unwrap().cyclotomic_polynomial(), &[1, 1, 1]);
        assert_eq!(field(9).unwrap().cyclotomic_polynomial(), &[1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(field(15).unwrap().degree(), 8);
    }

    #[test]
    fn addition_examples() {
        let f = f3();
        let q = f.q();
        assert_eq!(&q + &f.q_pow(2), f.from_int(-1));
        assert_eq!(f.zero() + q.clone(), q);
        let third = Rational::new(1, 3);
        let v = f.from_coeffs(&[
            Rational::from_integer(2),
            Rational::from_integer(2),
            Rational::from_integer(5),
        ]);
        assert_eq!(v.scale(&third) + f.zero(), f.q_pow(2));
    }

    #[test]
    fn multiplication_examples() {
        let f = f3();
        assert!((f.q() * f.q_pow(2)).is_one());
        let d = f.q() - f.q_pow(2);
        assert_eq!(&d * &d, f.from_int(-3));
        assert!((f.q() * f.zero()).is_zero());
    }

    #[test]
    fn inverse_examples() {
        let f = f3();
        assert!(f.one().inv().unwrap().is_one());
        assert_eq!(f.q().inv().unwrap(), f.q_pow(2));
        let d = f.q() - f.q_pow(2);
        let expect = (f.q_pow(2) - f.q()).scale(&Rational::new(1, 3));
        assert_eq!(d.inv().unwrap(), expect);
        assert_eq!(f.zero().inv().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn q_pow_examples() {
        let f = f3();
        assert!(f.q_pow(3).is_one());
        assert_eq!(f.q_pow(-1), f.q_pow(2));
        assert_eq!(f.q_pow(5), f.q_pow(2));
    }

    #[test]
    fn cyclotomic_relation_vanishes() {
        for n in [3u32, 5, 7, 9, 15] {
            let f = field(n).unwrap();
            // Φ_N(q) = 0
            let mut acc = f.zero();
            for (k, c) in f.cyclotomic_polynomial().iter().enumerate() {
                acc += &f.q_pow(k as i64).scale(&Rational::from_integer(*c));
            }
            assert!(acc.is_zero(), "Φ_{n}(q) != 0");
            assert!(f.q_pow(n as i64).is_one());
            // q is primitive
            for k in 1..n {
                assert!(!f.q_pow(k as i64).is_one());
            }
        }
        assert!(f3().q_integer(3, 1).is_zero());
        assert!(f3().q_integer(3, 2).is_zero());
    }

    #[test]
    fn pretty_printing() {
        let f = f3();
        assert_eq!(f.q_pow(2).pretty(), "q^2");
        assert_eq!((-f.q_pow(2)).pretty(), "-q^2");
        assert_eq!((f.one() - f.q_pow(2)).pretty(), "1-q^2");
        assert_eq!((f.q_pow(2) - f.q()).pretty(), "q^2-q");
        assert_eq!((f.q_pow(2) - f.one()).pretty(), "q^2-1");
        assert_eq!((f.q() - f.one()).pretty(), "q-1");
        assert_eq!(f.q_pow(2).scale(&Rational::from_integer(-3)).pretty(), "-3q^2");
        assert_eq!(
            (f.q_pow(2) - f.q()).scale(&Rational::new(1, 3)).pretty(),
            "(q^2-q)/3"
        );
        assert_eq!(f.from_rational(Rational::new(-1, 3)).pretty(), "-1/3");
        assert_eq!(f.zero().pretty(), "0");
        assert_eq!(s(3, 3).pretty(), "-3q^2");
    }

    #[test]
    fn json_form() {
        let v = (f3().q_pow(2) - f3().q()).scale(&Rational::new(1, 3));
        let j = v.to_json();
        assert_eq!(j, ScalarJson { den: 3, coeffs: vec![-1, -2] });
        assert_eq!(f3().from_json(&j).unwrap(), v);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"den":3,"coeffs":[-1,-2]}"#);
        assert!(f3().from_json(&ScalarJson { den: 0, coeffs: vec![1, 0] }).is_err());
        assert!(f3().from_json(&ScalarJson { den: 1, coeffs: vec![1] }).is_err());
    }

    #[test]
    fn conjugation_is_inverse_on_q() {
        for n in [3u32, 5, 9] {
            let f = field(n).unwrap();
            for k in 0..n as i64 {
                assert_eq!(f.q_pow(k).conj(), f.q_pow(-k));
            }
        }
    }

    fn arb_scalar(order: u32) -> impl Strategy<Value = Scalar> {
        let f = field(order).unwrap();
        proptest::collection::vec((-20i64..20, 1i64..6), f.degree()).prop_map(move |v| {
            let c: Vec<Rational> = v
                .into_iter()
                .map(|(n, d)| Rational::new(n as i128, d as i128))
                .collect();
            f.from_coeffs(&c)
        })
    }

    proptest! {
        #[test]
        fn field_axioms_order3(a in arb_scalar(3), b in arb_scalar(3), c in arb_scalar(3)) {
            prop_assert_eq!((&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
            prop_assert_eq!((&a * &b).conj(), a.conj() * b.conj());
        }

        #[test]
        fn field_axioms_order9(a in arb_scalar(9), b in arb_scalar(9), c in arb_scalar(9)) {
            prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn q_pow_inverse(k in -50i64..50, n in prop::sample::select(vec![3u32, 5, 7, 9])) {
            let f = field(n).unwrap();
            prop_assert!((f.q_pow(k) * f.q_pow(-k)).is_one());
        }
    }
}
