//! Exact linear algebra over ℚ(q): sparse row echelon solving and small
//! dense matrices.

use std::collections::BTreeMap;

use crate::cyclotomic::{CyclotomicField, Scalar};
use crate::error::{Error, Result};

/// A sparse row `Σ_j a_j x_j`, with the right-hand side stored at column
/// `unknowns` when used as an equation.
pub type SparseRow = BTreeMap<usize, Scalar>;

/// Incremental row echelon form; pivot rows are indexed by leading column
/// and are normalised to a leading coefficient of one.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: &'static CyclotomicField,
    unknowns: usize,
    pivots: BTreeMap<usize, SparseRow>,
    inconsistent: bool,
}

impl Echelon {
    pub fn new(field: &'static CyclotomicField, unknowns: usize) -> Self {
        Echelon {
            field,
            unknowns,
            pivots: BTreeMap::new(),
            inconsistent: false,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    /// Reduces `row` against the current pivots; keeps the remainder.
    fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let mut cursor = 0usize;
        loop {
            let next = row.range(cursor..).map(|(c, _)| *c).find(|c| self.pivots.contains_key(c));
            let Some(col) = next else { break };
            let factor = row.remove(&col).unwrap();
            for (c, v) in self.pivots[&col].iter().skip(1) {
                let t = &factor * v;
                let e = row.entry(*c).or_insert_with(|| self.field.zero());
                *e -= &t;
                if e.is_zero() {
                    row.remove(c);
                }
            }
            cursor = col + 1;
        }
        row
    }

    /// Adds an equation (or vector); returns whether it was independent.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row);
        let Some((&lead, lead_val)) = row.iter().next() else {
            return false;
        };
        if lead >= self.unknowns {
            self.inconsistent = true;
            return false;
        }
        let inv = lead_val.inv().expect("nonzero pivot");
        let normalised: SparseRow = row.into_iter().map(|(c, v)| (c, &v * &inv)).collect();
        self.pivots.insert(lead, normalised);
        true
    }

    /// The unique solution of the inserted equations.
    pub fn solve(&self) -> Result<Vec<Scalar>> {
        if self.inconsistent {
            return Err(Error::NotInvertible("linear system is inconsistent".into()));
        }
        if self.pivots.len() < self.unknowns {
            return Err(Error::NotInvertible(format!(
                "linear system has {} free unknowns",
                self.unknowns - self.pivots.len()
            )));
        }
        let mut x = vec![self.field.zero(); self.unknowns];
        for (col, row) in self.pivots.iter().rev() {
            let mut v = row.get(&self.unknowns).cloned().unwrap_or_else(|| self.field.zero());
            for (c, a) in row.range(col + 1..self.unknowns) {
                v -= &(a * &x[*c]);
            }
            x[*col] = v;
        }
        Ok(x)
    }
}

/// A dense matrix over ℚ(q), row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: &'static CyclotomicField, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &'static CyclotomicField, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn field(&self) -> &'static CyclotomicField {
        self.data[0].field()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.field(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let t = a * b;
                        out.data[i * other.cols + j] += &t;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.scale(&-self.field().one()))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| c * a).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Matrix {
        let mut acc = Matrix::identity(self.field(), self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let f = self.field();
        let mut a = self.clone();
        let mut inv = Matrix::identity(f, n);
        for c in 0..n {
            let p = (c..n)
                .find(|r| !a.get(*r, c).is_zero())
                .ok_or_else(|| Error::NotInvertible(format!("matrix is singular at column {c}")))?;
            if p != c {
                for j in 0..n {
                    a.data.swap(c * n + j, p * n + j);
                    inv.data.swap(c * n + j, p * n + j);
                }
            }
            let piv = a.get(c, c).inv()?;
            for j in 0..n {
                a.data[c * n + j] = &a.data[c * n + j] * &piv;
                inv.data[c * n + j] = &inv.data[c * n + j] * &piv;
            }
            for r in 0..n {
                if r == c || a.get(r, c).is_zero() {
                    continue;
                }
                let fac = a.get(r, c).clone();
                for j in 0..n {
                    if !a.data[c * n + j].is_zero() {
                        let t = &fac * &a.data[c * n + j];
                        a.data[r * n + j] -= &t;
                    }
                    if !inv.data[c * n + j].is_zero() {
                        let t = &fac * &inv.data[c * n + j];
                        inv.data[r * n + j] -= &t;
                    }
                }
            }
        }
        Ok(inv)
    }

    /// Entries as a flat row-major slice.
    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).pretty()).collect();
            out.push_str(&format!("[{}]\n", row.join(", ")));
        }
        out
    }
}

/// Rank of a set of vectors given as sparse rows.
pub fn rank(field: &'static CyclotomicField, dim: usize, rows: impl IntoIterator<Item = SparseRow>) -> usize {
    let mut e = Echelon::new(field, dim);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::field;

    #[test]
    fn solves_small_system() {
        let f = field(3).unwrap();
        let q = f.q();
        // q x + y = 1, x - y = q
        let mut e = Echelon::new(f, 2);
        e.insert(SparseRow::from([(0, q.clone()), (1, f.one()), (2, f.one())]));
        e.insert(SparseRow::from([(0, f.one()), (1, -f.one()), (2, q.clone())]));
        let x = e.solve().unwrap();
        assert_eq!(&q * &x[0] + x[1].clone(), f.one());
        assert_eq!(&x[0] - &x[1], q);
    }

    #[test]
    fn detects_inconsistent_and_underdetermined() {
        let f = field(3).unwrap();
        let mut e = Echelon::new(f, 2);
        e.insert(SparseRow::from([(0, f.one()), (1, f.one()), (2, f.one())]));
        assert!(e.solve().is_err());
        e.insert(SparseRow::from([(0, f.from_int(2)), (1, f.from_int(2)), (2, f.one())]));
        assert!(!e.is_consistent());
    }

    #[test]
    fn dense_inverse_round_trip() {
        let f = field(3).unwrap();
        let m = Matrix::from_fn(3, 3, |i, j| f.q_pow((i * j) as i64));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(f, 3));
        let singular = Matrix::from_fn(2, 2, |_, _| f.one());
        assert!(singular.inverse().is_err());
    }
}
