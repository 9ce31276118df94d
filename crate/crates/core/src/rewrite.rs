//! Normal forms for algebras presented by ordered generators, exchange
//! relations `b a → Σ c·w` (for `b > a`) and truncations `g^n → Σ c·w`.
//!
//! A word is rewritten at its leftmost descent until it is sorted, then
//! powers at or above their bound are replaced. Results are memoised per
//! word. The normal-form basis is the set of exponent tuples below the bounds,
//! indexed lexicographically (first generator most significant).

use std::collections::HashMap;

use crate::cyclotomic::{CyclotomicField, Scalar};
use crate::tensor::{Element, Key};

pub type Word = Vec<u8>;

/// Right-hand side of a rule: a linear combination of words.
pub type Rhs = Vec<(Scalar, Word)>;

#[derive(Debug, Clone)]
pub struct RewriteSystem {
    field: &'static CyclotomicField,
    bounds: Vec<u32>,
    swaps: HashMap<(u8, u8), Rhs>,
    powers: Vec<Rhs>,
    memo: HashMap<Word, Vec<(Vec<u32>, Scalar)>>,
}

impl RewriteSystem {
    /// `bounds[g]` is the exponent at which `powers[g]` replaces `g^bound`.
    pub fn new(field: &'static CyclotomicField, bounds: Vec<u32>, powers: Vec<Rhs>) -> Self {
        assert_eq!(bounds.len(), powers.len());
        RewriteSystem {
            field,
            bounds,
            swaps: HashMap::new(),
            powers,
            memo: HashMap::new(),
        }
    }

    /// Adds `b a → rhs` for generators `b > a`.
    pub fn exchange(&mut self, b: u8, a: u8, rhs: Rhs) {
        assert!(b > a, "exchange rules rewrite descents only");
        self.swaps.insert((b, a), rhs);
        self.memo.clear();
    }

    pub fn generators(&self) -> usize {
        self.bounds.len()
    }

    /// Dimension of the normal-form basis.
    pub fn dim(&self) -> usize {
        self.bounds.iter().map(|b| *b as usize).product()
    }

    pub fn index(&self, exps: &[u32]) -> u32 {
        exps.iter()
            .zip(&self.bounds)
            .fold(0u32, |acc, (e, b)| acc * b + e)
    }

    pub fn exponents(&self, mut idx: u32) -> Vec<u32> {
        let mut out = vec![0; self.bounds.len()];
        for g in (0..self.bounds.len()).rev() {
            out[g] = idx % self.bounds[g];
            idx /= self.bounds[g];
        }
        out
    }

    pub fn word_of(&self, exps: &[u32]) -> Word {
        exps.iter()
            .enumerate()
            .flat_map(|(g, e)| std::iter::repeat_n(g as u8, *e as usize))
            .collect()
    }

    fn nf(&mut self, word: &[u8]) -> Vec<(Vec<u32>, Scalar)> {
        if let Some(v) = self.memo.get(word) {
            return v.clone();
        }
        let result = if let Some(i) = (0..word.len().saturating_sub(1)).find(|i| word[*i] > word[i + 1]) {
            let rhs = self
                .swaps
                .get(&(word[i], word[i + 1]))
                .cloned()
                .unwrap_or_else(|| panic!("no exchange rule for ({}, {})", word[i], word[i + 1]));
            self.substitute(word, i, 2, &rhs)
        } else {
            let mut exps = vec![0u32; self.bounds.len()];
            for g in word {
                exps[*g as usize] += 1;
            }
            match (0..exps.len()).find(|g| exps[*g] >= self.bounds[*g]) {
                None => vec![(exps, self.field.one())],
                Some(g) => {
                    let start = word.iter().position(|l| *l as usize == g).unwrap();
                    let rhs = self.powers[g].clone();
                    self.substitute(word, start, self.bounds[g] as usize, &rhs)
                }
            }
        };
        self.memo.insert(word.to_vec(), result.clone());
        result
    }

    fn substitute(&mut self, word: &[u8], at: usize, len: usize, rhs: &Rhs) -> Vec<(Vec<u32>, Scalar)> {
        let mut acc: HashMap<Vec<u32>, Scalar> = HashMap::new();
        for (c, w) in rhs {
            let mut nw = word[..at].to_vec();
            nw.extend_from_slice(w);
            nw.extend_from_slice(&word[at + len..]);
            for (e, v) in self.nf(&nw) {
                let t = c * &v;
                let slot = acc.entry(e).or_insert_with(|| self.field.zero());
                *slot += &t;
            }
        }
        let mut out: Vec<(Vec<u32>, Scalar)> = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Normal form of a word as an element over the normal-form basis.
    pub fn normal_form(&mut self, word: &[u8]) -> Element {
        let terms = self.nf(word);
        Element::from_terms(1, terms.into_iter().map(|(e, c)| (Key::from_slice(&[self.index(&e)]), c)))
    }

    /// Product of two normal-form basis elements.
    pub fn multiply(&mut self, i: u32, j: u32) -> Element {
        let mut w = self.word_of(&self.exponents(i));
        w.extend(self.word_of(&self.exponents(j)));
        self.normal_form(&w)
    }

    /// Full structure-constant table, row-major over basis pairs.
    pub fn product_table(&mut self) -> Vec<Element> {
        let n = self.dim() as u32;
        let mut out = Vec::with_capacity((n * n) as usize);
        for i in 0..n {
            for j in 0..n {
                out.push(self.multiply(i, j));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::field;

    #[test]
    fn quantum_plane_reordering() {
        // generators x < y with y x = q^{-1} x y, x^3 = y^3 = 1
        let f = field(3).unwrap();
        let mut rs = RewriteSystem::new(f, vec![3, 3], vec![vec![(f.one(), vec![])], vec![(f.one(), vec![])]]);
        rs.exchange(1, 0, vec![(f.q_pow(-1), vec![0, 1])]);
        let yx = rs.normal_form(&[1, 0]);
        assert_eq!(yx, Element::basis(&[rs.index(&[1, 1])], f.q_pow(2)));
        // y^2 x^2 = q^{-4} x^2 y^2
        let e = rs.normal_form(&[1, 1, 0, 0]);
        assert_eq!(e, Element::basis(&[rs.index(&[2, 2])], f.q_pow(-4)));
        // x^3 collapses to the unit
        assert_eq!(rs.normal_form(&[0, 0, 0]), Element::basis(&[0], f.one()));
        assert_eq!(rs.dim(), 9);
    }
}
