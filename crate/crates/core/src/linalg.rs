//! Sparse Gaussian elimination over an arbitrary [`Field`].
//!
//! Vectors are sparse maps from an ordered key type to field elements. An
//! [`EchelonBasis`] keeps one row per pivot, the pivot being the largest key
//! of the row with coefficient one. Reducing a vector against the basis
//! removes every pivot key, so the remainder is supported on non-pivot keys
//! only and is therefore unique.

use std::collections::BTreeMap;

use crate::field::Field;

pub type SparseVec<K, E> = BTreeMap<K, E>;

/// `target += factor * source`, dropping entries that cancel.
pub fn axpy<K: Ord + Clone, F: Field>(
    field: &F,
    target: &mut SparseVec<K, F::Elem>,
    factor: &F::Elem,
    source: &SparseVec<K, F::Elem>,
) {
    for (k, v) in source {
        let delta = field.mul(factor, v);
        match target.get_mut(k) {
            Some(t) => {
                *t = field.add(t, &delta);
                if field.is_zero(t) {
                    target.remove(k);
                }
            }
            None => {
                if !field.is_zero(&delta) {
                    target.insert(k.clone(), delta);
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct EchelonBasis<K: Ord + Clone, F: Field> {
    field: F,
    rows: BTreeMap<K, SparseVec<K, F::Elem>>,
}

impl<K: Ord + Clone, F: Field> EchelonBasis<K, F> {
    pub fn new(field: F) -> Self {
        EchelonBasis {
            field,
            rows: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, key: &K) -> bool {
        self.rows.contains_key(key)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K, F::Elem>> {
        self.rows.values()
    }

    /// Remainder of `v` modulo the span, supported on non-pivot keys.
    pub fn reduce(&self, mut v: SparseVec<K, F::Elem>) -> SparseVec<K, F::Elem> {
        loop {
            let Some(key) = v.keys().rev().find(|k| self.rows.contains_key(*k)).cloned() else {
                return v;
            };
            let coeff = self.field.neg(&v[&key]);
            axpy(&self.field, &mut v, &coeff, &self.rows[&key]);
        }
    }

    pub fn contains(&self, v: &SparseVec<K, F::Elem>) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Adds `v` to the span. Returns `true` when the rank grew.
    pub fn insert(&mut self, v: SparseVec<K, F::Elem>) -> bool {
        let mut r = self.reduce(v);
        let Some((pivot, lead)) = r.iter().next_back().map(|(k, e)| (k.clone(), e.clone())) else {
            return false;
        };
        let inv = self.field.inv(&lead).expect("leading coefficient is nonzero");
        for e in r.values_mut() {
            *e = self.field.mul(e, &inv);
        }
        self.rows.insert(pivot, r);
        true
    }
}

/// Rank of a list of dense vectors.
pub fn rank_of<F: Field>(field: &F, vectors: &[Vec<F::Elem>]) -> usize {
    let mut basis = EchelonBasis::new(field.clone());
    for v in vectors {
        basis.insert(dense_to_sparse(field, v));
    }
    basis.rank()
}

pub fn dense_to_sparse<F: Field>(field: &F, v: &[F::Elem]) -> SparseVec<usize, F::Elem> {
    v.iter()
        .enumerate()
        .filter(|(_, e)| !field.is_zero(e))
        .map(|(i, e)| (i, e.clone()))
        .collect()
}

/// Basis of `{ λ : Σ λ_i v_i = 0 }` for the given sparse vectors.
pub fn kernel<K: Ord + Clone, F: Field>(
    field: &F,
    vectors: &[SparseVec<K, F::Elem>],
) -> Vec<Vec<F::Elem>> {
    // Augment each vector with a unit tag placed below every original key so
    // that elimination on the original coordinates records the combination.
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
    enum Col<K> {
        Tag(usize),
        Key(K),
    }
    let mut basis: EchelonBasis<Col<K>, F> = EchelonBasis::new(field.clone());
    let mut kernel = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let mut aug: SparseVec<Col<K>, F::Elem> =
            v.iter().map(|(k, e)| (Col::Key(k.clone()), e.clone())).collect();
        aug.insert(Col::Tag(i), field.one());
        let r = basis.reduce(aug);
        if r.keys().all(|c| matches!(c, Col::Tag(_))) {
            let mut combo = vec![field.zero(); vectors.len()];
            for (c, e) in &r {
                if let Col::Tag(j) = c {
                    combo[*j] = e.clone();
                }
            }
            kernel.push(combo);
        } else {
            basis.insert(r);
        }
    }
    kernel
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rational, PrimeField, Rationals};

    fn q(v: &[(usize, i64)]) -> SparseVec<usize, num_rational::BigRational> {
        v.iter().map(|&(k, n)| (k, rational(n, 1))).collect()
    }

    #[test]
    fn reduce_leaves_non_pivot_support() {
        let mut b = EchelonBasis::new(Rationals);
        assert!(b.insert(q(&[(0, 1), (2, 1)])));
        assert!(b.insert(q(&[(1, 1), (2, 2)])));
        assert!(!b.insert(q(&[(0, 2), (1, 1), (2, 4)])));
        assert_eq!(b.rank(), 2);
        let r = b.reduce(q(&[(2, 1)]));
        assert!(r.keys().all(|k| !b.is_pivot(k)));
        assert!(b.contains(&q(&[(0, 3), (2, 3)])));
        assert!(!b.contains(&q(&[(0, 1)])));
    }

    #[test]
    fn rank_over_prime_field_can_drop() {
        // rows (1,2) and (3,1) are dependent mod 5 since 1*1 - 2*3 = -5
        let f = PrimeField::new(5).unwrap();
        assert_eq!(rank_of(&f, &[vec![1, 2], vec![3, 1]]), 1);
        assert_eq!(rank_of(&Rationals, &[vec![rational(1, 1), rational(2, 1)], vec![rational(3, 1), rational(1, 1)]]), 2);
    }

    #[test]
    fn kernel_records_dependencies() {
        let vs = vec![q(&[(0, 1), (1, 1)]), q(&[(1, 1)]), q(&[(0, 2)])];
        let ker = kernel(&Rationals, &vs);
        assert_eq!(ker.len(), 1);
        let mut sum: SparseVec<usize, _> = BTreeMap::new();
        for (c, v) in ker[0].iter().zip(&vs) {
            axpy(&Rationals, &mut sum, c, v);
        }
        assert!(sum.is_empty());
    }
}
