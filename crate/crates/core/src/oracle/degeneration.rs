//! Top-preserving degenerations of submodules `C ⊆ JP` and slot-aligned
//! summand counts.
//!
//! `P = ⊕_r Λ z_r` is coordinatized by the standard basis paths of `Λ e(r)`
//! in each slot. For a slot `s`, `π_s` is the projection onto `Λ z_s` and the
//! degeneration replaces `C` by `π_s(C) ⊕ (C ∩ Ker π_s)`, which has the same
//! dimension and splits along slot `s`.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::{AlgebraElement, QuiverAlgebra, TopSpec};
use crate::error::{Error, Result};
use crate::field::Rationals;
use crate::linalg::{axpy, kernel, EchelonBasis, SparseVec};
use crate::quiver::VertexId;
use crate::skeleta::TaggedPath;

pub type Vector = SparseVec<TaggedPath, BigRational>;

/// A submodule `C ⊆ JP` given by a reduced basis over the rationals.
#[derive(Clone, Debug)]
pub struct SubmodulePresentation {
    slot_count: usize,
    /// `dim Λ z_r` per slot.
    slot_dims: Vec<usize>,
    /// Effective degree of every coordinate, for homogeneity checks.
    degrees: std::collections::BTreeMap<TaggedPath, usize>,
    basis: EchelonBasis<TaggedPath, Rationals>,
}

/// Expresses `Σ c·(slot, path)` in standard basis coordinates of `P`.
pub fn vector_from_terms(algebra: &QuiverAlgebra, top: &TopSpec, terms: &[(usize, AlgebraElement)]) -> Result<Vector> {
    let q = algebra.quiver();
    let mut v = Vector::new();
    for (slot, x) in terms {
        if *slot >= top.slot_count() {
            return Err(Error::SlotOutOfRange(slot + 1));
        }
        for (p, _) in x.terms() {
            if p.start() != top.slot_vertex(*slot) {
                return Err(Error::WrongStartVertex {
                    slot: slot + 1,
                    path: q.format_path(p),
                });
            }
        }
        let nf = algebra.normal_form(x);
        let part: Vector = nf.terms().map(|(p, c)| (TaggedPath::new(*slot, p.clone()), c.clone())).collect();
        axpy(&Rationals, &mut v, &BigRational::from_integer(1.into()), &part);
    }
    Ok(v)
}

/// `α · v` in standard coordinates.
fn arrow_action(algebra: &QuiverAlgebra, alpha: crate::quiver::ArrowId, v: &Vector) -> Vector {
    let q = algebra.quiver();
    let mut out = Vector::new();
    for (t, c) in v {
        let Some(ext) = q.extend(&t.path, alpha) else { continue };
        let nf = algebra.normal_form(&AlgebraElement::from_path(ext));
        let part: Vector = nf.terms().map(|(p, x)| (TaggedPath::new(t.slot, p.clone()), x.clone())).collect();
        axpy(&Rationals, &mut out, c, &part);
    }
    out
}

impl SubmodulePresentation {
    /// The submodule generated by `generators`, which must lie in `JP`.
    pub fn generated_by(algebra: &QuiverAlgebra, top: &TopSpec, generators: Vec<Vector>) -> Result<Self> {
        let q = algebra.quiver();
        for v in &generators {
            if let Some((t, _)) = v.iter().find(|(t, _)| t.path.is_trivial()) {
                return Err(Error::NotInRadical(format!(
                    "coordinate on the generator z_{} at vertex {}",
                    t.slot + 1,
                    q.vertex_name(t.path.start())
                )));
            }
        }
        let mut pres = Self::empty(algebra, top);
        let mut queue = generators;
        while let Some(v) = queue.pop() {
            if pres.basis.insert(v.clone()) {
                for alpha in q.arrow_ids() {
                    let w = arrow_action(algebra, alpha, &v);
                    if !w.is_empty() {
                        queue.push(w);
                    }
                }
            }
        }
        Ok(pres)
    }

    /// A presentation from a spanning set that must already be a submodule.
    pub fn from_span(algebra: &QuiverAlgebra, top: &TopSpec, vectors: Vec<Vector>) -> Result<Self> {
        let closed = Self::generated_by(algebra, top, vectors.clone())?;
        let mut span = EchelonBasis::new(Rationals);
        for v in vectors {
            span.insert(v);
        }
        if span.rank() != closed.dim() {
            return Err(Error::NotSubmodule);
        }
        Ok(closed)
    }

    fn empty(algebra: &QuiverAlgebra, top: &TopSpec) -> Self {
        let q = algebra.quiver();
        let mut degrees = std::collections::BTreeMap::new();
        let mut slot_dims = Vec::new();
        for r in 0..top.slot_count() {
            let mut n = 0;
            for l in 0..=algebra.loewy_length() {
                for end in q.vertices() {
                    for p in algebra.basis(l, top.slot_vertex(r), end) {
                        degrees.insert(TaggedPath::new(r, p), l + top.degree(r));
                        n += 1;
                    }
                }
            }
            slot_dims.push(n);
        }
        SubmodulePresentation {
            slot_count: top.slot_count(),
            slot_dims,
            degrees,
            basis: EchelonBasis::new(Rationals),
        }
    }

    fn with_basis(&self, vectors: impl IntoIterator<Item = Vector>) -> Self {
        let mut basis = EchelonBasis::new(Rationals);
        for v in vectors {
            basis.insert(v);
        }
        SubmodulePresentation {
            slot_count: self.slot_count,
            slot_dims: self.slot_dims.clone(),
            degrees: self.degrees.clone(),
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rank()
    }

    pub fn dim_p(&self) -> usize {
        self.slot_dims.iter().sum()
    }

    /// `dim P/C`.
    pub fn quotient_dim(&self) -> usize {
        self.dim_p() - self.dim()
    }

    pub fn slot_count(&self) -> usize {
        self.slot_count
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.rows().cloned().collect()
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.basis.contains(v)
    }

    pub fn same_subspace(&self, other: &SubmodulePresentation) -> bool {
        self.dim() == other.dim() && other.basis.rows().all(|v| self.contains(v))
    }

    /// Every homogeneous component of every basis vector lies in `C`.
    pub fn is_homogeneous(&self) -> bool {
        self.basis.rows().all(|v| {
            let degrees: BTreeSet<usize> = v.keys().map(|t| self.degrees[t]).collect();
            degrees.iter().all(|&e| {
                let part: Vector = v.iter().filter(|(t, _)| self.degrees[*t] == e).map(|(t, c)| (t.clone(), c.clone())).collect();
                self.contains(&part)
            })
        })
    }

    fn project(v: &Vector, slots: &BTreeSet<usize>) -> Vector {
        v.iter().filter(|(t, _)| slots.contains(&t.slot)).map(|(t, c)| (t.clone(), c.clone())).collect()
    }

    /// `C ∩ P_A` where `P_A` is the sum of the slots in `slots`.
    fn intersection_with(&self, slots: &BTreeSet<usize>) -> Vec<Vector> {
        let rows = self.basis_vectors();
        let outside: BTreeSet<usize> = (0..self.slot_count).filter(|r| !slots.contains(r)).collect();
        let projected: Vec<Vector> = rows.iter().map(|v| Self::project(v, &outside)).collect();
        kernel(&Rationals, &projected)
            .into_iter()
            .map(|combo| {
                let mut v = Vector::new();
                for (c, row) in combo.iter().zip(&rows) {
                    if !c.is_zero() {
                        axpy(&Rationals, &mut v, c, row);
                    }
                }
                v
            })
            .collect()
    }

    fn intersection_dim(&self, slots: &BTreeSet<usize>) -> usize {
        let mut b = EchelonBasis::new(Rationals);
        for v in self.intersection_with(slots) {
            b.insert(v);
        }
        b.rank()
    }

    /// `C = (C ∩ P_A) ⊕ (C ∩ P_{A^c})`.
    pub fn splits_along(&self, slots: &BTreeSet<usize>) -> bool {
        let rest: BTreeSet<usize> = (0..self.slot_count).filter(|r| !slots.contains(r)).collect();
        self.intersection_dim(slots) + self.intersection_dim(&rest) == self.dim()
    }

    /// Whether `Λ z_s` splits off: `C = (C ∩ Λz_s) ⊕ (C ∩ Ker π_s)`.
    pub fn splits_off(&self, slot: usize) -> bool {
        self.splits_along(&BTreeSet::from([slot]))
    }
}

/// `C′ = π_s(C) ⊕ (C ∩ Ker π_s)` for the slot `s`.
pub fn top_degeneration(c: &SubmodulePresentation, slot: usize) -> Result<SubmodulePresentation> {
    if slot >= c.slot_count {
        return Err(Error::SlotOutOfRange(slot + 1));
    }
    let only = BTreeSet::from([slot]);
    let rest: BTreeSet<usize> = (0..c.slot_count).filter(|&r| r != slot).collect();
    let mut vectors: Vec<Vector> = c
        .basis_vectors()
        .iter()
        .map(|v| SubmodulePresentation::project(v, &only))
        .filter(|v| !v.is_empty())
        .collect();
    vectors.extend(c.intersection_with(&rest));
    let out = c.with_basis(vectors);
    debug_assert_eq!(out.dim(), c.dim());
    Ok(out)
}

/// If `C = ⊕_r (C ∩ Λ z_r)`, the partition `d_r = dim Λz_r / (C ∩ Λz_r)`.
pub fn slot_split_summands(c: &SubmodulePresentation) -> Option<Vec<usize>> {
    let parts: Vec<usize> = (0..c.slot_count).map(|r| c.intersection_dim(&BTreeSet::from([r]))).collect();
    if parts.iter().sum::<usize>() != c.dim() {
        return None;
    }
    Some(parts.iter().zip(&c.slot_dims).map(|(k, n)| n - k).collect())
}

/// The finest partition of the slots into blocks `B` with
/// `C = ⊕_B (C ∩ P_B)`. Valid partitions are closed under meets, so this is
/// the meet of all valid two-block splits.
pub fn finest_slot_partition(c: &SubmodulePresentation) -> Vec<BTreeSet<usize>> {
    let t = c.slot_count;
    let mut blocks: Vec<BTreeSet<usize>> = vec![(0..t).collect()];
    // subsets containing slot 0 enumerate every bipartition once
    for mask in 0..(1u64 << t.saturating_sub(1)) {
        let a: BTreeSet<usize> = std::iter::once(0)
            .chain((1..t).filter(|r| mask >> (r - 1) & 1 == 1))
            .collect();
        if a.len() == t || !c.splits_along(&a) {
            continue;
        }
        blocks = blocks
            .into_iter()
            .flat_map(|b| {
                let inside: BTreeSet<usize> = b.intersection(&a).copied().collect();
                let outside: BTreeSet<usize> = b.difference(&a).copied().collect();
                [inside, outside].into_iter().filter(|s| !s.is_empty())
            })
            .collect();
    }
    blocks.sort();
    blocks
}

/// Number of slot-aligned summands of `P/C`.
pub fn summand_count(c: &SubmodulePresentation) -> usize {
    finest_slot_partition(c).len()
}

/// A class of dimension partitions `(d_1, …, d_𝔱)` together with the factor
/// problems `(e(r), h(r), d_r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionClass {
    pub dims: Vec<usize>,
    pub factors: Vec<(VertexId, usize, usize)>,
}

/// Partitions of `d` into `𝔱` positive parts, up to permuting slots that
/// share both vertex and degree. Representatives are sorted ascending within
/// each group of interchangeable slots.
pub fn partition_classes(top: &TopSpec, d: usize) -> Vec<PartitionClass> {
    let t = top.slot_count();
    if d < t {
        return Vec::new();
    }
    let key = |r: usize| (top.slot_vertex(r), top.degree(r));
    let mut out = Vec::new();
    let mut dims = vec![0; t];
    fn rec(
        r: usize,
        left: usize,
        dims: &mut Vec<usize>,
        key: &dyn Fn(usize) -> (VertexId, usize),
        out: &mut Vec<Vec<usize>>,
    ) {
        let t = dims.len();
        if r == t {
            if left == 0 {
                out.push(dims.clone());
            }
            return;
        }
        // keep room for one dimension per remaining slot
        let max = left - (t - r - 1);
        let mut min = 1;
        if let Some(prev) = (0..r).rev().find(|&s| key(s) == key(r)) {
            min = dims[prev];
        }
        for x in min..=max {
            dims[r] = x;
            rec(r + 1, left - x, dims, key, out);
        }
    }
    let mut raw = Vec::new();
    rec(0, d, &mut dims, &key, &mut raw);
    for dims in raw {
        let factors = (0..t).map(|r| (top.slot_vertex(r), top.degree(r), dims[r])).collect();
        out.push(PartitionClass { dims, factors });
    }
    out
}
