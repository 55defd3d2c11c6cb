//! Independent checks of chart ideals through explicit representations.
//!
//! A chart point fixes the scalars `c_{αp,q}`, hence the action of every
//! arrow on the basis `{p^(r)}` of `M = P/C`. The point lies on the chart
//! exactly when this representation satisfies the relations of the algebra.
//! None of the code here goes through path reduction.

pub mod degeneration;

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraElement, QuiverAlgebra, TopSpec};
use crate::chart::ChartIdeal;
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::linalg::{dense_to_sparse, EchelonBasis};
use crate::poly::{Monomial, MultiPoly};
use crate::quiver::{ArrowId, Path};
use crate::skeleta::{SemisimpleSequence, TaggedPath};

/// Arrow matrices on the skeleton basis. `matrices[a][i][j]` is the
/// coefficient of basis vector `i` in the image of basis vector `j`.
#[derive(Clone, Debug)]
pub struct Representation<F: Field> {
    field: F,
    basis: Vec<TaggedPath>,
    vertex_count: usize,
    matrices: Vec<Vec<Vec<F::Elem>>>,
}

pub fn instantiate<F: Field>(
    algebra: &QuiverAlgebra,
    chart: &ChartIdeal,
    point: &[F::Elem],
    field: &F,
) -> Result<Representation<F>> {
    if point.len() != chart.variables.len() {
        return Err(Error::PointArity {
            expected: chart.variables.len(),
            got: point.len(),
        });
    }
    let q = algebra.quiver();
    let basis = chart.skeleton.tagged_paths();
    let index: HashMap<&TaggedPath, usize> = basis.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let pair_of: HashMap<(usize, &Path, ArrowId), usize> = chart
        .pairs
        .iter()
        .enumerate()
        .map(|(i, c)| ((c.slot, &c.base, c.arrow), i))
        .collect();
    let d = basis.len();
    let mut matrices = Vec::new();
    for alpha in q.arrow_ids() {
        let mut m = vec![vec![field.zero(); d]; d];
        for (j, t) in basis.iter().enumerate() {
            let Some(ext) = q.extend(&t.path, alpha) else { continue };
            let moved = TaggedPath::new(t.slot, ext);
            if let Some(&i) = index.get(&moved) {
                m[i][j] = field.one();
            } else if let Some(&pair) = pair_of.get(&(t.slot, &t.path, alpha)) {
                for &v in chart.variables.for_pair(pair) {
                    let i = index[&chart.variables.get(v).target];
                    m[i][j] = field.add(&m[i][j], &point[v]);
                }
            }
            // otherwise αp is longer than the Loewy length and acts as zero
        }
        matrices.push(m);
    }
    Ok(Representation {
        field: field.clone(),
        basis,
        vertex_count: q.vertex_count(),
        matrices,
    })
}

impl<F: Field> Representation<F> {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[TaggedPath] {
        &self.basis
    }

    pub fn matrix(&self, alpha: ArrowId) -> &[Vec<F::Elem>] {
        &self.matrices[alpha.0]
    }

    pub fn apply_arrow(&self, alpha: ArrowId, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let m = &self.matrices[alpha.0];
        m.iter()
            .map(|row| row.iter().zip(v).fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b))))
            .collect()
    }

    /// Action of a path, arrows applied in traversal order. The trivial path
    /// `e_i` projects onto the basis vectors ending at `i`.
    pub fn apply_path(&self, p: &Path, v: &[F::Elem]) -> Vec<F::Elem> {
        let mut w: Vec<F::Elem> = v
            .iter()
            .zip(&self.basis)
            .map(|(x, t)| if t.path.end() == p.start() { x.clone() } else { self.field.zero() })
            .collect();
        for &a in p.arrows() {
            w = self.apply_arrow(a, &w);
        }
        w
    }

    pub fn apply(&self, x: &AlgebraElement, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        let f = &self.field;
        let mut out = vec![f.zero(); v.len()];
        for (p, c) in x.terms() {
            let c = f.from_rational(c)?;
            for (o, w) in out.iter_mut().zip(self.apply_path(p, v)) {
                *o = f.add(o, &f.mul(&c, &w));
            }
        }
        Ok(out)
    }

    pub fn unit_vector(&self, i: usize) -> Vec<F::Elem> {
        let mut v = vec![self.field.zero(); self.dimension()];
        v[i] = self.field.one();
        v
    }

    /// Index of the generator vector `z_r`, that is of `e(r)^(r)`.
    pub fn generator_index(&self, slot: usize) -> usize {
        self.basis
            .iter()
            .position(|t| t.slot == slot && t.path.is_trivial())
            .expect("every slot holds its trivial path")
    }

    /// Radical layering `(J^l M / J^{l+1} M)_l` as vertex multiplicities.
    pub fn radical_layering(&self) -> SemisimpleSequence {
        let f = &self.field;
        let vertex_of: Vec<usize> = self.basis.iter().map(|t| t.path.end().0).collect();
        // spanning sets of vertex-homogeneous vectors
        let mut current: Vec<(usize, Vec<F::Elem>)> =
            (0..self.dimension()).map(|i| (vertex_of[i], self.unit_vector(i))).collect();
        let mut dims: Vec<Vec<usize>> = Vec::new();
        for _ in 0..=self.dimension() {
            let mut bases: Vec<EchelonBasis<usize, F>> =
                (0..self.vertex_count).map(|_| EchelonBasis::new(f.clone())).collect();
            let mut reduced = Vec::new();
            for (vx, v) in current {
                if bases[vx].insert(dense_to_sparse(f, &v)) {
                    reduced.push((vx, v));
                }
            }
            let ranks: Vec<usize> = bases.iter().map(EchelonBasis::rank).collect();
            let empty = ranks.iter().all(|&r| r == 0);
            dims.push(ranks);
            if empty {
                break;
            }
            current = Vec::new();
            for (_, v) in &reduced {
                for a in 0..self.matrices.len() {
                    let w = self.apply_arrow(ArrowId(a), v);
                    if let Some(first) = w.iter().position(|x| !f.is_zero(x)) {
                        current.push((vertex_of[first], w));
                    }
                }
            }
        }
        let layers: Vec<Vec<usize>> = dims
            .windows(2)
            .map(|w| w[0].iter().zip(&w[1]).map(|(a, b)| a - b).collect())
            .collect();
        SemisimpleSequence::new(layers, self.vertex_count)
    }

    /// Every arrow raises the effective degree of basis vectors by exactly one.
    pub fn is_graded(&self, top: &TopSpec) -> bool {
        let degree: Vec<usize> = self.basis.iter().map(|t| t.effective_degree(top)).collect();
        self.matrices.iter().all(|m| {
            m.iter().enumerate().all(|(i, row)| {
                row.iter()
                    .enumerate()
                    .all(|(j, x)| self.field.is_zero(x) || degree[i] == degree[j] + 1)
            })
        })
    }
}

/// First failure found while checking a representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// An ideal generator acts nonzero on a basis vector.
    Relation { relation: String, basis_vector: String },
    /// An element of the left ideal generating set is nonzero on `z_r`.
    LeftIdeal { element: String, slot: usize },
}

impl Witness {
    pub fn describe(&self) -> String {
        match self {
            Witness::Relation { relation, basis_vector } => format!("{relation} acts nonzero on {basis_vector}"),
            Witness::LeftIdeal { element, slot } => format!("{element} is nonzero on z_{}", slot + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    /// First generator of the ideal acting nonzero, if any.
    pub relation_witness: Option<Witness>,
    /// First element of the left ideal generating set nonzero on a generator.
    pub left_ideal_witness: Option<Witness>,
}

impl RelationCheck {
    pub fn satisfied(&self) -> bool {
        self.relation_witness.is_none() && self.left_ideal_witness.is_none()
    }

    /// The two criteria must agree on any chart representation.
    pub fn consistent(&self) -> bool {
        self.relation_witness.is_none() == self.left_ideal_witness.is_none()
    }
}

/// Evaluates every ideal generator on every basis vector, and every element of
/// the left ideal generating set on the vectors `z_r`.
pub fn satisfies_relations<F: Field>(
    rep: &Representation<F>,
    algebra: &QuiverAlgebra,
    top: &TopSpec,
) -> Result<RelationCheck> {
    let q = algebra.quiver();
    let f = &rep.field;
    let mut relation_witness = None;
    'outer: for g in algebra.ideal_generators() {
        for i in 0..rep.dimension() {
            if rep.apply(g, &rep.unit_vector(i))?.iter().any(|x| !f.is_zero(x)) {
                relation_witness = Some(Witness::Relation {
                    relation: g.format(q),
                    basis_vector: rep.basis[i].format(q),
                });
                break 'outer;
            }
        }
    }
    let mut left_ideal_witness = None;
    'outer: for rho in algebra.left_ideal_generators(top) {
        let starts = rho.start_vertices();
        for r in (0..top.slot_count()).filter(|&r| starts.contains(&top.slot_vertex(r))) {
            let z = rep.unit_vector(rep.generator_index(r));
            if rep.apply(&rho, &z)?.iter().any(|x| !f.is_zero(x)) {
                left_ideal_witness = Some(Witness::LeftIdeal {
                    element: rho.format(q),
                    slot: r,
                });
                break 'outer;
            }
        }
    }
    Ok(RelationCheck {
        relation_witness,
        left_ideal_witness,
    })
}

/// Whether all chart generators vanish at the point.
pub fn in_variety(chart: &ChartIdeal, field: &PrimeField, point: &[u64]) -> Result<bool> {
    for g in &chart.generators {
        if !field.is_zero(&g.eval(field, point)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    Uniform,
    /// Variables are fixed one at a time, solving generators that became
    /// linear, so that many samples land on the variety.
    Solved,
    /// Like `Solved`, with free choices set to zero half of the time.
    SparseSolved,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub point: Vec<u64>,
    pub in_variety: bool,
    pub witness: Option<Witness>,
    pub note: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleReport {
    pub trials: usize,
    pub on_variety: usize,
    pub counterexamples: Vec<Counterexample>,
    /// Points whose radical layering differs from the skeleton's.
    pub layering_mismatches: Vec<Vec<u64>>,
    /// Points whose representation is not graded (graded charts only).
    pub grading_failures: Vec<Vec<u64>>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty() && self.layering_mismatches.is_empty() && self.grading_failures.is_empty()
    }
}

/// Samples `trials` points of `A^N(F_p)` and checks
/// `point ∈ V(chart) ⟺ representation satisfies the relations`, together
/// with the radical layering of every sampled representation.
pub fn membership_vs_oracle(
    algebra: &QuiverAlgebra,
    top: &TopSpec,
    chart: &ChartIdeal,
    field: &PrimeField,
    trials: usize,
    seed: u64,
) -> Result<OracleReport> {
    let expected_layering = chart.skeleton.length_layering(algebra.quiver().vertex_count());
    let mut report = OracleReport {
        trials,
        ..OracleReport::default()
    };
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mode = match trial % 3 {
            0 => Sampling::Uniform,
            1 => Sampling::Solved,
            _ => Sampling::SparseSolved,
        };
        let point = sample_point(chart, field, mode, &mut rng)?;
        let on = in_variety(chart, field, &point)?;
        let rep = instantiate(algebra, chart, &point, field)?;
        let check = satisfies_relations(&rep, algebra, top)?;
        if on {
            report.on_variety += 1;
        }
        if on != check.satisfied() || !check.consistent() {
            let note = if !check.consistent() {
                "relation check and left ideal check disagree".to_string()
            } else if on {
                "point on the chart variety but the representation violates a relation".to_string()
            } else {
                "representation satisfies the relations but the point is off the chart variety".to_string()
            };
            report.counterexamples.push(Counterexample {
                point: point.clone(),
                in_variety: on,
                witness: check.relation_witness.or(check.left_ideal_witness),
                note,
            });
        }
        if rep.radical_layering() != expected_layering {
            report.layering_mismatches.push(point.clone());
        }
        if chart.is_graded() && !rep.is_graded(top) {
            report.grading_failures.push(point);
        }
    }
    Ok(report)
}

/// Draws one point according to `mode`.
pub fn sample_point(chart: &ChartIdeal, field: &PrimeField, mode: Sampling, rng: &mut impl Rng) -> Result<Vec<u64>> {
    let n = chart.variables.len();
    let p = field.modulus();
    let draw = |rng: &mut dyn rand::RngCore| -> u64 {
        if mode == Sampling::SparseSolved && rng.gen_bool(0.5) {
            0
        } else {
            rng.gen_range(0..p)
        }
    };
    if mode == Sampling::Uniform {
        return Ok((0..n).map(|_| rng.gen_range(0..p)).collect());
    }
    let mut assigned: BTreeMap<usize, u64> = BTreeMap::new();
    while assigned.len() < n {
        let mut solved = false;
        for g in &chart.generators {
            let rest = partial_eval(g, field, &assigned)?;
            if rest.keys().all(|m| m.degree() == 0) || rest.keys().any(|m| m.degree() > 1) {
                continue;
            }
            // linear in the unassigned variables: fix all but one, solve for it
            let mut vars: Vec<usize> = rest.keys().filter(|m| m.degree() == 1).map(|m| m.exponents()[0].0).collect();
            let target = vars.remove(rng.gen_range(0..vars.len()));
            let mut constant = rest.get(&Monomial::one()).copied().unwrap_or(0);
            for v in vars {
                let x = draw(rng);
                assigned.insert(v, x);
                constant = field.add(&constant, &field.mul(&rest[&Monomial::var(v)], &x));
            }
            let a = rest[&Monomial::var(target)];
            let value = field.div(&field.neg(&constant), &a).expect("leading coefficient is nonzero");
            assigned.insert(target, value);
            solved = true;
            break;
        }
        if !solved {
            let free: Vec<usize> = (0..n).filter(|v| !assigned.contains_key(v)).collect();
            let v = free[rng.gen_range(0..free.len())];
            let x = draw(rng);
            assigned.insert(v, x);
        }
    }
    Ok((0..n).map(|v| assigned[&v]).collect())
}

/// Substitutes the assigned values, keeping the other variables symbolic.
fn partial_eval(g: &MultiPoly, field: &PrimeField, assigned: &BTreeMap<usize, u64>) -> Result<BTreeMap<Monomial, u64>> {
    let mut out: BTreeMap<Monomial, u64> = BTreeMap::new();
    for (m, c) in g.terms() {
        let mut coeff = field.from_rational(c)?;
        let mut kept = Vec::new();
        for &(v, e) in m.exponents() {
            match assigned.get(&v) {
                Some(x) => {
                    for _ in 0..e {
                        coeff = field.mul(&coeff, x);
                    }
                }
                None => kept.push((v, e)),
            }
        }
        let key = Monomial::from_exponents(kept);
        let sum = field.add(out.get(&key).unwrap_or(&0), &coeff);
        if sum == 0 {
            out.remove(&key);
        } else {
            out.insert(key, sum);
        }
    }
    Ok(out)
}
