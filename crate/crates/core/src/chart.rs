//! Normal forms in chart modules and chart ideals.
//!
//! Over the polynomial ring `K[X]` on the chart coordinates, every element of
//! `P ⊗ K[X]` is congruent to a unique combination of skeleton paths. The
//! congruence is generated by the substitutions `αp ↦ Σ X_{αp,q} q` for
//! critical pairs `(α, p)`. Reducing the left ideal generators this way gives
//! the polynomials cutting out the chart.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::algebra::{AlgebraElement, QuiverAlgebra, TopSpec};
use crate::error::{Error, Result};
use crate::field::Rationals;
use crate::linalg::EchelonBasis;
use crate::poly::{Monomial, MultiPoly};
use crate::quiver::{ArrowId, Path};
use crate::skeleta::{critical_pairs, CriticalPair, Skeleton, TaggedPath, VariableIndex};

/// Substitution budget per reduction call.
pub const MAX_REDUCTION_STEPS: usize = 1_000_000;

/// An element of `P ⊗ K[X]`: slot-tagged paths with polynomial coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SlotElement {
    terms: BTreeMap<TaggedPath, MultiPoly>,
}

impl SlotElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `x · z_slot` for an element `x` of the path algebra.
    pub fn from_algebra(x: &AlgebraElement, slot: usize) -> Self {
        let mut out = Self::zero();
        for (p, c) in x.terms() {
            out.add_term(TaggedPath::new(slot, p.clone()), MultiPoly::constant(c.clone()));
        }
        out
    }

    pub fn add_term(&mut self, t: TaggedPath, c: MultiPoly) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&t) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(t, sum);
        }
    }

    pub fn add(&self, other: &SlotElement) -> SlotElement {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &MultiPoly) -> SlotElement {
        let mut out = Self::zero();
        for (t, x) in &self.terms {
            out.add_term(t.clone(), x.mul(c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TaggedPath, &MultiPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, t: &TaggedPath) -> MultiPoly {
        self.terms.get(t).cloned().unwrap_or_default()
    }
}

/// A reduced element: support inside the skeleton.
pub type NormalForm = SlotElement;

enum Step {
    Done,
    Vanishes,
    Substitute { pair: usize, left: Path },
}

/// Reduction engine for one skeleton and one choice of coordinates.
pub struct Reducer<'a> {
    algebra: &'a QuiverAlgebra,
    top: &'a TopSpec,
    skeleton: &'a Skeleton,
    pairs: Vec<CriticalPair>,
    variables: VariableIndex,
    pair_of: HashMap<(usize, Path, ArrowId), usize>,
    memo: HashMap<TaggedPath, NormalForm>,
    steps: usize,
}

impl<'a> Reducer<'a> {
    pub fn new(algebra: &'a QuiverAlgebra, top: &'a TopSpec, skeleton: &'a Skeleton, graded: bool) -> Self {
        let pairs = critical_pairs(algebra, top, skeleton);
        let variables = VariableIndex::new(&pairs, graded);
        let pair_of = pairs
            .iter()
            .enumerate()
            .map(|(i, c)| ((c.slot, c.base.clone(), c.arrow), i))
            .collect();
        Reducer {
            algebra,
            top,
            skeleton,
            pairs,
            variables,
            pair_of,
            memo: HashMap::new(),
            steps: 0,
        }
    }

    pub fn pairs(&self) -> &[CriticalPair] {
        &self.pairs
    }

    pub fn variables(&self) -> &VariableIndex {
        &self.variables
    }

    pub fn skeleton(&self) -> &Skeleton {
        self.skeleton
    }

    fn check_term(&self, t: &TaggedPath) -> Result<()> {
        if t.slot >= self.top.slot_count() {
            return Err(Error::SlotOutOfRange(t.slot + 1));
        }
        if t.path.start() != self.top.slot_vertex(t.slot) {
            return Err(Error::WrongStartVertex {
                slot: t.slot + 1,
                path: self.algebra.quiver().format_path(&t.path),
            });
        }
        Ok(())
    }

    fn classify(&self, t: &TaggedPath) -> Step {
        let q = self.algebra.quiver();
        let k = self.skeleton.longest_right_subpath(t.slot, &t.path, q);
        if k == t.path.len() {
            return Step::Done;
        }
        if k + 1 > self.algebra.loewy_length() {
            return Step::Vanishes;
        }
        let base = t.path.right_subpath(k, q);
        let alpha = t.path.arrows()[k];
        let pair = self.pair_of[&(t.slot, base, alpha)];
        Step::Substitute {
            pair,
            left: t.path.left_factor(k + 1, q),
        }
    }

    /// Terms produced by one substitution at the critical pair `pair`.
    fn substitute(&self, pair: usize, left: &Path) -> Vec<(TaggedPath, MultiPoly)> {
        let q = self.algebra.quiver();
        self.variables
            .for_pair(pair)
            .iter()
            .map(|&v| {
                let target = &self.variables.get(v).target;
                let path = q.compose(left, &target.path).expect("target ends where the arrow ends");
                (TaggedPath::new(target.slot, path), MultiPoly::var(v))
            })
            .collect()
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > MAX_REDUCTION_STEPS {
            return Err(Error::ReductionDiverged(MAX_REDUCTION_STEPS));
        }
        Ok(())
    }

    /// Normal form of a single tagged path, memoized.
    pub fn reduce_path(&mut self, t: &TaggedPath) -> Result<NormalForm> {
        self.check_term(t)?;
        self.steps = 0;
        self.path_form(t)
    }

    fn path_form(&mut self, t: &TaggedPath) -> Result<NormalForm> {
        if let Some(nf) = self.memo.get(t) {
            return Ok(nf.clone());
        }
        let nf = match self.classify(t) {
            Step::Done => {
                let mut nf = NormalForm::zero();
                nf.add_term(t.clone(), MultiPoly::one());
                nf
            }
            Step::Vanishes => NormalForm::zero(),
            Step::Substitute { pair, left } => {
                self.tick()?;
                let mut nf = NormalForm::zero();
                for (next, x) in self.substitute(pair, &left) {
                    let sub = self.path_form(&next)?;
                    nf = nf.add(&sub.scale(&x));
                }
                nf
            }
        };
        self.memo.insert(t.clone(), nf.clone());
        Ok(nf)
    }

    /// Normal form of an arbitrary element, by linearity over path forms.
    pub fn reduce(&mut self, x: &SlotElement) -> Result<NormalForm> {
        let mut out = NormalForm::zero();
        for (t, c) in x.terms() {
            self.check_term(t)?;
            self.steps = 0;
            out = out.add(&self.path_form(t)?.scale(c));
        }
        Ok(out)
    }

    /// Worklist reduction without memoization. `choose(n)` picks which of the
    /// `n` pending terms is expanded next; like terms are merged whenever a
    /// pending term is pushed.
    pub fn reduce_with(&self, x: &SlotElement, choose: &mut dyn FnMut(usize) -> usize) -> Result<NormalForm> {
        let mut pending: Vec<(TaggedPath, MultiPoly)> = Vec::new();
        for (t, c) in x.terms() {
            self.check_term(t)?;
            push_merged(&mut pending, t.clone(), c.clone());
        }
        let mut out = NormalForm::zero();
        let mut steps = 0;
        while !pending.is_empty() {
            let i = choose(pending.len()) % pending.len();
            let (t, c) = pending.swap_remove(i);
            match self.classify(&t) {
                Step::Done => out.add_term(t, c),
                Step::Vanishes => {}
                Step::Substitute { pair, left } => {
                    steps += 1;
                    if steps > MAX_REDUCTION_STEPS {
                        return Err(Error::ReductionDiverged(MAX_REDUCTION_STEPS));
                    }
                    for (next, v) in self.substitute(pair, &left) {
                        push_merged(&mut pending, next, c.mul(&v));
                    }
                }
            }
        }
        Ok(out)
    }
}

fn push_merged(pending: &mut Vec<(TaggedPath, MultiPoly)>, t: TaggedPath, c: MultiPoly) {
    if let Some(i) = pending.iter().position(|(s, _)| *s == t) {
        let sum = pending[i].1.add(&c);
        if sum.is_zero() {
            pending.swap_remove(i);
        } else {
            pending[i].1 = sum;
        }
    } else if !c.is_zero() {
        pending.push((t, c));
    }
}

/// Defining equations of one chart.
#[derive(Clone, Debug)]
pub struct ChartIdeal {
    pub skeleton: Skeleton,
    pub pairs: Vec<CriticalPair>,
    pub variables: VariableIndex,
    /// Monic, deduplicated, sorted generators.
    pub generators: Vec<MultiPoly>,
}

impl ChartIdeal {
    pub fn is_graded(&self) -> bool {
        self.variables.is_graded()
    }
}

/// The chart ideal of `skeleton`: every coefficient of the normal forms of
/// `ρ z_r` for `ρ` in the left ideal generating set and `e(r) = start(ρ)`.
/// With `graded` the coordinates are restricted to the degree-matching
/// targets.
pub fn chart_ideal(algebra: &QuiverAlgebra, top: &TopSpec, skeleton: &Skeleton, graded: bool) -> Result<ChartIdeal> {
    let mut reducer = Reducer::new(algebra, top, skeleton, graded);
    let mut generators: BTreeSet<MultiPoly> = BTreeSet::new();
    for rho in algebra.left_ideal_generators(top) {
        let starts = rho.start_vertices();
        for r in (0..top.slot_count()).filter(|&r| starts.contains(&top.slot_vertex(r))) {
            let nf = reducer.reduce(&SlotElement::from_algebra(&rho, r))?;
            for (_, c) in nf.terms() {
                generators.insert(c.monic());
            }
        }
    }
    Ok(ChartIdeal {
        skeleton: skeleton.clone(),
        pairs: reducer.pairs,
        variables: reducer.variables,
        generators: generators.into_iter().collect(),
    })
}

/// Sets every ungraded coordinate without a graded counterpart to zero and
/// renumbers the rest in the graded numbering. Returns the specialized
/// generators (monic, deduplicated, zeros dropped).
pub fn specialize_to_graded(ungraded: &ChartIdeal, graded: &VariableIndex) -> Vec<MultiPoly> {
    let map: BTreeMap<usize, MultiPoly> = ungraded
        .variables
        .variables()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let image = graded.find(v.pair, &v.target).map(MultiPoly::var).unwrap_or_default();
            (i, image)
        })
        .collect();
    ungraded
        .generators
        .iter()
        .map(|g| g.substitute(&map))
        .filter(|g| !g.is_zero())
        .map(|g| g.monic())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Summary of a chart: coordinate count, generators, and the affine-space
/// test obtained by eliminating the linear generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartReport {
    pub variable_count: usize,
    pub generator_count: usize,
    pub linear_generators: Vec<MultiPoly>,
    /// Variables expressed through the others by the linear generators.
    pub eliminated: Vec<usize>,
    /// Nonlinear generators left after eliminating, zeros dropped.
    pub residual: Vec<MultiPoly>,
    /// A nonzero constant is among the (reduced) linear generators.
    pub empty: bool,
}

impl ChartReport {
    pub fn free_count(&self) -> usize {
        self.variable_count - self.eliminated.len()
    }

    /// The chart is cut out by linear equations alone.
    pub fn is_affine_space(&self) -> bool {
        !self.empty && self.residual.is_empty()
    }
}

pub fn chart_report(chart: &ChartIdeal) -> ChartReport {
    let linear: Vec<MultiPoly> = chart.generators.iter().filter(|g| g.is_linear()).cloned().collect();
    let mut basis: EchelonBasis<Monomial, Rationals> = EchelonBasis::new(Rationals);
    for g in &linear {
        basis.insert(g.to_sparse());
    }
    let empty = basis.is_pivot(&Monomial::one());
    let mut eliminated = Vec::new();
    let mut map = BTreeMap::new();
    for row in basis.rows() {
        let (lead, _) = row.iter().next_back().expect("rows are nonzero");
        let Some(&(v, 1)) = lead.exponents().first() else { continue };
        eliminated.push(v);
        let rest = MultiPoly::from_terms(
            row.iter()
                .filter(|(m, _)| *m != lead)
                .map(|(m, c)| (m.clone(), -c.clone())),
        );
        map.insert(v, rest);
    }
    eliminated.sort_unstable();
    let residual = chart
        .generators
        .iter()
        .filter(|g| !g.is_linear())
        .map(|g| g.substitute(&map))
        .filter(|g| !g.is_zero())
        .map(|g| g.monic())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    ChartReport {
        variable_count: chart.variables.len(),
        generator_count: chart.generators.len(),
        linear_generators: linear,
        eliminated,
        residual,
        empty,
    }
}

/// Human-readable description of variable `i`, e.g. `X[b*a -> c^(1)]`.
pub fn describe_variable(algebra: &QuiverAlgebra, chart: &ChartIdeal, i: usize) -> String {
    let q = algebra.quiver();
    let v = chart.variables.get(i);
    let pair = &chart.pairs[v.pair];
    format!(
        "X[{}^({}) -> {}]",
        q.format_path(&pair.extended),
        pair.slot + 1,
        v.target.format(q)
    )
}
