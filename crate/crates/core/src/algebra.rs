//! Path algebras modulo homogeneous relations.
//!
//! [`QuiverAlgebra`] computes, degree by degree, the span of the two-sided
//! ideal `I` inside the space of paths of each length. The degree-`l` part
//! of the ideal is `arrows·I_{l-1} + I_{l-1}·arrows` plus the generators of
//! degree `l`, so a single pass over the degrees suffices. Paths that are
//! not pivots of the resulting echelon form make up a basis of each graded
//! piece `Λ_l`.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{format_rational, parse_rational, Field, Rationals};
use crate::linalg::{EchelonBasis, SparseVec};
use crate::quiver::{ArrowId, Path, Quiver, VertexId};

/// Degree beyond which an algebra without an explicit bound is declared
/// infinite dimensional.
pub const MAX_UNBOUNDED_DEGREE: usize = 48;

/// A finite formal sum of paths with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct AlgebraElement {
    terms: BTreeMap<Path, BigRational>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_path(p: Path) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(p, BigRational::one());
        AlgebraElement { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Path, BigRational)>) -> Self {
        let mut e = Self::zero();
        for (p, c) in terms {
            e.add_term(p, c);
        }
        e
    }

    pub fn add_term(&mut self, p: Path, c: BigRational) {
        let entry = self.terms.entry(p.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Common path length, if all terms share one.
    pub fn degree(&self) -> Option<usize> {
        let mut lens = self.terms.keys().map(Path::len);
        let first = lens.next()?;
        lens.all(|l| l == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn start_vertices(&self) -> BTreeSet<VertexId> {
        self.terms.keys().map(Path::start).collect()
    }

    /// `self · q` (first `q`, then `self`); terms that do not compose vanish.
    pub fn times_path(&self, quiver: &Quiver, q: &Path) -> AlgebraElement {
        AlgebraElement::from_terms(
            self.terms
                .iter()
                .filter_map(|(p, c)| quiver.compose(p, q).map(|pq| (pq, c.clone()))),
        )
    }

    /// `p · self`.
    pub fn path_times(&self, quiver: &Quiver, p: &Path) -> AlgebraElement {
        AlgebraElement::from_terms(
            self.terms
                .iter()
                .filter_map(|(q, c)| quiver.compose(p, q).map(|pq| (pq, c.clone()))),
        )
    }

    /// Splits into the components `e_j · self · e_i`.
    pub fn vertex_components(&self) -> Vec<AlgebraElement> {
        let mut parts: BTreeMap<(VertexId, VertexId), AlgebraElement> = BTreeMap::new();
        for (p, c) in &self.terms {
            parts
                .entry((p.start(), p.end()))
                .or_default()
                .add_term(p.clone(), c.clone());
        }
        parts.into_values().collect()
    }

    pub fn to_sparse<F: Field>(&self, field: &F) -> Result<SparseVec<Path, F::Elem>> {
        let mut v = SparseVec::new();
        for (p, c) in &self.terms {
            let e = field.from_rational(c)?;
            if !field.is_zero(&e) {
                v.insert(p.clone(), e);
            }
        }
        Ok(v)
    }

    pub fn format(&self, quiver: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (p, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &BigRational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if !abs.is_one() {
                out.push_str(&format_rational(&abs));
                out.push('*');
            }
            out.push_str(&quiver.format_path(p));
        }
        out
    }
}

/// Parses a relation such as `b1*a0 - b0*a1` or `2*b*a + 1/3 c*a`.
///
/// Parse errors report a 1-based column inside `text`.
pub fn parse_relation(quiver: &Quiver, text: &str) -> Result<AlgebraElement> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0usize;
    let err = |pos: usize, message: String| Error::Parse {
        line: 1,
        column: pos + 1,
        message,
    };
    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    let mut element = AlgebraElement::zero();
    let mut first = true;
    loop {
        skip_ws(&mut pos);
        if pos >= chars.len() {
            if first {
                return Err(err(pos, "empty relation".into()));
            }
            break;
        }
        let mut sign = BigRational::one();
        if chars[pos] == '+' || chars[pos] == '-' {
            if chars[pos] == '-' {
                sign = -sign;
            }
            pos += 1;
            skip_ws(&mut pos);
        } else if !first {
            return Err(err(pos, format!("expected `+` or `-`, found `{}`", chars[pos])));
        }
        first = false;
        // optional rational coefficient
        let mut coeff = BigRational::one();
        if pos < chars.len() && chars[pos].is_ascii_digit() {
            let begin = pos;
            while pos < chars.len() && (chars[pos].is_ascii_digit() || chars[pos] == '/') {
                pos += 1;
            }
            let lit: String = chars[begin..pos].iter().collect();
            coeff = parse_rational(&lit).ok_or_else(|| err(begin, format!("bad coefficient `{lit}`")))?;
            skip_ws(&mut pos);
            if pos < chars.len() && chars[pos] == '*' {
                pos += 1;
                skip_ws(&mut pos);
            }
        }
        // one or more arrow / idempotent names joined by `*`
        let mut factors: Vec<(usize, String)> = Vec::new();
        loop {
            skip_ws(&mut pos);
            let begin = pos;
            while pos < chars.len() && (chars[pos].is_alphanumeric() || chars[pos] == '_') {
                pos += 1;
            }
            if begin == pos {
                let found = chars.get(pos).map(|c| format!("`{c}`")).unwrap_or_else(|| "end of input".into());
                return Err(err(pos, format!("expected an arrow name, found {found}")));
            }
            factors.push((begin, chars[begin..pos].iter().collect()));
            skip_ws(&mut pos);
            if pos < chars.len() && chars[pos] == '*' {
                pos += 1;
            } else {
                break;
            }
        }
        let joined = factors.iter().map(|(_, f)| f.as_str()).collect::<Vec<_>>().join("*");
        let path = quiver.parse_path(&joined).map_err(|e| {
            let at = match &e {
                Error::UnknownArrow(name) | Error::UnknownVertex(name) => factors
                    .iter()
                    .find(|(_, f)| f == name || f.strip_prefix("e_") == Some(name.as_str()))
                    .map(|(p, _)| *p)
                    .unwrap_or(factors[0].0),
                _ => factors[0].0,
            };
            err(at, e.to_string())
        })?;
        element.add_term(path, sign * coeff);
    }
    Ok(element)
}

/// The semisimple top `T = ⊕ S_i^{t_i}` with its generator slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopSpec {
    multiplicities: Vec<usize>,
    slots: Vec<VertexId>,
    degree_vector: Vec<usize>,
}

impl TopSpec {
    /// Slots are laid out vertex by vertex, each vertex repeated `t_i` times.
    pub fn new(multiplicities: Vec<usize>, degree_vector: Option<Vec<usize>>) -> Result<Self> {
        let slots: Vec<VertexId> = multiplicities
            .iter()
            .enumerate()
            .flat_map(|(i, &t)| std::iter::repeat_n(VertexId(i), t))
            .collect();
        if slots.is_empty() {
            return Err(Error::EmptyTop);
        }
        let degree_vector = match degree_vector {
            Some(h) if h.len() != slots.len() => {
                return Err(Error::DegreeVectorLength {
                    expected: slots.len(),
                    got: h.len(),
                })
            }
            Some(h) => h,
            None => vec![0; slots.len()],
        };
        Ok(TopSpec {
            multiplicities,
            slots,
            degree_vector,
        })
    }

    pub fn simple(quiver: &Quiver, v: VertexId) -> Self {
        let mut m = vec![0; quiver.vertex_count()];
        m[v.0] = 1;
        TopSpec::new(m, None).expect("one slot")
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    pub fn slot_vertex(&self, r: usize) -> VertexId {
        self.slots[r]
    }

    pub fn slots(&self) -> &[VertexId] {
        &self.slots
    }

    pub fn degree(&self, r: usize) -> usize {
        self.degree_vector[r]
    }

    pub fn degree_vector(&self) -> &[usize] {
        &self.degree_vector
    }

    pub fn is_degree_zero(&self) -> bool {
        self.degree_vector.iter().all(|&h| h == 0)
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.slots.iter().copied().collect()
    }
}

/// `Λ = KQ/I` together with its graded structure.
#[derive(Clone, Debug)]
pub struct QuiverAlgebra {
    quiver: Quiver,
    relations: Vec<AlgebraElement>,
    generators: Vec<AlgebraElement>,
    loewy: usize,
    ideal: Vec<EchelonBasis<Path, Rationals>>,
}

fn validate_relations(relations: &[AlgebraElement]) -> Result<()> {
    for (index, r) in relations.iter().enumerate() {
        if r.is_zero() {
            return Err(Error::ZeroRelation { index });
        }
        if let Some((p, _)) = r.terms().find(|(p, _)| p.len() < 2) {
            return Err(Error::NonAdmissibleRelation { index, length: p.len() });
        }
        if !r.is_homogeneous() {
            return Err(Error::InhomogeneousRelation { index });
        }
    }
    Ok(())
}

/// Relation components plus, under truncation, all paths of length `bound + 1`.
fn ideal_generators(quiver: &Quiver, relations: &[AlgebraElement], bound: Option<usize>) -> Vec<AlgebraElement> {
    let mut gens: Vec<AlgebraElement> = relations.iter().flat_map(|r| r.vertex_components()).collect();
    if let Some(b) = bound {
        gens.extend(quiver.paths_of_length(b + 1).into_iter().map(AlgebraElement::from_path));
    }
    gens.sort();
    gens.dedup();
    gens
}

/// Degree-wise spans of the ideal over `field`, up to the first degree whose
/// quotient vanishes (that degree included).
fn ideal_by_degree<F: Field>(
    quiver: &Quiver,
    generators: &[AlgebraElement],
    field: &F,
) -> Result<Vec<EchelonBasis<Path, F>>> {
    let mut by_degree: BTreeMap<usize, Vec<&AlgebraElement>> = BTreeMap::new();
    for g in generators {
        by_degree.entry(g.degree().expect("generators are homogeneous")).or_default().push(g);
    }
    let arrows: Vec<Path> = quiver.arrow_ids().map(|a| quiver.arrow_path(a)).collect();
    let mut spans: Vec<EchelonBasis<Path, F>> = Vec::new();
    for l in 0..=MAX_UNBOUNDED_DEGREE + 1 {
        let mut span = EchelonBasis::new(field.clone());
        if let Some(prev) = spans.last() {
            for row in prev.rows() {
                for a in &arrows {
                    for product in [left_mul(quiver, a, row, field), right_mul(quiver, row, a, field)] {
                        if !product.is_empty() {
                            span.insert(product);
                        }
                    }
                }
            }
        }
        for g in by_degree.get(&l).into_iter().flatten() {
            span.insert(g.to_sparse(field)?);
        }
        let total = quiver.paths_of_length(l).len();
        let done = span.rank() == total;
        spans.push(span);
        if done {
            return Ok(spans);
        }
    }
    Err(Error::InfiniteDimensional(MAX_UNBOUNDED_DEGREE))
}

fn left_mul<F: Field>(quiver: &Quiver, p: &Path, v: &SparseVec<Path, F::Elem>, _field: &F) -> SparseVec<Path, F::Elem> {
    v.iter()
        .filter_map(|(q, c)| quiver.compose(p, q).map(|pq| (pq, c.clone())))
        .collect()
}

fn right_mul<F: Field>(quiver: &Quiver, v: &SparseVec<Path, F::Elem>, q: &Path, _field: &F) -> SparseVec<Path, F::Elem> {
    v.iter()
        .filter_map(|(p, c)| quiver.compose(p, q).map(|pq| (pq, c.clone())))
        .collect()
}

/// Dimensions `dim Λ_l` for `l = 0..=L`, computed over an arbitrary field.
pub fn graded_dimensions<F: Field>(
    quiver: &Quiver,
    relations: &[AlgebraElement],
    loewy_bound: Option<usize>,
    field: &F,
) -> Result<Vec<usize>> {
    validate_relations(relations)?;
    let gens = ideal_generators(quiver, relations, loewy_bound);
    let spans = ideal_by_degree(quiver, &gens, field)?;
    let mut dims: Vec<usize> = spans
        .iter()
        .enumerate()
        .map(|(l, s)| quiver.paths_of_length(l).len() - s.rank())
        .collect();
    dims.pop();
    Ok(dims)
}

impl QuiverAlgebra {
    /// Builds `Λ = KQ/I`. When `loewy_bound` is given, all paths of length
    /// `bound + 1` are added to the ideal.
    pub fn new(quiver: Quiver, relations: Vec<AlgebraElement>, loewy_bound: Option<usize>) -> Result<Self> {
        validate_relations(&relations)?;
        let generators = ideal_generators(&quiver, &relations, loewy_bound);
        let mut ideal = ideal_by_degree(&quiver, &generators, &Rationals)?;
        ideal.pop();
        let loewy = ideal.len() - 1;
        Ok(QuiverAlgebra {
            quiver,
            relations,
            generators,
            loewy,
            ideal,
        })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[AlgebraElement] {
        &self.relations
    }

    /// Vertex components of the relations plus any truncation paths; these
    /// generate `I` as a two-sided ideal.
    pub fn ideal_generators(&self) -> &[AlgebraElement] {
        &self.generators
    }

    /// Loewy length `L`: the largest `l` with `Λ_l ≠ 0`.
    pub fn loewy_length(&self) -> usize {
        self.loewy
    }

    pub fn dim_degree(&self, l: usize) -> usize {
        if l > self.loewy {
            return 0;
        }
        self.quiver.paths_of_length(l).len() - self.ideal[l].rank()
    }

    pub fn dimension(&self) -> usize {
        (0..=self.loewy).map(|l| self.dim_degree(l)).sum()
    }

    /// Paths of length `l` whose residues form a basis of `Λ_l`.
    pub fn basis_paths(&self, l: usize) -> Vec<Path> {
        if l > self.loewy {
            return Vec::new();
        }
        self.quiver
            .paths_of_length(l)
            .into_iter()
            .filter(|p| !self.ideal[l].is_pivot(p))
            .collect()
    }

    /// Basis of `e_end Λ_l e_start`.
    pub fn basis(&self, l: usize, start: VertexId, end: VertexId) -> Vec<Path> {
        self.basis_paths(l)
            .into_iter()
            .filter(|p| p.start() == start && p.end() == end)
            .collect()
    }

    /// `true` when the path is nonzero in `Λ`.
    pub fn survives(&self, p: &Path) -> bool {
        p.len() <= self.loewy && !self.ideal[p.len()].contains(&AlgebraElement::from_path(p.clone()).to_sparse(&Rationals).expect("rational"))
    }

    /// `true` when the element lies in `I`.
    pub fn in_ideal(&self, x: &AlgebraElement) -> bool {
        self.normal_form(x).is_zero()
    }

    /// Expresses an element in the basis of standard paths.
    pub fn normal_form(&self, x: &AlgebraElement) -> AlgebraElement {
        let mut by_len: BTreeMap<usize, SparseVec<Path, BigRational>> = BTreeMap::new();
        for (p, c) in x.terms() {
            by_len.entry(p.len()).or_default().insert(p.clone(), c.clone());
        }
        let mut out = AlgebraElement::zero();
        for (l, v) in by_len {
            if l > self.loewy {
                continue;
            }
            for (p, c) in self.ideal[l].reduce(v) {
                out.add_term(p, c);
            }
        }
        out
    }

    /// A finite generating set of the left ideal `Σ_r I e(r)`: every product
    /// `g·q` of a generator with a path of total length at most `L`, together
    /// with all paths of length `L + 1`, restricted to paths starting at a
    /// vertex of the top.
    pub fn left_ideal_generators(&self, top: &TopSpec) -> Vec<AlgebraElement> {
        let q = &self.quiver;
        let mut out: BTreeSet<AlgebraElement> = BTreeSet::new();
        for v in top.vertices() {
            let paths = q.enumerate_paths(v, self.loewy + 1);
            for g in &self.generators {
                let Some(glen) = g.degree() else { continue };
                if glen > self.loewy {
                    continue;
                }
                let gstart = *g.start_vertices().iter().next().expect("nonzero generator");
                for p in paths.iter().filter(|p| p.end() == gstart && p.len() + glen <= self.loewy) {
                    let gp = g.times_path(q, p);
                    if !gp.is_zero() {
                        out.insert(gp);
                    }
                }
            }
            for p in paths.iter().filter(|p| p.len() == self.loewy + 1) {
                out.insert(AlgebraElement::from_path(p.clone()));
            }
        }
        out.into_iter().collect()
    }

    pub fn arrow_ids(&self) -> impl Iterator<Item = ArrowId> + '_ {
        self.quiver.arrow_ids()
    }
}
