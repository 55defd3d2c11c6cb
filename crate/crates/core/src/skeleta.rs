//! Skeleta, semisimple sequences and critical pairs.
//!
//! A skeleton assigns to every generator slot `r` a set of paths starting at
//! the slot vertex `e(r)`, closed under right subpaths. Paths are tagged by
//! their slot, so equal paths in different slots are distinct basis
//! elements. The critical pairs `(α, p^(r))` of a skeleton index the chart
//! coordinates.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{QuiverAlgebra, TopSpec};
use crate::error::{Error, Result};
use crate::quiver::{ArrowId, Path, Quiver, VertexId};

/// A path living in a given generator slot.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaggedPath {
    pub slot: usize,
    pub path: Path,
}

impl TaggedPath {
    pub fn new(slot: usize, path: Path) -> Self {
        TaggedPath { slot, path }
    }

    /// Path length shifted by the slot's generation degree.
    pub fn effective_degree(&self, top: &TopSpec) -> usize {
        self.path.len() + top.degree(self.slot)
    }

    pub fn format(&self, quiver: &Quiver) -> String {
        format!("{}^({})", quiver.format_path(&self.path), self.slot + 1)
    }
}

/// Multiplicity matrix `d_{li}`: `layers[l][i]` counts copies of `S_i` in
/// layer `l`. Trailing zero layers are dropped, so equal sequences compare
/// equal regardless of the padding they were built with.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SemisimpleSequence {
    layers: Vec<Vec<usize>>,
}

impl SemisimpleSequence {
    pub fn new(mut layers: Vec<Vec<usize>>, vertex_count: usize) -> Self {
        for layer in &mut layers {
            layer.resize(vertex_count, 0);
        }
        while layers.last().is_some_and(|l| l.iter().all(|&m| m == 0)) {
            layers.pop();
        }
        SemisimpleSequence { layers }
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn multiplicity(&self, layer: usize, vertex: VertexId) -> usize {
        self.layers.get(layer).and_then(|l| l.get(vertex.0)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.layers.iter().flatten().sum()
    }

    /// Checks the sequence against the top and the graded pieces of `P`:
    /// the total is `d`, each `d_{li}` fits inside `P_{li}`, and for a top
    /// generated in degree zero the first layer is `T` itself.
    pub fn validate(&self, algebra: &QuiverAlgebra, top: &TopSpec, d: usize) -> Result<()> {
        if self.total() != d {
            return Err(Error::Invalid(format!("layering has total dimension {}, expected {d}", self.total())));
        }
        if top.is_degree_zero() {
            let first: Vec<usize> = self.layers.first().cloned().unwrap_or_default();
            let mut expected = top.multiplicities().to_vec();
            expected.resize(first.len().max(expected.len()), 0);
            let mut first = first;
            first.resize(expected.len(), 0);
            if first != expected {
                return Err(Error::Invalid("first layer of the layering differs from the top".into()));
            }
        }
        for (l, layer) in self.layers.iter().enumerate() {
            for (i, &m) in layer.iter().enumerate() {
                let available = slice_dimension(algebra, top, l, VertexId(i));
                if m > available {
                    return Err(Error::Invalid(format!(
                        "layer {l} asks for {m} copies of vertex {} but P has only {available}",
                        algebra.quiver().vertex_name(VertexId(i))
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `dim P_{li}`: paths `p z_r` of effective degree `l` ending at `e_i`.
pub fn slice_dimension(algebra: &QuiverAlgebra, top: &TopSpec, l: usize, vertex: VertexId) -> usize {
    (0..top.slot_count())
        .filter(|&r| top.degree(r) <= l)
        .map(|r| algebra.basis(l - top.degree(r), top.slot_vertex(r), vertex).len())
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Skeleton {
    slots: Vec<BTreeSet<Path>>,
}

impl Skeleton {
    /// Validates a candidate family of path sets.
    pub fn new(algebra: &QuiverAlgebra, top: &TopSpec, d: usize, slots: Vec<Vec<Path>>) -> Result<Self> {
        if slots.len() != top.slot_count() {
            return Err(Error::SlotCount {
                expected: top.slot_count(),
                got: slots.len(),
            });
        }
        let q = algebra.quiver();
        let sets: Vec<BTreeSet<Path>> = slots.into_iter().map(|s| s.into_iter().collect()).collect();
        for (r, set) in sets.iter().enumerate() {
            let e = top.slot_vertex(r);
            if !set.contains(&Path::trivial(e)) {
                return Err(Error::NotSubpathClosed {
                    slot: r + 1,
                    path: set.iter().next().map(|p| q.format_path(p)).unwrap_or_else(|| "(empty slot)".into()),
                    missing: q.format_path(&Path::trivial(e)),
                });
            }
            for p in set {
                let shown = || q.format_path(p);
                if p.start() != e {
                    return Err(Error::WrongStartVertex { slot: r + 1, path: shown() });
                }
                if p.len() > algebra.loewy_length() {
                    return Err(Error::PathTooLong {
                        slot: r + 1,
                        path: shown(),
                        loewy: algebra.loewy_length(),
                    });
                }
                if !p.is_trivial() {
                    let parent = p.right_subpath(p.len() - 1, q);
                    if !set.contains(&parent) {
                        return Err(Error::NotSubpathClosed {
                            slot: r + 1,
                            path: shown(),
                            missing: q.format_path(&parent),
                        });
                    }
                }
                if !algebra.survives(p) {
                    return Err(Error::PathInIdeal { slot: r + 1, path: shown() });
                }
            }
        }
        let size: usize = sets.iter().map(BTreeSet::len).sum();
        if size != d {
            return Err(Error::SkeletonSize { expected: d, got: size });
        }
        Ok(Skeleton { slots: sets })
    }

    /// Parses slot-wise path strings (as printed by [`Quiver::format_path`]).
    pub fn parse(algebra: &QuiverAlgebra, top: &TopSpec, d: usize, slots: &[Vec<String>]) -> Result<Self> {
        let q = algebra.quiver();
        let parsed = slots
            .iter()
            .map(|s| s.iter().map(|p| q.parse_path(p)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Skeleton::new(algebra, top, d, parsed)
    }

    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    pub fn slot(&self, r: usize) -> &BTreeSet<Path> {
        &self.slots[r]
    }

    pub fn size(&self) -> usize {
        self.slots.iter().map(BTreeSet::len).sum()
    }

    pub fn contains(&self, slot: usize, p: &Path) -> bool {
        self.slots[slot].contains(p)
    }

    /// All tagged paths, slot by slot in path order. This is the basis order
    /// used by representations and normal forms.
    pub fn tagged_paths(&self) -> Vec<TaggedPath> {
        self.slots
            .iter()
            .enumerate()
            .flat_map(|(r, s)| s.iter().map(move |p| TaggedPath::new(r, p.clone())))
            .collect()
    }

    /// Length of the longest right subpath of `p` lying in slot `r`.
    pub fn longest_right_subpath(&self, slot: usize, p: &Path, quiver: &Quiver) -> usize {
        let set = &self.slots[slot];
        let mut k = 0;
        while k < p.len() && set.contains(&p.right_subpath(k + 1, quiver)) {
            k += 1;
        }
        k
    }

    /// The semisimple sequence this skeleton is compatible with, counted by
    /// effective degree `length + h(r)`.
    pub fn layering(&self, top: &TopSpec, vertex_count: usize) -> SemisimpleSequence {
        self.count_layers(vertex_count, |t| t.effective_degree(top))
    }

    /// Layering counted by plain path length. For chart points this is the
    /// radical layering of the module, also when the degree vector is nonzero.
    pub fn length_layering(&self, vertex_count: usize) -> SemisimpleSequence {
        self.count_layers(vertex_count, |t| t.path.len())
    }

    fn count_layers(&self, vertex_count: usize, degree: impl Fn(&TaggedPath) -> usize) -> SemisimpleSequence {
        let mut layers: Vec<Vec<usize>> = Vec::new();
        for t in self.tagged_paths() {
            let l = degree(&t);
            if layers.len() <= l {
                layers.resize(l + 1, vec![0; vertex_count]);
            }
            layers[l][t.path.end().0] += 1;
        }
        SemisimpleSequence::new(layers, vertex_count)
    }

    pub fn format(&self, quiver: &Quiver) -> Vec<Vec<String>> {
        self.slots
            .iter()
            .map(|s| s.iter().map(|p| quiver.format_path(p)).collect())
            .collect()
    }
}

/// Every skeleton of total size `d` (compatible with `layering` when given),
/// sorted slot by slot in path order.
pub fn enumerate_skeleta(
    algebra: &QuiverAlgebra,
    top: &TopSpec,
    d: usize,
    layering: Option<&SemisimpleSequence>,
) -> Vec<Skeleton> {
    let mut out = Vec::new();
    search(algebra, top, d, layering, &mut |s| out.push(s.clone()));
    out.sort();
    out
}

/// Number of skeleta, without materializing them.
pub fn count_skeleta(algebra: &QuiverAlgebra, top: &TopSpec, d: usize, layering: Option<&SemisimpleSequence>) -> usize {
    let mut n = 0;
    search(algebra, top, d, layering, &mut |_| n += 1);
    n
}

struct Search<'a> {
    algebra: &'a QuiverAlgebra,
    top: &'a TopSpec,
    d: usize,
    layering: Option<&'a SemisimpleSequence>,
    candidates: Vec<TaggedPath>,
    chosen: Vec<BTreeSet<Path>>,
    counts: BTreeMap<(usize, VertexId), usize>,
    size: usize,
}

fn search(
    algebra: &QuiverAlgebra,
    top: &TopSpec,
    d: usize,
    layering: Option<&SemisimpleSequence>,
    emit: &mut dyn FnMut(&Skeleton),
) {
    if d < top.slot_count() {
        return;
    }
    let q = algebra.quiver();
    let mut candidates: Vec<TaggedPath> = (0..top.slot_count())
        .flat_map(|r| {
            q.enumerate_paths(top.slot_vertex(r), algebra.loewy_length())
                .into_iter()
                .filter(|p| algebra.survives(p))
                .map(move |p| TaggedPath::new(r, p))
        })
        .collect();
    // parents strictly before children
    candidates.sort_by(|a, b| a.path.len().cmp(&b.path.len()).then(a.slot.cmp(&b.slot)).then(a.path.cmp(&b.path)));
    let mut s = Search {
        algebra,
        top,
        d,
        layering,
        candidates,
        chosen: vec![BTreeSet::new(); top.slot_count()],
        counts: BTreeMap::new(),
        size: 0,
    };
    s.step(0, emit);
}

impl Search<'_> {
    fn fits(&self, t: &TaggedPath) -> bool {
        match self.layering {
            None => true,
            Some(seq) => {
                let key = (t.effective_degree(self.top), t.path.end());
                self.counts.get(&key).copied().unwrap_or(0) < seq.multiplicity(key.0, key.1)
            }
        }
    }

    fn step(&mut self, i: usize, emit: &mut dyn FnMut(&Skeleton)) {
        if self.size == self.d {
            let skeleton = Skeleton {
                slots: self.chosen.clone(),
            };
            let matches = self
                .layering
                .is_none_or(|seq| &skeleton.layering(self.top, self.algebra.quiver().vertex_count()) == seq);
            if matches {
                emit(&skeleton);
            }
            return;
        }
        if i == self.candidates.len() || self.size + (self.candidates.len() - i) < self.d {
            return;
        }
        let t = self.candidates[i].clone();
        let q = self.algebra.quiver();
        let parent_ok = t.path.is_trivial() || self.chosen[t.slot].contains(&t.path.right_subpath(t.path.len() - 1, q));
        if parent_ok && self.fits(&t) {
            let key = (t.effective_degree(self.top), t.path.end());
            self.chosen[t.slot].insert(t.path.clone());
            *self.counts.entry(key).or_default() += 1;
            self.size += 1;
            self.step(i + 1, emit);
            self.size -= 1;
            *self.counts.get_mut(&key).expect("counted") -= 1;
            self.chosen[t.slot].remove(&t.path);
        }
        // every slot keeps its trivial path
        if !t.path.is_trivial() {
            self.step(i + 1, emit);
        }
    }
}

/// A pair `(α, p^(r))` with `αp` of length at most `L` outside `σ^(r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPair {
    pub arrow: ArrowId,
    pub slot: usize,
    pub base: Path,
    /// The path `αp`.
    pub extended: Path,
    /// `σ(α, p)`: skeleton paths at least as long as `αp` ending where `α` ends.
    pub targets: Vec<TaggedPath>,
    /// The subset of `targets` with matching effective degree.
    pub graded_targets: Vec<TaggedPath>,
}

impl CriticalPair {
    pub fn targets_for(&self, graded: bool) -> &[TaggedPath] {
        if graded {
            &self.graded_targets
        } else {
            &self.targets
        }
    }
}

pub fn critical_pairs(algebra: &QuiverAlgebra, top: &TopSpec, skeleton: &Skeleton) -> Vec<CriticalPair> {
    let q = algebra.quiver();
    let all = skeleton.tagged_paths();
    let mut out = Vec::new();
    for (r, set) in skeleton.slots.iter().enumerate() {
        for p in set {
            for alpha in q.arrows_from(p.end()) {
                let ext = q.extend(p, alpha).expect("arrow leaves the end of p");
                if ext.len() > algebra.loewy_length() || set.contains(&ext) {
                    continue;
                }
                let targets: Vec<TaggedPath> = all
                    .iter()
                    .filter(|t| t.path.len() >= ext.len() && t.path.end() == ext.end())
                    .cloned()
                    .collect();
                let degree = ext.len() + top.degree(r);
                let graded_targets = targets
                    .iter()
                    .filter(|t| t.effective_degree(top) == degree)
                    .cloned()
                    .collect();
                out.push(CriticalPair {
                    arrow: alpha,
                    slot: r,
                    base: p.clone(),
                    extended: ext,
                    targets,
                    graded_targets,
                });
            }
        }
    }
    out
}

/// A chart coordinate `X_{αp, q}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub pair: usize,
    pub target: TaggedPath,
}

/// The disjoint union `N` of the target sets over all critical pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableIndex {
    graded: bool,
    variables: Vec<Variable>,
    by_pair: Vec<Vec<usize>>,
}

impl VariableIndex {
    pub fn new(pairs: &[CriticalPair], graded: bool) -> Self {
        let mut variables = Vec::new();
        let mut by_pair = Vec::new();
        for (i, pair) in pairs.iter().enumerate() {
            let mut ids = Vec::new();
            for t in pair.targets_for(graded) {
                ids.push(variables.len());
                variables.push(Variable {
                    pair: i,
                    target: t.clone(),
                });
            }
            by_pair.push(ids);
        }
        VariableIndex {
            graded,
            variables,
            by_pair,
        }
    }

    pub fn is_graded(&self) -> bool {
        self.graded
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn get(&self, i: usize) -> &Variable {
        &self.variables[i]
    }

    /// Variable ids attached to critical pair `pair`, in target order.
    pub fn for_pair(&self, pair: usize) -> &[usize] {
        &self.by_pair[pair]
    }

    /// Position of the variable keyed by `(pair, target)`.
    pub fn find(&self, pair: usize, target: &TaggedPath) -> Option<usize> {
        self.by_pair.get(pair)?.iter().copied().find(|&v| &self.variables[v].target == target)
    }

    /// Default display name `x<k>`.
    pub fn name(i: usize) -> String {
        format!("x{i}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_relation;

    fn grassmannian_instance() -> (QuiverAlgebra, TopSpec) {
        let q = Quiver::new(
            &["1", "2"],
            &[("a", "1", "2"), ("b", "1", "2"), ("c", "1", "2"), ("d", "1", "2")],
        )
        .unwrap();
        let top = TopSpec::simple(&q, q.vertex("1").unwrap());
        (QuiverAlgebra::new(q, vec![], None).unwrap(), top)
    }

    #[test]
    fn validation_reports_each_violation() {
        let (alg, top) = grassmannian_instance();
        let s = |v: &[&str]| vec![v.iter().map(|x| x.to_string()).collect::<Vec<_>>()];
        assert!(Skeleton::parse(&alg, &top, 3, &s(&["e_1", "a", "b"])).is_ok());
        assert!(matches!(
            Skeleton::parse(&alg, &top, 3, &s(&["e_1", "a"])),
            Err(Error::SkeletonSize { expected: 3, got: 2 })
        ));
        assert!(matches!(
            Skeleton::parse(&alg, &top, 2, &s(&["a", "b"])),
            Err(Error::NotSubpathClosed { .. })
        ));
        assert!(matches!(
            Skeleton::parse(&alg, &top, 2, &s(&["e_1", "e_2"])),
            Err(Error::WrongStartVertex { .. })
        ));
    }

    #[test]
    fn missing_right_subpath_and_zero_paths_are_rejected() {
        let q = Quiver::new(&["0", "1", "2"], &[("a", "0", "1"), ("b", "1", "2")]).unwrap();
        let top = TopSpec::simple(&q, q.vertex("0").unwrap());
        let alg = QuiverAlgebra::new(q.clone(), vec![], None).unwrap();
        let s = |v: &[&str]| vec![v.iter().map(|x| x.to_string()).collect::<Vec<_>>()];
        assert!(matches!(
            Skeleton::parse(&alg, &top, 2, &s(&["e_0", "b*a"])),
            Err(Error::NotSubpathClosed { .. })
        ));
        let killed = QuiverAlgebra::new(q.clone(), vec![parse_relation(&q, "b*a").unwrap()], Some(2)).unwrap();
        assert!(matches!(
            Skeleton::parse(&killed, &top, 3, &s(&["e_0", "a", "b*a"])),
            Err(Error::PathTooLong { .. }) | Err(Error::PathInIdeal { .. })
        ));
    }

    #[test]
    fn choose_two_of_four_arrows() {
        let (alg, top) = grassmannian_instance();
        let seq = SemisimpleSequence::new(vec![vec![1, 0], vec![0, 2]], 2);
        let all = enumerate_skeleta(&alg, &top, 3, Some(&seq));
        assert_eq!(all.len(), 6);
        assert_eq!(count_skeleta(&alg, &top, 3, None), 6);
        for s in &all {
            assert_eq!(s.layering(&top, 2), seq);
        }
    }

    #[test]
    fn trivial_skeleton_when_d_equals_top() {
        let (alg, top) = grassmannian_instance();
        let all = enumerate_skeleta(&alg, &top, 1, None);
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].layering(&top, 2), SemisimpleSequence::new(vec![vec![1, 0]], 2));
        assert!(enumerate_skeleta(&alg, &top, 0, None).is_empty());
        // d exceeds dim P = 5
        assert!(enumerate_skeleta(&alg, &top, 6, None).is_empty());
    }

    #[test]
    fn critical_pairs_of_grassmannian_chart() {
        let (alg, top) = grassmannian_instance();
        let s = Skeleton::parse(&alg, &top, 3, &[vec!["e_1".into(), "a".into(), "b".into()]]).unwrap();
        let pairs = critical_pairs(&alg, &top, &s);
        assert_eq!(pairs.len(), 2);
        for p in &pairs {
            assert_eq!(p.graded_targets.len(), 2);
            assert_eq!(p.targets, p.graded_targets);
        }
        assert_eq!(VariableIndex::new(&pairs, true).len(), 4);
    }

    #[test]
    fn full_basis_has_no_critical_pairs() {
        let (alg, top) = grassmannian_instance();
        let all: Vec<String> = ["e_1", "a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let s = Skeleton::parse(&alg, &top, 5, &[all]).unwrap();
        assert!(critical_pairs(&alg, &top, &s).is_empty());
    }

    #[test]
    fn sequence_validation() {
        let (alg, top) = grassmannian_instance();
        assert!(SemisimpleSequence::new(vec![vec![1, 0], vec![0, 2]], 2).validate(&alg, &top, 3).is_ok());
        assert!(SemisimpleSequence::new(vec![vec![1, 0], vec![0, 5]], 2).validate(&alg, &top, 6).is_err());
        assert!(SemisimpleSequence::new(vec![vec![0, 1], vec![0, 2]], 2).validate(&alg, &top, 3).is_err());
    }
}
