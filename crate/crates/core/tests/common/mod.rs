#![allow(dead_code)]

use std::path::PathBuf;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use quiver_moduli::algebra::AlgebraElement;
use quiver_moduli::chart::SlotElement;
use quiver_moduli::poly::MultiPoly;
use quiver_moduli::problem::{ArrowSpec, Problem, ProblemSpec};
use quiver_moduli::quiver::Quiver;
use quiver_moduli::skeleta::{count_skeleta, TaggedPath};

pub fn problems_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems")
}

pub fn load(name: &str) -> (ProblemSpec, Problem) {
    let path = problems_dir().join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    ProblemSpec::from_json(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Every bundled problem file (the submodule description excluded).
pub fn bundled() -> Vec<(String, ProblemSpec, Problem)> {
    let mut names: Vec<String> = std::fs::read_dir(problems_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".json") && !n.contains("submodule"))
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|n| {
            let (s, p) = load(&n);
            (n, s, p)
        })
        .collect()
}

fn paths_between(q: &Quiver, len: usize) -> Vec<Vec<quiver_moduli::quiver::Path>> {
    let mut groups: std::collections::BTreeMap<_, Vec<_>> = std::collections::BTreeMap::new();
    for p in q.paths_of_length(len) {
        groups.entry((p.start(), p.end())).or_default().push(p);
    }
    groups.into_values().collect()
}

/// A random small problem: at most 4 vertices, 6 arrows, 3 homogeneous
/// relations and dimension at most 6, with between 1 and `max_skeleta`
/// skeleta. Returns `None` when the draw is unusable.
pub fn random_problem(rng: &mut impl Rng, max_skeleta: usize) -> Option<(ProblemSpec, Problem)> {
    let nv = rng.gen_range(2..=4);
    let na = rng.gen_range(2..=6);
    let vertices: Vec<String> = (0..nv).map(|v| format!("v{v}")).collect();
    let arrows: Vec<ArrowSpec> = (0..na)
        .map(|k| ArrowSpec {
            name: format!("x{k}"),
            from: vertices[rng.gen_range(0..nv)].clone(),
            to: vertices[rng.gen_range(0..nv)].clone(),
        })
        .collect();
    let triples: Vec<(&str, &str, &str)> =
        arrows.iter().map(|a| (a.name.as_str(), a.from.as_str(), a.to.as_str())).collect();
    let vs: Vec<&str> = vertices.iter().map(String::as_str).collect();
    let quiver = Quiver::new(&vs, &triples).ok()?;
    let mut relations = Vec::new();
    let mut groups = paths_between(&quiver, 2);
    groups.shuffle(rng);
    for group in groups.into_iter().take(rng.gen_range(0..=3)) {
        let monomial = group.len() == 1 || rng.gen_bool(0.3);
        let chosen: Vec<_> = if monomial {
            vec![group.choose(rng).unwrap().clone()]
        } else {
            let k = rng.gen_range(2..=group.len());
            group.choose_multiple(rng, k).cloned().collect()
        };
        let mut text = String::new();
        for (i, p) in chosen.iter().enumerate() {
            let c: i64 = if monomial { 1 } else { [-2, -1, 1, 2, 3][rng.gen_range(0..5)] };
            let sign = if c < 0 { "-" } else if i > 0 { "+" } else { "" };
            text.push_str(&format!(" {sign} {}*{}", c.abs(), quiver.format_path(p)));
        }
        relations.push(text.trim().to_string());
    }
    let slots = rng.gen_range(1..=2);
    let mut top = std::collections::BTreeMap::new();
    for _ in 0..slots {
        *top.entry(vertices[rng.gen_range(0..nv)].clone()).or_insert(0) += 1;
    }
    let degree_vector = if slots == 2 && rng.gen_bool(0.5) {
        Some(vec![0, rng.gen_range(0..=1)])
    } else {
        None
    };
    let mut spec = ProblemSpec {
        name: Some("random".into()),
        vertices,
        arrows,
        relations,
        loewy_bound: Some(rng.gen_range(2..=3)),
        top,
        degree_vector,
        dimension: 1,
        layering: None,
        notes: None,
    };
    let problem = spec.build().ok()?;
    let dim_p: usize = (0..problem.top.slot_count())
        .map(|r| {
            let e = problem.top.slot_vertex(r);
            (0..=problem.algebra.loewy_length())
                .map(|l| problem.algebra.quiver().vertices().map(|j| problem.algebra.basis(l, e, j).len()).sum::<usize>())
                .sum::<usize>()
        })
        .sum();
    let t = problem.top.slot_count();
    if dim_p <= t {
        return None;
    }
    spec.dimension = rng.gen_range(t + 1..=dim_p.min(6));
    let problem = spec.build().ok()?;
    let n = count_skeleta(&problem.algebra, &problem.top, problem.dimension, None);
    if n == 0 || n > max_skeleta {
        return None;
    }
    Some((spec, problem))
}

pub fn small_rational(rng: &mut impl Rng) -> BigRational {
    let n: i64 = rng.gen_range(-4..=4);
    let d: i64 = rng.gen_range(1..=3);
    BigRational::new(n.into(), d.into())
}

/// Random coefficient: a small rational, sometimes times a chart variable.
pub fn small_poly(rng: &mut impl Rng, variables: usize) -> MultiPoly {
    let c = MultiPoly::constant(small_rational(rng));
    if variables > 0 && rng.gen_bool(0.4) {
        c.mul(&MultiPoly::var(rng.gen_range(0..variables)))
    } else {
        c
    }
}

/// A random element of `P ⊗ K[X]` homogeneous of effective degree `degree`,
/// built from paths of the path algebra (not only standard ones).
pub fn random_homogeneous(
    rng: &mut impl Rng,
    problem: &Problem,
    degree: usize,
    variables: usize,
) -> SlotElement {
    let q = problem.algebra.quiver();
    let mut x = SlotElement::zero();
    for r in 0..problem.top.slot_count() {
        let h = problem.top.degree(r);
        if degree < h {
            continue;
        }
        let candidates: Vec<_> = q
            .enumerate_paths(problem.top.slot_vertex(r), degree - h)
            .into_iter()
            .filter(|p| p.len() == degree - h)
            .collect();
        for p in candidates {
            if rng.gen_bool(0.5) {
                x.add_term(TaggedPath::new(r, p), small_poly(rng, variables));
            }
        }
    }
    x
}

pub fn element_of(x: &AlgebraElement, slot: usize) -> SlotElement {
    SlotElement::from_algebra(x, slot)
}
