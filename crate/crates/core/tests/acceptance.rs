//! Acceptance suite. Prints one PASS/FAIL line per criterion and fails if
//! any criterion fails. Every comparison is exact; the sampling parameters
//! below are the pinned tolerances.

// the tolerance constants may be zero
#![allow(clippy::absurd_extreme_comparisons)]

mod common;

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quiver_moduli::chart::{chart_ideal, chart_report, specialize_to_graded, ChartIdeal, Reducer};
use quiver_moduli::field::PrimeField;
use quiver_moduli::oracle::degeneration::{slot_split_summands, summand_count, top_degeneration, SubmodulePresentation};
use quiver_moduli::oracle::membership_vs_oracle;
use quiver_moduli::pipeline::variable_infos;
use quiver_moduli::poly::{ideal_contains, ideals_equal, parse_polynomial, MultiPoly};
use quiver_moduli::problem::{realize_variety, LevelConvention, Problem};
use quiver_moduli::quiver::Path;
use quiver_moduli::skeleta::{enumerate_skeleta, Skeleton};

/// Prime for oracle sampling.
const PRIME: u64 = 32003;
/// Sampled points per skeleton.
const TRIALS: usize = 100;
/// Randomized algebras in the oracle criterion.
const RANDOM_ALGEBRAS: usize = 4;
/// Randomized elements in the reduction criterion.
const REDUCTION_ELEMENTS: usize = 1200;
/// Allowed counterexamples / violations.
const ALLOWED_FAILURES: usize = 0;
const SEED: u64 = 20_261_015;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// The chain skeleton `{e_0, a{j}_0, a{j}_1*a{j}_0, ...}` of a realization problem.
fn chain_skeleton(problem: &Problem, j: usize) -> Skeleton {
    let q = problem.algebra.quiver();
    let mut paths = vec![Path::trivial(q.vertex("0").unwrap())];
    for r in 0..problem.dimension - 1 {
        let a = q.arrow_by_name(&format!("a{j}_{r}")).unwrap();
        let next = q.extend(paths.last().unwrap(), a).unwrap();
        paths.push(next);
    }
    Skeleton::new(&problem.algebra, &problem.top, problem.dimension, vec![paths]).unwrap()
}

/// `(i, r)` for the coordinate attached to arrow `a{i}_{r}`.
fn level_coordinates(problem: &Problem, chart: &ChartIdeal) -> Vec<(usize, usize)> {
    variable_infos(problem, chart)
        .iter()
        .map(|v| {
            let (i, r) = v.arrow[1..].split_once('_').unwrap();
            (i.parse().unwrap(), r.parse().unwrap())
        })
        .collect()
}

fn max_degree(polys: &[MultiPoly]) -> u32 {
    polys.iter().filter_map(MultiPoly::degree).max().unwrap_or(1).max(1)
}

fn criterion_1() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in [1usize, 2] {
        for d in [2usize, 3] {
            let (_, problem) = common::load(&format!("projective_n{n}_d{d}.json"));
            let sk = chain_skeleton(&problem, 0);
            let chart = chart_ideal(&problem.algebra, &problem.top, &sk, true).unwrap();
            let coords = level_coordinates(&problem, &chart);
            let index: BTreeMap<(usize, usize), usize> = coords.iter().enumerate().map(|(k, &c)| (c, k)).collect();
            let expected: Vec<MultiPoly> = (1..=n)
                .flat_map(|i| (1..d).map(move |r| (i, r)))
                .map(|(i, r)| MultiPoly::var(index[&(i, r)]).sub(&MultiPoly::var(index[&(i, 0)])))
                .collect();
            let linear: Vec<MultiPoly> = chart.generators.iter().filter(|g| g.is_linear()).cloned().collect();
            let forward = expected.iter().all(|e| ideal_contains(&linear, e, 1));
            let bound = max_degree(&chart.generators);
            let backward = chart.generators.iter().all(|g| ideal_contains(&expected, g, bound));
            let report = chart_report(&chart);
            let sizes = chart.variables.len() == d * n;
            let mut symmetric = true;
            for j in 0..=n {
                let c = chart_ideal(&problem.algebra, &problem.top, &chain_skeleton(&problem, j), true).unwrap();
                let r = chart_report(&c);
                symmetric &= r.is_affine_space() && r.free_count() == n && c.variables.len() == d * n;
            }
            let this = forward && backward && sizes && report.is_affine_space() && report.free_count() == n && symmetric;
            ok &= this;
            notes.push(format!(
                "n={n} d={d}: |N|={} free={} E⊆I(deg 1)={forward} I⊆E(deg {bound})={backward} {} symmetric charts affine={symmetric}",
                chart.variables.len(),
                report.free_count(),
                n + 1
            ));
        }
    }
    outcome(ok, notes.join("; "))
}

fn criterion_2() -> Outcome {
    let (_, problem) = common::load("grassmannian_2_4.json");
    let skeleta = enumerate_skeleta(&problem.algebra, &problem.top, problem.dimension, problem.layering.as_ref());
    let mut ok = skeleta.len() == 6;
    let mut sizes = Vec::new();
    for sk in &skeleta {
        let chart = chart_ideal(&problem.algebra, &problem.top, sk, true).unwrap();
        let ungraded = chart_ideal(&problem.algebra, &problem.top, sk, false).unwrap();
        ok &= chart.variables.len() == 4 && chart.generators.is_empty();
        ok &= ungraded.variables.len() == 4 && ungraded.generators.is_empty();
        sizes.push(chart.variables.len());
    }
    outcome(ok, format!("{} skeleta, |N| per chart {:?}, all ideals empty (graded and ungraded)", skeleta.len(), sizes))
}

fn conic_ideal(convention: LevelConvention) -> (Problem, ChartIdeal) {
    let names: Vec<String> = (0..3).map(|i| format!("X{i}")).collect();
    let f = parse_polynomial("X0*X2 - X1^2", &names).unwrap();
    let spec = realize_variety(&[f], 2, 2, convention).unwrap();
    let problem = spec.build().unwrap();
    let sk = chain_skeleton(&problem, 0);
    let chart = chart_ideal(&problem.algebra, &problem.top, &sk, true).unwrap();
    (problem, chart)
}

fn criterion_3() -> Outcome {
    let (problem, chart) = conic_ideal(LevelConvention::AscendingFromTop);
    let (bundled_spec, _) = common::load("conic.json");
    let same_file = bundled_spec.relations == realize_variety(
        &[parse_polynomial("X0*X2 - X1^2", &["X0".into(), "X1".into(), "X2".into()]).unwrap()],
        2,
        2,
        LevelConvention::AscendingFromTop,
    )
    .unwrap()
    .relations;
    // X_i^r ↦ x_i, with x_i numbered by i
    let identify: BTreeMap<usize, MultiPoly> = level_coordinates(&problem, &chart)
        .into_iter()
        .enumerate()
        .map(|(k, (i, _))| (k, MultiPoly::var(100 + i)))
        .collect();
    let linear_forced = chart
        .generators
        .iter()
        .filter(|g| g.is_linear())
        .all(|g| g.substitute(&identify).is_zero());
    let images: Vec<MultiPoly> = chart
        .generators
        .iter()
        .map(|g| g.substitute(&identify))
        .filter(|g| !g.is_zero())
        .collect();
    let target = MultiPoly::var(102).sub(&MultiPoly::var(101).pow(2));
    let contains = ideal_contains(&images, &target, 2);
    let bound = max_degree(&images);
    let contained = images.iter().all(|g| ideal_contains(std::slice::from_ref(&target), g, bound));
    let (_, other) = conic_ideal(LevelConvention::DescendingFromTop);
    let conventions_agree = ideals_equal(&chart.generators, &other.generators, 3);
    let ok = same_file && linear_forced && contains && contained && conventions_agree && !images.is_empty();
    outcome(
        ok,
        format!(
            "x2 - x1^2 ∈ I={contains}, I ⊆ <x2 - x1^2> (deg {bound})={contained}, linear generators are X_i^r - X_i^0={linear_forced}, level conventions agree={conventions_agree}"
        ),
    )
}

struct OracleTally {
    charts: usize,
    points: usize,
    on_variety: usize,
    counterexamples: usize,
    layering_mismatches: usize,
    grading_failures: usize,
    degree_zero_layering_agrees: bool,
}

fn oracle_sweep() -> (OracleTally, Vec<String>) {
    let field = PrimeField::new(PRIME).unwrap();
    let mut problems: Vec<(String, Problem)> = common::bundled().into_iter().map(|(n, _, p)| (n, p)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut random = 0;
    while random < RANDOM_ALGEBRAS {
        if let Some((_, p)) = common::random_problem(&mut rng, 12) {
            random += 1;
            problems.push((format!("random #{random}"), p));
        }
    }
    let mut tally = OracleTally {
        charts: 0,
        points: 0,
        on_variety: 0,
        counterexamples: 0,
        layering_mismatches: 0,
        grading_failures: 0,
        degree_zero_layering_agrees: true,
    };
    let mut failures = Vec::new();
    for (name, problem) in &problems {
        let skeleta = enumerate_skeleta(&problem.algebra, &problem.top, problem.dimension, problem.layering.as_ref());
        for (k, sk) in skeleta.iter().enumerate() {
            let chart = chart_ideal(&problem.algebra, &problem.top, sk, true).unwrap();
            let r = membership_vs_oracle(&problem.algebra, &problem.top, &chart, &field, TRIALS, SEED + k as u64).unwrap();
            tally.charts += 1;
            tally.points += r.trials;
            tally.on_variety += r.on_variety;
            tally.counterexamples += r.counterexamples.len();
            tally.layering_mismatches += r.layering_mismatches.len();
            tally.grading_failures += r.grading_failures.len();
            if problem.top.is_degree_zero() {
                let n = problem.algebra.quiver().vertex_count();
                tally.degree_zero_layering_agrees &= sk.layering(&problem.top, n) == sk.length_layering(n);
            }
            if !r.passed() {
                failures.push(format!("{name} chart {}: {:?}", k + 1, r.counterexamples.first()));
            }
        }
    }
    (tally, failures)
}

fn criteria_4_and_8() -> (Outcome, Outcome) {
    let (t, failures) = oracle_sweep();
    let c4 = outcome(
        t.counterexamples <= ALLOWED_FAILURES && t.grading_failures == 0,
        format!(
            "{} charts over F_{PRIME} ({} bundled problems + {RANDOM_ALGEBRAS} random algebras), {} points, {} on the chart variety, {} counterexamples, {} non-graded representations{}",
            t.charts,
            common::bundled().len(),
            t.points,
            t.on_variety,
            t.counterexamples,
            t.grading_failures,
            if failures.is_empty() { String::new() } else { format!(", first: {}", failures[0]) }
        ),
    );
    let c8 = outcome(
        t.layering_mismatches <= ALLOWED_FAILURES && t.degree_zero_layering_agrees,
        format!(
            "{} sampled representations, {} radical layerings differ from the skeleton layering; skeleton layering equals length layering for degree-zero tops: {}",
            t.points, t.layering_mismatches, t.degree_zero_layering_agrees
        ),
    );
    (c4, c8)
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let bundled = common::bundled();
    let mut elements = 0;
    let mut violations: BTreeMap<&str, usize> = BTreeMap::new();
    'outer: loop {
        for (_, _, problem) in &bundled {
            let skeleta = enumerate_skeleta(&problem.algebra, &problem.top, problem.dimension, problem.layering.as_ref());
            let sk = &skeleta[rng.gen_range(0..skeleta.len())];
            for graded in [true, false] {
                let mut reducer = Reducer::new(&problem.algebra, &problem.top, sk, graded);
                let nvars = reducer.variables().len();
                let max_h = problem.top.degree_vector().iter().copied().max().unwrap_or(0);
                for _ in 0..10 {
                    let degree = rng.gen_range(0..=problem.algebra.loewy_length() + 1 + max_h);
                    let x = common::random_homogeneous(&mut rng, problem, degree, nvars);
                    let y = common::random_homogeneous(&mut rng, problem, degree, nvars);
                    let a = common::small_poly(&mut rng, nvars);
                    let b = common::small_poly(&mut rng, nvars);
                    let rx = reducer.reduce(&x).unwrap();
                    let ry = reducer.reduce(&y).unwrap();
                    let combo = x.scale(&a).add(&y.scale(&b));
                    if reducer.reduce(&combo).unwrap() != rx.scale(&a).add(&ry.scale(&b)) {
                        *violations.entry("linearity").or_default() += 1;
                    }
                    if reducer.reduce(&rx).unwrap() != rx || rx.terms().any(|(t, _)| !sk.contains(t.slot, &t.path)) {
                        *violations.entry("idempotence").or_default() += 1;
                    }
                    if graded && rx.terms().any(|(t, _)| t.effective_degree(&problem.top) != degree) {
                        *violations.entry("degree").or_default() += 1;
                    }
                    let mut seed = rng.gen::<u64>();
                    let shuffled = reducer
                        .reduce_with(&x, &mut |n| {
                            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                            (seed >> 33) as usize % n
                        })
                        .unwrap();
                    if shuffled != rx {
                        *violations.entry("shuffle").or_default() += 1;
                    }
                    elements += 2;
                    if elements >= REDUCTION_ELEMENTS {
                        break 'outer;
                    }
                }
            }
        }
    }
    let total: usize = violations.values().sum();
    outcome(
        elements >= REDUCTION_ELEMENTS && total <= ALLOWED_FAILURES,
        format!("{elements} random homogeneous elements (graded and ungraded reducers), violations {violations:?}"),
    )
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    let mut charts = 0;
    let mut notes = Vec::new();
    for (name, _, problem) in common::bundled() {
        let skeleta = enumerate_skeleta(&problem.algebra, &problem.top, problem.dimension, problem.layering.as_ref());
        let mut bad = 0;
        for sk in &skeleta {
            let graded = chart_ideal(&problem.algebra, &problem.top, sk, true).unwrap();
            let ungraded = chart_ideal(&problem.algebra, &problem.top, sk, false).unwrap();
            let special = specialize_to_graded(&ungraded, &graded.variables);
            let bound = max_degree(&graded.generators).max(max_degree(&special));
            let both_ways = ideals_equal(&graded.generators, &special, bound);
            if !both_ways {
                bad += 1;
            }
            charts += 1;
        }
        ok &= bad == 0;
        if bad > 0 {
            notes.push(format!("{name}: {bad} mismatches"));
        }
    }
    outcome(ok, format!("{charts} charts, specialized ungraded ideal = graded ideal by two-way membership {}", notes.join(", ")))
}

fn criterion_7() -> Outcome {
    let (_, problem) = common::load("kronecker.json");
    let text = std::fs::read_to_string(common::problems_dir().join("kronecker_submodule.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let q = problem.algebra.quiver();
    let vectors = value["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| {
            let terms: Vec<_> = g
                .as_array()
                .unwrap()
                .iter()
                .map(|t| {
                    let mut x = quiver_moduli::algebra::AlgebraElement::zero();
                    let c = t.get("coeff").and_then(|c| c.as_str()).unwrap_or("1");
                    x.add_term(
                        q.parse_path(t["path"].as_str().unwrap()).unwrap(),
                        quiver_moduli::field::parse_rational(c).unwrap(),
                    );
                    (t["slot"].as_u64().unwrap() as usize - 1, x)
                })
                .collect();
            quiver_moduli::oracle::degeneration::vector_from_terms(&problem.algebra, &problem.top, &terms).unwrap()
        })
        .collect();
    let c = SubmodulePresentation::from_span(&problem.algebra, &problem.top, vectors).unwrap();
    let degenerated = top_degeneration(&c, 0).unwrap();
    let before = summand_count(&c);
    let after = summand_count(&degenerated);
    let split = slot_split_summands(&degenerated);
    let ok = c.quotient_dim() == problem.dimension
        && slot_split_summands(&c).is_none()
        && degenerated.dim() == c.dim()
        && degenerated.splits_off(0)
        && split.is_some()
        && after > before
        && degenerated.is_homogeneous();
    outcome(
        ok,
        format!(
            "dim P/C = {}, dim C = {} -> dim C' = {}, C' splits at slot 1: {}, partition {:?}, summands {before} -> {after}",
            c.quotient_dim(),
            c.dim(),
            degenerated.dim(),
            degenerated.splits_off(0),
            split
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let start = Instant::now();
    let (c4, c8) = criteria_4_and_8();
    let results = vec![
        ("1", "projective space charts", criterion_1()),
        ("2", "Grassmannian Gr(2,4)", criterion_2()),
        ("3", "conic realization", criterion_3()),
        ("4", "oracle equivalence", c4),
        ("5", "reduction properties", criterion_5()),
        ("6", "graded/ungraded specialization", criterion_6()),
        ("7", "top degeneration", criterion_7()),
        ("8", "layering consistency", c8),
    ];
    // written to the raw handle so the lines survive test output capture
    let mut err = std::io::stderr().lock();
    for (id, title, o) in &results {
        let _ = writeln!(err, "criterion {id} [{}] {title}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    let _ = writeln!(err, "acceptance suite finished in {:.1}s", start.elapsed().as_secs_f64());
    let failed: Vec<&str> = results.iter().filter(|(_, _, o)| !o.pass).map(|(id, _, _)| *id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
