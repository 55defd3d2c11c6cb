use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use quiver_moduli::algebra::AlgebraElement;
use quiver_moduli::chart::chart_ideal;
use quiver_moduli::error::Error;
use quiver_moduli::field::{format_rational, parse_rational, PrimeField};
use quiver_moduli::oracle::degeneration::{
    finest_slot_partition, partition_classes, slot_split_summands, summand_count, top_degeneration,
    vector_from_terms, SubmodulePresentation, Vector,
};
use quiver_moduli::oracle::membership_vs_oracle;
use quiver_moduli::pipeline::{
    render_skeleton, render_text, run_pipeline, skeleta_for, summarize, variable_infos, OracleOptions, RunOptions,
};
use quiver_moduli::poly::parse_polynomial;
use quiver_moduli::problem::{parse_layering, realize_variety, LevelConvention, Problem, ProblemSpec};
use quiver_moduli::skeleta::{count_skeleta, critical_pairs, Skeleton};

#[derive(Parser)]
#[command(name = "quiver-moduli", version, about = "Affine charts of graded module varieties over bound quiver algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Emit::Text)]
    emit: Emit,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    Json,
}

#[derive(Args)]
struct Selection {
    /// Problem file (JSON).
    problem: PathBuf,
    /// Override the module dimension.
    #[arg(long)]
    dim: Option<usize>,
    /// Override the layering, e.g. '[[1,0],[0,2]]'.
    #[arg(long)]
    layering: Option<String>,
}

#[derive(Args)]
struct Grading {
    /// Use coordinates for all targets, not only the degree-matching ones.
    #[arg(long, conflicts_with = "graded")]
    ungraded: bool,
    /// Degree-matching coordinates only (the default).
    #[arg(long)]
    graded: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List the skeleta of the problem.
    Skeleta {
        #[command(flatten)]
        sel: Selection,
        /// Only print the number of skeleta.
        #[arg(long)]
        count_only: bool,
    },
    /// Critical pairs and chart coordinates of one skeleton.
    CriticalPairs {
        #[command(flatten)]
        sel: Selection,
        /// 1-based skeleton id as listed by `skeleta`.
        #[arg(long)]
        skeleton: usize,
        #[command(flatten)]
        grading: Grading,
    },
    /// Chart ideals of all skeleta.
    Charts {
        #[command(flatten)]
        sel: Selection,
        #[command(flatten)]
        grading: Grading,
    },
    /// Check chart ideals against explicit representations at random points.
    Oracle {
        #[command(flatten)]
        sel: Selection,
        /// Restrict to one skeleton id.
        #[arg(long)]
        skeleton: Option<usize>,
        #[arg(long, default_value_t = 32003)]
        prime: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        grading: Grading,
    },
    /// Skeleta, charts and (optionally) oracle checks in one report.
    Run {
        #[command(flatten)]
        sel: Selection,
        #[command(flatten)]
        grading: Grading,
        /// Run the oracle on every chart.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 32003)]
        prime: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Emit a problem whose graded moduli space is V(f_1, ..., f_s) in P^n.
    Realize {
        /// Homogeneous polynomials in X0..Xn.
        #[arg(long = "poly")]
        polys: Vec<String>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value_t = Convention::AscendingFromTop)]
        convention: Convention,
        /// Write the problem here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Degenerate a submodule C of JP along one generator slot.
    Degenerate {
        /// Problem file defining the algebra and top.
        problem: PathBuf,
        /// JSON file with the generators of C.
        #[arg(long)]
        submodule: PathBuf,
        /// 1-based slot.
        #[arg(long, default_value_t = 1)]
        slot: usize,
    },
    /// Dimension partitions (d_1, ..., d_t) over the generator slots.
    Partitions {
        #[command(flatten)]
        sel: Selection,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    AscendingFromTop,
    DescendingFromTop,
}

enum Failure {
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn load(path: &PathBuf) -> Result<(ProblemSpec, Problem), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    ProblemSpec::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn options(sel: &Selection, spec: &ProblemSpec, problem: &Problem, grading: Option<&Grading>) -> Result<RunOptions, Failure> {
    let layering = match &sel.layering {
        Some(text) => {
            let seq = parse_layering(spec, problem.algebra.quiver(), text)?;
            seq.validate(&problem.algebra, &problem.top, sel.dim.unwrap_or(problem.dimension))?;
            Some(seq)
        }
        None => None,
    };
    Ok(RunOptions {
        graded: grading.is_none_or(|g| !g.ungraded),
        dimension: sel.dim,
        layering,
        oracle: None,
    })
}

fn pick(skeleta: &[Skeleton], id: usize) -> Result<&Skeleton, Failure> {
    if id == 0 || id > skeleta.len() {
        return Err(Failure::Input(format!("skeleton id {id} out of range 1..={}", skeleta.len())));
    }
    Ok(&skeleta[id - 1])
}

fn print<T: Serialize>(emit: Emit, value: &T, text: impl FnOnce() -> String) {
    let out = match emit {
        Emit::Json => serde_json::to_string_pretty(value).expect("reports serialize") + "\n",
        Emit::Text => text(),
    };
    write_stdout(&out);
}

/// Writes to stdout, ignoring a closed pipe.
fn write_stdout(text: &str) {
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush());
}

fn execute(cli: &Cli) -> Outcome {
    let emit = cli.emit;
    match &cli.command {
        Command::Skeleta { sel, count_only } => {
            let (spec, problem) = load(&sel.problem)?;
            let opts = options(sel, &spec, &problem, None)?;
            let d = opts.dimension.unwrap_or(problem.dimension);
            let layering = opts.layering.as_ref().or(problem.layering.as_ref());
            if *count_only {
                let n = count_skeleta(&problem.algebra, &problem.top, d, layering);
                print(emit, &json!({ "dimension": d, "count": n }), || format!("{n}\n"));
                return Ok(true);
            }
            let q = problem.algebra.quiver();
            let list = skeleta_for(&problem, &opts);
            let rows: Vec<_> = list
                .iter()
                .enumerate()
                .map(|(k, s)| {
                    json!({
                        "id": k + 1,
                        "slots": s.format(q),
                        "layering": s.layering(&problem.top, q.vertex_count()).layers(),
                    })
                })
                .collect();
            print(emit, &json!({ "dimension": d, "skeleta": rows }), || {
                let mut out = format!("{} skeleta of dimension {d}\n", list.len());
                for (k, s) in list.iter().enumerate() {
                    out.push_str(&format!("{}: {}\n", k + 1, render_skeleton(&s.format(q))));
                }
                out
            });
            Ok(true)
        }
        Command::CriticalPairs { sel, skeleton, grading } => {
            let (spec, problem) = load(&sel.problem)?;
            let opts = options(sel, &spec, &problem, Some(grading))?;
            let list = skeleta_for(&problem, &opts);
            let sk = pick(&list, *skeleton)?;
            let q = problem.algebra.quiver();
            let pairs = critical_pairs(&problem.algebra, &problem.top, sk);
            let chart = chart_ideal(&problem.algebra, &problem.top, sk, opts.graded)?;
            let rows: Vec<_> = pairs
                .iter()
                .map(|c| {
                    json!({
                        "arrow": q.arrow(c.arrow).name,
                        "basePath": q.format_path(&c.base),
                        "slot": c.slot + 1,
                        "targets": c.targets.iter().map(|t| t.format(q)).collect::<Vec<_>>(),
                        "gradedTargets": c.graded_targets.iter().map(|t| t.format(q)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let vars = variable_infos(&problem, &chart);
            print(emit, &json!({ "skeleton": sk.format(q), "pairs": rows, "variables": vars }), || {
                let mut out = format!("skeleton {}\n", render_skeleton(&sk.format(q)));
                for c in &pairs {
                    let shown = |ts: &[quiver_moduli::skeleta::TaggedPath]| {
                        ts.iter().map(|t| t.format(q)).collect::<Vec<_>>().join(", ")
                    };
                    out.push_str(&format!(
                        "({}, {}^({})): targets [{}], graded [{}]\n",
                        q.arrow(c.arrow).name,
                        q.format_path(&c.base),
                        c.slot + 1,
                        shown(&c.targets),
                        shown(&c.graded_targets)
                    ));
                }
                for v in &vars {
                    out.push_str(&format!("{} = {}*{}^({}) -> {}^({})\n", v.name, v.arrow, v.base_path, v.slot, v.target, v.target_slot));
                }
                out
            });
            Ok(true)
        }
        Command::Charts { sel, grading } => {
            let (spec, problem) = load(&sel.problem)?;
            let opts = options(sel, &spec, &problem, Some(grading))?;
            let report = run_pipeline(&problem, &opts)?;
            print(emit, &report, || render_text(&report));
            Ok(report.status == quiver_moduli::pipeline::Status::Pass)
        }
        Command::Run {
            sel,
            grading,
            oracle,
            prime,
            trials,
            seed,
        } => {
            let (spec, problem) = load(&sel.problem)?;
            let mut opts = options(sel, &spec, &problem, Some(grading))?;
            if *oracle {
                PrimeField::new(*prime)?;
                opts.oracle = Some(OracleOptions {
                    prime: *prime,
                    trials: *trials,
                    seed: *seed,
                });
            }
            let report = run_pipeline(&problem, &opts)?;
            print(emit, &report, || render_text(&report));
            Ok(report.status == quiver_moduli::pipeline::Status::Pass)
        }
        Command::Oracle {
            sel,
            skeleton,
            prime,
            trials,
            seed,
            grading,
        } => {
            let (spec, problem) = load(&sel.problem)?;
            let opts = options(sel, &spec, &problem, Some(grading))?;
            let field = PrimeField::new(*prime)?;
            let list = skeleta_for(&problem, &opts);
            if list.is_empty() {
                return Err(Failure::Check("no skeleta: the problem is infeasible".into()));
            }
            let ids: Vec<usize> = match skeleton {
                Some(id) => {
                    pick(&list, *id)?;
                    vec![*id]
                }
                None => (1..=list.len()).collect(),
            };
            let mut rows = Vec::new();
            let mut ok = true;
            for id in ids {
                let chart = chart_ideal(&problem.algebra, &problem.top, &list[id - 1], opts.graded)?;
                let r = membership_vs_oracle(&problem.algebra, &problem.top, &chart, &field, *trials, seed.wrapping_add(id as u64 - 1))?;
                ok &= r.passed();
                let summary = summarize(&problem, id, &chart);
                rows.push(json!({
                    "id": id,
                    "skeleton": summary.skeleton,
                    "trials": r.trials,
                    "onVariety": r.on_variety,
                    "counterexamples": r.counterexamples.iter().map(|c| json!({
                        "point": c.point,
                        "inVariety": c.in_variety,
                        "note": c.note,
                        "witness": c.witness.as_ref().map(|w| w.describe()),
                    })).collect::<Vec<_>>(),
                    "layeringMismatches": r.layering_mismatches.len(),
                    "gradingFailures": r.grading_failures.len(),
                    "passed": r.passed(),
                }));
            }
            print(emit, &json!({ "prime": prime, "seed": seed, "charts": rows }), || {
                let mut out = String::new();
                for r in &rows {
                    out.push_str(&format!(
                        "chart {}: {} trials, {} on chart, {} counterexamples, {}\n",
                        r["id"],
                        r["trials"],
                        r["onVariety"],
                        r["counterexamples"].as_array().map_or(0, Vec::len),
                        if r["passed"] == json!(true) { "ok" } else { "FAILED" }
                    ));
                }
                out
            });
            Ok(ok)
        }
        Command::Realize {
            polys,
            n,
            d,
            convention,
            output,
        } => {
            let names: Vec<String> = (0..=*n).map(|i| format!("X{i}")).collect();
            let parsed = polys
                .iter()
                .map(|p| parse_polynomial(p, &names))
                .collect::<Result<Vec<_>, _>>()?;
            let convention = match convention {
                Convention::AscendingFromTop => LevelConvention::AscendingFromTop,
                Convention::DescendingFromTop => LevelConvention::DescendingFromTop,
            };
            let spec = realize_variety(&parsed, *n, *d, convention)?;
            let text = spec.to_json();
            match output {
                Some(path) => fs::write(path, text + "\n").map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
                None => write_stdout(&format!("{text}\n")),
            }
            Ok(true)
        }
        Command::Degenerate { problem, submodule, slot } => {
            let (_, problem) = load(problem)?;
            let c = load_submodule(&problem, submodule)?;
            if *slot == 0 {
                return Err(Failure::Input("slots are numbered from 1".into()));
            }
            let degenerated = top_degeneration(&c, slot - 1)?;
            let before = summand_count(&c);
            let after = summand_count(&degenerated);
            let q = problem.algebra.quiver();
            let show = |v: &Vector| {
                v.iter()
                    .map(|(t, x)| json!({ "slot": t.slot + 1, "path": q.format_path(&t.path), "coeff": format_rational(x) }))
                    .collect::<Vec<_>>()
            };
            let blocks = |p: &SubmodulePresentation| {
                finest_slot_partition(p)
                    .into_iter()
                    .map(|b| b.into_iter().map(|r| r + 1).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            };
            let value = json!({
                "slot": slot,
                "dimension": c.dim(),
                "quotientDimension": c.quotient_dim(),
                "input": { "split": slot_split_summands(&c), "blocks": blocks(&c), "summands": before, "homogeneous": c.is_homogeneous() },
                "degenerated": {
                    "vectors": degenerated.basis_vectors().iter().map(show).collect::<Vec<_>>(),
                    "dimension": degenerated.dim(),
                    "split": slot_split_summands(&degenerated),
                    "blocks": blocks(&degenerated),
                    "summands": after,
                    "homogeneous": degenerated.is_homogeneous(),
                    "splitsOffSlot": degenerated.splits_off(slot - 1),
                },
            });
            print(emit, &value, || {
                format!(
                    "dim C = {}, dim P/C = {}\nslot-aligned summands: {before} -> {after}\nslot {slot} splits off after degeneration: {}\n",
                    c.dim(),
                    c.quotient_dim(),
                    degenerated.splits_off(slot - 1)
                )
            });
            Ok(true)
        }
        Command::Partitions { sel } => {
            let (_, problem) = load(&sel.problem)?;
            let d = sel.dim.unwrap_or(problem.dimension);
            let q = problem.algebra.quiver();
            let classes = partition_classes(&problem.top, d);
            let rows: Vec<_> = classes
                .iter()
                .map(|c| {
                    json!({
                        "dims": c.dims,
                        "factors": c.factors.iter().map(|(v, h, k)| json!({ "vertex": q.vertex_name(*v), "degree": h, "dimension": k })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            print(emit, &json!({ "dimension": d, "classes": rows }), || {
                classes.iter().map(|c| format!("{:?}\n", c.dims)).collect()
            });
            Ok(true)
        }
    }
}

/// Reads `{"generators": [[{"slot": 1, "path": "b", "coeff": "1"}, ...], ...]}`.
fn load_submodule(problem: &Problem, path: &PathBuf) -> Result<SubmodulePresentation, Failure> {
    #[derive(serde::Deserialize)]
    struct Term {
        slot: usize,
        path: String,
        #[serde(default)]
        coeff: Option<String>,
    }
    #[derive(serde::Deserialize)]
    struct File {
        generators: Vec<Vec<Term>>,
    }
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let file: File = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let q = problem.algebra.quiver();
    let mut vectors = Vec::new();
    for g in file.generators {
        let mut terms = Vec::new();
        for t in g {
            if t.slot == 0 {
                return Err(Failure::Input("slots are numbered from 1".into()));
            }
            let c = match &t.coeff {
                Some(s) => parse_rational(s).ok_or_else(|| Failure::Input(format!("bad coefficient `{s}`")))?,
                None => parse_rational("1").expect("one"),
            };
            let mut x = AlgebraElement::zero();
            x.add_term(q.parse_path(&t.path)?, c);
            terms.push((t.slot - 1, x));
        }
        vectors.push(vector_from_terms(&problem.algebra, &problem.top, &terms)?);
    }
    Ok(SubmodulePresentation::generated_by(&problem.algebra, &problem.top, vectors)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
