//! End-to-end runs: skeleta, charts, summaries and optional oracle checks.

use std::fmt::Write;

use serde::Serialize;

use crate::chart::{chart_ideal, chart_report, ChartIdeal};
use crate::error::Result;
use crate::field::PrimeField;
use crate::oracle::membership_vs_oracle;
use crate::problem::Problem;
use crate::skeleta::{enumerate_skeleta, SemisimpleSequence, Skeleton, VariableIndex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    pub prime: u64,
    pub trials: usize,
    pub seed: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            prime: 32003,
            trials: 100,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub graded: bool,
    pub dimension: Option<usize>,
    pub layering: Option<SemisimpleSequence>,
    pub oracle: Option<OracleOptions>,
}

impl RunOptions {
    pub fn graded() -> Self {
        RunOptions {
            graded: true,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct VariableInfo {
    pub name: String,
    pub arrow: String,
    #[serde(rename = "basePath")]
    pub base_path: String,
    pub slot: usize,
    pub target: String,
    #[serde(rename = "targetSlot")]
    pub target_slot: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct OracleSummary {
    pub prime: u64,
    pub trials: usize,
    pub seed: u64,
    pub on_variety: usize,
    pub counterexamples: Vec<String>,
    pub layering_mismatches: usize,
    pub grading_failures: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ChartSummary {
    pub id: usize,
    pub skeleton: Vec<Vec<String>>,
    pub layering: Vec<Vec<usize>>,
    pub graded: bool,
    pub variables: Vec<VariableInfo>,
    pub generators: Vec<String>,
    pub linear_generators: usize,
    pub free_variables: usize,
    pub affine_space: bool,
    pub empty: bool,
    pub residual: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    CheckFailed,
    /// No skeleton exists for the requested dimension and layering.
    Infeasible,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::CheckFailed | Status::Infeasible => 1,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Report {
    pub status: Status,
    pub dimension: usize,
    pub skeleton_count: usize,
    pub charts: Vec<ChartSummary>,
}

pub fn variable_infos(problem: &Problem, chart: &ChartIdeal) -> Vec<VariableInfo> {
    let q = problem.algebra.quiver();
    chart
        .variables
        .variables()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let pair = &chart.pairs[v.pair];
            VariableInfo {
                name: VariableIndex::name(i),
                arrow: q.arrow(pair.arrow).name.clone(),
                base_path: q.format_path(&pair.base),
                slot: pair.slot + 1,
                target: q.format_path(&v.target.path),
                target_slot: v.target.slot + 1,
            }
        })
        .collect()
}

pub fn summarize(problem: &Problem, id: usize, chart: &ChartIdeal) -> ChartSummary {
    let q = problem.algebra.quiver();
    let report = chart_report(chart);
    let show = |p: &crate::poly::MultiPoly| p.format(&VariableIndex::name);
    ChartSummary {
        id,
        skeleton: chart.skeleton.format(q),
        layering: chart.skeleton.layering(&problem.top, q.vertex_count()).layers().to_vec(),
        graded: chart.is_graded(),
        variables: variable_infos(problem, chart),
        generators: chart.generators.iter().map(show).collect(),
        linear_generators: report.linear_generators.len(),
        free_variables: report.free_count(),
        affine_space: report.is_affine_space(),
        empty: report.empty,
        residual: report.residual.iter().map(show).collect(),
        oracle: None,
    }
}

/// Skeleta for the problem, honoring the overrides in `opts`.
pub fn skeleta_for(problem: &Problem, opts: &RunOptions) -> Vec<Skeleton> {
    let d = opts.dimension.unwrap_or(problem.dimension);
    let layering = opts.layering.as_ref().or(problem.layering.as_ref());
    enumerate_skeleta(&problem.algebra, &problem.top, d, layering)
}

pub fn run_pipeline(problem: &Problem, opts: &RunOptions) -> Result<Report> {
    let skeleta = skeleta_for(problem, opts);
    let mut charts = Vec::new();
    let mut failed = false;
    for (k, sk) in skeleta.iter().enumerate() {
        let chart = chart_ideal(&problem.algebra, &problem.top, sk, opts.graded)?;
        let mut summary = summarize(problem, k + 1, &chart);
        if let Some(o) = opts.oracle {
            let field = PrimeField::new(o.prime)?;
            let seed = o.seed.wrapping_add(k as u64);
            let r = membership_vs_oracle(&problem.algebra, &problem.top, &chart, &field, o.trials, seed)?;
            failed |= !r.passed();
            summary.oracle = Some(OracleSummary {
                prime: o.prime,
                trials: o.trials,
                seed,
                on_variety: r.on_variety,
                counterexamples: r
                    .counterexamples
                    .iter()
                    .map(|c| format!("{:?}: {}", c.point, c.note))
                    .collect(),
                layering_mismatches: r.layering_mismatches.len(),
                grading_failures: r.grading_failures.len(),
                passed: r.passed(),
            });
        }
        charts.push(summary);
    }
    let status = if skeleta.is_empty() {
        Status::Infeasible
    } else if failed {
        Status::CheckFailed
    } else {
        Status::Pass
    };
    Ok(Report {
        status,
        dimension: opts.dimension.unwrap_or(problem.dimension),
        skeleton_count: skeleta.len(),
        charts,
    })
}

pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let status = match report.status {
        Status::Pass => "pass",
        Status::CheckFailed => "check failed",
        Status::Infeasible => "infeasible (no skeleta)",
    };
    let _ = writeln!(out, "dimension {}: {} skeleta, status {status}", report.dimension, report.skeleton_count);
    for c in &report.charts {
        let _ = writeln!(out, "chart {}: {}", c.id, render_skeleton(&c.skeleton));
        let _ = writeln!(
            out,
            "  {} variables, {} generators ({} linear), {} free{}",
            c.variables.len(),
            c.generators.len(),
            c.linear_generators,
            c.free_variables,
            if c.empty {
                ", empty chart"
            } else if c.affine_space {
                ", affine space"
            } else {
                ""
            }
        );
        for (v, info) in c.variables.iter().enumerate() {
            let _ = writeln!(
                out,
                "  x{v} = {}*{}^({}) -> {}^({})",
                info.arrow, info.base_path, info.slot, info.target, info.target_slot
            );
        }
        for g in &c.generators {
            let _ = writeln!(out, "  0 = {g}");
        }
        if !c.residual.is_empty() {
            let _ = writeln!(out, "  after linear elimination: {}", c.residual.join(", "));
        }
        if let Some(o) = &c.oracle {
            let _ = writeln!(
                out,
                "  oracle F_{}: {} trials, {} on chart, {}",
                o.prime,
                o.trials,
                o.on_variety,
                if o.passed { "ok" } else { "FAILED" }
            );
            for ce in &o.counterexamples {
                let _ = writeln!(out, "    counterexample {ce}");
            }
        }
    }
    out
}

pub fn render_skeleton(slots: &[Vec<String>]) -> String {
    slots
        .iter()
        .enumerate()
        .map(|(r, s)| format!("({}) {{{}}}", r + 1, s.join(", ")))
        .collect::<Vec<_>>()
        .join(" ")
}
