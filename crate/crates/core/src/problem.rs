//! Problem files and the realization of projective varieties as moduli.
//!
//! A problem file is a JSON document:
//!
//! ```json
//! {
//!   "vertices": ["1", "2"],
//!   "arrows": [{"name": "a", "from": "1", "to": "2"}],
//!   "relations": ["b*a - c*a"],
//!   "loewy_bound": 2,
//!   "top": {"1": 1},
//!   "degree_vector": [0],
//!   "dimension": 3,
//!   "layering": [[1, 0], [0, 2]]
//! }
//! ```
//!
//! Layers list vertex multiplicities in the order of `vertices`; a layer may
//! also be written as an object `{"vertex": multiplicity}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{parse_relation, AlgebraElement, QuiverAlgebra, TopSpec};
use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::quiver::Quiver;
use crate::skeleta::SemisimpleSequence;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowSpec {
    pub name: String,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LayerSpec {
    Dense(Vec<usize>),
    ByVertex(BTreeMap<String, usize>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
    #[serde(default)]
    pub relations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loewy_bound: Option<usize>,
    pub top: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_vector: Option<Vec<usize>>,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layering: Option<Vec<LayerSpec>>,
    /// Free-form provenance, e.g. the realization convention.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<serde_json::Value>,
}

/// A validated problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub algebra: QuiverAlgebra,
    pub top: TopSpec,
    pub dimension: usize,
    pub layering: Option<SemisimpleSequence>,
}

/// 1-based line and column of byte offset `at` in `text`.
fn line_column(text: &str, at: usize) -> (usize, usize) {
    let before = &text[..at.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map(|l| l.chars().count()).unwrap_or(0) + 1;
    (line, column)
}

impl ProblemSpec {
    /// Parses and validates a problem document. Errors in relation strings
    /// are reported at their position in `text`.
    pub fn from_json(text: &str) -> Result<(ProblemSpec, Problem)> {
        let spec: ProblemSpec = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let problem = spec.build().map_err(|e| spec.locate(text, e))?;
        Ok((spec, problem))
    }

    /// Moves a relation parse error from string-relative to file-relative
    /// coordinates.
    fn locate(&self, text: &str, e: Error) -> Error {
        let Error::Parse { line: 1, column, message } = &e else { return e };
        let Some(index) = message.strip_prefix("relation ").and_then(|m| m.split(':').next()).and_then(|i| i.parse::<usize>().ok())
        else {
            return e;
        };
        let Some(rel) = self.relations.get(index) else { return e };
        let quoted = serde_json::to_string(rel).expect("strings serialize");
        let mut from = text.find("\"relations\"").unwrap_or(0);
        let mut seen = 0;
        while let Some(offset) = text[from..].find(&quoted) {
            let at = from + offset;
            if seen == self.relations[..index].iter().filter(|r| *r == rel).count() {
                let (line, col) = line_column(text, at + 1);
                return Error::Parse {
                    line,
                    column: col + column - 1,
                    message: message.clone(),
                };
            }
            seen += 1;
            from = at + quoted.len();
        }
        e
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem specs serialize")
    }

    pub fn quiver(&self) -> Result<Quiver> {
        let arrows: Vec<(&str, &str, &str)> = self
            .arrows
            .iter()
            .map(|a| (a.name.as_str(), a.from.as_str(), a.to.as_str()))
            .collect();
        let vertices: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
        Quiver::new(&vertices, &arrows)
    }

    pub fn relations(&self, quiver: &Quiver) -> Result<Vec<AlgebraElement>> {
        self.relations
            .iter()
            .enumerate()
            .map(|(i, r)| {
                parse_relation(quiver, r).map_err(|e| match e {
                    Error::Parse { line, column, message } => Error::Parse {
                        line,
                        column,
                        message: format!("relation {i}: {message}"),
                    },
                    other => other,
                })
            })
            .collect()
    }

    pub fn build(&self) -> Result<Problem> {
        let quiver = self.quiver()?;
        let relations = self.relations(&quiver)?;
        let mut multiplicities = vec![0; quiver.vertex_count()];
        for (v, &m) in &self.top {
            multiplicities[quiver.vertex(v)?.0] = m;
        }
        let top = TopSpec::new(multiplicities, self.degree_vector.clone())?;
        let algebra = QuiverAlgebra::new(quiver, relations, self.loewy_bound)?;
        let layering = match &self.layering {
            None => None,
            Some(layers) => {
                let seq = self.sequence(algebra.quiver(), layers)?;
                seq.validate(&algebra, &top, self.dimension)?;
                Some(seq)
            }
        };
        Ok(Problem {
            algebra,
            top,
            dimension: self.dimension,
            layering,
        })
    }

    fn sequence(&self, quiver: &Quiver, layers: &[LayerSpec]) -> Result<SemisimpleSequence> {
        let n = quiver.vertex_count();
        let mut rows = Vec::new();
        for layer in layers {
            rows.push(match layer {
                LayerSpec::Dense(v) if v.len() <= n => v.clone(),
                LayerSpec::Dense(v) => {
                    return Err(Error::Invalid(format!("layer lists {} multiplicities for {n} vertices", v.len())))
                }
                LayerSpec::ByVertex(m) => {
                    let mut row = vec![0; n];
                    for (v, &k) in m {
                        row[quiver.vertex(v)?.0] = k;
                    }
                    row
                }
            });
        }
        Ok(SemisimpleSequence::new(rows, n))
    }
}

/// Parses a layering given on the command line as JSON.
pub fn parse_layering(spec: &ProblemSpec, quiver: &Quiver, text: &str) -> Result<SemisimpleSequence> {
    let layers: Vec<LayerSpec> = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    spec.sequence(quiver, &layers)
}

/// How the factors of a monomial are laid out along the arrow levels.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelConvention {
    /// Smallest variable index on the highest level: `X_0 X_2 ↦ a0_1*a2_0`.
    #[default]
    AscendingFromTop,
    /// Largest variable index on the highest level: `X_0 X_2 ↦ a2_1*a0_0`.
    DescendingFromTop,
}

/// Arrow name for `α_i^r`.
pub fn level_arrow(i: usize, r: usize) -> String {
    format!("a{i}_{r}")
}

/// The problem whose graded moduli space with layering `(S_0, …, S_d)` is
/// the projective variety `V(f_1, …, f_s) ⊆ P^n`: vertices `0..=d`, arrows
/// `a{i}_{r} : r → r+1`, the commutativity relations, and one relation per
/// `f`, obtained by writing each monomial as a path on levels `deg f − 1, …, 0`.
pub fn realize_variety(polys: &[MultiPoly], n: usize, d: usize, convention: LevelConvention) -> Result<ProblemSpec> {
    let vertices: Vec<String> = (0..=d).map(|r| r.to_string()).collect();
    let mut arrows = Vec::new();
    for r in 0..d {
        for i in 0..=n {
            arrows.push(ArrowSpec {
                name: level_arrow(i, r),
                from: r.to_string(),
                to: (r + 1).to_string(),
            });
        }
    }
    let mut relations = Vec::new();
    for r in 0..d.saturating_sub(1) {
        for i in 0..=n {
            for j in (i + 1)..=n {
                relations.push(format!(
                    "{}*{} - {}*{}",
                    level_arrow(i, r + 1),
                    level_arrow(j, r),
                    level_arrow(j, r + 1),
                    level_arrow(i, r)
                ));
            }
        }
    }
    for f in polys {
        let shown = f.format(&|v| format!("X{v}"));
        let degree = f.degree().ok_or_else(|| Error::Invalid("cannot realize the zero polynomial".into()))? as usize;
        if f.terms().any(|(m, _)| m.degree() as usize != degree) {
            return Err(Error::InhomogeneousPolynomial(shown));
        }
        if degree == 0 || degree > d {
            return Err(Error::PolynomialDegree { degree, depth: d });
        }
        if let Some(v) = f.variables().into_iter().find(|&v| v > n) {
            return Err(Error::Invalid(format!("variable X{v} exceeds n = {n}")));
        }
        let mut terms = Vec::new();
        for (m, c) in f.terms().rev() {
            let mut factors: Vec<usize> = m
                .exponents()
                .iter()
                .flat_map(|&(v, e)| std::iter::repeat_n(v, e as usize))
                .collect();
            factors.sort_unstable();
            if convention == LevelConvention::DescendingFromTop {
                factors.reverse();
            }
            // factors[0] sits on the highest level degree-1, the last on level 0
            let path: Vec<String> = factors
                .iter()
                .enumerate()
                .map(|(k, &v)| level_arrow(v, degree - 1 - k))
                .collect();
            terms.push((crate::field::format_rational(c), path.join("*")));
        }
        let mut text = String::new();
        for (k, (c, p)) in terms.iter().enumerate() {
            let (neg, abs) = match c.strip_prefix('-') {
                Some(a) => (true, a),
                None => (false, c.as_str()),
            };
            match (k, neg) {
                (0, true) => text.push('-'),
                (0, false) => {}
                (_, true) => text.push_str(" - "),
                (_, false) => text.push_str(" + "),
            }
            if abs != "1" {
                text.push_str(abs);
                text.push('*');
            }
            text.push_str(p);
        }
        relations.push(text);
    }
    let layering = (0..=d)
        .map(|r| {
            let mut row = vec![0; d + 1];
            row[r] = 1;
            LayerSpec::Dense(row)
        })
        .collect();
    Ok(ProblemSpec {
        name: Some(format!("realization n={n} d={d}")),
        vertices,
        arrows,
        relations,
        loewy_bound: Some(d),
        top: BTreeMap::from([("0".to_string(), 1)]),
        degree_vector: None,
        dimension: d + 1,
        layering: Some(layering),
        notes: Some(serde_json::json!({
            "polynomials": polys.iter().map(|f| f.format(&|v| format!("X{v}"))).collect::<Vec<_>>(),
            "convention": convention,
        })),
    })
}
