//! Quivers and paths.
//!
//! Products follow the "first `q`, then `p`" convention: `pq` is defined when
//! the end of `q` equals the start of `p`. A [`Path`] stores its arrows in
//! traversal order, so `arrows()[0]` is applied first and the right subpaths
//! of a path are exactly its prefixes.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArrowId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
}

/// A finite quiver. Arrows are kept sorted by name so that arrow ids
/// order paths length-lexicographically by arrow name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, VertexId>,
    arrow_index: HashMap<String, ArrowId>,
}

impl Quiver {
    /// Builds a quiver from vertex names and `(name, source, target)` triples.
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Self> {
        let mut vertex_index = HashMap::new();
        let mut names = Vec::new();
        for (i, v) in vertices.iter().enumerate() {
            let v = v.as_ref().to_string();
            if vertex_index.insert(v.clone(), VertexId(i)).is_some() {
                return Err(Error::DuplicateVertex(v));
            }
            names.push(v);
        }
        let mut list = Vec::new();
        for (name, from, to) in arrows {
            let lookup = |v: &S| {
                vertex_index
                    .get(v.as_ref())
                    .copied()
                    .ok_or_else(|| Error::UnknownArrowEndpoint {
                        arrow: name.as_ref().to_string(),
                        vertex: v.as_ref().to_string(),
                    })
            };
            list.push(Arrow {
                name: name.as_ref().to_string(),
                source: lookup(from)?,
                target: lookup(to)?,
            });
        }
        list.sort_by(|a, b| a.name.cmp(&b.name));
        let mut arrow_index = HashMap::new();
        for (i, a) in list.iter().enumerate() {
            if arrow_index.insert(a.name.clone(), ArrowId(i)).is_some() {
                return Err(Error::DuplicateArrow(a.name.clone()));
            }
        }
        Ok(Quiver {
            vertices: names,
            arrows: list,
            vertex_index,
            arrow_index,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_ids(&self) -> impl Iterator<Item = ArrowId> {
        (0..self.arrows.len()).map(ArrowId)
    }

    pub fn arrow(&self, id: ArrowId) -> &Arrow {
        &self.arrows[id.0]
    }

    pub fn arrow_by_name(&self, name: &str) -> Result<ArrowId> {
        self.arrow_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    pub fn arrows_from(&self, v: VertexId) -> impl Iterator<Item = ArrowId> + '_ {
        self.arrow_ids().filter(move |a| self.arrows[a.0].source == v)
    }

    /// The path `α p` (first `p`, then `α`), or `None` when they do not compose.
    pub fn extend(&self, p: &Path, alpha: ArrowId) -> Option<Path> {
        let a = self.arrow(alpha);
        if a.source != p.end {
            return None;
        }
        let mut arrows = p.arrows.clone();
        arrows.push(alpha);
        Some(Path {
            start: p.start,
            end: a.target,
            arrows,
        })
    }

    /// The product `pq`: first `q`, then `p`. `None` stands for zero.
    pub fn compose(&self, p: &Path, q: &Path) -> Option<Path> {
        if q.end != p.start {
            return None;
        }
        let mut arrows = q.arrows.clone();
        arrows.extend_from_slice(&p.arrows);
        Some(Path {
            start: q.start,
            end: p.end,
            arrows,
        })
    }

    pub fn arrow_path(&self, alpha: ArrowId) -> Path {
        let a = self.arrow(alpha);
        Path {
            start: a.source,
            end: a.target,
            arrows: vec![alpha],
        }
    }

    /// All paths in `KQ` starting at `start` of length at most `max_len`,
    /// ordered length-lexicographically by arrow name.
    pub fn enumerate_paths(&self, start: VertexId, max_len: usize) -> Vec<Path> {
        let mut out = vec![Path::trivial(start)];
        let mut layer = out.clone();
        for _ in 0..max_len {
            let mut next: Vec<Path> = layer
                .iter()
                .flat_map(|p| self.arrows_from(p.end).map(move |a| (p, a)))
                .filter_map(|(p, a)| self.extend(p, a))
                .collect();
            if next.is_empty() {
                break;
            }
            next.sort();
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// All paths of exactly the given length, over every start vertex.
    pub fn paths_of_length(&self, len: usize) -> Vec<Path> {
        let mut layer: Vec<Path> = self.vertices().map(Path::trivial).collect();
        for _ in 0..len {
            layer = layer
                .iter()
                .flat_map(|p| self.arrows_from(p.end).map(move |a| (p, a)))
                .filter_map(|(p, a)| self.extend(p, a))
                .collect();
        }
        layer.sort();
        layer
    }

    /// Path written as a product in composition order, e.g. `b*a` for
    /// "first `a`, then `b`"; trivial paths print as `e_<vertex>`.
    pub fn format_path(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            return format!("e_{}", self.vertex_name(p.start));
        }
        p.arrows
            .iter()
            .rev()
            .map(|a| self.arrow(*a).name.as_str())
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Inverse of [`Quiver::format_path`].
    pub fn parse_path(&self, s: &str) -> Result<Path> {
        let s = s.trim();
        let factors: Vec<&str> = s.split('*').map(str::trim).collect();
        if factors.len() == 1 && !self.arrow_index.contains_key(factors[0]) {
            if let Some(v) = factors[0].strip_prefix("e_") {
                return Ok(Path::trivial(self.vertex(v)?));
            }
        }
        let mut path: Option<Path> = None;
        for name in factors.iter().rev() {
            let a = self.arrow_by_name(name)?;
            path = Some(match path {
                None => self.arrow_path(a),
                Some(p) => self.extend(&p, a).ok_or_else(|| Error::NotComposable {
                    outer: name.to_string(),
                    inner: self.format_path(&p),
                })?,
            });
        }
        path.ok_or_else(|| Error::Invalid(format!("empty path `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    start: VertexId,
    end: VertexId,
    arrows: Vec<ArrowId>,
}

impl Path {
    pub fn trivial(v: VertexId) -> Self {
        Path {
            start: v,
            end: v,
            arrows: Vec::new(),
        }
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn end(&self) -> VertexId {
        self.end
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Arrows in traversal order.
    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    /// The right subpath of length `k`.
    pub fn right_subpath(&self, k: usize, quiver: &Quiver) -> Path {
        assert!(k <= self.len());
        let end = if k == 0 {
            self.start
        } else {
            quiver.arrow(self.arrows[k - 1]).target
        };
        Path {
            start: self.start,
            end,
            arrows: self.arrows[..k].to_vec(),
        }
    }

    /// The left factor remaining after removing the right subpath of length `k`.
    pub fn left_factor(&self, k: usize, quiver: &Quiver) -> Path {
        assert!(k <= self.len());
        let start = if k == 0 {
            self.start
        } else {
            quiver.arrow(self.arrows[k - 1]).target
        };
        Path {
            start,
            end: self.end,
            arrows: self.arrows[k..].to_vec(),
        }
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then(self.start.cmp(&other.start))
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then(self.end.cmp(&other.end))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
