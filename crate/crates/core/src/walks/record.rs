use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::Skeleton;

/// An edge walk in a skeleton, by vertex index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkRecord {
    pub vertices: Vec<usize>,
    pub length: usize,
    pub case_label: String,
    /// `None` when no bound applies.
    pub claimed_bound: Option<usize>,
}

impl WalkRecord {
    pub fn new(
        vertices: Vec<usize>,
        case_label: impl Into<String>,
        claimed_bound: Option<usize>,
    ) -> Self {
        let length = vertices.len().saturating_sub(1);
        WalkRecord {
            vertices,
            length,
            case_label: case_label.into(),
            claimed_bound,
        }
    }

    pub fn single(v: usize, case_label: impl Into<String>) -> Self {
        Self::new(vec![v], case_label, None)
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().expect("nonempty walk")
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        WalkRecord {
            vertices: v,
            ..self.clone()
        }
    }

    /// Independent re-check: endpoints, adjacency, length, bound.
    pub fn verify(&self, skel: &Skeleton, from: usize, to: usize) -> Result<()> {
        self.verify_path(skel, from, to)?;
        if let Some(b) = self.claimed_bound {
            if self.length > b {
                return Err(Error::invariant(format!(
                    "walk length {} exceeds claimed bound {b}",
                    self.length
                )));
            }
        }
        Ok(())
    }

    /// Endpoints, adjacency and length only.
    pub fn verify_path(&self, skel: &Skeleton, from: usize, to: usize) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::invariant("empty walk"));
        }
        if self.start() != from || self.end() != to {
            return Err(Error::invariant(format!(
                "walk runs {} -> {}, expected {from} -> {to}",
                self.start(),
                self.end()
            )));
        }
        if self.length + 1 != self.vertices.len() {
            return Err(Error::invariant("walk length field out of sync"));
        }
        if let Some(i) = self
            .vertices
            .windows(2)
            .position(|w| !skel.is_edge(w[0], w[1]))
        {
            return Err(Error::invariant(format!(
                "step {i} ({} -> {}) is not an edge",
                self.vertices[i],
                self.vertices[i + 1]
            )));
        }
        Ok(())
    }

    pub fn within_bound(&self) -> bool {
        self.claimed_bound.is_none_or(|b| self.length <= b)
    }
}

/// Appends `tail` to `walk`, dropping the shared junction vertex.
pub(crate) fn concat(walk: &mut Vec<usize>, tail: &[usize]) {
    match (walk.last(), tail.first()) {
        (Some(a), Some(b)) if a == b => walk.extend_from_slice(&tail[1..]),
        _ => walk.extend_from_slice(tail),
    }
}

/// Cuts out closed sub-walks, so no vertex repeats. Stays a valid walk.
pub fn erase_loops(walk: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(walk.len());
    for &v in walk {
        if let Some(p) = out.iter().position(|&w| w == v) {
            out.truncate(p + 1);
        } else {
            out.push(v);
        }
    }
    out
}
