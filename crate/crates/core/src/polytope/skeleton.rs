use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::enumerate::{enumerate_vertices_with, VertexRecord};
use super::poly::{Guardrail, StdPolyhedron};
use crate::error::{Error, Result};
use crate::exactlin::{rank, RationalVector};

/// Vertices plus the edges of the polyhedron graph.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub vertices: Vec<VertexRecord>,
    /// `(i, j)` with `i < j`, sorted.
    pub edges: Vec<(usize, usize)>,
    pub simple: bool,
    adj: Vec<Vec<usize>>,
    index: HashMap<RationalVector, usize>,
}

/// JSON view: coordinates as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonJson {
    pub vertices: Vec<Vec<String>>,
    pub edges: Vec<(usize, usize)>,
    pub simple: bool,
}

impl Skeleton {
    /// Assembles a skeleton from given vertices and edges.
    pub fn from_parts(
        vertices: Vec<VertexRecord>,
        mut edges: Vec<(usize, usize)>,
        simple: bool,
    ) -> Self {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let mut adj = vec![Vec::new(); vertices.len()];
        for &(i, j) in &edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj.iter_mut().for_each(|a| a.sort_unstable());
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.coords.clone(), i))
            .collect();
        Skeleton {
            vertices,
            edges,
            simple,
            adj,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn index_of(&self, coords: &[crate::exactlin::Rational]) -> Option<usize> {
        self.index
            .get(&RationalVector::new(coords.to_vec()))
            .copied()
    }

    pub fn coords(&self, v: usize) -> &RationalVector {
        &self.vertices[v].coords
    }

    /// BFS distances from `src`, over vertices accepted by `allow`.
    pub fn bfs_restricted(&self, src: usize, allow: impl Fn(usize) -> bool) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        if !allow(src) {
            return dist;
        }
        dist[src] = Some(0);
        let mut q = VecDeque::from([src]);
        while let Some(u) = q.pop_front() {
            let d = dist[u].unwrap_or(0);
            for &w in &self.adj[u] {
                if dist[w].is_none() && allow(w) {
                    dist[w] = Some(d + 1);
                    q.push_back(w);
                }
            }
        }
        dist
    }

    pub fn bfs(&self, src: usize) -> Vec<Option<usize>> {
        self.bfs_restricted(src, |_| true)
    }

    pub fn distance(&self, u: usize, v: usize) -> Option<usize> {
        self.bfs(u)[v]
    }

    /// Shortest path inside the allowed set, lowest-index neighbors first.
    pub fn shortest_path_restricted(
        &self,
        u: usize,
        v: usize,
        allow: impl Fn(usize) -> bool,
    ) -> Option<Vec<usize>> {
        if !allow(u) || !allow(v) {
            return None;
        }
        let mut parent = vec![usize::MAX; self.len()];
        parent[u] = u;
        let mut q = VecDeque::from([u]);
        while let Some(x) = q.pop_front() {
            if x == v {
                break;
            }
            for &w in &self.adj[x] {
                if parent[w] == usize::MAX && allow(w) {
                    parent[w] = x;
                    q.push_back(w);
                }
            }
        }
        if parent[v] == usize::MAX {
            return None;
        }
        let mut path = vec![v];
        while *path.last()? != u {
            let last = *path.last()?;
            path.push(parent[last]);
        }
        path.reverse();
        Some(path)
    }

    pub fn shortest_path(&self, u: usize, v: usize) -> Option<Vec<usize>> {
        self.shortest_path_restricted(u, v, |_| true)
    }

    /// A walk in which consecutive vertices are adjacent.
    pub fn is_walk(&self, walk: &[usize]) -> bool {
        walk.iter().all(|&v| v < self.len()) && walk.windows(2).all(|w| self.is_edge(w[0], w[1]))
    }

    pub fn to_json(&self) -> SkeletonJson {
        SkeletonJson {
            vertices: self
                .vertices
                .iter()
                .map(|v| v.coords.to_strings())
                .collect(),
            edges: self.edges.clone(),
            simple: self.simple,
        }
    }
}

/// 1-dimensional face test on the union support.
pub fn are_adjacent(p: &StdPolyhedron, u: &VertexRecord, v: &VertexRecord) -> bool {
    let mut s: Vec<usize> = u.support.iter().chain(&v.support).copied().collect();
    s.sort_unstable();
    s.dedup();
    if s.len() > p.m() + 1 {
        return false;
    }
    s.len() - rank(&p.a().select_columns(&s)) == 1
}

fn bases_exchange(u: &[usize], v: &[usize]) -> bool {
    u.iter().filter(|j| v.binary_search(j).is_err()).count() == 1
}

pub fn build_skeleton_with(p: &StdPolyhedron, guard: &Guardrail) -> Result<Skeleton> {
    let vertices = enumerate_vertices_with(p, guard)?;
    let m = p.m();
    let simple = !vertices.is_empty() && vertices.iter().all(|v| v.is_nondegenerate(m));
    let mut edges = Vec::new();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            let adjacent = are_adjacent(p, &vertices[i], &vertices[j]);
            if simple {
                let exchange = bases_exchange(&vertices[i].bases[0], &vertices[j].bases[0]);
                if exchange != adjacent {
                    return Err(Error::invariant(format!(
                        "edge test disagrees with basis exchange on vertices {i} and {j}"
                    )));
                }
            }
            if adjacent {
                edges.push((i, j));
            }
        }
    }
    Ok(Skeleton::from_parts(vertices, edges, simple))
}

pub fn build_skeleton(p: &StdPolyhedron) -> Result<Skeleton> {
    build_skeleton_with(p, &Guardrail::default())
}

/// All-pairs BFS eccentricity maximum.
pub fn diameter(s: &Skeleton) -> Result<usize> {
    if s.is_empty() {
        return Err(Error::Empty);
    }
    let mut best = 0;
    for u in 0..s.len() {
        for d in s.bfs(u) {
            best = best.max(d.ok_or(Error::Disconnected)?);
        }
    }
    Ok(best)
}

/// Facets minus dimension in standard form.
pub fn hirsch_bound(p: &StdPolyhedron) -> usize {
    p.m()
}
