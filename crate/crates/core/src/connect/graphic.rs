use std::collections::{HashSet, VecDeque};

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::linked::LinkedForm;
use crate::error::{Error, Result};
use crate::exactlin::{LineCursor, LinkPosition, Normalization, Rational, RationalMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub label: String,
}

/// Directed multigraph on nodes `0..nodes`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Digraph {
    pub nodes: usize,
    pub arcs: Vec<Arc>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GlueKind {
    Parallel,
    Series,
}

/// Glued graph, its reduced incidence matrix and the link arc.
#[derive(Clone, Debug)]
pub struct GraphicConnection {
    pub graph: Digraph,
    pub incidence: RationalMatrix,
    /// Merged arc (parallel) or the new arc `p` (series).
    pub link_arc: usize,
}

impl Digraph {
    pub fn new(nodes: usize, arcs: Vec<(usize, usize, &str)>) -> Result<Self> {
        let g = Digraph {
            nodes,
            arcs: arcs
                .into_iter()
                .map(|(tail, head, l)| Arc {
                    tail,
                    head,
                    label: l.to_string(),
                })
                .collect(),
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for a in &self.arcs {
            if a.tail >= self.nodes || a.head >= self.nodes {
                return Err(Error::Input(format!(
                    "arc `{}` uses a node outside 0..{}",
                    a.label, self.nodes
                )));
            }
            if !seen.insert(a.label.as_str()) {
                return Err(Error::Input(format!("duplicate arc label `{}`", a.label)));
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |line, msg: &str| Error::Parse {
            line,
            msg: msg.to_string(),
        };
        let mut cur = LineCursor::new(text);
        let (hn, header) = cur.expect_line("`V E` header")?;
        let h: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad(hn, "bad header")))
            .collect::<Result<_>>()?;
        let [v, e] = h.as_slice() else {
            return Err(bad(hn, "header must be `V E`"));
        };
        let mut arcs = Vec::with_capacity(*e);
        for _ in 0..*e {
            let (ln, line) = cur.expect_line("arc line `tail head label`")?;
            let t: Vec<&str> = line.split_whitespace().collect();
            let [tail, head, label] = t.as_slice() else {
                return Err(bad(ln, "arc line must be `tail head label`"));
            };
            let tail = tail.parse().map_err(|_| bad(ln, "bad tail"))?;
            let head = head.parse().map_err(|_| bad(ln, "bad head"))?;
            arcs.push(Arc {
                tail,
                head,
                label: label.to_string(),
            });
        }
        cur.finish()?;
        let g = Digraph { nodes: *v, arcs };
        g.validate()?;
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.nodes, self.arcs.len());
        for a in &self.arcs {
            out.push_str(&format!("{} {} {}\n", a.tail, a.head, a.label));
        }
        out
    }

    pub fn arc_index(&self, label: &str) -> Result<usize> {
        self.arcs
            .iter()
            .position(|a| a.label == label)
            .ok_or_else(|| Error::Input(format!("no arc labelled `{label}`")))
    }

    /// Node-arc incidence (+1 tail, -1 head) without the last node row.
    pub fn incidence(&self) -> RationalMatrix {
        let rows = self.nodes.saturating_sub(1);
        let mut m = RationalMatrix::zeros(rows, self.arcs.len());
        for (j, a) in self.arcs.iter().enumerate() {
            if a.tail < rows {
                m[(a.tail, j)] += Rational::one();
            }
            if a.head < rows {
                m[(a.head, j)] -= Rational::one();
            }
        }
        m
    }

    pub fn is_weakly_connected(&self) -> bool {
        if self.nodes == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.nodes];
        for a in &self.arcs {
            adj[a.tail].push(a.head);
            adj[a.head].push(a.tail);
        }
        let mut seen = vec![false; self.nodes];
        seen[0] = true;
        let mut q = VecDeque::from([0]);
        while let Some(u) = q.pop_front() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    q.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// No directed cycle (Kahn's algorithm).
    pub fn is_dag(&self) -> bool {
        let mut indeg = vec![0usize; self.nodes];
        let mut out = vec![Vec::new(); self.nodes];
        for a in &self.arcs {
            indeg[a.head] += 1;
            out[a.tail].push(a.head);
        }
        let mut q: VecDeque<usize> = (0..self.nodes).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(u) = q.pop_front() {
            seen += 1;
            for &w in &out[u] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    q.push_back(w);
                }
            }
        }
        seen == self.nodes
    }

    /// Linked form of the incidence matrix with `label`'s column as link.
    pub fn linked_form(
        &self,
        label: &str,
        position: LinkPosition,
    ) -> Result<(LinkedForm, Normalization)> {
        let j = self.arc_index(label)?;
        LinkedForm::normalize(&self.incidence(), j, position)
    }
}

fn fresh_label(used: &mut HashSet<String>, label: &str) -> String {
    let mut l = label.to_string();
    while used.contains(&l) {
        l.push('\'');
    }
    used.insert(l.clone());
    l
}

/// Glues `g1` and `g2` on the marked arcs.
pub fn graphic_connection(
    g1: &Digraph,
    p1: &str,
    g2: &Digraph,
    p2: &str,
    kind: GlueKind,
) -> Result<GraphicConnection> {
    let (i1, i2) = (g1.arc_index(p1)?, g2.arc_index(p2)?);
    let (e1, e2) = (&g1.arcs[i1], &g2.arcs[i2]);
    if e1.tail == e1.head {
        return Err(Error::LoopElement(i1));
    }
    if e2.tail == e2.head {
        return Err(Error::LoopElement(i2));
    }
    let mut map = vec![usize::MAX; g2.nodes];
    map[e2.tail] = e1.tail;
    if kind == GlueKind::Parallel {
        map[e2.head] = e1.head;
    }
    let mut next = g1.nodes;
    for slot in map.iter_mut() {
        if *slot == usize::MAX {
            *slot = next;
            next += 1;
        }
    }
    let mut used = HashSet::new();
    let mut arcs = Vec::new();
    for (j, a) in g1.arcs.iter().enumerate() {
        if kind == GlueKind::Series && j == i1 {
            continue;
        }
        arcs.push(Arc {
            tail: a.tail,
            head: a.head,
            label: fresh_label(&mut used, &a.label),
        });
    }
    for (j, a) in g2.arcs.iter().enumerate() {
        if j == i2 {
            continue;
        }
        arcs.push(Arc {
            tail: map[a.tail],
            head: map[a.head],
            label: fresh_label(&mut used, &a.label),
        });
    }
    let link_arc = match kind {
        GlueKind::Parallel => i1,
        GlueKind::Series => {
            arcs.push(Arc {
                tail: e1.head,
                head: map[e2.head],
                label: fresh_label(&mut used, "p"),
            });
            arcs.len() - 1
        }
    };
    let graph = Digraph { nodes: next, arcs };
    let incidence = graph.incidence();
    Ok(GraphicConnection {
        graph,
        incidence,
        link_arc,
    })
}

/// The two graphs of the worked example, with marked arcs `p1` and `p2`.
/// Undrawn orientations follow the listed node order, so both are acyclic.
pub fn fig1() -> (Digraph, Digraph) {
    // nodes: (1,0) (0,1) (2,1) (1,2) (0,3) (1,4)=u1 (2,3)=v1
    let g1 = Digraph::new(
        7,
        vec![
            (0, 1, "e1"),
            (1, 3, "e2"),
            (3, 4, "e3"),
            (4, 5, "e4"),
            (5, 6, "p1"),
            (3, 6, "e5"),
            (2, 3, "e6"),
            (0, 2, "e7"),
            (1, 2, "e8"),
        ],
    )
    .expect("fixture");
    // nodes: (3,1)=u2 (4,2) (5,1) (4,0)=v2
    let g2 = Digraph::new(
        4,
        vec![
            (0, 1, "f1"),
            (1, 2, "f2"),
            (2, 3, "f3"),
            (0, 3, "p2"),
            (1, 3, "f4"),
            (0, 2, "f5"),
        ],
    )
    .expect("fixture");
    (g1, g2)
}
