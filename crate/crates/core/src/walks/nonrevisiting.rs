use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::polytope::Skeleton;

use super::record::WalkRecord;

/// Largest facet count handled by the state search.
pub const NON_REVISITING_MAX_N: usize = 20;
/// Cap on explored `(vertex, visited set)` states.
pub const NON_REVISITING_MAX_STATES: usize = 4_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonRevisiting {
    Found(WalkRecord),
    None,
    /// Search skipped or cut off by the guardrail.
    Unknown(String),
}

impl NonRevisiting {
    pub fn found(&self) -> Option<&WalkRecord> {
        match self {
            NonRevisiting::Found(w) => Some(w),
            _ => None,
        }
    }
}

fn zero_mask(skel: &Skeleton, v: usize) -> u64 {
    skel.coords(v)
        .iter()
        .enumerate()
        .filter(|(_, c)| num_traits::Zero::is_zero(*c))
        .fold(0u64, |acc, (i, _)| acc | (1 << i))
}

/// Shortest non-revisiting walks from `u` to every allowed vertex. The
/// visited set starts as the facets through `u`; a step may only enter
/// facets not visited before.
pub fn non_revisiting_from_within(
    skel: &Skeleton,
    u: usize,
    allow: impl Fn(usize) -> bool,
) -> Result<std::result::Result<Vec<Option<Vec<usize>>>, String>> {
    if !skel.simple {
        return Err(Error::NotSimple);
    }
    if u >= skel.len() {
        return Err(Error::Input("vertex index out of range".into()));
    }
    let n = skel.coords(u).len();
    if n > NON_REVISITING_MAX_N {
        return Ok(Err(format!(
            "{n} facets exceed the cap of {NON_REVISITING_MAX_N}"
        )));
    }
    let masks: Vec<u64> = (0..skel.len()).map(|v| zero_mask(skel, v)).collect();
    let start = (u, masks[u]);
    let mut parent: HashMap<(usize, u64), (usize, u64)> = HashMap::new();
    parent.insert(start, start);
    let mut first: Vec<Option<(usize, u64)>> = vec![None; skel.len()];
    first[u] = Some(start);
    let mut queue = VecDeque::from([start]);
    while let Some((v, seen)) = queue.pop_front() {
        for &w in skel.neighbors(v) {
            if !allow(w) {
                continue;
            }
            let entered = masks[w] & !masks[v];
            if entered & seen != 0 {
                continue;
            }
            let state = (w, seen | masks[w]);
            if parent.contains_key(&state) {
                continue;
            }
            if parent.len() >= NON_REVISITING_MAX_STATES {
                return Ok(Err("state cap reached".into()));
            }
            parent.insert(state, (v, seen));
            first[w].get_or_insert(state);
            queue.push_back(state);
        }
    }
    let m = n - masks[u].count_ones() as usize;
    let mut out = Vec::with_capacity(skel.len());
    for end in first {
        let Some(mut st) = end else {
            out.push(None);
            continue;
        };
        let mut path = vec![st.0];
        while st != start {
            st = parent[&st];
            path.push(st.0);
        }
        path.reverse();
        if path.len() - 1 > m {
            return Err(Error::invariant(format!(
                "non-revisiting walk of length {} exceeds {m}",
                path.len() - 1
            )));
        }
        out.push(Some(path));
    }
    Ok(Ok(out))
}

/// Shortest non-revisiting walk from `u` to `v` in a simple polyhedron.
pub fn non_revisiting_walk(skel: &Skeleton, u: usize, v: usize) -> Result<NonRevisiting> {
    non_revisiting_within(skel, u, v, |_| true)
}

/// As [`non_revisiting_walk`], staying inside an allowed vertex set (a face).
pub fn non_revisiting_within(
    skel: &Skeleton,
    u: usize,
    v: usize,
    allow: impl Fn(usize) -> bool,
) -> Result<NonRevisiting> {
    if v >= skel.len() {
        return Err(Error::Input("vertex index out of range".into()));
    }
    Ok(match non_revisiting_from_within(skel, u, allow)? {
        Err(why) => NonRevisiting::Unknown(why),
        Ok(mut all) => match all[v].take() {
            // one new facet per step: at most the nonzero count of `u`
            Some(p) => {
                let hirsch = skel.vertices[u].support.len();
                NonRevisiting::Found(WalkRecord::new(p, "non-revisiting", Some(hirsch)))
            }
            None => NonRevisiting::None,
        },
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::connect::fixtures::pentagon;
    use crate::polytope::{build_skeleton, StdPolyhedron};

    /// `[0,1]^d` as `x + t = 1`.
    pub(crate) fn cube(d: usize) -> StdPolyhedron {
        let mut rows = vec![vec![0i64; 2 * d]; d];
        for (i, r) in rows.iter_mut().enumerate() {
            r[i] = 1;
            r[d + i] = 1;
        }
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        StdPolyhedron::from_i64(&refs, &vec![1; d]).unwrap()
    }

    #[test]
    fn cube_antipodal_length_three() {
        let skel = build_skeleton(&cube(3)).unwrap();
        for u in 0..skel.len() {
            for v in 0..skel.len() {
                let w = non_revisiting_walk(&skel, u, v).unwrap();
                let w = w.found().expect("cube is non-revisiting");
                w.verify(&skel, u, v).unwrap();
                let hamming = skel
                    .coords(u)
                    .iter()
                    .zip(skel.coords(v).iter())
                    .take(3)
                    .filter(|(a, b)| a != b)
                    .count();
                assert_eq!(w.length, hamming);
            }
        }
    }

    #[test]
    fn adjacent_vertices_one_step() {
        let skel = build_skeleton(&pentagon().poly).unwrap();
        let (a, b) = skel.edges[0];
        let w = non_revisiting_walk(&skel, a, b).unwrap();
        assert_eq!(w.found().unwrap().length, 1);
    }

    #[test]
    fn pentagon_distance_two_pair() {
        let skel = build_skeleton(&pentagon().poly).unwrap();
        for u in 0..skel.len() {
            for v in 0..skel.len() {
                let w = non_revisiting_walk(&skel, u, v).unwrap();
                assert_eq!(w.found().unwrap().length, skel.distance(u, v).unwrap());
            }
        }
    }
}
