use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use super::enumerate::feasible_bases;
use super::poly::{Guardrail, StdPolyhedron};
use super::simplex::BasisTableau;
use crate::error::{Error, Result};
use crate::exactlin::{rat, Rational, RationalVector};

/// A simple right-hand-side perturbation `b' = b + sum_k eps^k A_{beta(k)}`.
#[derive(Clone, Debug)]
pub struct Perturbation {
    pub poly: StdPolyhedron,
    /// `None` when the input was already simple.
    pub epsilon: Option<Rational>,
    /// Ordered feasible basis whose columns form the perturbation direction.
    pub direction: Option<Vec<usize>>,
    /// Every feasible basis of the input stays feasible and none appears.
    pub preserves_bases: bool,
    /// Feasible bases of the input that are infeasible after perturbing.
    pub lost_bases: Vec<Vec<usize>>,
}

const MAX_HALVINGS: usize = 60;

fn lex_sign(v: impl Iterator<Item = Rational>) -> Ordering {
    for x in v {
        if x.is_positive() {
            return Ordering::Greater;
        }
        if x.is_negative() {
            return Ordering::Less;
        }
    }
    Ordering::Equal
}

/// Bases that stay feasible for all small eps along `order`.
fn lex_feasible(tableaus: &[(Vec<usize>, BasisTableau)], order: &[usize]) -> BTreeSet<Vec<usize>> {
    tableaus
        .iter()
        .filter(|(_, t)| {
            (0..t.basis().len()).all(|i| {
                let row = std::iter::once(t.rhs()[i].clone())
                    .chain(order.iter().map(|&c| t.entry(i, c).clone()));
                lex_sign(row) == Ordering::Greater
            })
        })
        .map(|(b, _)| b.clone())
        .collect()
}

/// `b + sum_{k>=1} eps^k A_{order[k-1]}`.
pub fn perturbed_rhs(p: &StdPolyhedron, order: &[usize], eps: &Rational) -> RationalVector {
    let mut b = p.b().clone();
    let mut pow = eps.clone();
    for &c in order {
        for i in 0..p.m() {
            if !p.a()[(i, c)].is_zero() {
                b[i] += &pow * &p.a()[(i, c)];
            }
        }
        pow *= eps;
    }
    b
}

pub fn perturb_to_simple(p: &StdPolyhedron) -> Result<Perturbation> {
    perturb_to_simple_with(p, &Guardrail::default())
}

pub fn perturb_to_simple_with(p: &StdPolyhedron, guard: &Guardrail) -> Result<Perturbation> {
    let m = p.m();
    let fb = feasible_bases(p, guard)?;
    if fb.is_empty() {
        return Err(Error::Empty);
    }
    let simple = {
        let distinct: BTreeSet<&RationalVector> = fb.iter().map(|(_, x)| x).collect();
        distinct.len() == fb.len() && fb.iter().all(|(_, x)| x.support().len() == m)
    };
    if simple {
        return Ok(Perturbation {
            poly: p.clone(),
            epsilon: None,
            direction: None,
            preserves_bases: true,
            lost_bases: vec![],
        });
    }
    let all: BTreeSet<Vec<usize>> = fb.iter().map(|(b, _)| b.clone()).collect();
    let tableaus: Vec<(Vec<usize>, BasisTableau)> = fb
        .iter()
        .map(|(b, _)| {
            (
                b.clone(),
                BasisTableau::from_poly(p, b).expect("feasible bases are nonsingular"),
            )
        })
        .collect();

    let mut best: Option<(Vec<usize>, BTreeSet<Vec<usize>>)> = None;
    'search: for (beta, _) in &fb {
        let reversed: Vec<usize> = beta.iter().rev().copied().collect();
        for order in [beta.clone(), reversed] {
            let lex = lex_feasible(&tableaus, &order);
            let better = best.as_ref().map_or(true, |(_, l)| lex.len() > l.len());
            if better {
                let full = lex == all;
                best = Some((order, lex));
                if full {
                    break 'search;
                }
            }
        }
    }
    let (order, predicted) = best.ok_or_else(|| Error::invariant("no perturbation direction"))?;

    let mut eps = rat(1, 2);
    for _ in 0..MAX_HALVINGS {
        let q = p.with_rhs(perturbed_rhs(p, &order, &eps))?;
        let got = feasible_bases(&q, guard)?;
        let ok = got.iter().all(|(_, x)| x.support().len() == m)
            && got.iter().map(|(b, _)| b.clone()).collect::<BTreeSet<_>>() == predicted;
        if ok {
            let lost: Vec<Vec<usize>> = all.difference(&predicted).cloned().collect();
            return Ok(Perturbation {
                poly: q,
                epsilon: Some(eps),
                direction: Some(order),
                preserves_bases: lost.is_empty(),
                lost_bases: lost,
            });
        }
        eps /= Rational::one() + Rational::one();
    }
    Err(Error::invariant("perturbation did not stabilise"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{build_skeleton, diameter, enumerate_vertices, is_simple};

    #[test]
    fn simple_input_is_a_fixed_point() {
        let p = StdPolyhedron::from_i64(&[&[1, 1, 0], &[1, 2, 1]], &[2, 3]).unwrap();
        let r = perturb_to_simple(&p).unwrap();
        assert_eq!(r.poly, p);
        assert!(r.epsilon.is_none());
    }

    #[test]
    fn degenerate_origin_becomes_segment() {
        let p = StdPolyhedron::from_i64(&[&[1, 1]], &[0]).unwrap();
        let r = perturb_to_simple(&p).unwrap();
        let eps = r.epsilon.clone().unwrap();
        assert_eq!(r.poly.b()[0], eps);
        assert_eq!(enumerate_vertices(&r.poly).unwrap().len(), 2);
        assert!(r.preserves_bases);
    }

    #[test]
    fn degenerate_parallel_fixture() {
        let p = StdPolyhedron::from_i64(
            &[&[1, 1, 0, 0, 0], &[1, 2, 1, 1, 0], &[0, 0, 0, 1, 1]],
            &[2, 5, 1],
        )
        .unwrap();
        assert!(!is_simple(&p).unwrap());
        let r = perturb_to_simple(&p).unwrap();
        assert!(is_simple(&r.poly).unwrap());
        let before = build_skeleton(&p).unwrap();
        let after = build_skeleton(&r.poly).unwrap();
        assert!(after.len() >= before.len());
        assert!(diameter(&after).unwrap() >= diameter(&before).unwrap());
    }

    #[test]
    fn infeasible_rhs_direction_is_avoided() {
        // b + (eps, eps^2) would be infeasible here
        let p = StdPolyhedron::from_i64(&[&[1, 1], &[1, 2]], &[0, 0]).unwrap();
        let r = perturb_to_simple(&p).unwrap();
        assert_eq!(enumerate_vertices(&r.poly).unwrap().len(), 1);
        assert!(is_simple(&r.poly).unwrap());
    }

    #[test]
    fn empty_input() {
        let p = StdPolyhedron::from_i64(&[&[1, 1]], &[-1]).unwrap();
        assert!(matches!(perturb_to_simple(&p), Err(Error::Empty)));
    }
}
