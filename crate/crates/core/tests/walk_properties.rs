//! Walk invariants on random connection instances.
mod common;

use num_traits::Signed;
use polyconnect::connect::{perturb_connection, ConnectionInstance, ConnectionKind};
use polyconnect::harness::{generate_corpus, CorpusSpec, Generator, InstanceBody, Sizes};
use polyconnect::polytope::{build_skeleton, Guardrail, Sense};
use polyconnect::walks::{non_revisiting_walk, s_monotone_walk, ParallelContext, SeriesContext};
use polyconnect::{Error, Rational, Skeleton};
use proptest::prelude::*;

/// Perturbed random linked instances of the requested kind for one seed.
fn instances(seed: u64, m1: usize, m2: usize, kind: ConnectionKind) -> Vec<(ConnectionInstance, Skeleton)> {
    let sizes = Sizes { m1, n1: m1 + 2, m2, n2: m2 + 2 };
    let spec = CorpusSpec::new(Generator::RandomLinked, sizes, seed).with_samples(1, 2);
    generate_corpus(&spec)
        .unwrap()
        .into_iter()
        .filter_map(|ci| match ci.body {
            InstanceBody::Connection(c) if c.kind == kind => Some(c),
            _ => None,
        })
        .filter_map(|c| {
            let inst = perturb_connection(&c, &Guardrail::default()).ok()?.instance;
            let skel = build_skeleton(&inst.poly).ok()?;
            Some((inst, skel))
        })
        .collect()
}

fn graphic(seed: u64) -> Vec<(ConnectionInstance, Skeleton)> {
    let sizes = Sizes { m1: 3, n1: 4, m2: 3, n2: 4 };
    let spec = CorpusSpec::new(Generator::Graphic, sizes, seed).with_samples(1, 1);
    generate_corpus(&spec)
        .unwrap()
        .into_iter()
        .filter_map(|ci| match ci.body {
            InstanceBody::Connection(c) => Some(c),
            InstanceBody::Plain(_) => None,
        })
        .filter_map(|c| {
            let skel = build_skeleton(&c.poly).ok()?;
            Some((c, skel))
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parallel_walks_are_verified_and_bounded(seed in any::<u64>(), m1 in 1usize..=2, m2 in 1usize..=2) {
        for (inst, skel) in instances(seed, m1, m2, ConnectionKind::Parallel) {
            let ctx = ParallelContext::new(&inst, &skel).unwrap();
            for u in 0..skel.len() {
                for v in 0..skel.len() {
                    if u == v {
                        continue;
                    }
                    let w = ctx.walk(u, v).unwrap();
                    prop_assert!(w.record.verify(&skel, u, v).is_ok());
                    prop_assert!(w.record.within_bound(), "{:?}", w.record);
                    prop_assert!(skel.distance(u, v).unwrap() <= w.record.length);
                    let back = ctx.walk(v, u).unwrap();
                    prop_assert!(back.record.reversed().verify(&skel, u, v).is_ok());
                }
            }
        }
    }

    #[test]
    fn series_walks_are_verified_and_bounded(seed in any::<u64>(), m1 in 1usize..=2, m2 in 1usize..=2) {
        for (inst, skel) in instances(seed, m1, m2, ConnectionKind::Series) {
            let ctx = match SeriesContext::new(&inst, &skel, false) {
                Err(Error::Empty) => continue,
                other => other.unwrap(),
            };
            for u in 0..skel.len() {
                for v in u + 1..skel.len() {
                    let w = ctx.walk(u, v).unwrap();
                    prop_assert!(w.record.verify(&skel, u, v).is_ok());
                    prop_assert!(w.record.within_bound(), "{:?}", w.record);
                    prop_assert!(w.record.length <= w.raw_length);
                }
            }
        }
    }

    #[test]
    fn non_revisiting_walks_use_at_most_m_steps(seed in any::<u64>(), m1 in 1usize..=2, m2 in 1usize..=2) {
        for kind in [ConnectionKind::Parallel, ConnectionKind::Series] {
            for (inst, skel) in instances(seed, m1, m2, kind) {
                for u in 0..skel.len() {
                    for v in 0..skel.len() {
                        if let Some(w) = non_revisiting_walk(&skel, u, v).unwrap().found() {
                            prop_assert!(w.length <= inst.poly.m());
                            prop_assert!(w.verify_path(&skel, u, v).is_ok());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn s_monotone_walks_move_s_strictly(seed in any::<u64>(), m1 in 1usize..=2, m2 in 1usize..=2) {
        for (inst, skel) in instances(seed, m1, m2, ConnectionKind::Series) {
            let s = inst.split.s;
            for start in 0..skel.len() {
                for sense in [Sense::Max, Sense::Min] {
                    let w = match s_monotone_walk(&inst.poly, &skel, start, s, sense) {
                        Err(Error::Unbounded { .. }) => continue,
                        other => other.unwrap(),
                    };
                    let vals: Vec<Rational> = w.vertices.iter().map(|&i| skel.coords(i)[s].clone()).collect();
                    for pair in vals.windows(2) {
                        match sense {
                            Sense::Max => prop_assert!(pair[1] > pair[0]),
                            Sense::Min => prop_assert!(pair[1] < pair[0]),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn integral_s_steps_are_whole(seed in any::<u64>()) {
        for (inst, skel) in graphic(seed) {
            if inst.kind != ConnectionKind::Series {
                continue;
            }
            let s = inst.split.s;
            for start in 0..skel.len() {
                for sense in [Sense::Max, Sense::Min] {
                    let Ok(w) = s_monotone_walk(&inst.poly, &skel, start, s, sense) else { continue };
                    let span = (skel.coords(w.end())[s].clone() - skel.coords(start)[s].clone()).abs();
                    prop_assert!(Rational::from_integer(w.length.into()) <= span);
                }
            }
        }
    }
}

#[test]
fn generators_feed_the_properties() {
    let par = (0..4).map(|s| instances(s, 2, 2, ConnectionKind::Parallel).len()).sum::<usize>();
    let ser = (0..4).map(|s| instances(s, 2, 2, ConnectionKind::Series).len()).sum::<usize>();
    let gr = (0..4).map(|s| graphic(s).len()).sum::<usize>();
    assert!(par > 0 && ser > 0 && gr > 0);
}
