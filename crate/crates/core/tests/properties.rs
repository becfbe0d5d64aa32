use std::collections::BTreeSet;

use proptest::prelude::*;

use orchard::arrangement::{double_points_of, green_tao_bound, profile_of, Permutation, Triple, TripleSystem};
use orchard::canon::{are_isomorphic, canonical_key, dedupe};
use orchard::io::records::{emit_records, parse_records, round15, ClassRecord, RecordFile, VerdictRecord};
use orchard::io::{format_triples, parse_triples};
use orchard::realize::{construction_plan, Method, Verdict};
use orchard::sweep::{apply_move, initial_state, is_terminal, legal_moves, StartPairing};
use orchard::{boroczky, catalog, HomLine64};

fn permutation(n: u8) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<u8>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

/// Greedy triple systems: random triples kept when they share no pair.
fn triple_system() -> impl Strategy<Value = TripleSystem> {
    (4u8..=10).prop_flat_map(|n| {
        proptest::collection::vec((1..=n, 1..=n, 1..=n), 0..30).prop_map(move |cands| {
            let mut used = BTreeSet::new();
            let mut triples = Vec::new();
            for (a, b, c) in cands {
                let Ok(t) = Triple::new(a, b, c) else { continue };
                if t.pairs().iter().all(|p| !used.contains(p)) {
                    used.extend(t.pairs());
                    triples.push(t);
                }
            }
            TripleSystem::new(n, triples).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn catalog_keys_survive_relabelling(perm in permutation(12)) {
        for index in [1, 6] {
            let ts = catalog::list(index);
            prop_assert_eq!(canonical_key(&ts.relabel(&perm)), canonical_key(&ts), "C{}", index);
        }
    }

    #[test]
    fn random_keys_survive_relabelling(ts in triple_system(), perm in permutation(10)) {
        let n = ts.n();
        let images: Vec<u8> = perm.images().iter().copied().filter(|&l| l <= n).collect();
        let perm = Permutation::from_images(images).unwrap();
        prop_assert_eq!(canonical_key(&ts.relabel(&perm)), canonical_key(&ts));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn witnesses_map_triples_exactly(ts in triple_system(), seed in any::<u64>()) {
        let n = ts.n() as usize;
        let mut images: Vec<u8> = (1..=ts.n()).collect();
        // cheap deterministic shuffle from the seed
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            images.swap(i, (s >> 33) as usize % (i + 1));
        }
        let moved = ts.relabel(&Permutation::from_images(images).unwrap());
        let pi = are_isomorphic(&ts, &moved).unwrap().expect("relabelled copy is isomorphic");
        prop_assert_eq!(ts.relabel(&pi), moved);
    }

    #[test]
    fn any_two_triples_share_at_most_one_label(ts in triple_system()) {
        for (i, a) in ts.triples().iter().enumerate() {
            for b in &ts.triples()[i + 1..] {
                let common = a.labels().iter().filter(|&&l| b.contains(l)).count();
                prop_assert!(common <= 1);
            }
        }
    }

    #[test]
    fn doubles_and_triples_partition_pairs(ts in triple_system()) {
        let n = ts.n() as usize;
        let mut pairs: Vec<(u8, u8)> = double_points_of(&ts);
        for t in ts.triples() {
            pairs.extend(t.pairs());
        }
        let distinct: BTreeSet<_> = pairs.iter().copied().collect();
        prop_assert_eq!(distinct.len(), pairs.len());
        prop_assert_eq!(pairs.len(), n * (n - 1) / 2);
        prop_assert!(profile_of(&ts).unwrap().pair_count_identity());
    }

    #[test]
    fn triple_lists_round_trip(ts in triple_system()) {
        prop_assert_eq!(parse_triples(&format_triples(&ts)).unwrap(), ts);
    }

    #[test]
    fn random_sweeps_keep_inversions(n in 3u8..=12, picks in proptest::collection::vec(any::<usize>(), 80)) {
        let p = StartPairing::standard(n).unwrap();
        let mut s = initial_state(&p);
        prop_assert!(s.inversions_match());
        let mut picks = picks.into_iter();
        while !is_terminal(&s) {
            let moves = legal_moves(&s);
            prop_assert!(!moves.is_empty());
            let pick = picks.next().unwrap_or(0);
            let before = s.crossed().len();
            let m = moves[pick % moves.len()];
            s = apply_move(&s, m).unwrap();
            let gained = s.crossed().len() - before;
            prop_assert_eq!(gained, if m.window().1 == 2 { 1 } else { 3 });
            prop_assert!(s.inversions_match());
        }
        let m = n as u32 - 1;
        prop_assert_eq!(s.crossed().len(), m * (m - 1) / 2);
    }

    #[test]
    fn plans_replay_their_incidences(index in 1usize..=13, params in proptest::collection::vec(-1.5f64..1.5, 3)) {
        let plan = construction_plan(&catalog::list(index)).unwrap();
        if let Some(c) = plan.evaluate(&params[..plan.parameters]) {
            for (i, t) in plan.system.triples().iter().enumerate() {
                for l in t.labels() {
                    let defined = plan.residuals.iter().all(|r| !(r.point == i && r.line == l as usize - 1));
                    if defined {
                        let v = c.lines[l as usize - 1].incidence(&c.points[i]);
                        prop_assert!(v < 1e-12, "C{} line {} point {}: {:e}", index, l, i, v);
                    }
                }
            }
        }
    }

    #[test]
    fn records_round_trip(index in 1usize..=13, mult in 1u64..1000, coords in proptest::collection::vec(-1e3f64..1e3, 36),
                          residual in 0f64..1e-10, realizable in any::<bool>()) {
        let mut rec = ClassRecord::new(&catalog::list(index), mult).unwrap();
        let verdict = if realizable {
            Verdict::Realizable {
                lines: coords.chunks(3).map(|c| HomLine64::new(c[0], c[1], c[2])).collect(),
                parameters: vec![coords[0] / 7.0],
                max_residual: residual,
                method: Method::RootSearch,
            }
        } else {
            Verdict::Obstructed { incidences: vec!["line 8 through [5,6,10]".into()], samples: 1000, max_value: residual }
        };
        rec.verdict = Some(VerdictRecord::from_verdict(&verdict));
        let file = RecordFile { classes: vec![rec.clone()], ..Default::default() };
        let text = emit_records(&file);
        let back = parse_records(&text).unwrap();
        prop_assert_eq!(&back.classes[0], &rec);
        prop_assert_eq!(emit_records(&back), text);
        if let Some(v) = &rec.verdict {
            for l in &v.lines {
                for x in l {
                    prop_assert_eq!(*x, round15(*x));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dedupe_ignores_order(
        (picks, shuffled) in proptest::collection::vec(0..13usize, 1..16)
            .prop_flat_map(|v| (Just(v.clone()), Just(v).prop_shuffle()))
    ) {
        let lists: Vec<TripleSystem> = catalog::all_lists().into_iter().map(|(_, ts)| ts).collect();
        let a = dedupe(picks.iter().map(|&i| &lists[i]));
        let b = dedupe(shuffled.iter().map(|&i| &lists[i]));
        let keys_a: Vec<_> = a.iter().map(|c| (c.key.clone(), c.multiplicity)).collect();
        let keys_b: Vec<_> = b.iter().map(|c| (c.key.clone(), c.multiplicity)).collect();
        prop_assert_eq!(&keys_a, &keys_b);
        // idempotent on representatives
        let again = dedupe(a.iter().map(|c| &c.representative));
        prop_assert_eq!(
            a.iter().map(|c| c.key.clone()).collect::<Vec<_>>(),
            again.iter().map(|c| c.key.clone()).collect::<Vec<_>>()
        );
    }
}

#[test]
fn catalog_lists_are_pairwise_distinct() {
    let keys: BTreeSet<_> = catalog::all_lists().iter().map(|(_, ts)| canonical_key(ts)).collect();
    assert_eq!(keys.len(), 13);
    assert_eq!(green_tao_bound(12), 19);
    for (_, ts) in catalog::all_lists() {
        assert!(ts.len() as u64 <= green_tao_bound(12));
    }
}

#[test]
fn triple_clusters_are_tight() {
    for n in [6u32, 8, 10, 12, 14, 16, 18] {
        let lines: Vec<HomLine64> = boroczky::generate(n).unwrap();
        let eps = 1e-9;
        for c in boroczky::cluster_intersections(&lines, eps).unwrap() {
            if c.lines.len() != 3 {
                continue;
            }
            let [a, b, d] = [c.lines[0], c.lines[1], c.lines[2]].map(|l| lines[l as usize - 1]);
            for q in [a.meet(&b), a.meet(&d), b.meet(&d)] {
                assert!(q.distance(&c.point) < eps, "n={n} {:?}", c.lines);
            }
        }
    }
}
