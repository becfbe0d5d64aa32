//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use orchard::sweep::{Move, StartPairing};

/// Positions along line 1 as the enumerator sees them: pairs reversed.
pub fn start_sequence(p: &StartPairing) -> Vec<u8> {
    let mut seq = Vec::new();
    let mut label = 2;
    let pairs = p.pairs();
    while label <= p.n() {
        if pairs.contains(&(label, label + 1)) {
            seq.extend([label + 1, label]);
            label += 2;
        } else {
            seq.push(label);
            label += 1;
        }
    }
    seq
}

/// Every complete move sequence, no pruning, grouped by triple count
/// (flips plus the pairs already on line 1).
pub fn brute_force(p: &StartPairing, target: usize) -> BTreeSet<Vec<Move>> {
    fn go(seq: &mut Vec<u8>, word: &mut Vec<Move>, flips: usize, want: usize, out: &mut BTreeSet<Vec<Move>>) {
        let mut any = false;
        for i in 0..seq.len() {
            if i + 1 < seq.len() && seq[i] < seq[i + 1] {
                any = true;
                seq.swap(i, i + 1);
                word.push(Move::swap(i as u8 + 1));
                go(seq, word, flips, want, out);
                word.pop();
                seq.swap(i, i + 1);
            }
            if i + 2 < seq.len() && seq[i] < seq[i + 1] && seq[i + 1] < seq[i + 2] {
                any = true;
                seq[i..i + 3].reverse();
                word.push(Move::flip(i as u8 + 1));
                go(seq, word, flips + 1, want, out);
                word.pop();
                seq[i..i + 3].reverse();
            }
        }
        if !any && flips == want {
            out.insert(word.clone());
        }
    }
    let on_line_one = p.pairs().len();
    let mut out = BTreeSet::new();
    if target >= on_line_one {
        go(&mut start_sequence(p), &mut Vec::new(), 0, target - on_line_one, &mut out);
    }
    out
}

/// The lexicographically least word equivalent to `w` under swapping
/// adjacent moves with disjoint windows.
pub fn least_equivalent(w: &[Move]) -> Vec<Move> {
    let disjoint = |a: &Move, b: &Move| {
        let (sa, la) = a.window();
        let (sb, lb) = b.window();
        sa + la <= sb || sb + lb <= sa
    };
    let mut rest = w.to_vec();
    let mut out = Vec::with_capacity(w.len());
    while !rest.is_empty() {
        let j = (0..rest.len())
            .filter(|&j| rest[..j].iter().all(|m| disjoint(m, &rest[j])))
            .min_by_key(|&j| rest[j])
            .expect("the first move is always available");
        out.push(rest.remove(j));
    }
    out
}

/// All layouts of line 1 for `n` lines.
pub fn all_pairings(n: u8) -> Vec<StartPairing> {
    (0..=(n as usize - 1) / 2)
        .flat_map(|k| StartPairing::all_with_pairs(n, k).unwrap())
        .collect()
}
