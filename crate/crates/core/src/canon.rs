//! Isomorphism classes of triple systems under relabeling of the lines.
//!
//! The canonical key is the lexicographically least sorted triple list over
//! all relabelings. It is built one label at a time: in a sorted list the
//! triples whose smallest label is `a` form a contiguous run, and inside that
//! run most label choices are forced. Only the order and orientation of
//! triples whose two partners are still unlabelled branch, and so does the
//! choice of line for a fresh label (always one of largest remaining degree).

use std::collections::BTreeMap;
use std::fmt;

use crate::arrangement::{Label, Permutation, Triple, TripleSystem};
use crate::error::{Error, Result};

/// The least relabeling of a triple system; equal keys mean isomorphic systems.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(TripleSystem);

impl CanonicalKey {
    pub fn system(&self) -> &TripleSystem {
        &self.0
    }

    pub fn into_system(self) -> TripleSystem {
        self.0
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

struct Search<'a> {
    n: usize,
    /// For each line (0-based), the other two lines of each triple through it.
    partners: &'a [Vec<(usize, usize)>],
    label_of: Vec<Label>,
    line_of: Vec<usize>,
    assigned: usize,
    emitted: Vec<[Label; 3]>,
    best: Option<(Vec<[Label; 3]>, Vec<Label>)>,
}

const NONE: usize = usize::MAX;

impl Search<'_> {
    fn assign(&mut self, line: usize) -> Label {
        self.assigned += 1;
        let l = self.assigned as Label;
        self.label_of[line] = l;
        self.line_of[l as usize] = line;
        l
    }

    fn unassign(&mut self, line: usize) {
        let l = self.label_of[line] as usize;
        debug_assert_eq!(l, self.assigned);
        self.label_of[line] = 0;
        self.line_of[l] = NONE;
        self.assigned -= 1;
    }

    /// Pushes a triple; returns false when the prefix is now worse than the best.
    fn emit(&mut self, t: [Label; 3]) -> bool {
        self.emitted.push(t);
        match &self.best {
            None => true,
            Some((best, _)) => self.emitted[..] <= best[..self.emitted.len()],
        }
    }

    fn finish(&mut self) {
        if let Some((best, _)) = &self.best {
            if self.emitted >= *best {
                return;
            }
        }
        let mut labels = self.label_of.clone();
        let mut next = self.assigned as Label;
        for l in labels.iter_mut().filter(|l| **l == 0) {
            next += 1;
            *l = next;
        }
        self.best = Some((self.emitted.clone(), labels));
    }

    fn remaining_degree(&self, line: usize) -> usize {
        // only called for unlabelled lines, whose triples are all still open
        self.partners[line].len()
    }

    fn level(&mut self, a: usize) {
        if a > self.n {
            self.finish();
            return;
        }
        if self.line_of[a] != NONE {
            self.process(a);
            return;
        }
        let free: Vec<usize> = (0..self.n).filter(|&l| self.label_of[l] == 0).collect();
        let top = free.iter().map(|&l| self.remaining_degree(l)).max().unwrap_or(0);
        if top == 0 {
            self.finish();
            return;
        }
        for line in free {
            if self.remaining_degree(line) == top {
                self.assign(line);
                self.process(a);
                self.unassign(line);
            }
        }
    }

    /// Emits the run of triples whose smallest label is `a`.
    fn process(&mut self, a: usize) {
        let line = self.line_of[a];
        let a8 = a as Label;
        // (smallest partner label, other partner label or 0, line to label next)
        let mut forced: Vec<(Label, Label, usize)> = Vec::new();
        let mut open: Vec<(usize, usize)> = Vec::new();
        for &(p, q) in &self.partners[line] {
            let (lp, lq) = (self.label_of[p], self.label_of[q]);
            if (lp != 0 && (lp as usize) < a) || (lq != 0 && (lq as usize) < a) {
                continue;
            }
            match (lp, lq) {
                (0, 0) => open.push((p, q)),
                (0, _) => forced.push((lq, 0, p)),
                (_, 0) => forced.push((lp, 0, q)),
                _ => forced.push((lp.min(lq), lp.max(lq), NONE)),
            }
        }
        forced.sort_unstable_by_key(|f| f.0);

        let mark = self.emitted.len();
        let mut fresh = Vec::new();
        let mut ok = true;
        for &(x, y, new_line) in &forced {
            let t = if new_line == NONE {
                [a8, x, y]
            } else {
                fresh.push(new_line);
                [a8, x, self.assign(new_line)]
            };
            if !self.emit(t) {
                ok = false;
                break;
            }
        }
        if ok {
            let mut used = vec![false; open.len()];
            self.arrange_open(a, &open, &mut used);
        }
        self.emitted.truncate(mark);
        for &l in fresh.iter().rev() {
            self.unassign(l);
        }
    }

    /// Branches over the order and orientation of triples with two fresh partners.
    fn arrange_open(&mut self, a: usize, open: &[(usize, usize)], used: &mut [bool]) {
        if used.iter().all(|&u| u) {
            self.level(a + 1);
            return;
        }
        for i in 0..open.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            let (p, q) = open[i];
            for (x, y) in [(p, q), (q, p)] {
                let lx = self.assign(x);
                let ly = self.assign(y);
                if self.emit([a as Label, lx, ly]) {
                    self.arrange_open(a, open, used);
                }
                self.emitted.pop();
                self.unassign(y);
                self.unassign(x);
            }
            used[i] = false;
        }
    }
}

/// Canonical key plus a permutation carrying `ts` onto it.
pub fn canonical_form(ts: &TripleSystem) -> (CanonicalKey, Permutation) {
    let n = ts.n() as usize;
    let mut partners = vec![Vec::new(); n];
    for t in ts.triples() {
        let [a, b, c] = t.labels().map(|l| l as usize - 1);
        partners[a].push((b, c));
        partners[b].push((a, c));
        partners[c].push((a, b));
    }
    let mut s = Search {
        n,
        partners: &partners,
        label_of: vec![0; n],
        line_of: vec![NONE; n + 2],
        assigned: 0,
        emitted: Vec::with_capacity(ts.len()),
        best: None,
    };
    s.level(1);
    let (triples, labels) = s.best.expect("search always completes once");
    let perm = Permutation::from_images(labels).expect("labels form a bijection");
    let key = TripleSystem::new(
        ts.n(),
        triples
            .into_iter()
            .map(|[a, b, c]| Triple::new(a, b, c).expect("distinct labels")),
    )
    .expect("relabeling preserves validity");
    debug_assert_eq!(ts.relabel(&perm), key);
    (CanonicalKey(key), perm)
}

pub fn canonical_key(ts: &TripleSystem) -> CanonicalKey {
    canonical_form(ts).0
}

/// `Some(pi)` with `a.relabel(pi) == b` when the systems are isomorphic.
pub fn are_isomorphic(a: &TripleSystem, b: &TripleSystem) -> Result<Option<Permutation>> {
    if a.n() != b.n() {
        return Err(Error::LineCountMismatch(a.n() as u32, b.n() as u32));
    }
    if a.len() != b.len() {
        return Ok(None);
    }
    let (ka, pa) = canonical_form(a);
    let (kb, pb) = canonical_form(b);
    if ka != kb {
        return Ok(None);
    }
    let pi = pb.inverse().compose(&pa);
    if a.relabel(&pi) != *b {
        unreachable!("witness permutation failed its image check");
    }
    Ok(Some(pi))
}

/// One isomorphism class found by [`dedupe`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Class {
    pub key: CanonicalKey,
    /// First input system in this class.
    pub representative: TripleSystem,
    pub multiplicity: u64,
}

/// Groups systems by canonical key, sorted by key.
pub fn dedupe<'a>(systems: impl IntoIterator<Item = &'a TripleSystem>) -> Vec<Class> {
    let mut classes: BTreeMap<CanonicalKey, Class> = BTreeMap::new();
    for ts in systems {
        let key = canonical_key(ts);
        classes
            .entry(key.clone())
            .and_modify(|c| c.multiplicity += 1)
            .or_insert_with(|| Class {
                key,
                representative: ts.clone(),
                multiplicity: 1,
            });
    }
    classes.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn all_perms(n: Label) -> Vec<Permutation> {
        fn rec(rest: &mut Vec<Label>, cur: &mut Vec<Label>, out: &mut Vec<Permutation>) {
            if rest.is_empty() {
                out.push(Permutation::from_images(cur.clone()).unwrap());
                return;
            }
            for i in 0..rest.len() {
                let x = rest.remove(i);
                cur.push(x);
                rec(rest, cur, out);
                cur.pop();
                rest.insert(i, x);
            }
        }
        let mut out = Vec::new();
        rec(&mut (1..=n).collect(), &mut Vec::new(), &mut out);
        out
    }

    fn brute_key(ts: &TripleSystem) -> TripleSystem {
        all_perms(ts.n())
            .iter()
            .map(|p| ts.relabel(p))
            .min_by(|x, y| x.triples().cmp(y.triples()))
            .unwrap()
    }

    #[test]
    fn matches_exhaustive_minimum_on_small_systems() {
        let cases: &[(Label, &[[Label; 3]])] = &[
            (3, &[]),
            (4, &[[2, 3, 4]]),
            (6, &[[1, 2, 3], [3, 4, 5], [1, 5, 6]]),
            (6, &[[2, 4, 6], [1, 3, 5]]),
            (7, &[[1, 2, 3], [1, 4, 5], [1, 6, 7], [2, 4, 6], [3, 5, 6]]),
            (7, &[[1, 2, 4], [2, 3, 5], [3, 4, 6], [4, 5, 7], [1, 5, 6], [2, 6, 7], [1, 3, 7]]),
        ];
        for &(n, triples) in cases {
            let ts = TripleSystem::from_arrays(n, triples).unwrap();
            assert_eq!(*canonical_key(&ts).system(), brute_key(&ts), "{ts}");
        }
    }

    #[test]
    fn key_permutation_maps_onto_key() {
        let c1 = catalog::list(1);
        let (key, perm) = canonical_form(&c1);
        assert_eq!(c1.relabel(&perm), *key.system());
        assert_eq!(key.system().len(), 19);
    }

    #[test]
    fn paper_lists_are_pairwise_distinct() {
        let keys: Vec<_> = catalog::all_lists().iter().map(|(_, ts)| canonical_key(ts)).collect();
        for i in 0..keys.len() {
            for j in i + 1..keys.len() {
                assert_ne!(keys[i], keys[j], "C{} and C{}", i + 1, j + 1);
            }
        }
    }

    #[test]
    fn reversed_labels_are_isomorphic() {
        let c3 = catalog::list(3);
        // 1 fixed, 2..12 reversed
        let images: Vec<Label> = std::iter::once(1).chain((2..=12).rev()).collect();
        let swapped = c3.relabel(&Permutation::from_images(images).unwrap());
        let pi = are_isomorphic(&c3, &swapped).unwrap().expect("isomorphic");
        assert_eq!(c3.relabel(&pi), swapped);
        assert_eq!(are_isomorphic(&catalog::list(4), &catalog::list(5)).unwrap(), None);
        assert_eq!(are_isomorphic(&catalog::list(12), &catalog::list(8)).unwrap(), None);
        assert!(matches!(
            are_isomorphic(&c3, &TripleSystem::empty(11)),
            Err(Error::LineCountMismatch(12, 11))
        ));
    }

    #[test]
    fn dedupe_counts_multiplicities() {
        let c1 = catalog::list(1);
        let images: Vec<Label> = (1..=12).map(|l| if l == 12 { 1 } else { l + 1 }).collect();
        let moved = c1.relabel(&Permutation::from_images(images).unwrap());
        let classes = dedupe(&[c1.clone(), moved, catalog::list(2)]);
        assert_eq!(classes.len(), 2);
        let mut mult: Vec<u64> = classes.iter().map(|c| c.multiplicity).collect();
        mult.sort();
        assert_eq!(mult, vec![1, 2]);
        assert!(dedupe(&[]).is_empty());
    }
}
