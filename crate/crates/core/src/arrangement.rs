//! Incidence combinatorics of line and pseudoline arrangements.
//!
//! A [`TripleSystem`] records which triples of lines meet in a common
//! point. Every other pair of lines meets in an ordinary (double) point, so
//! for arrangements without points of multiplicity four or more the triple
//! system alone fixes the intersection census ([`Profile`]).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One-based line label.
pub type Label = u8;

/// Three distinct labels in increasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[u8; 3]", into = "[u8; 3]")]
pub struct Triple([Label; 3]);

impl Triple {
    pub fn new(a: Label, b: Label, c: Label) -> Result<Self> {
        let mut t = [a, b, c];
        t.sort_unstable();
        if t[0] == t[1] || t[1] == t[2] {
            return Err(Error::RepeatedLabel([a, b, c]));
        }
        if t[0] == 0 {
            return Err(Error::LabelOutOfRange { label: 0, n: t[2] as u32 });
        }
        Ok(Triple(t))
    }

    pub fn labels(&self) -> [Label; 3] {
        self.0
    }

    pub fn contains(&self, l: Label) -> bool {
        self.0.contains(&l)
    }

    pub fn pairs(&self) -> [(Label, Label); 3] {
        let [a, b, c] = self.0;
        [(a, b), (a, c), (b, c)]
    }

    /// The two members other than `l`, if `l` is a member.
    pub fn others(&self, l: Label) -> Option<(Label, Label)> {
        let [a, b, c] = self.0;
        match l {
            _ if l == a => Some((b, c)),
            _ if l == b => Some((a, c)),
            _ if l == c => Some((a, b)),
            _ => None,
        }
    }
}

impl TryFrom<[u8; 3]> for Triple {
    type Error = Error;
    fn try_from(v: [u8; 3]) -> Result<Self> {
        Triple::new(v[0], v[1], v[2])
    }
}

impl From<Triple> for [u8; 3] {
    fn from(t: Triple) -> Self {
        t.0
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "[{a},{b},{c}]")
    }
}

#[inline]
fn pair_slot(a: Label, b: Label, n: Label) -> usize {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    (lo as usize - 1) * n as usize + (hi as usize - 1)
}

/// A set of triples over the labels `1..=n` in which two distinct triples
/// share at most one label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TripleSystem {
    n: Label,
    triples: Vec<Triple>,
}

impl TripleSystem {
    pub fn new(n: Label, triples: impl IntoIterator<Item = Triple>) -> Result<Self> {
        let mut triples: Vec<Triple> = triples.into_iter().collect();
        triples.sort_unstable();
        let mut owner: Vec<Option<Triple>> = vec![None; n as usize * n as usize];
        for t in &triples {
            let [_, _, c] = t.labels();
            if c > n {
                return Err(Error::LabelOutOfRange { label: c as u32, n: n as u32 });
            }
            for (a, b) in t.pairs() {
                let s = pair_slot(a, b, n);
                if let Some(first) = owner[s] {
                    return Err(Error::RepeatedPair { a, b, first, second: *t });
                }
                owner[s] = Some(*t);
            }
        }
        Ok(TripleSystem { n, triples })
    }

    pub fn from_arrays(n: Label, triples: &[[Label; 3]]) -> Result<Self> {
        let ts = triples
            .iter()
            .map(|&[a, b, c]| Triple::new(a, b, c))
            .collect::<Result<Vec<_>>>()?;
        TripleSystem::new(n, ts)
    }

    pub fn empty(n: Label) -> Self {
        TripleSystem { n, triples: Vec::new() }
    }

    pub fn n(&self) -> Label {
        self.n
    }

    /// Triples in increasing lexicographic order.
    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.triples.binary_search(t).is_ok()
    }

    /// Number of triples through line `l`.
    pub fn degree(&self, l: Label) -> usize {
        self.triples.iter().filter(|t| t.contains(l)).count()
    }

    /// The triple containing both `a` and `b`, if any.
    pub fn triple_with(&self, a: Label, b: Label) -> Option<Triple> {
        self.triples
            .iter()
            .copied()
            .find(|t| t.contains(a) && t.contains(b))
    }

    pub fn relabel(&self, perm: &Permutation) -> TripleSystem {
        assert_eq!(perm.len(), self.n as usize, "permutation size mismatch");
        let mut triples: Vec<Triple> = self
            .triples
            .iter()
            .map(|t| {
                let [a, b, c] = t.labels();
                Triple::new(perm.apply(a), perm.apply(b), perm.apply(c))
                    .expect("permutation maps distinct labels to distinct labels")
            })
            .collect();
        triples.sort_unstable();
        TripleSystem { n: self.n, triples }
    }
}

impl fmt::Display for TripleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, t) in self.triples.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("]")
    }
}

/// A bijection of `1..=n`, stored as the image of each label.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<Label>);

impl Permutation {
    pub fn identity(n: Label) -> Self {
        Permutation((1..=n).collect())
    }

    /// Builds from the images of `1..=n`; `None` unless they form a bijection.
    pub fn from_images(images: Vec<Label>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x as usize > n || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Permutation(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, l: Label) -> Label {
        self.0[l as usize - 1]
    }

    pub fn images(&self) -> &[Label] {
        &self.0
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize - 1] = i as Label + 1;
        }
        Permutation(inv)
    }

    /// `self` after `first`: `x -> self(first(x))`.
    pub fn compose(&self, first: &Permutation) -> Permutation {
        Permutation(first.0.iter().map(|&x| self.apply(x)).collect())
    }
}

/// Intersection census `(n; t_2, t_3, ..., t_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Profile {
    n: u32,
    t: BTreeMap<u32, u64>,
}

impl Profile {
    /// `counts` lists `(r, t_r)`; zero counts are dropped, repeated `r` are summed.
    pub fn new(n: u32, counts: impl IntoIterator<Item = (u32, u64)>) -> Result<Self> {
        let mut t = BTreeMap::new();
        for (r, c) in counts {
            if r < 2 {
                return Err(Error::InvalidProfile(format!("multiplicity {r} below 2")));
            }
            if r > n {
                return Err(Error::InvalidProfile(format!(
                    "multiplicity {r} exceeds line count {n}"
                )));
            }
            if c > 0 {
                *t.entry(r).or_insert(0) += c;
            }
        }
        Ok(Profile { n, t })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn t(&self, r: u32) -> u64 {
        self.t.get(&r).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.t.iter().map(|(&r, &c)| (r, c))
    }

    pub fn points(&self) -> u64 {
        self.t.values().sum()
    }

    /// Fills in `t_2` from the pair count when `counts` leaves it out.
    pub fn with_implied_doubles(n: u32, counts: impl IntoIterator<Item = (u32, u64)>) -> Result<Self> {
        let mut p = Profile::new(n, counts)?;
        if p.t.contains_key(&2) {
            return Ok(p);
        }
        let (lines, counted) = p.pair_counts();
        if counted > lines {
            return Err(Error::PairCount { lines, counted });
        }
        let t2 = (lines - counted) as u64;
        if t2 > 0 {
            p.t.insert(2, t2);
        }
        Ok(p)
    }

    /// `n(n-1)/2 = sum_r r(r-1)/2 * t_r`, evaluated exactly.
    pub fn pair_count_identity(&self) -> bool {
        let (lines, counted) = self.pair_counts();
        lines == counted
    }

    fn pair_counts(&self) -> (u128, u128) {
        let n = self.n as u128;
        let lines = n * n.saturating_sub(1) / 2;
        let counted = self
            .t
            .iter()
            .map(|(&r, &c)| (r as u128) * (r as u128 - 1) / 2 * c as u128)
            .sum();
        (lines, counted)
    }

    /// `sum_r (3 - r) t_r`.
    pub fn melchior_lhs(&self) -> i128 {
        self.t
            .iter()
            .map(|(&r, &c)| (3 - r as i128) * c as i128)
            .sum()
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}", self.n)?;
        for (r, c) in &self.t {
            write!(f, " t{r}={c}")?;
        }
        Ok(())
    }
}

/// Face census: `p_j` regions bounded by `j` arcs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FaceVector {
    p: BTreeMap<u32, u64>,
}

impl FaceVector {
    pub fn new(counts: impl IntoIterator<Item = (u32, u64)>) -> Result<Self> {
        let mut p = BTreeMap::new();
        for (j, c) in counts {
            if j < 3 {
                return Err(Error::InvalidFaceVector(format!("face with {j} sides")));
            }
            if c > 0 {
                *p.entry(j).or_insert(0) += c;
            }
        }
        Ok(FaceVector { p })
    }

    pub fn p(&self, j: u32) -> u64 {
        self.p.get(&j).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.p.iter().map(|(&j, &c)| (j, c))
    }

    pub fn faces(&self) -> u64 {
        self.p.values().sum()
    }

    /// `sum_j j * p_j`, i.e. twice the number of edges.
    pub fn side_total(&self) -> u64 {
        self.p.iter().map(|(&j, &c)| j as u64 * c).sum()
    }

    /// `3 + sum_j (j - 3) p_j`.
    pub fn melchior_rhs(&self) -> i128 {
        3 + self
            .p
            .iter()
            .map(|(&j, &c)| (j as i128 - 3) * c as i128)
            .sum::<i128>()
    }
}

impl fmt::Display for FaceVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in &self.p {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "p{j}={c}")?;
        }
        Ok(())
    }
}

/// Census of a triple system: triples plus the pairs they leave uncovered.
pub fn profile_of(ts: &TripleSystem) -> Result<Profile> {
    let n = ts.n() as u64;
    let available = n * n.saturating_sub(1) / 2;
    let needed = 3 * ts.len() as u64;
    if needed > available {
        return Err(Error::OverSaturated {
            triples: ts.len(),
            needed,
            available,
        });
    }
    Profile::new(
        ts.n() as u32,
        [(2, available - needed), (3, ts.len() as u64)]
            .into_iter()
            .filter(|&(r, _)| r <= ts.n() as u32),
    )
}

/// Pairs `{i, j}` (with `i < j`) not covered by any triple.
pub fn double_points_of(ts: &TripleSystem) -> Vec<(Label, Label)> {
    let n = ts.n();
    let mut covered = vec![false; n as usize * n as usize];
    for t in ts.triples() {
        for (a, b) in t.pairs() {
            covered[pair_slot(a, b, n)] = true;
        }
    }
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if !covered[pair_slot(i, j, n)] {
                out.push((i, j));
            }
        }
    }
    out
}

/// Outcome of the necessary condition `t_2 >= 3 + sum_{r>=4} (r-3) t_r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Feasibility {
    Feasible,
    /// The bound fails by `deficit` double points.
    Infeasible { deficit: u64 },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible)
    }
}

impl fmt::Display for Feasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Feasibility::Feasible => f.write_str("feasible"),
            Feasibility::Infeasible { deficit } => {
                write!(f, "infeasible (Melchior deficit {deficit})")
            }
        }
    }
}

/// Melchior's inequality as a feasibility filter for a census.
///
/// Only a necessary condition: a feasible answer does not imply that an
/// arrangement with this census exists.
pub fn melchior_feasible(p: &Profile) -> Result<Feasibility> {
    if p.n() < 3 {
        return Err(Error::TooFewLines(p.n()));
    }
    let (lines, counted) = p.pair_counts();
    if lines != counted {
        return Err(Error::PairCount { lines, counted });
    }
    let required: u64 = 3 + p
        .counts()
        .filter(|&(r, _)| r >= 4)
        .map(|(r, c)| (r as u64 - 3) * c)
        .sum::<u64>();
    let t2 = p.t(2);
    Ok(if t2 >= required {
        Feasibility::Feasible
    } else {
        Feasibility::Infeasible {
            deficit: required - t2,
        }
    })
}

/// `sum_r (3 - r) t_r == 3 + sum_j (j - 3) p_j`, in exact integers.
pub fn melchior_identity_check(p: &Profile, f: &FaceVector) -> bool {
    p.melchior_lhs() == f.melchior_rhs()
}

/// `1 + floor(n(n-3)/6)`: the extremal triple-point count for large `n`.
///
/// Advisory only; for small `n` it is not a theorem. Returns 1 for `n < 3`.
pub fn green_tao_bound(n: u64) -> u64 {
    1 + n * n.saturating_sub(3) / 6
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn prof(n: u32, t: &[(u32, u64)]) -> Profile {
        Profile::new(n, t.iter().copied()).unwrap()
    }

    #[test]
    fn triple_rejects_repeats() {
        assert!(Triple::new(1, 1, 2).is_err());
        assert!(Triple::new(0, 1, 2).is_err());
        assert_eq!(Triple::new(3, 1, 2).unwrap().labels(), [1, 2, 3]);
    }

    #[test]
    fn system_rejects_shared_pairs() {
        let err = TripleSystem::from_arrays(4, &[[1, 2, 3], [1, 2, 4]]).unwrap_err();
        assert!(matches!(err, Error::RepeatedPair { a: 1, b: 2, .. }));
        assert!(TripleSystem::from_arrays(3, &[[1, 2, 4]]).is_err());
    }

    #[test]
    fn profile_examples() {
        let c1 = catalog::list(1);
        let p = profile_of(&c1).unwrap();
        assert_eq!((p.t(2), p.t(3)), (9, 19));
        assert!(p.pair_count_identity());

        let p = profile_of(&TripleSystem::empty(3)).unwrap();
        assert_eq!((p.t(2), p.t(3)), (3, 0));

        let p = profile_of(&TripleSystem::from_arrays(4, &[[1, 2, 3]]).unwrap()).unwrap();
        assert_eq!((p.t(2), p.t(3)), (3, 1));
    }

    #[test]
    fn profile_of_saturated_systems() {
        // Fano plane: 7 triples use all 21 pairs.
        let fano = TripleSystem::from_arrays(
            7,
            &[[1, 2, 3], [1, 4, 5], [1, 6, 7], [2, 4, 6], [2, 5, 7], [3, 4, 7], [3, 5, 6]],
        )
        .unwrap();
        let p = profile_of(&fano).unwrap();
        assert_eq!((p.t(2), p.t(3)), (0, 7));
        let tiny = TripleSystem::from_arrays(3, &[[1, 2, 3]]).unwrap();
        assert_eq!(profile_of(&tiny).unwrap().t(2), 0);
    }

    #[test]
    fn pair_count_examples() {
        assert!(prof(12, &[(2, 9), (3, 19)]).pair_count_identity());
        assert!(prof(9, &[(3, 12)]).pair_count_identity());
        assert!(!prof(3, &[(2, 2)]).pair_count_identity());
    }

    #[test]
    fn melchior_feasibility_examples() {
        assert_eq!(
            melchior_feasible(&prof(9, &[(3, 12)])).unwrap(),
            Feasibility::Infeasible { deficit: 3 }
        );
        assert_eq!(
            melchior_feasible(&prof(21, &[(3, 28), (4, 21)])).unwrap(),
            Feasibility::Infeasible { deficit: 24 }
        );
        assert_eq!(
            melchior_feasible(&prof(12, &[(2, 9), (3, 19)])).unwrap(),
            Feasibility::Feasible
        );
        assert_eq!(
            melchior_feasible(&prof(45, &[(3, 120), (4, 45), (5, 36)])).unwrap(),
            Feasibility::Infeasible { deficit: 120 }
        );
    }

    #[test]
    fn implied_doubles() {
        let p = Profile::with_implied_doubles(13, [(3, 26)]).unwrap();
        assert_eq!(p.t(2), 0);
        assert!(p.pair_count_identity());
        let p = Profile::with_implied_doubles(12, [(3, 19)]).unwrap();
        assert_eq!(p.t(2), 9);
        assert!(Profile::with_implied_doubles(5, [(3, 4)]).is_err());
        // explicit t2 is kept even when wrong
        assert_eq!(Profile::with_implied_doubles(4, [(2, 5)]).unwrap().t(2), 5);
    }

    #[test]
    fn melchior_feasibility_errors() {
        assert_eq!(
            melchior_feasible(&prof(2, &[(2, 1)])).unwrap_err(),
            Error::TooFewLines(2)
        );
        assert!(matches!(
            melchior_feasible(&prof(4, &[(2, 5)])).unwrap_err(),
            Error::PairCount { .. }
        ));
    }

    #[test]
    fn melchior_identity_examples() {
        let fv = |c: &[(u32, u64)]| FaceVector::new(c.iter().copied()).unwrap();
        assert!(melchior_identity_check(&prof(3, &[(2, 3)]), &fv(&[(3, 4)])));
        assert!(melchior_identity_check(&prof(4, &[(2, 3), (3, 1)]), &fv(&[(3, 6)])));
        let orchard = prof(12, &[(2, 9), (3, 19)]);
        assert!(!melchior_identity_check(&orchard, &fv(&[(3, 40), (4, 8)]))); // sum (j-3)p_j = 8
        assert!(melchior_identity_check(&orchard, &fv(&[(3, 42), (4, 6)])));
    }

    #[test]
    fn green_tao_examples() {
        assert_eq!(green_tao_bound(12), 19);
        assert_eq!(green_tao_bound(13), 22);
        assert_eq!(green_tao_bound(3), 1);
    }

    #[test]
    fn double_points_examples() {
        let c1 = catalog::list(1);
        let d = double_points_of(&c1);
        assert_eq!(d.len(), 9);
        assert!(d.contains(&(1, 12)));
        assert_eq!(double_points_of(&TripleSystem::empty(3)), vec![(1, 2), (1, 3), (2, 3)]);
        let t = TripleSystem::from_arrays(3, &[[1, 2, 3]]).unwrap();
        assert!(double_points_of(&t).is_empty());
    }

    #[test]
    fn permutation_algebra() {
        let p = Permutation::from_images(vec![2, 3, 1]).unwrap();
        assert_eq!(p.compose(&p.inverse()), Permutation::identity(3));
        assert!(Permutation::from_images(vec![1, 1, 2]).is_none());
        let ts = TripleSystem::from_arrays(4, &[[1, 2, 4]]).unwrap();
        let q = Permutation::from_images(vec![4, 3, 2, 1]).unwrap();
        assert_eq!(ts.relabel(&q).triples()[0].labels(), [1, 3, 4]);
    }
}
