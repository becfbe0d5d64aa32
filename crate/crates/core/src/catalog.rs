//! Reference data: the thirteen 12-line, 19-triple-point arrangements and a
//! set of intersection censuses with known (non-)existence status.

use crate::arrangement::{Profile, TripleSystem};
use crate::io::parse_triples;

/// The thirteen classes of 12 pseudolines with 19 triple and 9 double points,
/// as bracketed triple lists labelled `C1` .. `C13`.
pub const ORCHARD_12_19: [(&str, &str); 13] = [
    ("C1", "[[1,2,3],[1,4,5],[1,6,7],[1,8,9],[1,10,11],[2,4,7],[2,6,9],[2,8,11],[2,10,12],[3,4,9],[3,5,7],[3,6,11],[3,8,12],[4,6,12],[4,8,10],[5,6,10],[5,9,11],[7,9,10],[7,11,12]]"),
    ("C2", "[[1,2,3],[1,4,5],[1,6,7],[1,8,9],[1,10,11],[2,4,7],[2,6,9],[2,8,11],[2,10,12],[3,4,9],[3,5,7],[3,6,11],[3,8,12],[4,6,12],[4,8,10],[5,9,11],[7,9,10],[7,11,12],[5,6,8]]"),
    ("C3", "[[1,2,3],[1,4,5],[1,6,7],[1,8,9],[1,10,11],[2,4,7],[2,6,9],[2,8,11],[2,10,12],[3,5,7],[3,6,11],[3,8,12],[4,6,12],[4,8,10],[4,9,11],[5,9,12],[7,9,10],[7,11,12],[5,6,8]]"),
    ("C4", "[[1,2,3],[1,4,5],[1,6,7],[1,8,9],[1,10,11],[2,4,7],[2,6,9],[2,8,11],[2,10,12],[3,4,10],[3,5,7],[3,6,12],[3,9,11],[4,6,11],[4,8,12],[5,6,8],[5,9,12],[7,11,12],[7,8,10]]"),
    ("C5", "[[1,2,3],[1,4,5],[1,6,7],[1,8,9],[1,10,11],[2,4,7],[2,6,9],[2,8,11],[2,10,12],[3,4,10],[3,5,7],[3,6,12],[3,9,11],[4,6,11],[4,8,12],[5,8,10],[5,9,12],[7,9,10],[7,11,12]]"),
    ("C6", "[[1,2,3],[1,4,5],[1,6,7],[1,8,9],[1,10,11],[2,4,7],[2,6,9],[2,8,11],[2,10,12],[3,4,9],[3,5,7],[3,6,11],[3,8,12],[4,6,8],[4,11,12],[5,6,10],[5,9,12],[7,9,11],[7,8,10]]"),
    ("C7", "[[1,2,3],[1,4,5],[1,6,7],[1,8,9],[1,10,11],[2,4,7],[2,6,9],[2,10,12],[3,4,9],[3,5,7],[3,6,8],[3,11,12],[4,6,11],[4,8,12],[5,6,10],[5,8,11],[5,9,12],[7,9,11],[7,8,10]]"),
    ("C8", "[[1,2,3],[1,4,5],[1,6,7],[1,8,9],[1,10,11],[2,4,7],[2,6,9],[2,8,11],[2,10,12],[3,4,10],[3,5,7],[3,6,8],[3,9,11],[4,6,11],[4,8,12],[5,6,10],[5,9,12],[7,11,12],[7,8,10]]"),
    ("C9", "[[1,2,3],[1,4,5],[1,6,7],[1,8,9],[1,10,11],[2,4,7],[2,6,9],[2,8,11],[2,10,12],[3,4,10],[3,6,8],[3,7,11],[3,9,12],[4,6,11],[4,8,12],[5,6,10],[5,7,9],[5,11,12],[7,8,10]]"),
    ("C10", "[[1,2,3],[1,4,5],[1,6,7],[1,8,9],[1,10,11],[2,4,7],[2,6,9],[2,8,11],[3,4,9],[3,5,7],[3,6,11],[3,8,10],[4,6,10],[4,8,12],[5,6,8],[5,9,11],[5,10,12],[7,11,12],[7,9,10]]"),
    ("C11", "[[1,2,3],[1,4,5],[1,6,7],[1,8,9],[1,10,11],[2,4,7],[2,6,9],[2,8,11],[2,10,12],[3,5,7],[3,6,11],[3,8,12],[4,6,12],[4,8,10],[4,9,11],[5,6,10],[5,9,12],[7,9,10],[7,11,12]]"),
    ("C12", "[[1,2,3],[1,4,5],[1,6,7],[1,8,9],[1,10,11],[2,4,7],[2,6,9],[2,8,11],[2,10,12],[3,4,10],[3,5,7],[3,6,12],[3,9,11],[4,6,11],[4,8,12],[5,6,10],[5,9,12],[7,11,12],[7,8,10]]"),
    ("C13", "[[1,2,3],[1,4,5],[1,6,7],[1,8,9],[1,10,11],[2,4,7],[2,6,9],[2,8,11],[2,10,12],[3,5,12],[3,7,10],[3,9,11],[4,8,10],[4,11,12],[5,7,8],[5,9,10],[6,8,12],[7,9,12],[3,4,6]]"),
];

/// Parses `C{index}` (1-based) from [`ORCHARD_12_19`].
pub fn list(index: usize) -> TripleSystem {
    let (_, text) = ORCHARD_12_19[index - 1];
    parse_triples(text).expect("catalog lists are well formed")
}

pub fn all_lists() -> Vec<(&'static str, TripleSystem)> {
    ORCHARD_12_19
        .iter()
        .map(|&(name, text)| (name, parse_triples(text).expect("catalog lists are well formed")))
        .collect()
}

/// What is known about a census independently of the Melchior bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    /// Expected to pass the Melchior bound and to exist.
    Exists,
    /// Expected to fail the Melchior bound.
    MelchiorInfeasible,
    /// Passes the bound but is excluded by another argument.
    KnownInfeasible(&'static str),
}

#[derive(Clone, Debug)]
pub struct NamedProfile {
    pub name: String,
    pub profile: Profile,
    pub status: Status,
}

fn named(name: impl Into<String>, n: u32, t: &[(u32, u64)], status: Status) -> NamedProfile {
    NamedProfile {
        name: name.into(),
        profile: Profile::new(n, t.iter().copied()).expect("catalog profiles are valid"),
        status,
    }
}

/// Censuses of classical arrangements used to exercise the feasibility check.
pub fn named_profiles() -> Vec<NamedProfile> {
    let mut out = vec![
        named("dual Hesse", 9, &[(3, 12)], Status::MelchiorInfeasible),
        named("13 lines, 26 triple points", 13, &[(3, 26)], Status::MelchiorInfeasible),
        named("Klein", 21, &[(3, 28), (4, 21)], Status::MelchiorInfeasible),
        named("Wiman", 45, &[(3, 120), (4, 45), (5, 36)], Status::MelchiorInfeasible),
        named(
            "Hesse",
            12,
            &[(2, 12), (4, 9)],
            Status::KnownInfeasible("dual to the dual Hesse configuration"),
        ),
        named("Boroczky 12", 12, &[(2, 9), (3, 19)], Status::Exists),
    ];
    for k in 4..=10u32 {
        let k64 = k as u64;
        out.push(named(
            format!("Fermat {k}"),
            3 * k,
            &[(3, k64 * k64), (k, 3)],
            Status::MelchiorInfeasible,
        ));
    }
    out
}
