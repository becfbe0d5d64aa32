//! Sweeping-pseudoline enumeration of arrangements.
//!
//! Line 1 is the reference line. A second pseudoline starts parallel to it,
//! crosses it, and sweeps the projective plane until it returns. Along the
//! way it records the order in which it meets lines `2..=n`. That order
//! starts as `2, 3, ..., n` and has to end fully reversed. Each step
//! reverses either two adjacent ascending entries (a double point) or
//! three adjacent ascending entries (a triple point). Lines that meet line 1
//! in a common point are crossed at the very start and are described by a
//! [`StartPairing`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::arrangement::{profile_of, FaceVector, Label, Triple, TripleSystem};
use crate::error::{Error, Result};
use crate::pairs::{PairSet, MAX_ELEMENTS};

/// Largest line count the sweep supports (line 1 plus 16 swept lines).
pub const MAX_LINES: usize = MAX_ELEMENTS + 1;

#[inline]
fn wire(l: Label) -> usize {
    l as usize - 2
}

/// A group of consecutive labels meeting line 1 in one point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    /// `(a, a + 1)` meet line 1 in the triple point `(1, a, a + 1)`.
    Pair(Label, Label),
    /// A double point of line 1.
    Single(Label),
}

/// How lines `2..=n` meet line 1, in order along line 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StartPairing {
    n: Label,
    blocks: Vec<Block>,
}

impl StartPairing {
    /// `pairs` must be disjoint pairs of consecutive labels from `2..=n`;
    /// every other label is a single.
    pub fn new(n: Label, pairs: &[(Label, Label)]) -> Result<Self> {
        if n < 3 || n as usize > MAX_LINES {
            return Err(Error::InvalidPairing(format!(
                "line count {n} outside 3..={MAX_LINES}"
            )));
        }
        let mut first_of = vec![false; n as usize + 2];
        let mut used = vec![false; n as usize + 2];
        for &(a, b) in pairs {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            if lo < 2 || hi > n || lo == hi {
                return Err(Error::InvalidPairing(format!(
                    "pair ({a},{b}) must hold two labels from 2..={n}"
                )));
            }
            if hi != lo + 1 {
                return Err(Error::InvalidPairing(format!(
                    "pair ({a},{b}) is not adjacent along line 1"
                )));
            }
            if used[lo as usize] || used[hi as usize] {
                return Err(Error::InvalidPairing(format!(
                    "pair ({a},{b}) overlaps another pair"
                )));
            }
            used[lo as usize] = true;
            used[hi as usize] = true;
            first_of[lo as usize] = true;
        }
        let mut blocks = Vec::new();
        let mut l = 2;
        while l <= n {
            if first_of[l as usize] {
                blocks.push(Block::Pair(l, l + 1));
                l += 2;
            } else {
                blocks.push(Block::Single(l));
                l += 1;
            }
        }
        if blocks.len() < 2 {
            return Err(Error::InvalidPairing(
                "all lines would pass through one point".into(),
            ));
        }
        Ok(StartPairing { n, blocks })
    }

    /// Pairs `(2,3), (4,5), ...` with a trailing single when `n - 1` is odd.
    pub fn standard(n: Label) -> Result<Self> {
        let pairs: Vec<_> = if n <= 3 {
            Vec::new()
        } else {
            (0..(n - 1) / 2).map(|i| (2 + 2 * i, 3 + 2 * i)).collect()
        };
        StartPairing::new(n, &pairs)
    }

    /// Every layout of `pairs` pairs and `n - 1 - 2 * pairs` singles along line 1.
    pub fn all_with_pairs(n: Label, pairs: usize) -> Result<Vec<Self>> {
        let wires = n as usize - 1;
        if 2 * pairs > wires {
            return Err(Error::InvalidPairing(format!(
                "{pairs} pairs do not fit on {wires} lines"
            )));
        }
        let singles = wires - 2 * pairs;
        let mut out = Vec::new();
        let mut pattern = Vec::new();
        fn rec(
            p: usize,
            s: usize,
            pattern: &mut Vec<bool>,
            n: Label,
            out: &mut Vec<StartPairing>,
        ) -> Result<()> {
            if p == 0 && s == 0 {
                let mut l = 2;
                let mut pairs = Vec::new();
                for &is_pair in pattern.iter() {
                    if is_pair {
                        pairs.push((l, l + 1));
                        l += 2;
                    } else {
                        l += 1;
                    }
                }
                if let Ok(sp) = StartPairing::new(n, &pairs) {
                    out.push(sp);
                }
                return Ok(());
            }
            if p > 0 {
                pattern.push(true);
                rec(p - 1, s, pattern, n, out)?;
                pattern.pop();
            }
            if s > 0 {
                pattern.push(false);
                rec(p, s - 1, pattern, n, out)?;
                pattern.pop();
            }
            Ok(())
        }
        rec(pairs, singles, &mut pattern, n, &mut out)?;
        Ok(out)
    }

    pub fn n(&self) -> Label {
        self.n
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn pairs(&self) -> Vec<(Label, Label)> {
        self.blocks
            .iter()
            .filter_map(|b| match *b {
                Block::Pair(a, c) => Some((a, c)),
                Block::Single(_) => None,
            })
            .collect()
    }

    pub fn singles(&self) -> Vec<Label> {
        self.blocks
            .iter()
            .filter_map(|b| match *b {
                Block::Single(a) => Some(a),
                Block::Pair(..) => None,
            })
            .collect()
    }

    /// The triples `(1, a, a + 1)` on line 1.
    pub fn initial_triples(&self) -> Vec<Triple> {
        self.pairs()
            .into_iter()
            .map(|(a, b)| Triple::new(1, a, b).expect("distinct labels"))
            .collect()
    }

    /// Whether `a` and `b` meet line 1 in the same point.
    pub fn paired(&self, a: Label, b: Label) -> bool {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.blocks.contains(&Block::Pair(lo, hi))
    }

    /// Whether the cyclic pair/single pattern is in its smallest rotation
    /// (pairs before singles). Rotating the start point along line 1 maps
    /// every layout onto one in this form.
    pub fn is_rotation_canonical(&self) -> bool {
        let pattern: Vec<u8> = self
            .blocks
            .iter()
            .map(|b| matches!(b, Block::Single(_)) as u8)
            .collect();
        (1..pattern.len()).all(|r| {
            let rotated = pattern[r..].iter().chain(&pattern[..r]);
            pattern.iter().le(rotated)
        })
    }

    fn sequence(&self) -> Vec<Label> {
        let mut seq = Vec::with_capacity(self.n as usize - 1);
        for b in &self.blocks {
            match *b {
                Block::Pair(a, c) => seq.extend([c, a]),
                Block::Single(a) => seq.push(a),
            }
        }
        seq
    }
}

impl fmt::Display for StartPairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}:", self.n)?;
        let pairs = self.pairs();
        for (i, (a, b)) in pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}-{b}")?;
        }
        Ok(())
    }
}

/// Reads the pairs from text such as `"2-3,4-5"` or `"(2,3),(4,5)"`.
pub fn parse_pairs(text: &str) -> Result<Vec<(Label, Label)>> {
    let nums: Vec<Label> = text
        .split(|c: char| !c.is_ascii_digit())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<Label>()
                .map_err(|_| Error::InvalidPairing(format!("bad label '{s}'")))
        })
        .collect::<Result<_>>()?;
    if nums.len() % 2 != 0 {
        return Err(Error::InvalidPairing(format!(
            "odd number of labels in '{text}'"
        )));
    }
    Ok(nums.chunks(2).map(|c| (c[0], c[1])).collect())
}

impl FromStr for StartPairing {
    type Err = Error;

    /// Inverse of `Display`: `n=12:2-3,4-5,...`.
    fn from_str(s: &str) -> Result<Self> {
        let (head, pairs) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidPairing(format!("missing ':' in '{s}'")))?;
        let n = head
            .trim()
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse::<Label>().ok())
            .ok_or_else(|| Error::InvalidPairing(format!("bad header '{head}'")))?;
        StartPairing::new(n, &parse_pairs(pairs)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    /// Reverse three adjacent ascending entries (a triple point).
    TripleFlip,
    /// Exchange two adjacent ascending entries (a double point).
    Swap,
}

/// A sweep step at a 1-based position of the sequence.
///
/// Ordered by position, with a flip before a swap at the same position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub at: u8,
    pub kind: MoveKind,
}

impl Move {
    pub fn swap(at: u8) -> Self {
        Move { at, kind: MoveKind::Swap }
    }

    pub fn flip(at: u8) -> Self {
        Move { at, kind: MoveKind::TripleFlip }
    }

    /// 0-based start and length of the affected window.
    #[inline]
    pub fn window(&self) -> (usize, usize) {
        let len = match self.kind {
            MoveKind::Swap => 2,
            MoveKind::TripleFlip => 3,
        };
        (self.at as usize - 1, len)
    }

    /// Moves on disjoint windows commute.
    #[inline]
    pub fn commutes_with(&self, other: &Move) -> bool {
        let (a, la) = self.window();
        let (b, lb) = other.window();
        a + la <= b || b + lb <= a
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            MoveKind::Swap => write!(f, "S{}", self.at),
            MoveKind::TripleFlip => write!(f, "T{}", self.at),
        }
    }
}

impl FromStr for Move {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPairing(format!("bad move '{s}'"));
        let (kind, rest) = match s.as_bytes().first() {
            Some(b'S') => (MoveKind::Swap, &s[1..]),
            Some(b'T') => (MoveKind::TripleFlip, &s[1..]),
            _ => return Err(bad()),
        };
        let at: u8 = rest.parse().map_err(|_| bad())?;
        if at == 0 {
            return Err(bad());
        }
        Ok(Move { at, kind })
    }
}

/// Sequence along the sweeping pseudoline plus what has been crossed so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepState {
    n: Label,
    sequence: Vec<Label>,
    crossed: PairSet,
    triples: Vec<Triple>,
}

impl SweepState {
    pub fn n(&self) -> Label {
        self.n
    }

    pub fn sequence(&self) -> &[Label] {
        &self.sequence
    }

    pub fn crossed(&self) -> &PairSet {
        &self.crossed
    }

    pub fn is_crossed(&self, a: Label, b: Label) -> bool {
        self.crossed.contains(wire(a), wire(b))
    }

    /// Triples collected so far, starting with those on line 1.
    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    /// Crossed pairs are exactly the inversions of the sequence.
    pub fn inversions_match(&self) -> bool {
        let mut inv = PairSet::new();
        for (i, &a) in self.sequence.iter().enumerate() {
            for &b in &self.sequence[i + 1..] {
                if a > b {
                    inv.insert(wire(a), wire(b));
                }
            }
        }
        inv == self.crossed
    }
}

pub fn initial_state(p: &StartPairing) -> SweepState {
    let mut crossed = PairSet::new();
    for (a, b) in p.pairs() {
        crossed.insert(wire(a), wire(b));
    }
    SweepState {
        n: p.n,
        sequence: p.sequence(),
        crossed,
        triples: p.initial_triples(),
    }
}

/// Every swap and flip applicable to `s`, left to right, flips first.
pub fn legal_moves(s: &SweepState) -> Vec<Move> {
    let seq = &s.sequence;
    let mut out = Vec::new();
    for i in 0..seq.len().saturating_sub(1) {
        if i + 2 < seq.len() && seq[i] < seq[i + 1] && seq[i + 1] < seq[i + 2] {
            out.push(Move::flip(i as u8 + 1));
        }
        if seq[i] < seq[i + 1] {
            out.push(Move::swap(i as u8 + 1));
        }
    }
    out
}

fn illegal(s: &SweepState, m: Move) -> Error {
    Error::IllegalMove {
        mv: m.to_string(),
        sequence: s.sequence.clone(),
    }
}

pub fn apply_move(s: &SweepState, m: Move) -> Result<SweepState> {
    let mut next = s.clone();
    apply_in_place(&mut next, m)?;
    Ok(next)
}

fn apply_in_place(s: &mut SweepState, m: Move) -> Result<()> {
    let (i, len) = m.window();
    if m.at == 0 || i + len > s.sequence.len() {
        return Err(illegal(s, m));
    }
    let w = &s.sequence[i..i + len];
    if !w.windows(2).all(|p| p[0] < p[1]) {
        return Err(illegal(s, m));
    }
    for x in 0..len {
        for y in x + 1..len {
            if !s.crossed.insert(wire(w[x]), wire(w[y])) {
                // unreachable while the ascent precondition holds
                return Err(illegal(s, m));
            }
        }
    }
    if m.kind == MoveKind::TripleFlip {
        s.triples
            .push(Triple::new(w[0], w[1], w[2]).expect("distinct labels"));
    }
    s.sequence[i..i + len].reverse();
    Ok(())
}

/// True once the sequence is strictly decreasing.
pub fn is_terminal(s: &SweepState) -> bool {
    s.sequence.windows(2).all(|p| p[0] > p[1])
}

/// A start pairing plus the moves of one complete sweep.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SweepWord {
    pub pairing: StartPairing,
    pub moves: Vec<Move>,
}

impl SweepWord {
    /// Replays the moves; fails on an illegal move or a non-terminal end state.
    pub fn replay(&self) -> Result<SweepState> {
        let mut s = initial_state(&self.pairing);
        for &m in &self.moves {
            apply_in_place(&mut s, m)?;
        }
        if !is_terminal(&s) {
            return Err(Error::NotTerminal(s.sequence));
        }
        Ok(s)
    }
}

impl fmt::Display for SweepWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} /", self.pairing)?;
        for m in &self.moves {
            write!(f, " {m}")?;
        }
        Ok(())
    }
}

impl FromStr for SweepWord {
    type Err = Error;

    /// Inverse of `Display`: `n=4:2-3 / S2 S1`.
    fn from_str(s: &str) -> Result<Self> {
        let (head, tail) = s
            .split_once('/')
            .ok_or_else(|| Error::InvalidPairing(format!("missing '/' in '{s}'")))?;
        let pairing = head.trim().parse()?;
        let moves = tail
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<Move>>>()?;
        Ok(SweepWord { pairing, moves })
    }
}

/// The triples of the arrangement encoded by `w`.
pub fn triples_of(w: &SweepWord) -> Result<TripleSystem> {
    let s = w.replay()?;
    TripleSystem::new(w.pairing.n, s.triples)
}

/// Faces of the arrangement encoded by `w`, counted by number of sides.
///
/// The sweep band is cut along line 1; its two ends are glued back with
/// the antipodal flip. A face between adjacent wires runs from one event
/// closing that gap to the next, and every event touching the face adds a
/// corner. Faces touching line 1 gain one corner if the two wires meet
/// line 1 in a common point and two otherwise. The regions below all and
/// above all wires are one face each, bounded by the arc of line 1 through
/// the sweep's centre.
pub fn face_vector(w: &SweepWord) -> Result<FaceVector> {
    let mut s = initial_state(&w.pairing);
    let m = s.sequence.len();
    let p = &w.pairing;
    let ends = |seq: &[Label], g: usize| if p.paired(seq[g - 1], seq[g]) { 1 } else { 2 };

    let mut faces: BTreeMap<u32, u64> = BTreeMap::new();
    let mut open = vec![0u32; m + 1];
    open[0] = 2;
    open[m] = 2;
    for g in 1..m {
        open[g] = ends(&s.sequence, g);
    }
    for &mv in &w.moves {
        let (i, len) = mv.window();
        apply_in_place(&mut s, mv)?;
        open[i] += 1;
        open[i + len] += 1;
        for gap in open.iter_mut().take(i + len).skip(i + 1) {
            *faces.entry(*gap + 1).or_insert(0) += 1;
            *gap = 1;
        }
    }
    if !is_terminal(&s) {
        return Err(Error::NotTerminal(s.sequence));
    }
    for g in 1..m {
        *faces.entry(open[g] + ends(&s.sequence, g)).or_insert(0) += 1;
    }
    *faces.entry(open[0]).or_insert(0) += 1;
    *faces.entry(open[m]).or_insert(0) += 1;
    FaceVector::new(faces)
}

/// Both sides of Melchior's identity for the arrangement of `w`.
pub fn melchior_sides(w: &SweepWord) -> Result<(i128, i128)> {
    let profile = profile_of(&triples_of(w)?)?;
    let faces = face_vector(w)?;
    Ok((profile.melchior_lhs(), faces.melchior_rhs()))
}

pub fn verify_melchior_identity(w: &SweepWord) -> Result<bool> {
    let (lhs, rhs) = melchior_sides(w)?;
    Ok(lhs == rhs)
}

/// Which sweep words the enumerator reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordSet {
    /// Every move sequence.
    All,
    /// One word per wiring diagram: words that differ only by reordering
    /// commuting moves are represented by their lexicographically least
    /// member.
    Diagrams,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerateOptions {
    /// Cut branches that cannot end with exactly the target triple count.
    pub prune: bool,
    pub words: WordSet,
    /// Worker threads; 0 means rayon's default.
    pub jobs: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            prune: true,
            words: WordSet::Diagrams,
            jobs: 1,
        }
    }
}

/// Receives complete sweeps. Sinks from independent subtrees are merged
/// in search order, so results do not depend on the worker count.
pub trait WordSink: Default + Send {
    /// `flips` holds the triples of the flip moves, in move order.
    fn accept(&mut self, moves: &[Move], flips: &[Triple]);

    /// Appends the results of a subtree that comes later in search order.
    fn absorb(&mut self, later: Self);
}

/// Collects every word.
#[derive(Default, Debug)]
pub struct WordList(pub Vec<Vec<Move>>);

impl WordSink for WordList {
    fn accept(&mut self, moves: &[Move], _: &[Triple]) {
        self.0.push(moves.to_vec());
    }

    fn absorb(&mut self, later: Self) {
        self.0.extend(later.0);
    }
}

/// Counts words.
#[derive(Default, Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordCount(pub u64);

impl WordSink for WordCount {
    fn accept(&mut self, _: &[Move], _: &[Triple]) {
        self.0 += 1;
    }

    fn absorb(&mut self, later: Self) {
        self.0 += later.0;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tally {
    pub words: u64,
    /// First word in search order producing these triples.
    pub first: Vec<Move>,
}

/// Groups words by the (labelled) triples their flips produce.
#[derive(Default, Debug)]
pub struct FlipTally(pub BTreeMap<Vec<Triple>, Tally>);

impl WordSink for FlipTally {
    fn accept(&mut self, moves: &[Move], flips: &[Triple]) {
        let mut key = flips.to_vec();
        key.sort_unstable();
        self.0
            .entry(key)
            .and_modify(|t| t.words += 1)
            .or_insert_with(|| Tally {
                words: 1,
                first: moves.to_vec(),
            });
    }

    fn absorb(&mut self, later: Self) {
        for (k, v) in later.0 {
            self.0
                .entry(k)
                .and_modify(|t| t.words += v.words)
                .or_insert(v);
        }
    }
}

#[derive(Clone)]
struct Node {
    seq: [Label; MAX_ELEMENTS],
    moves: Vec<Move>,
    flips: Vec<Triple>,
    remaining: i32,
    need: i32,
}

struct Search {
    m: usize,
    prune: bool,
    diagrams: bool,
}

impl Search {
    /// Moves allowed from `node`, in search order.
    fn children(&self, node: &Node, out: &mut Vec<Move>) {
        out.clear();
        let s = &node.seq;
        for i in 0..self.m - 1 {
            if i + 2 < self.m && s[i] < s[i + 1] && s[i + 1] < s[i + 2] && (!self.prune || node.need > 0) {
                let mv = Move::flip(i as u8 + 1);
                if self.admissible(node, mv) {
                    out.push(mv);
                }
            }
            if s[i] < s[i + 1] && (!self.prune || node.remaining - 1 >= 3 * node.need) {
                let mv = Move::swap(i as u8 + 1);
                if self.admissible(node, mv) {
                    out.push(mv);
                }
            }
        }
    }

    /// Lexicographic normal form: reject `mv` if a larger move sits in the
    /// trailing run of moves that commute with it.
    #[inline]
    fn admissible(&self, node: &Node, mv: Move) -> bool {
        if !self.diagrams {
            return true;
        }
        for prev in node.moves.iter().rev() {
            if !prev.commutes_with(&mv) {
                return true;
            }
            if *prev > mv {
                return false;
            }
        }
        true
    }

    #[inline]
    fn push(node: &mut Node, mv: Move) {
        let (i, len) = mv.window();
        if len == 3 {
            node.flips.push(
                Triple::new(node.seq[i], node.seq[i + 1], node.seq[i + 2]).expect("distinct"),
            );
            node.remaining -= 3;
            node.need -= 1;
        } else {
            node.remaining -= 1;
        }
        node.seq[i..i + len].reverse();
        node.moves.push(mv);
    }

    #[inline]
    fn pop(node: &mut Node) {
        let mv = node.moves.pop().expect("non-empty");
        let (i, len) = mv.window();
        node.seq[i..i + len].reverse();
        if len == 3 {
            node.flips.pop();
            node.remaining += 3;
            node.need += 1;
        } else {
            node.remaining += 1;
        }
    }

    fn run<S: WordSink>(&self, node: &mut Node, sink: &mut S) {
        if node.remaining == 0 {
            if node.need == 0 {
                sink.accept(&node.moves, &node.flips);
            }
            return;
        }
        let mut kids = Vec::with_capacity(2 * self.m);
        self.children(node, &mut kids);
        for mv in kids {
            Self::push(node, mv);
            self.run(node, sink);
            Self::pop(node);
        }
    }

    /// Nodes at `depth` (or earlier leaves), in search order.
    fn frontier(&self, root: &Node, depth: usize) -> Vec<Node> {
        let mut out = Vec::new();
        let mut node = root.clone();
        self.collect(&mut node, depth, &mut out);
        out
    }

    fn collect(&self, node: &mut Node, depth: usize, out: &mut Vec<Node>) {
        if depth == 0 || node.remaining == 0 {
            out.push(node.clone());
            return;
        }
        let mut kids = Vec::new();
        self.children(node, &mut kids);
        for mv in kids {
            Self::push(node, mv);
            self.collect(node, depth - 1, out);
            Self::pop(node);
        }
    }
}

/// Runs the sweep search for `target_t3` triple points (including those on
/// line 1) and feeds every complete word to a fresh sink.
pub fn enumerate_into<S: WordSink>(
    p: &StartPairing,
    target_t3: u32,
    opts: &EnumerateOptions,
) -> Result<S> {
    let m = p.n as usize - 1;
    let on_line_one = p.pairs().len() as u32;
    if target_t3 < on_line_one {
        return Err(Error::InfeasibleBudget {
            target: target_t3,
            reason: format!("line 1 already carries {on_line_one} triples"),
        });
    }
    let total = (m * (m - 1) / 2) as i32;
    let remaining = total - on_line_one as i32;
    let need = (target_t3 - on_line_one) as i32;
    let n = p.n as u64;
    if 3 * target_t3 as u64 > n * (n - 1) / 2 {
        return Err(Error::InfeasibleBudget {
            target: target_t3,
            reason: format!("{target_t3} triples need more than the {} pairs of {n} lines", n * (n - 1) / 2),
        });
    }
    let mut seq = [0; MAX_ELEMENTS];
    seq[..m].copy_from_slice(&p.sequence());
    let root = Node {
        seq,
        moves: Vec::new(),
        flips: Vec::new(),
        remaining,
        need,
    };
    let search = Search {
        m,
        prune: opts.prune,
        diagrams: opts.words == WordSet::Diagrams,
    };

    if opts.jobs == 1 {
        let mut sink = S::default();
        if 3 * need <= remaining {
            search.run(&mut root.clone(), &mut sink);
        }
        return Ok(sink);
    }

    if 3 * need > remaining {
        return Ok(S::default());
    }
    let mut depth = 1;
    let mut tasks = search.frontier(&root, depth);
    while tasks.len() < 256 && depth < 8 && tasks.iter().any(|t| t.remaining > 0) {
        depth += 1;
        tasks = search.frontier(&root, depth);
    }
    let work = || {
        tasks
            .into_par_iter()
            .map(|mut node| {
                let mut sink = S::default();
                search.run(&mut node, &mut sink);
                sink
            })
            .collect::<Vec<S>>()
    };
    let parts = if opts.jobs == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::InvalidPairing(format!("thread pool: {e}")))?
            .install(work)
    };
    let mut merged = S::default();
    for part in parts {
        merged.absorb(part);
    }
    Ok(merged)
}

/// All sweep words reaching exactly `target_t3` triple points, in search order.
pub fn enumerate(
    p: &StartPairing,
    target_t3: u32,
    opts: &EnumerateOptions,
) -> Result<Vec<SweepWord>> {
    let list: WordList = enumerate_into(p, target_t3, opts)?;
    Ok(list
        .0
        .into_iter()
        .map(|moves| SweepWord {
            pairing: p.clone(),
            moves,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairing(n: Label, pairs: &[(Label, Label)]) -> StartPairing {
        StartPairing::new(n, pairs).unwrap()
    }

    fn state(n: Label, seq: &[Label]) -> SweepState {
        let mut crossed = PairSet::new();
        for (i, &a) in seq.iter().enumerate() {
            for &b in &seq[i + 1..] {
                if a > b {
                    crossed.insert(wire(a), wire(b));
                }
            }
        }
        SweepState {
            n,
            sequence: seq.to_vec(),
            crossed,
            triples: Vec::new(),
        }
    }

    #[test]
    fn initial_state_examples() {
        let p = StartPairing::standard(12).unwrap();
        let s = initial_state(&p);
        assert_eq!(s.sequence(), &[3, 2, 5, 4, 7, 6, 9, 8, 11, 10, 12]);
        assert_eq!(s.triples().len(), 5);
        assert_eq!(p.singles(), vec![12]);
        assert!(s.inversions_match());

        let s = initial_state(&pairing(4, &[(2, 3)]));
        assert_eq!(s.sequence(), &[3, 2, 4]);
        assert_eq!(s.triples().len(), 1);

        let p = pairing(3, &[]);
        assert_eq!(p.singles(), vec![2, 3]);
        let s = initial_state(&p);
        assert_eq!(s.sequence(), &[2, 3]);
        assert!(s.triples().is_empty());
    }

    #[test]
    fn pairing_validation() {
        assert!(StartPairing::new(6, &[(2, 3), (3, 4)]).is_err());
        assert!(StartPairing::new(6, &[(2, 4)]).is_err());
        assert!(StartPairing::new(6, &[(1, 2)]).is_err());
        assert!(StartPairing::new(3, &[(2, 3)]).is_err());
        assert!(StartPairing::new(18, &[]).is_err());
        assert_eq!(pairing(6, &[(3, 2)]).pairs(), vec![(2, 3)]);
    }

    #[test]
    fn pairing_text_round_trip() {
        let p = StartPairing::standard(12).unwrap();
        assert_eq!(p.to_string(), "n=12:2-3,4-5,6-7,8-9,10-11");
        assert_eq!(p.to_string().parse::<StartPairing>().unwrap(), p);
        assert_eq!(parse_pairs("(2,3),(4,5)").unwrap(), vec![(2, 3), (4, 5)]);
        assert!(parse_pairs("2-3,4").is_err());
    }

    #[test]
    fn layouts_and_rotations() {
        let all = StartPairing::all_with_pairs(12, 5).unwrap();
        assert_eq!(all.len(), 6);
        let canon: Vec<_> = all.iter().filter(|p| p.is_rotation_canonical()).collect();
        assert_eq!(canon, vec![&StartPairing::standard(12).unwrap()]);
        // 2 pairs and 2 singles: PPSS, PSPS, PSSP, SPPS, SPSP, SSPP
        let all = StartPairing::all_with_pairs(7, 2).unwrap();
        assert_eq!(all.len(), 6);
        assert_eq!(all.iter().filter(|p| p.is_rotation_canonical()).count(), 2);
    }

    #[test]
    fn legal_moves_examples() {
        let s = state(12, &[3, 2, 5, 4, 7, 6, 9, 8, 11, 10, 12]);
        let moves = legal_moves(&s);
        assert_eq!(
            moves,
            [2, 4, 6, 8, 10].map(Move::swap).to_vec(),
        );
        let s = state(4, &[2, 3, 4]);
        assert_eq!(legal_moves(&s), vec![Move::flip(1), Move::swap(1), Move::swap(2)]);
        let s = state(6, &[6, 5, 4, 3, 2]);
        assert!(legal_moves(&s).is_empty());
    }

    #[test]
    fn apply_move_examples() {
        let s = state(4, &[2, 3, 4]);
        let t = apply_move(&s, Move::flip(1)).unwrap();
        assert_eq!(t.sequence(), &[4, 3, 2]);
        assert_eq!(t.crossed().len(), 3);
        assert_eq!(t.triples(), &[Triple::new(2, 3, 4).unwrap()]);
        assert!(t.inversions_match());

        let s = initial_state(&pairing(4, &[(2, 3)]));
        let t = apply_move(&s, Move::swap(2)).unwrap();
        assert_eq!(t.sequence(), &[3, 4, 2]);
        assert!(t.is_crossed(2, 4));
        assert_eq!(t.crossed().len(), s.crossed().len() + 1);

        assert!(matches!(
            apply_move(&s, Move::swap(1)),
            Err(Error::IllegalMove { .. })
        ));
        assert!(apply_move(&s, Move::flip(1)).is_err());
        assert!(apply_move(&s, Move::swap(3)).is_err());
    }

    #[test]
    fn terminal_examples() {
        assert!(is_terminal(&state(12, &[12, 11, 10, 9, 8, 7, 6, 5, 4, 3, 2])));
        assert!(!is_terminal(&state(12, &[3, 2, 5, 4, 7, 6, 9, 8, 11, 10, 12])));
        assert!(is_terminal(&state(3, &[3, 2])));
    }

    #[test]
    fn enumerate_near_pencil() {
        let p = pairing(4, &[(2, 3)]);
        let words = enumerate(&p, 1, &EnumerateOptions::default()).unwrap();
        assert_eq!(words.len(), 1);
        assert_eq!(words[0].moves, vec![Move::swap(2), Move::swap(1)]);
        assert_eq!(
            triples_of(&words[0]).unwrap(),
            TripleSystem::from_arrays(4, &[[1, 2, 3]]).unwrap()
        );
        assert!(enumerate(&p, 2, &EnumerateOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn enumerate_rejects_infeasible_budgets() {
        let p = pairing(4, &[(2, 3)]);
        assert!(matches!(
            enumerate(&p, 0, &EnumerateOptions::default()),
            Err(Error::InfeasibleBudget { .. })
        ));
        let p = StartPairing::standard(12).unwrap();
        assert!(enumerate(&p, 23, &EnumerateOptions::default()).is_err());
        assert!(enumerate(&p, 22, &EnumerateOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn triples_of_generic_triangle() {
        let w = SweepWord {
            pairing: pairing(3, &[]),
            moves: vec![Move::swap(1)],
        };
        assert!(triples_of(&w).unwrap().is_empty());
        let short = SweepWord {
            pairing: pairing(4, &[(2, 3)]),
            moves: vec![Move::swap(2)],
        };
        assert!(matches!(triples_of(&short), Err(Error::NotTerminal(_))));
    }

    #[test]
    fn faces_of_small_arrangements() {
        let triangle = SweepWord {
            pairing: pairing(3, &[]),
            moves: vec![Move::swap(1)],
        };
        let f = face_vector(&triangle).unwrap();
        assert_eq!((f.p(3), f.faces()), (4, 4));
        assert_eq!(melchior_sides(&triangle).unwrap(), (3, 3));

        let pencil = SweepWord {
            pairing: pairing(4, &[(2, 3)]),
            moves: vec![Move::swap(2), Move::swap(1)],
        };
        let f = face_vector(&pencil).unwrap();
        assert_eq!((f.p(3), f.faces()), (6, 6));
        assert!(verify_melchior_identity(&pencil).unwrap());

        // four generic lines: 3 triangles and 4 quadrilaterals
        let generic = SweepWord {
            pairing: pairing(4, &[]),
            moves: vec![Move::swap(1), Move::swap(2), Move::swap(1)],
        };
        let f = face_vector(&generic).unwrap();
        assert_eq!((f.p(3), f.p(4)), (4, 3));
        assert_eq!(melchior_sides(&generic).unwrap(), (6, 6));
    }

    #[test]
    fn word_text_round_trip() {
        let w = SweepWord {
            pairing: pairing(4, &[(2, 3)]),
            moves: vec![Move::swap(2), Move::swap(1)],
        };
        assert_eq!(w.to_string(), "n=4:2-3 / S2 S1");
        assert_eq!(w.to_string().parse::<SweepWord>().unwrap(), w);
        assert!("n=4:2-3 / X2".parse::<SweepWord>().is_err());
    }
}
