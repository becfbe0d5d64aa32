//! Ruler constructions: fix a projective base, then derive lines and points
//! from known ones, introducing a parameter whenever propagation stalls.

use std::fmt;

use crate::arrangement::{Label, Triple, TripleSystem};
use crate::error::{Error, Result};
use crate::geometry::{HomLine, HomPoint};

type P = HomPoint<f64>;
type L = HomLine<f64>;

/// Base quadruple tried before any other when all four points exist.
pub const PREFERRED_BASE: [[Label; 3]; 4] = [[1, 2, 3], [1, 4, 5], [3, 5, 7], [2, 4, 7]];

const BASE_COORDS: [[f64; 3]; 4] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 1.0, 1.0]];

/// Cross products shorter than this mean two objects collapsed.
pub const DEGENERATE: f64 = 1e-9;

/// Angle of a one-dimensional degree of freedom.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Angle {
    /// Index into the parameter vector.
    Param(usize),
    /// Fixed by the residual projective freedom when the base is incomplete.
    Gauge(f64),
}

impl Angle {
    fn value(&self, params: &[f64]) -> f64 {
        match *self {
            Angle::Param(i) => params[i],
            Angle::Gauge(v) => v,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    Base { point: usize, coords: [f64; 3] },
    /// Line through two known points.
    Join { line: usize, through: [usize; 2] },
    /// Point on two known lines.
    Meet { point: usize, on: [usize; 2] },
    /// Point chosen on a known line.
    MovablePoint { point: usize, on: usize, angle: Angle },
    /// Line chosen through a known point.
    MovableLine { line: usize, through: usize, angle: Angle },
    /// Line with no known incidences.
    FreeLine { line: usize, angles: [Angle; 2] },
}

/// A point/line incidence of the triple system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Incidence {
    pub point: usize,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstructionPlan {
    pub system: TripleSystem,
    /// Indices into `system.triples()` fixed at the base coordinates.
    pub base: Vec<usize>,
    pub steps: Vec<Step>,
    /// Incidences no step used; they must be checked afterwards.
    pub residuals: Vec<Incidence>,
    pub parameters: usize,
}

impl ConstructionPlan {
    /// Whether the base fixes every projective degree of freedom, so that the
    /// parameter space covers all realizations.
    pub fn is_complete(&self) -> bool {
        self.base.len() == 4
            && !self.steps.iter().any(|s| match s {
                Step::MovablePoint { angle, .. } | Step::MovableLine { angle, .. } => {
                    matches!(angle, Angle::Gauge(_))
                }
                Step::FreeLine { angles, .. } => angles.iter().any(|a| matches!(a, Angle::Gauge(_))),
                _ => false,
            })
    }

    pub fn point_name(&self, p: usize) -> String {
        self.system.triples()[p].to_string()
    }

    pub fn describe(&self, inc: &Incidence) -> String {
        format!("line {} through {}", inc.line + 1, self.point_name(inc.point))
    }

    /// Coordinates of every line and triple point at `params`, or `None`
    /// when some construction step degenerates.
    pub fn evaluate(&self, params: &[f64]) -> Option<Configuration> {
        let m = self.system.len();
        let n = self.system.n() as usize;
        let mut points: Vec<Option<P>> = vec![None; m];
        let mut lines: Vec<Option<L>> = vec![None; n];
        for step in &self.steps {
            match *step {
                Step::Base { point, coords } => points[point] = Some(P::from(coords).unit()),
                Step::Join { line, through: [a, b] } => {
                    lines[line] = Some(checked_unit(points[a]?.join(&points[b]?).0)?.into());
                }
                Step::Meet { point, on: [a, b] } => {
                    points[point] = Some(checked_unit(lines[a]?.meet(&lines[b]?).0)?.into());
                }
                Step::MovablePoint { point, on, angle } => {
                    let (u, v) = complement_basis(&lines[on]?.0);
                    points[point] = Some(P::from(on_circle(&u, &v, angle.value(params))));
                }
                Step::MovableLine { line, through, angle } => {
                    let (u, v) = complement_basis(&points[through]?.0);
                    lines[line] = Some(L::from(on_circle(&u, &v, angle.value(params))));
                }
                Step::FreeLine { line, angles: [a, b] } => {
                    let (t, f) = (a.value(params), b.value(params));
                    lines[line] = Some(HomLine::new(t.cos() * f.cos(), t.cos() * f.sin(), t.sin()));
                }
            }
        }
        Some(Configuration {
            points: points.into_iter().collect::<Option<_>>()?,
            lines: lines.into_iter().collect::<Option<_>>()?,
        })
    }

    /// Signed residual of every leftover incidence at `params`.
    pub fn residual_values(&self, c: &Configuration) -> Vec<f64> {
        self.residuals
            .iter()
            .map(|r| c.lines[r.line].signed_incidence(&c.points[r.point]))
            .collect()
    }
}

impl fmt::Display for ConstructionPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pt = |p: usize| self.point_name(p);
        let ang = |a: &Angle| match a {
            Angle::Param(i) => format!("t{}", i + 1),
            Angle::Gauge(v) => format!("{v:.3}"),
        };
        for s in &self.steps {
            match s {
                Step::Base { point, coords } => writeln!(f, "base {} = {:?}", pt(*point), coords)?,
                Step::Join { line, through } => {
                    writeln!(f, "line {} = {} v {}", line + 1, pt(through[0]), pt(through[1]))?
                }
                Step::Meet { point, on } => {
                    writeln!(f, "point {} = line {} ^ line {}", pt(*point), on[0] + 1, on[1] + 1)?
                }
                Step::MovablePoint { point, on, angle } => {
                    writeln!(f, "point {} on line {} at {}", pt(*point), on + 1, ang(angle))?
                }
                Step::MovableLine { line, through, angle } => {
                    writeln!(f, "line {} through {} at {}", line + 1, pt(*through), ang(angle))?
                }
                Step::FreeLine { line, angles } => {
                    writeln!(f, "line {} free at ({}, {})", line + 1, ang(&angles[0]), ang(&angles[1]))?
                }
            }
        }
        for r in &self.residuals {
            writeln!(f, "check {}", self.describe(r))?;
        }
        Ok(())
    }
}

impl From<[f64; 3]> for P {
    fn from(c: [f64; 3]) -> Self {
        HomPoint(c)
    }
}

impl From<[f64; 3]> for L {
    fn from(c: [f64; 3]) -> Self {
        HomLine(c)
    }
}

/// Unit lines and points of one instance of a plan.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    /// Indexed like `system.triples()`.
    pub points: Vec<P>,
    /// Indexed by line label minus one.
    pub lines: Vec<L>,
}

fn checked_unit(v: [f64; 3]) -> Option<[f64; 3]> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    (n > DEGENERATE).then(|| v.map(|x| x / n))
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Orthonormal basis of the plane orthogonal to the unit vector `w`.
fn complement_basis(w: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let axis = (0..3)
        .min_by(|&i, &j| w[i].abs().total_cmp(&w[j].abs()))
        .expect("three coordinates");
    let mut e = [0.0; 3];
    e[axis] = 1.0;
    let u = checked_unit(cross(w, &e)).expect("unit vector is never parallel to its smallest axis");
    let v = cross(w, &u);
    (u, v)
}

fn on_circle(u: &[f64; 3], v: &[f64; 3], theta: f64) -> [f64; 3] {
    let (s, c) = theta.sin_cos();
    [c * u[0] + s * v[0], c * u[1] + s * v[1], c * u[2] + s * v[2]]
}

/// Incidence bookkeeping for the greedy propagation.
#[derive(Clone)]
struct Known {
    points: Vec<bool>,
    lines: Vec<bool>,
    /// Triple indices through each line.
    on_line: Vec<Vec<usize>>,
    triples: Vec<[usize; 3]>,
}

impl Known {
    fn new(ts: &TripleSystem) -> Self {
        let n = ts.n() as usize;
        let triples: Vec<[usize; 3]> = ts.triples().iter().map(|t| t.labels().map(|l| l as usize - 1)).collect();
        let mut on_line = vec![Vec::new(); n];
        for (i, t) in triples.iter().enumerate() {
            for &l in t {
                on_line[l].push(i);
            }
        }
        Known {
            points: vec![false; triples.len()],
            lines: vec![false; n],
            on_line,
            triples,
        }
    }

    /// Derives everything reachable by joins and meets; returns the number of
    /// sweeps over all objects that made progress.
    fn propagate(&mut self, steps: &mut Vec<Step>) -> usize {
        let mut rounds = 0;
        loop {
            let before = steps.len();
            for line in 0..self.lines.len() {
                if self.lines[line] {
                    continue;
                }
                let mut pts = self.on_line[line].iter().copied().filter(|&p| self.points[p]);
                if let (Some(a), Some(b)) = (pts.next(), pts.next()) {
                    self.lines[line] = true;
                    steps.push(Step::Join { line, through: [a, b] });
                }
            }
            for point in 0..self.points.len() {
                if self.points[point] {
                    continue;
                }
                let mut ls = self.triples[point].iter().copied().filter(|&l| self.lines[l]);
                if let (Some(a), Some(b)) = (ls.next(), ls.next()) {
                    self.points[point] = true;
                    steps.push(Step::Meet { point, on: [a, b] });
                }
            }
            if steps.len() == before {
                return rounds;
            }
            rounds += 1;
        }
    }

    fn known_count(&self) -> usize {
        self.points.iter().filter(|&&k| k).count() + self.lines.iter().filter(|&&k| k).count()
    }
}

fn shares_line(a: &Triple, b: &Triple) -> bool {
    a.labels().iter().any(|&l| b.contains(l))
}

/// Four triple points usable as a projective base: no line carries three of
/// them, and every three of them include two on a common line (so that
/// collinearity would force an extra incidence).
fn is_valid_base(ts: &TripleSystem, quad: &[usize; 4]) -> bool {
    let t: Vec<Triple> = quad.iter().map(|&i| ts.triples()[i]).collect();
    for skip in 0..4 {
        let three: Vec<&Triple> = (0..4).filter(|&i| i != skip).map(|i| &t[i]).collect();
        let common = three[0].labels().iter().any(|&l| three[1].contains(l) && three[2].contains(l));
        if common {
            return false;
        }
        let linked = shares_line(three[0], three[1])
            || shares_line(three[0], three[2])
            || shares_line(three[1], three[2]);
        if !linked {
            return false;
        }
    }
    true
}

fn reach(ts: &TripleSystem, base: &[usize]) -> usize {
    let mut k = Known::new(ts);
    for &b in base {
        k.points[b] = true;
    }
    k.propagate(&mut Vec::new());
    k.known_count()
}

/// The base quadruple a plan starts from, if any exists.
pub fn choose_base(ts: &TripleSystem) -> Option<[usize; 4]> {
    let m = ts.len();
    let index = |t: &[Label; 3]| ts.triples().iter().position(|x| x.labels() == *t);
    let preferred: Option<Vec<usize>> = PREFERRED_BASE.iter().map(index).collect();
    if let Some(p) = preferred {
        let quad = [p[0], p[1], p[2], p[3]];
        if is_valid_base(ts, &quad) {
            return Some(quad);
        }
    }
    let mut best: Option<(usize, [usize; 4])> = None;
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                for d in c + 1..m {
                    let quad = [a, b, c, d];
                    if !is_valid_base(ts, &quad) {
                        continue;
                    }
                    let r = reach(ts, &quad);
                    if best.is_none_or(|(br, _)| r > br) {
                        best = Some((r, quad));
                    }
                }
            }
        }
    }
    best.map(|(_, q)| q)
}

/// Fallback base when no quadruple qualifies: a greedy set of up to three
/// triple points, no three on a common line.
fn partial_base(ts: &TripleSystem) -> Vec<usize> {
    let mut base: Vec<usize> = Vec::new();
    for (i, t) in ts.triples().iter().enumerate() {
        if base.len() == 3 {
            break;
        }
        let collinear = base.len() == 2 && {
            let (a, b) = (ts.triples()[base[0]], ts.triples()[base[1]]);
            a.labels().iter().any(|&l| b.contains(l) && t.contains(l))
        };
        if !collinear {
            base.push(i);
        }
    }
    base
}

struct Gauge {
    budget: usize,
    used: usize,
}

impl Gauge {
    fn angle(&mut self, params: &mut usize) -> Angle {
        if self.budget > 0 {
            self.budget -= 1;
            self.used += 1;
            // spread the fixed choices so they do not line up
            Angle::Gauge(0.3 + 0.7 * self.used as f64)
        } else {
            *params += 1;
            Angle::Param(*params - 1)
        }
    }
}

/// Builds a construction plan by greedy propagation from a projective base.
pub fn construction_plan(ts: &TripleSystem) -> Result<ConstructionPlan> {
    if ts.n() < 3 {
        return Err(Error::NoBase(format!("only {} lines", ts.n())));
    }
    let base: Vec<usize> = match choose_base(ts) {
        Some(q) => q.to_vec(),
        None => partial_base(ts),
    };
    let mut known = Known::new(ts);
    let mut steps = Vec::new();
    for (slot, &b) in base.iter().enumerate() {
        known.points[b] = true;
        steps.push(Step::Base { point: b, coords: BASE_COORDS[slot] });
    }
    let mut gauge = Gauge { budget: 2 * (4 - base.len()), used: 0 };
    let mut params = 0;
    known.propagate(&mut steps);

    while known.lines.iter().any(|&k| !k) {
        let mut best: Option<(usize, usize, Step)> = None;
        let consider = |known: &Known, step: Step, best: &mut Option<(usize, usize, Step)>| {
            let mut trial = known.clone();
            match step {
                Step::MovablePoint { point, .. } => trial.points[point] = true,
                Step::MovableLine { line, .. } => trial.lines[line] = true,
                _ => unreachable!(),
            }
            let rounds = trial.propagate(&mut Vec::new());
            let gain = trial.known_count();
            let better = match best {
                None => true,
                Some((g, r, _)) => gain > *g || (gain == *g && rounds < *r),
            };
            if better {
                *best = Some((gain, rounds, step));
            }
        };
        for point in 0..known.points.len() {
            if known.points[point] {
                continue;
            }
            let ls: Vec<usize> = known.triples[point].iter().copied().filter(|&l| known.lines[l]).collect();
            if ls.len() == 1 {
                let step = Step::MovablePoint { point, on: ls[0], angle: Angle::Gauge(0.0) };
                consider(&known, step, &mut best);
            }
        }
        if best.is_none() {
            for line in 0..known.lines.len() {
                if known.lines[line] {
                    continue;
                }
                if let Some(&p) = known.on_line[line].iter().find(|&&p| known.points[p]) {
                    let step = Step::MovableLine { line, through: p, angle: Angle::Gauge(0.0) };
                    consider(&known, step, &mut best);
                }
            }
        }
        let step = match best {
            Some((_, _, Step::MovablePoint { point, on, .. })) => {
                known.points[point] = true;
                Step::MovablePoint { point, on, angle: gauge.angle(&mut params) }
            }
            Some((_, _, Step::MovableLine { line, through, .. })) => {
                known.lines[line] = true;
                Step::MovableLine { line, through, angle: gauge.angle(&mut params) }
            }
            _ => {
                let line = known.lines.iter().position(|&k| !k).expect("an unknown line remains");
                known.lines[line] = true;
                let angles = [gauge.angle(&mut params), gauge.angle(&mut params)];
                Step::FreeLine { line, angles }
            }
        };
        steps.push(step);
        known.propagate(&mut steps);
    }

    let mut used = Vec::new();
    for s in &steps {
        match *s {
            Step::Join { line, through } => used.extend(through.map(|point| Incidence { point, line })),
            Step::Meet { point, on } => used.extend(on.map(|line| Incidence { point, line })),
            Step::MovablePoint { point, on, .. } => used.push(Incidence { point, line: on }),
            Step::MovableLine { line, through, .. } => used.push(Incidence { point: through, line }),
            _ => {}
        }
    }
    let mut residuals = Vec::new();
    for (point, t) in known.triples.iter().enumerate() {
        for &line in t {
            let inc = Incidence { point, line };
            if !used.contains(&inc) {
                residuals.push(inc);
            }
        }
    }
    Ok(ConstructionPlan {
        system: ts.clone(),
        base,
        steps,
        residuals,
        parameters: params,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn movables(plan: &ConstructionPlan) -> Vec<String> {
        plan.steps
            .iter()
            .filter_map(|s| match s {
                Step::MovablePoint { point, on, .. } => Some(format!("{} on {}", plan.point_name(*point), on + 1)),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn c1_follows_the_hand_construction() {
        let plan = construction_plan(&catalog::list(1)).unwrap();
        assert_eq!(plan.parameters, 1);
        assert!(plan.is_complete());
        assert_eq!(movables(&plan), vec!["[2,6,9] on 2"]);
        let res: Vec<String> = plan.residuals.iter().map(|r| plan.describe(r)).collect();
        assert!(res.contains(&"line 8 through [4,8,10]".to_string()), "{res:?}");
        assert_eq!(res.len(), 4);
    }

    #[test]
    fn c2_plan() {
        let plan = construction_plan(&catalog::list(2)).unwrap();
        assert_eq!(plan.parameters, 1);
        let res: Vec<String> = plan.residuals.iter().map(|r| plan.describe(r)).collect();
        assert!(res.contains(&"line 10 through [7,9,10]".to_string()), "{res:?}");
    }

    #[test]
    fn near_pencil_needs_nothing() {
        let ts = TripleSystem::from_arrays(4, &[[1, 2, 3]]).unwrap();
        let plan = construction_plan(&ts).unwrap();
        assert_eq!(plan.parameters, 0);
        assert!(plan.residuals.is_empty());
        assert!(!plan.is_complete());
        assert!(plan.evaluate(&[]).is_some());
    }

    #[test]
    fn defining_incidences_hold() {
        for (_, ts) in catalog::all_lists() {
            let plan = construction_plan(&ts).unwrap();
            for k in 0..20 {
                let params: Vec<f64> = (0..plan.parameters).map(|i| -1.4 + 0.13 * (k + 3 * i) as f64).collect();
                let Some(c) = plan.evaluate(&params) else { continue };
                for s in &plan.steps {
                    let incs: Vec<(usize, usize)> = match *s {
                        Step::Join { line, through } => through.iter().map(|&p| (p, line)).collect(),
                        Step::Meet { point, on } => on.iter().map(|&l| (point, l)).collect(),
                        Step::MovablePoint { point, on, .. } => vec![(point, on)],
                        Step::MovableLine { line, through, .. } => vec![(through, line)],
                        _ => vec![],
                    };
                    for (p, l) in incs {
                        assert!(c.lines[l].incidence(&c.points[p]) < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn base_validity() {
        let c1 = catalog::list(1);
        let q = choose_base(&c1).unwrap();
        let names: Vec<String> = q.iter().map(|&i| c1.triples()[i].to_string()).collect();
        assert_eq!(names, ["[1,2,3]", "[1,4,5]", "[3,5,7]", "[2,4,7]"]);
        // three points of line 1 cannot be a base
        let idx = |t: [Label; 3]| c1.triples().iter().position(|x| x.labels() == t).unwrap();
        assert!(!is_valid_base(&c1, &[idx([1, 2, 3]), idx([1, 4, 5]), idx([1, 6, 7]), idx([2, 4, 7])]));
    }
}
