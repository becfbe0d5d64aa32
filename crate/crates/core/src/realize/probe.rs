//! Random sampling of a plan's parameter space: which leftover incidences
//! hold for every parameter, and which incidences nobody asked for appear.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::plan::{Configuration, ConstructionPlan, Incidence, DEGENERATE};
use crate::arrangement::{double_points_of, Label};

/// An incidence "holds" below this normalized value.
pub const HOLDS: f64 = 1e-9;
/// An incidence is "clearly violated" above this value.
pub const VIOLATED: f64 = 1e-6;

/// Draws parameter vectors: uniform `t` in `[-10, 10]` mapped to the angle
/// `t * pi / 20`, which sweeps each movable object once around its pencil.
pub struct Sampler {
    rng: ChaCha8Rng,
    dim: usize,
}

impl Sampler {
    pub fn new(dim: usize, seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            dim,
        }
    }

    pub fn draw(&mut self) -> Vec<f64> {
        (0..self.dim)
            .map(|_| self.rng.gen_range(-10.0..=10.0) * std::f64::consts::PI / 20.0)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidualClass {
    /// Below [`HOLDS`] at every sample.
    IdenticallySatisfied,
    /// Bounded away from zero with a constant sign.
    IdenticallyViolated,
    /// Changes sign or vanishes only at some samples.
    ParameterDependent,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub incidence: Incidence,
    pub class: ResidualClass,
    pub min_abs: f64,
    pub max_abs: f64,
}

/// A point the combinatorics does not put on a line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PointRef {
    /// Index into the system's triples.
    Triple(usize),
    /// Crossing of two lines (0-based) that meet in a double point.
    Double(usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnintendedIncidence {
    pub line: usize,
    pub point: PointRef,
    /// Largest normalized incidence value over all samples.
    pub max_value: f64,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeReport {
    pub residuals: Vec<ResidualReport>,
    /// Incidences below [`HOLDS`] at every sample.
    pub unintended: Vec<UnintendedIncidence>,
    /// Samples actually evaluated.
    pub samples: usize,
    /// Degenerate samples that were redrawn.
    pub discarded: usize,
}

impl ProbeReport {
    pub fn all_satisfied(&self) -> bool {
        self.residuals.iter().all(|r| r.class == ResidualClass::IdenticallySatisfied)
    }

    pub fn any_violated(&self) -> bool {
        self.residuals.iter().any(|r| r.class == ResidualClass::IdenticallyViolated)
    }
}

fn collapsed(c: &Configuration) -> bool {
    let close_points = c
        .points
        .iter()
        .enumerate()
        .any(|(i, p)| c.points[i + 1..].iter().any(|q| p.distance(q) < DEGENERATE));
    let close_lines = c
        .lines
        .iter()
        .enumerate()
        .any(|(i, l)| c.lines[i + 1..].iter().any(|m| l.distance(m) < DEGENERATE));
    close_points || close_lines
}

/// Evaluates the plan at a sample, or `None` if the sample degenerates.
pub fn sample_configuration(plan: &ConstructionPlan, params: &[f64]) -> Option<Configuration> {
    let c = plan.evaluate(params)?;
    (!collapsed(&c)).then_some(c)
}

struct Tracker {
    /// (line, point) pairs the combinatorics keeps apart.
    candidates: Vec<(usize, PointRef)>,
    max: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl Tracker {
    fn new(plan: &ConstructionPlan) -> Self {
        let ts = &plan.system;
        let n = ts.n() as usize;
        let mut candidates = Vec::new();
        for (i, t) in ts.triples().iter().enumerate() {
            for line in 0..n {
                if !t.contains(line as Label + 1) {
                    candidates.push((line, PointRef::Triple(i)));
                }
            }
        }
        for (a, b) in double_points_of(ts) {
            let (a, b) = (a as usize - 1, b as usize - 1);
            for line in (0..n).filter(|&l| l != a && l != b) {
                candidates.push((line, PointRef::Double(a, b)));
            }
        }
        let k = candidates.len();
        Tracker {
            candidates,
            max: vec![0.0; k],
            values: vec![Vec::new(); plan.residuals.len()],
        }
    }

    fn record(&mut self, plan: &ConstructionPlan, c: &Configuration) {
        for (v, r) in self.values.iter_mut().zip(plan.residual_values(c)) {
            v.push(r);
        }
        for (k, &(line, point)) in self.candidates.iter().enumerate() {
            let p = match point {
                PointRef::Triple(i) => c.points[i],
                PointRef::Double(a, b) => c.lines[a].meet(&c.lines[b]),
            };
            let v = c.lines[line].incidence(&p);
            if v > self.max[k] {
                self.max[k] = v;
            }
        }
    }
}

fn classify(values: &[f64]) -> ResidualClass {
    if values.iter().all(|v| v.abs() < HOLDS) {
        return ResidualClass::IdenticallySatisfied;
    }
    let pos = values.iter().any(|&v| v > HOLDS);
    let neg = values.iter().any(|&v| v < -HOLDS);
    if pos && neg {
        return ResidualClass::ParameterDependent;
    }
    let clear = values.iter().filter(|v| v.abs() > VIOLATED).count();
    if clear * 10 > values.len() * 9 {
        ResidualClass::IdenticallyViolated
    } else {
        ResidualClass::ParameterDependent
    }
}

fn in_gap(values: &[f64]) -> bool {
    let below = values.iter().filter(|v| v.abs() < HOLDS).count();
    below > 0 && below < values.len() && values.iter().all(|v| v.abs() < VIOLATED)
}

fn describe_point(plan: &ConstructionPlan, p: PointRef) -> String {
    match p {
        PointRef::Triple(i) => plan.point_name(i),
        PointRef::Double(a, b) => format!("[{},{}]", a + 1, b + 1),
    }
}

/// Samples the plan at `samples` non-degenerate parameter vectors drawn from
/// `seed`, drawing one extra batch when some residual sits in the band
/// between [`HOLDS`] and [`VIOLATED`].
pub fn probe(plan: &ConstructionPlan, samples: usize, seed: u64) -> ProbeReport {
    let mut tracker = Tracker::new(plan);
    let mut sampler = Sampler::new(plan.parameters, seed);
    let mut evaluated = 0;
    let mut discarded = 0;
    let mut batch = |want: usize, tracker: &mut Tracker, evaluated: &mut usize, discarded: &mut usize| {
        let mut got = 0;
        let mut tries = 0;
        while got < want && tries < 20 * want.max(1) {
            tries += 1;
            match sample_configuration(plan, &sampler.draw()) {
                Some(c) => {
                    tracker.record(plan, &c);
                    got += 1;
                }
                None => *discarded += 1,
            }
        }
        *evaluated += got;
    };
    batch(samples, &mut tracker, &mut evaluated, &mut discarded);
    if tracker.values.iter().any(|v| in_gap(v)) {
        batch(samples, &mut tracker, &mut evaluated, &mut discarded);
    }

    let residuals = plan
        .residuals
        .iter()
        .zip(&tracker.values)
        .map(|(&incidence, v)| ResidualReport {
            incidence,
            class: classify(v),
            min_abs: v.iter().fold(f64::INFINITY, |m, x| m.min(x.abs())),
            max_abs: v.iter().fold(0.0, |m, x| m.max(x.abs())),
        })
        .collect();
    let unintended = if evaluated == 0 {
        Vec::new()
    } else {
        tracker
            .candidates
            .iter()
            .zip(&tracker.max)
            .filter(|(_, &m)| m < HOLDS)
            .map(|(&(line, point), &max_value)| UnintendedIncidence {
                line,
                point,
                max_value,
                description: format!("line {} through {}", line + 1, describe_point(plan, point)),
            })
            .collect()
    };
    ProbeReport {
        residuals,
        unintended,
        samples: evaluated,
        discarded,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::TripleSystem;
    use crate::catalog;
    use crate::realize::plan::construction_plan;

    #[test]
    fn classification_rules() {
        assert_eq!(classify(&[1e-12, -3e-13]), ResidualClass::IdenticallySatisfied);
        assert_eq!(classify(&[0.2, -0.1, 0.3]), ResidualClass::ParameterDependent);
        assert_eq!(classify(&[0.2, 0.1, 0.3]), ResidualClass::IdenticallyViolated);
        assert_eq!(classify(&[0.2, 1e-7, 1e-8]), ResidualClass::ParameterDependent);
        assert!(in_gap(&[1e-10, 1e-8]));
        assert!(!in_gap(&[1e-10, 1e-3]));
    }

    #[test]
    fn c1_shows_the_forced_incidence() {
        let plan = construction_plan(&catalog::list(1)).unwrap();
        let report = probe(&plan, 200, 7);
        assert_eq!(report.samples, 200);
        let found: Vec<&str> = report.unintended.iter().map(|u| u.description.as_str()).collect();
        assert!(found.contains(&"line 8 through [5,6,10]"), "{found:?}");
    }

    #[test]
    fn c6_and_c7_satisfy_everything() {
        for i in [6, 7] {
            let plan = construction_plan(&catalog::list(i)).unwrap();
            let report = probe(&plan, 200, 7);
            assert!(report.all_satisfied(), "C{i}: {:?}", report.residuals);
            assert!(report.unintended.is_empty(), "C{i}: {:?}", report.unintended);
        }
    }

    #[test]
    fn c2_residuals_depend_on_the_parameter() {
        let plan = construction_plan(&catalog::list(2)).unwrap();
        let report = probe(&plan, 200, 7);
        assert!(report.unintended.is_empty());
        assert!(!report.any_violated());
        assert!(report.residuals.iter().any(|r| r.class == ResidualClass::ParameterDependent));
    }

    #[test]
    fn empty_plan_has_nothing_to_report() {
        let ts = TripleSystem::from_arrays(4, &[[1, 2, 3]]).unwrap();
        let plan = construction_plan(&ts).unwrap();
        let report = probe(&plan, 100, 1);
        assert!(report.residuals.is_empty());
    }

    #[test]
    fn seeded_probes_repeat() {
        let plan = construction_plan(&catalog::list(2)).unwrap();
        assert_eq!(probe(&plan, 100, 3), probe(&plan, 100, 3));
    }
}
