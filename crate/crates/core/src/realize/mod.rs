//! Straight-line realizability of triple systems.
//!
//! [`realize`] first tries a ruler construction ([`plan`]): it samples the
//! construction's parameters ([`probe`]), reports an obstruction when some
//! unwanted incidence holds at every sample, and otherwise looks for
//! parameters that satisfy the leftover incidences. A least-squares fit over
//! all line coefficients ([`fit`]) is the fallback. Every realization is
//! checked by recomputing its intersection points.

pub mod fit;
pub mod lm;
pub mod plan;
pub mod probe;

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_2;

pub use fit::global_fit;
pub use plan::{construction_plan, ConstructionPlan};
pub use probe::{probe, ProbeReport, ResidualClass};

use crate::arrangement::{double_points_of, Label, TripleSystem};
use crate::boroczky::cluster_intersections;
use crate::geometry::{concurrence, HomLine};
use lm::{levenberg_marquardt, LmOptions};
use probe::{sample_configuration, Sampler};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Construction whose leftover incidences hold for all parameters.
    Generic,
    /// Construction with parameters solved for.
    RootSearch,
    /// Found by the global fit on the given restart (1-based).
    GlobalFit { restart: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Realizable {
        lines: Vec<HomLine<f64>>,
        parameters: Vec<f64>,
        max_residual: f64,
        method: Method,
    },
    /// Numerical evidence only, never a proof.
    Obstructed {
        incidences: Vec<String>,
        samples: usize,
        max_value: f64,
    },
    Unknown {
        diagnostics: String,
    },
}

impl Verdict {
    pub fn is_realizable(&self) -> bool {
        matches!(self, Verdict::Realizable { .. })
    }

    pub fn is_obstructed(&self) -> bool {
        matches!(self, Verdict::Obstructed { .. })
    }

    /// One-line summary for reports.
    pub fn summary(&self) -> String {
        match self {
            Verdict::Realizable { max_residual, method, .. } => {
                format!("realizable ({method:?}, max residual {max_residual:.1e})")
            }
            Verdict::Obstructed { incidences, samples, .. } => format!(
                "obstructed: {} (numerically certified at {samples} samples)",
                incidences.join("; ")
            ),
            Verdict::Unknown { diagnostics } => format!("unknown: {diagnostics}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RealizeOptions {
    pub samples: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        RealizeOptions {
            samples: 1000,
            restarts: 200,
            seed: 0,
        }
    }
}

/// Largest normalized determinant over the triples that should be concurrent.
pub fn max_concurrence(lines: &[HomLine<f64>], ts: &TripleSystem) -> f64 {
    ts.triples()
        .iter()
        .map(|t| {
            let [a, b, c] = t.labels().map(|l| l as usize - 1);
            concurrence(&lines[a], &lines[b], &lines[c]).abs()
        })
        .fold(0.0, f64::max)
}

/// Explains why `lines` fail to realize `ts` at tolerance `eps`.
pub fn check_realization(lines: &[HomLine<f64>], ts: &TripleSystem, eps: f64) -> Result<(), String> {
    if lines.len() != ts.n() as usize {
        return Err(format!("{} lines for {} labels", lines.len(), ts.n()));
    }
    let clusters = cluster_intersections(lines, eps).map_err(|e| e.to_string())?;
    let wider = cluster_intersections(lines, 10.0 * eps).map_err(|e| e.to_string())?;
    if wider.len() != clusters.len() {
        return Err(format!("{} points at eps but {} at 10*eps", clusters.len(), wider.len()));
    }
    let mut triples = BTreeSet::new();
    let mut doubles = BTreeSet::new();
    for c in &clusters {
        match c.lines.as_slice() {
            &[a, b] => {
                doubles.insert((a, b));
            }
            &[a, b, c] => {
                triples.insert([a, b, c]);
            }
            other => return Err(format!("lines {other:?} are concurrent")),
        }
    }
    let want_triples: BTreeSet<[Label; 3]> = ts.triples().iter().map(|t| t.labels()).collect();
    let want_doubles: BTreeSet<(Label, Label)> = double_points_of(ts).into_iter().collect();
    if triples != want_triples {
        let extra: Vec<_> = triples.difference(&want_triples).collect();
        let missing: Vec<_> = want_triples.difference(&triples).collect();
        return Err(format!("triple points differ: extra {extra:?}, missing {missing:?}"));
    }
    if doubles != want_doubles {
        return Err("double points differ".into());
    }
    Ok(())
}

/// True iff the intersection points of `lines` are exactly the triples and
/// double points of `ts`.
pub fn verify_realization(lines: &[HomLine<f64>], ts: &TripleSystem, eps: f64) -> bool {
    check_realization(lines, ts, eps).is_ok()
}

fn try_parameters(plan: &ConstructionPlan, params: &[f64], method: Method) -> Option<Verdict> {
    let c = sample_configuration(plan, params)?;
    let lines: Vec<HomLine<f64>> = c.lines.iter().map(|l| l.normalized()).collect();
    let worst = max_concurrence(&lines, &plan.system);
    (worst < 1e-10 && verify_realization(&lines, &plan.system, 1e-9)).then(|| Verdict::Realizable {
        lines,
        parameters: params.to_vec(),
        max_residual: worst,
        method,
    })
}

fn polish(plan: &ConstructionPlan, start: &[f64]) -> Option<Vec<f64>> {
    let m = plan.residuals.len();
    let f = |x: &[f64], r: &mut [f64]| match plan.evaluate(x) {
        Some(c) => {
            r.copy_from_slice(&plan.residual_values(&c));
            true
        }
        None => false,
    };
    levenberg_marquardt(f, start, m, &LmOptions::default()).map(|r| r.x)
}

/// Roots of the first parameter-dependent residual on a grid over the whole
/// pencil, refined by bisection, then polished against all residuals.
fn search_one_parameter(plan: &ConstructionPlan, report: &ProbeReport) -> Option<Verdict> {
    let key = report
        .residuals
        .iter()
        .position(|r| r.class == ResidualClass::ParameterDependent)?;
    let value = |t: f64| plan.evaluate(&[t]).map(|c| plan.residual_values(&c)[key]);
    const GRID: usize = 4000;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=GRID {
        let t = -FRAC_PI_2 + std::f64::consts::PI * i as f64 / GRID as f64;
        let Some(v) = value(t) else {
            prev = None;
            continue;
        };
        if let Some((t0, v0)) = prev {
            if v0 == 0.0 || v0.signum() != v.signum() {
                let (mut lo, mut hi, mut flo) = (t0, t, v0);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    let Some(fm) = value(mid) else { break };
                    if fm == 0.0 {
                        lo = mid;
                        hi = mid;
                        break;
                    }
                    if fm.signum() == flo.signum() {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                let root = 0.5 * (lo + hi);
                for x in [Some(vec![root]), polish(plan, &[root])].into_iter().flatten() {
                    if let Some(v) = try_parameters(plan, &x, Method::RootSearch) {
                        return Some(v);
                    }
                }
            }
        }
        prev = Some((t, v));
    }
    None
}

fn search_many_parameters(plan: &ConstructionPlan, opts: &RealizeOptions) -> Option<Verdict> {
    let mut sampler = Sampler::new(plan.parameters, opts.seed ^ 0x5eed);
    for _ in 0..opts.restarts {
        let start = sampler.draw();
        if let Some(x) = polish(plan, &start) {
            if let Some(v) = try_parameters(plan, &x, Method::RootSearch) {
                return Some(v);
            }
        }
    }
    None
}

/// Decides realizability of `ts` by construction, root search and global fit.
pub fn realize(ts: &TripleSystem, opts: &RealizeOptions) -> Verdict {
    let mut notes = Vec::new();
    match construction_plan(ts) {
        Ok(plan) => {
            let report = probe(&plan, opts.samples, opts.seed);
            if !report.unintended.is_empty() && plan.is_complete() {
                return Verdict::Obstructed {
                    incidences: report.unintended.iter().map(|u| u.description.clone()).collect(),
                    samples: report.samples,
                    max_value: report.unintended.iter().map(|u| u.max_value).fold(0.0, f64::max),
                };
            }
            if report.unintended.is_empty() {
                let found = if report.all_satisfied() {
                    let mut sampler = Sampler::new(plan.parameters, opts.seed ^ 0x9e37);
                    (0..50).find_map(|_| try_parameters(&plan, &sampler.draw(), Method::Generic))
                } else if report.any_violated() {
                    notes.push("a leftover incidence never holds".to_string());
                    None
                } else if plan.parameters == 1 {
                    search_one_parameter(&plan, &report)
                } else {
                    search_many_parameters(&plan, opts)
                };
                if let Some(v) = found {
                    return v;
                }
                notes.push(format!(
                    "construction with {} parameters and {} leftover incidences found no verified solution",
                    plan.parameters,
                    plan.residuals.len()
                ));
            } else {
                notes.push(format!("unwanted incidences with an incomplete base: {}", report.unintended[0].description));
            }
        }
        Err(e) => notes.push(e.to_string()),
    }
    match global_fit(ts, opts.restarts, opts.seed) {
        v @ Verdict::Realizable { .. } => v,
        Verdict::Unknown { diagnostics } => {
            notes.push(diagnostics);
            Verdict::Unknown { diagnostics: notes.join("; ") }
        }
        Verdict::Obstructed { .. } => unreachable!("global fit never reports obstructions"),
    }
}
