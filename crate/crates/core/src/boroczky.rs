//! The Böröczky line arrangements and numerical intersection census.
//!
//! `B_n` (n even) lives on a regular n-gon `P_0, ..., P_{n-1}` inscribed in
//! the unit circle. Line `i` joins `P_i` to `P_{(n/2 - 2i) mod n}`, or is the
//! tangent at `P_i` when both indices agree.

use std::collections::BTreeMap;

use crate::arrangement::{Label, Profile, Triple, TripleSystem};
use crate::error::{Error, Result};
use crate::geometry::{HomLine, HomPoint};
use crate::scalar::Scalar;

/// Default clustering tolerance (projective angle, radians).
pub const DEFAULT_EPS: f64 = 1e-9;

/// How each line of `B_n` arose.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Secant { from: usize, to: usize },
    Tangent { at: usize },
}

fn vertex<S: Scalar>(n: usize, k: usize) -> (S, S) {
    let angle = S::lit(2.0 * std::f64::consts::PI * k as f64 / n as f64);
    (angle.cos(), angle.sin())
}

/// Lines of `B_n` with the rule that produced each one.
pub fn generate_with_provenance<S: Scalar>(n: u32) -> Result<Vec<(HomLine<S>, Provenance)>> {
    if n < 6 || n % 2 != 0 {
        return Err(Error::BoroczkySize(n));
    }
    let n = n as usize;
    let dup = S::lit(1e-12);
    let mut out: Vec<(HomLine<S>, Provenance)> = Vec::with_capacity(n);
    for i in 0..n {
        let j = (n / 2 + 2 * n - 2 * i % n) % n;
        let (x, y) = vertex::<S>(n, i);
        let (line, prov) = if i == j {
            (HomLine::new(x, y, -S::one()), Provenance::Tangent { at: i })
        } else {
            let (u, v) = vertex::<S>(n, j);
            let l = HomPoint::affine(x, y).join(&HomPoint::affine(u, v));
            (l, Provenance::Secant { from: i, to: j })
        };
        let line = line.normalized();
        if out.iter().all(|(m, _)| m.distance(&line) > dup) {
            out.push((line, prov));
        }
    }
    Ok(out)
}

/// The lines of `B_n`, normalized.
pub fn generate<S: Scalar>(n: u32) -> Result<Vec<HomLine<S>>> {
    Ok(generate_with_provenance(n)?.into_iter().map(|(l, _)| l).collect())
}

/// An intersection point and the lines through it.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCluster<S> {
    pub point: HomPoint<S>,
    /// 1-based line labels, ascending.
    pub lines: Vec<Label>,
}

impl<S> PointCluster<S> {
    pub fn multiplicity(&self) -> usize {
        self.lines.len()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Groups the pairwise intersection points of `lines` that lie within
/// `eps` of each other.
pub fn cluster_intersections<S: Scalar>(lines: &[HomLine<S>], eps: S) -> Result<Vec<PointCluster<S>>> {
    let n = lines.len();
    let mut points = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for i in 0..n {
        for j in i + 1..n {
            if lines[i].distance(&lines[j]) <= eps {
                return Err(Error::CoincidentLines(i as Label + 1, j as Label + 1));
            }
            points.push(((i, j), lines[i].meet(&lines[j]).unit()));
        }
    }
    let mut parent: Vec<usize> = (0..points.len()).collect();
    for a in 0..points.len() {
        for b in a + 1..points.len() {
            if points[a].1.distance(&points[b].1) <= eps {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for a in 0..points.len() {
        let r = find(&mut parent, a);
        groups.entry(r).or_default().push(a);
    }
    let mut out = Vec::with_capacity(groups.len());
    for (root, members) in groups {
        let mut labels: Vec<Label> = members
            .iter()
            .flat_map(|&m| {
                let (i, j) = points[m].0;
                [i as Label + 1, j as Label + 1]
            })
            .collect();
        labels.sort_unstable();
        labels.dedup();
        let r = labels.len();
        if members.len() != r * (r - 1) / 2 {
            return Err(Error::InconsistentCluster {
                lines: labels,
                pairs: members.len(),
                expected: r * (r - 1) / 2,
            });
        }
        out.push(PointCluster {
            point: points[root].1.normalized(),
            lines: labels,
        });
    }
    Ok(out)
}

/// Census of the intersection points of `lines`, checked for stability
/// between `eps` and `10 * eps`.
pub fn intersection_profile<S: Scalar>(
    lines: &[HomLine<S>],
    eps: S,
) -> Result<(Profile, Vec<PointCluster<S>>)> {
    let clusters = cluster_intersections(lines, eps)?;
    let wider = cluster_intersections(lines, eps * S::lit(10.0))?;
    if wider.len() != clusters.len() {
        return Err(Error::UnstableClustering {
            at_eps: clusters.len(),
            at_ten_eps: wider.len(),
        });
    }
    let mut t: BTreeMap<u32, u64> = BTreeMap::new();
    for c in &clusters {
        *t.entry(c.multiplicity() as u32).or_insert(0) += 1;
    }
    Ok((Profile::new(lines.len() as u32, t)?, clusters))
}

/// The triple points of `lines` as a triple system on labels `1..=n`.
pub fn triple_system_of<S: Scalar>(lines: &[HomLine<S>], eps: S) -> Result<TripleSystem> {
    let (_, clusters) = intersection_profile(lines, eps)?;
    let mut triples = Vec::new();
    for c in &clusters {
        match c.multiplicity() {
            2 => {}
            3 => triples.push(Triple::new(c.lines[0], c.lines[1], c.lines[2])?),
            r => return Err(Error::HighMultiplicity(r)),
        }
    }
    TripleSystem::new(lines.len() as Label, triples)
}

/// The census `B_n` is claimed to have: `1 + floor(n(n-3)/6)` triple points
/// and `n - 3 + e` double points, with `e = 0` when `3 | n` and `2` otherwise.
pub fn expected_profile(n: u32) -> Profile {
    let n64 = n as u64;
    let e = if n % 3 == 0 { 0 } else { 2 };
    Profile::new(n, [(2, n64 - 3 + e), (3, 1 + n64 * (n64 - 3) / 6)]).expect("valid census")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_lines_with_three_tangents() {
        let lines = generate_with_provenance::<f64>(12).unwrap();
        assert_eq!(lines.len(), 12);
        let tangents: Vec<usize> = lines
            .iter()
            .filter_map(|(_, p)| match p {
                Provenance::Tangent { at } => Some(*at),
                _ => None,
            })
            .collect();
        assert_eq!(tangents, vec![2, 6, 10]);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert_eq!(generate::<f64>(7).unwrap_err(), Error::BoroczkySize(7));
        assert!(generate::<f64>(4).is_err());
        assert_eq!(generate::<f64>(6).unwrap().len(), 6);
    }

    #[test]
    fn census_of_b12_and_b10() {
        let (p, _) = intersection_profile(&generate::<f64>(12).unwrap(), 1e-9).unwrap();
        assert_eq!((p.t(2), p.t(3)), (9, 19));
        let (p, _) = intersection_profile(&generate::<f64>(10).unwrap(), 1e-9).unwrap();
        assert_eq!((p.t(2), p.t(3)), (9, 12));
    }

    #[test]
    fn two_generic_lines() {
        let lines = [HomLine::new(1.0, 0.0, 0.0), HomLine::new(0.0, 1.0, -1.0)];
        let (p, clusters) = intersection_profile(&lines, 1e-9).unwrap();
        assert_eq!(p.t(2), 1);
        assert_eq!(clusters[0].lines, vec![1, 2]);
    }

    #[test]
    fn coincident_lines_are_rejected() {
        let lines = [HomLine::new(1.0, 2.0, 3.0), HomLine::new(-2.0, -4.0, -6.0)];
        assert_eq!(
            cluster_intersections(&lines, 1e-9).unwrap_err(),
            Error::CoincidentLines(1, 2)
        );
    }

    #[test]
    fn triple_systems() {
        assert_eq!(triple_system_of(&generate::<f64>(6).unwrap(), 1e-9).unwrap().len(), 4);
        assert_eq!(triple_system_of(&generate::<f64>(12).unwrap(), 1e-9).unwrap().len(), 19);
        let generic = [
            HomLine::new(1.0, 0.0, 0.0),
            HomLine::new(0.0, 1.0, 0.0),
            HomLine::new(1.0, 1.0, -1.0),
        ];
        assert!(triple_system_of(&generic, 1e-9).unwrap().is_empty());
        let pencil = [
            HomLine::new(1.0, 0.0, 0.0),
            HomLine::new(0.0, 1.0, 0.0),
            HomLine::new(1.0, 1.0, 0.0),
            HomLine::new(1.0, -1.0, 0.0),
            HomLine::new(1.0, 1.0, -1.0),
        ];
        assert_eq!(triple_system_of(&pencil, 1e-9).unwrap_err(), Error::HighMultiplicity(4));
    }

    #[test]
    fn single_precision_b12() {
        let (p, _) = intersection_profile(&generate::<f32>(12).unwrap(), 1e-4).unwrap();
        assert_eq!((p.t(2), p.t(3)), (9, 19));
    }
}
