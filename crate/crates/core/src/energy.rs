//! The energy `E(s,t) = ½|γ(t) − γ(s)|²` on the cord torus and its critical
//! points away from the diagonal.

use std::cmp::Ordering;
use std::collections::HashMap;

use nalgebra::{Matrix2, SymmetricEigen, Vector2};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Tolerances;
use crate::curve::{KnotCurve, Vec3};
use crate::error::{CordError, Result};
use crate::ring::AlgebraElement;
use crate::spec::BraidMeta;

/// A linear cord from `γ(s)` to `γ(t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CordPoint {
    pub s: f64,
    pub t: f64,
    #[serde(skip)]
    pub chord: Vec3,
    pub length: f64,
}

impl CordPoint {
    pub fn new(curve: &KnotCurve, s: f64, t: f64) -> Self {
        let s = curve.wrap(s);
        let t = curve.wrap(t);
        let chord = curve.point(t) - curve.point(s);
        CordPoint {
            s,
            t,
            chord,
            length: chord.norm(),
        }
    }

    pub fn reversed(&self, curve: &KnotCurve) -> Self {
        CordPoint::new(curve, self.t, self.s)
    }

    pub fn energy(&self) -> f64 {
        0.5 * self.length * self.length
    }

    /// Distance on the torus with the flat metric.
    pub fn distance(&self, other: &CordPoint, curve: &KnotCurve) -> f64 {
        curve
            .circular_delta(self.s, other.s)
            .hypot(curve.circular_delta(self.t, other.t))
    }

    /// Whether the start parameter is smaller than the end parameter.
    pub fn is_forward(&self) -> bool {
        self.s < self.t
    }
}

pub fn energy(curve: &KnotCurve, s: f64, t: f64) -> f64 {
    0.5 * (curve.point(t) - curve.point(s)).norm_squared()
}

pub fn gradient(curve: &KnotCurve, s: f64, t: f64) -> Vector2<f64> {
    let a = curve.jet(s);
    let b = curve.jet(t);
    let w = b.p - a.p;
    Vector2::new(-w.dot(&a.d1), w.dot(&b.d1))
}

pub fn hessian(curve: &KnotCurve, s: f64, t: f64) -> Matrix2<f64> {
    let a = curve.jet(s);
    let b = curve.jet(t);
    let w = b.p - a.p;
    let ss = a.d1.norm_squared() - w.dot(&a.d2);
    let tt = b.d1.norm_squared() + w.dot(&b.d2);
    let st = -a.d1.dot(&b.d1);
    Matrix2::new(ss, st, st, tt)
}

/// Binormal cord with its local Morse data.
#[derive(Clone, Debug, Serialize)]
pub struct CriticalPoint {
    pub cord: CordPoint,
    pub index: u8,
    pub energy: f64,
    pub gradient_norm: f64,
    /// Ascending.
    pub eigenvalues: [f64; 2],
    /// Unit eigenvectors matching `eigenvalues`.
    pub eigenvectors: [[f64; 2]; 2],
    pub label: String,
}

impl CriticalPoint {
    fn classify(curve: &KnotCurve, cord: CordPoint) -> Self {
        let h = hessian(curve, cord.s, cord.t);
        let eig = SymmetricEigen::new(h);
        let mut order = [0usize, 1];
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let eigenvalues = [eig.eigenvalues[order[0]], eig.eigenvalues[order[1]]];
        let col = |k: usize| {
            let v = eig.eigenvectors.column(order[k]);
            [v[0], v[1]]
        };
        let index = eigenvalues.iter().filter(|&&l| l < 0.0).count() as u8;
        CriticalPoint {
            cord,
            index,
            energy: cord.energy(),
            gradient_norm: gradient(curve, cord.s, cord.t).norm(),
            eigenvalues,
            eigenvectors: [col(0), col(1)],
            label: String::new(),
        }
    }

    /// Unit direction of the unstable manifold of an index-1 point.
    pub fn unstable_direction(&self) -> Vector2<f64> {
        Vector2::new(self.eigenvectors[0][0], self.eigenvectors[0][1])
    }

    pub fn generator(&self) -> AlgebraElement {
        AlgebraElement::generator(self.label.as_str())
    }
}

/// The Bott circle on the diagonal, never discretized: its minimum `m` and
/// maximum `M` carry fixed algebra values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalData {
    /// Value of the contractible cord `m`.
    pub minimum: AlgebraElement,
    /// `D(M)`; both halves of its unstable manifold end at `m`.
    pub maximum_boundary: AlgebraElement,
}

pub fn diagonal_data() -> DiagonalData {
    let m = AlgebraElement::contractible();
    // the two flow lines out of M arrive with opposite orientations
    let (up, down) = (m.clone(), m.clone());
    DiagonalData {
        maximum_boundary: &up - &down,
        minimum: m,
    }
}

/// Newton iteration on `∇E = 0` with backtracking on `|∇E|`.
pub fn newton_polish(curve: &KnotCurve, s: f64, t: f64, tol: f64) -> Option<(f64, f64)> {
    let (mut s, mut t) = (s, t);
    let mut g = gradient(curve, s, t);
    let cap = 0.05 * curve.length();
    for _ in 0..60 {
        if g.norm() < tol {
            return Some((curve.wrap(s), curve.wrap(t)));
        }
        let h = hessian(curve, s, t);
        let mut step = match h.try_inverse() {
            Some(inv) => -(inv * g),
            None => -g,
        };
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let (ns, nt) = (s + alpha * step[0], t + alpha * step[1]);
            let ng = gradient(curve, ns, nt);
            if ng.norm() < g.norm() * (1.0 - 1e-4 * alpha) {
                s = ns;
                t = nt;
                g = ng;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            return None;
        }
    }
    (g.norm() < tol).then(|| (curve.wrap(s), curve.wrap(t)))
}

/// Critical points off the diagonal tube, found by Newton from a grid of
/// seeds; the grid doubles until `#0 − #1 + #2 = 0`.
pub fn find_critical_points(curve: &KnotCurve, tol: &Tolerances) -> Result<Vec<CriticalPoint>> {
    let mut n = tol.min_grid.max(8);
    loop {
        let found = critical_points_on_grid(curve, tol, n)?;
        let count = |k: u8| found.iter().filter(|c| c.index == k).count() as i64;
        if count(0) - count(1) + count(2) == 0 {
            return Ok(found);
        }
        if n * 2 > tol.max_grid {
            return Err(CordError::SeedingInsufficient(format!(
                "{} / {} / {} points of index 0 / 1 / 2 at grid {n}",
                count(0),
                count(1),
                count(2)
            )));
        }
        n *= 2;
    }
}

fn critical_points_on_grid(
    curve: &KnotCurve,
    tol: &Tolerances,
    n: usize,
) -> Result<Vec<CriticalPoint>> {
    let sc = tol.scaled(curve.length());
    let l = curve.length();
    let seeds: Vec<(f64, f64)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            (
                (i as f64 + 0.5) * l / n as f64,
                (j as f64 + 0.5) * l / n as f64,
            )
        })
        .filter(|&(s, t)| curve.circular_delta(s, t).abs() > sc.diag_tube)
        .collect();
    let mut hits: Vec<(f64, f64)> = seeds
        .par_iter()
        .filter_map(|&(s, t)| newton_polish(curve, s, t, sc.newton))
        .filter(|&(s, t)| curve.circular_delta(s, t).abs() > sc.diag_tube)
        .collect();
    // E is symmetric, so every point has a mirror partner
    let mirrored: Vec<(f64, f64)> = hits
        .par_iter()
        .filter_map(|&(s, t)| newton_polish(curve, t, s, sc.newton))
        .collect();
    hits.extend(mirrored);
    let classified: Vec<CriticalPoint> = hits
        .par_iter()
        .map(|&(s, t)| CriticalPoint::classify(curve, CordPoint::new(curve, s, t)))
        .collect();
    let scale = classified
        .iter()
        .map(|c| c.eigenvalues[0].abs().max(c.eigenvalues[1].abs()))
        .fold(0.0, f64::max);
    let floor = tol.nondegeneracy_floor * scale;
    if let Some(c) = classified
        .iter()
        .find(|c| c.eigenvalues.iter().any(|l| l.abs() < floor))
    {
        return Err(CordError::DegenerateCritical(c.cord.s, c.cord.t));
    }
    // merge duplicates through a periodic grid of cells no smaller than `merge`
    let cells = ((l / sc.merge).floor() as i64).max(1);
    let side = l / cells as f64;
    let cell = |x: f64| ((x.rem_euclid(l) / side).floor() as i64).rem_euclid(cells);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let mut crit: Vec<CriticalPoint> = Vec::new();
    for c in classified {
        let (i, j) = (cell(c.cord.s), cell(c.cord.t));
        let near = (-1..=1).flat_map(|di| {
            (-1..=1).map(move |dj| ((i + di).rem_euclid(cells), (j + dj).rem_euclid(cells)))
        });
        let dup = near
            .filter_map(|k| grid.get(&k))
            .flatten()
            .any(|&k| crit[k].cord.distance(&c.cord, curve) < sc.merge);
        if !dup {
            grid.entry((i, j)).or_default().push(crit.len());
            crit.push(c);
        }
    }
    crit.sort_by(|a, b| {
        a.index
            .cmp(&b.index)
            .then(a.energy.total_cmp(&b.energy))
            .then(a.cord.s.total_cmp(&b.cord.s))
    });
    Ok(crit)
}

fn orientation_suffix(c: &CordPoint) -> &'static str {
    if c.is_forward() {
        "s"
    } else {
        "t"
    }
}

/// Names critical points: mirror pairs share a stem and carry `_s` when the
/// start parameter is the smaller one, `_t` otherwise.
///
/// With braid metadata the short cords between strands become `s`/`S` (with
/// the two strand numbers appended when there are more than two strands) and
/// a long cord gets `k{i}{j}` (index 1) or `l{i}{j}` (index 2), where `i` is
/// the strand at its upper endpoint in the drawing and `j` the strand at the
/// lower one. Without metadata stems are `g`, `k`, `l` by index with a
/// counter in energy order. Stems that would still collide get `a`, `b`, ...
pub fn assign_labels(curve: &KnotCurve, points: &mut [CriticalPoint], braid: Option<&BraidMeta>) {
    let l = curve.length();
    let mut counters = [0usize; 3];
    let mut pair_of: Vec<Option<usize>> = vec![None; points.len()];
    let mut pairs: Vec<(String, usize)> = Vec::new();
    for i in 0..points.len() {
        if pair_of[i].is_some() {
            continue;
        }
        let c = points[i].cord;
        let index = points[i].index as usize;
        let stem = match braid {
            Some(meta) => {
                let short = c.length < 0.5 * meta.layout.a.min(meta.layout.b);
                let (ps, pt) = (meta.phase_at(c.s / l), meta.phase_at(c.t / l));
                let (si, ti) = (meta.strand_at(c.s / l), meta.strand_at(c.t / l));
                if short {
                    let base = ["s", "S", "T"][index.min(2)];
                    if meta.layout.strands > 2 {
                        format!("{base}{}{}", si.min(ti), si.max(ti))
                    } else {
                        base.to_string()
                    }
                } else {
                    let upper_first = if (ps.sin() - pt.sin()).abs() > 0.1 {
                        ps.sin() > pt.sin()
                    } else {
                        ps.cos() >= pt.cos()
                    };
                    let (a, b) = if upper_first { (si, ti) } else { (ti, si) };
                    format!("{}{a}{b}", ["g", "k", "l"][index.min(2)])
                }
            }
            None => {
                counters[index] += 1;
                format!("{}{}", ["g", "k", "l"][index], counters[index])
            }
        };
        let id = pairs.len();
        pairs.push((stem, index));
        pair_of[i] = Some(id);
        let mirror = (0..points.len()).find(|&j| {
            j != i && pair_of[j].is_none() && {
                let r = points[j].cord;
                curve
                    .circular_delta(r.s, c.t)
                    .hypot(curve.circular_delta(r.t, c.s))
                    < 1e-6 * l
            }
        });
        if let Some(j) = mirror {
            pair_of[j] = Some(id);
        }
    }
    let mut names: Vec<String> = pairs.iter().map(|p| p.0.clone()).collect();
    for (id, (stem, _)) in pairs.iter().enumerate() {
        let same: Vec<usize> = (0..pairs.len()).filter(|&k| &pairs[k].0 == stem).collect();
        if same.len() > 1 {
            let rank = same.iter().position(|&k| k == id).unwrap();
            names[id] = format!("{stem}{}", (b'a' + rank as u8) as char);
        }
    }
    for (p, id) in points.iter_mut().zip(pair_of) {
        p.label = format!("{}_{}", names[id.unwrap()], orientation_suffix(&p.cord));
    }
}

/// Sort key placing labels in a stable, readable order.
pub fn label_order(a: &CriticalPoint, b: &CriticalPoint) -> Ordering {
    a.index.cmp(&b.index).then(a.label.cmp(&b.label))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ellipse(a: f64, b: f64) -> KnotCurve {
        let pts: Vec<Vec3> = (0..2048)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / 2048.0 + 0.3;
                Vec3::new(a * t.cos(), b * t.sin(), 0.0)
            })
            .collect();
        KnotCurve::from_closed_points(&pts, 512).unwrap()
    }

    #[test]
    fn diagonal_is_zero() {
        let c = ellipse(2.0, 1.0);
        for s in [0.0, 1.0, 4.5] {
            assert_eq!(energy(&c, s, s), 0.0);
            assert_eq!(gradient(&c, s, s).norm(), 0.0);
        }
    }

    #[test]
    fn ellipse_census() {
        let c = ellipse(2.0, 1.0);
        let mut found = find_critical_points(&c, &Tolerances::default()).unwrap();
        assert_eq!(
            found.iter().map(|p| p.index).collect::<Vec<_>>(),
            vec![1, 1, 2, 2]
        );
        assert!((found[2].energy - 8.0).abs() < 1e-5);
        assert!((found[0].energy - 2.0).abs() < 1e-5);
        assign_labels(&c, &mut found, None);
        let mut labels: Vec<_> = found.iter().map(|p| p.label.clone()).collect();
        labels.sort();
        assert_eq!(labels, ["k1_s", "k1_t", "l1_s", "l1_t"]);
    }

    #[test]
    fn diagonal_values() {
        let d = diagonal_data();
        assert_eq!(d.minimum.to_string(), "1 - u");
        assert!(d.maximum_boundary.is_zero());
    }
}
