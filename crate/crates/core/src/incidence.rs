//! Event functions for the sets B, Fˢ, Fᵉ and S on the cord torus.

use serde::Serialize;

use crate::config::Tolerances;
use crate::curve::{KnotCurve, Vec3};
use crate::energy::CordPoint;
use crate::error::{CordError, Result};
use crate::framing::Framing;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    Start,
    End,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    BStart,
    BEnd,
    FStart,
    FEnd,
    S,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EventFunctionValue {
    pub kind: EventKind,
    pub value: f64,
    /// For F: whether the projected chord has a positive ν-component.
    pub positive: bool,
}

/// Angle of the chord, seen from one endpoint and projected to the normal
/// plane there, measured from ν in the basis `(ν, T × ν)`. `None` when the
/// chord is (numerically) tangent at that endpoint.
pub fn framing_angle(
    curve: &KnotCurve,
    framing: &Framing,
    s: f64,
    t: f64,
    endpoint: Endpoint,
) -> Option<f64> {
    let (here, there) = match endpoint {
        Endpoint::Start => (s, t),
        Endpoint::End => (t, s),
    };
    let w = curve.point(there) - curve.point(here);
    let tan = curve.tangent(here).normalize();
    let perp = w - tan * tan.dot(&w);
    if perp.norm() <= 1e-9 * w.norm().max(1e-300) {
        return None;
    }
    let nu = framing.nu(curve, here);
    let b = tan.cross(&nu);
    Some(perp.dot(&b).atan2(perp.dot(&nu)))
}

pub fn framing_event(
    curve: &KnotCurve,
    framing: &Framing,
    c: &CordPoint,
    endpoint: Endpoint,
) -> Result<EventFunctionValue> {
    let angle = framing_angle(curve, framing, c.s, c.t, endpoint).ok_or_else(|| {
        CordError::GenericityViolation(format!(
            "chord ({:.6}, {:.6}) is tangent at its {:?} point",
            c.s, c.t, endpoint
        ))
    })?;
    Ok(EventFunctionValue {
        kind: match endpoint {
            Endpoint::Start => EventKind::FStart,
            Endpoint::End => EventKind::FEnd,
        },
        value: angle.sin(),
        positive: angle.cos() > 0.0,
    })
}

/// Signed circular distance of the endpoint parameter to the basepoint.
pub fn basepoint_event(curve: &KnotCurve, c: &CordPoint, endpoint: Endpoint) -> EventFunctionValue {
    let (x, kind) = match endpoint {
        Endpoint::Start => (c.s, EventKind::BStart),
        Endpoint::End => (c.t, EventKind::BEnd),
    };
    EventFunctionValue {
        kind,
        value: curve.circular_delta(0.0, x),
        positive: true,
    }
}

/// Interior point of a chord lying on the knot.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Hit {
    /// Knot parameter of the point.
    pub u: f64,
    /// Chord fraction from the start point.
    pub tau: f64,
    pub distance: f64,
}

/// Bounding boxes over consecutive blocks of the knot polygon, shared by
/// all intersection queries.
#[derive(Clone, Debug)]
pub struct KnotIndex {
    pts: Vec<Vec3>,
    step: f64,
    blocks: Vec<(Vec3, Vec3)>,
}

const BLOCK: usize = 16;

impl KnotIndex {
    pub fn new(curve: &KnotCurve) -> Self {
        let pts = curve.polyline(1);
        let m = pts.len();
        let blocks = (0..m.div_ceil(BLOCK))
            .map(|b| {
                let mut lo = Vec3::repeat(f64::INFINITY);
                let mut hi = Vec3::repeat(f64::NEG_INFINITY);
                for i in b * BLOCK..((b + 1) * BLOCK).min(m) {
                    for p in [pts[i], pts[(i + 1) % m]] {
                        lo = lo.inf(&p);
                        hi = hi.sup(&p);
                    }
                }
                // polygon chords sag below the spline by O(h²κ)
                let pad = Vec3::repeat(0.01 * curve.spacing());
                (lo - pad, hi + pad)
            })
            .collect();
        KnotIndex {
            pts,
            step: curve.spacing(),
            blocks,
        }
    }

    fn segment(&self, i: usize) -> (Vec3, Vec3) {
        (self.pts[i], self.pts[(i + 1) % self.pts.len()])
    }

    /// Segments whose padded block box meets the box `[lo, hi]`.
    fn candidates(&self, lo: Vec3, hi: Vec3) -> impl Iterator<Item = usize> + '_ {
        let m = self.pts.len();
        self.blocks
            .iter()
            .enumerate()
            .filter(move |(_, (blo, bhi))| (0..3).all(|k| blo[k] <= hi[k] && lo[k] <= bhi[k]))
            .flat_map(move |(b, _)| b * BLOCK..((b + 1) * BLOCK).min(m))
    }
}

fn near_endpoints(curve: &KnotCurve, u: f64, ends: &[f64], margin: f64) -> bool {
    ends.iter()
        .any(|&e| curve.circular_delta(u, e).abs() < margin)
}

/// Newton on the closest approach between the knot near `u0` and the line
/// through `p` and `q`. Returns `(u, τ, γ(u) − (p + τ(q − p)))`.
pub fn closest_on_chord(
    curve: &KnotCurve,
    p: Vec3,
    q: Vec3,
    u0: f64,
    tau0: f64,
) -> (f64, f64, Vec3) {
    let d = q - p;
    let (mut u, mut tau) = (u0, tau0);
    for _ in 0..30 {
        let j = curve.jet(u);
        let r = j.p - p - d * tau;
        let g0 = r.dot(&j.d1);
        let g1 = -r.dot(&d);
        let a = j.d1.norm_squared() + r.dot(&j.d2);
        let b = -j.d1.dot(&d);
        let c = d.norm_squared();
        let det = a * c - b * b;
        if det.abs() < 1e-300 {
            break;
        }
        let du = -(c * g0 - b * g1) / det;
        let dt = -(a * g1 - b * g0) / det;
        u += du.clamp(-curve.spacing(), curve.spacing());
        tau += dt;
        if du.abs() < 1e-15 * curve.length() && dt.abs() < 1e-15 {
            break;
        }
    }
    let r = curve.point(u) - p - d * tau;
    (curve.wrap(u), tau, r)
}

/// All points of the knot on the open chord, away from its endpoints.
pub fn chord_knot_intersections(
    curve: &KnotCurve,
    index: &KnotIndex,
    c: &CordPoint,
    tol: &Tolerances,
) -> Vec<Hit> {
    let sc = tol.scaled(curve.length());
    let p = curve.point(c.s);
    let q = curve.point(c.t);
    let pad = Vec3::repeat(sc.intersect + index.step);
    let lo = p.inf(&q) - pad;
    let hi = p.sup(&q) + pad;
    let margin = sc.endpoint_margin;
    let mut hits: Vec<Hit> = Vec::new();
    for i in index.candidates(lo, hi) {
        let (a0, a1) = index.segment(i);
        let (x, y) = crate::curve::segment_closest(a0, a1, p, q);
        let gap = ((a0 + (a1 - a0) * x) - (p + (q - p) * y)).norm();
        if gap > 0.05 * index.step + sc.intersect {
            continue;
        }
        let u0 = (i as f64 + x) * curve.spacing();
        if near_endpoints(curve, u0, &[c.s, c.t], margin) {
            continue;
        }
        let (u, tau, r) = closest_on_chord(curve, p, q, u0, y);
        let dist = r.norm();
        if dist < sc.intersect
            && tau > tol.tau_floor
            && tau < 1.0 - tol.tau_floor
            && !near_endpoints(curve, u, &[c.s, c.t], margin)
            && !hits
                .iter()
                .any(|h| curve.circular_delta(h.u, u).abs() < 10.0 * sc.intersect)
        {
            hits.push(Hit {
                u,
                tau,
                distance: dist,
            });
        }
    }
    hits.sort_by(|a, b| a.tau.total_cmp(&b.tau));
    hits
}

/// Segment `a0a1` against triangle `v0v1v2` (Möller–Trumbore); returns the
/// segment fraction of the hit.
fn segment_triangle(a0: Vec3, a1: Vec3, v0: Vec3, v1: Vec3, v2: Vec3) -> Option<f64> {
    let dir = a1 - a0;
    let e1 = v1 - v0;
    let e2 = v2 - v0;
    let pv = dir.cross(&e2);
    let det = e1.dot(&pv);
    if det.abs() < 1e-300 {
        return None;
    }
    let inv = 1.0 / det;
    let tv = a0 - v0;
    let u = tv.dot(&pv) * inv;
    if !(0.0..=1.0).contains(&u) {
        return None;
    }
    let qv = tv.cross(&e1);
    let v = dir.dot(&qv) * inv;
    if v < 0.0 || u + v > 1.0 {
        return None;
    }
    let x = e2.dot(&qv) * inv;
    (0.0..=1.0).contains(&x).then_some(x)
}

/// Knot parameters where the knot passes through the surface swept by the
/// chord moving linearly from `(p0, q0)` to `(p1, q1)`. Knot points within
/// `margin` of any parameter in `ends` are ignored.
pub fn swept_hits(
    curve: &KnotCurve,
    index: &KnotIndex,
    (p0, q0): (Vec3, Vec3),
    (p1, q1): (Vec3, Vec3),
    ends: &[f64],
    margin: f64,
) -> Vec<f64> {
    let pad = Vec3::repeat(index.step);
    let lo = p0.inf(&q0).inf(&p1).inf(&q1) - pad;
    let hi = p0.sup(&q0).sup(&p1).sup(&q1) + pad;
    let mut out: Vec<f64> = Vec::new();
    for i in index.candidates(lo, hi) {
        let u_mid = (i as f64 + 0.5) * curve.spacing();
        if near_endpoints(curve, u_mid, ends, margin) {
            continue;
        }
        let (a0, a1) = index.segment(i);
        let hit =
            segment_triangle(a0, a1, p0, q0, q1).or_else(|| segment_triangle(a0, a1, p0, q1, p1));
        if let Some(x) = hit {
            out.push(curve.wrap((i as f64 + x) * curve.spacing()));
        }
    }
    out
}

/// Cords tangent to the knot at one endpoint (the boundary ∂S), tagged by the
/// endpoint where the chord is tangent.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoundaryCord {
    pub cord: CordPoint,
    pub endpoint: Endpoint,
}

/// Residual of `w ∥ T(s)`: the component of the chord normal to the tangent,
/// in a fixed normal basis, scaled by the chord length.
fn tangency_residual(curve: &KnotCurve, here: f64, there: f64) -> (f64, f64) {
    let j = curve.jet(here);
    let t = j.d1.normalize();
    let w = curve.point(there) - j.p;
    let n1 = if t.x.abs() < 0.9 {
        Vec3::x()
    } else {
        Vec3::y()
    };
    let e1 = (n1 - t * t.dot(&n1)).normalize();
    let e2 = t.cross(&e1);
    (w.dot(&e1), w.dot(&e2))
}

fn refine_tangency(curve: &KnotCurve, here: f64, there: f64, tol: f64) -> Option<(f64, f64)> {
    let (mut a, mut b) = (here, there);
    let h = 1e-6 * curve.length();
    for _ in 0..40 {
        let r = tangency_residual(curve, a, b);
        let rn = r.0.hypot(r.1);
        let w = (curve.point(b) - curve.point(a)).norm();
        if rn < tol * w.max(1e-12) {
            // the chord must point forward or backward along T, not sideways
            return Some((curve.wrap(a), curve.wrap(b)));
        }
        let ra = tangency_residual(curve, a + h, b);
        let rb = tangency_residual(curve, a, b + h);
        let j = [
            [(ra.0 - r.0) / h, (rb.0 - r.0) / h],
            [(ra.1 - r.1) / h, (rb.1 - r.1) / h],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-300 {
            return None;
        }
        let da = -(j[1][1] * r.0 - j[0][1] * r.1) / det;
        let db = -(j[0][0] * r.1 - j[1][0] * r.0) / det;
        let cap = 0.02 * curve.length();
        a += da.clamp(-cap, cap);
        b += db.clamp(-cap, cap);
    }
    None
}

/// Solves `γ(t) − γ(s) ∥ γ'(s)` (and the mirror condition at `t`) from a grid
/// scan of the residual, away from the diagonal tube.
pub fn tangent_boundary_cords(
    curve: &KnotCurve,
    tol: &Tolerances,
    grid: usize,
) -> Vec<BoundaryCord> {
    use rayon::prelude::*;
    let sc = tol.scaled(curve.length());
    let l = curve.length();
    let step = l / grid as f64;
    let found: Vec<(f64, f64)> = (0..grid)
        .into_par_iter()
        .flat_map_iter(|i| {
            let here = i as f64 * step;
            let mut out = Vec::new();
            // residual magnitude minima along the other endpoint
            let vals: Vec<f64> = (0..grid)
                .map(|j| {
                    let r = tangency_residual(curve, here, j as f64 * step);
                    r.0.hypot(r.1)
                })
                .collect();
            for j in 0..grid {
                let there = j as f64 * step;
                if curve.circular_delta(here, there).abs() < sc.diag_tube {
                    continue;
                }
                let (a, b, c) = (vals[(j + grid - 1) % grid], vals[j], vals[(j + 1) % grid]);
                if b <= a && b <= c && b < 4.0 * step {
                    if let Some(hit) = refine_tangency(curve, here, there, 1e-10) {
                        out.push(hit);
                    }
                }
            }
            out
        })
        .collect();
    let mut cords: Vec<BoundaryCord> = Vec::new();
    for (a, b) in found {
        if curve.circular_delta(a, b).abs() < sc.diag_tube {
            continue;
        }
        let c = CordPoint::new(curve, a, b);
        if cords
            .iter()
            .any(|x| x.endpoint == Endpoint::Start && x.cord.distance(&c, curve) < 1e-6 * l)
        {
            continue;
        }
        let mirror = c.reversed(curve);
        cords.push(BoundaryCord {
            cord: c,
            endpoint: Endpoint::Start,
        });
        cords.push(BoundaryCord {
            cord: mirror,
            endpoint: Endpoint::End,
        });
    }
    cords.sort_by(|x, y| {
        x.cord
            .s
            .total_cmp(&y.cord.s)
            .then(x.cord.t.total_cmp(&y.cord.t))
    });
    cords
}

/// Sampled pieces of the sets on the torus, for external plotting.
#[derive(Clone, Debug, Serialize)]
pub struct SetsExport {
    pub length: f64,
    pub grid: usize,
    pub f_start: Vec<[f64; 2]>,
    pub f_end: Vec<[f64; 2]>,
    pub s: Vec<[f64; 2]>,
    pub b: Vec<[[f64; 2]; 2]>,
}

/// Zero crossings of the F angles and chord/knot incidences along the grid
/// lines of constant `s`, linearly interpolated.
pub fn sample_sets(
    curve: &KnotCurve,
    framing: &Framing,
    tol: &Tolerances,
    grid: usize,
) -> SetsExport {
    use rayon::prelude::*;
    let l = curve.length();
    let sc = tol.scaled(l);
    let step = l / grid as f64;
    let index = KnotIndex::new(curve);
    type Row = (Vec<[f64; 2]>, Vec<[f64; 2]>, Vec<[f64; 2]>);
    let rows: Vec<Row> = (0..grid)
        .into_par_iter()
        .map(|i| {
            let s = i as f64 * step;
            let (mut fs, mut fe, mut hits) = (Vec::new(), Vec::new(), Vec::new());
            let ang = |t: f64, e: Endpoint| framing_angle(curve, framing, s, t, e);
            for j in 0..grid {
                let (t0, t1) = (j as f64 * step, (j + 1) as f64 * step);
                if curve.circular_delta(s, t0).abs() < sc.diag_tube
                    || curve.circular_delta(s, t1).abs() < sc.diag_tube
                {
                    continue;
                }
                for (e, out) in [(Endpoint::Start, &mut fs), (Endpoint::End, &mut fe)] {
                    if let (Some(a0), Some(a1)) = (ang(t0, e), ang(t1, e)) {
                        if a0.signum() != a1.signum() && a0.cos() > 0.0 && a1.cos() > 0.0 {
                            let f = a0 / (a0 - a1);
                            out.push([s, t0 + f * step]);
                        }
                    }
                }
                let (p, q0, q1) = (curve.point(s), curve.point(t0), curve.point(t1));
                for u in swept_hits(
                    curve,
                    &index,
                    (p, q0),
                    (p, q1),
                    &[s, t0, t1],
                    sc.endpoint_margin + 2.0 * step,
                ) {
                    let c = CordPoint::new(curve, s, t0);
                    let (_, tau, _) = closest_on_chord(curve, p, q0, u, 0.5);
                    if tau > 0.0 && tau < 1.0 {
                        hits.push([s, c.t + 0.5 * step]);
                    }
                }
            }
            (fs, fe, hits)
        })
        .collect();
    let mut out = SetsExport {
        length: l,
        grid,
        f_start: Vec::new(),
        f_end: Vec::new(),
        s: Vec::new(),
        b: vec![[[0.0, 0.0], [0.0, l]], [[0.0, 0.0], [l, 0.0]]],
    };
    for (a, b, c) in rows {
        out.f_start.extend(a);
        out.f_end.extend(b);
        out.s.extend(c);
    }
    out
}
