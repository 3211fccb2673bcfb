//! Closed arclength-parametrized curves.
//!
//! A [`KnotCurve`] is a periodic cubic spline through `n` nodes placed at
//! uniform arclength, so the parameter `s ∈ [0, L)` is arclength up to the
//! spline's own approximation error. The basepoint is always `s = 0`.

use nalgebra::Vector3;

use crate::config::Tolerances;
use crate::error::{CordError, Result};

pub type Vec3 = Vector3<f64>;

/// Position and first three derivatives at one parameter.
#[derive(Clone, Copy, Debug)]
pub struct Jet {
    pub p: Vec3,
    pub d1: Vec3,
    pub d2: Vec3,
    pub d3: Vec3,
}

#[derive(Clone, Debug)]
pub struct KnotCurve {
    nodes: Vec<Vec3>,
    second: Vec<Vec3>,
    length: f64,
    h: f64,
}

const GAUSS: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// Solves the cyclic system `x[i-1] + 4 x[i] + x[i+1] = r[i]`.
fn solve_cyclic(rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    // Sherman–Morrison on top of a Thomas sweep: A = T + u vᵀ with
    // u = (γ, 0, …, 0, 1), v = (1, 0, …, 0, 1/γ).
    let gamma = -4.0;
    let thomas = |d: &[f64]| -> Vec<f64> {
        let mut diag = vec![4.0; n];
        diag[0] = 4.0 - gamma;
        diag[n - 1] = 4.0 - 1.0 / gamma;
        let mut c = vec![0.0; n];
        let mut y = vec![0.0; n];
        c[0] = 1.0 / diag[0];
        y[0] = d[0] / diag[0];
        for i in 1..n {
            let m = diag[i] - c[i - 1];
            c[i] = 1.0 / m;
            y[i] = (d[i] - y[i - 1]) / m;
        }
        let mut x = vec![0.0; n];
        x[n - 1] = y[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = y[i] - c[i] * x[i + 1];
        }
        x
    };
    let x = thomas(rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = 1.0;
    let z = thomas(&u);
    let vx = x[0] + x[n - 1] / gamma;
    let vz = z[0] + z[n - 1] / gamma;
    let f = vx / (1.0 + vz);
    x.iter().zip(&z).map(|(a, b)| a - f * b).collect()
}

fn spline_second(nodes: &[Vec3], h: f64) -> Vec<Vec3> {
    let n = nodes.len();
    let mut out = vec![Vec3::zeros(); n];
    for k in 0..3 {
        let rhs: Vec<f64> = (0..n)
            .map(|i| {
                let prev = nodes[(i + n - 1) % n][k];
                let next = nodes[(i + 1) % n][k];
                6.0 / (h * h) * (next - 2.0 * nodes[i][k] + prev)
            })
            .collect();
        for (i, v) in solve_cyclic(&rhs).into_iter().enumerate() {
            out[i][k] = v;
        }
    }
    out
}

impl KnotCurve {
    /// Spline through `nodes` taken at uniform parameter spacing `length / n`.
    pub fn from_uniform_nodes(nodes: Vec<Vec3>, length: f64) -> Result<Self> {
        if nodes.len() < 12 {
            return Err(CordError::DegenerateSpec(format!(
                "{} nodes, at least 12 required",
                nodes.len()
            )));
        }
        let h = length / nodes.len() as f64;
        let second = spline_second(&nodes, h);
        Ok(KnotCurve {
            nodes,
            second,
            length,
            h,
        })
    }

    /// Resamples a closed polygon to `n` nodes at uniform arclength of the
    /// interpolating spline.
    pub fn from_closed_points(points: &[Vec3], n: usize) -> Result<Self> {
        if points.len() < 12 || n < 12 {
            return Err(CordError::DegenerateSpec(format!(
                "{} points, at least 12 required",
                points.len()
            )));
        }
        let m = points.len();
        let mut total = 0.0;
        for i in 0..m {
            let d = (points[(i + 1) % m] - points[i]).norm();
            if d == 0.0 {
                return Err(CordError::DegenerateSpec(format!("repeated point {i}")));
            }
            total += d;
        }
        let mut curve = KnotCurve::from_uniform_nodes(points.to_vec(), total)?;
        for _ in 0..4 {
            curve = curve.arclength_resample(n)?;
        }
        Ok(curve)
    }

    fn segment_arclength(&self, i: usize, x: f64) -> f64 {
        let half = 0.5 * x;
        GAUSS
            .iter()
            .map(|(xi, w)| w * self.d1_local(i, half * (xi + 1.0)).norm())
            .sum::<f64>()
            * half
    }

    /// Nodes at uniform true arclength of the current spline.
    fn arclength_resample(&self, n: usize) -> Result<Self> {
        let segs = self.nodes.len();
        let mut cum = Vec::with_capacity(segs + 1);
        cum.push(0.0);
        for i in 0..segs {
            cum.push(cum[i] + self.segment_arclength(i, self.h));
        }
        let total = cum[segs];
        let mut nodes = Vec::with_capacity(n);
        let mut j = 0;
        for i in 0..n {
            let target = total * i as f64 / n as f64;
            while j + 1 < segs && cum[j + 1] < target {
                j += 1;
            }
            let rem = target - cum[j];
            let mut x = rem / (cum[j + 1] - cum[j]) * self.h;
            for _ in 0..8 {
                let f = self.segment_arclength(j, x) - rem;
                let df = self.d1_local(j, x).norm();
                x -= f / df;
                x = x.clamp(0.0, self.h);
            }
            nodes.push(self.p_local(j, x));
        }
        KnotCurve::from_uniform_nodes(nodes, total)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Vec3] {
        &self.nodes
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn wrap(&self, s: f64) -> f64 {
        let r = s.rem_euclid(self.length);
        if r >= self.length {
            0.0
        } else {
            r
        }
    }

    /// Signed circular difference `b - a` in `(-L/2, L/2]`.
    pub fn circular_delta(&self, a: f64, b: f64) -> f64 {
        let l = self.length;
        let mut d = (b - a).rem_euclid(l);
        if d > 0.5 * l {
            d -= l;
        }
        d
    }

    fn locate(&self, s: f64) -> (usize, f64) {
        let s = self.wrap(s);
        let n = self.nodes.len();
        let i = ((s / self.h).floor() as usize).min(n - 1);
        (i, s - i as f64 * self.h)
    }

    fn coefficients(&self, i: usize) -> (Vec3, Vec3, Vec3, Vec3) {
        let n = self.nodes.len();
        let j = (i + 1) % n;
        let h = self.h;
        let p = self.nodes[i];
        let mi = self.second[i];
        let mj = self.second[j];
        let b = (self.nodes[j] - p) / h - h * (2.0 * mi + mj) / 6.0;
        (p, b, 0.5 * mi, (mj - mi) / (6.0 * h))
    }

    fn p_local(&self, i: usize, x: f64) -> Vec3 {
        let (a, b, c, d) = self.coefficients(i);
        a + x * (b + x * (c + x * d))
    }

    fn d1_local(&self, i: usize, x: f64) -> Vec3 {
        let (_, b, c, d) = self.coefficients(i);
        b + x * (2.0 * c + 3.0 * x * d)
    }

    pub fn point(&self, s: f64) -> Vec3 {
        let (i, x) = self.locate(s);
        self.p_local(i, x)
    }

    pub fn tangent(&self, s: f64) -> Vec3 {
        let (i, x) = self.locate(s);
        self.d1_local(i, x)
    }

    pub fn jet(&self, s: f64) -> Jet {
        let (i, x) = self.locate(s);
        let (a, b, c, d) = self.coefficients(i);
        Jet {
            p: a + x * (b + x * (c + x * d)),
            d1: b + x * (2.0 * c + 3.0 * x * d),
            d2: 2.0 * c + 6.0 * x * d,
            d3: 6.0 * d,
        }
    }

    /// `k` points per spline segment, starting at the basepoint.
    pub fn polyline(&self, k: usize) -> Vec<Vec3> {
        let n = self.nodes.len();
        let mut out = Vec::with_capacity(n * k);
        for i in 0..n {
            for j in 0..k {
                out.push(self.p_local(i, self.h * j as f64 / k as f64));
            }
        }
        out
    }

    /// Same geometry with the basepoint moved forward by `shift`.
    pub fn with_basepoint_shift(&self, shift: f64) -> Result<Self> {
        let n = self.nodes.len();
        let nodes = (0..n)
            .map(|i| self.point(i as f64 * self.h + shift))
            .collect();
        KnotCurve::from_uniform_nodes(nodes, self.length)
    }

    /// Applies `f(s, γ(s))` to every node and re-establishes arclength.
    pub fn deformed(&self, f: impl Fn(f64, Vec3) -> Vec3) -> Result<Self> {
        let pts: Vec<Vec3> = (0..self.nodes.len() * 2)
            .map(|i| {
                let s = i as f64 * self.h / 2.0;
                f(s, self.point(s))
            })
            .collect();
        KnotCurve::from_closed_points(&pts, self.nodes.len())
    }

    /// Largest deviation of `|γ'|` from 1 over four samples per segment.
    pub fn speed_deviation(&self) -> f64 {
        let n = self.nodes.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for k in 0..4 {
                let v = self.d1_local(i, self.h * k as f64 / 4.0).norm();
                worst = worst.max((v - 1.0).abs());
            }
        }
        worst
    }

    /// Checks the arclength, curvature and embeddedness invariants.
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let dev = self.speed_deviation();
        if dev > tol.tol_arc {
            return Err(CordError::DegenerateSpec(format!(
                "speed deviates from 1 by {dev:.3e}; increase the resolution"
            )));
        }
        let floor = tol.curvature_floor;
        if let Some(i) = self.second.iter().position(|m| m.norm() <= floor) {
            return Err(CordError::DegenerateSpec(format!(
                "curvature vanishes near s = {:.6}",
                i as f64 * self.h
            )));
        }
        self.check_embedded(tol.embedding_tol * self.length)
    }

    fn check_embedded(&self, min_dist: f64) -> Result<()> {
        let pts = self.polyline(2);
        let m = pts.len();
        let step = self.h / 2.0;
        // segments closer than this along the curve are neighbours, not crossings
        let skip = ((4.0 * min_dist.max(self.h)) / step).ceil() as usize + 2;
        const BLOCK: usize = 16;
        let blocks: Vec<(Vec3, Vec3)> = (0..m.div_ceil(BLOCK))
            .map(|b| {
                let mut lo = Vec3::repeat(f64::INFINITY);
                let mut hi = Vec3::repeat(f64::NEG_INFINITY);
                for i in b * BLOCK..((b + 1) * BLOCK).min(m) {
                    for p in [pts[i], pts[(i + 1) % m]] {
                        lo = lo.inf(&p);
                        hi = hi.sup(&p);
                    }
                }
                (lo, hi)
            })
            .collect();
        let gap = |a: &(Vec3, Vec3), b: &(Vec3, Vec3)| -> f64 {
            let mut d2 = 0.0;
            for k in 0..3 {
                let g = (b.0[k] - a.1[k]).max(a.0[k] - b.1[k]).max(0.0);
                d2 += g * g;
            }
            d2.sqrt()
        };
        for bi in 0..blocks.len() {
            for bj in bi..blocks.len() {
                if gap(&blocks[bi], &blocks[bj]) > min_dist {
                    continue;
                }
                for i in bi * BLOCK..((bi + 1) * BLOCK).min(m) {
                    for j in bj * BLOCK..((bj + 1) * BLOCK).min(m) {
                        let sep = (j + m - i) % m;
                        if j <= i || sep < skip || m - sep < skip {
                            continue;
                        }
                        let d =
                            segment_distance(pts[i], pts[(i + 1) % m], pts[j], pts[(j + 1) % m]);
                        if d < min_dist {
                            return Err(CordError::NonEmbedded(i, j, d));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Closest parameters `(a, b) ∈ [0,1]²` between segments `p0p1` and `q0q1`.
pub fn segment_closest(p0: Vec3, p1: Vec3, q0: Vec3, q1: Vec3) -> (f64, f64) {
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let r = p0 - q0;
    let a = d1.dot(&d1);
    let e = d2.dot(&d2);
    let f = d2.dot(&r);
    if a <= f64::EPSILON && e <= f64::EPSILON {
        return (0.0, 0.0);
    }
    if a <= f64::EPSILON {
        return (0.0, (f / e).clamp(0.0, 1.0));
    }
    let c = d1.dot(&r);
    if e <= f64::EPSILON {
        return ((-c / a).clamp(0.0, 1.0), 0.0);
    }
    let b = d1.dot(&d2);
    let denom = a * e - b * b;
    let mut s = if denom > 0.0 {
        ((b * f - c * e) / denom).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let mut t = (b * s + f) / e;
    if t < 0.0 {
        t = 0.0;
        s = (-c / a).clamp(0.0, 1.0);
    } else if t > 1.0 {
        t = 1.0;
        s = ((b - c) / a).clamp(0.0, 1.0);
    }
    (s, t)
}

pub fn segment_distance(p0: Vec3, p1: Vec3, q0: Vec3, q1: Vec3) -> f64 {
    let (s, t) = segment_closest(p0, p1, q0, q1);
    ((p0 + s * (p1 - p0)) - (q0 + t * (q1 - q0))).norm()
}
