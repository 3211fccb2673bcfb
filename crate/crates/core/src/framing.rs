//! Unit normal fields along a curve and the linking number of the pushed-off
//! copy `K' = γ + εν`.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{KnotCurve, Vec3};
use crate::error::{CordError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FramingKind {
    Blackboard,
    Seifert,
    Custom,
}

#[derive(Clone, Debug)]
enum Field {
    Blackboard,
    /// Unit vectors at uniform parameters, interpolated linearly then
    /// projected to the normal plane.
    Table(Arc<Vec<Vec3>>),
}

/// Extra rotation of ν about the tangent, `angle(s) = -2π n w(s)`, where
/// `w` ramps smoothly from 0 to 1 over `[start, start + width]`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Winding {
    turns: i32,
    start: f64,
    width: f64,
}

#[derive(Clone, Debug)]
pub struct Framing {
    field: Field,
    kind: FramingKind,
    windings: Vec<Winding>,
    /// Strip width ε of the pushed-off copy.
    pub epsilon: f64,
}

fn smoothstep(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * x * (x * (6.0 * x - 15.0) + 10.0)
}

fn rotate_about(v: Vec3, axis: Vec3, angle: f64) -> Vec3 {
    let (s, c) = angle.sin_cos();
    v * c + axis.cross(&v) * s + axis * axis.dot(&v) * (1.0 - c)
}

impl Framing {
    /// ν(s) = normalized projection of the vertical onto the normal plane.
    pub fn blackboard(curve: &KnotCurve, epsilon: f64) -> Result<Self> {
        let n = curve.node_count() * 4;
        for i in 0..n {
            let s = curve.length() * i as f64 / n as f64;
            let t = curve.tangent(s).normalize();
            if 1.0 - t.z.abs() < 1e-6 {
                return Err(CordError::VerticalTangent(s));
            }
        }
        Ok(Framing {
            field: Field::Blackboard,
            kind: FramingKind::Blackboard,
            windings: Vec::new(),
            epsilon,
        })
    }

    pub fn custom(table: Vec<Vec3>, epsilon: f64) -> Result<Self> {
        if table.len() < 3 {
            return Err(CordError::Spec(
                "framing table needs at least 3 vectors".into(),
            ));
        }
        Ok(Framing {
            field: Field::Table(Arc::new(table)),
            kind: FramingKind::Custom,
            windings: Vec::new(),
            epsilon,
        })
    }

    pub fn kind(&self) -> FramingKind {
        self.kind
    }

    /// Adds `turns` positive windings (counterclockwise seen looking along
    /// the orientation) inside `[start, start + width]`.
    pub fn with_windings(&self, turns: i32, start: f64, width: f64) -> Framing {
        let mut f = self.clone();
        f.kind = FramingKind::Custom;
        f.windings.push(Winding {
            turns,
            start,
            width,
        });
        f
    }

    fn base(&self, curve: &KnotCurve, s: f64, t: Vec3) -> Vec3 {
        let raw = match &self.field {
            Field::Blackboard => Vec3::z(),
            Field::Table(tab) => {
                let n = tab.len();
                let x = curve.wrap(s) / curve.length() * n as f64;
                let i = (x.floor() as usize).min(n - 1);
                let f = x - i as f64;
                tab[i] * (1.0 - f) + tab[(i + 1) % n] * f
            }
        };
        (raw - t * t.dot(&raw)).normalize()
    }

    pub fn nu(&self, curve: &KnotCurve, s: f64) -> Vec3 {
        let t = curve.tangent(s).normalize();
        let mut v = self.base(curve, s, t);
        for w in &self.windings {
            let x = curve.wrap(s - w.start) / w.width;
            let angle = -2.0 * PI * w.turns as f64 * smoothstep(x);
            v = rotate_about(v, t, angle);
        }
        v
    }

    /// Derivative of ν by central differences of the analytic field.
    pub fn nu_dot(&self, curve: &KnotCurve, s: f64) -> Vec3 {
        let h = 1e-6 * curve.length();
        (self.nu(curve, s + h) - self.nu(curve, s - h)) / (2.0 * h)
    }

    /// The pushed-off copy sampled at `k` points per spline segment.
    pub fn pushoff(&self, curve: &KnotCurve, k: usize) -> Vec<Vec3> {
        let m = curve.node_count() * k;
        (0..m)
            .map(|i| {
                let s = curve.length() * i as f64 / m as f64;
                curve.point(s) + self.epsilon * self.nu(curve, s)
            })
            .collect()
    }

    /// Integer linking number of `K` with `K'`.
    pub fn linking_number(&self, curve: &KnotCurve) -> Result<i64> {
        let k = curve.polyline(1);
        let kp = self.pushoff(curve, 1);
        let lk = polygon_linking(&k, &kp);
        let r = lk.round();
        if (lk - r).abs() > 0.1 {
            return Err(CordError::NumericalAmbiguity(lk));
        }
        Ok(r as i64)
    }
}

/// Signed solid-angle contribution of segment pair `(a0a1, b0b1)` divided by
/// 4π; exact for straight segments.
fn segment_pair_linking(a0: Vec3, a1: Vec3, b0: Vec3, b1: Vec3) -> f64 {
    let r13 = b0 - a0;
    let r14 = b1 - a0;
    let r23 = b0 - a1;
    let r24 = b1 - a1;
    let unit = |v: Vec3| {
        let n = v.norm();
        if n < 1e-300 {
            Vec3::zeros()
        } else {
            v / n
        }
    };
    let n1 = unit(r13.cross(&r14));
    let n2 = unit(r14.cross(&r24));
    let n3 = unit(r24.cross(&r23));
    let n4 = unit(r23.cross(&r13));
    let asin = |x: f64| x.clamp(-1.0, 1.0).asin();
    let omega = asin(n1.dot(&n2)) + asin(n2.dot(&n3)) + asin(n3.dot(&n4)) + asin(n4.dot(&n1));
    let sign = (b1 - b0).cross(&(a1 - a0)).dot(&r13).signum();
    omega * sign / (4.0 * PI)
}

/// Gauss linking number of two closed polygons.
pub fn polygon_linking(a: &[Vec3], b: &[Vec3]) -> f64 {
    let n = a.len();
    let m = b.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let (a0, a1) = (a[i], a[(i + 1) % n]);
            (0..m)
                .map(|j| segment_pair_linking(a0, a1, b[j], b[(j + 1) % m]))
                .sum::<f64>()
        })
        .sum()
}
