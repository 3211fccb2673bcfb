//! Knot spec files and the curves they describe.

use std::f64::consts::{FRAC_PI_4, PI, TAU};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::curve::{KnotCurve, Vec3};
use crate::error::{CordError, Result};
use crate::framing::{Framing, FramingKind};
use crate::ring::GeneratorTwist;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Shape {
    Samples {
        points: Vec<[f64; 3]>,
    },
    Ellipse {
        a: f64,
        b: f64,
        /// Angle of the basepoint on the ellipse.
        #[serde(default = "default_ellipse_phase")]
        phase: f64,
    },
    TorusKnot {
        p: u32,
        q: u32,
        #[serde(rename = "R")]
        big_r: f64,
        r: f64,
    },
    Braid(BraidLayout),
}

fn default_ellipse_phase() -> f64 {
    -0.7
}

/// A closed braid drawn along an ellipse in the xy-plane.
///
/// Strand slots are stacked along the diagonal of the cross-section, slot 1
/// outermost and highest. All crossings happen inside `[crossing_start,
/// crossing_end]`, where the two strands of each generator rotate half a turn
/// about their common midpoint. The slot offsets are scaled by
/// `1 + bump cos(θ - wide_angle)` so that the short cords between strands are
/// isolated critical points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BraidLayout {
    pub word: Vec<i32>,
    pub strands: usize,
    #[serde(default = "default_spacing")]
    pub spacing: f64,
    #[serde(default = "default_a")]
    pub a: f64,
    #[serde(default = "default_b")]
    pub b: f64,
    #[serde(default = "default_crossing_start")]
    pub crossing_start: f64,
    #[serde(default = "default_crossing_end")]
    pub crossing_end: f64,
    #[serde(default = "default_tilt")]
    pub tilt: f64,
    #[serde(default = "default_bump")]
    pub bump: f64,
    #[serde(default = "default_wide_angle")]
    pub wide_angle: f64,
    #[serde(default = "default_basepoint_angle")]
    pub basepoint_angle: f64,
    #[serde(default = "default_basepoint_slot")]
    pub basepoint_slot: usize,
}

fn default_spacing() -> f64 {
    0.06
}
fn default_a() -> f64 {
    2.0
}
fn default_b() -> f64 {
    1.0
}
fn default_crossing_start() -> f64 {
    0.1 * PI
}
fn default_crossing_end() -> f64 {
    0.4 * PI
}
fn default_tilt() -> f64 {
    FRAC_PI_4
}
fn default_bump() -> f64 {
    0.3
}
fn default_wide_angle() -> f64 {
    1.75 * PI
}
fn default_basepoint_angle() -> f64 {
    6.0
}
fn default_basepoint_slot() -> usize {
    1
}

impl BraidLayout {
    pub fn new(word: Vec<i32>, strands: usize) -> Self {
        BraidLayout {
            word,
            strands,
            spacing: default_spacing(),
            a: default_a(),
            b: default_b(),
            crossing_start: default_crossing_start(),
            crossing_end: default_crossing_end(),
            tilt: default_tilt(),
            bump: default_bump(),
            wide_angle: default_wide_angle(),
            basepoint_angle: default_basepoint_angle(),
            basepoint_slot: default_basepoint_slot(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FramingSpec {
    pub kind: FramingKind,
    #[serde(default)]
    pub table: Vec<[f64; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnotSpec {
    #[serde(flatten)]
    pub shape: Shape,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoint_shift: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub framing: Option<FramingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Number of spline nodes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    /// Generator conjugations picked up when the extra windings that turn
    /// the blackboard framing into the Seifert framing are moved into place.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub seifert_twists: Vec<GeneratorTwist>,
}

impl KnotSpec {
    pub fn new(shape: Shape) -> Self {
        KnotSpec {
            shape,
            basepoint_shift: None,
            framing: None,
            seed: None,
            resolution: None,
            seifert_twists: Vec::new(),
        }
    }

    pub fn ellipse(a: f64, b: f64) -> Self {
        KnotSpec::new(Shape::Ellipse {
            a,
            b,
            phase: default_ellipse_phase(),
        })
    }

    pub fn braid(layout: BraidLayout) -> Self {
        KnotSpec::new(Shape::Braid(layout))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CordError::Spec(e.to_string()))
    }

    fn default_resolution(&self) -> usize {
        match &self.shape {
            Shape::Samples { points } => points.len().max(256),
            Shape::Ellipse { .. } => 512,
            Shape::TorusKnot { .. } => 1024,
            Shape::Braid(b) => 900 * b.strands,
        }
    }

    pub fn resolution(&self) -> usize {
        self.resolution.unwrap_or_else(|| self.default_resolution())
    }
}

/// Where each point of a braid-layout curve sits in the drawing.
#[derive(Clone, Debug)]
pub struct BraidMeta {
    pub layout: BraidLayout,
    /// `(arclength fraction, unwrapped angle)` along the generated polygon.
    table: Vec<(f64, f64)>,
    /// Slot occupied at the start of each lap.
    lap_slots: Vec<usize>,
}

impl BraidMeta {
    /// Unwrapped core angle of the curve point at parameter fraction `f`.
    pub fn angle_at(&self, f: f64) -> f64 {
        let f = f.rem_euclid(1.0);
        let i = self.table.partition_point(|&(x, _)| x <= f).max(1) - 1;
        let (f0, a0) = self.table[i];
        let (f1, a1) = self.table.get(i + 1).copied().unwrap_or((
            1.0,
            self.layout.basepoint_angle + TAU * self.lap_slots.len() as f64,
        ));
        a0 + (a1 - a0) * (f - f0) / (f1 - f0)
    }

    pub fn lap_at(&self, f: f64) -> usize {
        let theta = self.angle_at(f) - self.layout.basepoint_angle;
        ((theta / TAU).floor().max(0.0) as usize).min(self.lap_slots.len() - 1)
    }

    /// Strand number of the point: the slot it occupies, or for points inside
    /// the crossing region the slot it entered the region in.
    pub fn strand_at(&self, f: f64) -> usize {
        let lap = self.lap_at(f);
        let slot = self.lap_slots[lap];
        let b = &self.layout;
        let rel = self.angle_at(f) - b.basepoint_angle - TAU * lap as f64;
        let r0 = (b.crossing_start - b.basepoint_angle).rem_euclid(TAU);
        if rel < r0 + (b.crossing_end - b.crossing_start) {
            slot
        } else {
            b.permute(slot)
        }
    }

    /// Core angle modulo 2π.
    pub fn phase_at(&self, f: f64) -> f64 {
        self.angle_at(f).rem_euclid(TAU)
    }

    pub fn laps(&self) -> usize {
        self.lap_slots.len()
    }
}

/// Fifth-order smoothstep, C² at both ends.
fn smootherstep(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * x * (x * (6.0 * x - 15.0) + 10.0)
}

impl BraidLayout {
    fn validate(&self) -> Result<()> {
        if self.strands < 2 {
            return Err(CordError::Spec("a braid needs at least 2 strands".into()));
        }
        if self.word.is_empty() {
            return Err(CordError::Spec("empty braid word".into()));
        }
        for &g in &self.word {
            let i = g.unsigned_abs() as usize;
            if g == 0 || i >= self.strands {
                return Err(CordError::Spec(format!("generator {g} out of range")));
            }
        }
        if !(self.spacing > 0.0 && self.a > 0.0 && self.b > 0.0) {
            return Err(CordError::Spec(
                "spacing and semi-axes must be positive".into(),
            ));
        }
        if !(0.0..1.0).contains(&self.bump) {
            return Err(CordError::Spec("bump must lie in [0, 1)".into()));
        }
        let width = self.crossing_end - self.crossing_start;
        if !(width > 0.0 && width <= PI / 2.0 + 1e-12) {
            return Err(CordError::Spec(
                "crossing region must be within one quarter".into(),
            ));
        }
        let rel = (self.basepoint_angle - self.crossing_start).rem_euclid(TAU);
        if rel < width {
            return Err(CordError::Spec(
                "basepoint lies inside the crossing region".into(),
            ));
        }
        if self.basepoint_slot == 0 || self.basepoint_slot > self.strands {
            return Err(CordError::Spec("basepoint slot out of range".into()));
        }
        Ok(())
    }

    fn slot_height(&self, j: usize) -> f64 {
        ((self.strands as f64 - 1.0) / 2.0 - (j as f64 - 1.0)) * self.spacing
    }

    /// Slot after passing the whole crossing region.
    fn permute(&self, mut slot: usize) -> usize {
        for &g in &self.word {
            let i = g.unsigned_abs() as usize;
            if slot == i {
                slot = i + 1;
            } else if slot == i + 1 {
                slot = i;
            }
        }
        slot
    }

    /// Cross-section coordinates along (stacking, perpendicular) directions
    /// at relative angle `x` into the crossing region for a strand entering
    /// it in `slot`.
    fn section(&self, mut slot: usize, x: Option<f64>) -> (f64, f64) {
        let Some(x) = x else {
            return (self.slot_height(slot), 0.0);
        };
        let k = self.word.len();
        let pos = (x * k as f64).min(k as f64 - 1e-12);
        let j = pos.floor() as usize;
        for &g in &self.word[..j] {
            let i = g.unsigned_abs() as usize;
            if slot == i {
                slot = i + 1;
            } else if slot == i + 1 {
                slot = i;
            }
        }
        let g = self.word[j];
        let i = g.unsigned_abs() as usize;
        if slot != i && slot != i + 1 {
            return (self.slot_height(slot), 0.0);
        }
        // rotate only in the middle of the sub-interval
        let h = smootherstep((pos - j as f64 - 0.1) / 0.8);
        let angle = -(g.signum() as f64) * PI * h;
        let mid = 0.5 * (self.slot_height(i) + self.slot_height(i + 1));
        let half = 0.5 * self.spacing * if slot == i { 1.0 } else { -1.0 };
        let (sn, cs) = angle.sin_cos();
        (mid + half * cs, half * sn)
    }

    fn point(&self, theta: f64, slot: usize, x: Option<f64>) -> Vec3 {
        let (sn, cs) = theta.sin_cos();
        let core = Vec3::new(self.a * cs, self.b * sn, 0.0);
        let n = Vec3::new(self.b * cs, self.a * sn, 0.0).normalize();
        let z = Vec3::z();
        let (ts, tc) = self.tilt.sin_cos();
        let u = n * tc + z * ts;
        let v = -n * ts + z * tc;
        let (xu, xv) = self.section(slot, x);
        let scale = 1.0 + self.bump * (theta - self.wide_angle).cos();
        core + (u * xu + v * xv) * scale
    }

    /// Closed polygon plus per-point unwrapped angles and lap slots.
    fn polygon(&self, per_lap: usize) -> Result<(Vec<Vec3>, Vec<f64>, Vec<usize>)> {
        self.validate()?;
        let mut slots = vec![self.basepoint_slot];
        loop {
            let next = self.permute(*slots.last().unwrap());
            if next == self.basepoint_slot {
                break;
            }
            slots.push(next);
        }
        if slots.len() != self.strands {
            return Err(CordError::Spec(format!(
                "braid closure has {} components through the basepoint strand of {} strands; not a knot",
                slots.len(),
                self.strands
            )));
        }
        let width = self.crossing_end - self.crossing_start;
        let r0 = (self.crossing_start - self.basepoint_angle).rem_euclid(TAU);
        let mut pts = Vec::with_capacity(per_lap * slots.len());
        let mut angles = Vec::with_capacity(per_lap * slots.len());
        for (lap, &slot) in slots.iter().enumerate() {
            for i in 0..per_lap {
                let rel = TAU * i as f64 / per_lap as f64;
                let theta = self.basepoint_angle + rel;
                let (s, x) = if rel < r0 {
                    (slot, None)
                } else if rel < r0 + width {
                    (slot, Some((rel - r0) / width))
                } else {
                    (self.permute(slot), None)
                };
                pts.push(self.point(theta, s, x));
                angles.push(theta + TAU * lap as f64);
            }
        }
        Ok((pts, angles, slots))
    }
}

fn build_braid(layout: &BraidLayout, n: usize) -> Result<(KnotCurve, BraidMeta)> {
    let per_lap = 4000;
    let (pts, angles, slots) = layout.polygon(per_lap)?;
    let m = pts.len();
    let mut cum = vec![0.0; m];
    for i in 1..m {
        cum[i] = cum[i - 1] + (pts[i] - pts[i - 1]).norm();
    }
    let total = cum[m - 1] + (pts[0] - pts[m - 1]).norm();
    let table = cum
        .iter()
        .zip(&angles)
        .map(|(&c, &a)| (c / total, a))
        .collect();
    let curve = KnotCurve::from_closed_points(&pts, n)?;
    Ok((
        curve,
        BraidMeta {
            layout: layout.clone(),
            table,
            lap_slots: slots,
        },
    ))
}

fn closed_samples(count: usize, f: impl Fn(f64) -> Vec3) -> Vec<Vec3> {
    (0..count)
        .map(|i| f(TAU * i as f64 / count as f64))
        .collect()
}

/// Builds and validates the curve; braid layouts also return their metadata.
pub fn build_curve(spec: &KnotSpec, tol: &Tolerances) -> Result<(KnotCurve, Option<BraidMeta>)> {
    let n = spec.resolution();
    let (curve, meta) = match &spec.shape {
        Shape::Samples { points } => {
            let pts: Vec<Vec3> = points.iter().map(|p| Vec3::new(p[0], p[1], p[2])).collect();
            (KnotCurve::from_closed_points(&pts, n)?, None)
        }
        Shape::Ellipse { a, b, phase } => {
            if !(*a > 0.0 && *b > 0.0) {
                return Err(CordError::Spec("ellipse semi-axes must be positive".into()));
            }
            let pts = closed_samples(8 * n, |t| {
                let t = t + phase;
                Vec3::new(a * t.cos(), b * t.sin(), 0.0)
            });
            (KnotCurve::from_closed_points(&pts, n)?, None)
        }
        Shape::TorusKnot { p, q, big_r, r } => {
            if *p == 0 || *q == 0 || !(*r > 0.0 && big_r > r) {
                return Err(CordError::Spec(
                    "torus knot needs p, q ≥ 1 and R > r > 0".into(),
                ));
            }
            let (p, q) = (*p as f64, *q as f64);
            let pts = closed_samples(8 * n, |t| {
                let rad = big_r + r * (q * t).cos();
                Vec3::new(rad * (p * t).cos(), rad * (p * t).sin(), r * (q * t).sin())
            });
            (KnotCurve::from_closed_points(&pts, n)?, None)
        }
        Shape::Braid(layout) => {
            let (c, m) = build_braid(layout, n)?;
            (c, Some(m))
        }
    };
    let curve = match spec.basepoint_shift {
        Some(shift) if shift != 0.0 => curve.with_basepoint_shift(shift)?,
        _ => curve,
    };
    curve.validate(tol)?;
    let meta = match (meta, spec.basepoint_shift) {
        (Some(_), Some(shift)) if shift != 0.0 => None,
        (m, _) => m,
    };
    Ok((curve, meta))
}

/// The computation framing requested by the input; blackboard by default.
pub fn build_framing(spec: &KnotSpec, curve: &KnotCurve) -> Result<Framing> {
    let eps = framing_width(spec, curve);
    match &spec.framing {
        None => Framing::blackboard(curve, eps),
        Some(f) => match f.kind {
            FramingKind::Blackboard => Framing::blackboard(curve, eps),
            FramingKind::Custom => Framing::custom(
                f.table.iter().map(|p| Vec3::new(p[0], p[1], p[2])).collect(),
                eps,
            ),
            FramingKind::Seifert => Err(CordError::Spec(
                "a Seifert framing is reached by transforming the blackboard result, not built directly"
                    .into(),
            )),
        },
    }
}

fn framing_width(spec: &KnotSpec, curve: &KnotCurve) -> f64 {
    match &spec.shape {
        Shape::Braid(b) => 0.2 * b.spacing * (1.0 - b.bump),
        _ => 1e-3 * curve.length(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_json_shapes() {
        let s = KnotSpec::from_json(r#"{"type":"ellipse","a":2,"b":1,"seed":7}"#).unwrap();
        assert_eq!(s.seed, Some(7));
        assert!(matches!(s.shape, Shape::Ellipse { .. }));
        let s = KnotSpec::from_json(r#"{"type":"torus_knot","p":2,"q":3,"R":2,"r":0.7}"#).unwrap();
        assert!(matches!(s.shape, Shape::TorusKnot { p: 2, q: 3, .. }));
        let s =
            KnotSpec::from_json(r#"{"type":"braid","word":[1,1,1],"strands":2,"spacing":0.05}"#)
                .unwrap();
        let Shape::Braid(b) = &s.shape else { panic!() };
        assert_eq!(b.spacing, 0.05);
        assert!(KnotSpec::from_json(r#"{"type":"cube"}"#).is_err());
    }

    #[test]
    fn ellipse_perimeter() {
        let tol = Tolerances::default();
        let (c, _) = build_curve(&KnotSpec::ellipse(2.0, 1.0), &tol).unwrap();
        // Ramanujan's second approximation, accurate to ~1e-5 relative here
        let (a, b) = (2.0f64, 1.0f64);
        let h = ((a - b) / (a + b)).powi(2);
        let p = PI * (a + b) * (1.0 + 3.0 * h / (10.0 + (4.0 - 3.0 * h).sqrt()));
        assert!((c.length() - p).abs() < 1e-4 * p);
        assert!(c.speed_deviation() < tol.tol_arc);
    }

    #[test]
    fn two_component_closure_rejected() {
        let spec = KnotSpec::braid(BraidLayout::new(vec![1, 1], 2));
        assert!(matches!(
            build_curve(&spec, &Tolerances::default()),
            Err(CordError::Spec(_))
        ));
    }

    #[test]
    fn braid_metadata_tracks_laps() {
        let spec = KnotSpec::braid(BraidLayout::new(vec![1, 1, 1], 2));
        let (c, meta) = build_curve(&spec, &Tolerances::default()).unwrap();
        let meta = meta.unwrap();
        assert_eq!(meta.laps(), 2);
        assert_eq!(meta.strand_at(0.01), 1);
        assert_eq!(meta.strand_at(0.51), 2);
        assert_eq!(meta.strand_at(0.4), 2);
        assert_eq!(meta.strand_at(0.9), 1);
        let f = 0.3;
        let p = c.point(f * c.length());
        let theta = meta.phase_at(f);
        let core = Vec3::new(2.0 * theta.cos(), theta.sin(), 0.0);
        assert!((p - core).norm() < 0.1);
    }
}
