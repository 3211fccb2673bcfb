//! Static genericity checks on the critical cords and the seeded
//! perturbations used to escape non-generic configurations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::Tolerances;
use crate::curve::{KnotCurve, Vec3};
use crate::energy::CriticalPoint;
use crate::error::{CordError, Result};
use crate::framing::Framing;
use crate::incidence::{chord_knot_intersections, framing_angle, Endpoint, KnotIndex};
use crate::spec::{KnotSpec, Shape};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub kind: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct GenericityReport {
    pub violations: Vec<Violation>,
}

impl GenericityReport {
    pub fn is_generic(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, kind: &str, detail: String) {
        self.violations.push(Violation {
            kind: kind.to_string(),
            detail,
        });
    }

    pub fn into_result(self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(CordError::GenericityViolation(format!(
                "{}: {}",
                v.kind, v.detail
            ))),
        }
    }
}

/// Index-0 and index-1 cords lying in `B`, `F` or `S`.
pub fn genericity_check(
    curve: &KnotCurve,
    framing: &Framing,
    critical: &[CriticalPoint],
    tol: &Tolerances,
) -> GenericityReport {
    let sc = tol.scaled(curve.length());
    let index = KnotIndex::new(curve);
    let mut report = GenericityReport::default();
    for k in critical.iter().filter(|k| k.index <= 1) {
        let c = &k.cord;
        for (x, end) in [(c.s, "start"), (c.t, "end")] {
            if curve.circular_delta(0.0, x).abs() < sc.event {
                report.push(
                    "Crit ∩ B",
                    format!("{} has its {end} point on the basepoint", k.label),
                );
            }
        }
        for e in [Endpoint::Start, Endpoint::End] {
            match framing_angle(curve, framing, c.s, c.t, e) {
                None => report.push(
                    "Crit ∩ ∂S",
                    format!("{} is tangent at its {e:?} point", k.label),
                ),
                Some(a) if a.abs() * c.length < sc.event => report.push(
                    "Crit ∩ F",
                    format!("{} meets the framing ray at its {e:?} point", k.label),
                ),
                _ => {}
            }
        }
        let hits = chord_knot_intersections(curve, &index, c, tol);
        if let Some(h) = hits.first() {
            report.push(
                "Crit ∩ S",
                format!("{} meets the knot at u = {:.6}", k.label, h.u),
            );
        }
    }
    report
}

/// A small deterministic change of the input data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Perturbation {
    /// Basepoint move as a fraction of the curve length.
    pub basepoint: f64,
    /// Smooth bump of the knot: center parameter and width as fractions of
    /// the length, displacement vector in length units.
    pub bump_center: f64,
    pub bump_width: f64,
    pub bump: [f64; 3],
}

impl Perturbation {
    /// Attempt `attempt ≥ 1` of the retry loop; the bump amplitude stays
    /// below `embedding_tol / 4`.
    pub fn seeded(seed: u64, attempt: usize, tol: &Tolerances) -> Self {
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed ^ (attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let basepoint = rng.gen_range(-1.0..1.0) * 2e-3 * attempt as f64;
        let dir = loop {
            let v = Vec3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            if v.norm() > 0.1 && v.norm() <= 1.0 {
                break v.normalize();
            }
        };
        let amp = tol.embedding_tol / 8.0;
        Perturbation {
            basepoint,
            bump_center: rng.gen_range(0.0..1.0),
            bump_width: 0.02,
            bump: [dir.x * amp, dir.y * amp, dir.z * amp],
        }
    }

    /// Halves the bump, for a retry after the bump broke an invariant.
    pub fn shrunk(&self) -> Self {
        Perturbation {
            bump: self.bump.map(|x| 0.5 * x),
            ..*self
        }
    }
}

/// The knot input with its basepoint moved. Braid layouts move the basepoint
/// angle so their metadata stays valid.
pub fn perturb_spec(spec: &KnotSpec, p: &Perturbation, length: f64) -> KnotSpec {
    let mut out = spec.clone();
    match &mut out.shape {
        Shape::Braid(layout) => layout.basepoint_angle += std::f64::consts::TAU * p.basepoint,
        _ => out.basepoint_shift = Some(spec.basepoint_shift.unwrap_or(0.0) + p.basepoint * length),
    }
    out
}

/// Applies the bump of `p`; the amplitude is in units of the curve length.
pub fn perturb_curve(curve: &KnotCurve, p: &Perturbation, tol: &Tolerances) -> Result<KnotCurve> {
    let l = curve.length();
    let center = p.bump_center * l;
    let width = p.bump_width * l;
    let v = Vec3::new(p.bump[0], p.bump[1], p.bump[2]) * l;
    let bumped = curve.deformed(|s, x| {
        let d = curve.circular_delta(center, s) / width;
        if d.abs() >= 1.0 {
            x
        } else {
            x + v * (1.0 - d * d).powi(3)
        }
    })?;
    bumped.validate(tol)?;
    Ok(bumped)
}
