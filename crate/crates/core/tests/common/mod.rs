//! Oracles shared by the integration tests and the acceptance run. They use
//! only point evaluation of the curve and plain geometry.
#![allow(dead_code)]

pub mod golden;
pub mod ring;

use std::f64::consts::TAU;
use std::path::PathBuf;

use cord_algebra::config::Tolerances;
use cord_algebra::curve::{KnotCurve, Vec3};
use cord_algebra::energy::gradient;
use cord_algebra::flow::FlowTrace;
use cord_algebra::spec::{BraidLayout, KnotSpec, Shape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn example(name: &str) -> KnotSpec {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name);
    KnotSpec::load(&path).unwrap()
}

pub fn trefoil() -> KnotSpec {
    KnotSpec::braid(BraidLayout::new(vec![1, 1, 1], 2))
}

/// Ellipse (2, 1) with a radial ripple and a vertical wave, sampled from
/// the long axis.
pub fn wobbly_ellipse() -> KnotSpec {
    let points = (0..400)
        .map(|i| {
            let th = TAU * i as f64 / 400.0;
            let r = 1.0 + 0.04 * (2.0 * th).cos();
            [2.0 * r * th.cos(), r * th.sin(), 0.1 * (3.0 * th).sin()]
        })
        .collect();
    KnotSpec::new(Shape::Samples { points })
}

pub fn test_knots() -> Vec<(&'static str, KnotSpec)> {
    vec![
        ("ellipse(2,1)", KnotSpec::ellipse(2.0, 1.0)),
        ("ellipse(3,1)", KnotSpec::ellipse(3.0, 1.0)),
        ("wobbly ellipse", wobbly_ellipse()),
        ("trefoil", trefoil()),
    ]
}

pub fn curve_of(spec: &KnotSpec) -> KnotCurve {
    cord_algebra::spec::build_curve(spec, &Tolerances::default())
        .unwrap()
        .0
}

pub fn oracle_energy(curve: &KnotCurve, s: f64, t: f64) -> f64 {
    0.5 * (curve.point(t) - curve.point(s)).norm_squared()
}

fn d5(f: impl Fn(f64) -> f64, h: f64) -> f64 {
    (8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h))) / (12.0 * h)
}

/// Random cords with endpoints at least `gap` apart along the knot.
pub fn random_cords(curve: &KnotCurve, n: usize, gap: f64, seed: u64) -> Vec<(f64, f64)> {
    let l = curve.length();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (s, t) = (rng.gen_range(0.0..l), rng.gen_range(0.0..l));
        if curve.circular_delta(s, t).abs() >= gap * l {
            out.push((s, t));
        }
    }
    out
}

/// Largest relative gradient error against five-point differences of the
/// energy, relative to `max(|∇E|, 1e-3 L)`.
pub fn gradient_error(curve: &KnotCurve, cords: &[(f64, f64)]) -> f64 {
    let l = curve.length();
    let h = 1e-6 * l;
    let mut worst = 0.0f64;
    for &(s, t) in cords {
        let g = gradient(curve, s, t);
        let fd = [
            d5(|d| oracle_energy(curve, s + d, t), h),
            d5(|d| oracle_energy(curve, s, t + d), h),
        ];
        let scale = g.norm().max(1e-3 * l);
        for k in 0..2 {
            worst = worst.max((g[k] - fd[k]).abs() / scale);
        }
    }
    worst
}

/// Largest relative Hessian error against five-point differences of the
/// gradient, relative to `max(|H|, 1)`.
pub fn hessian_error(curve: &KnotCurve, cords: &[(f64, f64)]) -> f64 {
    let l = curve.length();
    let h = 1e-6 * l;
    let mut worst = 0.0f64;
    for &(s, t) in cords {
        let hs = cord_algebra::energy::hessian(curve, s, t);
        let scale = hs.norm().max(1.0);
        for j in 0..2 {
            for i in 0..2 {
                let fd = d5(
                    |d| {
                        let (a, b) = if j == 0 { (s + d, t) } else { (s, t + d) };
                        gradient(curve, a, b)[i]
                    },
                    h,
                );
                worst = worst.max((hs[(i, j)] - fd).abs() / scale);
            }
        }
    }
    worst
}

/// Unit tangent from central differences of point evaluation.
pub fn oracle_tangent(curve: &KnotCurve, s: f64) -> Vec3 {
    let h = 1e-6 * curve.length();
    (curve.point(s + h) - curve.point(s - h)).normalize()
}

/// Start angle of the chord in the blackboard frame: `ν` is the vertical
/// direction projected to the normal plane.
pub fn oracle_start_angle(curve: &KnotCurve, s: f64, t: f64) -> f64 {
    let tan = oracle_tangent(curve, s);
    let z = Vec3::z();
    let nu = (z - tan * tan.dot(&z)).normalize();
    let w = curve.point(t) - curve.point(s);
    let perp = w - tan * tan.dot(&w);
    perp.dot(&tan.cross(&nu)).atan2(perp.dot(&nu))
}

/// Number of `F^s` arcs (zero start angle, chord on the `+ν` side) crossing
/// the circle of radius `r` around `(s, t)`.
pub fn fs_arcs_through_circle(curve: &KnotCurve, s: f64, t: f64, r: f64) -> usize {
    let n = 1440;
    let angle = |k: usize| {
        let th = TAU * k as f64 / n as f64;
        oracle_start_angle(curve, s + r * th.cos(), t + r * th.sin())
    };
    (0..n)
        .filter(|&k| {
            let (p, q) = (angle(k), angle(k + 1));
            p.signum() != q.signum() && p.cos() > 0.0 && q.cos() > 0.0
        })
        .count()
}

/// Sine of the angle between the chord and the tangent at its start.
pub fn tangency_defect(curve: &KnotCurve, s: f64, t: f64) -> f64 {
    let w = (curve.point(t) - curve.point(s)).normalize();
    w.cross(&oracle_tangent(curve, s)).norm()
}

/// Steps of `trace` and its descendants that did not lower the energy, and
/// split children whose length (recomputed from the curve) is not below the
/// parent's by `min_decrease`.
pub fn flow_defects(
    curve: &KnotCurve,
    trace: &FlowTrace,
    min_decrease: f64,
) -> (usize, usize, usize) {
    let (mut steps, mut bad_splits, mut splits) = (0, 0, 0);
    trace.walk(&mut |t| {
        steps += t.energies.windows(2).filter(|w| w[1] >= w[0]).count();
        for sp in &t.splits {
            splits += 1;
            for child in [&sp.first, &sp.second] {
                let len = (curve.point(child.initial.t) - curve.point(child.initial.s)).norm();
                if len > sp.parent_length - min_decrease {
                    bad_splits += 1;
                }
            }
        }
    });
    (steps, bad_splits, splits)
}
