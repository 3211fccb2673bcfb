//! The invariant suite behind `cordalg check`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::energy::{energy, gradient, hessian};
use crate::error::Result;
use crate::flow::FlowTrace;
use crate::genericity::genericity_check;
use crate::incidence::{framing_angle, Endpoint};
use crate::pipeline::{compute_cord_algebra, Analysis, ComputeOptions};
use crate::spec::KnotSpec;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub checks: Vec<CheckResult>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            out += &format!("{mark}  {:<22} {}\n", c.name, c.detail);
        }
        let n = self.checks.iter().filter(|c| c.passed).count();
        out += &format!("{n}/{} checks passed\n", self.checks.len());
        out
    }
}

fn push(out: &mut Vec<CheckResult>, name: &str, passed: bool, detail: String) {
    out.push(CheckResult {
        name: name.into(),
        passed,
        detail,
    });
}

/// Largest relative errors of the analytic gradient and Hessian against
/// central differences on `samples` random cords.
pub fn derivative_errors(analysis: &Analysis, samples: usize, seed: u64) -> (f64, f64) {
    let curve = &analysis.curve;
    let l = curve.length();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut g_err, mut h_err) = (0.0f64, 0.0f64);
    let mut n = 0;
    while n < samples {
        let s = rng.gen_range(0.0..l);
        let t = rng.gen_range(0.0..l);
        if curve.circular_delta(s, t).abs() < 0.05 * l {
            continue;
        }
        n += 1;
        let h = 1e-6 * l;
        let g = gradient(curve, s, t);
        let d5 = |f: &dyn Fn(f64) -> f64| {
            (8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h))) / (12.0 * h)
        };
        let fd = [
            d5(&|d| energy(curve, s + d, t)),
            d5(&|d| energy(curve, s, t + d)),
        ];
        let scale = g.norm().max(1e-3 * l);
        for k in 0..2 {
            g_err = g_err.max((g[k] - fd[k]).abs() / scale);
        }
        let hs = hessian(curve, s, t);
        let gp = [gradient(curve, s + h, t), gradient(curve, s, t + h)];
        let gm = [gradient(curve, s - h, t), gradient(curve, s, t - h)];
        let hscale = hs.norm().max(1e-3);
        for j in 0..2 {
            for i in 0..2 {
                let fd = (gp[j][i] - gm[j][i]) / (2.0 * h);
                h_err = h_err.max((hs[(i, j)] - fd).abs() / hscale);
            }
        }
    }
    (g_err, h_err)
}

/// Largest difference between the end angle at `(s, t)` and the start angle
/// at `(t, s)` over random cords.
pub fn framing_symmetry_error(analysis: &Analysis, samples: usize, seed: u64) -> f64 {
    let curve = &analysis.curve;
    let l = curve.length();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let s = rng.gen_range(0.0..l);
        let t = rng.gen_range(0.0..l);
        let a = framing_angle(curve, &analysis.framing, s, t, Endpoint::End);
        let b = framing_angle(curve, &analysis.framing, t, s, Endpoint::Start);
        match (a, b) {
            (Some(a), Some(b)) => worst = worst.max((a - b).abs()),
            (None, None) => {}
            _ => worst = f64::INFINITY,
        }
    }
    worst
}

/// Steps that failed to decrease the energy, and splits whose children are
/// not shorter than the parent by `min_decrease`.
pub fn monotonicity_failures(trace: &FlowTrace, min_decrease: f64) -> (usize, usize) {
    let (mut steps, mut splits) = (0, 0);
    trace.walk(&mut |t| {
        steps += t.energies.windows(2).filter(|w| w[1] >= w[0]).count();
        for sp in &t.splits {
            for child in [&sp.first, &sp.second] {
                if child.initial.length > sp.parent_length - min_decrease {
                    splits += 1;
                }
            }
        }
    });
    (steps, splits)
}

/// Runs the pipeline and every invariant check on `spec`.
pub fn run_checks(spec: &KnotSpec, opts: &ComputeOptions) -> Result<CheckReport> {
    let mut out = Vec::new();
    let result = compute_cord_algebra(spec, opts)?;
    let md = &result.metadata;
    let analysis = Analysis::build_perturbed(spec, &opts.tol, md.perturbation)?;
    let tol = &opts.tol;
    let sc = tol.scaled(analysis.curve.length());

    push(
        &mut out,
        "embedding",
        analysis.curve.validate(tol).is_ok(),
        format!(
            "L = {:.6}, |γ'| deviation {:.2e}",
            analysis.curve.length(),
            analysis.curve.speed_deviation()
        ),
    );

    let report = genericity_check(&analysis.curve, &analysis.framing, &analysis.critical, tol);
    push(
        &mut out,
        "genericity",
        report.is_generic(),
        format!(
            "{} violations after {} attempt(s)",
            report.violations.len(),
            md.attempts
        ),
    );

    let c = md.critical_points;
    push(
        &mut out,
        "euler count",
        c.euler() == 0,
        format!("{} - {} + {} = {}", c.index0, c.index1, c.index2, c.euler()),
    );

    let dm = md.boundaries.iter().find(|b| b.label == "M");
    push(
        &mut out,
        "D(M) = 0",
        dm.is_some_and(|b| b.value == "0"),
        format!("D(M) = {}", dm.map_or("missing", |b| b.value.as_str())),
    );

    let (g, h) = derivative_errors(&analysis, 100, opts.seed_for(spec));
    push(
        &mut out,
        "gradient",
        g < 1e-6,
        format!("max relative error {g:.2e}"),
    );
    push(
        &mut out,
        "hessian",
        h < 1e-4,
        format!("max relative error {h:.2e}"),
    );

    let f = framing_symmetry_error(&analysis, 1000, opts.seed_for(spec) + 1);
    push(
        &mut out,
        "framing symmetry",
        f < 1e-9,
        format!("max angle mismatch {f:.2e}"),
    );

    let ctx = analysis.flow_context(tol, opts.conventions);
    let (mut bad_steps, mut bad_splits, mut splits) = (0, 0, 0);
    for k in analysis.critical.iter().filter(|k| k.index == 1) {
        let (plus, minus) = ctx.boundary_traces(k)?;
        for t in [&plus, &minus] {
            let (a, b) = monotonicity_failures(t, sc.min_split_decrease);
            bad_steps += a;
            bad_splits += b;
            splits += t.split_count();
        }
    }
    push(
        &mut out,
        "energy monotonicity",
        bad_steps == 0,
        format!("{bad_steps} non-decreasing steps"),
    );
    push(
        &mut out,
        "split decrease",
        bad_splits == 0,
        format!("{splits} splits, {bad_splits} children too long"),
    );

    let p = &result.presentation;
    push(
        &mut out,
        "presentation",
        true,
        format!(
            "{} generator(s), {} relation(s)",
            p.generators.len(),
            p.relations.len()
        ),
    );
    Ok(CheckReport { checks: out })
}
