//! Samples the sets F and S on the torus of cords and checks that exactly
//! one arc of F at the start point ends on each cord tangent there.

use std::f64::consts::TAU;

use cord_algebra::config::Tolerances;
use cord_algebra::incidence::{framing_angle, sample_sets, tangent_boundary_cords, Endpoint};
use cord_algebra::pipeline::Analysis;
use cord_algebra::spec::{BraidLayout, KnotSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tol = Tolerances::default();
    let a = Analysis::build(&KnotSpec::braid(BraidLayout::new(vec![1, 1, 1], 2)), &tol)?;
    let grid = 256;
    let sets = sample_sets(&a.curve, &a.framing, &tol, grid);
    println!(
        "grid {grid}: {} samples of F^s, {} of F^e, {} of S",
        sets.f_start.len(),
        sets.f_end.len(),
        sets.s.len()
    );
    let l = a.curve.length();
    let r = tol.boundary_tol * l;
    for b in tangent_boundary_cords(&a.curve, &tol, grid) {
        if b.endpoint != Endpoint::Start {
            continue;
        }
        // arcs of F^s leaving a small circle around the tangent cord
        let n = 720;
        let angle = |k: usize| {
            let th = TAU * k as f64 / n as f64;
            framing_angle(
                &a.curve,
                &a.framing,
                b.cord.s + r * th.cos(),
                b.cord.t + r * th.sin(),
                Endpoint::Start,
            )
        };
        let mut arcs = 0;
        for k in 0..n {
            if let (Some(p), Some(q)) = (angle(k), angle(k + 1)) {
                if p.signum() != q.signum() && p.cos() > 0.0 && q.cos() > 0.0 {
                    arcs += 1;
                }
            }
        }
        println!(
            "tangent cord ({:.4}, {:.4}): {arcs} arc(s) of F^s end here",
            b.cord.s / l,
            b.cord.t / l
        );
    }
    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, serde_json::to_string(&sets)?)?;
        println!("wrote {path}");
    }
    Ok(())
}
