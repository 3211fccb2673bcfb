mod common;

use common::*;
use cord_algebra::config::Tolerances;
use cord_algebra::error::CordError;
use cord_algebra::flow::Conventions;
use cord_algebra::pipeline::{compute_cord_algebra, Analysis, ComputeOptions, TargetFraming};
use cord_algebra::spec::KnotSpec;

#[test]
fn flows_lower_the_energy_and_splits_shorten() {
    let tol = Tolerances::default();
    let a = Analysis::build(&trefoil(), &tol).unwrap();
    let ctx = a.flow_context(&tol, Conventions::default());
    let min_decrease = tol.min_split_decrease * a.curve.length();
    let mut total_splits = 0;
    for k in a.critical.iter().filter(|k| k.index == 1) {
        let (plus, minus) = ctx.boundary_traces(k).unwrap();
        for t in [&plus, &minus] {
            let (steps, bad, splits) = flow_defects(&a.curve, t, min_decrease);
            assert_eq!(steps, 0, "{}: energy rose", k.label);
            assert_eq!(bad, 0, "{}: split child too long", k.label);
            assert!(splits <= tol.max_splits);
            total_splits += splits;
        }
    }
    assert!(total_splits > 0);
}

#[test]
fn index_zero_cords_flow_nowhere() {
    let tol = Tolerances::default();
    let a = Analysis::build(&trefoil(), &tol).unwrap();
    let ctx = a.flow_context(&tol, Conventions::default());
    for k in a.critical.iter().filter(|k| k.index == 0) {
        let t = ctx.integrate(k.cord).unwrap();
        assert_eq!(t.value(), k.generator());
        assert!(t.events.is_empty());
    }
}

#[test]
fn census_and_euler_count() {
    let tol = Tolerances::default();
    for (name, spec) in test_knots() {
        let a = Analysis::build(&spec, &tol).unwrap();
        let c = a.counts();
        assert_eq!(c.euler(), 0, "{name}: {c:?}");
        // every cord appears with its reverse, at the same index
        for k in &a.critical {
            let r = k.cord.reversed(&a.curve);
            assert!(
                a.critical.iter().any(|j| j.index == k.index
                    && j.cord.distance(&r, &a.curve) < 1e-6 * a.curve.length()),
                "{name}: {} has no reverse",
                k.label
            );
        }
    }
    let a = Analysis::build(&trefoil(), &tol).unwrap();
    let off = |i| a.critical.iter().filter(|k| k.index == i).count();
    assert_eq!((off(0), off(1)), (2, 10));
}

#[test]
fn maximum_on_the_diagonal_has_zero_boundary() {
    let opts = ComputeOptions {
        framing: TargetFraming::Blackboard,
        ..Default::default()
    };
    for (name, spec) in test_knots() {
        let r = compute_cord_algebra(&spec, &opts).unwrap();
        let m = r
            .metadata
            .boundaries
            .iter()
            .find(|b| b.label == "M")
            .unwrap();
        assert_eq!(m.value, "0", "{name}");
    }
}

#[test]
fn round_circle_exhausts_perturbations() {
    // every chord of a round circle through the centre is critical
    let opts = ComputeOptions {
        max_perturb: 0,
        ..Default::default()
    };
    match compute_cord_algebra(&KnotSpec::ellipse(1.0, 1.0), &opts) {
        Err(CordError::GenericityExhausted(0, _)) => {}
        Err(e) => panic!("unexpected error {e}"),
        Ok(_) => panic!("a round circle is not Morse"),
    }
}
