//! Different embeddings and basepoints of the unknot give the same algebra.

mod common;

use common::golden::unknot;
use common::wobbly_ellipse;
use cord_algebra::pipeline::{compute_cord_algebra, ComputeOptions, CordAlgebra, TargetFraming};
use cord_algebra::simplify::same_presentation;
use cord_algebra::spec::KnotSpec;

fn run(spec: &KnotSpec) -> CordAlgebra {
    let opts = ComputeOptions {
        framing: TargetFraming::Blackboard,
        ..Default::default()
    };
    compute_cord_algebra(spec, &opts).unwrap()
}

#[test]
fn unknot_embeddings_agree() {
    for spec in [
        KnotSpec::ellipse(2.0, 1.0),
        KnotSpec::ellipse(3.0, 1.0),
        wobbly_ellipse(),
    ] {
        let r = run(&spec);
        assert!(
            same_presentation(&r.presentation, &unknot()),
            "{:?}\n{}",
            spec.shape,
            r.to_text()
        );
    }
}

#[test]
fn unknot_basepoints_agree() {
    for shift in [0.7, 1.9, 3.1, 5.3, 8.2] {
        let mut spec = KnotSpec::ellipse(2.0, 1.0);
        spec.basepoint_shift = Some(shift);
        let r = run(&spec);
        assert!(
            same_presentation(&r.presentation, &unknot()),
            "shift {shift}\n{}",
            r.to_text()
        );
    }
}
