//! Moves the basepoint of an ellipse around and compares the resulting
//! presentations.

use cord_algebra::pipeline::{compute_cord_algebra, ComputeOptions, TargetFraming};
use cord_algebra::simplify::compare;
use cord_algebra::spec::KnotSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = ComputeOptions {
        framing: TargetFraming::Blackboard,
        ..Default::default()
    };
    let reference = compute_cord_algebra(&KnotSpec::ellipse(2.0, 1.0), &opts)?.presentation;
    print!("reference:\n{reference}");
    for shift in [0.0, 1.3, 2.6, 4.1, 6.7] {
        let mut spec = KnotSpec::ellipse(3.0, 1.0);
        spec.basepoint_shift = Some(shift);
        let p = compute_cord_algebra(&spec, &opts)?.presentation;
        println!(
            "ellipse(3,1), basepoint +{shift}: {:?}",
            compare(&p, &reference)
        );
    }
    Ok(())
}
