//! Cord algebra of a planar ellipse.

use cord_algebra::pipeline::{compute_cord_algebra, ComputeOptions, TargetFraming};
use cord_algebra::spec::KnotSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = ComputeOptions {
        framing: TargetFraming::Blackboard,
        ..Default::default()
    };
    let result = compute_cord_algebra(&KnotSpec::ellipse(2.0, 1.0), &opts)?;
    print!("{}", result.to_text());
    Ok(())
}
