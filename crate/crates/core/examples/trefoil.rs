//! The right-handed trefoil as the closure of the braid σ₁³, in both
//! framings.

use cord_algebra::pipeline::{compute_cord_algebra, ComputeOptions, TargetFraming};
use cord_algebra::spec::KnotSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/trefoil.json");
    let spec = KnotSpec::load(path.as_ref())?;
    let start = std::time::Instant::now();
    let r = compute_cord_algebra(&spec, &ComputeOptions::default())?;
    println!("computed in {:.2?}\n", start.elapsed());
    println!("blackboard relations:");
    for rel in &r.raw.relations {
        println!("  {rel}");
    }
    println!("\nSeifert framing, after elimination:");
    print!("{}", r.presentation);

    let bb = ComputeOptions {
        framing: TargetFraming::Blackboard,
        ..Default::default()
    };
    let simplified = compute_cord_algebra(&spec, &bb)?.presentation;
    println!("\nblackboard framing, after elimination:");
    print!("{simplified}");
    Ok(())
}
