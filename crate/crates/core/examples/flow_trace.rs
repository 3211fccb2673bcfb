//! Follows the two unstable branches of every saddle of the trefoil and
//! prints what happened along the way.

use cord_algebra::config::Tolerances;
use cord_algebra::flow::{Conventions, FlowTrace};
use cord_algebra::pipeline::Analysis;
use cord_algebra::spec::{BraidLayout, KnotSpec};

fn summary(t: &FlowTrace) -> String {
    let kinds: Vec<String> = t
        .events
        .iter()
        .map(|e| format!("{:?}{:+}", e.kind, e.direction))
        .collect();
    format!(
        "{} steps, events [{}], {} splits -> {}",
        t.steps,
        kinds.join(" "),
        t.split_count(),
        t.value()
    )
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tol = Tolerances::default();
    let a = Analysis::build(&KnotSpec::braid(BraidLayout::new(vec![1, 1, 1], 2)), &tol)?;
    let ctx = a.flow_context(&tol, Conventions::default());
    for k in a.critical.iter().filter(|k| k.index == 1) {
        let (plus, minus) = ctx.boundary_traces(k)?;
        println!("{}", k.label);
        println!("  +  {}", summary(&plus));
        println!("  -  {}", summary(&minus));
        println!("  D = {}", &plus.value() - &minus.value());
    }
    Ok(())
}
