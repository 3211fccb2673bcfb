//! Binormal chords of a closed braid and their Morse indices.

use cord_algebra::config::Tolerances;
use cord_algebra::pipeline::Analysis;
use cord_algebra::spec::{BraidLayout, KnotSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let word: Vec<i32> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let word = if word.is_empty() { vec![1, 1, 1] } else { word };
    let strands = word
        .iter()
        .map(|g| g.unsigned_abs() as usize + 1)
        .max()
        .unwrap_or(2);
    let spec = KnotSpec::braid(BraidLayout::new(word.clone(), strands));
    let a = Analysis::build(&spec, &Tolerances::default())?;
    println!(
        "braid {word:?} on {strands} strands, L = {:.4}, lk = {}",
        a.curve.length(),
        a.linking_number
    );
    for c in &a.critical {
        println!(
            "{:<8} index {}  s = {:7.4}  t = {:7.4}  |w| = {:.5}",
            c.label, c.index, c.cord.s, c.cord.t, c.cord.length
        );
    }
    let n = a.counts();
    println!(
        "with the diagonal pair: {} - {} + {} = {}",
        n.index0,
        n.index1,
        n.index2,
        n.euler()
    );
    Ok(())
}
