//! Blackboard framing of a closed braid and its linking number with the
//! knot, from the Gauss sum of two polygons.

use cord_algebra::config::Tolerances;
use cord_algebra::framing::polygon_linking;
use cord_algebra::spec::{build_curve, build_framing, BraidLayout, KnotSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tol = Tolerances::default();
    for word in [vec![1, 1, 1], vec![1, -2, 1, -2], vec![1, 1, 1, 1, 1]] {
        let strands = word
            .iter()
            .map(|g: &i32| g.unsigned_abs() as usize + 1)
            .max()
            .unwrap();
        let spec = KnotSpec::braid(BraidLayout::new(word.clone(), strands));
        let (curve, _) = build_curve(&spec, &tol)?;
        let framing = build_framing(&spec, &curve)?;
        let lk = framing.linking_number(&curve)?;
        let raw = polygon_linking(&curve.polyline(1), &framing.pushoff(&curve, 1));
        let writhe: i32 = word.iter().map(|g| g.signum()).sum();
        println!("{word:?}: lk = {lk} (Gauss sum {raw:.4}), writhe {writhe}");
    }
    Ok(())
}
