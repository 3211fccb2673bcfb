//! Purely algebraic checks on the blackboard-framed trefoil boundary values
//! of the standard closed-braid drawing.

use cord_algebra::ring::{
    framing_transform, AlgebraElement, Generator, GeneratorTwist, Monomial, Presentation,
};
use cord_algebra::simplify::{same_presentation, simplify_with_log};

const BLACKBOARD: [&str; 10] = [
    "-s_s + u.s_t.l^-1 u^-2",
    "-s_t + l u^2.s_s.u^-1",
    "-u.s_s + 1 - u + u.s_t.u^-1.s_s.u^-1",
    "s_t.u^-1 - 1 + u + u.s_t.s_s.u^-1",
    "1 - u - u^2.s_t.l^-1 u^-2 + u.s_t.l^-1 u^-2 - u.s_t.l^-1 u^-1 - u.s_t.s_s.s_t.l^-1 u^-2",
    "-1 + u + l u^2.s_s.u^-2 + l u.s_s.u^-1 - l u^2.s_s.u^-1 + l u^2.s_s.u^-1.s_t.u^-1.s_s.u^-1",
    "u.s_s - l^-1 + l^-1 u + u^2.s_s.s_t.l^-1 u^-2 + u.s_s.u.s_t.l^-1 u^-2 - u.s_s.s_t.l^-1 u^-2 + u.s_s.s_t.l^-1 u^-1 + u.s_s.s_t.s_s.s_t.l^-1 u^-2",
    "-s_t.u^-1 + l - l u + l u^2.s_s.u^-1.s_t.u^-2 + l u^2.s_s.u^-2.s_t.u^-1 + l u.s_s.u^-1.s_t.u^-1 - l u^2.s_s.u^-1.s_t.u^-1 + l u^2.s_s.u^-1.s_t.u^-1.s_s.u^-1.s_t.u^-1",
    "1 - u - u^2.s_s.u^-1 + u.s_s.u^-1 - u.s_s - u.s_s.s_t.s_s.u^-1",
    "-1 + u + u.s_t.u^-2 + s_t.u^-1 - u.s_t.u^-1 + u.s_t.u^-1.s_s.u^-1.s_t.u^-1",
];

const FINAL: [&str; 3] = [
    "s.l u^6 - l u^6.s",
    "1 - u - s + l u^5.s.u^-3.s.u^-1",
    "-1 + u + l u^4.s.u^-2 + l u^5.s.u^-2.s.u^-1",
];

fn el(s: &str) -> AlgebraElement {
    s.parse().unwrap()
}

#[test]
fn blackboard_values_simplify_to_one_generator() {
    let gens = vec![Generator::new("s_s"), Generator::new("s_t")];
    let p = Presentation::new(gens, BLACKBOARD.iter().map(|r| el(r)).collect()).unwrap();
    let twists = [
        GeneratorTwist::new("s_s", Monomial::mu_pow(-1), Monomial::ONE),
        GeneratorTwist::new("s_t", Monomial::ONE, Monomial::MU),
    ];
    let seifert = framing_transform(&p, 3, &twists);
    let (s, log) = simplify_with_log(&seifert);
    for e in &log {
        println!("eliminated {} = {}", e.generator, e.image);
    }
    for r in &s.relations {
        println!("  {r}");
    }
    let renamed = Presentation::new(
        vec![Generator::new("s")],
        s.relations
            .iter()
            .map(|r| r.substitute(&Generator::new("s_s"), &el("s")).unwrap())
            .collect(),
    )
    .unwrap();
    let expected = Presentation::new(
        vec![Generator::new("s")],
        FINAL.iter().map(|r| el(r)).collect(),
    )
    .unwrap();
    assert!(same_presentation(&renamed, &expected));
}
