//! Reference values for the unknot and the right-handed trefoil.

use cord_algebra::pipeline::CordAlgebra;
use cord_algebra::ring::{AlgebraElement, Generator, Presentation};
use cord_algebra::simplify::same_presentation;

pub fn el(s: &str) -> AlgebraElement {
    s.parse().unwrap()
}

pub fn unknot() -> Presentation {
    Presentation::new(vec![], vec![el("1 - u - l + l u")]).unwrap()
}

pub fn boundary<'a>(r: &'a CordAlgebra, label: &str) -> Option<&'a str> {
    r.metadata
        .boundaries
        .iter()
        .find(|b| b.label == label)
        .map(|b| b.value.as_str())
}

/// Boundaries of the index-1 cords of the braid-closure trefoil, blackboard
/// framing.
pub const BLACKBOARD: [(&str, &str); 10] = [
    ("S_s", "-s_s + u.s_t.l^-1 u^-2"),
    ("S_t", "-s_t + l u^2.s_s.u^-1"),
    ("k12_s", "-u.s_s + 1 - u + u.s_t.u^-1.s_s.u^-1"),
    ("k12_t", "s_t.u^-1 - 1 + u + u.s_t.s_s.u^-1"),
    ("k11_s", "1 - u - u^2.s_t.l^-1 u^-2 + u.s_t.l^-1 u^-2 - u.s_t.l^-1 u^-1 - u.s_t.s_s.s_t.l^-1 u^-2"),
    ("k11_t", "-1 + u + l u^2.s_s.u^-2 + l u.s_s.u^-1 - l u^2.s_s.u^-1 + l u^2.s_s.u^-1.s_t.u^-1.s_s.u^-1"),
    ("k21_s", "u.s_s - l^-1 + l^-1 u + u^2.s_s.s_t.l^-1 u^-2 + u.s_s.u.s_t.l^-1 u^-2 - u.s_s.s_t.l^-1 u^-2 + u.s_s.s_t.l^-1 u^-1 + u.s_s.s_t.s_s.s_t.l^-1 u^-2"),
    ("k21_t", "-s_t.u^-1 + l - l u + l u^2.s_s.u^-1.s_t.u^-2 + l u^2.s_s.u^-2.s_t.u^-1 + l u.s_s.u^-1.s_t.u^-1 - l u^2.s_s.u^-1.s_t.u^-1 + l u^2.s_s.u^-1.s_t.u^-1.s_s.u^-1.s_t.u^-1"),
    ("k22_s", "1 - u - u^2.s_s.u^-1 + u.s_s.u^-1 - u.s_s - u.s_s.s_t.s_s.u^-1"),
    ("k22_t", "-1 + u + u.s_t.u^-2 + s_t.u^-1 - u.s_t.u^-1 + u.s_t.u^-1.s_s.u^-1.s_t.u^-1"),
];

/// Seifert-framed trefoil presentation in the single generator `s`.
pub const FINAL: [&str; 3] = [
    "s.l u^6 - l u^6.s",
    "1 - u - s + l u^5.s.u^-3.s.u^-1",
    "-1 + u + l u^4.s.u^-2 + l u^5.s.u^-2.s.u^-1",
];

/// Whether the one-generator presentation `p` is `FINAL` after renaming its
/// generator to `s`.
pub fn is_trefoil_final(p: &Presentation) -> bool {
    let [g] = p.generators.as_slice() else {
        return false;
    };
    let s = AlgebraElement::generator(Generator::new("s"));
    let renamed = Presentation::new(
        vec![Generator::new("s")],
        p.relations
            .iter()
            .map(|x| x.substitute(g, &s).unwrap())
            .collect(),
    )
    .unwrap();
    let expected = Presentation::new(
        vec![Generator::new("s")],
        FINAL.iter().map(|x| el(x)).collect(),
    )
    .unwrap();
    same_presentation(&renamed, &expected)
}
