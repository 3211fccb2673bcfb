//! Random ring elements and the algebraic laws they must satisfy.

use cord_algebra::ring::{AlgebraElement, Generator, Monomial, Presentation, Word};
use cord_algebra::simplify::simplify_with_log;
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub type Law = std::result::Result<(), TestCaseError>;

pub fn monomial() -> impl Strategy<Value = Monomial> {
    (-2i32..=2, -3i32..=3).prop_map(|(a, b)| Monomial::new(a, b))
}

fn word(gens: &'static [&'static str]) -> impl Strategy<Value = Word> {
    prop::collection::vec((monomial(), prop::sample::select(gens)), 0..=3).prop_flat_map(|parts| {
        monomial().prop_map(move |last| {
            let mut ms: Vec<Monomial> = parts.iter().map(|p| p.0).collect();
            ms.push(last);
            let gs = parts.iter().map(|p| Generator::new(p.1)).collect();
            Word::from_parts(ms, gs)
        })
    })
}

pub fn element_over(gens: &'static [&'static str]) -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec((word(gens), -3i64..=3), 0..=4).prop_map(|terms| {
        AlgebraElement::from_terms(terms.into_iter().map(|(w, c)| (w, BigInt::from(c))))
    })
}

pub fn element() -> impl Strategy<Value = AlgebraElement> {
    element_over(&["a", "b", "c"])
}

pub fn cfg() -> ProptestConfig {
    ProptestConfig::with_cases(1000)
}

pub fn abelian_group(x: &AlgebraElement, y: &AlgebraElement, z: &AlgebraElement) -> Law {
    prop_assert_eq!(&(x + y) + z, x + &(y + z));
    prop_assert_eq!(x + y, y + x);
    prop_assert_eq!(x + &AlgebraElement::zero(), x.clone());
    let same = x.clone();
    prop_assert!((x - &same).is_zero());
    prop_assert_eq!(x + &(-x), AlgebraElement::zero());
    Ok(())
}

pub fn associative_unital(x: &AlgebraElement, y: &AlgebraElement, z: &AlgebraElement) -> Law {
    prop_assert_eq!(&(x * y) * z, x * &(y * z));
    prop_assert_eq!(x * &AlgebraElement::one(), x.clone());
    prop_assert_eq!(&AlgebraElement::one() * x, x.clone());
    prop_assert!((x * &AlgebraElement::zero()).is_zero());
    Ok(())
}

pub fn distributive(x: &AlgebraElement, y: &AlgebraElement, z: &AlgebraElement) -> Law {
    prop_assert_eq!(x * &(y + z), &(x * y) + &(x * z));
    prop_assert_eq!(&(x + y) * z, &(x * z) + &(y * z));
    Ok(())
}

pub fn units(m: Monomial, n: Monomial, x: &AlgebraElement) -> Law {
    let mm = AlgebraElement::monomial(m);
    let nn = AlgebraElement::monomial(n);
    prop_assert_eq!(&mm * &nn, &nn * &mm);
    prop_assert_eq!(
        &mm * &AlgebraElement::monomial(m.inverse()),
        AlgebraElement::one()
    );
    // units pass through scalars but not through generators
    let scalar_part = AlgebraElement::from_terms(
        x.terms()
            .filter(|(w, _)| w.degree() == 0)
            .map(|(w, c)| (w.clone(), c.clone())),
    );
    prop_assert_eq!(&mm * &scalar_part, &scalar_part * &mm);
    Ok(())
}

pub fn normal_form_idempotent(x: &AlgebraElement) -> Law {
    let again = AlgebraElement::from_terms(x.terms().map(|(w, c)| (w.clone(), c.clone())));
    prop_assert_eq!(&again, x);
    let doubled = AlgebraElement::from_terms(
        x.terms()
            .chain(x.terms())
            .map(|(w, c)| (w.clone(), c.clone())),
    );
    prop_assert_eq!(doubled, x + x);
    prop_assert!(x.terms().all(|(_, c)| *c != BigInt::from(0)));
    Ok(())
}

pub fn substitution_homomorphism(
    x: &AlgebraElement,
    y: &AlgebraElement,
    t: &AlgebraElement,
) -> Law {
    let a = Generator::new("a");
    let f = |e: &AlgebraElement| e.substitute(&a, t).unwrap();
    prop_assert_eq!(f(&(x + y)), &f(x) + &f(y));
    prop_assert_eq!(f(&(x * y)), &f(x) * &f(y));
    prop_assert_eq!(f(&AlgebraElement::one()), AlgebraElement::one());
    prop_assert!(!f(x).contains(&a));
    Ok(())
}

pub fn round_trip(x: &AlgebraElement) -> Law {
    let back: AlgebraElement = x.to_string().parse().unwrap();
    prop_assert_eq!(&back, x);
    Ok(())
}

/// Every solved relation must vanish under its own substitution.
pub fn elimination_kills_relation(r: &AlgebraElement, extra: &AlgebraElement) -> Law {
    let a = AlgebraElement::generator("a");
    let p = Presentation::new(
        vec![
            Generator::new("a"),
            Generator::new("b"),
            Generator::new("c"),
        ],
        vec![&a - r, extra.clone()],
    )
    .unwrap();
    let (_, log) = simplify_with_log(&p);
    for e in &log {
        let back = e.relation.substitute(&e.generator, &e.image).unwrap();
        prop_assert!(
            back.is_zero(),
            "{} = {} does not kill {}",
            e.generator,
            e.image,
            e.relation
        );
    }
    Ok(())
}
