//! Presentation simplification and comparison.
//!
//! Simplification only ever applies moves that keep the quotient fixed:
//! eliminating a generator through a relation in which it occurs once with a
//! unit coefficient, rewriting words with commutation relations, dropping
//! zero relations, and identifying relations that agree up to sign and
//! left/right unit factors.

use std::cmp::Reverse;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::ring::{AlgebraElement, Generator, Monomial, Presentation, Word};

/// `g · x = x · g` for a unit `x` with nonzero `λ` exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Commutation {
    unit: Monomial,
}

/// Record of one generator elimination, kept so callers can audit that the
/// quotient was preserved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    pub generator: Generator,
    pub image: AlgebraElement,
    pub relation: AlgebraElement,
}

fn as_commutation(r: &AlgebraElement) -> Option<(Generator, Commutation)> {
    if r.len() != 2 {
        return None;
    }
    let terms: Vec<(&Word, &BigInt)> = r.terms().collect();
    let (w1, c1) = terms[0];
    let (w2, c2) = terms[1];
    if w1.degree() != 1 || w2.degree() != 1 || w1.generators() != w2.generators() {
        return None;
    }
    if c1 != &-c2 || !c1.abs().eq(&BigInt::from(1)) {
        return None;
    }
    // m1 g m2 = m3 g m4  ⇒  g = y g z with y = m1⁻¹ m3, z = m4 m2⁻¹
    let y = w1.left().inverse() * w2.left();
    let z = w2.right() * w1.right().inverse();
    if !(y * z).is_one() || y.lambda == 0 {
        return None;
    }
    Some((w1.generators()[0].clone(), Commutation { unit: y }))
}

fn pow(m: Monomial, k: i32) -> Monomial {
    Monomial::new(m.lambda * k, m.mu * k)
}

/// Moves `λ` leftwards across every generator that commutes with a unit
/// carrying `λ`.
fn push_lambda_left(w: &Word, rules: &HashMap<Generator, Commutation>) -> Word {
    let mut monomials = w.monomials().to_vec();
    for i in (1..monomials.len()).rev() {
        let g = &w.generators()[i - 1];
        if let Some(rule) = rules.get(g) {
            let k =
                monomials[i].lambda.div_euclid(rule.unit.lambda.abs()) * rule.unit.lambda.signum();
            if k != 0 {
                monomials[i] = monomials[i] * pow(rule.unit, -k);
                monomials[i - 1] = monomials[i - 1] * pow(rule.unit, k);
            }
        }
    }
    Word::from_parts(monomials, w.generators().to_vec())
}

fn rewrite(r: &AlgebraElement, rules: &HashMap<Generator, Commutation>) -> AlgebraElement {
    if rules.is_empty() {
        return r.clone();
    }
    let mut out = AlgebraElement::zero();
    for (w, c) in r.terms() {
        out.add_term(push_lambda_left(w, rules), c.clone());
    }
    out
}

/// Fixes the overall sign so the first term in canonical order is positive.
fn orient(r: AlgebraElement) -> AlgebraElement {
    if r.leading_sign_positive() {
        r
    } else {
        -r
    }
}

/// An occurrence `±m_l · g · m_r` that can be solved for `g`.
struct Candidate {
    relation: usize,
    generator: Generator,
    weight: u32,
    image: AlgebraElement,
}

fn solvable_occurrences(index: usize, r: &AlgebraElement) -> Vec<Candidate> {
    let mut out = Vec::new();
    for g in r.generators() {
        let holders: Vec<(&Word, &BigInt)> = r.terms().filter(|(w, _)| w.contains(&g)).collect();
        if holders.len() != 1 {
            continue;
        }
        let (w, c) = holders[0];
        if w.degree() != 1 || c.abs() != BigInt::from(1) {
            continue;
        }
        let mut rest = r.clone();
        rest.add_term(w.clone(), -c.clone());
        // c m_l g m_r + rest = 0  ⇒  g = -c · m_l⁻¹ rest m_r⁻¹
        let image = rest
            .sandwich(w.left().inverse(), w.right().inverse())
            .scale(&-c.clone());
        out.push(Candidate {
            relation: index,
            generator: g,
            weight: w.weight(),
            image,
        });
    }
    out
}

/// A relation with a single top-degree term `±m_l · core · m_r`, used to
/// rewrite `core` into lower-degree words.
struct Reduction {
    core_generators: Vec<Generator>,
    core_monomials: Vec<Monomial>,
    image: AlgebraElement,
}

impl Reduction {
    /// Uses the single top-degree term, or with `any_top` the largest
    /// top-degree term with a unit coefficient.
    fn from_relation(r: &AlgebraElement, any_top: bool) -> Option<Reduction> {
        let d = r.degree();
        if d < 2 {
            return None;
        }
        let tops: Vec<(&Word, &BigInt)> = r.terms().filter(|(w, _)| w.degree() == d).collect();
        let lead = if any_top {
            tops.iter()
                .filter(|(_, c)| c.abs() == BigInt::from(1))
                .max_by(|a, b| core_key(a.0).cmp(&core_key(b.0)))
        } else if tops.len() == 1 && tops[0].1.abs() == BigInt::from(1) {
            tops.first()
        } else {
            None
        };
        let (w, c) = *lead?;
        let mut rest = r.clone();
        rest.add_term(w.clone(), -c.clone());
        Some(Reduction {
            core_generators: w.generators().to_vec(),
            core_monomials: w.monomials()[1..d].to_vec(),
            image: rest
                .sandwich(w.left().inverse(), w.right().inverse())
                .scale(&-c.clone()),
        })
    }

    /// Leftmost occurrence of the core inside `w`, as the generator offset.
    fn find_in(&self, w: &Word) -> Option<usize> {
        let k = self.core_generators.len();
        if w.degree() < k {
            return None;
        }
        (0..=w.degree() - k).find(|&i| {
            w.generators()[i..i + k] == self.core_generators[..]
                && w.monomials()[i + 1..i + k] == self.core_monomials[..]
        })
    }

    fn apply(&self, w: &Word, at: usize) -> AlgebraElement {
        let k = self.core_generators.len();
        let prefix = Word::from_parts(w.monomials()[..=at].to_vec(), w.generators()[..at].to_vec());
        let suffix = Word::from_parts(
            w.monomials()[at + k..].to_vec(),
            w.generators()[at + k..].to_vec(),
        );
        &(&AlgebraElement::from_word(prefix) * &self.image) * &AlgebraElement::from_word(suffix)
    }
}

fn core_key(w: &Word) -> (&[Generator], &[Monomial]) {
    (w.generators(), &w.monomials()[1..w.degree()])
}

/// Reductions from relations with a single top term, plus those obtained by
/// resolving overlaps `g1 a g2 b g3` of two cores sharing the middle letter.
fn reductions_with_overlaps(
    relations: &[&AlgebraElement],
    rules: &HashMap<Generator, Commutation>,
) -> Vec<Reduction> {
    let mut base: Vec<Reduction> = relations
        .iter()
        .filter(|r| as_commutation(r).is_none())
        .filter_map(|r| Reduction::from_relation(r, false))
        .collect();
    let mut extra = Vec::new();
    for a in &base {
        for b in &base {
            if a.core_generators.last() != b.core_generators.first() {
                continue;
            }
            let mut monomials = vec![Monomial::ONE];
            monomials.extend_from_slice(&a.core_monomials);
            monomials.extend_from_slice(&b.core_monomials);
            monomials.push(Monomial::ONE);
            let mut generators = a.core_generators.clone();
            generators.extend_from_slice(&b.core_generators[1..]);
            let w = Word::from_parts(monomials, generators);
            let diff = &a.apply(&w, 0) - &b.apply(&w, a.core_generators.len() - 1);
            let diff = normalize(&reduce(&diff, &base, rules), rules);
            if let Some(red) = Reduction::from_relation(&diff, true) {
                extra.push(red);
            }
        }
    }
    base.extend(extra);
    base
}

const MAX_REWRITES: usize = 10_000;

fn reduce(
    r: &AlgebraElement,
    reductions: &[Reduction],
    rules: &HashMap<Generator, Commutation>,
) -> AlgebraElement {
    let mut cur = rewrite(r, rules);
    for _ in 0..MAX_REWRITES {
        let hit = cur.terms().find_map(|(w, c)| {
            reductions
                .iter()
                .find_map(|red| red.find_in(w).map(|at| (w.clone(), c.clone(), red, at)))
        });
        let Some((w, c, red, at)) = hit else {
            return cur;
        };
        let mut next = cur.clone();
        next.add_term(w.clone(), -c.clone());
        next += red.apply(&w, at).scale(&c);
        cur = rewrite(&next, rules);
    }
    cur
}

fn normalize(r: &AlgebraElement, rules: &HashMap<Generator, Commutation>) -> AlgebraElement {
    if as_commutation(r).is_some() {
        orient(r.clear_common_units())
    } else {
        orient(rewrite(r, rules).clear_common_units())
    }
}

/// Reduces each relation by the lower ones, smallest first, dropping what
/// reduces to zero or to a unit multiple of an earlier relation.
fn interreduce(
    relations: Vec<AlgebraElement>,
    rules: &HashMap<Generator, Commutation>,
) -> Vec<AlgebraElement> {
    let mut sorted = relations;
    sorted.sort_by_key(|r| (r.degree(), r.len()));
    let mut kept: Vec<AlgebraElement> = Vec::new();
    let mut reductions: Vec<Reduction> = Vec::new();
    for r in sorted {
        let r = if as_commutation(&r).is_some() {
            r
        } else {
            normalize(&reduce(&r, &reductions, rules), rules)
        };
        if r.is_zero() || kept.iter().any(|k| k.unit_equivalent(&r)) {
            continue;
        }
        if let Some(red) = Reduction::from_relation(&r, false) {
            reductions.push(red);
        }
        kept.push(r);
    }
    let mut i = kept.len();
    while i > 0 {
        i -= 1;
        if as_commutation(&kept[i]).is_some() {
            continue;
        }
        let others: Vec<&AlgebraElement> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, r)| r)
            .collect();
        let reds = reductions_with_overlaps(&others, rules);
        if normalize(&reduce(&kept[i], &reds, rules), rules).is_zero() {
            kept.remove(i);
        }
    }
    kept
}

fn dedupe(relations: Vec<AlgebraElement>) -> Vec<AlgebraElement> {
    let mut kept: Vec<AlgebraElement> = Vec::new();
    for r in relations {
        if r.is_zero() || kept.iter().any(|k| k.unit_equivalent(&r)) {
            continue;
        }
        kept.push(r);
    }
    kept
}

/// Simplifies to a fixpoint, returning the final presentation and the
/// eliminations performed in order.
pub fn simplify_with_log(p: &Presentation) -> (Presentation, Vec<Elimination>) {
    let mut generators = p.generators.clone();
    let mut relations: Vec<AlgebraElement> = p.relations.clone();
    let mut log = Vec::new();
    loop {
        let rules: HashMap<Generator, Commutation> =
            relations.iter().filter_map(as_commutation).collect();
        relations = relations.iter().map(|r| normalize(r, &rules)).collect();
        relations = dedupe(relations);

        let best = relations
            .iter()
            .enumerate()
            .flat_map(|(i, r)| solvable_occurrences(i, r))
            .min_by_key(|c| (c.weight, Reverse(c.generator.clone()), c.relation));
        let Some(c) = best else {
            let reduced = interreduce(relations.clone(), &rules);
            if reduced == relations {
                break;
            }
            relations = reduced;
            continue;
        };
        let solved = relations.remove(c.relation);
        relations = relations
            .iter()
            .map(|r| {
                r.substitute(&c.generator, &c.image)
                    .expect("image is free of the generator")
            })
            .collect();
        generators.retain(|g| g != &c.generator);
        log.push(Elimination {
            generator: c.generator,
            image: c.image,
            relation: solved,
        });
    }
    let out = Presentation {
        generators,
        relations,
        ring: p.ring.clone(),
    };
    (out, log)
}

pub fn simplify(p: &Presentation) -> Presentation {
    simplify_with_log(p).0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Identical,
    IdenticalAfterSimplify,
    Inconclusive,
}

/// Same generators and the same relations up to sign and unit factors,
/// matched as multisets.
pub fn same_presentation(p: &Presentation, q: &Presentation) -> bool {
    let mut pg = p.generators.clone();
    let mut qg = q.generators.clone();
    pg.sort();
    qg.sort();
    if pg != qg || p.relations.len() != q.relations.len() {
        return false;
    }
    let mut used = vec![false; q.relations.len()];
    'outer: for r in &p.relations {
        for (j, s) in q.relations.iter().enumerate() {
            if !used[j] && r.unit_equivalent(s) {
                used[j] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Never claims non-isomorphism.
pub fn compare(p: &Presentation, q: &Presentation) -> Verdict {
    if p.ring != q.ring {
        return Verdict::Inconclusive;
    }
    if same_presentation(p, q) {
        return Verdict::Identical;
    }
    if same_presentation(&simplify(p), &simplify(q)) {
        return Verdict::IdenticalAfterSimplify;
    }
    Verdict::Inconclusive
}
