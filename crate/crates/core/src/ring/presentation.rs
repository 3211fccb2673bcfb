use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{AlgebraElement, Generator, Monomial, RingError};

pub const RING_DESCRIPTOR: &str = "Z[l^±1,u^±1]";

/// Generators plus relations; the algebra is the quotient of the free algebra
/// on `generators` by the two-sided ideal of `relations`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<Generator>,
    pub relations: Vec<AlgebraElement>,
    pub ring: String,
}

impl Presentation {
    pub fn new(
        generators: Vec<Generator>,
        relations: Vec<AlgebraElement>,
    ) -> Result<Self, RingError> {
        let p = Presentation {
            generators,
            relations,
            ring: RING_DESCRIPTOR.to_string(),
        };
        p.validate()?;
        Ok(p)
    }

    /// Every generator used by a relation must be declared.
    pub fn validate(&self) -> Result<(), RingError> {
        for r in &self.relations {
            for g in r.generators() {
                if !self.generators.contains(&g) {
                    return Err(RingError::UndeclaredGenerator(g.to_string()));
                }
            }
        }
        Ok(())
    }

    pub fn relation_strings(&self) -> Vec<String> {
        self.relations.iter().map(ToString::to_string).collect()
    }
}

impl std::fmt::Display for Presentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(ToString::to_string).collect();
        writeln!(f, "<{}>_{} / (", gens.join(", "), self.ring)?;
        for r in &self.relations {
            writeln!(f, "  {r}")?;
        }
        writeln!(f, ")")
    }
}

/// Conjugation of one generator by units, `g ↦ left · g · right`, produced
/// when an added framing winding sweeps across the endpoint of an index-0 cord.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorTwist {
    pub generator: String,
    pub left: (i32, i32),
    pub right: (i32, i32),
}

impl GeneratorTwist {
    pub fn new(generator: &str, left: Monomial, right: Monomial) -> Self {
        GeneratorTwist {
            generator: generator.to_string(),
            left: (left.lambda, left.mu),
            right: (right.lambda, right.mu),
        }
    }

    pub fn left(&self) -> Monomial {
        Monomial::new(self.left.0, self.left.1)
    }

    pub fn right(&self) -> Monomial {
        Monomial::new(self.right.0, self.right.1)
    }

    pub fn inverse(&self) -> Self {
        GeneratorTwist::new(
            &self.generator,
            self.left().inverse(),
            self.right().inverse(),
        )
    }
}

fn twist_rules(twists: &[GeneratorTwist]) -> HashMap<Generator, AlgebraElement> {
    twists
        .iter()
        .map(|tw| {
            let g = Generator::new(tw.generator.as_str());
            let image = AlgebraElement::generator(g.clone()).sandwich(tw.left(), tw.right());
            (g, image)
        })
        .collect()
}

/// Applies `λ ↦ λ μ^n` everywhere, then the generator twists simultaneously.
pub fn reframe_element(x: &AlgebraElement, n: i32, twists: &[GeneratorTwist]) -> AlgebraElement {
    let y = if n == 0 {
        x.clone()
    } else {
        x.map_monomials(|m| m.reframe(n))
    };
    if twists.is_empty() {
        y
    } else {
        y.substitute_simultaneous(&twist_rules(twists))
    }
}

/// Moves a presentation computed with one framing to the framing with `n`
/// fewer windings (for the blackboard-to-Seifert change, `n` is the linking
/// number of the knot with its blackboard push-off).
pub fn framing_transform(p: &Presentation, n: i32, twists: &[GeneratorTwist]) -> Presentation {
    Presentation {
        generators: p.generators.clone(),
        relations: p
            .relations
            .iter()
            .map(|r| reframe_element(r, n, twists))
            .collect(),
        ring: p.ring.clone(),
    }
}
