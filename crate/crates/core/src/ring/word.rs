use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use super::Monomial;

/// Label of an index-0 cord acting as a free generator of the algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator(String);

impl Generator {
    pub fn new(label: impl Into<String>) -> Self {
        Generator(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Generator {
    fn from(s: &str) -> Self {
        Generator::new(s)
    }
}

/// An alternating word `m0 g1 m1 g2 ... gk mk`.
///
/// Adjacent monomials are always fused, so `monomials.len() == generators.len() + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    monomials: Vec<Monomial>,
    generators: Vec<Generator>,
}

impl Word {
    pub fn one() -> Self {
        Word::monomial(Monomial::ONE)
    }

    pub fn monomial(m: Monomial) -> Self {
        Word {
            monomials: vec![m],
            generators: Vec::new(),
        }
    }

    pub fn generator(g: Generator) -> Self {
        Word {
            monomials: vec![Monomial::ONE, Monomial::ONE],
            generators: vec![g],
        }
    }

    /// Builds a word from its parts; panics if the shape is not alternating.
    pub fn from_parts(monomials: Vec<Monomial>, generators: Vec<Generator>) -> Self {
        assert_eq!(
            monomials.len(),
            generators.len() + 1,
            "word must alternate monomials and generators"
        );
        Word {
            monomials,
            generators,
        }
    }

    /// Number of generator letters.
    pub fn degree(&self) -> usize {
        self.generators.len()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn left(&self) -> Monomial {
        self.monomials[0]
    }

    pub fn right(&self) -> Monomial {
        *self.monomials.last().expect("non-empty")
    }

    pub fn contains(&self, g: &Generator) -> bool {
        self.generators.iter().any(|h| h == g)
    }

    pub fn count(&self, g: &Generator) -> usize {
        self.generators.iter().filter(|h| *h == g).count()
    }

    /// `m_l · self · m_r`.
    pub fn sandwich(&self, m_l: Monomial, m_r: Monomial) -> Word {
        let mut w = self.clone();
        w.monomials[0] = m_l * w.monomials[0];
        let last = w.monomials.len() - 1;
        w.monomials[last] = w.monomials[last] * m_r;
        w
    }

    pub fn map_monomials(&self, f: impl Fn(Monomial) -> Monomial) -> Word {
        Word {
            monomials: self.monomials.iter().map(|m| f(*m)).collect(),
            generators: self.generators.clone(),
        }
    }

    /// Total exponent weight of all monomials.
    pub fn weight(&self) -> u32 {
        self.monomials.iter().map(Monomial::weight).sum()
    }
}

impl Mul for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        let mut monomials = Vec::with_capacity(self.monomials.len() + rhs.monomials.len() - 1);
        monomials.extend_from_slice(&self.monomials[..self.monomials.len() - 1]);
        monomials.push(self.right() * rhs.left());
        monomials.extend_from_slice(&rhs.monomials[1..]);
        let mut generators = self.generators.clone();
        generators.extend(rhs.generators.iter().cloned());
        Word {
            monomials,
            generators,
        }
    }
}

impl Ord for Word {
    /// Degree first, then generator labels, then the exponent tuples.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.generators.cmp(&other.generators))
            .then_with(|| self.monomials.cmp(&other.monomials))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    /// Factors inside a monomial are separated by spaces, monomials and
    /// generators are joined with `.`; the empty word prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::with_capacity(2 * self.generators.len() + 1);
        for (i, m) in self.monomials.iter().enumerate() {
            if !m.is_one() {
                parts.push(m.to_string());
            }
            if let Some(g) = self.generators.get(i) {
                parts.push(g.to_string());
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("."))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_fuses_boundary_monomials() {
        // (u^2 s u^-1)(u t) = u^2 s t
        let a = Word::from_parts(
            vec![Monomial::mu_pow(2), Monomial::mu_pow(-1)],
            vec![Generator::new("s")],
        );
        let b = Word::from_parts(vec![Monomial::MU, Monomial::ONE], vec![Generator::new("t")]);
        let p = &a * &b;
        assert_eq!(
            p.monomials(),
            &[Monomial::mu_pow(2), Monomial::ONE, Monomial::ONE]
        );
        assert_eq!(p.to_string(), "u^2.s.t");
    }

    #[test]
    fn ordering_is_degree_first() {
        let g = Word::generator(Generator::new("a"));
        let m = Word::monomial(Monomial::new(5, 5));
        assert!(m < g);
        assert!(Word::one() < Word::monomial(Monomial::MU));
    }

    #[test]
    fn display_matches_grammar() {
        let w = Word::from_parts(
            vec![Monomial::MU, Monomial::new(-1, -3)],
            vec![Generator::new("s_t")],
        );
        assert_eq!(w.to_string(), "u.s_t.l^-1 u^-3");
        assert_eq!(Word::one().to_string(), "1");
    }
}
