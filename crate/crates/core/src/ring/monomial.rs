use std::fmt;
use std::ops::Mul;

use serde::Serialize;

/// A unit `λ^lambda μ^mu` of the coefficient ring `Z[λ^±1, μ^±1]`.
///
/// `λ` and `μ` commute with each other, so a monomial is just an exponent pair.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Monomial {
    pub lambda: i32,
    pub mu: i32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { lambda: 0, mu: 0 };
    pub const LAMBDA: Monomial = Monomial { lambda: 1, mu: 0 };
    pub const MU: Monomial = Monomial { lambda: 0, mu: 1 };

    pub const fn new(lambda: i32, mu: i32) -> Self {
        Monomial { lambda, mu }
    }

    pub fn lambda_pow(e: i32) -> Self {
        Monomial { lambda: e, mu: 0 }
    }

    pub fn mu_pow(e: i32) -> Self {
        Monomial { lambda: 0, mu: e }
    }

    pub fn is_one(&self) -> bool {
        self.lambda == 0 && self.mu == 0
    }

    pub fn inverse(self) -> Self {
        Monomial {
            lambda: -self.lambda,
            mu: -self.mu,
        }
    }

    /// `|a| + |b|`, used to rank how "heavy" a unit is.
    pub fn weight(&self) -> u32 {
        self.lambda.unsigned_abs() + self.mu.unsigned_abs()
    }

    /// Image under the framing change `λ ↦ λ μ^n`.
    pub fn reframe(self, n: i32) -> Self {
        Monomial {
            lambda: self.lambda,
            mu: self.mu + n * self.lambda,
        }
    }
}

impl Mul for Monomial {
    type Output = Monomial;

    fn mul(self, rhs: Monomial) -> Monomial {
        Monomial {
            lambda: self.lambda + rhs.lambda,
            mu: self.mu + rhs.mu,
        }
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, base: &str, e: i32) -> fmt::Result {
    if e == 1 {
        write!(f, "{base}")
    } else {
        write!(f, "{base}^{e}")
    }
}

impl fmt::Display for Monomial {
    /// Renders in the text grammar: `l^a u^b`, empty string for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if self.lambda != 0 {
            write_power(f, "l", self.lambda)?;
            first = false;
        }
        if self.mu != 0 {
            if !first {
                write!(f, " ")?;
            }
            write_power(f, "u", self.mu)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_adds_exponents() {
        let m = Monomial::LAMBDA * Monomial::MU * Monomial::lambda_pow(-1);
        assert_eq!(m, Monomial::MU);
        assert!((Monomial::new(3, -2) * Monomial::new(3, -2).inverse()).is_one());
    }

    #[test]
    fn reframe_shifts_mu_by_lambda_degree() {
        assert_eq!(Monomial::new(-1, 0).reframe(3), Monomial::new(-1, -3));
        assert_eq!(Monomial::new(2, 1).reframe(-1), Monomial::new(2, -1));
    }

    #[test]
    fn display() {
        assert_eq!(Monomial::new(-1, -3).to_string(), "l^-1 u^-3");
        assert_eq!(Monomial::MU.to_string(), "u");
        assert_eq!(Monomial::ONE.to_string(), "");
    }
}
