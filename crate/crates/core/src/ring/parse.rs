//! Text form of algebra elements.
//!
//! ```text
//! element := ['-'] term (('+' | '-') term)*
//! term    := integer | [integer '*'] factor+
//! factor  := 'l' ['^' int] | 'u' ['^' int] | generator-id
//! ```
//!
//! Factors are separated by whitespace or `.`; `1` is the empty word.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use super::{AlgebraElement, Generator, Monomial, RingError, Word};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>) -> RingError {
        RingError::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn skip_separators(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace() || c == b'.') {
            self.pos += 1;
        }
    }

    fn unsigned(&mut self) -> Result<BigInt, RingError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("validated digits"))
    }

    fn exponent(&mut self) -> Result<i32, RingError> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let start = self.pos;
        let v = self.unsigned()?;
        let v: i32 = v.try_into().map_err(|_| RingError::Syntax {
            position: start,
            message: "exponent out of range".into(),
        })?;
        Ok(if neg { -v } else { v })
    }

    fn identifier(&mut self) -> &'a str {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier")
    }

    /// Parses `factor+` into a word, stopping at `+`, `-` or end of input.
    fn factors(&mut self) -> Result<Word, RingError> {
        let mut monomials = vec![Monomial::ONE];
        let mut generators = Vec::new();
        let mut any = false;
        loop {
            self.skip_separators();
            match self.peek() {
                Some(c) if c.is_ascii_alphabetic() => {
                    let ident = self.identifier();
                    let last = monomials.len() - 1;
                    match ident {
                        "l" => {
                            let e = self.exponent()?;
                            monomials[last] = monomials[last] * Monomial::lambda_pow(e);
                        }
                        "u" => {
                            let e = self.exponent()?;
                            monomials[last] = monomials[last] * Monomial::mu_pow(e);
                        }
                        _ => {
                            if self.peek() == Some(b'^') {
                                return Err(self.err("generators cannot carry exponents"));
                            }
                            generators.push(Generator::new(ident));
                            monomials.push(Monomial::ONE);
                        }
                    }
                    any = true;
                }
                Some(b'+') | Some(b'-') | None => break,
                Some(_) => return Err(self.err("unexpected character")),
            }
        }
        if !any {
            return Err(self.err("expected factor"));
        }
        Ok(Word::from_parts(monomials, generators))
    }

    fn term(&mut self) -> Result<(Word, BigInt), RingError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let coeff = self.unsigned()?;
                self.skip_ws();
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    let w = self.factors()?;
                    Ok((w, coeff))
                } else {
                    Ok((Word::one(), coeff))
                }
            }
            Some(c) if c.is_ascii_alphabetic() => Ok((self.factors()?, BigInt::one())),
            _ => Err(self.err("expected term")),
        }
    }

    fn element(&mut self) -> Result<AlgebraElement, RingError> {
        let mut out = AlgebraElement::zero();
        self.skip_ws();
        let mut negative = false;
        if self.peek() == Some(b'-') {
            negative = true;
            self.pos += 1;
        }
        loop {
            let (w, c) = self.term()?;
            out.add_term(w, if negative { -c } else { c });
            self.skip_ws();
            match self.peek() {
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                None => break,
                Some(_) => return Err(self.err("expected '+' or '-'")),
            }
            self.pos += 1;
        }
        Ok(out)
    }
}

impl FromStr for AlgebraElement {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if !s.is_ascii() {
            let position = s
                .char_indices()
                .find(|(_, c)| !c.is_ascii())
                .map(|(i, _)| i)
                .unwrap_or(0);
            return Err(RingError::Syntax {
                position,
                message: "non-ascii input".into(),
            });
        }
        if s.trim() == "0" {
            return Ok(AlgebraElement::zero());
        }
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        p.element()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contractible_round_trip() {
        let x: AlgebraElement = "1 - u".parse().unwrap();
        assert_eq!(x, AlgebraElement::contractible());
        assert_eq!(x.to_string(), "1 - u");
    }

    #[test]
    fn dotted_word() {
        let x: AlgebraElement = "u.s_t.l^-1 u^-3".parse().unwrap();
        let w = Word::from_parts(
            vec![Monomial::MU, Monomial::new(-1, -3)],
            vec![Generator::new("s_t")],
        );
        assert_eq!(x, AlgebraElement::from_word(w));
        assert_eq!(x.to_string(), "u.s_t.l^-1 u^-3");
    }

    #[test]
    fn whitespace_separates_factors() {
        let a: AlgebraElement = "u s_t l^-1 u^-3".parse().unwrap();
        let b: AlgebraElement = "u.s_t.l^-1 u^-3".parse().unwrap();
        assert_eq!(a, b);
        let c: AlgebraElement = "2*u^2 s s - 3".parse().unwrap();
        assert_eq!(c.to_string(), "-3 + 2*u^2.s.s");
    }

    #[test]
    fn syntax_errors_carry_position() {
        match "1 - u^".parse::<AlgebraElement>() {
            Err(RingError::Syntax { position, .. }) => assert_eq!(position, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!("s ^2".parse::<AlgebraElement>().is_err());
        assert!("1 + + u".parse::<AlgebraElement>().is_err());
        assert!("s^2".parse::<AlgebraElement>().is_err());
        assert!("".parse::<AlgebraElement>().is_err());
    }

    #[test]
    fn zero() {
        assert!("0".parse::<AlgebraElement>().unwrap().is_zero());
        assert!("u - u".parse::<AlgebraElement>().unwrap().is_zero());
        assert_eq!(AlgebraElement::zero().to_string(), "0");
    }
}
