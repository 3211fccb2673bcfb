//! Exact arithmetic in the free noncommutative algebra over `Z[λ^±1, μ^±1]`
//! generated by index-0 cord labels.
//!
//! `λ` and `μ` commute with each other but not with the generators, so a
//! basis element is an alternating word `m0 g1 m1 ... gk mk`.

mod element;
mod monomial;
mod parse;
mod presentation;
mod word;

pub use element::AlgebraElement;
pub use monomial::Monomial;
pub use presentation::{
    framing_transform, reframe_element, GeneratorTwist, Presentation, RING_DESCRIPTOR,
};
pub use word::{Generator, Word};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("substitution target for {0} refers to {0}")]
    SelfReference(String),
    #[error("relation uses undeclared generator {0}")]
    UndeclaredGenerator(String),
}
