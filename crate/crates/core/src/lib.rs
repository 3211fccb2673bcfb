pub mod check;
pub mod config;
pub mod curve;
pub mod energy;
pub mod error;
pub mod flow;
pub mod framing;
pub mod genericity;
pub mod incidence;
pub mod pipeline;
pub mod ring;
pub mod simplify;
pub mod spec;
