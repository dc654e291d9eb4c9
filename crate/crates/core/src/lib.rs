//! Techno-economic engine, fine-tuning corpus builder, and evaluation harness
//! for residential energy-retrofit recommendation.

mod wire;

pub mod advisor;
pub mod corpus;
pub mod domain;
pub mod econ;
pub mod eval;
pub mod generation;
pub mod payload;
pub mod pipeline;
pub mod ranker;
pub mod seed;
pub mod synth;

pub use wire::UnknownName;
