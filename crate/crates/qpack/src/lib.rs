//! Bounds, constructions, and verification for subspace packings over
//! finite fields.

pub mod bounds;
pub mod constructions;
pub mod divisible;
pub mod engine;
pub mod field;
pub mod ilp;
pub mod qnum;
pub mod spaces;
