//! Computational tools for alternating multilinear forms over prime fields,
//! box-shattering VC dimension of partite hypergraphs, and bounded type
//! counting under composition.

pub mod boxvc;
pub mod combinatorics;
pub mod conncomp;
pub mod error;
pub mod exterior;
pub mod ffla;
pub mod mform;
pub mod structure;
pub mod typecount;

pub use error::{Error, Result};
pub use exterior::WedgeVector;
pub use ffla::{FMatrix, FVector, Fp, Scalar};
pub use mform::AlternatingForm;
