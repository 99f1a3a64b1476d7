//! Exact Fourier analysis of quadratic phase functions `(-1)^{q(x)}` over GF(2).

pub mod anf;
pub mod bounds;
pub mod dickson;
pub mod dyadic;
pub mod error;
pub mod gf2;
pub mod harness;
pub mod oracle;
pub mod spectrum;
pub mod walk;
pub mod weightcount;

pub use anf::{AnfPolynomial, QuadraticForm};
pub use dickson::{dickson_reduce, DicksonClass, DicksonForm, DicksonKind};
pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use gf2::{BitVector, GF2Matrix};
pub use harness::{Suite, SuiteReport, VerifyConfig};
pub use spectrum::{FourierCoefficient, SupportCoset, WeightHistogram};
pub use walk::WalkOptions;
