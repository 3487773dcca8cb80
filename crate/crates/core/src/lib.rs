//! Functional encryption for quadratic forms over BLS12-381, and encrypted
//! evaluation of the private quadratic layers of a neural network.
//!
//! The flow for one classifier:
//!
//! 1. quantize a real model to integers ([`quant::quantize_model`]);
//! 2. `setup` + [`quadnet::keygen_model`] on the model owner's side;
//! 3. the client encrypts its input with [`quadnet::encrypt_input`];
//! 4. the evaluator runs [`quadnet::infer_encrypted`] and sees only the
//!    class scores.

pub mod dlog;
pub mod error;
pub mod group;
pub mod io;
pub mod matrix;
pub mod project;
pub mod quadnet;
pub mod quant;
pub mod scheme;

pub use dlog::DlogTable;
pub use error::{Error, GroupError, Result};
pub use group::{G1Elem, G2Elem, GroupContext, GroupElem, GtElem, OpCounts, Scalar};
pub use matrix::IntMatrix;
pub use project::{ProjectedCiphertext, ProjectionPair};
pub use quadnet::{QuadModel, ScoreVector};
pub use quant::QuantMeta;
pub use scheme::{Ciphertext, FunctionClass, FunctionalKey, MasterSecretKey, PublicKey, QuadraticForm};
