//! Support code for the `qfe` binary: exit-code mapping, image loading and
//! synthetic models for benchmarks and fixtures.

pub mod error;
pub mod image;
pub mod synth;
