//! Synthetic quantized models with Gaussian real weights.
//!
//! Gaussian weights quantized symmetrically put most mass on small integers,
//! which keeps the worst-case score bound, and hence the dlog table, small.

use qfe_core::quant::quantize_model;
use qfe_core::{QuadModel, Result};
use rand::Rng;
use rand_distr::StandardNormal;

/// Model with `inputs` raw inputs (plus bias), `hidden` units and `classes` outputs.
pub fn gaussian_model<R: Rng + ?Sized>(
    rng: &mut R,
    inputs: usize,
    hidden: usize,
    classes: usize,
    bits: u32,
    input_bits: u32,
) -> Result<QuadModel> {
    let mut normal = |len: usize| -> Vec<f64> { (0..len).map(|_| rng.sample(StandardNormal)).collect() };
    let p: Vec<Vec<f64>> = (0..hidden).map(|_| normal(inputs + 1)).collect();
    let d: Vec<Vec<f64>> = (0..classes).map(|_| normal(hidden)).collect();
    quantize_model(&p, &d, bits, input_bits)
}

/// A 28x28-style blob image: a bright ring on a dark background.
pub fn ring_image(side: usize) -> Vec<u8> {
    let c = (side as f64 - 1.0) / 2.0;
    let r = side as f64 * 0.3;
    (0..side * side)
        .map(|i| {
            let (y, x) = ((i / side) as f64, (i % side) as f64);
            let dist = ((x - c).powi(2) + (y - c).powi(2)).sqrt();
            let v = 255.0 * (1.0 - ((dist - r).abs() / 3.0)).max(0.0);
            v.round() as u8
        })
        .collect()
}
