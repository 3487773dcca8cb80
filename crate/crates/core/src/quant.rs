//! Weight and input quantization, and exact output bounds for dlog sizing.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::quadnet::QuadModel;

pub const DEFAULT_BITS: u32 = 4;
pub const DEFAULT_INPUT_BITS: u32 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct QuantMeta {
    /// Signed weight width.
    pub bits: u32,
    /// Unsigned input width; pixels are reduced from 8 bits to this.
    pub input_bits: u32,
    /// Multiplier mapping real projection weights to integers.
    pub scale_p: f64,
    pub scale_d: f64,
    /// `max |w|` of the real tensors before scaling.
    pub max_abs_p: f64,
    pub max_abs_d: f64,
}

impl QuantMeta {
    /// Metadata for a model whose weights were integers to begin with.
    pub fn integer(bits: u32, input_bits: u32) -> Self {
        QuantMeta {
            bits,
            input_bits,
            scale_p: 1.0,
            scale_d: 1.0,
            max_abs_p: 0.0,
            max_abs_d: 0.0,
        }
    }

    /// Inclusive signed weight range.
    pub fn weight_range(&self) -> (i64, i64) {
        weight_range(self.bits)
    }

    /// Largest quantized input value.
    pub fn input_max(&self) -> i64 {
        (1i64 << self.input_bits) - 1
    }
}

pub fn weight_range(bits: u32) -> (i64, i64) {
    (-(1i64 << (bits - 1)), (1i64 << (bits - 1)) - 1)
}

fn check_bits(bits: u32) -> Result<()> {
    if (2..=16).contains(&bits) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "weight bits must be in [2, 16], got {bits}"
        )))
    }
}

fn check_input_bits(bits: u32) -> Result<()> {
    if (1..=8).contains(&bits) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "input bits must be in [1, 8], got {bits}"
        )))
    }
}

/// Symmetric per-tensor quantization: `scale = (2^{bits-1} - 1) / max|w|`,
/// `q = round_half_even(w * scale)`. An all-zero tensor gets scale 1.
///
/// Returns `(values, scale, max|w|)`.
pub fn quantize_tensor(w: &[f64], bits: u32) -> Result<(Vec<i64>, f64, f64)> {
    check_bits(bits)?;
    if let Some(bad) = w.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite weight {bad}")));
    }
    let max_abs = w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let top = ((1i64 << (bits - 1)) - 1) as f64;
    let scale = if max_abs == 0.0 { 1.0 } else { top / max_abs };
    let q = w.iter().map(|v| (v * scale).round_ties_even() as i64).collect();
    Ok((q, scale, max_abs))
}

/// Quantizes a real projection `P` (`d x (n+1)`, column 0 is the bias) and
/// class diagonals `D_i` into an integer [`QuadModel`].
pub fn quantize_model(p_real: &[Vec<f64>], d_real: &[Vec<f64>], bits: u32, input_bits: u32) -> Result<QuadModel> {
    check_input_bits(input_bits)?;
    let cols = p_real.first().map_or(0, Vec::len);
    if p_real.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidParameter("ragged projection matrix".into()));
    }
    let hidden = p_real.len();
    if let Some(row) = d_real.iter().find(|r| r.len() != hidden) {
        return Err(Error::DimensionMismatch {
            what: "class diagonal",
            expected: hidden,
            found: row.len(),
        });
    }
    let (p_q, scale_p, max_abs_p) = quantize_tensor(&p_real.concat(), bits)?;
    let (d_q, scale_d, max_abs_d) = quantize_tensor(&d_real.concat(), bits)?;
    let p = IntMatrix::new(hidden, cols, p_q).expect("shape checked above");
    let diag = if hidden == 0 {
        vec![Vec::new(); d_real.len()]
    } else {
        d_q.chunks(hidden).map(<[i64]>::to_vec).collect()
    };
    let meta = QuantMeta {
        bits,
        input_bits,
        scale_p,
        scale_d,
        max_abs_p,
        max_abs_d,
    };
    QuadModel::new(p, diag, meta)
}

/// Reduces 8-bit pixels to `input_bits` levels by a right shift.
pub fn quantize_input(pixels: &[i64], input_bits: u32) -> Result<Vec<i64>> {
    check_input_bits(input_bits)?;
    pixels
        .iter()
        .enumerate()
        .map(|(index, &v)| {
            if (0..=255).contains(&v) {
                Ok(v >> (8 - input_bits))
            } else {
                Err(Error::OutOfBound {
                    what: "pixel",
                    index,
                    value: v,
                    bound: 255,
                })
            }
        })
        .collect()
}

/// Worst-case `|z_i|` over all inputs in `[0, input_max]^n`:
/// `max_i sum_k |D_ik| (sum_j |P_kj| xmax_j)^2` with `xmax_0 = 1` (bias).
pub fn score_bound(p: &IntMatrix, diag: &[Vec<i64>], input_max: i64) -> BigInt {
    let row_reach: Vec<BigInt> = (0..p.rows())
        .map(|k| {
            p.row(k)
                .iter()
                .enumerate()
                .map(|(j, &w)| {
                    let xmax = if j == 0 { 1 } else { input_max.unsigned_abs() };
                    BigInt::from(w.unsigned_abs()) * xmax
                })
                .sum()
        })
        .collect();
    diag.iter()
        .map(|d| {
            d.iter()
                .zip(&row_reach)
                .map(|(&dk, r)| BigInt::from(dk.unsigned_abs()) * r * r)
                .sum::<BigInt>()
        })
        .max()
        .unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn integer_weights_at_full_range_are_fixed_points() {
        for bits in [4u32, 8, 12] {
            let top = (1i64 << (bits - 1)) - 1;
            let w: Vec<f64> = vec![top as f64, -3.0, 0.0, 1.0, -(top as f64)];
            let (q, scale, _) = quantize_tensor(&w, bits).unwrap();
            assert_eq!(scale, 1.0);
            assert_eq!(q, vec![top, -3, 0, 1, -top]);
        }
    }

    #[test]
    fn unit_max_maps_to_seven_at_four_bits() {
        let (q, scale, max) = quantize_tensor(&[1.0, -0.5, 0.25], 4).unwrap();
        assert_eq!(max, 1.0);
        assert_eq!(scale, 7.0);
        assert_eq!(q[0], 7);
        // -3.5 rounds half to even.
        assert_eq!(q[1], -4);
        // 1.75 -> 2
        assert_eq!(q[2], 2);
    }

    #[test]
    fn all_zero_tensor_uses_unit_scale() {
        let (q, scale, _) = quantize_tensor(&[0.0; 5], 4).unwrap();
        assert_eq!(scale, 1.0);
        assert!(q.iter().all(|&v| v == 0));
    }

    #[test]
    fn dequantization_error_is_half_step() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        for bits in 2..=16 {
            let w: Vec<f64> = (0..500).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let (q, scale, _) = quantize_tensor(&w, bits).unwrap();
            let (lo, hi) = weight_range(bits);
            for (wi, qi) in w.iter().zip(&q) {
                assert!((lo..=hi).contains(qi));
                assert!((wi - *qi as f64 / scale).abs() <= 0.5 / scale + 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_bit_widths() {
        assert!(quantize_tensor(&[1.0], 1).is_err());
        assert!(quantize_tensor(&[1.0], 17).is_err());
        assert!(quantize_input(&[1], 0).is_err());
        assert!(quantize_tensor(&[f64::NAN], 4).is_err());
    }

    #[test]
    fn input_quantization() {
        assert_eq!(quantize_input(&[0, 255, 16, 15], 4).unwrap(), vec![0, 15, 1, 0]);
        assert!(matches!(
            quantize_input(&[0, 256], 4),
            Err(Error::OutOfBound {
                what: "pixel",
                index: 1,
                ..
            })
        ));
        assert!(quantize_input(&[-1], 4).is_err());
        let all: Vec<i64> = (0..=255).collect();
        for bits in 1..=8 {
            let q = quantize_input(&all, bits).unwrap();
            assert!(q.windows(2).all(|w| w[0] <= w[1]));
            assert_eq!(*q.last().unwrap(), (1 << bits) - 1);
        }
    }

    #[test]
    fn score_bound_closed_forms() {
        let zero = IntMatrix::zeros(2, 3);
        assert_eq!(score_bound(&zero, &[vec![0, 0]], 15), BigInt::zero());
        let p = IntMatrix::new(1, 2, vec![1, 1]).unwrap();
        assert_eq!(score_bound(&p, &[vec![1]], 15), BigInt::from(256));
        // max over classes, absolute values throughout
        let p = IntMatrix::new(2, 2, vec![1, -2, 0, 3]).unwrap();
        // reach = [1 + 2*15, 3*15] = [31, 45]
        assert_eq!(
            score_bound(&p, &[vec![1, 0], vec![0, -2]], 15),
            BigInt::from(2 * 45 * 45)
        );
    }

    #[test]
    fn quantize_model_shapes() {
        let p = vec![vec![0.1, -0.2, 0.3], vec![0.0, 0.5, -0.25]];
        let d = vec![vec![1.0, -1.0], vec![0.5, 0.5], vec![0.0, 2.0]];
        let m = quantize_model(&p, &d, 4, 4).unwrap();
        assert_eq!(m.hidden(), 2);
        assert_eq!(m.classes(), 3);
        assert_eq!(m.inputs(), 2);
        assert_eq!(m.p().get(1, 1), 7);
        assert_eq!(m.diag()[2][1], 7);
        assert!(quantize_model(&p, &[vec![1.0]], 4, 4).is_err());
    }
}
