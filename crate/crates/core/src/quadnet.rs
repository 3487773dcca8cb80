//! Encrypted evaluation of the private quadratic network
//! `z_i = (P x')^T D_i (P x')`, `x' = (1, x)`, with diagonal `D_i`.
//!
//! One ciphertext of `(x', x')` is projected by `(P, P)` once. The `d`
//! cross terms `e(g1^{a'_k}, g2^{b'_k})` are paired once (`2d` pairings) and
//! reused by every class, which only adds its own `e(g1^gamma, key_i)` and a
//! small-exponent product over the cached terms.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{CryptoRng, RngCore};

use crate::dlog::DlogTable;
use crate::error::{Error, Result};
use crate::group::{G1Elem, GroupContext, GtElem, Scalar};
use crate::matrix::IntMatrix;
use crate::project::{self, ProjectionPair};
use crate::quant::{self, QuantMeta};
use crate::scheme::{self, Ciphertext, FunctionClass, FunctionalKey, MasterSecretKey, PublicKey, QuadraticForm};

/// Default hidden width.
pub const DEFAULT_HIDDEN: usize = 40;
/// Default number of private outputs handed to the public head.
pub const DEFAULT_PRIVATE_OUTPUTS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadModel {
    p: IntMatrix,
    diag: Vec<Vec<i64>>,
    quant: QuantMeta,
    score_bound: BigInt,
}

impl QuadModel {
    /// Validates shapes and weight ranges and computes the worst-case score bound.
    pub fn new(p: IntMatrix, diag: Vec<Vec<i64>>, quant: QuantMeta) -> Result<Self> {
        let bound = quant::score_bound(&p, &diag, quant.input_max());
        Self::with_score_bound(p, diag, quant, bound)
    }

    /// Like [`QuadModel::new`] but keeps a stored bound, which must not be
    /// below the computed one.
    pub fn with_score_bound(p: IntMatrix, diag: Vec<Vec<i64>>, quant: QuantMeta, score_bound: BigInt) -> Result<Self> {
        if p.rows() == 0 {
            return Err(Error::InvalidParameter("hidden width d must be >= 1".into()));
        }
        if p.cols() < 2 {
            return Err(Error::InvalidParameter(
                "projection needs a bias column and at least one input".into(),
            ));
        }
        if diag.is_empty() {
            return Err(Error::InvalidParameter("model needs at least one class".into()));
        }
        if let Some(row) = diag.iter().find(|r| r.len() != p.rows()) {
            return Err(Error::DimensionMismatch {
                what: "class diagonal",
                expected: p.rows(),
                found: row.len(),
            });
        }
        let (lo, hi) = quant.weight_range();
        let bad = |what: &'static str, vals: &[i64]| {
            vals.iter()
                .position(|v| !(lo..=hi).contains(v))
                .map(|index| Error::OutOfBound {
                    what,
                    index,
                    value: vals[index],
                    bound: hi,
                })
        };
        if let Some(e) = bad("P", p.as_slice()) {
            return Err(e);
        }
        if let Some(e) = bad("diag", &diag.concat()) {
            return Err(e);
        }
        let computed = quant::score_bound(&p, &diag, quant.input_max());
        if score_bound < computed {
            return Err(Error::InvalidParameter(format!(
                "stored score bound {score_bound} below worst case {computed}"
            )));
        }
        Ok(QuadModel {
            p,
            diag,
            quant,
            score_bound,
        })
    }

    pub fn p(&self) -> &IntMatrix {
        &self.p
    }

    pub fn diag(&self) -> &[Vec<i64>] {
        &self.diag
    }

    pub fn quant(&self) -> &QuantMeta {
        &self.quant
    }

    pub fn score_bound(&self) -> &BigInt {
        &self.score_bound
    }

    /// The score bound as a dlog table bound.
    pub fn score_bound_u64(&self) -> Result<u64> {
        u64::try_from(&self.score_bound).map_err(|_| Error::BoundOverflow(self.score_bound.to_string()))
    }

    /// Number of raw inputs `n` (excluding the bias).
    pub fn inputs(&self) -> usize {
        self.p.cols() - 1
    }

    pub fn hidden(&self) -> usize {
        self.p.rows()
    }

    pub fn classes(&self) -> usize {
        self.diag.len()
    }

    /// Function class of the bias-augmented plaintext `(x', x')`.
    pub fn function_class(&self) -> Result<FunctionClass> {
        let xmax = self.quant.input_max().max(1) as u64;
        let maxp = self.p.max_abs();
        let maxd = self.diag.iter().flatten().map(|v| v.unsigned_abs()).max().unwrap_or(0);
        let bq = (self.hidden() as u64)
            .saturating_mul(maxd)
            .saturating_mul(maxp.saturating_mul(maxp))
            .max(1);
        FunctionClass::new(self.p.cols(), xmax, xmax, bq)
    }

    pub fn projection(&self) -> Result<ProjectionPair> {
        ProjectionPair::symmetric(self.p.clone())
    }
}

/// Cleartext private-network outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreVector(pub Vec<BigInt>);

impl ScoreVector {
    /// Smallest index attaining the maximum; `None` when empty.
    pub fn argmax(&self) -> Option<usize> {
        let mut best: Option<(usize, &BigInt)> = None;
        for (i, v) in self.0.iter().enumerate() {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((i, v));
            }
        }
        best.map(|(i, _)| i)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// One functional key per class, `g2^{sum_k D_ik (Ps)_k (Pt)_k}`.
pub fn keygen_model(ctx: &GroupContext, msk: &MasterSecretKey, model: &QuadModel) -> Result<Vec<FunctionalKey>> {
    if msk.dim() != model.p.cols() {
        return Err(Error::DimensionMismatch {
            what: "master key vs model input (incl. bias)",
            expected: model.p.cols(),
            found: msk.dim(),
        });
    }
    let ps = project::apply(&model.p, &msk.s);
    let pt = project::apply(&model.p, &msk.t);
    let cross: Vec<Scalar> = ps.iter().zip(&pt).map(|(a, b)| *a * *b).collect();
    Ok(model
        .diag
        .iter()
        .map(|d| {
            let e = d
                .iter()
                .zip(&cross)
                .filter(|(&c, _)| c != 0)
                .fold(Scalar::zero(), |acc, (&c, x)| acc + Scalar::from_i64(c) * *x);
            FunctionalKey {
                k: ctx.exp(&ctx.g2(), &e),
                form: QuadraticForm::diagonal(d),
            }
        })
        .collect())
}

/// Encrypts the bias-augmented input `x' = (1, x)` on both sides.
pub fn encrypt_input<R: RngCore + CryptoRng + ?Sized>(
    ctx: &GroupContext,
    pk: &PublicKey,
    fc: &FunctionClass,
    x: &[i64],
    rng: &mut R,
) -> Result<Ciphertext> {
    if x.len() + 1 != fc.n {
        return Err(Error::DimensionMismatch {
            what: "input (excluding bias)",
            expected: fc.n.saturating_sub(1),
            found: x.len(),
        });
    }
    if let Some(index) = x.iter().position(|&v| v < 0 || v.unsigned_abs() > fc.bx) {
        return Err(Error::OutOfBound {
            what: "input",
            index,
            value: x[index],
            bound: fc.bx as i64,
        });
    }
    let mut aug = Vec::with_capacity(fc.n);
    aug.push(1);
    aug.extend_from_slice(x);
    scheme::encrypt(ctx, pk, fc, &aug, &aug, rng)
}

/// The `d` cross-term pairings of a projected ciphertext.
#[derive(Debug, Clone)]
pub struct PairingCache {
    pub c_gamma: G1Elem,
    /// `e(g1^{a'_k}, g2^{b'_k}) = gT^{(Px')_k^2 - gamma (Ps)_k (Pt)_k}`
    pub cross_terms: Vec<GtElem>,
}

impl PairingCache {
    /// Exactly `2d` pairings.
    pub fn build(ctx: &GroupContext, projected: &Ciphertext) -> Result<Self> {
        let cross_terms = projected
            .a
            .iter()
            .zip(&projected.b)
            .map(|(a, b)| ctx.multi_pair(&[(a[0], b[0]), (a[1], b[1])]))
            .collect::<std::result::Result<_, _>>()?;
        Ok(PairingCache {
            c_gamma: projected.c_gamma,
            cross_terms,
        })
    }

    /// `gT^{z}` for one class: one pairing plus small exponentiations of the cache.
    pub fn class_target(&self, ctx: &GroupContext, key: &FunctionalKey, diag: &[i64]) -> Result<GtElem> {
        if diag.len() != self.cross_terms.len() {
            return Err(Error::DimensionMismatch {
                what: "class diagonal vs pairing cache",
                expected: self.cross_terms.len(),
                found: diag.len(),
            });
        }
        Ok(ctx.pair(&self.c_gamma, &key.k) * ctx.multi_exp_small(&self.cross_terms, diag))
    }
}

fn check_keys(model: &QuadModel, keys: &[FunctionalKey]) -> Result<()> {
    if keys.len() != model.classes() {
        return Err(Error::DimensionMismatch {
            what: "functional keys",
            expected: model.classes(),
            found: keys.len(),
        });
    }
    for (i, (key, d)) in keys.iter().zip(&model.diag).enumerate() {
        if key.form.as_diagonal().as_ref() != Some(d) {
            return Err(Error::KeyMismatch(i));
        }
    }
    Ok(())
}

/// Everything up to the discrete logs: projection, pairing cache, and one
/// `GT` target per class. Total pairings: `2d + classes`.
pub fn evaluate_encrypted(
    ctx: &GroupContext,
    ct: &Ciphertext,
    keys: &[FunctionalKey],
    model: &QuadModel,
) -> Result<Vec<GtElem>> {
    check_keys(model, keys)?;
    let fc = model.function_class()?;
    let projected = project::project(ctx, ct, &model.projection()?, &fc)?;
    let cache = PairingCache::build(ctx, &projected)?;
    keys.iter()
        .zip(&model.diag)
        .map(|(k, d)| cache.class_target(ctx, k, d))
        .collect()
}

pub fn infer_encrypted(
    ctx: &GroupContext,
    ct: &Ciphertext,
    keys: &[FunctionalKey],
    model: &QuadModel,
    table: &DlogTable,
) -> Result<ScoreVector> {
    if BigInt::from(table.bound()) < model.score_bound {
        return Err(Error::InvalidParameter(format!(
            "dlog table bound {} below model score bound {}",
            table.bound(),
            model.score_bound
        )));
    }
    let targets = evaluate_encrypted(ctx, ct, keys, model)?;
    solve_scores(table, &targets)
}

pub fn solve_scores(table: &DlogTable, targets: &[GtElem]) -> Result<ScoreVector> {
    targets
        .iter()
        .map(|t| table.solve(t).map(BigInt::from))
        .collect::<Result<Vec<_>>>()
        .map(ScoreVector)
}

/// Reference evaluation in exact integer arithmetic.
pub fn infer_plaintext_oracle(model: &QuadModel, x: &[i64]) -> ScoreVector {
    let hidden: Vec<BigInt> = (0..model.hidden())
        .map(|k| {
            let row = model.p.row(k);
            let mut acc = BigInt::from(row[0]);
            for (w, xi) in row[1..].iter().zip(x) {
                acc += BigInt::from(*w) * *xi;
            }
            acc
        })
        .collect();
    ScoreVector(
        model
            .diag
            .iter()
            .map(|d| {
                d.iter()
                    .zip(&hidden)
                    .fold(BigInt::zero(), |acc, (dk, h)| acc + BigInt::from(*dk) * h * h)
            })
            .collect(),
    )
}
