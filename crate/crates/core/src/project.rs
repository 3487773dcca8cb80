//! Linear homomorphism on ciphertexts: from `Enc(x, y)` compute
//! `Enc(Ux, Vy)` under the projected master key `(Us, Vt)`.
//!
//! Each output row is a small-coefficient multi-exponentiation of the input
//! ciphertext vectors; `gamma` and `W` carry over unchanged, so no secret is
//! involved.

use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::{GroupContext, GroupElem, Scalar};
use crate::matrix::IntMatrix;
use crate::scheme::{Ciphertext, FunctionClass, FunctionalKey, MasterSecretKey, QuadraticForm};

/// Projection matrices `U, V` of shape `d x n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionPair {
    u: IntMatrix,
    v: IntMatrix,
}

impl ProjectionPair {
    pub fn new(u: IntMatrix, v: IntMatrix) -> Result<Self> {
        if u.rows() != v.rows() || u.cols() != v.cols() {
            return Err(Error::InvalidParameter(format!(
                "projection shapes differ: U is {}x{}, V is {}x{}",
                u.rows(),
                u.cols(),
                v.rows(),
                v.cols()
            )));
        }
        if u.rows() == 0 || u.rows() > u.cols() {
            return Err(Error::InvalidParameter(format!(
                "projection needs 1 <= d <= n, got d = {}, n = {}",
                u.rows(),
                u.cols()
            )));
        }
        Ok(ProjectionPair { u, v })
    }

    /// The same matrix on both sides, as used for `(Px)^T D (Px)`.
    pub fn symmetric(p: IntMatrix) -> Result<Self> {
        Self::new(p.clone(), p)
    }

    pub fn u(&self) -> &IntMatrix {
        &self.u
    }

    pub fn v(&self) -> &IntMatrix {
        &self.v
    }

    /// Output dimension `d`.
    pub fn out_dim(&self) -> usize {
        self.u.rows()
    }

    /// Input dimension `n`.
    pub fn in_dim(&self) -> usize {
        self.u.cols()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectedCiphertext {
    pub ct: Ciphertext,
    /// SHA-256 over the source ciphertext's encodings.
    pub source_digest: [u8; 32],
    /// Plaintext bounds of `(Ux, Vy)`: `n * max|U| * Bx` and likewise for y.
    pub bx: u64,
    pub by: u64,
}

impl ProjectedCiphertext {
    /// Largest `|q(Ux, Vy)|` for a form with coefficients bounded by `bq`.
    pub fn output_bound(&self, bq: u64) -> BigInt {
        let d = BigInt::from(self.ct.dim());
        &d * &d * BigInt::from(bq) * BigInt::from(self.bx) * BigInt::from(self.by)
    }
}

impl std::ops::Deref for ProjectedCiphertext {
    type Target = Ciphertext;
    fn deref(&self) -> &Ciphertext {
        &self.ct
    }
}

fn digest(ct: &Ciphertext) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(ct.c_gamma.to_bytes());
    for pair in &ct.a {
        for e in pair {
            h.update(e.to_bytes());
        }
    }
    for pair in &ct.b {
        for e in pair {
            h.update(e.to_bytes());
        }
    }
    h.finalize().into()
}

/// Applies `(U, V)` to a ciphertext of dimension `n`, producing one of
/// dimension `d`.
///
/// Costs one `G1` and one `G2` (vector) exponentiation per nonzero entry of
/// `U` and `V` respectively, i.e. `2dn` for dense matrices.
pub fn project(
    ctx: &GroupContext,
    ct: &Ciphertext,
    proj: &ProjectionPair,
    fc: &FunctionClass,
) -> Result<ProjectedCiphertext> {
    let n = ct.dim();
    if proj.in_dim() != n || ct.b.len() != n || fc.n != n {
        return Err(Error::DimensionMismatch {
            what: "projection input",
            expected: n,
            found: proj.in_dim(),
        });
    }
    let d = proj.out_dim();
    let mut a = Vec::with_capacity(d);
    let mut b = Vec::with_capacity(d);
    for k in 0..d {
        a.push(ctx.multi_exp_small_pairs(&ct.a, proj.u.row(k)));
        b.push(ctx.multi_exp_small_pairs(&ct.b, proj.v.row(k)));
    }
    let scale = |m: &IntMatrix, bound: u64| -> u64 { (n as u64).saturating_mul(m.max_abs()).saturating_mul(bound) };
    Ok(ProjectedCiphertext {
        ct: Ciphertext {
            c_gamma: ct.c_gamma,
            a,
            b,
        },
        source_digest: digest(ct),
        bx: scale(&proj.u, fc.bx),
        by: scale(&proj.v, fc.by),
    })
}

/// Functional key for `q` applied to `(Ux, Vy)`: `g2^{q(Us, Vt)}`.
pub fn projected_keygen(
    ctx: &GroupContext,
    msk: &MasterSecretKey,
    proj: &ProjectionPair,
    q: &QuadraticForm,
) -> Result<FunctionalKey> {
    if proj.in_dim() != msk.dim() {
        return Err(Error::DimensionMismatch {
            what: "projection vs master key",
            expected: msk.dim(),
            found: proj.in_dim(),
        });
    }
    if q.dim() != proj.out_dim() {
        return Err(Error::DimensionMismatch {
            what: "projected form",
            expected: proj.out_dim(),
            found: q.dim(),
        });
    }
    let us = apply(&proj.u, &msk.s);
    let vt = apply(&proj.v, &msk.t);
    Ok(FunctionalKey {
        k: ctx.exp(&ctx.g2(), &q.eval_scalars(&us, &vt)),
        form: q.clone(),
    })
}

/// `M s` over `Z_p`.
pub(crate) fn apply(m: &IntMatrix, s: &[Scalar]) -> Vec<Scalar> {
    (0..m.rows())
        .map(|k| {
            m.row(k)
                .iter()
                .zip(s)
                .filter(|(&c, _)| c != 0)
                .fold(Scalar::zero(), |acc, (&c, si)| acc + Scalar::from_i64(c) * *si)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dlog::DlogTable;
    use crate::scheme::{decrypt, encrypt, setup};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn fixture() -> (GroupContext, FunctionClass, ChaCha20Rng) {
        let ctx = GroupContext::setup(128).unwrap();
        let fc = FunctionClass::new(3, 8, 8, 4).unwrap();
        (ctx, fc, ChaCha20Rng::seed_from_u64(77))
    }

    #[test]
    fn shape_validation() {
        let m23 = IntMatrix::zeros(2, 3);
        assert!(ProjectionPair::new(m23.clone(), IntMatrix::zeros(3, 3)).is_err());
        assert!(ProjectionPair::new(IntMatrix::zeros(0, 3), IntMatrix::zeros(0, 3)).is_err());
        assert!(ProjectionPair::new(IntMatrix::zeros(4, 3), IntMatrix::zeros(4, 3)).is_err());
        let p = ProjectionPair::symmetric(m23).unwrap();
        assert_eq!((p.out_dim(), p.in_dim()), (2, 3));
    }

    #[test]
    fn identity_projection_is_a_no_op() {
        let (ctx, fc, mut rng) = fixture();
        let (pk, _) = setup(&ctx, &fc, &mut rng).unwrap();
        let ct = encrypt(&ctx, &pk, &fc, &[1, -2, 3], &[4, 0, -5], &mut rng).unwrap();
        let proj = ProjectionPair::symmetric(IntMatrix::identity(3)).unwrap();
        let out = project(&ctx, &ct, &proj, &fc).unwrap();
        assert_eq!(out.ct, ct);
        assert_eq!(out.source_digest, digest(&ct));
        assert_eq!((out.bx, out.by), (3 * 8, 3 * 8));
    }

    #[test]
    fn zero_projection_gives_identity_elements() {
        let (ctx, fc, mut rng) = fixture();
        let (pk, _) = setup(&ctx, &fc, &mut rng).unwrap();
        let ct = encrypt(&ctx, &pk, &fc, &[1, 2, 3], &[1, 2, 3], &mut rng).unwrap();
        let proj = ProjectionPair::symmetric(IntMatrix::zeros(2, 3)).unwrap();
        let (out, ops) = ctx.measure(|| project(&ctx, &ct, &proj, &fc).unwrap());
        assert_eq!(ops.exponentiations(), 0);
        assert!(out.a.iter().flatten().all(GroupElem::is_identity));
        assert!(out.b.iter().flatten().all(GroupElem::is_identity));
    }

    #[test]
    fn rank_one_projection_decrypts_to_product_of_sums() {
        let (ctx, fc, mut rng) = fixture();
        let (pk, msk) = setup(&ctx, &fc, &mut rng).unwrap();
        let x = [2, -1, 3];
        let y = [1, 5, -2];
        let ct = encrypt(&ctx, &pk, &fc, &x, &y, &mut rng).unwrap();
        let proj = ProjectionPair::new(
            IntMatrix::new(1, 3, vec![1, 1, 1]).unwrap(),
            IntMatrix::new(1, 3, vec![1, -1, 2]).unwrap(),
        )
        .unwrap();
        let out = project(&ctx, &ct, &proj, &fc).unwrap();
        let dk = projected_keygen(&ctx, &msk, &proj, &QuadraticForm::diagonal(&[3])).unwrap();
        let table = DlogTable::build(&ctx, 1000).unwrap();
        // (2 - 1 + 3) * (1 - 5 - 4) * 3
        assert_eq!(decrypt(&ctx, &out, &dk, &table).unwrap(), 4 * -8 * 3);
    }

    #[test]
    fn dimension_errors() {
        let (ctx, fc, mut rng) = fixture();
        let (pk, msk) = setup(&ctx, &fc, &mut rng).unwrap();
        let ct = encrypt(&ctx, &pk, &fc, &[0, 0, 0], &[0, 0, 0], &mut rng).unwrap();
        let proj = ProjectionPair::symmetric(IntMatrix::zeros(2, 4)).unwrap();
        assert!(matches!(
            project(&ctx, &ct, &proj, &fc),
            Err(Error::DimensionMismatch { .. })
        ));
        let proj = ProjectionPair::symmetric(IntMatrix::zeros(2, 3)).unwrap();
        assert!(projected_keygen(&ctx, &msk, &proj, &QuadraticForm::zero(3)).is_err());
    }
}
