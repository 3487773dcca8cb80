//! Public-key functional encryption for bounded quadratic forms
//! `q(x, y) = sum_{i,j} q_ij x_i y_j`.
//!
//! A ciphertext for `(x, y)` is `(g1^gamma, {g1^{a_i}, g2^{b_i}})` with
//! `a_i = (W^-1)^T (x_i, gamma s_i)` and `b_i = W (y_i, -t_i)` for a fresh
//! `gamma` and invertible 2x2 matrix `W`. Since `a_i . b_j = x_i y_j -
//! gamma s_i t_j`, pairing the ciphertext against `g2^{q(s,t)}` leaves
//! `gT^{q(x,y)}`, whose small discrete log is the output.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{CryptoRng, RngCore};

use crate::dlog::DlogTable;
use crate::error::{Error, Result};
use crate::group::{G1Elem, G2Elem, GroupContext, GtElem, Scalar};

/// Functions `q: [-Bx,Bx]^n x [-By,By]^n -> Z` with coefficients in `[-Bq,Bq]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FunctionClass {
    pub n: usize,
    pub bx: u64,
    pub by: u64,
    pub bq: u64,
}

impl FunctionClass {
    pub fn new(n: usize, bx: u64, by: u64, bq: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("dimension n must be >= 1".into()));
        }
        if bx == 0 || by == 0 || bq == 0 {
            return Err(Error::InvalidParameter("bounds must be positive".into()));
        }
        let fc = FunctionClass { n, bx, by, bq };
        fc.check_decodable()?;
        Ok(fc)
    }

    /// Largest possible `|q(x, y)|` over the class: `n^2 Bq Bx By`.
    pub fn output_bound(&self) -> BigInt {
        let n = BigInt::from(self.n);
        &n * &n * BigInt::from(self.bq) * BigInt::from(self.bx) * BigInt::from(self.by)
    }

    fn check_decodable(&self) -> Result<()> {
        let half_p = BigInt::from(crate::group::order() >> 1);
        if self.output_bound() < half_p {
            Ok(())
        } else {
            Err(Error::Undecodable)
        }
    }
}

#[derive(Clone)]
pub struct MasterSecretKey {
    pub s: Vec<Scalar>,
    pub t: Vec<Scalar>,
}

impl MasterSecretKey {
    pub fn dim(&self) -> usize {
        self.s.len()
    }
}

impl fmt::Debug for MasterSecretKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MasterSecretKey {{ n: {}, .. }}", self.s.len())
    }
}

/// `(g1^s, g2^t)`. The group description lives in the [`GroupContext`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    pub g1_s: Vec<G1Elem>,
    pub g2_t: Vec<G2Elem>,
}

impl PublicKey {
    pub fn dim(&self) -> usize {
        self.g1_s.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    pub c_gamma: G1Elem,
    pub a: Vec<[G1Elem; 2]>,
    pub b: Vec<[G2Elem; 2]>,
}

impl Ciphertext {
    pub fn dim(&self) -> usize {
        self.a.len()
    }
}

/// Integer coefficient matrix `q_ij`, row-major, `n x n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    n: usize,
    coeffs: Vec<i64>,
}

impl QuadraticForm {
    pub fn new(n: usize, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != n * n {
            return Err(Error::DimensionMismatch {
                what: "quadratic form coefficients",
                expected: n * n,
                found: coeffs.len(),
            });
        }
        Ok(QuadraticForm { n, coeffs })
    }

    pub fn zero(n: usize) -> Self {
        QuadraticForm {
            n,
            coeffs: vec![0; n * n],
        }
    }

    pub fn diagonal(diag: &[i64]) -> Self {
        let n = diag.len();
        let mut q = Self::zero(n);
        for (i, &v) in diag.iter().enumerate() {
            q.coeffs[i * n + i] = v;
        }
        q
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.coeffs[i * self.n + j]
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn max_abs(&self) -> u64 {
        self.coeffs.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn nonzero_count(&self) -> usize {
        self.coeffs.iter().filter(|&&v| v != 0).count()
    }

    /// The diagonal, if every off-diagonal coefficient is zero.
    pub fn as_diagonal(&self) -> Option<Vec<i64>> {
        let n = self.n;
        let off_diag_zero = (0..n).all(|i| (0..n).all(|j| i == j || self.get(i, j) == 0));
        off_diag_zero.then(|| (0..n).map(|i| self.get(i, i)).collect())
    }

    /// `q(s, t) mod p`.
    pub fn eval_scalars(&self, s: &[Scalar], t: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (si, coeffs) in s.iter().zip(self.coeffs.chunks(self.n.max(1))) {
            let row = coeffs
                .iter()
                .zip(t)
                .filter(|(&c, _)| c != 0)
                .fold(Scalar::zero(), |r, (&c, tj)| r + Scalar::from_i64(c) * *tj);
            if !row.is_zero() {
                acc = acc + *si * row;
            }
        }
        acc
    }

    /// `q(x, y)` over the integers.
    pub fn eval(&self, x: &[i64], y: &[i64]) -> BigInt {
        let mut acc = BigInt::zero();
        for (xi, coeffs) in x.iter().zip(self.coeffs.chunks(self.n.max(1))) {
            for (&c, yj) in coeffs.iter().zip(y) {
                if c != 0 {
                    acc += BigInt::from(c) * *xi * *yj;
                }
            }
        }
        acc
    }
}

/// `(g2^{q(s,t)}, q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionalKey {
    pub k: G2Elem,
    pub form: QuadraticForm,
}

pub fn setup<R: RngCore + CryptoRng + ?Sized>(
    ctx: &GroupContext,
    fc: &FunctionClass,
    rng: &mut R,
) -> Result<(PublicKey, MasterSecretKey)> {
    fc.check_decodable()?;
    let s: Vec<Scalar> = (0..fc.n).map(|_| Scalar::random(rng)).collect();
    let t: Vec<Scalar> = (0..fc.n).map(|_| Scalar::random(rng)).collect();
    let pk = PublicKey {
        g1_s: s.iter().map(|si| ctx.exp(&ctx.g1(), si)).collect(),
        g2_t: t.iter().map(|ti| ctx.exp(&ctx.g2(), ti)).collect(),
    };
    Ok((pk, MasterSecretKey { s, t }))
}

fn check_bounded(what: &'static str, v: &[i64], bound: u64) -> Result<()> {
    match v.iter().position(|x| x.unsigned_abs() > bound) {
        Some(index) => Err(Error::OutOfBound {
            what,
            index,
            value: v[index],
            bound: bound.min(i64::MAX as u64) as i64,
        }),
        None => Ok(()),
    }
}

fn check_dim(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { what, expected, found })
    }
}

/// Samples an invertible 2x2 matrix by rejection.
fn sample_gl2<R: RngCore + CryptoRng + ?Sized>(rng: &mut R) -> ([Scalar; 4], Scalar) {
    loop {
        let w = [
            Scalar::random(rng),
            Scalar::random(rng),
            Scalar::random(rng),
            Scalar::random(rng),
        ];
        let det = w[0] * w[3] - w[1] * w[2];
        if let Some(inv) = det.inverse() {
            return (w, inv);
        }
    }
}

/// Encrypts `(x, y)` using only the public key.
pub fn encrypt<R: RngCore + CryptoRng + ?Sized>(
    ctx: &GroupContext,
    pk: &PublicKey,
    fc: &FunctionClass,
    x: &[i64],
    y: &[i64],
    rng: &mut R,
) -> Result<Ciphertext> {
    check_dim("public key", fc.n, pk.dim())?;
    check_dim("plaintext x", fc.n, x.len())?;
    check_dim("plaintext y", fc.n, y.len())?;
    check_bounded("x", x, fc.bx)?;
    check_bounded("y", y, fc.by)?;

    let gamma = Scalar::random(rng);
    let ([w11, w12, w21, w22], det_inv) = sample_gl2(rng);

    // a_i = (W^-1)^T (x_i, gamma s_i): the x_i part uses fixed bases raised
    // to small exponents, the s_i part is (g1^{s_i})^{coeff}.
    let h1 = ctx.exp(&ctx.g1(), &(w22 * det_inv));
    let h2 = ctx.exp(&ctx.g1(), &(-w12 * det_inv));
    let c1 = -w21 * gamma * det_inv;
    let c2 = w11 * gamma * det_inv;
    // b_i = W (y_i, -t_i)
    let k1 = ctx.exp(&ctx.g2(), &w11);
    let k2 = ctx.exp(&ctx.g2(), &w21);
    let d1 = -w12;
    let d2 = -w22;

    let a = (0..fc.n)
        .map(|i| {
            [
                ctx.exp_small(&h1, x[i]) * ctx.exp(&pk.g1_s[i], &c1),
                ctx.exp_small(&h2, x[i]) * ctx.exp(&pk.g1_s[i], &c2),
            ]
        })
        .collect();
    let b = (0..fc.n)
        .map(|i| {
            [
                ctx.exp_small(&k1, y[i]) * ctx.exp(&pk.g2_t[i], &d1),
                ctx.exp_small(&k2, y[i]) * ctx.exp(&pk.g2_t[i], &d2),
            ]
        })
        .collect();

    Ok(Ciphertext {
        c_gamma: ctx.exp(&ctx.g1(), &gamma),
        a,
        b,
    })
}

pub fn keygen(ctx: &GroupContext, msk: &MasterSecretKey, q: &QuadraticForm) -> Result<FunctionalKey> {
    check_dim("quadratic form", msk.dim(), q.dim())?;
    let e = q.eval_scalars(&msk.s, &msk.t);
    Ok(FunctionalKey {
        k: ctx.exp(&ctx.g2(), &e),
        form: q.clone(),
    })
}

/// Computes `gT^{q(x,y)}` without taking the discrete log. Uses
/// `2 * nnz(q) + 1` pairings; zero coefficients are skipped.
pub fn decrypt_to_gt(ctx: &GroupContext, ct: &Ciphertext, dk: &FunctionalKey) -> Result<GtElem> {
    let n = ct.dim();
    check_dim("functional key form", n, dk.form.dim())?;
    check_dim("ciphertext b-part", n, ct.b.len())?;
    // rhs[0] is the key, rhs[1 + 2j + c] is b_j[c].
    let mut rhs = Vec::with_capacity(2 * n + 1);
    rhs.push(dk.k);
    rhs.extend(ct.b.iter().flatten().copied());
    let mut pairs = Vec::with_capacity(2 * dk.form.nonzero_count() + 1);
    pairs.push((ct.c_gamma, 0));
    for i in 0..n {
        for j in 0..n {
            let q = dk.form.get(i, j);
            if q == 0 {
                continue;
            }
            for c in 0..2 {
                pairs.push((ctx.exp_small(&ct.a[i][c], q), 1 + 2 * j + c));
            }
        }
    }
    Ok(ctx.multi_pair_indexed(&pairs, &rhs)?)
}

/// Recovers `q(x, y)`; fails with [`Error::OutOfRange`] when the result is
/// not within the table's bound (wrong key, or an undersized table).
pub fn decrypt(ctx: &GroupContext, ct: &Ciphertext, dk: &FunctionalKey, table: &DlogTable) -> Result<i64> {
    let out = decrypt_to_gt(ctx, ct, dk)?;
    table.solve(&out)
}
