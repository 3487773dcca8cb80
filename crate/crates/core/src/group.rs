//! Asymmetric (Type-3) bilinear group backend over BLS12-381.
//!
//! Group elements are written multiplicatively in the API (`g^s`, `a * b`)
//! even though the underlying arkworks types use additive notation.
//! Every exponentiation and pairing that goes through a [`GroupContext`] is
//! recorded in its [`OpCounter`], which is what the complexity tests read.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};

use ark_bls12_381::{Bls12_381, Fr, G1Projective, G2Projective};
use ark_ec::bls12::G2Prepared;
use ark_ec::pairing::{Pairing, PairingOutput};
use ark_ec::scalar_mul::glv::GLVConfig;
use ark_ec::{AdditiveGroup, CurveGroup, PrimeGroup};
use ark_ff::{BigInteger, Field, PrimeField, UniformRand};
use ark_serialize::{CanonicalDeserialize, CanonicalSerialize};
use num_bigint::{BigInt, BigUint, Sign};
use rand::{CryptoRng, RngCore};

use crate::error::GroupError;

/// Curve identifier embedded in key and ciphertext files.
pub const CURVE_ID: &str = "bls12-381";

/// Security levels (in bits) with a backing curve.
pub const SUPPORTED_SECURITY_LEVELS: &[u32] = &[128];

type Gt = PairingOutput<Bls12_381>;

/// Which of the three groups an element or counter refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupId {
    G1,
    G2,
    Gt,
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupId::G1 => f.write_str("G1"),
            GroupId::G2 => f.write_str("G2"),
            GroupId::Gt => f.write_str("GT"),
        }
    }
}

/// An element of `Z_p`, where `p` is the prime order shared by all three groups.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Scalar(pub(crate) Fr);

impl Scalar {
    pub const ENCODED_LEN: usize = 32;

    pub fn zero() -> Self {
        Scalar(Fr::ZERO)
    }

    pub fn one() -> Self {
        Scalar(Fr::ONE)
    }

    pub fn random<R: RngCore + CryptoRng + ?Sized>(rng: &mut R) -> Self {
        Scalar(Fr::rand(rng))
    }

    /// Embeds a signed integer as `z mod p`.
    pub fn from_i64(z: i64) -> Self {
        Scalar(Fr::from(z))
    }

    pub fn from_bigint(z: &BigInt) -> Self {
        let p = BigInt::from(order());
        let mut r = z % &p;
        if r.sign() == Sign::Minus {
            r += &p;
        }
        let (_, bytes) = r.to_bytes_le();
        Scalar(Fr::from_le_bytes_mod_order(&bytes))
    }

    /// Canonical representative in `[0, p)`.
    pub fn to_biguint(&self) -> BigUint {
        BigUint::from_bytes_le(&self.0.into_bigint().to_bytes_le())
    }

    /// Centered lift: the representative in `[-(p-1)/2, (p-1)/2]`.
    pub fn to_centered(&self) -> BigInt {
        let p = order();
        let v = self.to_biguint();
        if v > (&p >> 1) {
            BigInt::from(v) - BigInt::from(p)
        } else {
            BigInt::from(v)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0 == Fr::ZERO
    }

    pub fn inverse(&self) -> Option<Self> {
        self.0.inverse().map(Scalar)
    }

    pub fn to_bytes(&self) -> [u8; 32] {
        let mut out = [0u8; 32];
        self.0
            .serialize_compressed(&mut out[..])
            .expect("scalar encoding has fixed length");
        out
    }

    /// Decodes a little-endian scalar; rejects non-canonical values `>= p`.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, GroupError> {
        if bytes.len() != Self::ENCODED_LEN {
            return Err(GroupError::BadLength {
                what: "scalar",
                expected: Self::ENCODED_LEN,
                found: bytes.len(),
            });
        }
        Fr::deserialize_compressed(bytes)
            .map(Scalar)
            .map_err(|_| GroupError::InvalidEncoding("scalar"))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self.to_centered())
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 + rhs.0)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 - rhs.0)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 * rhs.0)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

/// The prime group order `p`.
pub fn order() -> BigUint {
    BigUint::from_bytes_le(&Fr::MODULUS.to_bytes_le())
}

/// Operations shared by the three group element types.
pub trait GroupElem: Clone + PartialEq + Eq + fmt::Debug + sealed::Sealed {
    const GROUP: GroupId;
    /// Length of the canonical compressed encoding.
    const ENCODED_LEN: usize;

    fn identity() -> Self;
    fn is_identity(&self) -> bool;
    /// The group law.
    fn op(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
    fn to_bytes(&self) -> Vec<u8>;
    fn from_bytes(bytes: &[u8]) -> Result<Self, GroupError>;
}

mod sealed {
    pub trait Sealed {
        type Inner: ark_ec::PrimeGroup;
        fn inner(&self) -> &Self::Inner;
        fn wrap(inner: Self::Inner) -> Self;
        fn scalar_mul(inner: &Self::Inner, s: &ark_bls12_381::Fr) -> Self::Inner {
            use ark_ec::PrimeGroup;
            use ark_ff::PrimeField;
            inner.mul_bigint(s.into_bigint())
        }
    }
}

use sealed::Sealed;

macro_rules! group_elem {
    ($name:ident, $inner:ty, $id:expr, $len:expr, $label:literal $(, $mul:path)?) => {
        #[derive(Clone, Copy, PartialEq, Eq)]
        pub struct $name(pub(crate) $inner);

        impl Sealed for $name {
            type Inner = $inner;
            fn inner(&self) -> &$inner {
                &self.0
            }
            fn wrap(inner: $inner) -> Self {
                $name(inner)
            }
            $(
                fn scalar_mul(inner: &$inner, s: &Fr) -> $inner {
                    $mul(*inner, *s)
                }
            )?
        }

        impl GroupElem for $name {
            const GROUP: GroupId = $id;
            const ENCODED_LEN: usize = $len;

            fn identity() -> Self {
                $name(<$inner>::ZERO)
            }

            fn is_identity(&self) -> bool {
                self.0 == <$inner>::ZERO
            }

            fn op(&self, other: &Self) -> Self {
                $name(self.0 + other.0)
            }

            fn inverse(&self) -> Self {
                $name(-self.0)
            }

            fn to_bytes(&self) -> Vec<u8> {
                let mut out = Vec::with_capacity($len);
                self.0
                    .serialize_compressed(&mut out)
                    .expect("writing to a Vec cannot fail");
                out
            }

            fn from_bytes(bytes: &[u8]) -> Result<Self, GroupError> {
                if bytes.len() != $len {
                    return Err(GroupError::BadLength {
                        what: $label,
                        expected: $len,
                        found: bytes.len(),
                    });
                }
                <$inner>::deserialize_compressed(bytes)
                    .map($name)
                    .map_err(|_| GroupError::InvalidEncoding($label))
            }
        }

        impl Mul for $name {
            type Output = $name;
            #[allow(clippy::suspicious_arithmetic_impl)]
            fn mul(self, rhs: $name) -> $name {
                $name(self.0 + rhs.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let bytes = self.to_bytes();
                write!(f, "{}(", stringify!($name))?;
                for b in &bytes[..8] {
                    write!(f, "{b:02x}")?;
                }
                f.write_str("..)")
            }
        }
    };
}

// G1 already routes scalar multiplication through the GLV endomorphism;
// G2 ships the GLV parameters but not the routing.
fn g2_glv_mul(p: G2Projective, s: Fr) -> G2Projective {
    <ark_bls12_381::g2::Config as GLVConfig>::glv_mul_projective(p, s)
}

group_elem!(G1Elem, G1Projective, GroupId::G1, 48, "G1 element");
group_elem!(G2Elem, G2Projective, GroupId::G2, 96, "G2 element", g2_glv_mul);
group_elem!(GtElem, Gt, GroupId::Gt, 576, "GT element");

/// Snapshot of operation counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub exp_g1: u64,
    pub exp_g2: u64,
    pub exp_gt: u64,
    pub pairings: u64,
}

impl OpCounts {
    pub fn exponentiations(&self) -> u64 {
        self.exp_g1 + self.exp_g2 + self.exp_gt
    }
}

impl Sub for OpCounts {
    type Output = OpCounts;
    fn sub(self, rhs: OpCounts) -> OpCounts {
        OpCounts {
            exp_g1: self.exp_g1 - rhs.exp_g1,
            exp_g2: self.exp_g2 - rhs.exp_g2,
            exp_gt: self.exp_gt - rhs.exp_gt,
            pairings: self.pairings - rhs.pairings,
        }
    }
}

/// Monotone counters of exponentiations (per group) and pairings.
#[derive(Debug, Default)]
pub struct OpCounter {
    exp_g1: AtomicU64,
    exp_g2: AtomicU64,
    exp_gt: AtomicU64,
    pairings: AtomicU64,
}

impl OpCounter {
    fn record_exp(&self, group: GroupId, n: u64) {
        let slot = match group {
            GroupId::G1 => &self.exp_g1,
            GroupId::G2 => &self.exp_g2,
            GroupId::Gt => &self.exp_gt,
        };
        slot.fetch_add(n, Ordering::Relaxed);
    }

    fn record_pairings(&self, n: u64) {
        self.pairings.fetch_add(n, Ordering::Relaxed);
    }

    pub fn snapshot(&self) -> OpCounts {
        OpCounts {
            exp_g1: self.exp_g1.load(Ordering::Relaxed),
            exp_g2: self.exp_g2.load(Ordering::Relaxed),
            exp_gt: self.exp_gt.load(Ordering::Relaxed),
            pairings: self.pairings.load(Ordering::Relaxed),
        }
    }

    pub fn reset(&self) {
        self.exp_g1.store(0, Ordering::Relaxed);
        self.exp_g2.store(0, Ordering::Relaxed);
        self.exp_gt.store(0, Ordering::Relaxed);
        self.pairings.store(0, Ordering::Relaxed);
    }
}

/// Bilinear group description: generators, order, pairing and the
/// instrumented operations. Immutable after setup apart from its counter.
#[derive(Debug)]
pub struct GroupContext {
    security_level: u32,
    g1: G1Elem,
    g2: G2Elem,
    gt: GtElem,
    counter: OpCounter,
}

impl GroupContext {
    pub fn setup(security_level: u32) -> Result<Self, GroupError> {
        if !SUPPORTED_SECURITY_LEVELS.contains(&security_level) {
            return Err(GroupError::UnsupportedSecurityLevel(security_level));
        }
        let g1 = G1Projective::generator();
        let g2 = G2Projective::generator();
        let gt = Bls12_381::pairing(g1, g2);
        Ok(GroupContext {
            security_level,
            g1: G1Elem(g1),
            g2: G2Elem(g2),
            gt: GtElem(gt),
            counter: OpCounter::default(),
        })
    }

    pub fn security_level(&self) -> u32 {
        self.security_level
    }

    pub fn curve_id(&self) -> &'static str {
        CURVE_ID
    }

    pub fn order(&self) -> BigUint {
        order()
    }

    pub fn g1(&self) -> G1Elem {
        self.g1
    }

    pub fn g2(&self) -> G2Elem {
        self.g2
    }

    /// `gT = e(g1, g2)`.
    pub fn gt(&self) -> GtElem {
        self.gt
    }

    pub fn counter(&self) -> &OpCounter {
        &self.counter
    }

    /// Runs `f` and returns the operations it performed on this context.
    pub fn measure<T>(&self, f: impl FnOnce() -> T) -> (T, OpCounts) {
        let before = self.counter.snapshot();
        let out = f();
        (out, self.counter.snapshot() - before)
    }

    /// `base^s`.
    pub fn exp<E: GroupElem>(&self, base: &E, s: &Scalar) -> E {
        self.counter.record_exp(E::GROUP, 1);
        E::wrap(E::scalar_mul(base.inner(), &s.0))
    }

    /// `base^k` for a small signed integer; costs `O(log |k|)` group operations.
    pub fn exp_small<E: GroupElem>(&self, base: &E, k: i64) -> E {
        self.counter.record_exp(E::GROUP, 1);
        E::wrap(small_mul(base.inner(), k))
    }

    /// `prod_i bases[i]^coeffs[i]` for small signed coefficients.
    ///
    /// Counts one exponentiation per nonzero coefficient.
    pub fn multi_exp_small<E: GroupElem>(&self, bases: &[E], coeffs: &[i64]) -> E {
        assert_eq!(bases.len(), coeffs.len(), "multi_exp_small length mismatch");
        self.counter.record_exp(E::GROUP, nonzero(coeffs));
        E::wrap(bucket_multi_exp(bases.iter().map(|b| *b.inner()), coeffs))
    }

    /// Multi-exponentiation over 2-vectors of elements: returns
    /// `(prod_i bases[i][0]^c_i, prod_i bases[i][1]^c_i)`. Raising a vector
    /// to a power counts as a single exponentiation.
    pub fn multi_exp_small_pairs<E: GroupElem>(&self, bases: &[[E; 2]], coeffs: &[i64]) -> [E; 2] {
        assert_eq!(bases.len(), coeffs.len(), "multi_exp_small_pairs length mismatch");
        self.counter.record_exp(E::GROUP, nonzero(coeffs));
        [0, 1].map(|c| E::wrap(bucket_multi_exp(bases.iter().map(|b| *b[c].inner()), coeffs)))
    }

    /// `e(a, b)`.
    pub fn pair(&self, a: &G1Elem, b: &G2Elem) -> GtElem {
        self.counter.record_pairings(1);
        GtElem(Bls12_381::pairing(a.0, b.0))
    }

    /// `prod_i e(a_i, b_i)`, sharing one final exponentiation. Counts one
    /// pairing per list entry.
    pub fn multi_pair(&self, pairs: &[(G1Elem, G2Elem)]) -> Result<GtElem, GroupError> {
        if pairs.is_empty() {
            return Err(GroupError::EmptyPairingList);
        }
        self.counter.record_pairings(pairs.len() as u64);
        let lhs: Vec<G1Projective> = pairs.iter().map(|(a, _)| a.0).collect();
        let rhs: Vec<G2Projective> = pairs.iter().map(|(_, b)| b.0).collect();
        let lhs = G1Projective::normalize_batch(&lhs);
        let rhs = G2Projective::normalize_batch(&rhs);
        Ok(GtElem(Bls12_381::multi_pairing(lhs, rhs)))
    }

    /// [`GroupContext::multi_pair`] for lists whose right-hand sides repeat:
    /// pair `k` is `e(pairs[k].0, rhs[pairs[k].1])`. Each `rhs` element is
    /// prepared for the Miller loop once. Counts one pairing per entry of
    /// `pairs`.
    pub(crate) fn multi_pair_indexed(&self, pairs: &[(G1Elem, usize)], rhs: &[G2Elem]) -> Result<GtElem, GroupError> {
        if pairs.is_empty() {
            return Err(GroupError::EmptyPairingList);
        }
        self.counter.record_pairings(pairs.len() as u64);
        let rhs: Vec<G2Projective> = rhs.iter().map(|b| b.0).collect();
        let prepared: Vec<G2Prepared<ark_bls12_381::Config>> = G2Projective::normalize_batch(&rhs)
            .into_iter()
            .map(Into::into)
            .collect();
        let lhs: Vec<G1Projective> = pairs.iter().map(|(a, _)| a.0).collect();
        let lhs = G1Projective::normalize_batch(&lhs);
        let ml = Bls12_381::multi_miller_loop(lhs, pairs.iter().map(|&(_, j)| prepared[j].clone()));
        let out = Bls12_381::final_exponentiation(ml).expect("Miller loop output is nonzero");
        Ok(GtElem(out))
    }
}

fn nonzero(coeffs: &[i64]) -> u64 {
    coeffs.iter().filter(|&&c| c != 0).count() as u64
}

/// Terms sharing a coefficient magnitude are summed first, then each
/// bucket is multiplied once by its (small) magnitude.
fn bucket_multi_exp<G: PrimeGroup>(bases: impl Iterator<Item = G>, coeffs: &[i64]) -> G {
    let mut buckets: HashMap<u64, G> = HashMap::new();
    for (b, &c) in bases.zip(coeffs) {
        if c == 0 {
            continue;
        }
        let v = if c < 0 { -b } else { b };
        *buckets.entry(c.unsigned_abs()).or_insert(G::ZERO) += v;
    }
    buckets
        .into_iter()
        .fold(G::ZERO, |acc, (mag, sum)| acc + sum.mul_bigint([mag]))
}

fn small_mul<G: PrimeGroup>(base: &G, k: i64) -> G {
    let r = base.mul_bigint([k.unsigned_abs()]);
    if k < 0 {
        -r
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn ctx() -> GroupContext {
        GroupContext::setup(128).unwrap()
    }

    #[test]
    fn setup_rejects_unsupported_levels() {
        assert!(matches!(
            GroupContext::setup(80),
            Err(GroupError::UnsupportedSecurityLevel(80))
        ));
        assert!(GroupContext::setup(256).is_err());
    }

    #[test]
    fn order_is_at_least_255_bits() {
        assert!(ctx().order().bits() >= 255);
    }

    #[test]
    fn generators_have_order_p() {
        let c = ctx();
        let p = Scalar::from_bigint(&BigInt::from(c.order()));
        assert!(p.is_zero());
        // p·g computed through the raw bigint path, not the reduced scalar.
        let p_limbs = Fr::MODULUS;
        assert!(c.g1().0.mul_bigint(p_limbs).is_zero());
        assert!(c.g2().0.mul_bigint(p_limbs).is_zero());
        assert!(c.gt().0.mul_bigint(p_limbs) == Gt::ZERO);
        assert!(!c.gt().is_identity());
    }

    #[test]
    fn generator_pairing_is_gt() {
        let c = ctx();
        assert_eq!(c.pair(&c.g1(), &c.g2()), c.gt());
    }

    #[test]
    fn g2_glv_matches_double_and_add() {
        let c = ctx();
        let mut rng = ChaCha20Rng::seed_from_u64(31);
        let mut scalars = vec![Scalar::zero(), Scalar::one(), Scalar::from_i64(-1), Scalar::from_i64(2)];
        scalars.extend((0..20).map(|_| Scalar::random(&mut rng)));
        let base = c.exp(&c.g2(), &Scalar::random(&mut rng));
        for s in scalars {
            let plain = G2Elem(base.0.mul_bigint(s.0.into_bigint()));
            assert_eq!(c.exp(&base, &s), plain);
        }
    }

    #[test]
    fn exp_edge_exponents() {
        let c = ctx();
        assert!(c.exp(&c.g1(), &Scalar::zero()).is_identity());
        assert_eq!(c.exp(&c.g1(), &Scalar::one()), c.g1());
        assert_eq!(c.exp_small(&c.g2(), 1), c.g2());
        assert_eq!(c.exp_small(&c.g1(), -3), c.exp(&c.g1(), &Scalar::from_i64(-3)));
    }

    #[test]
    fn gt_exponent_law() {
        let c = ctx();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..5 {
            let a = Scalar::random(&mut rng);
            let b = Scalar::random(&mut rng);
            let lhs = c.exp(&c.gt(), &a) * c.exp(&c.gt(), &b);
            assert_eq!(lhs, c.exp(&c.gt(), &(a + b)));
        }
    }

    #[test]
    fn small_exponent_bilinearity() {
        let c = ctx();
        let lhs = c.pair(&c.exp_small(&c.g1(), 2), &c.exp_small(&c.g2(), 3));
        assert_eq!(lhs, c.exp_small(&c.gt(), 6));
    }

    #[test]
    fn multi_pair_matches_product_of_pairings() {
        let c = ctx();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let s: Vec<Scalar> = (0..4).map(|_| Scalar::random(&mut rng)).collect();
        let p1 = (c.exp(&c.g1(), &s[0]), c.exp(&c.g2(), &s[1]));
        let p2 = (c.exp(&c.g1(), &s[2]), c.exp(&c.g2(), &s[3]));
        let prod = c.multi_pair(&[p1, p2]).unwrap();
        assert_eq!(prod, c.pair(&p1.0, &p1.1) * c.pair(&p2.0, &p2.1));
        assert_eq!(c.multi_pair(&[(c.g1(), c.g2())]).unwrap(), c.gt());
        assert!(matches!(c.multi_pair(&[]), Err(GroupError::EmptyPairingList)));
    }

    #[test]
    fn indexed_multi_pair_matches_plain() {
        let c = ctx();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let g1: Vec<G1Elem> = (0..5).map(|_| c.exp(&c.g1(), &Scalar::random(&mut rng))).collect();
        let mut rhs: Vec<G2Elem> = (0..3).map(|_| c.exp(&c.g2(), &Scalar::random(&mut rng))).collect();
        rhs.push(G2Elem::identity());
        let idx = [0usize, 2, 2, 1, 3];
        let indexed: Vec<(G1Elem, usize)> = g1.iter().copied().zip(idx).collect();
        let plain: Vec<(G1Elem, G2Elem)> = indexed.iter().map(|&(a, j)| (a, rhs[j])).collect();
        let (got, ops) = c.measure(|| c.multi_pair_indexed(&indexed, &rhs).unwrap());
        assert_eq!(got, c.multi_pair(&plain).unwrap());
        assert_eq!(ops.pairings, 5);
        assert!(c.multi_pair_indexed(&[], &rhs).is_err());
    }

    #[test]
    fn counter_tracks_operations() {
        let c = ctx();
        let (_, counts) = c.measure(|| {
            let a = c.exp(&c.g1(), &Scalar::from_i64(5));
            let b = c.exp_small(&c.g2(), 7);
            c.exp_small(&c.gt(), 2);
            c.pair(&a, &b);
            c.multi_pair(&[(a, b), (a, b), (a, b)]).unwrap();
            c.multi_exp_small(&[a, a, a], &[1, 0, -2]);
        });
        assert_eq!(
            counts,
            OpCounts {
                exp_g1: 3,
                exp_g2: 1,
                exp_gt: 1,
                pairings: 4
            }
        );
        c.counter().reset();
        assert_eq!(c.counter().snapshot(), OpCounts::default());
    }

    #[test]
    fn multi_exp_small_matches_naive() {
        let c = ctx();
        let bases: Vec<G1Elem> = (1..=6).map(|i| c.exp_small(&c.g1(), i * 11)).collect();
        let coeffs = [3, -3, 0, 7, 3, -1];
        let naive = bases
            .iter()
            .zip(coeffs)
            .fold(G1Elem::identity(), |acc, (b, k)| acc * c.exp_small(b, k));
        assert_eq!(c.multi_exp_small(&bases, &coeffs), naive);
    }

    #[test]
    fn centered_lift() {
        assert_eq!(Scalar::from_i64(-5).to_centered(), BigInt::from(-5));
        assert_eq!(Scalar::from_i64(42).to_centered(), BigInt::from(42));
        let half = BigInt::from(order() >> 1);
        assert_eq!(Scalar::from_bigint(&half).to_centered(), half);
        assert_eq!(Scalar::from_bigint(&(half.clone() + 1)).to_centered(), -half);
    }

    #[test]
    fn encodings_have_declared_lengths_and_reject_garbage() {
        let c = ctx();
        assert_eq!(c.g1().to_bytes().len(), G1Elem::ENCODED_LEN);
        assert_eq!(c.g2().to_bytes().len(), G2Elem::ENCODED_LEN);
        assert_eq!(c.gt().to_bytes().len(), GtElem::ENCODED_LEN);
        assert!(G1Elem::from_bytes(&[0xffu8; 48]).is_err());
        assert!(G1Elem::from_bytes(&[0u8; 47]).is_err());
        assert!(Scalar::from_bytes(&[0xffu8; 32]).is_err());
    }
}
