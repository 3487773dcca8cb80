//! Bounded discrete logarithm in `GT` by baby-step giant-step.
//!
//! The table depends only on the group and the bound, never on a ciphertext
//! or key, so one table serves every decryption against the same bound.
//! Targets are written `z = u + m*v` with `u in [0, m)`; giant steps walk `v`
//! outward from zero so small outputs resolve in a few steps.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::{GroupContext, GroupElem, GtElem};
use crate::io::FormatError;

/// Default memory cap for a table, overridable with `QFE_DLOG_CAP_MB`.
pub const DEFAULT_CAP_MB: u64 = 1024;

/// Estimated heap cost of one baby-step entry, hash map overhead included.
const BYTES_PER_ENTRY: u64 = 48;

const TABLE_MAGIC: &[u8; 4] = b"QDLT";
const TABLE_VERSION: u32 = 1;

/// 128-bit SHA-256 prefix of the canonical `GT` encoding.
pub type Fingerprint = [u8; 16];

pub fn fingerprint(e: &GtElem) -> Fingerprint {
    let digest = Sha256::digest(e.to_bytes());
    let mut out = [0u8; 16];
    out.copy_from_slice(&digest[..16]);
    out
}

/// Number of baby steps for a bound: `ceil(sqrt(2B + 1))`.
pub fn baby_step_count(bound: u64) -> u64 {
    let span = 2 * u128::from(bound) + 1;
    let mut m = (span as f64).sqrt() as u128;
    while m * m < span {
        m += 1;
    }
    while m > 1 && (m - 1) * (m - 1) >= span {
        m -= 1;
    }
    m as u64
}

/// Memory cap from `QFE_DLOG_CAP_MB`, falling back to [`DEFAULT_CAP_MB`].
pub fn cap_from_env() -> u64 {
    std::env::var("QFE_DLOG_CAP_MB")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CAP_MB)
}

#[derive(Debug, Clone)]
pub struct DlogTable {
    bound: u64,
    m: u64,
    baby_steps: HashMap<Fingerprint, u32>,
    /// `gT^{-m}`
    giant_step: GtElem,
}

impl DlogTable {
    /// Builds a table covering `[-bound, bound]` under [`DEFAULT_CAP_MB`].
    pub fn build(ctx: &GroupContext, bound: u64) -> Result<Self> {
        Self::build_with_cap(ctx, bound, DEFAULT_CAP_MB)
    }

    pub fn build_with_cap(ctx: &GroupContext, bound: u64, cap_mb: u64) -> Result<Self> {
        if bound > i64::MAX as u64 / 2 {
            return Err(Error::BoundOverflow(bound.to_string()));
        }
        let m = baby_step_count(bound);
        let needed = m * BYTES_PER_ENTRY;
        if needed > cap_mb.saturating_mul(1 << 20) || m > u64::from(u32::MAX) {
            return Err(Error::TableTooLarge {
                bound,
                needed_mb: needed.div_ceil(1 << 20),
                cap_mb,
            });
        }
        let gt = ctx.gt();
        let mut baby_steps = HashMap::with_capacity(m as usize);
        let mut cur = GtElem::identity();
        for u in 0..m {
            baby_steps.insert(fingerprint(&cur), u as u32);
            cur = cur * gt;
        }
        // cur == gT^m
        Ok(DlogTable {
            bound,
            m,
            baby_steps,
            giant_step: cur.inverse(),
        })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn baby_steps(&self) -> u64 {
        self.m
    }

    /// Returns `z in [-bound, bound]` with `gT^z == target`.
    pub fn solve(&self, target: &GtElem) -> Result<i64> {
        let m = self.m as i64;
        let bound = self.bound as i64;
        // v ranges over [v_min, v_max] so that u + m*v can reach [-B, B].
        let v_max = bound / m;
        let v_min = -((bound + m - 1) / m);
        let check = |acc: &GtElem, v: i64| -> Option<Result<i64>> {
            self.baby_steps.get(&fingerprint(acc)).map(|&u| {
                let z = i64::from(u) + m * v;
                if z.abs() <= bound {
                    Ok(z)
                } else {
                    Err(Error::OutOfRange { bound: self.bound })
                }
            })
        };

        let step_up = self.giant_step.inverse();
        let mut up = *target; // target * gT^{-m v}, v >= 0
        let mut down = *target * step_up; // target * gT^{m v'}, v = -v'
        let mut v = 0i64;
        loop {
            let mut progressed = false;
            if v <= v_max {
                if let Some(r) = check(&up, v) {
                    return r;
                }
                up = up * self.giant_step;
                progressed = true;
            }
            if -(v + 1) >= v_min {
                if let Some(r) = check(&down, -(v + 1)) {
                    return r;
                }
                down = down * step_up;
                progressed = true;
            }
            if !progressed {
                return Err(Error::OutOfRange { bound: self.bound });
            }
            v += 1;
        }
    }

    /// Writes `(bound, m, sorted fingerprint/value pairs)`.
    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let mut entries: Vec<_> = self.baby_steps.iter().collect();
        entries.sort_unstable();
        w.write_all(TABLE_MAGIC)?;
        w.write_all(&TABLE_VERSION.to_le_bytes())?;
        w.write_all(&self.bound.to_le_bytes())?;
        w.write_all(&self.m.to_le_bytes())?;
        for (k, v) in entries {
            w.write_all(k)?;
            w.write_all(&v.to_le_bytes())?;
        }
        w.flush()
    }

    pub fn read_from<R: Read>(ctx: &GroupContext, mut r: R) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        Self::from_bytes(ctx, &bytes)
    }

    pub fn from_bytes(ctx: &GroupContext, bytes: &[u8]) -> Result<Self> {
        let trunc = || FormatError::Truncated {
            section: "dlog table header".into(),
        };
        if bytes.len() < 24 {
            return Err(trunc().into());
        }
        if &bytes[..4] != TABLE_MAGIC {
            return Err(FormatError::BadMagic.into());
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        if version != TABLE_VERSION {
            return Err(FormatError::VersionMismatch {
                found: version,
                expected: TABLE_VERSION,
            }
            .into());
        }
        let bound = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
        let m = u64::from_le_bytes(bytes[16..24].try_into().unwrap());
        if m != baby_step_count(bound) {
            return Err(FormatError::Invalid {
                section: "dlog table header".into(),
                reason: format!("m = {m} does not match bound {bound}"),
            }
            .into());
        }
        let body = &bytes[24..];
        if body.len() as u64 != m * 20 {
            return Err(FormatError::Truncated {
                section: "dlog table entries".into(),
            }
            .into());
        }
        let mut baby_steps = HashMap::with_capacity(m as usize);
        let mut prev: Option<Fingerprint> = None;
        for chunk in body.chunks_exact(20) {
            let key: Fingerprint = chunk[..16].try_into().unwrap();
            if prev.is_some_and(|p| p >= key) {
                return Err(FormatError::Invalid {
                    section: "dlog table entries".into(),
                    reason: "entries not strictly sorted".into(),
                }
                .into());
            }
            prev = Some(key);
            baby_steps.insert(key, u32::from_le_bytes(chunk[16..].try_into().unwrap()));
        }
        // The fingerprints are curve specific; spot-check against this group.
        let gt = ctx.gt();
        if m > 1 && baby_steps.get(&fingerprint(&gt)) != Some(&1) {
            return Err(FormatError::Invalid {
                section: "dlog table entries".into(),
                reason: "table was not built for this group".into(),
            }
            .into());
        }
        let giant_step = ctx.exp_small(&gt, m as i64).inverse();
        Ok(DlogTable {
            bound,
            m,
            baby_steps,
            giant_step,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_to(std::io::BufWriter::new(f))?;
        Ok(())
    }

    pub fn load(ctx: &GroupContext, path: impl AsRef<Path>) -> Result<Self> {
        Self::from_bytes(ctx, &std::fs::read(path)?)
    }
}
