//! Versioned binary file formats for models, keys and ciphertexts.
//!
//! Every file is
//!
//! ```text
//! "QFE1" | version: u32 LE | meta_len: u32 LE | meta | section_count: u32 LE | sections
//! section := name_len: u8 | name | len: u64 LE | payload
//! ```
//!
//! `meta` is UTF-8 `key=value` lines sorted by key, so headers are readable
//! with `head -c`. Integer tensors are little-endian `i32` (model) or `i64`
//! (functional-key forms); group elements use their compressed encodings.
//! Encoding is canonical: decode followed by encode reproduces the input.
//!
//! Master secret key files are written unencrypted; protecting them is the
//! caller's job.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use thiserror::Error;

use crate::error::Result;
use crate::group::{G1Elem, G2Elem, GroupContext, GroupElem, Scalar};
use crate::matrix::IntMatrix;
use crate::quadnet::QuadModel;
use crate::quant::QuantMeta;
use crate::scheme::{Ciphertext, FunctionClass, FunctionalKey, MasterSecretKey, PublicKey, QuadraticForm};

pub const MAGIC: &[u8; 4] = b"QFE1";
pub const FORMAT_VERSION: u32 = 1;

pub const PK_FILE: &str = "pk.qfe";
pub const MSK_FILE: &str = "msk.qfe";

pub fn dk_file(class: usize) -> String {
    format!("dk_{class}.qfe")
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("bad magic: not a QFE1 file")]
    BadMagic,
    #[error("unsupported format version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("wrong file kind: expected {expected}, found {found}")]
    WrongKind { expected: String, found: String },
    #[error("curve mismatch: file uses {found}, runtime uses {expected}")]
    CurveMismatch { expected: String, found: String },
    #[error("truncated payload in section '{section}'")]
    Truncated { section: String },
    #[error("invalid section '{section}': {reason}")]
    Invalid { section: String, reason: String },
}

fn invalid(section: &str, reason: impl Into<String>) -> FormatError {
    FormatError::Invalid {
        section: section.to_string(),
        reason: reason.into(),
    }
}

struct Container {
    meta: BTreeMap<String, String>,
    sections: Vec<(String, Vec<u8>)>,
}

impl Container {
    fn new(kind: &str) -> Self {
        let mut meta = BTreeMap::new();
        meta.insert("kind".to_string(), kind.to_string());
        Container {
            meta,
            sections: Vec::new(),
        }
    }

    fn set(&mut self, key: &str, value: impl ToString) {
        self.meta.insert(key.to_string(), value.to_string());
    }

    fn push(&mut self, name: &str, payload: Vec<u8>) {
        self.sections.push((name.to_string(), payload));
    }

    fn encode(&self) -> Vec<u8> {
        let meta: String = self.meta.iter().map(|(k, v)| format!("{k}={v}\n")).collect();
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&(meta.len() as u32).to_le_bytes());
        out.extend_from_slice(meta.as_bytes());
        out.extend_from_slice(&(self.sections.len() as u32).to_le_bytes());
        for (name, payload) in &self.sections {
            out.push(name.len() as u8);
            out.extend_from_slice(name.as_bytes());
            out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
            out.extend_from_slice(payload);
        }
        out
    }

    fn decode(bytes: &[u8], expected_kind: &str) -> Result<Self, FormatError> {
        let mut r = Reader { bytes, pos: 0 };
        if bytes.len() < 4 || &bytes[..4] != MAGIC {
            return Err(FormatError::BadMagic);
        }
        r.pos = 4;
        let version = r.u32("header")?;
        if version != FORMAT_VERSION {
            return Err(FormatError::VersionMismatch {
                found: version,
                expected: FORMAT_VERSION,
            });
        }
        let meta_len = r.u32("meta")? as usize;
        let meta_text = std::str::from_utf8(r.take(meta_len, "meta")?).map_err(|_| invalid("meta", "not UTF-8"))?;
        let mut meta = BTreeMap::new();
        for line in meta_text.lines() {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| invalid("meta", format!("malformed line '{line}'")))?;
            meta.insert(k.to_string(), v.to_string());
        }
        let kind = meta.get("kind").cloned().unwrap_or_default();
        if kind != expected_kind {
            return Err(FormatError::WrongKind {
                expected: expected_kind.to_string(),
                found: kind,
            });
        }
        let count = r.u32("section table")?;
        let mut sections = Vec::new();
        for _ in 0..count {
            let name_len = r.take(1, "section table")?[0] as usize;
            let name = String::from_utf8(r.take(name_len, "section table")?.to_vec())
                .map_err(|_| invalid("section table", "section name not UTF-8"))?;
            let len = r.u64(&name)?;
            let len = usize::try_from(len).map_err(|_| FormatError::Truncated { section: name.clone() })?;
            let payload = r.take(len, &name)?.to_vec();
            sections.push((name, payload));
        }
        if r.pos != bytes.len() {
            return Err(invalid(
                "trailer",
                format!("{} unexpected trailing bytes", bytes.len() - r.pos),
            ));
        }
        Ok(Container { meta, sections })
    }

    fn get(&self, key: &str) -> Result<&str, FormatError> {
        self.meta
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| invalid("meta", format!("missing field '{key}'")))
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<T, FormatError> {
        self.get(key)?
            .parse()
            .map_err(|_| invalid("meta", format!("field '{key}' is not a valid value")))
    }

    fn section(&self, name: &str) -> Result<&[u8], FormatError> {
        self.sections
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, p)| p.as_slice())
            .ok_or_else(|| FormatError::Truncated {
                section: name.to_string(),
            })
    }

    fn check_curve(&self, ctx: &GroupContext) -> Result<(), FormatError> {
        let found = self.get("curve")?;
        if found != ctx.curve_id() {
            return Err(FormatError::CurveMismatch {
                expected: ctx.curve_id().to_string(),
                found: found.to_string(),
            });
        }
        Ok(())
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, section: &str) -> Result<&'a [u8], FormatError> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| FormatError::Truncated {
                section: section.to_string(),
            })?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self, section: &str) -> Result<u32, FormatError> {
        Ok(u32::from_le_bytes(self.take(4, section)?.try_into().unwrap()))
    }

    fn u64(&mut self, section: &str) -> Result<u64, FormatError> {
        Ok(u64::from_le_bytes(self.take(8, section)?.try_into().unwrap()))
    }
}

fn exact_len(section: &str, payload: &[u8], expected: usize) -> Result<(), FormatError> {
    if payload.len() < expected {
        Err(FormatError::Truncated {
            section: section.to_string(),
        })
    } else if payload.len() > expected {
        Err(invalid(
            section,
            format!("expected {expected} bytes, found {}", payload.len()),
        ))
    } else {
        Ok(())
    }
}

fn i32s(vals: &[i64]) -> Vec<u8> {
    vals.iter().flat_map(|&v| (v as i32).to_le_bytes()).collect()
}

fn read_i32s(section: &str, payload: &[u8], count: usize) -> Result<Vec<i64>, FormatError> {
    exact_len(section, payload, count * 4)?;
    Ok(payload
        .chunks_exact(4)
        .map(|c| i64::from(i32::from_le_bytes(c.try_into().unwrap())))
        .collect())
}

fn elems<E: GroupElem>(items: impl IntoIterator<Item = E>) -> Vec<u8> {
    items.into_iter().flat_map(|e| e.to_bytes()).collect()
}

fn read_elems<E: GroupElem>(section: &str, payload: &[u8], count: usize) -> Result<Vec<E>, FormatError> {
    exact_len(section, payload, count * E::ENCODED_LEN)?;
    payload
        .chunks_exact(E::ENCODED_LEN)
        .map(|c| E::from_bytes(c).map_err(|e| invalid(section, e.to_string())))
        .collect()
}

fn read_scalars(section: &str, payload: &[u8], count: usize) -> Result<Vec<Scalar>, FormatError> {
    exact_len(section, payload, count * Scalar::ENCODED_LEN)?;
    payload
        .chunks_exact(Scalar::ENCODED_LEN)
        .map(|c| Scalar::from_bytes(c).map_err(|e| invalid(section, e.to_string())))
        .collect()
}

fn finite(section: &str, v: f64) -> Result<f64, FormatError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(section, "non-finite value"))
    }
}

/// Layer sizes and float weights of the plaintext head applied to the
/// decrypted scores. Only carried through; never evaluated here.
#[derive(Debug, Clone, PartialEq)]
pub struct PublicHead {
    /// `[classes, hidden.., outputs]`
    pub layers: Vec<usize>,
    /// Per layer: weight matrix (`out x in`, row-major) then bias.
    pub weights: Vec<f32>,
}

impl PublicHead {
    pub fn expected_weights(layers: &[usize]) -> usize {
        layers.windows(2).map(|w| (w[0] + 1) * w[1]).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile {
    pub model: QuadModel,
    pub head: Option<PublicHead>,
}

pub fn encode_model(file: &ModelFile) -> Vec<u8> {
    let m = &file.model;
    let q = m.quant();
    let mut c = Container::new("model");
    c.set("n", m.inputs());
    c.set("d", m.hidden());
    c.set("classes", m.classes());
    c.set("bits", q.bits);
    c.set("input_bits", q.input_bits);
    c.set("scale_p", q.scale_p);
    c.set("scale_d", q.scale_d);
    c.set("max_abs_p", q.max_abs_p);
    c.set("max_abs_d", q.max_abs_d);
    c.set("score_bound", m.score_bound());
    c.push("P", i32s(m.p().as_slice()));
    c.push("diag", i32s(&m.diag().concat()));
    if let Some(head) = &file.head {
        let layers: Vec<String> = head.layers.iter().map(ToString::to_string).collect();
        c.set("head_layers", layers.join(","));
        c.push("head", head.weights.iter().flat_map(|w| w.to_le_bytes()).collect());
    }
    c.encode()
}

pub fn decode_model(bytes: &[u8]) -> Result<ModelFile, FormatError> {
    let c = Container::decode(bytes, "model")?;
    let n: usize = c.parse("n")?;
    let d: usize = c.parse("d")?;
    let classes: usize = c.parse("classes")?;
    let bits: u32 = c.parse("bits")?;
    let input_bits: u32 = c.parse("input_bits")?;
    if !(2..=16).contains(&bits) || !(1..=8).contains(&input_bits) {
        return Err(invalid("meta", "bit widths out of range"));
    }
    let quant = QuantMeta {
        bits,
        input_bits,
        scale_p: finite("meta", c.parse("scale_p")?)?,
        scale_d: finite("meta", c.parse("scale_d")?)?,
        max_abs_p: finite("meta", c.parse("max_abs_p")?)?,
        max_abs_d: finite("meta", c.parse("max_abs_d")?)?,
    };
    let score_bound: BigInt = c.parse("score_bound")?;
    let cols = n.checked_add(1).ok_or_else(|| invalid("meta", "n too large"))?;
    let p_len = d
        .checked_mul(cols)
        .ok_or_else(|| invalid("meta", "dimensions too large"))?;
    let diag_len = classes
        .checked_mul(d)
        .ok_or_else(|| invalid("meta", "dimensions too large"))?;
    let p_vals = read_i32s("P", c.section("P")?, p_len)?;
    let diag_vals = read_i32s("diag", c.section("diag")?, diag_len)?;
    let p = IntMatrix::new(d, cols, p_vals).expect("length checked");
    let diag: Vec<Vec<i64>> = if d == 0 {
        vec![Vec::new(); classes]
    } else {
        diag_vals.chunks(d).map(<[i64]>::to_vec).collect()
    };

    let (lo, hi) = quant.weight_range();
    if let Some(v) = p.as_slice().iter().find(|v| !(lo..=hi).contains(*v)) {
        return Err(invalid("P", format!("weight {v} outside {bits}-bit range")));
    }
    if let Some(v) = diag.iter().flatten().find(|v| !(lo..=hi).contains(*v)) {
        return Err(invalid("diag", format!("weight {v} outside {bits}-bit range")));
    }
    let model =
        QuadModel::with_score_bound(p, diag, quant, score_bound).map_err(|e| invalid("model", e.to_string()))?;

    let head = match c.meta.get("head_layers") {
        None => {
            if c.sections.iter().any(|(n, _)| n == "head") {
                return Err(invalid("head", "head weights without head_layers"));
            }
            None
        }
        Some(list) => {
            let layers: Vec<usize> = list
                .split(',')
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| invalid("meta", "malformed head_layers"))?;
            if layers.len() < 2 || layers[0] != classes {
                return Err(invalid(
                    "head",
                    "head must start at the class count and have an output layer",
                ));
            }
            let count = PublicHead::expected_weights(&layers);
            let payload = c.section("head")?;
            exact_len("head", payload, count * 4)?;
            let weights: Vec<f32> = payload
                .chunks_exact(4)
                .map(|ch| f32::from_le_bytes(ch.try_into().unwrap()))
                .collect();
            Some(PublicHead { layers, weights })
        }
    };
    let expected_sections = if head.is_some() { 3 } else { 2 };
    if c.sections.len() != expected_sections {
        return Err(invalid("section table", "unexpected sections"));
    }
    Ok(ModelFile { model, head })
}

/// A public key together with the function class it was issued for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKeyFile {
    pub pk: PublicKey,
    pub fc: FunctionClass,
    /// Input quantization width the encryptor must apply.
    pub input_bits: u32,
}

pub fn encode_public_key(ctx: &GroupContext, file: &PublicKeyFile) -> Vec<u8> {
    let mut c = Container::new("pk");
    c.set("curve", ctx.curve_id());
    c.set("n", file.fc.n);
    c.set("bx", file.fc.bx);
    c.set("by", file.fc.by);
    c.set("bq", file.fc.bq);
    c.set("input_bits", file.input_bits);
    c.push("g1_s", elems(file.pk.g1_s.iter().copied()));
    c.push("g2_t", elems(file.pk.g2_t.iter().copied()));
    c.encode()
}

pub fn decode_public_key(ctx: &GroupContext, bytes: &[u8]) -> Result<PublicKeyFile, FormatError> {
    let c = Container::decode(bytes, "pk")?;
    c.check_curve(ctx)?;
    let n: usize = c.parse("n")?;
    let fc = FunctionClass::new(n, c.parse("bx")?, c.parse("by")?, c.parse("bq")?)
        .map_err(|e| invalid("meta", e.to_string()))?;
    let pk = PublicKey {
        g1_s: read_elems("g1_s", c.section("g1_s")?, n)?,
        g2_t: read_elems("g2_t", c.section("g2_t")?, n)?,
    };
    Ok(PublicKeyFile {
        pk,
        fc,
        input_bits: c.parse("input_bits")?,
    })
}

pub fn encode_master_key(ctx: &GroupContext, msk: &MasterSecretKey) -> Vec<u8> {
    let mut c = Container::new("msk");
    c.set("curve", ctx.curve_id());
    c.set("n", msk.dim());
    c.push("s", msk.s.iter().flat_map(Scalar::to_bytes).collect());
    c.push("t", msk.t.iter().flat_map(Scalar::to_bytes).collect());
    c.encode()
}

pub fn decode_master_key(ctx: &GroupContext, bytes: &[u8]) -> Result<MasterSecretKey, FormatError> {
    let c = Container::decode(bytes, "msk")?;
    c.check_curve(ctx)?;
    let n: usize = c.parse("n")?;
    Ok(MasterSecretKey {
        s: read_scalars("s", c.section("s")?, n)?,
        t: read_scalars("t", c.section("t")?, n)?,
    })
}

pub fn encode_functional_key(ctx: &GroupContext, dk: &FunctionalKey, class: Option<usize>) -> Vec<u8> {
    let mut c = Container::new("dk");
    c.set("curve", ctx.curve_id());
    c.set("n", dk.form.dim());
    if let Some(i) = class {
        c.set("class", i);
    }
    c.push("k", dk.k.to_bytes());
    c.push("form", dk.form.coeffs().iter().flat_map(|v| v.to_le_bytes()).collect());
    c.encode()
}

pub fn decode_functional_key(ctx: &GroupContext, bytes: &[u8]) -> Result<(FunctionalKey, Option<usize>), FormatError> {
    let c = Container::decode(bytes, "dk")?;
    c.check_curve(ctx)?;
    let n: usize = c.parse("n")?;
    let k = read_elems::<G2Elem>("k", c.section("k")?, 1)?.remove(0);
    let payload = c.section("form")?;
    let count = n.checked_mul(n).ok_or_else(|| invalid("meta", "n too large"))?;
    exact_len("form", payload, count * 8)?;
    let coeffs = payload
        .chunks_exact(8)
        .map(|ch| i64::from_le_bytes(ch.try_into().unwrap()))
        .collect();
    let form = QuadraticForm::new(n, coeffs).map_err(|e| invalid("form", e.to_string()))?;
    let class = match c.meta.get("class") {
        Some(_) => Some(c.parse("class")?),
        None => None,
    };
    Ok((FunctionalKey { k, form }, class))
}

pub fn encode_ciphertext(ctx: &GroupContext, ct: &Ciphertext) -> Vec<u8> {
    let mut c = Container::new("ct");
    c.set("curve", ctx.curve_id());
    c.set("n", ct.dim());
    c.push("c_gamma", ct.c_gamma.to_bytes());
    c.push("a", elems(ct.a.iter().flatten().copied()));
    c.push("b", elems(ct.b.iter().flatten().copied()));
    c.encode()
}

pub fn decode_ciphertext(ctx: &GroupContext, bytes: &[u8]) -> Result<Ciphertext, FormatError> {
    let c = Container::decode(bytes, "ct")?;
    c.check_curve(ctx)?;
    let n: usize = c.parse("n")?;
    let c_gamma = read_elems::<G1Elem>("c_gamma", c.section("c_gamma")?, 1)?.remove(0);
    let a = read_elems::<G1Elem>("a", c.section("a")?, 2 * n)?;
    let b = read_elems::<G2Elem>("b", c.section("b")?, 2 * n)?;
    Ok(Ciphertext {
        c_gamma,
        a: a.chunks_exact(2).map(|p| [p[0], p[1]]).collect(),
        b: b.chunks_exact(2).map(|p| [p[0], p[1]]).collect(),
    })
}

pub fn save_model(path: impl AsRef<Path>, file: &ModelFile) -> Result<()> {
    Ok(fs::write(path, encode_model(file))?)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<ModelFile> {
    Ok(decode_model(&fs::read(path)?)?)
}

pub fn save_ct(ctx: &GroupContext, path: impl AsRef<Path>, ct: &Ciphertext) -> Result<()> {
    Ok(fs::write(path, encode_ciphertext(ctx, ct))?)
}

pub fn load_ct(ctx: &GroupContext, path: impl AsRef<Path>) -> Result<Ciphertext> {
    Ok(decode_ciphertext(ctx, &fs::read(path)?)?)
}

pub fn save_public_key(ctx: &GroupContext, path: impl AsRef<Path>, file: &PublicKeyFile) -> Result<()> {
    Ok(fs::write(path, encode_public_key(ctx, file))?)
}

pub fn load_public_key(ctx: &GroupContext, path: impl AsRef<Path>) -> Result<PublicKeyFile> {
    Ok(decode_public_key(ctx, &fs::read(path)?)?)
}

pub fn save_master_key(ctx: &GroupContext, path: impl AsRef<Path>, msk: &MasterSecretKey) -> Result<()> {
    Ok(fs::write(path, encode_master_key(ctx, msk))?)
}

pub fn load_master_key(ctx: &GroupContext, path: impl AsRef<Path>) -> Result<MasterSecretKey> {
    Ok(decode_master_key(ctx, &fs::read(path)?)?)
}

/// Writes `dk_<i>.qfe` for each key into `dir`; returns the written paths.
pub fn save_functional_keys(ctx: &GroupContext, dir: impl AsRef<Path>, keys: &[FunctionalKey]) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    keys.iter()
        .enumerate()
        .map(|(i, k)| {
            let path = dir.join(dk_file(i));
            fs::write(&path, encode_functional_key(ctx, k, Some(i)))?;
            Ok(path)
        })
        .collect()
}

/// Reads `dk_0.qfe, dk_1.qfe, ...` from `dir` until the first missing index.
pub fn load_functional_keys(ctx: &GroupContext, dir: impl AsRef<Path>) -> Result<Vec<FunctionalKey>> {
    let dir = dir.as_ref();
    let mut keys = Vec::new();
    loop {
        let path = dir.join(dk_file(keys.len()));
        if !path.exists() {
            break;
        }
        let (key, class) = decode_functional_key(ctx, &fs::read(&path)?)?;
        if class.is_some_and(|c| c != keys.len()) {
            return Err(invalid("meta", format!("{} carries class {:?}", path.display(), class)).into());
        }
        keys.push(key);
    }
    Ok(keys)
}

/// Writes `pk.qfe`, `msk.qfe` and one `dk_<i>.qfe` per key.
pub fn save_keys(
    ctx: &GroupContext,
    dir: impl AsRef<Path>,
    pk: &PublicKeyFile,
    msk: &MasterSecretKey,
    keys: &[FunctionalKey],
) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let mut written = vec![dir.join(PK_FILE), dir.join(MSK_FILE)];
    save_public_key(ctx, &written[0], pk)?;
    save_master_key(ctx, &written[1], msk)?;
    written.extend(save_functional_keys(ctx, dir, keys)?);
    Ok(written)
}

/// Reads what [`save_keys`] wrote.
pub fn load_keys(
    ctx: &GroupContext,
    dir: impl AsRef<Path>,
) -> Result<(PublicKeyFile, MasterSecretKey, Vec<FunctionalKey>)> {
    let dir = dir.as_ref();
    Ok((
        load_public_key(ctx, dir.join(PK_FILE))?,
        load_master_key(ctx, dir.join(MSK_FILE))?,
        load_functional_keys(ctx, dir)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_model() -> ModelFile {
        let p = IntMatrix::new(2, 3, vec![1, -2, 3, 0, 7, -8]).unwrap();
        let model = QuadModel::new(p, vec![vec![1, -1], vec![2, 0]], QuantMeta::integer(4, 4)).unwrap();
        ModelFile { model, head: None }
    }

    #[test]
    fn model_round_trip_is_canonical() {
        let mut file = small_model();
        let bytes = encode_model(&file);
        assert_eq!(&bytes[..4], MAGIC);
        let back = decode_model(&bytes).unwrap();
        assert_eq!(back, file);
        assert_eq!(encode_model(&back), bytes);

        file.head = Some(PublicHead {
            layers: vec![2, 3, 10],
            weights: (0..PublicHead::expected_weights(&[2, 3, 10]))
                .map(|i| i as f32 * 0.25)
                .collect(),
        });
        let bytes = encode_model(&file);
        let back = decode_model(&bytes).unwrap();
        assert_eq!(back, file);
        assert_eq!(encode_model(&back), bytes);
    }

    #[test]
    fn header_is_readable_text() {
        let bytes = encode_model(&small_model());
        let meta_len = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
        let meta = std::str::from_utf8(&bytes[12..12 + meta_len]).unwrap();
        assert!(meta.starts_with("bits=4\nclasses=2\nd=2\n"));
        assert!(meta.contains("kind=model\n"));
    }

    #[test]
    fn model_decode_errors() {
        let bytes = encode_model(&small_model());
        assert_eq!(decode_model(&bytes[..3]).unwrap_err(), FormatError::BadMagic);

        let mut bad = bytes.clone();
        bad[4] = 9;
        assert_eq!(
            decode_model(&bad).unwrap_err(),
            FormatError::VersionMismatch { found: 9, expected: 1 }
        );

        for cut in [bytes.len() - 1, bytes.len() - 9, 20] {
            assert!(matches!(
                decode_model(&bytes[..cut]).unwrap_err(),
                FormatError::Truncated { .. }
            ));
        }
        assert_eq!(
            decode_model(&bytes[..bytes.len() - 2]).unwrap_err(),
            FormatError::Truncated { section: "diag".into() }
        );

        let mut extra = bytes.clone();
        extra.push(0);
        assert!(matches!(decode_model(&extra).unwrap_err(), FormatError::Invalid { .. }));
    }

    #[test]
    fn out_of_range_weight_is_rejected_on_load() {
        let bytes = encode_model(&small_model());
        // First P entry sits right after the section header of "P".
        let needle = [1u8, b'P'];
        let pos = bytes.windows(2).position(|w| w == needle).unwrap() + 2 + 8;
        let mut bad = bytes.clone();
        bad[pos..pos + 4].copy_from_slice(&100i32.to_le_bytes());
        assert_eq!(
            decode_model(&bad).unwrap_err(),
            FormatError::Invalid {
                section: "P".into(),
                reason: "weight 100 outside 4-bit range".into()
            }
        );
    }

    #[test]
    fn kinds_are_not_interchangeable() {
        let ctx = GroupContext::setup(128).unwrap();
        let bytes = encode_model(&small_model());
        assert!(matches!(
            decode_ciphertext(&ctx, &bytes).unwrap_err(),
            FormatError::WrongKind { .. }
        ));
    }
}
