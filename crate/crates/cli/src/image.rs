//! Grayscale input images: binary PGM (`P5`, maxval 255) or a JSON array of
//! integers in `[0, 255]`.

use std::path::Path;

use crate::error::{CliError, CliResult, Kind};

fn bad(msg: impl Into<String>) -> CliError {
    CliError::new(Kind::Format, msg)
}

/// Reads pixels, choosing the parser by content (`P5` magic or JSON).
pub fn load_pixels(path: &Path) -> CliResult<Vec<i64>> {
    let bytes = std::fs::read(path)?;
    if bytes.starts_with(b"P5") {
        parse_pgm(&bytes)
    } else {
        parse_json(&bytes)
    }
}

pub fn parse_json(bytes: &[u8]) -> CliResult<Vec<i64>> {
    let values: Vec<i64> =
        serde_json::from_slice(bytes).map_err(|e| bad(format!("image: expected JSON integer array ({e})")))?;
    if let Some(v) = values.iter().find(|v| !(0..=255).contains(*v)) {
        return Err(bad(format!("image: pixel {v} outside [0, 255]")));
    }
    Ok(values)
}

pub fn parse_pgm(bytes: &[u8]) -> CliResult<Vec<i64>> {
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in &mut fields {
        loop {
            match bytes.get(pos) {
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&c| c != b'\n') {
                        pos += 1;
                    }
                }
                Some(c) if c.is_ascii_whitespace() => pos += 1,
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("pgm: malformed header"))?;
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(bad(format!("pgm: maxval must be 255, got {maxval}")));
    }
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(bad("pgm: malformed header"));
    }
    let data = &bytes[pos + 1..];
    let count = width * height;
    if data.len() != count {
        return Err(bad(format!("pgm: expected {count} pixels, found {}", data.len())));
    }
    Ok(data.iter().map(|&b| i64::from(b)).collect())
}

pub fn encode_pgm(width: usize, height: usize, pixels: &[u8]) -> Vec<u8> {
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(pixels);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_round_trip() {
        let px: Vec<u8> = (0..12).map(|i| i * 20).collect();
        let bytes = encode_pgm(4, 3, &px);
        let back = parse_pgm(&bytes).unwrap();
        assert_eq!(back, px.iter().map(|&b| i64::from(b)).collect::<Vec<_>>());
    }

    #[test]
    fn pgm_with_comment() {
        let mut bytes = b"P5 # made by hand\n2 1\n255\n".to_vec();
        bytes.extend_from_slice(&[7, 255]);
        assert_eq!(parse_pgm(&bytes).unwrap(), vec![7, 255]);
    }

    #[test]
    fn pgm_errors() {
        assert!(parse_pgm(b"P5\n2 2\n65535\n").is_err());
        assert!(parse_pgm(b"P5\n2 2\n255\n\x01\x02\x03").is_err());
        assert!(parse_pgm(b"P5\nx 2\n255\n").is_err());
    }

    #[test]
    fn json_arrays() {
        assert_eq!(parse_json(b"[0, 12, 255]").unwrap(), vec![0, 12, 255]);
        assert!(parse_json(b"[256]").is_err());
        assert!(parse_json(b"{\"a\": 1}").is_err());
    }
}
