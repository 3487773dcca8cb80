//! Regenerates the golden end-to-end fixture:
//!
//! ```text
//! cargo run -p qfe-cli --example golden_fixture -- crates/cli/tests/fixtures/golden
//! ```
//!
//! Writes `model.qfe` (n = 784, d = 40, 4 classes, 4-bit), `input.pgm`
//! (28x28) and `expected_scores.json` from exact integer evaluation.

use std::path::PathBuf;

use qfe_cli::{image, synth};
use qfe_core::io::{self, ModelFile};
use qfe_core::quadnet::infer_plaintext_oracle;
use qfe_core::quant::quantize_input;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

const SEED: u64 = 0x5eed_0784;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir: PathBuf = std::env::args().nth(1).ok_or("usage: golden_fixture <out-dir>")?.into();
    std::fs::create_dir_all(&dir)?;

    let mut rng = ChaCha20Rng::seed_from_u64(SEED);
    let model = synth::gaussian_model(&mut rng, 784, 40, 4, 4, 4)?;
    let pixels = synth::ring_image(28);
    let x = quantize_input(&pixels.iter().map(|&p| i64::from(p)).collect::<Vec<_>>(), 4)?;
    let scores = infer_plaintext_oracle(&model, &x);

    io::save_model(dir.join("model.qfe"), &ModelFile { model, head: None })?;
    std::fs::write(dir.join("input.pgm"), image::encode_pgm(28, 28, &pixels))?;
    let values: Vec<i64> = scores
        .0
        .iter()
        .map(|z| i64::try_from(z).expect("score fits i64"))
        .collect();
    let expected = serde_json::json!({
        "scores": values,
        "argmax": scores.argmax(),
    });
    std::fs::write(dir.join("expected_scores.json"), format!("{expected}\n"))?;
    println!("{expected}");
    Ok(())
}
