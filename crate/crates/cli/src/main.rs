use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use qfe_cli::error::{CliError, CliResult, Kind};
use qfe_cli::{image, synth};
use qfe_core::dlog::{cap_from_env, DlogTable};
use qfe_core::io::{self, PublicKeyFile};
use qfe_core::quadnet::{encrypt_input, evaluate_encrypted, infer_plaintext_oracle, keygen_model, solve_scores};
use qfe_core::quant::{quantize_input, DEFAULT_BITS, DEFAULT_INPUT_BITS};
use qfe_core::scheme::setup;
use qfe_core::GroupContext;

#[derive(Parser)]
#[command(name = "qfe", version, about = "Encrypted inference for quadratic networks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Security level in bits.
    #[arg(long, global = true, default_value_t = 128)]
    security_level: u32,
    /// Deterministic RNG seed; refused without --insecure-test.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Allow deterministic randomness. Never use for real keys.
    #[arg(long, global = true)]
    insecure_test: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate pk, msk and one functional key per class.
    Keygen {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Derive functional keys for a model from an existing master key.
    Dkgen {
        #[arg(long)]
        msk: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Encrypt an image (PGM P5 or JSON array).
    Enc {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        image: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the encrypted model and print the class scores.
    Infer {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        ct: PathBuf,
        /// Directory holding dk_<i>.qfe.
        #[arg(long)]
        keys: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        json: bool,
        /// Dlog table cache; built and written if absent.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Time keygen, encryption, evaluation and dlog on a synthetic model.
    Bench {
        /// Ciphertext dimension including the bias input.
        #[arg(long, default_value_t = 785)]
        n: usize,
        #[arg(long, default_value_t = 40)]
        d: usize,
        #[arg(long, default_value_t = 10)]
        classes: usize,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long, default_value_t = DEFAULT_BITS)]
        bits: u32,
        #[arg(long)]
        json: bool,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let rendered = e.render().to_string();
            let summary: Vec<&str> = rendered
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            let err = CliError::usage(summary.join(" ").trim_start_matches("error: "));
            eprintln!("{}", err.diagnostic());
            eprint!("{rendered}");
            std::process::exit(Kind::Usage.exit_code());
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("{}", e.diagnostic());
        std::process::exit(e.kind.exit_code());
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let mut rng = make_rng(&cli.global)?;
    match cli.command {
        Command::Keygen { model, out_dir } => {
            require_files(&[&model])?;
            let ctx = context(&cli.global)?;
            keygen(&ctx, &model, &out_dir, &mut rng)
        }
        Command::Dkgen { msk, model, out_dir } => {
            require_files(&[&msk, &model])?;
            let ctx = context(&cli.global)?;
            dkgen(&ctx, &msk, &model, &out_dir)
        }
        Command::Enc { pk, image, out } => {
            require_files(&[&pk, &image])?;
            let ctx = context(&cli.global)?;
            enc(&ctx, &pk, &image, &out, &mut rng)
        }
        Command::Infer {
            pk,
            ct,
            keys,
            model,
            json,
            table,
        } => {
            require_files(&[&pk, &ct, &keys, &model])?;
            let ctx = context(&cli.global)?;
            infer(&ctx, &pk, &ct, &keys, &model, table.as_deref(), json)
        }
        Command::Bench {
            n,
            d,
            classes,
            reps,
            bits,
            json,
        } => {
            if n < 2 || d == 0 || classes == 0 || reps == 0 {
                return Err(CliError::usage("bench needs n >= 2 and d, classes, reps >= 1"));
            }
            let ctx = context(&cli.global)?;
            bench(&ctx, n, d, classes, reps, bits, json, &mut rng)
        }
    }
}

fn make_rng(global: &Global) -> CliResult<ChaCha20Rng> {
    match (global.seed, global.insecure_test) {
        (Some(_), false) => Err(CliError::usage("--seed requires --insecure-test")),
        (Some(seed), true) => Ok(ChaCha20Rng::seed_from_u64(seed)),
        (None, _) => Ok(ChaCha20Rng::from_entropy()),
    }
}

fn context(global: &Global) -> CliResult<GroupContext> {
    GroupContext::setup(global.security_level).map_err(|e| CliError::usage(e.to_string()))
}

fn require_files(paths: &[&Path]) -> CliResult<()> {
    match paths.iter().find(|p| !p.exists()) {
        Some(p) => Err(CliError::usage(format!("no such file or directory: {}", p.display()))),
        None => Ok(()),
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn keygen(ctx: &GroupContext, model_path: &Path, out_dir: &Path, rng: &mut ChaCha20Rng) -> CliResult<()> {
    let model = io::load_model(model_path)?.model;
    let fc = model.function_class()?;
    let t = Instant::now();
    let (pk, msk) = setup(ctx, &fc, rng)?;
    let setup_ms = ms(t);
    let t = Instant::now();
    let keys = keygen_model(ctx, &msk, &model)?;
    let keygen_ms = ms(t);
    let pk = PublicKeyFile {
        pk,
        fc,
        input_bits: model.quant().input_bits,
    };
    let written = io::save_keys(ctx, out_dir, &pk, &msk, &keys)?;
    println!("setup_ms={setup_ms:.1}");
    println!("keygen_ms={keygen_ms:.1}");
    println!("functional_keys={}", keys.len());
    for path in written {
        println!("wrote={}", path.display());
    }
    Ok(())
}

fn dkgen(ctx: &GroupContext, msk_path: &Path, model_path: &Path, out_dir: &Path) -> CliResult<()> {
    let msk = io::load_master_key(ctx, msk_path)?;
    let model = io::load_model(model_path)?.model;
    let t = Instant::now();
    let keys = keygen_model(ctx, &msk, &model)?;
    let keygen_ms = ms(t);
    let written = io::save_functional_keys(ctx, out_dir, &keys)?;
    println!("keygen_ms={keygen_ms:.1}");
    println!("functional_keys={}", keys.len());
    for path in written {
        println!("wrote={}", path.display());
    }
    Ok(())
}

fn enc(ctx: &GroupContext, pk_path: &Path, image_path: &Path, out: &Path, rng: &mut ChaCha20Rng) -> CliResult<()> {
    let pk = io::load_public_key(ctx, pk_path)?;
    let pixels = image::load_pixels(image_path)?;
    let x = quantize_input(&pixels, pk.input_bits)?;
    let t = Instant::now();
    let ct = encrypt_input(ctx, &pk.pk, &pk.fc, &x, rng)?;
    let enc_ms = ms(t);
    io::save_ct(ctx, out, &ct)?;
    println!("encryption_ms={enc_ms:.1}");
    println!("wrote={}", out.display());
    Ok(())
}

fn load_or_build_table(ctx: &GroupContext, bound: u64, cache: Option<&Path>) -> CliResult<DlogTable> {
    if let Some(path) = cache.filter(|p| p.exists()) {
        let table = DlogTable::load(ctx, path)?;
        if table.bound() >= bound {
            return Ok(table);
        }
    }
    let table = DlogTable::build_with_cap(ctx, bound, cap_from_env())?;
    if let Some(path) = cache {
        table.save(path)?;
    }
    Ok(table)
}

fn infer(
    ctx: &GroupContext,
    pk_path: &Path,
    ct_path: &Path,
    keys_dir: &Path,
    model_path: &Path,
    table_path: Option<&Path>,
    json: bool,
) -> CliResult<()> {
    let pk = io::load_public_key(ctx, pk_path)?;
    let ct = io::load_ct(ctx, ct_path)?;
    let keys = io::load_functional_keys(ctx, keys_dir)?;
    let model = io::load_model(model_path)?.model;
    if model.function_class()? != pk.fc {
        return Err(CliError::new(
            Kind::Validation,
            "public key was issued for a different function class than the model",
        ));
    }
    let bound = model.score_bound_u64()?;

    let t = Instant::now();
    let table = load_or_build_table(ctx, bound, table_path)?;
    let table_ms = ms(t);
    let t = Instant::now();
    let targets = evaluate_encrypted(ctx, &ct, &keys, &model)?;
    let eval_ms = ms(t);
    let t = Instant::now();
    let scores = solve_scores(&table, &targets)?;
    let dlog_ms = ms(t);
    let argmax = scores.argmax().expect("model has at least one class");

    if json {
        let values: Vec<serde_json::Value> = scores.0.iter().map(score_json).collect();
        let out = serde_json::json!({
            "scores": values,
            "argmax": argmax,
            "timings_ms": {
                "table": table_ms,
                "evaluation": eval_ms,
                "dlog": dlog_ms,
            },
        });
        println!("{out}");
    } else {
        let text: Vec<String> = scores.0.iter().map(ToString::to_string).collect();
        println!("scores={}", text.join(","));
        println!("argmax={argmax}");
        println!("table_ms={table_ms:.1}");
        println!("evaluation_ms={eval_ms:.1}");
        println!("dlog_ms={dlog_ms:.1}");
    }
    Ok(())
}

fn score_json(z: &BigInt) -> serde_json::Value {
    match i64::try_from(z) {
        Ok(v) => v.into(),
        Err(_) => z.to_string().into(),
    }
}

struct Stats {
    mean: f64,
    std: f64,
}

fn stats(samples: &[f64]) -> Stats {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = if samples.len() > 1 {
        samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Stats { mean, std: var.sqrt() }
}

#[allow(clippy::too_many_arguments)]
fn bench(
    ctx: &GroupContext,
    n: usize,
    d: usize,
    classes: usize,
    reps: usize,
    bits: u32,
    json: bool,
    rng: &mut ChaCha20Rng,
) -> CliResult<()> {
    let model = synth::gaussian_model(rng, n - 1, d, classes, bits, DEFAULT_INPUT_BITS)?;
    let fc = model.function_class()?;
    let bound = model.score_bound_u64()?;
    let t = Instant::now();
    let table = DlogTable::build_with_cap(ctx, bound, cap_from_env())?;
    let table_ms = ms(t);

    let phases = ["setup", "keygen", "encryption", "evaluation", "dlog"];
    let mut samples: Vec<Vec<f64>> = vec![Vec::with_capacity(reps); phases.len()];
    for _ in 0..reps {
        let x: Vec<i64> = (0..n - 1)
            .map(|_| rng.gen_range(0..=model.quant().input_max()))
            .collect();
        let t = Instant::now();
        let (pk, msk) = setup(ctx, &fc, rng)?;
        samples[0].push(ms(t));
        let t = Instant::now();
        let keys = keygen_model(ctx, &msk, &model)?;
        samples[1].push(ms(t));
        let t = Instant::now();
        let ct = encrypt_input(ctx, &pk, &fc, &x, rng)?;
        samples[2].push(ms(t));
        let t = Instant::now();
        let targets = evaluate_encrypted(ctx, &ct, &keys, &model)?;
        samples[3].push(ms(t));
        let t = Instant::now();
        let scores = solve_scores(&table, &targets)?;
        samples[4].push(ms(t));
        if scores != infer_plaintext_oracle(&model, &x) {
            return Err(CliError::new(
                Kind::Internal,
                "encrypted scores differ from plaintext evaluation",
            ));
        }
    }

    let summary: Vec<(&str, Stats)> = phases.iter().zip(&samples).map(|(p, s)| (*p, stats(s))).collect();
    if json {
        let mut phase_map = serde_json::Map::new();
        for (name, s) in &summary {
            phase_map.insert(
                name.to_string(),
                serde_json::json!({ "mean_ms": s.mean, "std_ms": s.std }),
            );
        }
        let out = serde_json::json!({
            "n": n,
            "d": d,
            "classes": classes,
            "reps": reps,
            "score_bound": bound,
            "dlog_baby_steps": table.baby_steps(),
            "table_build_ms": table_ms,
            "phases": phase_map,
        });
        println!("{out}");
    } else {
        println!("bench n={n} d={d} classes={classes} reps={reps} score_bound={bound}");
        println!("{:<12} {:>12} {:>10}", "phase", "mean_ms", "std_ms");
        for (name, s) in &summary {
            println!("{:<12} {:>12.1} {:>10.1}", name, s.mean, s.std);
        }
        println!(
            "dlog table: {} baby steps, built once in {table_ms:.1} ms",
            table.baby_steps()
        );
    }
    Ok(())
}
