//! Build the instruction corpus: one chat sample per home, a held-out eval
//! split, and a masked copy of the eval split.
//!
//! ```bash
//! cargo run -p retrofit-core --example build_corpus -- --n 2500 --holdout 2000 --out corpus
//! ```

use std::path::PathBuf;

use clap::Parser;
use retrofit_core::corpus::{
    build_corpus, mask_samples, save_samples, CorpusConfig, MaskPolicy, MAX_MASK_FRACTION,
};
use retrofit_core::domain::RateTable;
use retrofit_core::pipeline::run_synthetic;
use retrofit_core::synth::SurrogateParams;

#[derive(Parser)]
struct Args {
    #[arg(long, default_value_t = 2500)]
    n: usize,
    #[arg(long, default_value_t = 2000)]
    holdout: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = MAX_MASK_FRACTION)]
    mask_fraction: f64,
    #[arg(long, default_value = "corpus")]
    out: PathBuf,
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args = Args::parse();
    let params = SurrogateParams {
        seed: args.seed,
        ..SurrogateParams::default()
    };
    let run = run_synthetic(args.n, args.seed, &params, &RateTable::default())?;
    let records: Vec<_> = run.prototypes.iter().map(|p| p.record.clone()).collect();

    let corpus = build_corpus(
        &records,
        &run.truth,
        CorpusConfig {
            holdout: args.holdout,
            seed: args.seed,
        },
    )?;
    corpus.write_dir(&args.out)?;
    let masked = mask_samples(
        &corpus.eval,
        &records,
        &MaskPolicy::new(args.mask_fraction, args.seed),
    )?;
    save_samples(&masked, args.out.join("eval_masked.jsonl"))?;
    run.truth.save(args.out.join("truth.jsonl"))?;

    let sample = &corpus.eval[0];
    println!(
        "train {} / eval {} / masked eval {}",
        corpus.train.len(),
        corpus.eval.len(),
        masked.len()
    );
    println!(
        "\nuser ({}, template {}):\n{}",
        sample.building_id,
        sample.template_id,
        sample.user_text()
    );
    println!(
        "\nmasked ({:?}):\n{}",
        masked[0].masked_fields,
        masked[0].user_text()
    );
    println!("\nassistant:\n{}", sample.assistant_text());
    Ok(())
}
