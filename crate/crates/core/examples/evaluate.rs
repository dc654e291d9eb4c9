//! Score a generations file against a ground-truth store.
//!
//! ```bash
//! cargo run -p retrofit-core --example evaluate -- generations.jsonl truth.jsonl --condition complete
//! cargo run -p retrofit-core --example evaluate -- --demo
//! ```
//!
//! Prints a table, optionally writes the JSON report, and exits with status 1
//! when no output could be parsed.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use retrofit_core::corpus::{build_corpus, CorpusConfig};
use retrofit_core::domain::RateTable;
use retrofit_core::eval::{evaluate_run, EvalReport};
use retrofit_core::generation::{
    generate_mock, load_generations, Condition, DegradeParams, MockModel,
};
use retrofit_core::pipeline::run_synthetic;
use retrofit_core::ranker::TruthStore;
use retrofit_core::synth::SurrogateParams;

#[derive(Parser)]
struct Args {
    generations: Option<PathBuf>,
    truth: Option<PathBuf>,
    #[arg(long, default_value = "complete")]
    condition: Condition,
    #[arg(long)]
    report: Option<PathBuf>,
    /// Score the built-in mock models on a small synthetic set instead.
    #[arg(long)]
    demo: bool,
}

fn demo() -> Result<Vec<(String, EvalReport)>, Box<dyn std::error::Error>> {
    let run = run_synthetic(300, 3, &SurrogateParams::default(), &RateTable::default())?;
    let records: Vec<_> = run.prototypes.iter().map(|p| p.record.clone()).collect();
    let eval = build_corpus(
        &records,
        &run.truth,
        CorpusConfig {
            holdout: 200,
            seed: 3,
        },
    )?
    .eval;
    let models = [
        ("perfect", MockModel::Perfect),
        (
            "noise 10%",
            MockModel::Degraded(DegradeParams {
                noise: 0.10,
                swap_prob: 0.0,
                seed: 3,
            }),
        ),
        (
            "swap ranks 1-2",
            MockModel::Degraded(DegradeParams {
                noise: 0.0,
                swap_prob: 1.0,
                seed: 3,
            }),
        ),
    ];
    models
        .into_iter()
        .map(|(name, model)| {
            let gens = generate_mock(&eval, &run.truth, model)?;
            Ok((
                name.to_string(),
                evaluate_run(&gens, &run.truth, Condition::Complete)?,
            ))
        })
        .collect()
}

fn main() -> ExitCode {
    let args = Args::parse();
    let reports = if args.demo {
        demo()
    } else {
        match (&args.generations, &args.truth) {
            (Some(g), Some(t)) => (|| -> Result<_, Box<dyn std::error::Error>> {
                let gens = load_generations(g)?;
                let truth = TruthStore::load(t)?;
                Ok(vec![(
                    g.display().to_string(),
                    evaluate_run(&gens, &truth, args.condition)?,
                )])
            })(),
            _ => Err("expected GENERATIONS TRUTH, or --demo".into()),
        }
    };
    let reports = match reports {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    for (name, report) in &reports {
        println!("== {name}\n{}", report.table());
    }
    if let Some(path) = &args.report {
        let (_, report) = &reports[0];
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if reports.iter().any(|(_, r)| r.n_valid == 0) {
        eprintln!("no valid outputs");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
