//! Collect generations for an eval split from a chat-completions endpoint and
//! score them.
//!
//! ```bash
//! RETROFIT_ENDPOINT_TOKEN=... cargo run -p retrofit-service --example collect_generations -- \
//!     --samples corpus/eval.jsonl --truth corpus/truth.jsonl \
//!     --endpoint http://localhost:8000/v1 --model my-finetune --out generations.jsonl
//! ```
//!
//! Without `--endpoint`, a local stand-in model that answers with the ground
//! truth is started on an ephemeral port, and a small synthetic eval split
//! is used when `--samples` is absent.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;

use axum::routing::post;
use axum::{Json, Router};
use clap::Parser;
use retrofit_core::corpus::{build_corpus, load_samples, CorpusConfig, CorpusSample};
use retrofit_core::domain::RateTable;
use retrofit_core::eval::evaluate_run;
use retrofit_core::generation::{save_generations, Condition};
use retrofit_core::pipeline::run_synthetic;
use retrofit_core::ranker::TruthStore;
use retrofit_core::synth::SurrogateParams;
use retrofit_service::gateway::{generate_batch, EndpointConfig, DEFAULT_TOKEN_ENV};
use serde_json::{json, Value};

#[derive(Parser)]
struct Args {
    #[arg(long, requires = "truth")]
    samples: Option<PathBuf>,
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long, env = "RETROFIT_ENDPOINT_URL")]
    endpoint: Option<String>,
    #[arg(long, default_value = "retrofit-advisor")]
    model: String,
    #[arg(long, default_value_t = 8)]
    concurrency: usize,
    #[arg(long, default_value = "generations.jsonl")]
    out: PathBuf,
    #[arg(long, default_value = "complete")]
    condition: Condition,
}

/// Answers each prompt with the assistant turn of the matching sample.
async fn stand_in(samples: &[CorpusSample]) -> String {
    let answers: Arc<HashMap<String, String>> = Arc::new(
        samples
            .iter()
            .map(|s| (s.user_text().to_string(), s.assistant_text().to_string()))
            .collect(),
    );
    let app = Router::new().route(
        "/v1/chat/completions",
        post(move |Json(body): Json<Value>| {
            let answers = Arc::clone(&answers);
            async move {
                let user = body["messages"][1]["content"].as_str().unwrap_or_default();
                let text = answers.get(user).cloned().unwrap_or_default();
                Json(json!({"choices": [{"message": {"role": "assistant", "content": text}}]}))
            }
        }),
    );
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0")
        .await
        .expect("bind");
    let addr = listener.local_addr().expect("local addr");
    tokio::spawn(async move { axum::serve(listener, app).await });
    format!("http://{addr}/v1")
}

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args = Args::parse();
    let (samples, truth) = match (&args.samples, &args.truth) {
        (Some(s), Some(t)) => (load_samples(s)?, TruthStore::load(t)?),
        _ => {
            let run = run_synthetic(120, 5, &SurrogateParams::default(), &RateTable::default())?;
            let records: Vec<_> = run.prototypes.iter().map(|p| p.record.clone()).collect();
            let corpus = build_corpus(
                &records,
                &run.truth,
                CorpusConfig {
                    holdout: 50,
                    seed: 5,
                },
            )?;
            (corpus.eval, run.truth)
        }
    };

    let mut config = match &args.endpoint {
        Some(url) => {
            let mut c = EndpointConfig::new(url, &args.model);
            if std::env::var_os(DEFAULT_TOKEN_ENV).is_some() {
                c.token_env = Some(DEFAULT_TOKEN_ENV.to_string());
            }
            c
        }
        None => EndpointConfig::new(stand_in(&samples).await, &args.model),
    };
    config.max_concurrency = args.concurrency;

    let records = generate_batch(&samples, config).await?;
    save_generations(&records, &args.out)?;
    let failed = records.iter().filter(|r| r.raw_text.is_empty()).count();
    println!(
        "{} generations written to {} ({failed} empty)",
        records.len(),
        args.out.display()
    );

    let report = evaluate_run(&records, &truth, args.condition)?;
    println!("{}", report.table());
    Ok(())
}
