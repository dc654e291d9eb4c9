#![allow(dead_code)]

use std::sync::Arc;

use axum::Router;
use retrofit_core::corpus::{build_corpus, CorpusConfig, CorpusSample};
use retrofit_core::domain::RateTable;
use retrofit_core::pipeline::{run_synthetic, SyntheticRun};
use retrofit_core::synth::SurrogateParams;
use retrofit_service::server::{router, AppState};

/// Serves `app` on an ephemeral local port and returns its base URL.
pub async fn spawn(app: Router) -> String {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move { axum::serve(listener, app).await.unwrap() });
    format!("http://{addr}")
}

pub fn synthetic(n: usize, seed: u64) -> SyntheticRun {
    run_synthetic(n, seed, &SurrogateParams::default(), &RateTable::default()).unwrap()
}

pub fn eval_samples(run: &SyntheticRun, holdout: usize, seed: u64) -> Vec<CorpusSample> {
    let records: Vec<_> = run.prototypes.iter().map(|p| p.record.clone()).collect();
    build_corpus(&records, &run.truth, CorpusConfig { holdout, seed })
        .unwrap()
        .eval
}

pub async fn spawn_advisor(state: AppState) -> (String, Arc<AppState>) {
    let state = Arc::new(state);
    (spawn(router(Arc::clone(&state))).await, state)
}
