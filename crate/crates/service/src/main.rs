use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::Parser;
use retrofit_core::advisor::{AdvisorConfig, PrototypeStore};
use retrofit_core::domain::RateTable;
use retrofit_service::gateway::{EndpointConfig, GatewayClient, DEFAULT_TOKEN_ENV};
use retrofit_service::server::{router, AppState};
use tracing_subscriber::EnvFilter;

/// Residential retrofit advisor: ranked measures with CO₂, energy, cost and
/// payback for a described home.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    /// Prototype store (JSONL) to answer from.
    #[arg(long, env = "RETROFIT_STORE")]
    store: PathBuf,
    #[arg(long, env = "RETROFIT_BIND", default_value = "127.0.0.1")]
    bind: std::net::IpAddr,
    #[arg(long, env = "RETROFIT_PORT", default_value_t = 8080)]
    port: u16,
    /// Rate table (TOML); the shipped table when absent.
    #[arg(long, env = "RETROFIT_RATES")]
    rates: Option<PathBuf>,
    /// Chat-completions base URL enabling POST /recommend-llm.
    #[arg(long, env = "RETROFIT_ENDPOINT_URL")]
    endpoint_url: Option<String>,
    #[arg(
        long,
        env = "RETROFIT_ENDPOINT_MODEL",
        default_value = "retrofit-advisor"
    )]
    endpoint_model: String,
    /// Variable holding the endpoint bearer token.
    #[arg(long, default_value = DEFAULT_TOKEN_ENV)]
    endpoint_token_env: String,
    #[arg(long, default_value_t = 60)]
    endpoint_timeout_secs: u64,
}

fn setup(args: &Args) -> Result<AppState, String> {
    let store = PrototypeStore::load(&args.store)
        .map_err(|e| format!("cannot read store {}: {e}", args.store.display()))?;
    let rates = match &args.rates {
        Some(path) => RateTable::from_path(path)
            .map_err(|e| format!("cannot read rates {}: {e}", path.display()))?,
        None => RateTable::default(),
    };
    let model = match &args.endpoint_url {
        Some(url) => {
            let mut config = EndpointConfig::new(url, &args.endpoint_model);
            config.timeout = Duration::from_secs(args.endpoint_timeout_secs);
            if std::env::var_os(&args.endpoint_token_env).is_some() {
                config.token_env = Some(args.endpoint_token_env.clone());
            }
            Some(GatewayClient::new(config).map_err(|e| e.to_string())?)
        }
        None => None,
    };
    let config = AdvisorConfig {
        rates,
        ..AdvisorConfig::default()
    };
    Ok(AppState::new(store, config, model))
}

#[tokio::main]
async fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(
            EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")),
        )
        .init();
    let args = Args::parse();
    let state = match setup(&args) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let addr = SocketAddr::new(args.bind, args.port);
    let listener = match tokio::net::TcpListener::bind(addr).await {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: cannot bind {addr}: {e}");
            return ExitCode::from(2);
        }
    };
    tracing::info!(%addr, prototypes = state.store().len(), "serving");
    if let Err(e) = axum::serve(listener, router(Arc::new(state))).await {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
