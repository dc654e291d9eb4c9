//! Advisor HTTP API.
//!
//! | method | path            | body                 | response                |
//! |--------|-----------------|----------------------|-------------------------|
//! | POST   | /recommend      | `Query`              | `Recommendation`        |
//! | POST   | /recommend-llm  | `Query`              | `ModelRecommendation`   |
//! | GET    | /measures       |                      | measure catalog         |
//! | GET    | /health         |                      | `Health`                |
//!
//! Errors are `{"error": <kind>, "message": <text>}`.

use std::sync::{Arc, RwLock};

use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use retrofit_core::advisor::{
    query_record, recommend, AdvisorConfig, AdvisorError, PrototypeStore, Provenance, Query,
    Recommendation,
};
use retrofit_core::corpus::{render_user, Message, Role, SYSTEM_PROMPT, TEMPLATES};
use retrofit_core::econ::{catalog, MeasureSpec};
use retrofit_core::eval::{parse_output, ParsedOutput};
use retrofit_core::payload::PredictedOption;
use retrofit_core::ranker::Objective;
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;

use crate::gateway::GatewayClient;

pub struct AppState {
    store: RwLock<Arc<PrototypeStore>>,
    config: AdvisorConfig,
    model: Option<GatewayClient>,
}

impl AppState {
    pub fn new(store: PrototypeStore, config: AdvisorConfig, model: Option<GatewayClient>) -> Self {
        AppState {
            store: RwLock::new(Arc::new(store)),
            config,
            model,
        }
    }

    pub fn store(&self) -> Arc<PrototypeStore> {
        Arc::clone(&self.store.read().unwrap_or_else(|e| e.into_inner()))
    }

    /// Replaces the store; requests already running keep the old one.
    pub fn swap_store(&self, store: PrototypeStore) {
        *self.store.write().unwrap_or_else(|e| e.into_inner()) = Arc::new(store);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
}

pub struct ApiError(StatusCode, ErrorBody);

impl ApiError {
    fn new(status: StatusCode, kind: &str, message: impl Into<String>) -> Self {
        ApiError(
            status,
            ErrorBody {
                error: kind.to_string(),
                message: message.into(),
            },
        )
    }
}

impl From<AdvisorError> for ApiError {
    fn from(e: AdvisorError) -> Self {
        let (status, kind) = match &e {
            AdvisorError::NoCoreFields => (StatusCode::UNPROCESSABLE_ENTITY, "no_core_fields"),
            AdvisorError::Override(_) => (StatusCode::UNPROCESSABLE_ENTITY, "invalid_override"),
            AdvisorError::EmptyStore => (StatusCode::SERVICE_UNAVAILABLE, "empty_store"),
            _ => (StatusCode::INTERNAL_SERVER_ERROR, "internal"),
        };
        ApiError::new(status, kind, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(self.1)).into_response()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub prototypes: usize,
    pub truth_hash: String,
    pub model_endpoint: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelOption {
    pub rank: usize,
    pub measure: String,
    pub co2_reduction_kg: f64,
    pub net_site_energy_reduction_kwh: f64,
    pub retrofit_cost_usd: f64,
    pub energy_cost_saving_usd: f64,
    pub dpy: Option<f64>,
    pub provenance: Provenance,
}

impl ModelOption {
    fn new(rank: usize, p: &PredictedOption) -> Self {
        ModelOption {
            rank,
            measure: p.measure.to_string(),
            co2_reduction_kg: p.co2_reduction,
            net_site_energy_reduction_kwh: p.net_site_energy_reduction,
            retrofit_cost_usd: p.retrofit_cost,
            energy_cost_saving_usd: p.energy_cost_saving,
            dpy: p.dpy,
            provenance: Provenance::Model,
        }
    }
}

/// A model answer, passed through the evaluator's strict parser.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRecommendation {
    pub objective: Objective,
    pub valid: bool,
    pub invalid_reason: Option<String>,
    pub options: Vec<ModelOption>,
    pub raw_text: String,
    pub attempts: u32,
}

async fn health(State(state): State<Arc<AppState>>) -> Json<Health> {
    let store = state.store();
    Json(Health {
        status: "ok".into(),
        prototypes: store.len(),
        truth_hash: store.truth().content_hash(),
        model_endpoint: state.model.is_some(),
    })
}

async fn measures() -> Json<Vec<MeasureSpec>> {
    Json(catalog())
}

async fn recommend_handler(
    State(state): State<Arc<AppState>>,
    Json(query): Json<Query>,
) -> Result<Json<Recommendation>, ApiError> {
    let store = state.store();
    Ok(Json(recommend(&query, &store, &state.config)?))
}

async fn recommend_llm(
    State(state): State<Arc<AppState>>,
    Json(query): Json<Query>,
) -> Result<Json<ModelRecommendation>, ApiError> {
    let Some(client) = &state.model else {
        return Err(ApiError::new(
            StatusCode::SERVICE_UNAVAILABLE,
            "no_model_endpoint",
            "no model endpoint is configured",
        ));
    };
    let user = match (&query.description, query.masked_fields.is_empty()) {
        (Some(text), true) if query.record.is_none() => text.clone(),
        _ => render_user(&query_record(&query)?, &TEMPLATES[0]),
    };
    let messages = [
        Message {
            role: Role::System,
            content: SYSTEM_PROMPT.to_string(),
        },
        Message {
            role: Role::User,
            content: user,
        },
    ];
    let completion = client.complete(&messages).await;
    let Some(raw_text) = completion.text else {
        return Err(ApiError::new(
            StatusCode::BAD_GATEWAY,
            "model_unavailable",
            "model endpoint did not answer",
        ));
    };
    let (valid, invalid_reason, options) = match parse_output(&raw_text) {
        ParsedOutput::Valid(payload) => {
            let options = payload
                .ranking(query.objective)
                .iter()
                .enumerate()
                .map(|(i, p)| ModelOption::new(i + 1, p))
                .collect();
            (true, None, options)
        }
        ParsedOutput::Invalid(reason) => (false, Some(reason.to_string()), Vec::new()),
    };
    Ok(Json(ModelRecommendation {
        objective: query.objective,
        valid,
        invalid_reason,
        options,
        raw_text,
        attempts: completion.attempts,
    }))
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/recommend", post(recommend_handler))
        .route("/recommend-llm", post(recommend_llm))
        .route("/measures", get(measures))
        .route("/health", get(health))
        .layer(CorsLayer::permissive())
        .with_state(state)
}
