//! Collects generations from a chat-completions endpoint.
//!
//! Requests go to `{base_url}/chat/completions` with body
//! `{"model", "messages": [{"role", "content"}], "temperature"}`; the answer
//! is read from `choices[0].message.content`. Every sample yields exactly one
//! [`GenerationRecord`], in input order. A sample whose retries are exhausted
//! gets an empty `raw_text`, which the evaluator counts as invalid.

use std::time::{Duration, Instant};

use futures::stream::{self, StreamExt};
use reqwest::{StatusCode, Url};
use retrofit_core::corpus::{CorpusSample, Message, Role};
use retrofit_core::generation::{prompt_hash, Condition, GenerationRecord};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_TOKEN_ENV: &str = "RETROFIT_ENDPOINT_TOKEN";

#[derive(Debug, Clone, PartialEq)]
pub struct EndpointConfig {
    pub base_url: String,
    pub model: String,
    /// Environment variable holding the bearer token. `None` sends no
    /// `Authorization` header.
    pub token_env: Option<String>,
    pub timeout: Duration,
    pub max_retries: u32,
    pub max_concurrency: usize,
    pub temperature: f64,
    /// Delay before the first retry; doubles on each further retry.
    pub initial_backoff: Duration,
    pub max_backoff: Duration,
}

impl EndpointConfig {
    pub fn new(base_url: impl Into<String>, model: impl Into<String>) -> Self {
        EndpointConfig {
            base_url: base_url.into(),
            model: model.into(),
            token_env: None,
            timeout: Duration::from_secs(120),
            max_retries: 3,
            max_concurrency: 8,
            temperature: 0.0,
            initial_backoff: Duration::from_millis(500),
            max_backoff: Duration::from_secs(30),
        }
    }

    pub fn backoff(&self, retry: u32) -> Duration {
        self.initial_backoff
            .saturating_mul(2u32.saturating_pow(retry.saturating_sub(1)))
            .min(self.max_backoff)
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid endpoint URL {0:?}")]
    BadUrl(String),
    #[error("environment variable {0} is not set")]
    MissingToken(String),
    #[error("request timeout must be positive")]
    Timeout,
    #[error("max concurrency must be at least 1")]
    Concurrency,
    #[error("temperature {0} is not a finite non-negative number")]
    Temperature(f64),
    #[error("http client: {0}")]
    Client(#[from] reqwest::Error),
}

#[derive(Debug, Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    messages: Vec<ChatMessage<'a>>,
    temperature: f64,
}

#[derive(Debug, Serialize)]
struct ChatMessage<'a> {
    role: &'a str,
    content: &'a str,
}

#[derive(Debug, Deserialize)]
struct ChatResponse {
    choices: Vec<Choice>,
}

#[derive(Debug, Deserialize)]
struct Choice {
    message: ChoiceMessage,
}

#[derive(Debug, Deserialize)]
struct ChoiceMessage {
    #[serde(default)]
    content: Option<String>,
}

/// Outcome of one prompt after retries.
#[derive(Debug, Clone, PartialEq)]
pub struct Completion {
    /// `None` when every attempt failed.
    pub text: Option<String>,
    pub attempts: u32,
    pub latency: Duration,
}

enum Attempt {
    Done(String),
    Retry,
    GiveUp,
}

#[derive(Debug, Clone)]
pub struct GatewayClient {
    http: reqwest::Client,
    endpoint: Url,
    token: Option<String>,
    config: EndpointConfig,
}

impl GatewayClient {
    pub fn new(config: EndpointConfig) -> Result<Self, ConfigError> {
        let base = Url::parse(&config.base_url)
            .map_err(|_| ConfigError::BadUrl(config.base_url.clone()))?;
        if !matches!(base.scheme(), "http" | "https") || base.cannot_be_a_base() {
            return Err(ConfigError::BadUrl(config.base_url.clone()));
        }
        let endpoint = Url::parse(&format!(
            "{}/chat/completions",
            config.base_url.trim_end_matches('/')
        ))
        .map_err(|_| ConfigError::BadUrl(config.base_url.clone()))?;
        if config.timeout.is_zero() {
            return Err(ConfigError::Timeout);
        }
        if config.max_concurrency == 0 {
            return Err(ConfigError::Concurrency);
        }
        if !(config.temperature.is_finite() && config.temperature >= 0.0) {
            return Err(ConfigError::Temperature(config.temperature));
        }
        let token = match &config.token_env {
            Some(var) => {
                Some(std::env::var(var).map_err(|_| ConfigError::MissingToken(var.clone()))?)
            }
            None => None,
        };
        let http = reqwest::Client::builder().timeout(config.timeout).build()?;
        Ok(GatewayClient {
            http,
            endpoint,
            token,
            config,
        })
    }

    pub fn config(&self) -> &EndpointConfig {
        &self.config
    }

    async fn attempt(&self, body: &ChatRequest<'_>) -> Attempt {
        let mut request = self.http.post(self.endpoint.clone()).json(body);
        if let Some(token) = &self.token {
            request = request.bearer_auth(token);
        }
        let response = match request.send().await {
            Ok(r) => r,
            Err(e) => {
                tracing::debug!(error = %e, "transport error");
                return Attempt::Retry;
            }
        };
        let status = response.status();
        if status.is_server_error() || status == StatusCode::TOO_MANY_REQUESTS {
            return Attempt::Retry;
        }
        if !status.is_success() {
            tracing::warn!(%status, "endpoint rejected request");
            return Attempt::GiveUp;
        }
        match response.json::<ChatResponse>().await {
            Ok(r) => match r.choices.into_iter().next().and_then(|c| c.message.content) {
                Some(text) => Attempt::Done(text),
                None => Attempt::GiveUp,
            },
            Err(e) => {
                tracing::debug!(error = %e, "unreadable response body");
                Attempt::Retry
            }
        }
    }

    /// One chat turn with retries and exponential backoff.
    pub async fn complete(&self, messages: &[Message]) -> Completion {
        let body = ChatRequest {
            model: &self.config.model,
            messages: messages
                .iter()
                .map(|m| ChatMessage {
                    role: m.role.as_str(),
                    content: &m.content,
                })
                .collect(),
            temperature: self.config.temperature,
        };
        let start = Instant::now();
        let mut attempts = 0;
        let text = loop {
            attempts += 1;
            match self.attempt(&body).await {
                Attempt::Done(text) => break Some(text),
                Attempt::GiveUp => break None,
                Attempt::Retry if attempts > self.config.max_retries => break None,
                Attempt::Retry => tokio::time::sleep(self.config.backoff(attempts)).await,
            }
        };
        Completion {
            text,
            attempts,
            latency: start.elapsed(),
        }
    }

    pub async fn generate_one(&self, sample: &CorpusSample) -> GenerationRecord {
        let prompt: Vec<Message> = sample
            .messages
            .iter()
            .filter(|m| m.role != Role::Assistant)
            .cloned()
            .collect();
        let completion = self.complete(&prompt).await;
        if completion.text.is_none() {
            tracing::warn!(building_id = %sample.building_id, attempts = completion.attempts, "no generation");
        }
        GenerationRecord {
            building_id: sample.building_id.clone(),
            condition: Condition::of(sample),
            prompt_hash: prompt_hash(sample),
            raw_text: completion.text.unwrap_or_default(),
            latency_ms: u64::try_from(completion.latency.as_millis()).unwrap_or(u64::MAX),
            attempts: completion.attempts,
        }
    }

    /// One record per sample, in input order, with at most
    /// `max_concurrency` requests in flight.
    pub async fn generate_batch(&self, samples: &[CorpusSample]) -> Vec<GenerationRecord> {
        stream::iter(samples)
            .map(|s| self.generate_one(s))
            .buffered(self.config.max_concurrency)
            .collect()
            .await
    }
}

pub async fn generate_batch(
    samples: &[CorpusSample],
    config: EndpointConfig,
) -> Result<Vec<GenerationRecord>, ConfigError> {
    Ok(GatewayClient::new(config)?.generate_batch(samples).await)
}
