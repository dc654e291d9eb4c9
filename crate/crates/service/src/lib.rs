//! Generation client for chat-completions endpoints and the advisor HTTP
//! service.

pub mod gateway;
pub mod server;

pub use gateway::{generate_batch, ConfigError, EndpointConfig, GatewayClient};
pub use server::{router, AppState};
