//! JSON-over-HTTP front end for the false positive risk calculations.
//!
//! | route | body | result |
//! |---|---|---|
//! | `POST /v1/interpret` | [`InterpretRequest`] | evidence panel for one p-value |
//! | `POST /v1/prior-needed` | [`PriorNeededRequest`] | prior needed for a target FPR |
//! | `POST /v1/curve` | [`CurveRequest`] | rows over a grid |
//! | `POST /v1/simulate` | [`SimulateRequest`] | seeded simulation counts |
//! | `GET /v1/health` | | `{"status": "ok", "version": ...}` |
//!
//! Successful responses are the same envelope the CLI prints with
//! `--format json`. Failures carry `error: {code, message, field?}`:
//! 400 for malformed or out-of-range inputs, 422 for valid inputs whose
//! result does not exist (or a simulation above the configured ceiling),
//! 404 for unknown routes.

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use fprkit_core::report::{
    self, CurveRequest, InterpretRequest, PriorNeededRequest, SimulateRequest,
};
use fprkit_core::Error;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};
use tower_http::cors::{AllowOrigin, CorsLayer};

/// Default ceiling on `n_experiments` for `/v1/simulate`.
pub const DEFAULT_MAX_SIM_EXPERIMENTS: u64 = 10_000_000;

#[derive(Debug, Clone)]
pub struct Config {
    /// Origins allowed to call the API from a browser. `*` allows any;
    /// empty disables CORS headers.
    pub cors_origins: Vec<String>,
    pub max_sim_experiments: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            cors_origins: Vec::new(),
            max_sim_experiments: DEFAULT_MAX_SIM_EXPERIMENTS,
        }
    }
}

pub fn app(config: Config) -> Router {
    let cors = cors_layer(&config.cors_origins);
    let router = Router::new()
        .route("/v1/health", get(health))
        .route("/v1/interpret", post(interpret))
        .route("/v1/prior-needed", post(prior_needed))
        .route("/v1/curve", post(curve))
        .route("/v1/simulate", post(simulate))
        .fallback(not_found)
        .with_state(config);
    match cors {
        Some(layer) => router.layer(layer),
        None => router,
    }
}

fn cors_layer(origins: &[String]) -> Option<CorsLayer> {
    if origins.is_empty() {
        return None;
    }
    let allow = if origins.iter().any(|o| o == "*") {
        AllowOrigin::any()
    } else {
        AllowOrigin::list(origins.iter().filter_map(|o| HeaderValue::from_str(o).ok()))
    };
    Some(
        CorsLayer::new()
            .allow_origin(allow)
            .allow_methods([Method::GET, Method::POST])
            .allow_headers([axum::http::header::CONTENT_TYPE]),
    )
}

async fn health() -> Json<Value> {
    Json(json!({ "status": "ok", "version": fprkit_core::VERSION }))
}

async fn not_found() -> Response {
    ApiError {
        status: StatusCode::NOT_FOUND,
        code: "not_found",
        message: "no such route".into(),
        field: None,
        inputs: Value::Null,
    }
    .into_response()
}

struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
    field: Option<String>,
    inputs: Value,
}

impl ApiError {
    fn bad_request(code: &'static str, message: String, field: Option<String>, inputs: Value) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            code,
            message,
            field,
            inputs,
        }
    }

    fn from_core(e: Error, inputs: Value) -> Self {
        let (status, code) = match &e {
            Error::InvalidParameter { .. } => (StatusCode::BAD_REQUEST, "invalid_parameter"),
            Error::InfeasiblePrior { .. } => (StatusCode::UNPROCESSABLE_ENTITY, "infeasible_prior"),
            Error::OutsideCalibrationDomain { .. } => {
                (StatusCode::UNPROCESSABLE_ENTITY, "outside_calibration_domain")
            }
            Error::NonFiniteLikelihoodRatio(_) => {
                (StatusCode::UNPROCESSABLE_ENTITY, "non_finite_likelihood_ratio")
            }
            Error::NoConvergence { .. } => (StatusCode::UNPROCESSABLE_ENTITY, "no_convergence"),
        };
        ApiError {
            status,
            code,
            message: e.to_string(),
            field: e.field().map(str::to_string),
            inputs,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut error = json!({ "code": self.code, "message": self.message });
        if let Some(field) = self.field {
            error["field"] = Value::String(field);
        }
        let body = json!({
            "tool_version": fprkit_core::VERSION,
            "inputs_echo": self.inputs,
            "results": null,
            "warnings": [],
            "error": error,
        });
        (self.status, Json(body)).into_response()
    }
}

/// Parses a request body, naming the offending field on failure.
fn parse<T: DeserializeOwned>(body: &Bytes) -> Result<(T, Value), ApiError> {
    let raw: Value = serde_json::from_slice(body).map_err(|e| {
        ApiError::bad_request("invalid_json", format!("request body is not valid JSON: {e}"), None, Value::Null)
    })?;
    if !raw.is_object() {
        return Err(ApiError::bad_request(
            "invalid_json",
            "request body must be a JSON object".into(),
            None,
            raw,
        ));
    }
    match serde_path_to_error::deserialize::<_, T>(&raw) {
        Ok(req) => Ok((req, raw)),
        Err(e) => {
            let path = e.path().to_string();
            let inner = e.into_inner().to_string();
            let field = if path != "." {
                Some(path)
            } else {
                backticked(&inner)
            };
            Err(ApiError::bad_request("invalid_parameter", inner, field, raw))
        }
    }
}

/// First `name` in a serde message such as "missing field `p`".
fn backticked(msg: &str) -> Option<String> {
    let start = msg.find('`')? + 1;
    let len = msg[start..].find('`')?;
    Some(msg[start..start + len].to_string())
}

fn respond<T: Serialize>(result: Result<T, Error>, raw: Value) -> Response {
    match result {
        Ok(env) => Json(env).into_response(),
        Err(e) => ApiError::from_core(e, raw).into_response(),
    }
}

async fn interpret(body: Bytes) -> Response {
    match parse::<InterpretRequest>(&body) {
        Ok((req, raw)) => respond(report::interpret(&req), raw),
        Err(e) => e.into_response(),
    }
}

async fn prior_needed(body: Bytes) -> Response {
    match parse::<PriorNeededRequest>(&body) {
        Ok((req, raw)) => respond(report::prior_needed(&req), raw),
        Err(e) => e.into_response(),
    }
}

async fn curve(body: Bytes) -> Response {
    match parse::<CurveRequest>(&body) {
        Ok((req, raw)) => respond(report::curve_report(&req), raw),
        Err(e) => e.into_response(),
    }
}

async fn simulate(State(config): State<Config>, body: Bytes) -> Response {
    let (req, raw) = match parse::<SimulateRequest>(&body) {
        Ok(v) => v,
        Err(e) => return e.into_response(),
    };
    if req.seed.is_none() {
        return ApiError::bad_request(
            "invalid_parameter",
            "seed is required so that results are reproducible".into(),
            Some("seed".into()),
            raw,
        )
        .into_response();
    }
    if req.n_experiments > config.max_sim_experiments {
        return ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            code: "too_many_experiments",
            message: format!(
                "n_experiments = {} exceeds this server's limit of {}",
                req.n_experiments, config.max_sim_experiments
            ),
            field: Some("n_experiments".into()),
            inputs: raw,
        }
        .into_response();
    }
    let result = tokio::task::spawn_blocking(move || report::simulate_report(&req)).await;
    match result {
        Ok(r) => respond(r, raw),
        Err(e) => ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            code: "internal",
            message: e.to_string(),
            field: None,
            inputs: raw,
        }
        .into_response(),
    }
}
