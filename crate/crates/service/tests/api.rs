use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use fprkit_service::{app, Config};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(router: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header(header::CONTENT_TYPE, "application/json")
        .body(match body {
            Some(v) => Body::from(v.to_string()),
            None => Body::empty(),
        })
        .unwrap();
    let resp = router.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap_or(Value::Null)
    };
    (status, value)
}

async fn post(router: &Router, uri: &str, body: Value) -> (StatusCode, Value) {
    call(router, Method::POST, uri, Some(body)).await
}

fn router() -> Router {
    app(Config::default())
}

#[tokio::test]
async fn health_reports_version() {
    let (status, body) = call(&router(), Method::GET, "/v1/health", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, json!({"status": "ok", "version": env!("CARGO_PKG_VERSION")}));
}

#[tokio::test]
async fn unknown_route_is_404() {
    let (status, body) = call(&router(), Method::GET, "/v2/nothing", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["error"]["code"], "not_found");
    let (status, _) = call(&router(), Method::GET, "/v1/interpret", None).await;
    assert_eq!(status, StatusCode::METHOD_NOT_ALLOWED);
}

#[tokio::test]
async fn interpret_examples() {
    let r = router();
    let (status, body) = post(&r, "/v1/interpret", json!({"p": 0.05, "n_per_group": 16, "effect_size_sd": 1})).await;
    assert_eq!(status, StatusCode::OK);
    let fpr50 = body["results"]["fpr50_pequals"].as_f64().unwrap();
    assert!((fpr50 - 0.27).abs() < 0.01);
    assert_eq!(body["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(body["inputs_echo"]["alpha"], 0.05);
    assert!(body["warnings"].is_array());

    let (_, body) = post(&r, "/v1/interpret", json!({"p": 0.005, "n_per_group": 16, "effect_size_sd": 1})).await;
    let fpr50 = body["results"]["fpr50_pequals"].as_f64().unwrap();
    assert!((fpr50 - 0.034).abs() < 0.005);
}

#[tokio::test]
async fn calibration_outside_domain_is_a_warning() {
    let (status, body) = post(&router(), "/v1/interpret", json!({"p": 0.7})).await;
    assert_eq!(status, StatusCode::OK);
    assert!(body["results"]["calibration"].is_null());
    let warnings = body["warnings"].as_array().unwrap();
    assert!(warnings.iter().any(|w| w.as_str().unwrap().contains("1/e")));
}

#[tokio::test]
async fn validation_failures_name_the_field() {
    let r = router();
    let cases = [
        ("/v1/interpret", json!({"p": 1.5}), "p"),
        ("/v1/interpret", json!({"n_per_group": 16}), "p"),
        ("/v1/interpret", json!({"p": 0.05, "n_per_group": 1}), "n_per_group"),
        ("/v1/interpret", json!({"p": 0.05, "n_per_group": 2.5}), "n_per_group"),
        ("/v1/interpret", json!({"p": 0.05, "effect_size_sd": -1}), "effect_size_sd"),
        ("/v1/interpret", json!({"p": 0.05, "alpha": 0}), "alpha"),
        ("/v1/interpret", json!({"p": 0.05, "prior_h1": 2}), "prior_h1"),
        ("/v1/interpret", json!({"p": "0.05"}), "p"),
        ("/v1/interpret", json!({"p": 0.05, "approach": "sideways"}), "approach"),
        ("/v1/interpret", json!({"p": 0.05, "bogus": 1}), "bogus"),
        ("/v1/prior-needed", json!({"p": 0.05, "target_fpr": 1}), "target_fpr"),
        ("/v1/curve", json!({"sweep": "p", "grid": []}), "grid"),
        ("/v1/curve", json!({"sweep": "q", "grid": [0.1]}), "sweep"),
        ("/v1/simulate", json!({"n_experiments": 10}), "seed"),
        ("/v1/simulate", json!({"n_experiments": 0, "seed": 1}), "n_experiments"),
        ("/v1/simulate", json!({"n_experiments": 10, "seed": 1, "p_window": [0.05, 0.04]}), "p_window"),
        ("/v1/simulate", json!({"n_experiments": 10, "seed": -1}), "seed"),
    ];
    for (uri, body, field) in cases {
        let (status, resp) = post(&r, uri, body.clone()).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{uri} {body}");
        assert_eq!(resp["error"]["field"], field, "{uri} {body}: {resp}");
        assert!(resp["error"]["message"].as_str().is_some_and(|m| !m.is_empty()));
        assert!(resp["results"].is_null());
    }
}

#[tokio::test]
async fn malformed_json_is_400() {
    let req = Request::builder()
        .method(Method::POST)
        .uri("/v1/interpret")
        .body(Body::from("{p: 0.05"))
        .unwrap();
    let resp = router().oneshot(req).await.unwrap();
    assert_eq!(resp.status(), StatusCode::BAD_REQUEST);
    let (status, body) = post(&router(), "/v1/interpret", json!([0.05])).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"]["code"], "invalid_json");
}

#[tokio::test]
async fn infeasible_inputs_are_422() {
    let body = json!({"p": 0.9, "n_per_group": 1000, "effect_size_sd": 5, "target_fpr": 0.05});
    let (status, resp) = post(&router(), "/v1/prior-needed", body).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(resp["error"]["code"], "infeasible_prior");
}

#[tokio::test]
async fn prior_needed_flagship() {
    let (status, body) = post(&router(), "/v1/prior-needed", json!({"p": 0.05, "target_fpr": 0.05})).await;
    assert_eq!(status, StatusCode::OK);
    let prior = body["results"]["prior_h1"].as_f64().unwrap();
    assert!((prior - 0.87).abs() < 0.02);
}

#[tokio::test]
async fn curve_prior_endpoints() {
    let (status, body) = post(&router(), "/v1/curve", json!({"sweep": "prior", "grid": [0, 0.5, 1]})).await;
    assert_eq!(status, StatusCode::OK);
    let rows = body["results"]["rows"].as_array().unwrap();
    assert_eq!(rows[0]["fpr_pequals"], 1.0);
    assert_eq!(rows[2]["fpr_pequals"], 0.0);
    assert_eq!(rows[1]["fpr_pequals"], rows[1]["fpr50_pequals"]);
}

#[tokio::test]
async fn simulate_is_deterministic_and_capped() {
    let r = app(Config {
        max_sim_experiments: 5_000,
        ..Config::default()
    });
    let body = json!({"n_experiments": 5_000, "seed": 99, "prior_h1": 0.3});
    let (s1, a) = post(&r, "/v1/simulate", body.clone()).await;
    let (s2, b) = post(&r, "/v1/simulate", body).await;
    assert_eq!((s1, s2), (StatusCode::OK, StatusCode::OK));
    assert_eq!(a, b);
    let n = a["results"]["n_h0"].as_u64().unwrap() + a["results"]["n_h1"].as_u64().unwrap();
    assert_eq!(n, 5_000);
    assert!(a["results"]["rng"].as_str().unwrap().contains("chacha8"));

    let (status, resp) = post(&r, "/v1/simulate", json!({"n_experiments": 5_001, "seed": 1})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(resp["error"]["field"], "n_experiments");
}

#[tokio::test]
async fn default_ceiling_is_ten_million() {
    let (status, _) = post(&router(), "/v1/simulate", json!({"n_experiments": 10_000_001u64, "seed": 1})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn simulate_with_certain_effect() {
    let body = json!({"n_experiments": 20_000, "seed": 3, "prior_h1": 1.0});
    let (_, resp) = post(&router(), "/v1/simulate", body).await;
    assert_eq!(resp["results"]["n_window_h0"], 0);
    assert_eq!(resp["results"]["empirical_fpr_window"], 0.0);
    assert!(resp["results"]["empirical_alpha"].is_null());
}

#[tokio::test]
async fn cors_follows_configuration() {
    let preflight = |origin: &str| {
        Request::builder()
            .method(Method::OPTIONS)
            .uri("/v1/interpret")
            .header(header::ORIGIN, origin)
            .header(header::ACCESS_CONTROL_REQUEST_METHOD, "POST")
            .body(Body::empty())
            .unwrap()
    };
    let r = app(Config {
        cors_origins: vec!["http://localhost:5173".into()],
        ..Config::default()
    });
    let resp = r.clone().oneshot(preflight("http://localhost:5173")).await.unwrap();
    assert_eq!(
        resp.headers()[header::ACCESS_CONTROL_ALLOW_ORIGIN],
        "http://localhost:5173"
    );
    let resp = r.oneshot(preflight("http://evil.example")).await.unwrap();
    assert!(!resp.headers().contains_key(header::ACCESS_CONTROL_ALLOW_ORIGIN));

    let open = app(Config {
        cors_origins: vec!["*".into()],
        ..Config::default()
    });
    let resp = open.oneshot(preflight("http://anywhere.example")).await.unwrap();
    assert_eq!(resp.headers()[header::ACCESS_CONTROL_ALLOW_ORIGIN], "*");

    let resp = router().oneshot(preflight("http://localhost:5173")).await.unwrap();
    assert!(!resp.headers().contains_key(header::ACCESS_CONTROL_ALLOW_ORIGIN));
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_identical_requests_agree_and_health_survives() {
    let r = router();
    let body = json!({"p": 0.01, "n_per_group": 12, "effect_size_sd": 0.8, "prior_h1": 0.2});
    let mut tasks = Vec::new();
    for _ in 0..1000 {
        let (r, body) = (r.clone(), body.clone());
        tasks.push(tokio::spawn(async move { post(&r, "/v1/interpret", body).await }));
    }
    let mut bodies = Vec::new();
    for t in tasks {
        let (status, b) = t.await.unwrap();
        assert_eq!(status, StatusCode::OK);
        bodies.push(b);
    }
    assert!(bodies.windows(2).all(|w| w[0] == w[1]));
    let (status, health) = call(&r, Method::GET, "/v1/health", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(health["status"], "ok");
}

#[tokio::test]
async fn request_order_does_not_matter() {
    let r = router();
    let bodies = [
        ("/v1/interpret", json!({"p": 0.05})),
        ("/v1/curve", json!({"sweep": "n", "grid": [4, 16]})),
        ("/v1/prior-needed", json!({"p": 0.01, "target_fpr": 0.1})),
        ("/v1/interpret", json!({"p": 0.001, "prior_h1": 0.1})),
    ];
    let mut forward = Vec::new();
    for (uri, b) in &bodies {
        forward.push(post(&r, uri, b.clone()).await);
    }
    let mut backward = Vec::new();
    for (uri, b) in bodies.iter().rev() {
        backward.push(post(&r, uri, b.clone()).await);
    }
    backward.reverse();
    assert_eq!(forward, backward);
}

#[test]
fn binary_serves_over_tcp() {
    use std::io::{BufRead, BufReader, Read, Write};
    use std::process::{Command, Stdio};

    let mut child = Command::new(env!("CARGO_BIN_EXE_fprkit-service"))
        .args(["--port", "0", "--max-sim-experiments", "10"])
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(child.stdout.take().unwrap()).read_line(&mut line).unwrap();
    let addr = line.trim().trim_start_matches("listening on http://").to_string();

    let request = |raw: String| {
        let mut stream = std::net::TcpStream::connect(&addr).unwrap();
        stream.write_all(raw.as_bytes()).unwrap();
        let mut out = String::new();
        stream.read_to_string(&mut out).unwrap();
        out
    };
    let health = request("GET /v1/health HTTP/1.1\r\nHost: x\r\nConnection: close\r\n\r\n".into());
    let body = r#"{"n_experiments": 11, "seed": 1}"#;
    let capped = request(format!(
        "POST /v1/simulate HTTP/1.1\r\nHost: x\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    ));
    child.kill().unwrap();
    let _ = child.wait();
    assert!(health.starts_with("HTTP/1.1 200"), "{health}");
    assert!(health.contains(r#""status":"ok""#));
    assert!(capped.starts_with("HTTP/1.1 422"), "{capped}");
}
