use std::net::SocketAddr;

use clap::Parser;
use fprkit_service::{app, Config, DEFAULT_MAX_SIM_EXPERIMENTS};
use tracing_subscriber::EnvFilter;

#[derive(Parser)]
#[command(name = "fprkit-service", version, about = "False positive risk JSON API")]
struct Args {
    /// Port to listen on; 0 picks a free port.
    #[arg(long, default_value_t = 8080)]
    port: u16,
    /// Address to bind.
    #[arg(long, default_value = "127.0.0.1")]
    host: std::net::IpAddr,
    /// Browser origin allowed to call the API (repeatable; `*` for any).
    #[arg(long = "cors-origin")]
    cors_origin: Vec<String>,
    /// Largest n_experiments accepted by /v1/simulate.
    #[arg(long = "max-sim-experiments", default_value_t = DEFAULT_MAX_SIM_EXPERIMENTS)]
    max_sim_experiments: u64,
}

#[tokio::main]
async fn main() -> std::io::Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .with_writer(std::io::stderr)
        .init();
    let args = Args::parse();
    let config = Config {
        cors_origins: args.cors_origin,
        max_sim_experiments: args.max_sim_experiments,
    };
    let listener = tokio::net::TcpListener::bind(SocketAddr::new(args.host, args.port)).await?;
    let addr = listener.local_addr()?;
    println!("listening on http://{addr}");
    tracing::info!(%addr, ?config, "started");
    axum::serve(listener, app(config))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
