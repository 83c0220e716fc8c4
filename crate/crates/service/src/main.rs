use std::net::SocketAddr;
use std::path::PathBuf;

use anyhow::Context;
use axum::http::HeaderValue;
use clap::Parser;

use rtpl_service::{router, AppState, DEFAULT_PORT};

#[derive(Parser)]
#[command(name = "rtpl-service", version, about = "HTTP sessions for reversible stepping")]
struct Args {
    #[arg(long, default_value_t = DEFAULT_PORT)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: String,
    /// Where `POST /sessions/{id}/save` writes traces.
    #[arg(long, default_value = "traces")]
    save_dir: PathBuf,
    /// Origin allowed by CORS; any origin if omitted.
    #[arg(long)]
    ui_origin: Option<String>,
}

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let args = Args::parse();
    let origin = args
        .ui_origin
        .map(|o| HeaderValue::from_str(&o).context("bad --ui-origin"))
        .transpose()?;
    let addr: SocketAddr = format!("{}:{}", args.host, args.port).parse().context("bad address")?;
    let app = router(AppState::new(args.save_dir), origin);
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on {addr}");
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
