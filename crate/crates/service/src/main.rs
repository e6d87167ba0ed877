use std::net::SocketAddr;

use qea_core::presets::load_presets;
use qea_service::{cors, router, AppState};

const DEFAULT_PORT: u16 = 8080;

#[tokio::main]
async fn main() -> std::io::Result<()> {
    let port = match std::env::var("QEA_PORT") {
        Ok(p) => p.parse().map_err(|_| {
            std::io::Error::new(std::io::ErrorKind::InvalidInput, format!("QEA_PORT '{p}' is not a port number"))
        })?,
        Err(_) => DEFAULT_PORT,
    };
    let host = std::env::var("QEA_HOST").unwrap_or_else(|_| "127.0.0.1".to_string());
    let catalog = load_presets().map_err(|e| e.to_string());
    if let Err(e) = &catalog {
        eprintln!("warning: {e}; every request will fail until the presets are fixed");
    }
    let origin = std::env::var("QEA_CORS_ORIGIN").ok();
    let app = router(AppState::new(catalog)).layer(cors(origin.as_deref()));
    let addr: SocketAddr = format!("{host}:{port}")
        .parse()
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidInput, format!("{e}")))?;
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{addr}");
    axum::serve(listener, app).await
}
