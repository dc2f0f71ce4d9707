//! Command-line workflows and the HTTP compute service.
//!
//! The service speaks three routes:
//!
//! * `GET /catalog`: the built-in curve descriptors.
//! * `POST /compute`: a scene document (TOML or JSON) in, a geometry payload out.
//! * `GET /health`: liveness.

use axum::body::Bytes;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use caustics_core::payload::{self, Payload};
use caustics_core::scene::{build_scene, catalog_descriptors, Layer, SceneDocument};
use caustics_core::svg::render_svg;

/// Output format of the batch commands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Data,
    Svg,
}

/// Parse a scene document and apply command-line overrides.
pub fn prepare_document(
    text: &str,
    grid: Option<usize>,
    layers: Option<&[Layer]>,
) -> anyhow::Result<SceneDocument> {
    let mut doc = SceneDocument::parse(text)?;
    if let Some(n) = grid {
        doc.grid.n = n;
    }
    if let Some(layers) = layers {
        doc.outputs = layers.to_vec();
    }
    Ok(doc)
}

pub fn compute_document(doc: SceneDocument) -> anyhow::Result<Payload> {
    let scene = build_scene(doc)?;
    Ok(payload::compute(&scene)?)
}

pub fn render(payload: &Payload, format: Format) -> anyhow::Result<String> {
    Ok(match format {
        Format::Data => payload.to_json_pretty(),
        Format::Svg => render_svg(payload)?,
    })
}

pub fn router() -> Router {
    Router::new()
        .route("/catalog", get(catalog))
        .route("/compute", post(compute))
        .route("/health", get(health))
}

pub async fn serve(port: u16) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router()).await?;
    Ok(())
}

fn json(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn error(status: StatusCode, message: impl std::fmt::Display) -> Response {
    json(status, serde_json::json!({ "error": message.to_string() }).to_string())
}

async fn catalog() -> Response {
    json(StatusCode::OK, serde_json::to_string(&catalog_descriptors()).expect("descriptors serialize"))
}

async fn health() -> Response {
    json(StatusCode::OK, r#"{"status":"ok"}"#.to_string())
}

async fn compute(body: Bytes) -> Response {
    let Ok(text) = std::str::from_utf8(&body) else {
        return error(StatusCode::BAD_REQUEST, "scene document is not UTF-8");
    };
    let doc = match SceneDocument::parse(text) {
        Ok(doc) => doc,
        Err(e) => return error(StatusCode::BAD_REQUEST, e),
    };
    let result = tokio::task::spawn_blocking(move || -> Result<String, (StatusCode, String)> {
        let scene = build_scene(doc).map_err(|e| (StatusCode::BAD_REQUEST, e.to_string()))?;
        let out = payload::compute(&scene).map_err(|e| (StatusCode::UNPROCESSABLE_ENTITY, e.to_string()))?;
        Ok(out.to_json())
    })
    .await;
    match result {
        Ok(Ok(body)) => json(StatusCode::OK, body),
        Ok(Err((status, message))) => error(status, message),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = "[curve]\nkind = \"deltoid\"\n[[radiant]]\nkind = \"infinity\"\ndirection_deg = 30.0\n";

    #[test]
    fn overrides_apply() {
        let doc = prepare_document(DOC, Some(256), Some(&[Layer::Beta])).unwrap();
        assert_eq!(doc.grid.n, 256);
        assert_eq!(doc.outputs, vec![Layer::Beta]);
        let payload = compute_document(doc).unwrap();
        assert!(payload.layers.beta.is_some() && payload.layers.caustic.is_none());
    }

    #[test]
    fn svg_format() {
        let payload = compute_document(prepare_document(DOC, None, None).unwrap()).unwrap();
        let svg = render(&payload, Format::Svg).unwrap();
        assert!(svg.contains(r#"<g id="caustic""#));
    }
}
