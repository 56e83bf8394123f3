//! Read-only JSON-over-HTTP facade over a loaded dataset.
//!
//! [`route`] is a pure function from request to response and carries all
//! behaviour; [`serve`] only moves bytes between sockets and a fixed pool of
//! worker threads. Every worker shares the same immutable [`Dataset`].

use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Component, Path, PathBuf};
use std::sync::Arc;
use std::thread;

use housecast_core::forecast::{to_stable_json, ENGINE_VERSION};
use housecast_core::{
    run_forecast, Dataset, ForecastError, ForecastInputs, ForecastRequest, ModelId,
};
use serde::Serialize;
use serde_json::json;

pub const DEFAULT_PORT: u16 = 8080;
/// Upper bound on simulated elections per request.
pub const MAX_N_SIMS: usize = 100_000;
/// Request bodies beyond this are refused unread.
pub const MAX_BODY_BYTES: usize = 64 * 1024;

const INDEX_HTML: &str = include_str!("../static/index.html");

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub port: u16,
    pub workers: usize,
    /// The only origin granted cross-origin access.
    pub cors_origin: String,
    /// UI assets served at `/`; the built-in page when `None`.
    pub ui_dir: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            port: DEFAULT_PORT,
            workers: 4,
            cors_origin: format!("http://localhost:{DEFAULT_PORT}"),
            ui_dir: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub status: u16,
    pub content_type: &'static str,
    pub body: Vec<u8>,
    pub headers: Vec<(&'static str, String)>,
}

impl Response {
    fn json(status: u16, body: String) -> Self {
        Self {
            status,
            content_type: "application/json",
            body: body.into_bytes(),
            headers: Vec::new(),
        }
    }

    fn error(status: u16, field: Option<&str>, message: impl Into<String>) -> Self {
        let body =
            json!({ "error": { "status": status, "field": field, "message": message.into() } });
        Self::json(status, to_stable_json(&body) + "\n")
    }

    pub fn body_text(&self) -> &str {
        std::str::from_utf8(&self.body).unwrap_or("")
    }
}

/// Slider bounds the UI reads instead of hardcoding.
#[derive(Debug, Clone, Serialize)]
pub struct InputRange {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelEntry {
    pub model_id: ModelId,
    pub stochastic: bool,
    /// Inputs that move this model's forecast.
    pub inputs: Vec<&'static str>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ManifestDocument {
    pub name: String,
    pub cycle_year: i32,
    pub election_date: String,
    pub models: Vec<ModelEntry>,
    pub default_inputs: ForecastInputs,
    pub override_fields: Vec<&'static str>,
    pub input_ranges: BTreeMap<&'static str, InputRange>,
    pub default_n_sims: usize,
    pub default_seed: u64,
    pub max_n_sims: usize,
    pub file_digests: BTreeMap<String, String>,
    pub dataset_digest: String,
    pub sources: BTreeMap<String, String>,
    pub engine_version: String,
}

fn model_entry(model: ModelId) -> ModelEntry {
    let inputs = match model {
        ModelId::GenericBallot => vec!["generic_margin_sep", "president_party", "rep_seats_held"],
        ModelId::Npdi => vec![
            "generic_dem_share_early",
            "president_party",
            "rep_seats_held",
        ],
        ModelId::StructureX => {
            vec![
                "rdi_growth_h1",
                "approval_june",
                "disapproval_june",
                "use_disapproval",
                "expert_seat_differential",
                "expert_weight",
            ]
        }
        ModelId::SeatsInTrouble => vec!["in_trouble_definition", "rep_seats_held"],
    };
    ModelEntry {
        model_id: model,
        stochastic: model == ModelId::Npdi,
        inputs,
    }
}

fn input_ranges() -> BTreeMap<&'static str, InputRange> {
    let r = |min, max, step| InputRange { min, max, step };
    BTreeMap::from([
        ("generic_margin_sep", r(-30.0, 30.0, 0.5)),
        ("generic_dem_share_early", r(-15.0, 15.0, 0.1)),
        ("rdi_growth_h1", r(-5.0, 5.0, 0.1)),
        ("approval_june", r(20.0, 80.0, 1.0)),
        ("disapproval_june", r(10.0, 75.0, 1.0)),
        ("expert_seat_differential", r(-120.0, 120.0, 1.0)),
        ("expert_weight", r(0.0, 1.0, 0.05)),
        ("rep_seats_held", r(0.0, 435.0, 1.0)),
    ])
}

/// The `GET /api/manifest` document.
pub fn manifest_document(dataset: &Dataset) -> Result<ManifestDocument, ForecastError> {
    let m = &dataset.manifest;
    Ok(ManifestDocument {
        name: m.name.clone(),
        cycle_year: m.cycle_year,
        election_date: m.election_date.to_string(),
        models: ModelId::ALL.into_iter().map(model_entry).collect(),
        default_inputs: dataset.default_inputs()?,
        override_fields: ForecastInputs::FIELDS.to_vec(),
        input_ranges: input_ranges(),
        default_n_sims: m.simulation.n_sims,
        default_seed: m.simulation.seed,
        max_n_sims: MAX_N_SIMS,
        file_digests: dataset.file_digests.clone(),
        dataset_digest: dataset.digest.clone(),
        sources: m.sources.clone(),
        engine_version: ENGINE_VERSION.to_owned(),
    })
}

/// Best guess at which request field a serde message is about.
fn json_error_field(message: &str) -> Option<String> {
    let start = message.find('`')? + 1;
    let len = message[start..].find('`')?;
    Some(message[start..start + len].to_owned())
}

/// Handles `POST /api/forecast`. The body is exactly the CLI's JSON output
/// for the equivalent arguments.
pub fn forecast_response(dataset: &Dataset, body: &[u8]) -> Response {
    let request: ForecastRequest = match serde_json::from_slice(body) {
        Ok(r) => r,
        Err(e) => {
            let message = e.to_string();
            return Response::error(400, json_error_field(&message).as_deref(), message);
        }
    };
    if let Some(n) = request.n_sims {
        if n > MAX_N_SIMS {
            return Response::error(
                400,
                Some("n_sims"),
                format!("n_sims {n} exceeds the limit of {MAX_N_SIMS}"),
            );
        }
    }
    match run_forecast(dataset, &request) {
        Ok(doc) => Response::json(200, doc.to_json() + "\n"),
        Err(ForecastError::Request { field, message }) => {
            Response::error(400, Some(&field), message)
        }
        Err(e) => Response::error(422, None, e.to_string()),
    }
}

fn static_file(ui_dir: Option<&Path>, path: &str) -> Response {
    let rel = path.trim_start_matches('/');
    let rel = if rel.is_empty() { "index.html" } else { rel };
    let Some(dir) = ui_dir else {
        return if rel == "index.html" {
            Response {
                status: 200,
                content_type: "text/html; charset=utf-8",
                body: INDEX_HTML.into(),
                headers: Vec::new(),
            }
        } else {
            Response::error(404, None, format!("no such resource: {path}"))
        };
    };
    let candidate = Path::new(rel);
    if candidate
        .components()
        .any(|c| !matches!(c, Component::Normal(_)))
    {
        return Response::error(404, None, format!("no such resource: {path}"));
    }
    match std::fs::read(dir.join(candidate)) {
        Ok(body) => {
            let content_type = match candidate.extension().and_then(|e| e.to_str()) {
                Some("html") => "text/html; charset=utf-8",
                Some("js") => "text/javascript",
                Some("css") => "text/css",
                Some("json") => "application/json",
                Some("svg") => "image/svg+xml",
                _ => "application/octet-stream",
            };
            Response {
                status: 200,
                content_type,
                body,
                headers: Vec::new(),
            }
        }
        Err(_) => Response::error(404, None, format!("no such resource: {path}")),
    }
}

/// State shared by every worker.
pub struct App {
    dataset: Dataset,
    config: ServiceConfig,
    manifest_body: String,
}

impl App {
    /// Fails fast when the dataset cannot produce default inputs.
    pub fn new(dataset: Dataset, config: ServiceConfig) -> Result<Self, ForecastError> {
        let manifest_body = to_stable_json(&manifest_document(&dataset)?) + "\n";
        Ok(Self {
            dataset,
            config,
            manifest_body,
        })
    }

    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    /// Routes one request. `origin` is the request's `Origin` header.
    pub fn route(&self, method: &str, path: &str, origin: Option<&str>, body: &[u8]) -> Response {
        let path = path.split('?').next().unwrap_or(path);
        let mut resp = match (method, path) {
            ("OPTIONS", p) if p.starts_with("/api/") => Response {
                status: 204,
                content_type: "text/plain",
                body: Vec::new(),
                headers: vec![
                    ("Access-Control-Allow-Methods", "GET, POST, OPTIONS".into()),
                    ("Access-Control-Allow-Headers", "Content-Type".into()),
                    ("Access-Control-Max-Age", "600".into()),
                ],
            },
            ("GET", "/api/manifest") => Response::json(200, self.manifest_body.clone()),
            ("POST", "/api/forecast") => forecast_response(&self.dataset, body),
            (_, "/api/manifest" | "/api/forecast") => {
                Response::error(405, None, format!("{method} not allowed on {path}"))
            }
            (_, p) if p.starts_with("/api/") => {
                Response::error(404, None, format!("no such endpoint: {p}"))
            }
            ("GET" | "HEAD", p) => static_file(self.config.ui_dir.as_deref(), p),
            _ => Response::error(405, None, format!("{method} not allowed on {path}")),
        };
        if origin == Some(self.config.cors_origin.as_str()) {
            resp.headers.push((
                "Access-Control-Allow-Origin",
                self.config.cors_origin.clone(),
            ));
            resp.headers.push(("Vary", "Origin".into()));
        }
        resp
    }
}

#[derive(Debug)]
pub enum ServeError {
    Startup(ForecastError),
    Bind(String),
}

impl std::fmt::Display for ServeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ServeError::Startup(e) => write!(f, "dataset cannot serve forecasts: {e}"),
            ServeError::Bind(e) => write!(f, "cannot listen: {e}"),
        }
    }
}

impl std::error::Error for ServeError {}

fn header(name: &str, value: &str) -> tiny_http::Header {
    tiny_http::Header::from_bytes(name.as_bytes(), value.as_bytes())
        .expect("static header names are valid")
}

fn handle(app: &App, mut request: tiny_http::Request) {
    let origin = request
        .headers()
        .iter()
        .find(|h| h.field.equiv("Origin"))
        .map(|h| h.value.as_str().to_owned());
    let mut body = Vec::new();
    let too_large = request.body_length().is_some_and(|n| n > MAX_BODY_BYTES)
        || request
            .as_reader()
            .take(MAX_BODY_BYTES as u64 + 1)
            .read_to_end(&mut body)
            .is_err()
        || body.len() > MAX_BODY_BYTES;
    let resp = if too_large {
        Response::error(
            413,
            None,
            format!("request body exceeds {MAX_BODY_BYTES} bytes"),
        )
    } else {
        let method = request.method().as_str().to_owned();
        app.route(&method, request.url(), origin.as_deref(), &body)
    };
    let mut out = tiny_http::Response::from_data(resp.body).with_status_code(resp.status);
    out.add_header(header("Content-Type", resp.content_type));
    for (k, v) in &resp.headers {
        out.add_header(header(k, v));
    }
    // A client that hung up is not our error to report.
    let _ = request.respond(out);
}

/// A running server; dropping it does not stop the workers, [`Server::shutdown`] does.
pub struct Server {
    http: Arc<tiny_http::Server>,
    workers: Vec<thread::JoinHandle<()>>,
    port: u16,
}

impl Server {
    pub fn port(&self) -> u16 {
        self.port
    }

    pub fn shutdown(self) {
        self.http.unblock();
        for _ in 1..self.workers.len() {
            self.http.unblock();
        }
        for w in self.workers {
            let _ = w.join();
        }
    }

    pub fn join(self) {
        for w in self.workers {
            let _ = w.join();
        }
    }
}

/// Binds `addr` (port 0 picks a free port) and starts the worker pool.
pub fn start(dataset: Dataset, config: ServiceConfig, addr: &str) -> Result<Server, ServeError> {
    let workers = config.workers.max(1);
    let app = Arc::new(App::new(dataset, config).map_err(ServeError::Startup)?);
    let http =
        Arc::new(tiny_http::Server::http(addr).map_err(|e| ServeError::Bind(e.to_string()))?);
    let port = http.server_addr().to_ip().map_or(0, |a| a.port());
    let handles = (0..workers)
        .map(|_| {
            let (app, http) = (Arc::clone(&app), Arc::clone(&http));
            thread::spawn(move || {
                while let Ok(request) = http.recv() {
                    handle(&app, request);
                }
            })
        })
        .collect();
    Ok(Server {
        http,
        workers: handles,
        port,
    })
}

/// Serves on `0.0.0.0:port` until the process exits.
pub fn serve(dataset: Dataset, config: ServiceConfig) -> Result<(), ServeError> {
    let addr = format!("0.0.0.0:{}", config.port);
    let server = start(dataset, config, &addr)?;
    eprintln!("housecast: listening on http://localhost:{}", server.port());
    server.join();
    Ok(())
}
