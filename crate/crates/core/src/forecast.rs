//! Request → document: the single forecasting entry point shared by the CLI
//! and the HTTP service, and the document's JSON and CSV encodings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};
use thiserror::Error;

use crate::dataset::Dataset;
use crate::models::{
    generic_ballot_forecast, seats_in_trouble_forecast, structure_x_combined,
    structure_x_structural, ForecastInputs, ModelError, ModelId, OverrideError, SeatForecast,
};
use crate::simulation::{run_simulations, SimulationConfig, SimulationError};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum ForecastError {
    /// The request itself is wrong (unknown model, bad override).
    #[error("{field}: {message}")]
    Request { field: String, message: String },
    /// The request is well-formed but the model cannot run on it.
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Simulation(#[from] SimulationError),
}

impl From<OverrideError> for ForecastError {
    fn from(e: OverrideError) -> Self {
        ForecastError::Request {
            field: e.field().to_owned(),
            message: e.to_string(),
        }
    }
}

/// What to forecast and under which what-if changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForecastRequest {
    pub model_id: String,
    #[serde(default)]
    pub overrides: BTreeMap<String, Value>,
    #[serde(default)]
    pub n_sims: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl ForecastRequest {
    pub fn new(model: ModelId) -> Self {
        Self {
            model_id: model.as_str().to_owned(),
            overrides: BTreeMap::new(),
            n_sims: None,
            seed: None,
        }
    }

    pub fn model(&self) -> Result<ModelId, ForecastError> {
        self.model_id
            .parse()
            .map_err(|message| ForecastError::Request {
                field: "model_id".into(),
                message,
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionEntry {
    pub change: i64,
    pub probability: f64,
}

/// The forecast as emitted by `forecast` and `POST /api/forecast`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputDocument {
    pub model_id: ModelId,
    pub inputs: ForecastInputs,
    /// Republican seat change; negative is a Democratic gain.
    pub rep_seat_change_point: f64,
    pub predictive_std: f64,
    pub degrees_of_freedom: usize,
    pub rep_seats_held: i64,
    pub distribution: Vec<DistributionEntry>,
    pub prob_dem_control: f64,
    /// Democratic two-party national House vote (national-polls model only).
    pub national_vote_dem_share: Option<f64>,
    /// Current-cycle net seats in play (seats-in-trouble model only).
    pub net_seats_in_play: Option<i64>,
    /// Structural-only point before the expert blend (Structure-X only).
    pub structural_point: Option<f64>,
    pub n_sims: Option<usize>,
    pub seed: Option<u64>,
    pub dataset_name: String,
    pub dataset_digest: String,
    pub engine_version: String,
}

fn entries(distribution: &BTreeMap<i64, f64>) -> Vec<DistributionEntry> {
    distribution
        .iter()
        .map(|(k, p)| DistributionEntry {
            change: *k,
            probability: *p,
        })
        .collect()
}

/// Resolves the request's inputs: dataset defaults, then overrides.
pub fn resolve_inputs(
    dataset: &Dataset,
    request: &ForecastRequest,
) -> Result<ForecastInputs, ForecastError> {
    let mut inputs = dataset.default_inputs()?;
    for (key, value) in &request.overrides {
        inputs.set_json(key, value)?;
    }
    Ok(inputs)
}

/// Runs one forecast. Deterministic in (dataset, request).
pub fn run_forecast(
    dataset: &Dataset,
    request: &ForecastRequest,
) -> Result<OutputDocument, ForecastError> {
    let model = request.model()?;
    if model != ModelId::Npdi && (request.n_sims.is_some() || request.seed.is_some()) {
        return Err(ForecastError::Request {
            field: if request.n_sims.is_some() {
                "n_sims"
            } else {
                "seed"
            }
            .into(),
            message: "only the npdi model is simulated".into(),
        });
    }
    if request.n_sims == Some(0) {
        return Err(ForecastError::Request {
            field: "n_sims".into(),
            message: "must be at least 1".into(),
        });
    }
    let inputs = resolve_inputs(dataset, request)?;
    let history = dataset.training_history(model);

    let mut doc_extra = (None, None, None, None, None);
    let forecast: SeatForecast = match model {
        ModelId::GenericBallot => generic_ballot_forecast(&history, &inputs)?,
        ModelId::SeatsInTrouble => {
            let ratings = dataset.cycle_ratings();
            doc_extra.1 = Some(dataset.cycle_seats_in_play(inputs.in_trouble_definition));
            seats_in_trouble_forecast(&history, &ratings, &inputs, inputs.in_trouble_definition)?
        }
        ModelId::StructureX => {
            let structural = structure_x_structural(&history, &inputs)?;
            doc_extra.2 = Some(structural.rep_seat_change_point);
            if inputs.expert_weight == 0.0 {
                structural
            } else {
                let expert = inputs
                    .expert_seat_differential
                    .ok_or(ModelError::MissingInput("expert_seat_differential"))?;
                structure_x_combined(&structural, expert, inputs.expert_weight)?
            }
        }
        ModelId::Npdi => {
            let config = SimulationConfig {
                n_sims: request.n_sims.unwrap_or(dataset.manifest.simulation.n_sims),
                seed: request.seed.unwrap_or(dataset.manifest.simulation.seed),
                ..dataset.manifest.simulation.clone()
            };
            let result = run_simulations(&history, &inputs, &dataset.districts, &config)?;
            doc_extra.0 = Some(result.national_vote_point);
            doc_extra.3 = Some(config.n_sims);
            doc_extra.4 = Some(config.seed);
            SeatForecast {
                model_id: ModelId::Npdi,
                rep_seat_change_point: result.mean_change,
                predictive_std: result.std_change,
                degrees_of_freedom: result.degrees_of_freedom,
                rep_seats_held: inputs.rep_seats_held,
                distribution: result.seat_histogram,
                prob_dem_control: result.prob_dem_control,
            }
        }
    };

    Ok(OutputDocument {
        model_id: model,
        inputs,
        rep_seat_change_point: forecast.rep_seat_change_point,
        predictive_std: forecast.predictive_std,
        degrees_of_freedom: forecast.degrees_of_freedom,
        rep_seats_held: forecast.rep_seats_held,
        distribution: entries(&forecast.distribution),
        prob_dem_control: forecast.prob_dem_control,
        national_vote_dem_share: doc_extra.0,
        net_seats_in_play: doc_extra.1,
        structural_point: doc_extra.2,
        n_sims: doc_extra.3,
        seed: doc_extra.4,
        dataset_name: dataset.manifest.name.clone(),
        dataset_digest: dataset.digest.clone(),
        engine_version: ENGINE_VERSION.to_owned(),
    })
}

/// Formats a finite float with 17 significant digits.
pub fn format_sig17(v: f64) -> String {
    if v == 0.0 {
        return "0.0".into();
    }
    let sci = format!("{v:.16e}");
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    if (-5..16).contains(&exp) {
        let decimals = (16 - exp) as usize;
        format!("{v:.decimals$}")
    } else {
        sci
    }
}

/// Rewrites every non-integer number in a JSON tree to 17 significant digits.
fn normalize_floats(value: &mut Value) {
    match value {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            if let Some(f) = n.as_f64() {
                *value = if f.is_finite() {
                    Value::Number(
                        format_sig17(f)
                            .parse::<Number>()
                            .expect("formatted float is valid JSON"),
                    )
                } else {
                    Value::Null
                };
            }
        }
        Value::Array(items) => items.iter_mut().for_each(normalize_floats),
        Value::Object(map) => map.values_mut().for_each(normalize_floats),
        _ => {}
    }
}

/// Serializes any value as schema-stable JSON: sorted keys and 17
/// significant digits on floats.
pub fn to_stable_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("documents serialize");
    normalize_floats(&mut v);
    serde_json::to_string_pretty(&v).expect("values serialize")
}

impl OutputDocument {
    pub fn to_json(&self) -> String {
        to_stable_json(self)
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// One row per distribution entry, headline fields repeated on every row.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "model_id",
            "change",
            "probability",
            "rep_seat_change_point",
            "prob_dem_control",
        ])
        .expect("in-memory write");
        for e in &self.distribution {
            w.write_record([
                self.model_id.as_str().to_owned(),
                e.change.to_string(),
                format_sig17(e.probability),
                format_sig17(self.rep_seat_change_point),
                format_sig17(self.prob_dem_control),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }
}
