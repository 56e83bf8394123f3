//! A fixture directory: `dataset.toml` plus the four CSV files it names.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ingest::{
    self, DistrictRecord, GenericBallotPoll, HistoricalElection, IngestError, Party, RatingSource,
    SeatRating, HOUSE_SEATS,
};
use crate::models::{
    seats_in_play_differential, ForecastInputs, InTroubleDefinition, ModelError, ModelId,
};
use crate::polls::{filter_live, window_average_dem_share, window_average_margin, PollWindow};
use crate::simulation::SimulationConfig;

pub const MANIFEST_FILE: &str = "dataset.toml";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileNames {
    pub polls: String,
    pub elections: String,
    pub districts: String,
    pub ratings: String,
}

impl Default for FileNames {
    fn default() -> Self {
        Self {
            polls: "polls.csv".into(),
            elections: "elections.csv".into(),
            districts: "districts.csv".into(),
            ratings: "ratings.csv".into(),
        }
    }
}

/// First election year each model trains on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainingStart {
    pub generic_ballot: i32,
    pub npdi: i32,
    pub structure_x: i32,
    pub seats_in_trouble: i32,
}

impl Default for TrainingStart {
    fn default() -> Self {
        Self {
            generic_ballot: 1946,
            npdi: 1946,
            structure_x: 1946,
            seats_in_trouble: 1946,
        }
    }
}

impl TrainingStart {
    pub fn for_model(&self, model: ModelId) -> i32 {
        match model {
            ModelId::GenericBallot => self.generic_ballot,
            ModelId::Npdi => self.npdi,
            ModelId::StructureX => self.structure_x,
            ModelId::SeatsInTrouble => self.seats_in_trouble,
        }
    }
}

/// How current-cycle inputs are assembled before user overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CycleDefaults {
    /// Fill the two generic-ballot inputs from live polls in `polls.csv`
    /// when the cycle row leaves them empty.
    pub generic_from_polls: bool,
    /// Rater whose seat ratings feed the seats-in-play count.
    pub ratings_source: RatingSource,
    pub expert_weight: f64,
    pub use_disapproval: bool,
    pub in_trouble_definition: InTroubleDefinition,
    /// Raw `key = value` overrides applied last.
    pub overrides: BTreeMap<String, toml::Value>,
}

impl Default for CycleDefaults {
    fn default() -> Self {
        Self {
            generic_from_polls: true,
            ratings_source: RatingSource::Cook,
            expert_weight: 0.5,
            use_disapproval: false,
            in_trouble_definition: InTroubleDefinition::LeanOrWorse,
            overrides: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub name: String,
    pub cycle_year: i32,
    pub election_date: NaiveDate,
    #[serde(default)]
    pub files: FileNames,
    #[serde(default)]
    pub training: TrainingStart,
    #[serde(default)]
    pub defaults: CycleDefaults,
    #[serde(default)]
    pub simulation: SimulationConfig,
    /// Free-form provenance notes, carried through to the API manifest.
    #[serde(default)]
    pub sources: BTreeMap<String, String>,
}

impl Manifest {
    pub fn from_toml_str(s: &str) -> Result<Self, IngestError> {
        let m: Manifest = toml::from_str(s).map_err(|e| IngestError::Manifest(e.to_string()))?;
        m.simulation
            .validate()
            .map_err(|e| IngestError::Manifest(e.to_string()))?;
        if !(0.0..=1.0).contains(&m.defaults.expert_weight) {
            return Err(IngestError::Manifest(
                "defaults.expert_weight outside [0, 1]".into(),
            ));
        }
        Ok(m)
    }
}

/// Every fixture file, loaded and cross-checked. Immutable after loading.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub root: PathBuf,
    pub manifest: Manifest,
    pub polls: Vec<GenericBallotPoll>,
    pub elections: Vec<HistoricalElection>,
    pub districts: Vec<DistrictRecord>,
    pub ratings: Vec<SeatRating>,
    /// SHA-256 of each input file, keyed by file name.
    pub file_digests: BTreeMap<String, String>,
    /// SHA-256 over the manifest and all four files.
    pub digest: String,
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, IngestError> {
    fs::read(path).map_err(|source| IngestError::Io {
        file: path.display().to_string(),
        source,
    })
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

impl Dataset {
    /// Loads and validates a fixture directory.
    pub fn load(dir: impl AsRef<Path>) -> Result<Self, IngestError> {
        let root = dir.as_ref().to_path_buf();
        let manifest_bytes = read_bytes(&root.join(MANIFEST_FILE))?;
        let manifest_text = String::from_utf8(manifest_bytes.clone())
            .map_err(|_| IngestError::Manifest("dataset.toml is not UTF-8".into()))?;
        let manifest = Manifest::from_toml_str(&manifest_text)?;

        let names = &manifest.files;
        let mut overall = Sha256::new();
        overall.update(MANIFEST_FILE.as_bytes());
        overall.update(&manifest_bytes);
        let mut file_digests = BTreeMap::new();
        file_digests.insert(
            MANIFEST_FILE.to_owned(),
            hex(&Sha256::digest(&manifest_bytes)),
        );

        let mut raw = BTreeMap::new();
        for name in [
            &names.polls,
            &names.elections,
            &names.districts,
            &names.ratings,
        ] {
            let bytes = read_bytes(&root.join(name))?;
            overall.update(name.as_bytes());
            overall.update((bytes.len() as u64).to_le_bytes());
            overall.update(&bytes);
            file_digests.insert(name.clone(), hex(&Sha256::digest(&bytes)));
            raw.insert(name.clone(), bytes);
        }

        let polls = ingest::parse_polls(raw[&names.polls].as_slice(), manifest.election_date)
            .map_err(|e| ingest::relabel(e, &names.polls))?;
        let elections = ingest::parse_elections(raw[&names.elections].as_slice())
            .map_err(|e| ingest::relabel(e, &names.elections))?;
        let districts = ingest::parse_districts(raw[&names.districts].as_slice())
            .map_err(|e| ingest::relabel(e, &names.districts))?;
        let ratings = ingest::parse_ratings(raw[&names.ratings].as_slice())
            .map_err(|e| ingest::relabel(e, &names.ratings))?;

        if districts.len() != HOUSE_SEATS as usize {
            return Err(IngestError::RowCount {
                file: names.districts.clone(),
                expected: HOUSE_SEATS as usize,
                found: districts.len(),
            });
        }
        ingest::check_rating_coverage(&ratings, &districts).map_err(|e| match e {
            IngestError::UnknownDistrict { district_id, .. } => IngestError::UnknownDistrict {
                file: names.ratings.clone(),
                district_id,
            },
            other => other,
        })?;
        if !elections.iter().any(|e| e.year == manifest.cycle_year) {
            return Err(IngestError::Manifest(format!(
                "{} has no row for cycle year {}",
                names.elections, manifest.cycle_year
            )));
        }

        Ok(Self {
            root,
            manifest,
            polls,
            elections,
            districts,
            ratings,
            file_digests,
            digest: hex(&overall.finalize()),
        })
    }

    /// Elections a model may train on: from its configured start year on.
    pub fn training_history(&self, model: ModelId) -> Vec<HistoricalElection> {
        let start = self.manifest.training.for_model(model);
        self.elections
            .iter()
            .filter(|e| e.year >= start)
            .cloned()
            .collect()
    }

    pub fn cycle_row(&self) -> &HistoricalElection {
        self.elections
            .iter()
            .find(|e| e.year == self.manifest.cycle_year)
            .expect("cycle row checked at load")
    }

    pub fn cycle_ratings(&self) -> Vec<SeatRating> {
        let source = self.manifest.defaults.ratings_source;
        self.ratings
            .iter()
            .filter(|r| r.source == source)
            .cloned()
            .collect()
    }

    pub fn live_polls(&self) -> Vec<GenericBallotPoll> {
        filter_live(&self.polls)
    }

    /// Current-cycle inputs before any user override.
    pub fn default_inputs(&self) -> Result<ForecastInputs, ModelError> {
        let row = self.cycle_row();
        let defaults = &self.manifest.defaults;
        let mut inputs = ForecastInputs::from_election(row);
        if defaults.generic_from_polls {
            let live = self.live_polls();
            if inputs.generic_margin_sep.is_none() {
                inputs.generic_margin_sep =
                    Some(window_average_margin(&live, PollWindow::EARLY_SEPTEMBER)?);
            }
            if inputs.generic_dem_share_early.is_none() {
                inputs.generic_dem_share_early =
                    Some(window_average_dem_share(&live, PollWindow::EARLY_SUMMER)?);
            }
        }
        inputs.expert_weight = defaults.expert_weight;
        inputs.use_disapproval = defaults.use_disapproval;
        inputs.in_trouble_definition = defaults.in_trouble_definition;
        for (key, value) in &defaults.overrides {
            let text = match value {
                toml::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            inputs
                .set(key, &text)
                .map_err(|e| ModelError::InvalidInput {
                    field: "defaults.overrides",
                    message: e.to_string(),
                })?;
        }
        Ok(inputs)
    }

    /// Net seats in play for the cycle under `definition`.
    pub fn cycle_seats_in_play(&self, definition: InTroubleDefinition) -> i64 {
        seats_in_play_differential(&self.cycle_ratings(), definition)
    }

    pub fn seats_held_by(&self, party: Party) -> usize {
        self.districts
            .iter()
            .filter(|d| d.winner_2016 == party)
            .count()
    }
}
