//! District-level Monte Carlo for the national-polls model.
//!
//! Each simulated election draws one national vote from the national-vote
//! regression's predictive distribution, moves every contested district by
//! the same swing relative to the previous cycle, and adds independent
//! Gaussian race noise whose width depends on whether an incumbent runs.
//!
//! Simulation `i` uses its own ChaCha stream (`seed`, stream `i`), so a run
//! is reproducible bit-for-bit no matter how the work is split across
//! threads.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{DistrictRecord, HistoricalElection, Party, HOUSE_SEATS};
use crate::models::{npdi_national_fit, ForecastInputs, ModelError, REP_MINORITY_MAX};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimulationError {
    #[error("district {0} has an incumbent and a contested race but no previous House share")]
    MissingHouseShare(String),
    #[error("invalid simulation config: {0}")]
    Config(String),
    #[error("no national House vote for {0}, needed as the swing baseline")]
    MissingBaseline(i32),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub n_sims: usize,
    pub seed: u64,
    /// Race-level noise (points) where an incumbent runs.
    pub sigma_incumbent: f64,
    /// Race-level noise (points) in open seats.
    pub sigma_open: f64,
    /// Extra points toward a first-term incumbent's party.
    pub freshman_surge: f64,
    /// Weight on the previous House result (vs presidential result) in
    /// contested incumbent races.
    pub baseline_weight_house: f64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            n_sims: 10_000,
            seed: 0,
            sigma_incumbent: 3.5,
            sigma_open: 6.0,
            freshman_surge: 2.0,
            baseline_weight_house: 0.5,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<(), SimulationError> {
        let err = |m: String| Err(SimulationError::Config(m));
        if self.n_sims == 0 {
            return err("n_sims must be at least 1".into());
        }
        if !(self.sigma_incumbent >= 0.0 && self.sigma_open >= 0.0) {
            return err("noise widths must be non-negative".into());
        }
        if self.sigma_incumbent > self.sigma_open {
            return err(format!(
                "sigma_incumbent ({}) must not exceed sigma_open ({})",
                self.sigma_incumbent, self.sigma_open
            ));
        }
        if !(self.freshman_surge >= 0.0) {
            return err("freshman_surge must be non-negative".into());
        }
        if !(0.0..=1.0).contains(&self.baseline_weight_house) {
            return err("baseline_weight_house must lie in [0, 1]".into());
        }
        Ok(())
    }
}

/// Where a district starts before the national swing is applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistrictBaseline {
    /// Outcome fixed in every simulation.
    Conceded(Party),
    /// Expected Democratic two-party share and race noise width.
    Contested { dem_share: f64, sigma: f64 },
}

/// Expected Democratic share for a district, or its conceded winner.
///
/// A district with a single major-party candidate this cycle goes to that
/// party. Otherwise a seat nobody contested last time stays with its
/// previous winner. Open seats start from the presidential share;
/// incumbent seats blend House and presidential shares and add the
/// freshman surge toward a first-term incumbent.
pub fn district_baseline(
    district: &DistrictRecord,
    config: &SimulationConfig,
) -> Result<DistrictBaseline, SimulationError> {
    if let Some(p) = district.uncontested_2018_winner.party() {
        return Ok(DistrictBaseline::Conceded(p));
    }
    if !district.contested_2016 {
        return Ok(DistrictBaseline::Conceded(district.winner_2016));
    }
    Ok(match district.incumbency_2018.party() {
        None => DistrictBaseline::Contested {
            dem_share: district.dem_pres_share_2016,
            sigma: config.sigma_open,
        },
        Some(incumbent) => {
            let house = district
                .dem_house_share_2016
                .ok_or_else(|| SimulationError::MissingHouseShare(district.district_id.clone()))?;
            let w = config.baseline_weight_house;
            let mut share = w * house + (1.0 - w) * district.dem_pres_share_2016;
            if district.freshman {
                share += match incumbent {
                    Party::D => config.freshman_surge,
                    Party::R => -config.freshman_surge,
                };
            }
            DistrictBaseline::Contested {
                dem_share: share,
                sigma: config.sigma_incumbent,
            }
        }
    })
}

pub fn district_baselines(
    districts: &[DistrictRecord],
    config: &SimulationConfig,
) -> Result<Vec<DistrictBaseline>, SimulationError> {
    districts
        .iter()
        .map(|d| district_baseline(d, config))
        .collect()
}

/// One simulated election.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElectionDraw {
    pub rep_seats: i64,
    /// `true` where the Democrat won, in district order.
    pub dem_wins: Vec<bool>,
}

/// The random stream for simulation `index` under `seed`.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Plays one election: every contested district moves by `swing_delta`
/// plus its own noise; the Democrat wins above 50.
///
/// Exactly one normal variate is drawn per contested district, in district
/// order, whatever the swing, so two calls with the same stream see the
/// same race noise.
pub fn simulate_election<R: rand::Rng + ?Sized>(
    baselines: &[DistrictBaseline],
    swing_delta: f64,
    rng: &mut R,
) -> ElectionDraw {
    let mut dem_wins = Vec::with_capacity(baselines.len());
    for b in baselines {
        let dem = match *b {
            DistrictBaseline::Conceded(p) => p == Party::D,
            DistrictBaseline::Contested { dem_share, sigma } => {
                let z: f64 = StandardNormal.sample(rng);
                dem_share + swing_delta + sigma * z > 50.0
            }
        };
        dem_wins.push(dem);
    }
    let rep_seats = dem_wins.iter().filter(|d| !**d).count() as i64;
    ElectionDraw {
        rep_seats,
        dem_wins,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    /// Republican seat change → share of simulations.
    pub seat_histogram: BTreeMap<i64, f64>,
    pub mean_change: f64,
    pub std_change: f64,
    pub prob_dem_control: f64,
    /// Share of simulations in which each district changed party.
    pub flip_probability: BTreeMap<String, f64>,
    /// Predicted Democratic two-party national vote, in percent.
    pub national_vote_point: f64,
    /// Mean simulated national swing against the previous cycle.
    pub mean_swing: f64,
    pub n_sims: usize,
    pub seed: u64,
    pub rep_seats_held: i64,
    pub degrees_of_freedom: usize,
}

/// Per-simulation national vote (percent) and election outcome.
#[derive(Debug, Clone)]
pub struct SimulationRun {
    pub national_vote: Vec<f64>,
    pub draws: Vec<ElectionDraw>,
    pub national_vote_point: f64,
    pub degrees_of_freedom: usize,
}

/// National House vote at the previous election, the swing baseline.
pub fn previous_national_vote(
    history: &[HistoricalElection],
    year: i32,
) -> Result<f64, SimulationError> {
    history
        .iter()
        .filter(|r| r.year < year)
        .max_by_key(|r| r.year)
        .and_then(|r| r.dem_house_share)
        .ok_or(SimulationError::MissingBaseline(year - 2))
}

/// Runs every simulation and keeps the per-simulation outcomes.
pub fn simulate_all(
    history: &[HistoricalElection],
    inputs: &ForecastInputs,
    districts: &[DistrictRecord],
    config: &SimulationConfig,
) -> Result<SimulationRun, SimulationError> {
    config.validate()?;
    let national = npdi_national_fit(history, inputs, false)?;
    let baseline_vote = previous_national_vote(history, inputs.year)?;
    let baselines = district_baselines(districts, config)?;
    let point = national.point()?;
    let outcomes: Vec<(f64, ElectionDraw)> = (0..config.n_sims as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(config.seed, i);
            let vote = 50.0 + national.fit.sample_predictive(&national.x, &mut rng)?;
            let draw = simulate_election(&baselines, vote - baseline_vote, &mut rng);
            Ok((vote, draw))
        })
        .collect::<Result<_, ModelError>>()?;
    let (national_vote, draws) = outcomes.into_iter().unzip();
    Ok(SimulationRun {
        national_vote,
        draws,
        national_vote_point: 50.0 + point,
        degrees_of_freedom: national.fit.degrees_of_freedom,
    })
}

/// Aggregates simulated elections into empirical probabilities.
pub fn summarize(
    run: &SimulationRun,
    districts: &[DistrictRecord],
    rep_seats_held: i64,
    baseline_vote: f64,
    config: &SimulationConfig,
) -> SimulationResult {
    let n = run.draws.len();
    let mut seat_counts: BTreeMap<i64, usize> = BTreeMap::new();
    let mut flips = vec![0usize; districts.len()];
    for draw in &run.draws {
        *seat_counts
            .entry(draw.rep_seats - rep_seats_held)
            .or_default() += 1;
        for ((count, d), dem) in flips.iter_mut().zip(districts).zip(&draw.dem_wins) {
            if (d.winner_2016 == Party::D) != *dem {
                *count += 1;
            }
        }
    }
    let seat_histogram: BTreeMap<i64, f64> = seat_counts
        .iter()
        .map(|(k, c)| (*k, *c as f64 / n as f64))
        .collect();
    let mean_change: f64 = seat_histogram.iter().map(|(k, p)| *k as f64 * p).sum();
    let var: f64 = seat_histogram
        .iter()
        .map(|(k, p)| (*k as f64 - mean_change).powi(2) * p)
        .sum();
    let dem_control = seat_counts
        .range(..=REP_MINORITY_MAX - rep_seats_held)
        .map(|(_, c)| c)
        .sum::<usize>() as f64
        / n as f64;
    let flip_probability = districts
        .iter()
        .zip(&flips)
        .map(|(d, c)| (d.district_id.clone(), *c as f64 / n as f64))
        .collect();
    let mean_swing = run
        .national_vote
        .iter()
        .map(|v| v - baseline_vote)
        .sum::<f64>()
        / n as f64;
    SimulationResult {
        seat_histogram,
        mean_change,
        std_change: var.sqrt(),
        prob_dem_control: dem_control,
        flip_probability,
        national_vote_point: run.national_vote_point,
        mean_swing,
        n_sims: n,
        seed: config.seed,
        rep_seats_held,
        degrees_of_freedom: run.degrees_of_freedom,
    }
}

/// Full national-polls pipeline: national vote, swing draws, district play.
pub fn run_simulations(
    history: &[HistoricalElection],
    inputs: &ForecastInputs,
    districts: &[DistrictRecord],
    config: &SimulationConfig,
) -> Result<SimulationResult, SimulationError> {
    if districts.len() as i64 != HOUSE_SEATS {
        return Err(SimulationError::Config(format!(
            "expected {HOUSE_SEATS} districts, got {}",
            districts.len()
        )));
    }
    let run = simulate_all(history, inputs, districts, config)?;
    let baseline_vote = previous_national_vote(history, inputs.year)?;
    Ok(summarize(
        &run,
        districts,
        inputs.rep_seats_held,
        baseline_vote,
        config,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{Incumbency, UncontestedWinner};

    fn district(
        id: &str,
        winner: Party,
        house: Option<f64>,
        pres: f64,
        inc: Incumbency,
        freshman: bool,
    ) -> DistrictRecord {
        DistrictRecord {
            district_id: id.into(),
            winner_2016: winner,
            dem_house_share_2016: house,
            contested_2016: house.is_some(),
            dem_pres_share_2016: pres,
            incumbency_2018: inc,
            freshman,
            uncontested_2018_winner: UncontestedWinner::None,
        }
    }

    #[test]
    fn uncontested_last_time_is_conceded() {
        let d = district(
            "TX-99",
            Party::D,
            None,
            70.0,
            Incumbency::DemIncumbent,
            false,
        );
        assert_eq!(
            district_baseline(&d, &SimulationConfig::default()).unwrap(),
            DistrictBaseline::Conceded(Party::D)
        );
    }

    #[test]
    fn open_seat_uses_presidential_share() {
        let d = district("AZ-2", Party::R, Some(43.0), 50.0, Incumbency::Open, false);
        let cfg = SimulationConfig::default();
        assert_eq!(
            district_baseline(&d, &cfg).unwrap(),
            DistrictBaseline::Contested {
                dem_share: 50.0,
                sigma: cfg.sigma_open
            }
        );
    }

    #[test]
    fn freshman_blend() {
        let cfg = SimulationConfig {
            freshman_surge: 1.7,
            baseline_weight_house: 0.5,
            ..Default::default()
        };
        let d = district(
            "NV-3",
            Party::D,
            Some(55.0),
            53.0,
            Incumbency::DemIncumbent,
            true,
        );
        match district_baseline(&d, &cfg).unwrap() {
            DistrictBaseline::Contested { dem_share, sigma } => {
                assert!((dem_share - (54.0 + 1.7)).abs() < 1e-12);
                assert_eq!(sigma, cfg.sigma_incumbent);
            }
            other => panic!("{other:?}"),
        }
        let r = district(
            "NY-19",
            Party::R,
            Some(45.0),
            47.0,
            Incumbency::RepIncumbent,
            true,
        );
        match district_baseline(&r, &cfg).unwrap() {
            DistrictBaseline::Contested { dem_share, .. } => {
                assert!((dem_share - (46.0 - 1.7)).abs() < 1e-12)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn incumbent_without_house_share_errors() {
        let mut d = district(
            "X-1",
            Party::R,
            Some(40.0),
            40.0,
            Incumbency::RepIncumbent,
            false,
        );
        d.dem_house_share_2016 = None;
        assert!(matches!(
            district_baseline(&d, &SimulationConfig::default()),
            Err(SimulationError::MissingHouseShare(_))
        ));
    }

    #[test]
    fn sole_candidate_this_cycle_wins() {
        let mut d = district(
            "CA-8",
            Party::R,
            Some(38.0),
            40.0,
            Incumbency::RepIncumbent,
            false,
        );
        d.uncontested_2018_winner = UncontestedWinner::R;
        assert_eq!(
            district_baseline(&d, &SimulationConfig::default()).unwrap(),
            DistrictBaseline::Conceded(Party::R)
        );
    }

    #[test]
    fn identity_dynamics() {
        let cfg = SimulationConfig {
            sigma_incumbent: 0.0,
            sigma_open: 0.0,
            freshman_surge: 0.0,
            baseline_weight_house: 1.0,
            ..Default::default()
        };
        let ds = vec![
            district(
                "A",
                Party::D,
                Some(51.0),
                40.0,
                Incumbency::DemIncumbent,
                true,
            ),
            district(
                "B",
                Party::R,
                Some(49.5),
                60.0,
                Incumbency::RepIncumbent,
                false,
            ),
            district("C", Party::R, None, 45.0, Incumbency::RepIncumbent, false),
        ];
        let b = district_baselines(&ds, &cfg).unwrap();
        let draw = simulate_election(&b, 0.0, &mut substream(3, 0));
        assert_eq!(draw.dem_wins, vec![true, false, false]);
        assert_eq!(draw.rep_seats, 2);
    }

    #[test]
    fn config_validation() {
        assert!(SimulationConfig::default().validate().is_ok());
        assert!(SimulationConfig {
            n_sims: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(SimulationConfig {
            sigma_incumbent: 7.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(SimulationConfig {
            baseline_weight_house: 1.2,
            ..Default::default()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn substreams_differ() {
        use rand::RngCore;
        assert_eq!(substream(5, 1).next_u64(), substream(5, 1).next_u64());
        assert_ne!(substream(5, 1).next_u64(), substream(5, 2).next_u64());
    }
}
