//! The four seat-change models and the discrete seat distributions they
//! produce.
//!
//! Every model reports seat change from the Republican side: negative
//! numbers are Democratic gains.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distributions::{student_t_cdf, student_t_sf};
use crate::ingest::{HistoricalElection, Party, SeatRating, HOUSE_SEATS};
use crate::polls::PollError;
use crate::regression::{fit_ols, RegressionError, RegressionFit};

/// Republican seat count at or below which Democrats control the chamber.
pub const REP_MINORITY_MAX: i64 = 217;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("training row {year} is missing `{field}`")]
    MissingPredictor { year: i32, field: &'static str },
    #[error("current-cycle input `{0}` is not set")]
    MissingInput(&'static str),
    #[error("no training rows for {0}")]
    EmptyTraining(&'static str),
    #[error("invalid value for `{field}`: {message}")]
    InvalidInput {
        field: &'static str,
        message: String,
    },
    #[error(transparent)]
    Regression(#[from] RegressionError),
    #[error(transparent)]
    Poll(#[from] PollError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelId {
    GenericBallot,
    Npdi,
    StructureX,
    SeatsInTrouble,
}

impl ModelId {
    pub const ALL: [ModelId; 4] = [
        ModelId::GenericBallot,
        ModelId::Npdi,
        ModelId::StructureX,
        ModelId::SeatsInTrouble,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelId::GenericBallot => "generic_ballot",
            ModelId::Npdi => "npdi",
            ModelId::StructureX => "structure_x",
            ModelId::SeatsInTrouble => "seats_in_trouble",
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        ModelId::ALL
            .into_iter()
            .find(|m| m.as_str() == norm)
            .ok_or_else(|| format!("unknown model `{s}` (expected one of generic_ballot, npdi, structure_x, seats_in_trouble)"))
    }
}

/// Which rating categories count a seat as "in trouble" for its holder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InTroubleDefinition {
    /// Lean toward the holder, toss-up, or anything worse.
    #[default]
    LeanOrWorse,
    /// Toss-up or worse.
    TossupOrWorse,
}

impl InTroubleDefinition {
    fn min_steps(self) -> u8 {
        match self {
            InTroubleDefinition::LeanOrWorse => 2,
            InTroubleDefinition::TossupOrWorse => 3,
        }
    }

    pub fn column(self) -> &'static str {
        match self {
            InTroubleDefinition::LeanOrWorse => "net_seats_in_play_lean",
            InTroubleDefinition::TossupOrWorse => "net_seats_in_play_tossup",
        }
    }

    fn history_value(self, row: &HistoricalElection) -> Option<i64> {
        match self {
            InTroubleDefinition::LeanOrWorse => row.net_seats_in_play_lean,
            InTroubleDefinition::TossupOrWorse => row.net_seats_in_play_tossup,
        }
    }
}

impl FromStr for InTroubleDefinition {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().replace('-', "_").as_str() {
            "lean_or_worse" => Ok(Self::LeanOrWorse),
            "tossup_or_worse" => Ok(Self::TossupOrWorse),
            other => Err(format!(
                "expected lean_or_worse or tossup_or_worse, got `{other}`"
            )),
        }
    }
}

/// Current-cycle values fed to the models, plus the what-if switches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForecastInputs {
    pub year: i32,
    pub president_party: Party,
    pub rep_seats_held: i64,
    /// Republican minus Democratic generic-ballot margin, 60–90 days out.
    pub generic_margin_sep: Option<f64>,
    /// Democratic two-party generic share 121–180 days out, as points away from 50.
    pub generic_dem_share_early: Option<f64>,
    pub rdi_growth_h1: Option<f64>,
    pub approval_june: Option<f64>,
    pub disapproval_june: Option<f64>,
    pub expert_seat_differential: Option<i64>,
    pub use_disapproval: bool,
    pub in_trouble_definition: InTroubleDefinition,
    pub expert_weight: f64,
}

impl ForecastInputs {
    pub const FIELDS: [&'static str; 12] = [
        "year",
        "president_party",
        "rep_seats_held",
        "generic_margin_sep",
        "generic_dem_share_early",
        "rdi_growth_h1",
        "approval_june",
        "disapproval_june",
        "expert_seat_differential",
        "use_disapproval",
        "in_trouble_definition",
        "expert_weight",
    ];

    /// Starts from a training-style row: the row's predictors become the
    /// current-cycle values. The early generic share is converted from a
    /// two-party percentage to points away from 50.
    pub fn from_election(row: &HistoricalElection) -> Self {
        Self {
            year: row.year,
            president_party: row.president_party,
            rep_seats_held: row.rep_seats_held,
            generic_margin_sep: row.generic_margin_sep,
            generic_dem_share_early: row.generic_dem_share_early.map(|s| s - 50.0),
            rdi_growth_h1: row.rdi_growth_h1,
            approval_june: row.approval_june,
            disapproval_june: row.disapproval_june,
            expert_seat_differential: row.expert_seat_differential,
            use_disapproval: false,
            in_trouble_definition: InTroubleDefinition::default(),
            expert_weight: 0.5,
        }
    }

    /// Applies one `key=value` override. Unknown keys are an error, and a
    /// rejected override leaves `self` untouched.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), OverrideError> {
        let mut next = self.clone();
        next.set_unchecked(key, value)?;
        next.validate()?;
        *self = next;
        Ok(())
    }

    fn set_unchecked(&mut self, key: &str, value: &str) -> Result<(), OverrideError> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T, OverrideError> {
            v.trim().parse().map_err(|_| OverrideError::BadValue {
                key: key.to_owned(),
                value: v.to_owned(),
            })
        }
        fn opt<T: FromStr>(key: &str, v: &str) -> Result<Option<T>, OverrideError> {
            if v.trim().is_empty() || v.trim() == "null" {
                Ok(None)
            } else {
                num(key, v).map(Some)
            }
        }
        let v = value;
        match key {
            "year" => self.year = num(key, v)?,
            "president_party" => self.president_party = num(key, v)?,
            "rep_seats_held" => self.rep_seats_held = num(key, v)?,
            "generic_margin_sep" => self.generic_margin_sep = opt(key, v)?,
            "generic_dem_share_early" => self.generic_dem_share_early = opt(key, v)?,
            "rdi_growth_h1" => self.rdi_growth_h1 = opt(key, v)?,
            "approval_june" => self.approval_june = opt(key, v)?,
            "disapproval_june" => self.disapproval_june = opt(key, v)?,
            "expert_seat_differential" => self.expert_seat_differential = opt(key, v)?,
            "use_disapproval" => self.use_disapproval = num(key, v)?,
            "in_trouble_definition" => self.in_trouble_definition = num(key, v)?,
            "expert_weight" => self.expert_weight = num(key, v)?,
            other => return Err(OverrideError::UnknownKey(other.to_owned())),
        }
        Ok(())
    }

    /// Applies a JSON-valued override, as received from the HTTP API.
    pub fn set_json(&mut self, key: &str, value: &serde_json::Value) -> Result<(), OverrideError> {
        let text = match value {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Null => String::new(),
            serde_json::Value::Number(_) | serde_json::Value::Bool(_) => value.to_string(),
            _ => {
                return Err(OverrideError::BadValue {
                    key: key.to_owned(),
                    value: value.to_string(),
                })
            }
        };
        self.set(key, &text)
    }

    pub fn validate(&self) -> Result<(), OverrideError> {
        let bad = |key: &str, value: String| {
            Err(OverrideError::BadValue {
                key: key.to_owned(),
                value,
            })
        };
        if !(0.0..=1.0).contains(&self.expert_weight) {
            return bad("expert_weight", self.expert_weight.to_string());
        }
        if !(0..=HOUSE_SEATS).contains(&self.rep_seats_held) {
            return bad("rep_seats_held", self.rep_seats_held.to_string());
        }
        for (k, v) in [
            ("generic_margin_sep", self.generic_margin_sep),
            ("generic_dem_share_early", self.generic_dem_share_early),
            ("rdi_growth_h1", self.rdi_growth_h1),
            ("approval_june", self.approval_june),
            ("disapproval_june", self.disapproval_june),
        ] {
            if let Some(x) = v {
                if !x.is_finite() {
                    return bad(k, x.to_string());
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OverrideError {
    #[error("unknown override `{0}`")]
    UnknownKey(String),
    #[error("invalid value `{value}` for override `{key}`")]
    BadValue { key: String, value: String },
    #[error("override `{0}` is not of the form KEY=VALUE")]
    Syntax(String),
}

impl OverrideError {
    pub fn field(&self) -> &str {
        match self {
            OverrideError::UnknownKey(k) => k,
            OverrideError::BadValue { key, .. } => key,
            OverrideError::Syntax(s) => s,
        }
    }
}

/// Splits `KEY=VALUE`.
pub fn parse_override(s: &str) -> Result<(&str, &str), OverrideError> {
    match s.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim(), v.trim())),
        _ => Err(OverrideError::Syntax(s.to_owned())),
    }
}

/// A model's seat-change forecast with its discrete distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeatForecast {
    pub model_id: ModelId,
    pub rep_seat_change_point: f64,
    pub predictive_std: f64,
    pub degrees_of_freedom: usize,
    pub rep_seats_held: i64,
    /// Probability of each integer Republican seat change.
    pub distribution: BTreeMap<i64, f64>,
    pub prob_dem_control: f64,
}

/// Total probability of the changes that leave Republicans at 217 seats or fewer.
pub fn dem_control_mass(distribution: &BTreeMap<i64, f64>, rep_seats_held: i64) -> f64 {
    distribution
        .range(..=REP_MINORITY_MAX - rep_seats_held)
        .map(|(_, p)| p)
        .sum()
}

/// Probability that a t-distributed change lands in `[lo, hi]` after
/// scaling. Uses whichever tail keeps the subtraction well conditioned.
fn t_interval_mass(lo: f64, hi: f64, df: f64) -> f64 {
    if lo >= 0.0 {
        student_t_sf(lo, df) - student_t_sf(hi, df)
    } else {
        student_t_cdf(hi, df) - student_t_cdf(lo, df)
    }
}

/// Discretizes `point + std · t(df)` onto integer seat changes, truncated
/// so Republican seats stay in `[0, 435]`, and renormalized.
///
/// A zero spread collapses to a point mass at the rounded point estimate.
pub fn seat_distribution(
    model_id: ModelId,
    point: f64,
    predictive_std: f64,
    df: usize,
    rep_seats_held: i64,
) -> SeatForecast {
    let lo_change = -rep_seats_held;
    let hi_change = HOUSE_SEATS - rep_seats_held;
    let mut distribution = BTreeMap::new();
    if predictive_std <= 0.0 || df == 0 {
        let k = (point.round() as i64).clamp(lo_change, hi_change);
        distribution.insert(k, 1.0);
    } else {
        let dff = df as f64;
        let mut raw = Vec::with_capacity((hi_change - lo_change + 1) as usize);
        for k in lo_change..=hi_change {
            let a = (k as f64 - 0.5 - point) / predictive_std;
            let b = (k as f64 + 0.5 - point) / predictive_std;
            raw.push((k, t_interval_mass(a, b, dff).max(0.0)));
        }
        let total: f64 = raw.iter().map(|(_, p)| p).sum();
        if total > 0.0 {
            distribution.extend(
                raw.into_iter()
                    .filter(|(_, p)| *p > 0.0)
                    .map(|(k, p)| (k, p / total)),
            );
        } else {
            // The whole mass lies beyond the feasible range; pin it to the nearer edge.
            let k = (point.round() as i64).clamp(lo_change, hi_change);
            distribution.insert(k, 1.0);
        }
    }
    let prob_dem_control = dem_control_mass(&distribution, rep_seats_held);
    SeatForecast {
        model_id,
        rep_seat_change_point: point,
        predictive_std,
        degrees_of_freedom: df,
        rep_seats_held,
        distribution,
        prob_dem_control,
    }
}

/// Seat distribution implied by a fitted regression's predictive t distribution at `x`.
pub fn seat_distribution_from_fit(
    model_id: ModelId,
    fit: &RegressionFit,
    x: &[f64],
    rep_seats_held: i64,
) -> Result<SeatForecast, ModelError> {
    let point = fit.predict_point(x)?;
    let s = fit.predictive_std(x)?;
    Ok(seat_distribution(
        model_id,
        point,
        s,
        fit.degrees_of_freedom,
        rep_seats_held,
    ))
}

/// `+1` for a Republican president, `-1` for a Democratic one.
pub fn president_indicator(party: Party) -> f64 {
    match party {
        Party::R => 1.0,
        Party::D => -1.0,
    }
}

fn need<T>(v: Option<T>, year: i32, field: &'static str) -> Result<T, ModelError> {
    v.ok_or(ModelError::MissingPredictor { year, field })
}

fn input<T>(v: Option<T>, field: &'static str) -> Result<T, ModelError> {
    v.ok_or(ModelError::MissingInput(field))
}

/// A regression ready to forecast: the fit and the current-cycle predictor vector.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedModel {
    pub fit: RegressionFit,
    pub x: Vec<f64>,
    /// Training years, in the order rows were presented.
    pub years: Vec<i32>,
}

impl FittedModel {
    pub fn point(&self) -> Result<f64, ModelError> {
        Ok(self.fit.predict_point(&self.x)?)
    }
}

// ---------------------------------------------------------------------------
// Generic ballot
// ---------------------------------------------------------------------------

fn generic_ballot_row(row: &HistoricalElection) -> Result<(Vec<f64>, f64), ModelError> {
    let margin = need(row.generic_margin_sep, row.year, "generic_margin_sep")?;
    let change = need(row.rep_seat_change, row.year, "rep_seat_change")?;
    Ok((
        vec![
            president_indicator(row.president_party),
            margin,
            row.rep_seats_held as f64,
        ],
        change as f64,
    ))
}

/// Republican seat change on president's party, September generic margin
/// and Republican seats held, over midterms before `inputs.year`.
pub fn generic_ballot_fit(
    history: &[HistoricalElection],
    inputs: &ForecastInputs,
) -> Result<FittedModel, ModelError> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut years = Vec::new();
    for row in history
        .iter()
        .filter(|r| r.is_midterm && r.year < inputs.year)
    {
        let (x, y) = generic_ballot_row(row)?;
        xs.push(x);
        ys.push(y);
        years.push(row.year);
    }
    if xs.is_empty() {
        return Err(ModelError::EmptyTraining("generic_ballot"));
    }
    let fit = fit_ols(&xs, &ys, true)?;
    let x = vec![
        president_indicator(inputs.president_party),
        input(inputs.generic_margin_sep, "generic_margin_sep")?,
        inputs.rep_seats_held as f64,
    ];
    Ok(FittedModel { fit, x, years })
}

pub fn generic_ballot_forecast(
    history: &[HistoricalElection],
    inputs: &ForecastInputs,
) -> Result<SeatForecast, ModelError> {
    let m = generic_ballot_fit(history, inputs)?;
    seat_distribution_from_fit(ModelId::GenericBallot, &m.fit, &m.x, inputs.rep_seats_held)
}

// ---------------------------------------------------------------------------
// National polls, district info: national vote step
// ---------------------------------------------------------------------------

/// Democratic national House vote (points from 50) on president's party and
/// the early generic share, midterms before `inputs.year`.
pub fn npdi_national_fit(
    history: &[HistoricalElection],
    inputs: &ForecastInputs,
    include_intercept: bool,
) -> Result<FittedModel, ModelError> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut years = Vec::new();
    for row in history
        .iter()
        .filter(|r| r.is_midterm && r.year < inputs.year)
    {
        let vote = need(row.dem_house_share, row.year, "dem_house_share")?;
        let early = need(
            row.generic_dem_share_early,
            row.year,
            "generic_dem_share_early",
        )?;
        xs.push(vec![president_indicator(row.president_party), early - 50.0]);
        ys.push(vote - 50.0);
        years.push(row.year);
    }
    if xs.is_empty() {
        return Err(ModelError::EmptyTraining("npdi"));
    }
    let fit = fit_ols(&xs, &ys, include_intercept)?;
    let x = vec![
        president_indicator(inputs.president_party),
        input(inputs.generic_dem_share_early, "generic_dem_share_early")?,
    ];
    Ok(FittedModel { fit, x, years })
}

/// Predicted Democratic two-party national House vote, in points away from 50.
pub fn npdi_national_vote(
    history: &[HistoricalElection],
    inputs: &ForecastInputs,
) -> Result<f64, ModelError> {
    npdi_national_fit(history, inputs, false)?.point()
}

// ---------------------------------------------------------------------------
// Seats in trouble
// ---------------------------------------------------------------------------

/// Democratic seats in trouble minus Republican seats in trouble.
pub fn seats_in_play_differential(ratings: &[SeatRating], definition: InTroubleDefinition) -> i64 {
    let threshold = definition.min_steps();
    ratings
        .iter()
        .filter(|r| r.category.steps_against(r.holder) >= threshold)
        .map(|r| match r.holder {
            Party::D => 1,
            Party::R => -1,
        })
        .sum()
}

pub fn seats_in_trouble_fit(
    history: &[HistoricalElection],
    net_seats_in_play: i64,
    inputs: &ForecastInputs,
    definition: InTroubleDefinition,
) -> Result<FittedModel, ModelError> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut years = Vec::new();
    for row in history.iter().filter(|r| r.year < inputs.year) {
        let Some(net) = definition.history_value(row) else {
            continue;
        };
        let change = need(row.rep_seat_change, row.year, "rep_seat_change")?;
        xs.push(vec![net as f64]);
        ys.push(change as f64);
        years.push(row.year);
    }
    if xs.is_empty() {
        return Err(ModelError::MissingPredictor {
            year: inputs.year,
            field: definition.column(),
        });
    }
    let fit = fit_ols(&xs, &ys, true)?;
    Ok(FittedModel {
        fit,
        x: vec![net_seats_in_play as f64],
        years,
    })
}

/// Republican seat change on net seats in play under `definition`, with the
/// current-cycle count taken from `ratings`.
pub fn seats_in_trouble_forecast(
    history: &[HistoricalElection],
    ratings: &[SeatRating],
    inputs: &ForecastInputs,
    definition: InTroubleDefinition,
) -> Result<SeatForecast, ModelError> {
    let net = seats_in_play_differential(ratings, definition);
    let m = seats_in_trouble_fit(history, net, inputs, definition)?;
    seat_distribution_from_fit(ModelId::SeatsInTrouble, &m.fit, &m.x, inputs.rep_seats_held)
}

// ---------------------------------------------------------------------------
// Structure-X
// ---------------------------------------------------------------------------

fn signed_for_president(change: f64, party: Party) -> f64 {
    match party {
        Party::R => change,
        Party::D => -change,
    }
}

/// Incumbent-party seat change on first-half RDI growth, June approval (or
/// disapproval) and a midterm indicator, over all elections before
/// `inputs.year`. The current-cycle vector assumes the cycle being forecast
/// is a midterm when `inputs.year` is not a presidential year.
pub fn structure_x_fit(
    history: &[HistoricalElection],
    inputs: &ForecastInputs,
) -> Result<FittedModel, ModelError> {
    let (opinion_field, pick): (&'static str, fn(&HistoricalElection) -> Option<f64>) =
        if inputs.use_disapproval {
            ("disapproval_june", |r| r.disapproval_june)
        } else {
            ("approval_june", |r| r.approval_june)
        };
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut years = Vec::new();
    for row in history.iter().filter(|r| r.year < inputs.year) {
        let rdi = need(row.rdi_growth_h1, row.year, "rdi_growth_h1")?;
        let opinion = need(pick(row), row.year, opinion_field)?;
        let change = need(row.incumbent_seat_change(), row.year, "rep_seat_change")?;
        xs.push(vec![rdi, opinion, if row.is_midterm { 1.0 } else { 0.0 }]);
        ys.push(change as f64);
        years.push(row.year);
    }
    if xs.is_empty() {
        return Err(ModelError::EmptyTraining("structure_x"));
    }
    let fit = fit_ols(&xs, &ys, true)?;
    let opinion = if inputs.use_disapproval {
        input(inputs.disapproval_june, "disapproval_june")?
    } else {
        input(inputs.approval_june, "approval_june")?
    };
    let midterm = if inputs.year % 4 == 2 { 1.0 } else { 0.0 };
    let x = vec![
        input(inputs.rdi_growth_h1, "rdi_growth_h1")?,
        opinion,
        midterm,
    ];
    Ok(FittedModel { fit, x, years })
}

/// Structural-only Structure-X forecast, as a Republican seat change.
pub fn structure_x_structural(
    history: &[HistoricalElection],
    inputs: &ForecastInputs,
) -> Result<SeatForecast, ModelError> {
    let m = structure_x_fit(history, inputs)?;
    let incumbent = m.point()?;
    let point = signed_for_president(incumbent, inputs.president_party);
    let s = m.fit.predictive_std(&m.x)?;
    Ok(seat_distribution(
        ModelId::StructureX,
        point,
        s,
        m.fit.degrees_of_freedom,
        inputs.rep_seats_held,
    ))
}

/// Blends the structural forecast with the expert seats-in-play
/// differential: `(1 - w)·structural + w·expert`. The spread is the
/// structural fit's.
pub fn structure_x_combined(
    structural: &SeatForecast,
    expert_seat_differential: i64,
    expert_weight: f64,
) -> Result<SeatForecast, ModelError> {
    if !(0.0..=1.0).contains(&expert_weight) {
        return Err(ModelError::InvalidInput {
            field: "expert_weight",
            message: format!("{expert_weight} outside [0, 1]"),
        });
    }
    let point = if expert_weight == 0.0 {
        structural.rep_seat_change_point
    } else if expert_weight == 1.0 {
        expert_seat_differential as f64
    } else {
        (1.0 - expert_weight) * structural.rep_seat_change_point
            + expert_weight * expert_seat_differential as f64
    };
    Ok(seat_distribution(
        ModelId::StructureX,
        point,
        structural.predictive_std,
        structural.degrees_of_freedom,
        structural.rep_seats_held,
    ))
}

pub fn structure_x_forecast(
    history: &[HistoricalElection],
    inputs: &ForecastInputs,
) -> Result<SeatForecast, ModelError> {
    let structural = structure_x_structural(history, inputs)?;
    if inputs.expert_weight == 0.0 {
        return Ok(structural);
    }
    let expert = input(inputs.expert_seat_differential, "expert_seat_differential")?;
    structure_x_combined(&structural, expert, inputs.expert_weight)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{RatingCategory, RatingSource};

    fn rating(id: &str, category: RatingCategory, holder: Party) -> SeatRating {
        SeatRating {
            district_id: id.into(),
            category,
            holder,
            source: RatingSource::Cook,
        }
    }

    #[test]
    fn model_ids_parse_both_spellings() {
        assert_eq!(
            "generic-ballot".parse::<ModelId>().unwrap(),
            ModelId::GenericBallot
        );
        assert_eq!(
            "seats_in_trouble".parse::<ModelId>().unwrap(),
            ModelId::SeatsInTrouble
        );
        assert!("senate".parse::<ModelId>().is_err());
    }

    #[test]
    fn point_mass_rounds() {
        let f = seat_distribution(ModelId::GenericBallot, -39.4, 0.0, 10, 241);
        assert_eq!(f.distribution.len(), 1);
        assert_eq!(f.distribution[&-39], 1.0);
        assert_eq!(f.prob_dem_control, 1.0);
    }

    #[test]
    fn distribution_normalized() {
        for (point, s, df) in [
            (-32.0, 14.0, 14),
            (3.0, 0.7, 1),
            (-300.0, 5.0, 3),
            (190.0, 30.0, 40),
        ] {
            let f = seat_distribution(ModelId::StructureX, point, s, df, 241);
            let total: f64 = f.distribution.values().sum();
            assert!((total - 1.0).abs() < 1e-9, "{point} {s} {df}: {total}");
            assert!(f.distribution.keys().all(|k| (-241..=194).contains(k)));
        }
    }

    #[test]
    fn dem_control_threshold() {
        let f = seat_distribution(ModelId::GenericBallot, -39.0, 12.0, 15, 240);
        let brute: f64 = f
            .distribution
            .iter()
            .filter(|(k, _)| **k <= -23)
            .map(|(_, p)| p)
            .sum();
        assert!((f.prob_dem_control - brute).abs() < 1e-15);
        assert!(f.prob_dem_control > 0.5);
    }

    #[test]
    fn differential_examples() {
        use RatingCategory::*;
        let symmetric = [
            rating("A", LeanR, Party::D),
            rating("B", LeanD, Party::R),
            rating("C", SafeD, Party::D),
        ];
        assert_eq!(
            seats_in_play_differential(&symmetric, InTroubleDefinition::LeanOrWorse),
            0
        );
        let one = [
            rating("A", Tossup, Party::D),
            rating("B", SafeR, Party::R),
            rating("C", LikelyD, Party::D),
        ];
        assert_eq!(
            seats_in_play_differential(&one, InTroubleDefinition::LeanOrWorse),
            1
        );
        assert_eq!(
            seats_in_play_differential(&one, InTroubleDefinition::TossupOrWorse),
            1
        );
        // lean toward the holder counts only under the wider definition
        let lean = [rating("A", LeanR, Party::R)];
        assert_eq!(
            seats_in_play_differential(&lean, InTroubleDefinition::LeanOrWorse),
            -1
        );
        assert_eq!(
            seats_in_play_differential(&lean, InTroubleDefinition::TossupOrWorse),
            0
        );
    }

    #[test]
    fn combined_weights() {
        let s = seat_distribution(ModelId::StructureX, -28.0, 15.0, 30, 241);
        assert_eq!(
            structure_x_combined(&s, -58, 0.5)
                .unwrap()
                .rep_seat_change_point,
            -43.0
        );
        assert_eq!(
            structure_x_combined(&s, -58, 0.0)
                .unwrap()
                .rep_seat_change_point,
            -28.0
        );
        assert_eq!(
            structure_x_combined(&s, -58, 1.0)
                .unwrap()
                .rep_seat_change_point,
            -58.0
        );
        assert!(structure_x_combined(&s, -58, 1.5).is_err());
        assert!(structure_x_combined(&s, -58, -0.1).is_err());
    }

    #[test]
    fn overrides() {
        let row = HistoricalElection {
            year: 2018,
            is_midterm: true,
            president_party: Party::R,
            rep_seats_held: 241,
            rep_seat_change: None,
            dem_house_share: None,
            generic_margin_sep: Some(-7.0),
            generic_dem_share_early: Some(53.5),
            rdi_growth_h1: Some(1.0),
            approval_june: Some(42.0),
            disapproval_june: Some(54.0),
            net_seats_in_play_lean: None,
            net_seats_in_play_tossup: None,
            expert_seat_differential: Some(-58),
        };
        let mut inputs = ForecastInputs::from_election(&row);
        assert_eq!(inputs.generic_dem_share_early, Some(3.5));
        inputs.set("expert_weight", "0.25").unwrap();
        assert_eq!(inputs.expert_weight, 0.25);
        inputs
            .set("in_trouble_definition", "tossup_or_worse")
            .unwrap();
        inputs
            .set_json("use_disapproval", &serde_json::json!(true))
            .unwrap();
        assert!(inputs.use_disapproval);
        inputs
            .set_json("approval_june", &serde_json::Value::Null)
            .unwrap();
        assert_eq!(inputs.approval_june, None);
        assert!(matches!(
            inputs.set("senate_seats", "3"),
            Err(OverrideError::UnknownKey(_))
        ));
        assert!(matches!(
            inputs.set("expert_weight", "2"),
            Err(OverrideError::BadValue { .. })
        ));
        assert!(matches!(
            inputs.set("rep_seats_held", "abc"),
            Err(OverrideError::BadValue { .. })
        ));
        assert_eq!(parse_override("a = 1").unwrap(), ("a", "1"));
        assert!(parse_override("novalue").is_err());
    }
}
