//! CSV ingestion for the four fixture files.
//!
//! Every loader either returns a fully validated sequence or fails with the
//! first problem it meets, naming the file, the line and (where known) the
//! column. Nothing partially parsed is ever handed back.
//!
//! | file            | key            | notes                                        |
//! |-----------------|----------------|----------------------------------------------|
//! | `polls.csv`     | none           | ISO-8601 dates, shares in percentage points   |
//! | `elections.csv` | `year`         | empty cell = absent predictor                 |
//! | `districts.csv` | `district_id`  | one row per seat                              |
//! | `ratings.csv`   | `(district_id, source)` | ordered seven-step category          |

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Seats in the House.
pub const HOUSE_SEATS: i64 = 435;
/// First modern (post-war) election year accepted in `elections.csv`.
pub const FIRST_MODERN_YEAR: i32 = 1946;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{file}: {source}")]
    Io {
        file: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}: line {line}{}: {message}", column.as_ref().map(|c| format!(", column `{c}`")).unwrap_or_default())]
    Malformed {
        file: String,
        line: u64,
        column: Option<String>,
        message: String,
    },
    #[error("{file}: line {line}, column `{column}`: {message}")]
    Invalid {
        file: String,
        line: u64,
        column: String,
        message: String,
    },
    #[error("{file}: duplicate key {key}")]
    Duplicate { file: String, key: String },
    #[error("{file}: expected {expected} rows, found {found}")]
    RowCount {
        file: String,
        expected: usize,
        found: usize,
    },
    #[error("{file}: rating for district {district_id} which is not in the district file")]
    UnknownDistrict { file: String, district_id: String },
    #[error("manifest: {0}")]
    Manifest(String),
}

pub type Result<T, E = IngestError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Party {
    D,
    R,
}

impl Party {
    pub fn other(self) -> Party {
        match self {
            Party::D => Party::R,
            Party::R => Party::D,
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Party::D => "D",
            Party::R => "R",
        })
    }
}

impl std::str::FromStr for Party {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "D" | "d" => Ok(Party::D),
            "R" | "r" => Ok(Party::R),
            other => Err(format!("expected party D or R, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PollMethod {
    Live,
    Online,
    Ivr,
    Robotic,
}

/// One national generic-ballot poll.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenericBallotPoll {
    pub pollster_id: String,
    pub method: PollMethod,
    pub start_date: NaiveDate,
    pub end_date: NaiveDate,
    pub dem_pct: f64,
    pub rep_pct: f64,
    /// Days from the poll's median field date to the election.
    #[serde(skip)]
    pub days_before: i64,
}

impl GenericBallotPoll {
    /// Median field date, rounded toward the start date.
    pub fn median_date(&self) -> NaiveDate {
        let span = (self.end_date - self.start_date).num_days();
        self.start_date + chrono::Duration::days(span / 2)
    }

    pub fn annotate(&mut self, election_date: NaiveDate) {
        self.days_before = (election_date - self.median_date()).num_days();
    }
}

/// One post-war election with every predictor any of the models uses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoricalElection {
    pub year: i32,
    pub is_midterm: bool,
    pub president_party: Party,
    /// Republican seats going into the election.
    pub rep_seats_held: i64,
    /// Observed net change in Republican seats; absent for the cycle being forecast.
    pub rep_seat_change: Option<i64>,
    /// Democratic two-party share of the national House vote, in percent.
    pub dem_house_share: Option<f64>,
    /// Republican minus Democratic generic-ballot margin, 60–90 days out.
    pub generic_margin_sep: Option<f64>,
    /// Democratic two-party generic-ballot share, 121–180 days out, in percent.
    pub generic_dem_share_early: Option<f64>,
    pub rdi_growth_h1: Option<f64>,
    pub approval_june: Option<f64>,
    pub disapproval_june: Option<f64>,
    pub net_seats_in_play_lean: Option<i64>,
    pub net_seats_in_play_tossup: Option<i64>,
    pub expert_seat_differential: Option<i64>,
}

impl HistoricalElection {
    /// Seat change of the party holding the presidency.
    pub fn incumbent_seat_change(&self) -> Option<i64> {
        self.rep_seat_change.map(|c| match self.president_party {
            Party::R => c,
            Party::D => -c,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Incumbency {
    DemIncumbent,
    RepIncumbent,
    Open,
}

impl Incumbency {
    pub fn party(self) -> Option<Party> {
        match self {
            Incumbency::DemIncumbent => Some(Party::D),
            Incumbency::RepIncumbent => Some(Party::R),
            Incumbency::Open => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UncontestedWinner {
    #[serde(rename = "none")]
    None,
    D,
    R,
}

impl UncontestedWinner {
    pub fn party(self) -> Option<Party> {
        match self {
            UncontestedWinner::None => None,
            UncontestedWinner::D => Some(Party::D),
            UncontestedWinner::R => Some(Party::R),
        }
    }
}

/// One district's previous-cycle results and current-cycle status.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistrictRecord {
    pub district_id: String,
    /// Party that won the seat at the previous election.
    pub winner_2016: Party,
    pub dem_house_share_2016: Option<f64>,
    pub contested_2016: bool,
    pub dem_pres_share_2016: f64,
    pub incumbency_2018: Incumbency,
    pub freshman: bool,
    pub uncontested_2018_winner: UncontestedWinner,
}

/// Expert rating scale, ordered from safest Democratic to safest Republican.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatingCategory {
    #[serde(rename = "safe_D")]
    SafeD,
    #[serde(rename = "likely_D")]
    LikelyD,
    #[serde(rename = "lean_D")]
    LeanD,
    Tossup,
    #[serde(rename = "lean_R")]
    LeanR,
    #[serde(rename = "likely_R")]
    LikelyR,
    #[serde(rename = "safe_R")]
    SafeR,
}

impl RatingCategory {
    /// Position on the scale seen from `holder`'s side: 0 is safe for the
    /// holder, 6 is safe for the other party.
    pub fn steps_against(self, holder: Party) -> u8 {
        let d_side = self as u8;
        match holder {
            Party::D => d_side,
            Party::R => 6 - d_side,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatingSource {
    Cook,
    InsideElections,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeatRating {
    pub district_id: String,
    pub category: RatingCategory,
    pub holder: Party,
    pub source: RatingSource,
}

fn csv_reader<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader)
}

fn malformed(file: &str, err: csv::Error, headers: Option<&csv::StringRecord>) -> IngestError {
    let line = err.position().map_or(0, |p| p.line());
    let column = match err.kind() {
        csv::ErrorKind::Deserialize { err, .. } => err
            .field()
            .and_then(|i| headers.and_then(|h| h.get(i as usize)).map(str::to_owned)),
        _ => None,
    };
    let message = match err.kind() {
        csv::ErrorKind::Deserialize { err, .. } => err.kind().to_string(),
        _ => err.to_string(),
    };
    IngestError::Malformed {
        file: file.to_owned(),
        line,
        column,
        message,
    }
}

/// serde reports enum-variant failures without a field index; recover the
/// column from the offending value quoted in the message.
fn locate_column(
    message: &str,
    record: &csv::StringRecord,
    headers: &csv::StringRecord,
) -> Option<String> {
    let quoted = message.split('`').nth(1)?;
    let idx = record.iter().position(|cell| cell == quoted)?;
    headers.get(idx).map(str::to_owned)
}

/// Deserializes all rows, pairing each with its 1-based line number.
fn read_rows<T, R>(file: &str, reader: R) -> Result<Vec<(u64, T)>>
where
    T: for<'de> Deserialize<'de>,
    R: Read,
{
    let mut rdr = csv_reader(reader);
    let headers = rdr.headers().map_err(|e| malformed(file, e, None))?.clone();
    let mut out = Vec::new();
    let mut record = csv::StringRecord::new();
    loop {
        match rdr.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {
                let line = record.position().map_or(0, |p| p.line());
                let row: T = record.deserialize(Some(&headers)).map_err(|e| {
                    let mut err = malformed(file, e, Some(&headers));
                    if let IngestError::Malformed {
                        line: l,
                        column,
                        message,
                        ..
                    } = &mut err
                    {
                        *l = line;
                        if column.is_none() {
                            *column = locate_column(message, &record, &headers);
                        }
                    }
                    err
                })?;
                out.push((line, row));
            }
            Err(e) => return Err(malformed(file, e, Some(&headers))),
        }
    }
    Ok(out)
}

fn invalid(file: &str, line: u64, column: &str, message: impl Into<String>) -> IngestError {
    IngestError::Invalid {
        file: file.to_owned(),
        line,
        column: column.to_owned(),
        message: message.into(),
    }
}

fn check_pct(file: &str, line: u64, column: &str, v: f64) -> Result<()> {
    if v.is_finite() && (0.0..=100.0).contains(&v) {
        Ok(())
    } else {
        Err(invalid(
            file,
            line,
            column,
            format!("value {v} outside [0, 100]"),
        ))
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| IngestError::Io {
        file: path.display().to_string(),
        source,
    })
}

fn file_label(path: &Path) -> String {
    path.file_name().map_or_else(
        || path.display().to_string(),
        |n| n.to_string_lossy().into_owned(),
    )
}

// ---------------------------------------------------------------------------
// polls
// ---------------------------------------------------------------------------

/// Poll row as it appears on disk; dates are parsed separately so a bad
/// date can be reported against its column.
#[derive(Deserialize)]
struct PollRow {
    pollster_id: String,
    method: PollMethod,
    start_date: String,
    end_date: String,
    dem_pct: f64,
    rep_pct: f64,
}

fn parse_date(file: &str, line: u64, column: &str, raw: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(raw, "%Y-%m-%d").map_err(|e| IngestError::Malformed {
        file: file.into(),
        line,
        column: Some(column.into()),
        message: format!("bad date `{raw}`: {e}"),
    })
}

pub fn parse_polls<R: Read>(reader: R, election_date: NaiveDate) -> Result<Vec<GenericBallotPoll>> {
    const FILE: &str = "polls.csv";
    let rows: Vec<(u64, PollRow)> = read_rows(FILE, reader)?;
    rows.into_iter()
        .map(|(line, row)| {
            let mut poll = GenericBallotPoll {
                start_date: parse_date(FILE, line, "start_date", &row.start_date)?,
                end_date: parse_date(FILE, line, "end_date", &row.end_date)?,
                pollster_id: row.pollster_id,
                method: row.method,
                dem_pct: row.dem_pct,
                rep_pct: row.rep_pct,
                days_before: 0,
            };
            if poll.end_date < poll.start_date {
                return Err(invalid(
                    FILE,
                    line,
                    "end_date",
                    "end_date precedes start_date",
                ));
            }
            check_pct(FILE, line, "dem_pct", poll.dem_pct)?;
            check_pct(FILE, line, "rep_pct", poll.rep_pct)?;
            if poll.dem_pct + poll.rep_pct > 100.0 {
                return Err(invalid(
                    FILE,
                    line,
                    "rep_pct",
                    "dem_pct + rep_pct exceeds 100",
                ));
            }
            poll.annotate(election_date);
            Ok(poll)
        })
        .collect()
}

pub fn load_polls(path: &Path, election_date: NaiveDate) -> Result<Vec<GenericBallotPoll>> {
    parse_polls(open(path)?, election_date).map_err(|e| relabel(e, &file_label(path)))
}

// ---------------------------------------------------------------------------
// elections
// ---------------------------------------------------------------------------

pub fn parse_elections<R: Read>(reader: R) -> Result<Vec<HistoricalElection>> {
    const FILE: &str = "elections.csv";
    let rows: Vec<(u64, HistoricalElection)> = read_rows(FILE, reader)?;
    let mut seen = HashSet::new();
    rows.into_iter()
        .map(|(line, e)| {
            if e.year < FIRST_MODERN_YEAR {
                return Err(invalid(
                    FILE,
                    line,
                    "year",
                    format!("{} predates the post-war series", e.year),
                ));
            }
            if !seen.insert(e.year) {
                return Err(IngestError::Duplicate {
                    file: FILE.into(),
                    key: format!("year {}", e.year),
                });
            }
            if !(0..=HOUSE_SEATS).contains(&e.rep_seats_held) {
                return Err(invalid(
                    FILE,
                    line,
                    "rep_seats_held",
                    format!("{} outside [0, 435]", e.rep_seats_held),
                ));
            }
            if let Some(c) = e.rep_seat_change {
                if !(0..=HOUSE_SEATS).contains(&(e.rep_seats_held + c)) {
                    return Err(invalid(
                        FILE,
                        line,
                        "rep_seat_change",
                        "seat change leaves Republican seats outside [0, 435]",
                    ));
                }
            }
            for (col, v) in [
                ("dem_house_share", e.dem_house_share),
                ("generic_dem_share_early", e.generic_dem_share_early),
                ("approval_june", e.approval_june),
                ("disapproval_june", e.disapproval_june),
            ] {
                if let Some(v) = v {
                    check_pct(FILE, line, col, v)?;
                }
            }
            for (col, v) in [
                ("generic_margin_sep", e.generic_margin_sep),
                ("rdi_growth_h1", e.rdi_growth_h1),
            ] {
                if let Some(v) = v {
                    if !v.is_finite() || v.abs() > 100.0 {
                        return Err(invalid(
                            FILE,
                            line,
                            col,
                            format!("value {v} outside [-100, 100]"),
                        ));
                    }
                }
            }
            if let (Some(a), Some(d)) = (e.approval_june, e.disapproval_june) {
                if a + d > 100.0 {
                    return Err(invalid(
                        FILE,
                        line,
                        "disapproval_june",
                        "approval + disapproval exceeds 100",
                    ));
                }
            }
            Ok(e)
        })
        .collect()
}

pub fn load_elections(path: &Path) -> Result<Vec<HistoricalElection>> {
    parse_elections(open(path)?).map_err(|e| relabel(e, &file_label(path)))
}

// ---------------------------------------------------------------------------
// districts
// ---------------------------------------------------------------------------

pub fn parse_districts<R: Read>(reader: R) -> Result<Vec<DistrictRecord>> {
    const FILE: &str = "districts.csv";
    let rows: Vec<(u64, DistrictRecord)> = read_rows(FILE, reader)?;
    let mut seen = HashSet::new();
    rows.into_iter()
        .map(|(line, d)| {
            if d.district_id.is_empty() {
                return Err(invalid(FILE, line, "district_id", "empty district id"));
            }
            if !seen.insert(d.district_id.clone()) {
                return Err(IngestError::Duplicate {
                    file: FILE.into(),
                    key: format!("district_id {}", d.district_id),
                });
            }
            match (d.contested_2016, d.dem_house_share_2016) {
                (false, Some(_)) => {
                    return Err(invalid(
                        FILE,
                        line,
                        "dem_house_share_2016",
                        "uncontested district carries a House share",
                    ));
                }
                (true, Some(s)) => {
                    check_pct(FILE, line, "dem_house_share_2016", s)?;
                    let share_winner = if s > 50.0 { Party::D } else { Party::R };
                    if s != 50.0 && share_winner != d.winner_2016 {
                        return Err(invalid(
                            FILE,
                            line,
                            "winner_2016",
                            "winner disagrees with dem_house_share_2016",
                        ));
                    }
                }
                _ => {}
            }
            check_pct(FILE, line, "dem_pres_share_2016", d.dem_pres_share_2016)?;
            if d.freshman && d.incumbency_2018 == Incumbency::Open {
                return Err(invalid(
                    FILE,
                    line,
                    "freshman",
                    "open seat cannot have a freshman incumbent",
                ));
            }
            Ok(d)
        })
        .collect()
}

pub fn load_districts(path: &Path) -> Result<Vec<DistrictRecord>> {
    parse_districts(open(path)?).map_err(|e| relabel(e, &file_label(path)))
}

// ---------------------------------------------------------------------------
// ratings
// ---------------------------------------------------------------------------

pub fn parse_ratings<R: Read>(reader: R) -> Result<Vec<SeatRating>> {
    const FILE: &str = "ratings.csv";
    let rows: Vec<(u64, SeatRating)> = read_rows(FILE, reader)?;
    let mut seen = HashSet::new();
    rows.into_iter()
        .map(|(_, r)| {
            if !seen.insert((r.district_id.clone(), r.source)) {
                return Err(IngestError::Duplicate {
                    file: FILE.into(),
                    key: format!(
                        "rating for district_id {} from {:?}",
                        r.district_id, r.source
                    ),
                });
            }
            Ok(r)
        })
        .collect()
}

pub fn load_ratings(path: &Path) -> Result<Vec<SeatRating>> {
    parse_ratings(open(path)?).map_err(|e| relabel(e, &file_label(path)))
}

/// Checks that every rated district exists in the district file.
pub fn check_rating_coverage(ratings: &[SeatRating], districts: &[DistrictRecord]) -> Result<()> {
    let ids: BTreeSet<&str> = districts.iter().map(|d| d.district_id.as_str()).collect();
    match ratings
        .iter()
        .find(|r| !ids.contains(r.district_id.as_str()))
    {
        Some(r) => Err(IngestError::UnknownDistrict {
            file: "ratings.csv".into(),
            district_id: r.district_id.clone(),
        }),
        None => Ok(()),
    }
}

pub(crate) fn relabel(err: IngestError, label: &str) -> IngestError {
    match err {
        IngestError::Malformed {
            line,
            column,
            message,
            ..
        } => IngestError::Malformed {
            file: label.to_owned(),
            line,
            column,
            message,
        },
        IngestError::Invalid {
            line,
            column,
            message,
            ..
        } => IngestError::Invalid {
            file: label.to_owned(),
            line,
            column,
            message,
        },
        IngestError::Duplicate { key, .. } => IngestError::Duplicate {
            file: label.to_owned(),
            key,
        },
        other => other,
    }
}

/// Writes records back out in the same CSV schema the loaders accept.
pub fn write_csv<T: Serialize, W: Write>(
    writer: W,
    records: &[T],
) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
