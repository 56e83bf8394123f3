//! Generic-ballot poll windows.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{GenericBallotPoll, PollMethod};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PollError {
    #[error("no polls between {min_days} and {max_days} days before the election")]
    EmptyWindow { min_days: i64, max_days: i64 },
    #[error("poll from {pollster} has zero combined two-party share")]
    ZeroTwoPartyTotal { pollster: String },
    #[error("invalid window: min_days {min_days} > max_days {max_days}")]
    InvalidWindow { min_days: i64, max_days: i64 },
}

/// Inclusive range of days before the election.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PollWindow {
    min_days: i64,
    max_days: i64,
}

impl PollWindow {
    /// Early September: 60 to 90 days out.
    pub const EARLY_SEPTEMBER: PollWindow = PollWindow {
        min_days: 60,
        max_days: 90,
    };
    /// Early summer: 121 to 180 days out.
    pub const EARLY_SUMMER: PollWindow = PollWindow {
        min_days: 121,
        max_days: 180,
    };

    pub fn new(min_days: i64, max_days: i64) -> Result<Self, PollError> {
        if min_days < 0 || min_days > max_days {
            return Err(PollError::InvalidWindow { min_days, max_days });
        }
        Ok(Self { min_days, max_days })
    }

    pub fn min_days(&self) -> i64 {
        self.min_days
    }

    pub fn max_days(&self) -> i64 {
        self.max_days
    }

    pub fn contains(&self, poll: &GenericBallotPoll) -> bool {
        (self.min_days..=self.max_days).contains(&poll.days_before)
    }

    /// Polls inside the window, original order kept.
    pub fn select<'a>(&self, polls: &'a [GenericBallotPoll]) -> Vec<&'a GenericBallotPoll> {
        polls.iter().filter(|p| self.contains(p)).collect()
    }

    fn non_empty<'a>(
        &self,
        polls: &'a [GenericBallotPoll],
    ) -> Result<Vec<&'a GenericBallotPoll>, PollError> {
        let selected = self.select(polls);
        if selected.is_empty() {
            Err(PollError::EmptyWindow {
                min_days: self.min_days,
                max_days: self.max_days,
            })
        } else {
            Ok(selected)
        }
    }
}

/// Keeps live-interviewer polls only.
pub fn filter_live(polls: &[GenericBallotPoll]) -> Vec<GenericBallotPoll> {
    polls
        .iter()
        .filter(|p| p.method == PollMethod::Live)
        .cloned()
        .collect()
}

/// Mean Republican-minus-Democratic margin over polls in `window`.
pub fn window_average_margin(
    polls: &[GenericBallotPoll],
    window: PollWindow,
) -> Result<f64, PollError> {
    let selected = window.non_empty(polls)?;
    let total: f64 = selected.iter().map(|p| p.rep_pct - p.dem_pct).sum();
    Ok(total / selected.len() as f64)
}

/// Mean Democratic two-party share over polls in `window`, expressed as
/// percentage points away from 50.
pub fn window_average_dem_share(
    polls: &[GenericBallotPoll],
    window: PollWindow,
) -> Result<f64, PollError> {
    let selected = window.non_empty(polls)?;
    let mut total = 0.0;
    for p in &selected {
        let two_party = p.dem_pct + p.rep_pct;
        if two_party <= 0.0 {
            return Err(PollError::ZeroTwoPartyTotal {
                pollster: p.pollster_id.clone(),
            });
        }
        total += 100.0 * p.dem_pct / two_party;
    }
    Ok(total / selected.len() as f64 - 50.0)
}
