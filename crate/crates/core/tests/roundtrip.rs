//! Anything the writer emits, the loaders read back unchanged.

use chrono::NaiveDate;
use housecast_core::ingest::{
    parse_districts, parse_elections, parse_polls, parse_ratings, write_csv, DistrictRecord,
    GenericBallotPoll, HistoricalElection, Incumbency, Party, PollMethod, RatingCategory,
    RatingSource, SeatRating, UncontestedWinner,
};
use proptest::prelude::*;

fn party() -> impl Strategy<Value = Party> {
    prop_oneof![Just(Party::D), Just(Party::R)]
}

fn pct() -> impl Strategy<Value = f64> {
    0.0..=100.0f64
}

fn district() -> impl Strategy<Value = DistrictRecord> {
    (
        "[A-Z]{2}-[0-9]{2}",
        prop::option::of(pct()),
        pct(),
        prop_oneof![
            Just(Incumbency::DemIncumbent),
            Just(Incumbency::RepIncumbent),
            Just(Incumbency::Open)
        ],
        any::<bool>(),
        prop_oneof![
            Just(UncontestedWinner::None),
            Just(UncontestedWinner::D),
            Just(UncontestedWinner::R)
        ],
        party(),
    )
        .prop_map(
            |(id, house, pres, inc, freshman, unc, fallback)| DistrictRecord {
                district_id: id,
                winner_2016: match house {
                    Some(s) if s > 50.0 => Party::D,
                    Some(s) if s < 50.0 => Party::R,
                    _ => fallback,
                },
                dem_house_share_2016: house,
                contested_2016: house.is_some(),
                dem_pres_share_2016: pres,
                incumbency_2018: inc,
                freshman: freshman && inc != Incumbency::Open,
                uncontested_2018_winner: unc,
            },
        )
}

fn election() -> impl Strategy<Value = HistoricalElection> {
    (
        (
            1946..2100i32,
            any::<bool>(),
            party(),
            0..=435i64,
            prop::option::of(-60..=60i64),
            prop::option::of(pct()),
        ),
        (
            prop::option::of(-40.0..40.0f64),
            prop::option::of(pct()),
            prop::option::of(-10.0..10.0f64),
            prop::option::of(0.0..=50.0f64),
            prop::option::of(0.0..=50.0f64),
        ),
        (
            prop::option::of(-100..100i64),
            prop::option::of(-100..100i64),
            prop::option::of(-100..100i64),
        ),
    )
        .prop_map(
            |(
                (year, mid, pres, held, change, vote),
                (margin, early, rdi, app, dis),
                (lean, toss, expert),
            )| {
                HistoricalElection {
                    year,
                    is_midterm: mid,
                    president_party: pres,
                    rep_seats_held: held,
                    rep_seat_change: change.map(|c| c.clamp(-held, 435 - held)),
                    dem_house_share: vote,
                    generic_margin_sep: margin,
                    generic_dem_share_early: early,
                    rdi_growth_h1: rdi,
                    approval_june: app,
                    disapproval_june: dis,
                    net_seats_in_play_lean: lean,
                    net_seats_in_play_tossup: toss,
                    expert_seat_differential: expert,
                }
            },
        )
}

fn poll() -> impl Strategy<Value = GenericBallotPoll> {
    (
        "[a-z_]{1,12}",
        prop_oneof![
            Just(PollMethod::Live),
            Just(PollMethod::Online),
            Just(PollMethod::Ivr),
            Just(PollMethod::Robotic)
        ],
        0..300i64,
        0..20i64,
        0.0..=50.0f64,
        0.0..=50.0f64,
    )
        .prop_map(|(id, method, offset, span, d, r)| {
            let start =
                NaiveDate::from_ymd_opt(2018, 1, 1).unwrap() + chrono::Duration::days(offset);
            GenericBallotPoll {
                pollster_id: id,
                method,
                start_date: start,
                end_date: start + chrono::Duration::days(span),
                dem_pct: d,
                rep_pct: r,
                days_before: 0,
            }
        })
}

fn rating() -> impl Strategy<Value = SeatRating> {
    (
        "[A-Z]{2}-[0-9]{2}",
        (0..7u8).prop_map(|i| {
            [
                RatingCategory::SafeD,
                RatingCategory::LikelyD,
                RatingCategory::LeanD,
                RatingCategory::Tossup,
                RatingCategory::LeanR,
                RatingCategory::LikelyR,
                RatingCategory::SafeR,
            ][i as usize]
        }),
        party(),
        prop_oneof![
            Just(RatingSource::Cook),
            Just(RatingSource::InsideElections)
        ],
    )
        .prop_map(|(id, category, holder, source)| SeatRating {
            district_id: id,
            category,
            holder,
            source,
        })
}

fn to_csv<T: serde::Serialize>(records: &[T]) -> Vec<u8> {
    let mut out = Vec::new();
    write_csv(&mut out, records).unwrap();
    out
}

proptest! {
    #[test]
    fn districts_round_trip(mut rows in prop::collection::vec(district(), 1..30)) {
        rows.sort_by(|a, b| a.district_id.cmp(&b.district_id));
        rows.dedup_by(|a, b| a.district_id == b.district_id);
        prop_assert_eq!(parse_districts(to_csv(&rows).as_slice()).unwrap(), rows);
    }

    #[test]
    fn elections_round_trip(mut rows in prop::collection::vec(election(), 1..20)) {
        rows.sort_by_key(|e| e.year);
        rows.dedup_by_key(|e| e.year);
        prop_assert_eq!(parse_elections(to_csv(&rows).as_slice()).unwrap(), rows);
    }

    #[test]
    fn polls_round_trip(rows in prop::collection::vec(poll(), 1..30)) {
        let election = NaiveDate::from_ymd_opt(2018, 11, 6).unwrap();
        let parsed = parse_polls(to_csv(&rows).as_slice(), election).unwrap();
        prop_assert_eq!(parsed.len(), rows.len());
        for (p, r) in parsed.iter().zip(&rows) {
            let mut r = r.clone();
            r.annotate(election);
            prop_assert_eq!(p, &r);
        }
    }

    #[test]
    fn ratings_round_trip(mut rows in prop::collection::vec(rating(), 1..30)) {
        rows.sort_by(|a, b| (&a.district_id, a.source).cmp(&(&b.district_id, b.source)));
        rows.dedup_by(|a, b| a.district_id == b.district_id && a.source == b.source);
        prop_assert_eq!(parse_ratings(to_csv(&rows).as_slice()).unwrap(), rows);
    }
}
