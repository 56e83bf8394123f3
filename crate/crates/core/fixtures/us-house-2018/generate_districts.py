#!/usr/bin/env python3
"""Rebuilds districts.csv and ratings.csv for the 2018 fixture.

Competitive seats come from the CURATED table (approximate 2016 results and
early-August 2018 ratings). Every other seat is a synthetic safe seat drawn
from a fixed-seed generator so that state delegations, open-seat counts and
uncontested-race counts match the 2016 election and 2018 filing totals.

Run from this directory: python3 generate_districts.py
"""

import csv
import random

# state -> (seats, Republican seats after 2016)
STATES = {
    "AL": (7, 6), "AK": (1, 1), "AZ": (9, 5), "AR": (4, 4), "CA": (53, 14),
    "CO": (7, 4), "CT": (5, 0), "DE": (1, 0), "FL": (27, 16), "GA": (14, 10),
    "HI": (2, 0), "ID": (2, 2), "IL": (18, 7), "IN": (9, 7), "IA": (4, 3),
    "KS": (4, 4), "KY": (6, 5), "LA": (6, 5), "ME": (2, 1), "MD": (8, 1),
    "MA": (9, 0), "MI": (14, 9), "MN": (8, 3), "MS": (4, 3), "MO": (8, 6),
    "MT": (1, 1), "NE": (3, 3), "NV": (4, 1), "NH": (2, 0), "NJ": (12, 5),
    "NM": (3, 1), "NY": (27, 9), "NC": (13, 10), "ND": (1, 1), "OH": (16, 12),
    "OK": (5, 5), "OR": (5, 1), "PA": (18, 13), "RI": (2, 0), "SC": (7, 6),
    "SD": (1, 1), "TN": (9, 7), "TX": (36, 25), "UT": (4, 4), "VT": (1, 0),
    "VA": (11, 7), "WA": (10, 4), "WV": (3, 3), "WI": (8, 5), "WY": (1, 1),
}

# id, winner, 2016 house D share (None = no two-party race), 2016 Clinton
# two-party share, 2018 incumbency, freshman, 2018 uncontested winner, rating
CURATED = [
    # Republican-held, Clinton-won or close
    ("AZ-02", "R", 43.0, 52.6, "open", False, "none", "lean_D"),
    ("CA-10", "R", 48.3, 51.6, "rep_incumbent", False, "none", "tossup"),
    ("CA-21", "R", 43.3, 58.2, "rep_incumbent", False, "none", "lean_R"),
    ("CA-25", "R", 46.9, 53.5, "rep_incumbent", False, "none", "tossup"),
    ("CA-39", "R", 42.8, 54.3, "open", False, "none", "tossup"),
    ("CA-45", "R", 41.4, 52.9, "rep_incumbent", False, "none", "tossup"),
    ("CA-48", "R", 41.7, 50.9, "rep_incumbent", False, "none", "tossup"),
    ("CA-49", "R", 49.7, 53.9, "open", False, "none", "lean_D"),
    ("CO-06", "R", 45.8, 54.8, "rep_incumbent", False, "none", "tossup"),
    ("FL-26", "R", 43.6, 58.2, "rep_incumbent", False, "none", "tossup"),
    ("FL-27", "R", 45.0, 60.8, "open", False, "none", "lean_D"),
    ("IL-06", "R", 40.8, 53.8, "rep_incumbent", False, "none", "tossup"),
    ("KS-03", "R", 44.2, 50.6, "rep_incumbent", False, "none", "tossup"),
    ("MN-03", "R", 43.0, 55.2, "rep_incumbent", False, "none", "tossup"),
    ("NJ-07", "R", 44.3, 50.6, "rep_incumbent", False, "none", "tossup"),
    ("NY-24", "R", 39.2, 52.0, "rep_incumbent", False, "none", "lean_R"),
    ("PA-06", "R", 42.8, 50.3, "open", False, "none", "likely_D"),
    ("PA-07", "R", 40.5, 51.2, "open", False, "none", "likely_D"),
    ("TX-07", "R", 43.9, 50.7, "rep_incumbent", False, "none", "tossup"),
    ("TX-23", "R", 49.3, 51.9, "rep_incumbent", False, "none", "lean_R"),
    ("TX-32", "R", None, 51.2, "rep_incumbent", False, "none", "lean_R"),
    ("VA-10", "R", 46.9, 55.3, "rep_incumbent", False, "none", "lean_D"),
    ("WA-08", "R", 39.8, 51.6, "open", False, "none", "tossup"),
    # Republican-held, Trump-won but competitive
    ("GA-06", "R", 38.3, 49.1, "rep_incumbent", True, "none", "lean_R"),
    ("GA-07", "R", 39.6, 47.0, "rep_incumbent", False, "none", "lean_R"),
    ("IA-01", "R", 46.3, 48.2, "rep_incumbent", False, "none", "lean_D"),
    ("IA-03", "R", 42.6, 48.2, "rep_incumbent", False, "none", "tossup"),
    ("IL-12", "R", 42.2, 42.2, "rep_incumbent", False, "none", "lean_R"),
    ("IL-13", "R", 40.3, 47.0, "rep_incumbent", False, "none", "lean_R"),
    ("IL-14", "R", 40.7, 48.0, "rep_incumbent", False, "none", "lean_R"),
    ("KS-02", "R", 34.7, 39.5, "open", False, "none", "tossup"),
    ("KY-06", "R", 39.1, 42.0, "rep_incumbent", False, "none", "tossup"),
    ("ME-02", "R", 45.2, 44.9, "rep_incumbent", False, "none", "tossup"),
    ("MI-06", "R", 38.3, 45.4, "rep_incumbent", False, "none", "likely_R"),
    ("MI-07", "R", 42.1, 42.9, "rep_incumbent", False, "none", "lean_R"),
    ("MI-08", "R", 41.2, 46.6, "rep_incumbent", False, "none", "tossup"),
    ("MI-11", "R", 43.2, 47.6, "open", False, "none", "tossup"),
    ("MN-02", "R", 49.0, 49.3, "rep_incumbent", True, "none", "lean_D"),
    ("MT-AL", "R", 41.9, 38.9, "rep_incumbent", True, "none", "lean_R"),
    ("NC-02", "R", 43.3, 44.9, "rep_incumbent", False, "none", "lean_R"),
    ("NC-09", "R", 41.8, 44.2, "open", False, "none", "lean_R"),
    ("NC-13", "R", 43.9, 45.0, "rep_incumbent", True, "none", "lean_R"),
    ("NE-02", "R", 49.8, 48.9, "rep_incumbent", True, "none", "lean_R"),
    ("NJ-02", "R", 38.5, 46.7, "open", False, "none", "lean_D"),
    ("NJ-03", "R", 39.6, 46.5, "rep_incumbent", False, "none", "tossup"),
    ("NJ-11", "R", 39.8, 49.5, "open", False, "none", "lean_D"),
    ("NM-02", "R", 37.3, 40.3, "open", False, "none", "lean_R"),
    ("NY-01", "R", 41.1, 42.5, "rep_incumbent", False, "none", "lean_R"),
    ("NY-02", "R", 37.9, 45.1, "rep_incumbent", False, "none", "likely_R"),
    ("NY-11", "R", 36.1, 44.7, "rep_incumbent", False, "none", "lean_R"),
    ("NY-19", "R", 45.6, 47.4, "rep_incumbent", True, "none", "tossup"),
    ("NY-22", "R", 46.6, 43.8, "rep_incumbent", True, "none", "tossup"),
    ("NY-27", "R", 32.8, 36.7, "rep_incumbent", False, "none", "likely_R"),
    ("OH-01", "R", 40.9, 46.5, "rep_incumbent", False, "none", "lean_R"),
    ("OH-12", "R", 30.9, 44.0, "rep_incumbent", True, "none", "lean_R"),
    ("OH-14", "R", 34.7, 45.9, "rep_incumbent", False, "none", "likely_R"),
    ("PA-08", "R", 45.6, 49.8, "rep_incumbent", True, "none", "lean_R"),
    ("PA-16", "R", 44.4, 45.4, "rep_incumbent", True, "none", "lean_R"),
    ("PA-18", "R", None, 40.8, "open", False, "none", "safe_R"),
    ("SC-01", "R", 38.6, 42.6, "open", False, "none", "lean_R"),
    ("FL-06", "R", 41.4, 42.6, "open", False, "none", "lean_R"),
    ("FL-15", "R", 42.5, 44.1, "open", False, "none", "lean_R"),
    ("FL-16", "R", 40.2, 45.0, "rep_incumbent", False, "none", "lean_R"),
    ("FL-18", "R", 44.4, 46.6, "rep_incumbent", True, "none", "lean_R"),
    ("TX-02", "R", 37.3, 45.3, "open", False, "none", "likely_R"),
    ("TX-06", "R", 39.6, 44.1, "open", False, "none", "likely_R"),
    ("TX-10", "R", 39.3, 46.0, "rep_incumbent", False, "none", "likely_R"),
    ("TX-21", "R", 37.0, 45.5, "open", False, "none", "lean_R"),
    ("TX-22", "R", 38.3, 46.5, "rep_incumbent", False, "none", "likely_R"),
    ("TX-24", "R", 41.1, 47.0, "rep_incumbent", False, "none", "likely_R"),
    ("TX-31", "R", 38.4, 44.3, "rep_incumbent", False, "none", "lean_R"),
    ("UT-04", "R", 44.2, 45.0, "rep_incumbent", False, "none", "lean_R"),
    ("VA-02", "R", 38.7, 48.1, "rep_incumbent", False, "none", "lean_R"),
    ("VA-05", "R", 41.8, 43.4, "open", False, "none", "lean_R"),
    ("VA-07", "R", 42.2, 46.5, "rep_incumbent", False, "none", "lean_R"),
    ("WA-03", "R", 38.3, 45.7, "rep_incumbent", False, "none", "lean_R"),
    ("WA-05", "R", 40.4, 42.7, "rep_incumbent", False, "none", "lean_R"),
    ("WI-01", "R", 31.7, 44.4, "open", False, "none", "likely_R"),
    ("WI-06", "R", 39.5, 42.3, "rep_incumbent", False, "none", "likely_R"),
    ("CA-01", "R", 40.9, 39.4, "rep_incumbent", False, "none", "likely_R"),
    ("CA-04", "R", 37.3, 42.1, "rep_incumbent", False, "none", "likely_R"),
    ("CA-22", "R", 32.4, 44.3, "rep_incumbent", False, "none", "likely_R"),
    ("CA-50", "R", 36.5, 40.7, "rep_incumbent", False, "none", "lean_R"),
    ("CA-08", "R", None, 41.0, "rep_incumbent", False, "R", "safe_R"),
    # Democratic-held, competitive
    ("MN-01", "D", 50.4, 42.5, "open", False, "none", "tossup"),
    ("MN-08", "D", 50.3, 42.1, "open", False, "none", "tossup"),
    ("NV-03", "D", 50.9, 49.4, "open", False, "none", "lean_D"),
    ("NV-04", "D", 52.2, 52.6, "open", False, "none", "lean_D"),
    ("NH-01", "D", 50.8, 49.2, "open", False, "none", "lean_D"),
    ("AZ-01", "D", 53.9, 49.4, "dem_incumbent", True, "none", "lean_D"),
    ("NJ-05", "D", 52.4, 49.4, "dem_incumbent", True, "none", "lean_D"),
    ("FL-07", "D", 51.5, 53.8, "dem_incumbent", True, "none", "lean_D"),
    ("MN-07", "D", 52.7, 34.0, "dem_incumbent", False, "none", "likely_D"),
    ("NH-02", "D", 52.7, 51.2, "dem_incumbent", False, "none", "likely_D"),
    ("PA-17", "D", 53.8, 44.5, "dem_incumbent", False, "none", "likely_D"),
    ("IA-02", "D", 53.7, 47.9, "dem_incumbent", False, "none", "likely_D"),
    ("NY-18", "D", 55.6, 49.0, "dem_incumbent", False, "none", "likely_D"),
    ("NY-03", "D", 52.9, 53.1, "dem_incumbent", True, "none", "likely_D"),
    ("IL-17", "D", 60.3, 49.6, "dem_incumbent", False, "none", "likely_D"),
    ("IL-10", "D", 52.6, 62.9, "dem_incumbent", True, "none", "likely_D"),
    ("CA-07", "D", 51.2, 55.9, "dem_incumbent", False, "none", "likely_D"),
    ("CA-24", "D", 53.4, 57.8, "dem_incumbent", True, "none", "likely_D"),
    ("OR-05", "D", 55.3, 52.2, "dem_incumbent", False, "none", "likely_D"),
    ("FL-13", "D", 51.9, 51.6, "dem_incumbent", True, "none", "likely_D"),
    ("CT-05", "D", 58.0, 52.2, "open", False, "none", "likely_D"),
    ("WI-03", "D", None, 47.6, "dem_incumbent", False, "none", "likely_D"),
]

# Totals the synthetic safe seats are filled up to.
TARGET_OPEN = {"R": 40, "D": 18}
TARGET_FRESHMEN = {"R": 25, "D": 23}
TARGET_UNCONTESTED_2016 = {"R": 28, "D": 34}
TARGET_UNCONTESTED_2018 = {"R": 3, "D": 37}

AT_LARGE = {s for s, (n, _) in STATES.items() if n == 1}


def district_ids(state, seats):
    if state in AT_LARGE:
        return [f"{state}-AL"]
    return [f"{state}-{i:02d}" for i in range(1, seats + 1)]


def main():
    rng = random.Random(2018)
    curated = {row[0]: row for row in CURATED}
    assert len(curated) == len(CURATED), "duplicate curated id"

    records = []
    for state, (seats, rep) in STATES.items():
        ids = district_ids(state, seats)
        fixed = [curated[i] for i in ids if i in curated]
        rep_left = rep - sum(1 for row in fixed if row[1] == "R")
        free = [i for i in ids if i not in curated]
        assert 0 <= rep_left <= len(free), state
        parties = ["R"] * rep_left + ["D"] * (len(free) - rep_left)
        rng.shuffle(parties)
        for i in ids:
            if i in curated:
                records.append(list(curated[i]) + [True])
                continue
            party = parties.pop()
            if party == "R":
                house = round(rng.uniform(22.0, 40.0), 1)
                pres = round(min(38.0, max(15.0, house + rng.gauss(0.0, 4.0))), 1)
                rating = "safe_R"
            else:
                house = round(rng.uniform(60.0, 88.0), 1)
                pres = round(min(92.0, max(57.0, house + rng.gauss(0.0, 4.0))), 1)
                rating = "safe_D"
            inc = "rep_incumbent" if party == "R" else "dem_incumbent"
            records.append([i, party, house, pres, inc, False, "none", rating, False])

    assert len(records) == 435
    assert sum(1 for r in records if r[1] == "R") == 241

    def fill(party, count, predicate, apply):
        have = sum(1 for r in records if r[1] == party and predicate(r))
        pool = [r for r in records if r[1] == party and not r[8] and not predicate(r)]
        rng.shuffle(pool)
        for r in pool[: max(0, count - have)]:
            apply(r)

    for p in "RD":
        fill(p, TARGET_OPEN[p], lambda r: r[4] == "open", lambda r: r.__setitem__(4, "open"))
    for p in "RD":
        fill(p, TARGET_FRESHMEN[p], lambda r: r[5], lambda r: r.__setitem__(5, True) if r[4] != "open" else None)
    for p in "RD":
        fill(p, TARGET_UNCONTESTED_2016[p], lambda r: r[2] is None, lambda r: r.__setitem__(2, None))
    for p in "RD":
        fill(p, TARGET_UNCONTESTED_2018[p], lambda r: r[6] != "none", lambda r: r.__setitem__(6, p))

    with open("districts.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["district_id", "winner_2016", "dem_house_share_2016", "contested_2016", "dem_pres_share_2016",
                    "incumbency_2018", "freshman", "uncontested_2018_winner"])
        for r in records:
            house = "" if r[2] is None else f"{r[2]:.1f}"
            w.writerow([r[0], r[1], house, str(r[2] is not None).lower(), f"{r[3]:.1f}", r[4], str(r[5]).lower(), r[6]])

    with open("ratings.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["district_id", "category", "holder", "source"])
        for r in records:
            w.writerow([r[0], r[7], r[1], "cook"])


if __name__ == "__main__":
    main()
