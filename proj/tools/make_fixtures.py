#!/usr/bin/env python3
"""Regenerates fixtures/catalog from the aggregated tables below.

Facts of DS are built so that averaging per (education.L2, work_class.L0)
yields the CN cells exactly and restricting to Female yields the female
benchmark cells exactly: each group holds female facts F and male facts 2N - F.
"""
import csv
import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "catalog"

EDUCATION = [
    ("Assoc-acdm", "Associate", "Assoc", "Post-secondary"),
    ("Assoc-voc", "Associate", "Assoc", "Post-secondary"),
    ("Masters", "Graduate", "Post-grad", "Post-secondary"),
    ("Doctorate", "Doctoral", "Post-grad", "Post-secondary"),
    ("Prof-school", "Doctoral", "Post-grad", "Post-secondary"),
    ("Some-college", "College", "Some-college", "Post-secondary"),
    ("Bachelors", "Undergraduate", "University", "Post-secondary"),
    ("HS-grad", "High-school", "Secondary", "Non-post-secondary"),
    ("11th", "Incomplete", "Secondary", "Non-post-secondary"),
    ("9th", "Middle-school", "Compulsory", "Non-post-secondary"),
]
WORK = [
    ("Federal-gov", "Gov", "With-Pay"),
    ("Local-gov", "Gov", "With-Pay"),
    ("State-gov", "Gov", "With-Pay"),
    ("Private", "Private", "With-Pay"),
    ("Self-emp-inc", "Self-emp", "With-Pay"),
    ("Self-emp-not-inc", "Self-emp", "With-Pay"),
    ("Without-pay", "No-pay", "Without-Pay"),
    ("Never-worked", "No-pay", "Without-Pay"),
]
GENDER = ["Male", "Female"]

EDU_GROUPS = ["Assoc", "Post-grad", "Some-college", "University"]
WORK_L0 = [w[0] for w in WORK[:6]]
WORK_L1 = ["Gov", "Private", "Self-emp"]

# Rows follow WORK_L0, columns follow EDU_GROUPS.
CN = [
    [41.15, 43.86, 40.31, 43.38],
    [41.33, 43.96, 40.14, 42.34],
    [39.09, 42.96, 34.73, 40.82],
    [41.06, 45.19, 38.73, 43.06],
    [48.68, 53.05, 49.31, 49.91],
    [45.88, 43.39, 44.03, 44.44],
]
FEMALE = [
    [40.66, 47.76, 38.25, 42.41],
    [37.61, 43.83, 35.45, 41.66],
    [39.36, 40.14, 34.01, 38.95],
    [38.05, 41.55, 34.86, 39.45],
    [42.07, 48.73, 43.96, 44.83],
    [38.47, 38.28, 36.57, 39.04],
]
# Rows follow WORK_L1.
CO = [
    [40.73, 43.58, 38.38, 42.14],
    [41.06, 45.19, 38.73, 43.06],
    [46.68, 47.24, 45.7, 46.61],
]
OECD = [40.52, 38.80, 38.58, 38.48, 38.40, 38.43, 38.39, 38.20, 38.07,
        37.78, 37.77, 37.67, 37.66, 37.53, 37.59, 37.60, 37.53]

REGION = [
    ("Lyon", "Lyon-Centre", "South-East"),
    ("Villeurbanne", "Lyon-Centre", "South-East"),
    ("Grenoble", "Isere", "South-East"),
    ("Vienne", "Isere", "South-East"),
    ("Tours", "Touraine", "Centre"),
    ("Amboise", "Touraine", "Centre"),
    ("Blois", "Loir-et-Cher", "Centre"),
    ("Vendome", "Loir-et-Cher", "Centre"),
]
REVENUE = [120.0, 10.0, 90.0, 25.0, 60.0, 15.0, 80.0, 5.0]

POST_SECONDARY = "cube DS where education.L3 = 'Post-secondary' and work_class.L2 = 'With-Pay'"


def write(path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def fmt(v):
    return f"{v:.2f}"


def main():
    write(ROOT / "dimensions" / "education.csv", ["L0", "L1", "L2", "L3"], EDUCATION)
    write(ROOT / "dimensions" / "work_class.csv", ["L0", "L1", "L2"], WORK)
    write(ROOT / "dimensions" / "gender.csv", ["L0"], [[g] for g in GENDER])
    write(ROOT / "dimensions" / "year.csv", ["L0"], [[str(2000 + i)] for i in range(len(OECD))])
    write(ROOT / "dimensions" / "region.csv", ["L0", "L1", "L2"], REGION)

    facts = []
    filler = 0
    for edu in EDUCATION:
        for work in WORK:
            for gender in GENDER:
                if edu[3] == "Post-secondary" and work[2] == "With-Pay":
                    r = WORK_L0.index(work[0])
                    c = EDU_GROUPS.index(edu[2])
                    f = FEMALE[r][c]
                    v = f if gender == "Female" else 2 * CN[r][c] - f
                else:
                    filler += 1
                    v = 30.0 + (filler * 37 % 23)
                facts.append([edu[0], work[0], gender, fmt(v)])
    write(ROOT / "facts" / "ds.csv",
          ["education.L0", "work_class.L0", "gender.L0", "HoursPerWeek"], facts)

    write(ROOT / "cubes" / "cn.csv", ["education.L2", "work_class.L0", "HoursPerWeek"],
          [[e, w, fmt(CN[r][c])] for c, e in enumerate(EDU_GROUPS) for r, w in enumerate(WORK_L0)])
    write(ROOT / "cubes" / "co.csv", ["education.L2", "work_class.L1", "HoursPerWeek"],
          [[e, w, f"{CO[r][c]:g}"] for c, e in enumerate(EDU_GROUPS) for r, w in enumerate(WORK_L1)])
    write(ROOT / "facts" / "oecd.csv", ["year.L0", "WeeklyHours"],
          [[str(2000 + i), fmt(v)] for i, v in enumerate(OECD)])
    write(ROOT / "facts" / "sales.csv", ["region.L0", "Revenue"],
          [[c[0], f"{v:g}"] for c, v in zip(REGION, REVENUE)])

    catalog = {
        "dimensions": [
            {"name": "education", "paths": ["dimensions/education.csv"]},
            {"name": "work_class", "paths": ["dimensions/work_class.csv"]},
            {"name": "gender", "paths": ["dimensions/gender.csv"]},
            {"name": "year", "paths": ["dimensions/year.csv"]},
            {"name": "region", "paths": ["dimensions/region.csv"]},
        ],
        "cubes": [
            {"name": "DS", "facts": "facts/ds.csv"},
            {"name": "CO", "cells": "cubes/co.csv",
             "query": POST_SECONDARY + " group education.L2, work_class.L1 agg avg(HoursPerWeek)"},
            {"name": "CN", "cells": "cubes/cn.csv",
             "query": POST_SECONDARY + " group education.L2, work_class.L0 agg avg(HoursPerWeek)"},
            {"name": "OECD", "facts": "facts/oecd.csv"},
            {"name": "SALES", "facts": "facts/sales.csv"},
            {"name": "SALES_BY_DISTRICT", "query": "cube SALES group region.L1 agg sum(Revenue)"},
        ],
        "benchmarks": [
            {"name": "q_Female",
             "query": POST_SECONDARY + " and gender.L0 = 'Female'"
                      " group education.L2, work_class.L0, gender.L0 agg avg(HoursPerWeek)"},
        ],
        "kpi_rules": [
            {"name": "hours_kpi", "target": "Expected",
             "rules": [
                 {"lo": 0, "hi": 40, "label": "Low"},
                 {"lo": 40, "hi": 55, "label": "Expected"},
                 {"lo": 55, "hi": None, "label": "Excessive"},
             ]},
        ],
    }
    with open(ROOT / "catalog.json", "w") as f:
        json.dump(catalog, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
