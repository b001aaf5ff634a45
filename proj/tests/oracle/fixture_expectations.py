#!/usr/bin/env python3
"""Independent expected values for data/synthetic_31000.csv.

Reads the fixture with Python's csv module (no code shared with the C++
engine) and prints the numbers frozen into the acceptance suite.
"""
import csv
import sys
from collections import OrderedDict
from fractions import Fraction

path = sys.argv[1] if len(sys.argv) > 1 else "data/synthetic_31000.csv"
with open(path, newline="", encoding="utf-8") as f:
    rows = list(csv.DictReader(f))

measure = "Amount (US$-Millions)"
total = sum(Fraction(r[measure]) for r in rows if r[measure] != "")
print(f"rows={len(rows)} columns={len(rows[0])}")
print(f"total_sum={total} total_count={len(rows)}")

groups = OrderedDict()
for r in rows:
    key = (r["Category"], r["Subcategory Code"], r["Fiscal Year"])
    s, n = groups.get(key, (Fraction(0), 0))
    groups[key] = (s + Fraction(r[measure] or 0), n + 1)
print(f"groups={len(groups)}")
for key in [("Assets", "dfb", "2010"), ("Assets", "dfb", "2009"), ("Equity", "oe", "2009")]:
    s, n = groups[key]
    print(f"{key} sum={s} count={n}")
first = list(groups.items())[:3]
print("first_groups=", first)

filtered = [r for r in rows if r["Fiscal Year"] == "2009"]
print(f"filter_2009_count={len(filtered)} sum={sum(Fraction(r[measure]) for r in filtered)}")

years = OrderedDict()
for r in rows:
    years[r["Fiscal Year"]] = years.get(r["Fiscal Year"], Fraction(0)) + Fraction(r[measure])
print("scatter_points=", [(k, int(v)) for k, v in years.items()])
