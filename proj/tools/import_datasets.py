#!/usr/bin/env python3
"""Rebuild data/*.csv and data/*.schema from UCI copies bundled in PyPI wheels.

    pip download --no-deps keel_ds orange3 -d wheels/
    python3 tools/import_datasets.py wheels/ data/
"""
import glob
import os
import sys
import zipfile

SPAMBASE_WORDS = [
    "make", "address", "all", "3d", "our", "over", "remove", "internet", "order", "mail",
    "receive", "will", "people", "report", "addresses", "free", "business", "email", "you",
    "credit", "your", "font", "000", "money", "hp", "hpl", "george", "650", "lab", "labs",
    "telnet", "857", "data", "415", "85", "technology", "1999", "parts", "pm", "direct", "cs",
    "meeting", "original", "project", "re", "edu", "table", "conference",
]
SPAMBASE_CHARS = ["semicolon", "paren", "bracket", "bang", "dollar", "hash"]
SPAMBASE_COLUMNS = (
    [f"word_freq_{w}" for w in SPAMBASE_WORDS]
    + [f"char_freq_{c}" for c in SPAMBASE_CHARS]
    + ["capital_run_length_average", "capital_run_length_longest", "capital_run_length_total"]
)

HEART_COLUMNS = [
    ("age", "numerical"), ("sex", "categorical"), ("chest_pain", "categorical"),
    ("resting_bp", "numerical"), ("cholesterol", "numerical"), ("fasting_sugar", "categorical"),
    ("resting_ecg", "categorical"), ("max_heart_rate", "numerical"), ("exercise_angina", "categorical"),
    ("oldpeak", "numerical"), ("slope", "numerical"), ("major_vessels", "numerical"),
    ("thal", "categorical"),
]


def wheel(wheel_dir, prefix):
    hits = glob.glob(os.path.join(wheel_dir, prefix + "*.whl"))
    if not hits:
        sys.exit(f"no {prefix}*.whl in {wheel_dir}")
    return zipfile.ZipFile(hits[0])


def keel_rows(zf, name):
    text = zf.read(f"keel_ds/data/balanced/raw/{name}.dat").decode()
    return [[c.strip() for c in line.split(",")] for line in text.splitlines() if line.strip()]


def write(out_dir, name, columns, rows, positive):
    with open(os.path.join(out_dir, name + ".csv"), "w", newline="\n") as f:
        f.write(",".join(c for c, _ in columns) + "\n")
        for row in rows:
            f.write(",".join(row) + "\n")
    with open(os.path.join(out_dir, name + ".schema"), "w", newline="\n") as f:
        for c, kind in columns:
            f.write(f"{c},{kind}\n")
        f.write(f"positive_label={positive}\n")
    print(f"{name}: {len(rows)} rows")


def main():
    wheel_dir, out_dir = sys.argv[1], sys.argv[2]
    os.makedirs(out_dir, exist_ok=True)

    keel = wheel(wheel_dir, "keel_ds")
    rows = keel_rows(keel, "spambase")
    cols = [(c, "numerical") for c in SPAMBASE_COLUMNS] + [("spam", "label")]
    write(out_dir, "spambase", cols, rows, "1")

    rows = keel_rows(keel, "heart")
    cols = HEART_COLUMNS + [("disease", "label")]
    write(out_dir, "heart", cols, rows, "2")

    orange = wheel(wheel_dir, "orange3")
    text = orange.read("Orange/tests/datasets/ionosphere.tab").decode().splitlines()
    header = text[0].split("\t")
    rows = [line.split("\t") for line in text[3:] if line.strip()]
    cols = [(h, "numerical") for h in header[:-1]] + [("radar_return", "label")]
    write(out_dir, "ionosphere", cols, rows, "g")


if __name__ == "__main__":
    main()
