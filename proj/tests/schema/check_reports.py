#!/usr/bin/env python3
"""Runs simulate/train/interpret and validates every report line against the schema."""
import json
import shutil
import subprocess
import sys
from pathlib import Path

import jsonschema


def run(*args):
    subprocess.run(args, check=True, stdout=subprocess.DEVNULL)


def main():
    cli, schema_path, work = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
    shutil.rmtree(work, ignore_errors=True)
    work.mkdir(parents=True)
    schema = json.loads(schema_path.read_text())
    validator = jsonschema.Draft202012Validator(schema)

    run(cli, "simulate", "--out", str(work / "sim"), "--seed", "5")
    run(cli, "train", "--dataset", str(work / "sim/dataset.json"), "--out", str(work / "model.json"))
    run(cli, "interpret", "--dataset", str(work / "sim/dataset.json"), "--model", str(work / "model.json"),
        "--split", "test", "--all", "--repeats", "2", "--out", str(work / "reports.ndjson"))

    lines = (work / "reports.ndjson").read_text().splitlines()
    if not lines:
        print("no reports produced")
        return 1
    bad = 0
    labels = set()
    for n, line in enumerate(lines, 1):
        doc = json.loads(line)
        labels.add(doc["evidence"]["label"])
        for err in validator.iter_errors(doc):
            bad += 1
            print(f"line {n}: {err.json_path}: {err.message}")
    print(f"{len(lines)} reports checked, {bad} schema errors, behaviors seen: {sorted(labels)}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
