#!/usr/bin/env python3
"""Convert a CSV export of a WTA tasks table into the uwfq-sim trace format.

Field mapping:
  workflow_id -> job_id
  user_id     -> user_id
  ts_submit   -> submit_ms
  runtime     -> task_runtime_ms (one row per task)

Rows with a missing or non-positive runtime are skipped.
"""

import argparse
import csv
import sys


def convert(src, dst):
    reader = csv.DictReader(src)
    writer = csv.writer(dst, lineterminator="\n")
    writer.writerow(["job_id", "user_id", "submit_ms", "task_runtime_ms"])
    kept = 0
    for row in reader:
        try:
            runtime = float(row["runtime"])
        except (KeyError, ValueError):
            continue
        if runtime <= 0:
            continue
        writer.writerow([row["workflow_id"], row["user_id"], row["ts_submit"], row["runtime"]])
        kept += 1
    return kept


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("input", help="WTA tasks table as CSV")
    parser.add_argument("-o", "--output", help="output path (default: stdout)")
    args = parser.parse_args()
    with open(args.input, newline="") as src:
        if args.output:
            with open(args.output, "w", newline="") as dst:
                kept = convert(src, dst)
        else:
            kept = convert(src, sys.stdout)
    print(f"{kept} task rows written", file=sys.stderr)


if __name__ == "__main__":
    main()
