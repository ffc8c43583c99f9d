#!/usr/bin/env python3
# Copyright 2026 The evil-toolkit Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Golden human-evaluation report for the 20-record fixture.

Written as a plain tally, the way one would fill a spreadsheet: one row per
record, a validity column, unblinded columns, then column sums.

    python3 tests/oracle/human_oracle.py tests/fixtures
"""

import json
import sys
from fractions import Fraction
from pathlib import Path

VALUE = {"yes": Fraction(1), "weak_yes": Fraction(2, 3), "weak_no": Fraction(1, 3), "no": Fraction(0)}
SHORTCOMINGS = ["confusing_sentence", "insufficient_justification", "incorrect_image_description"]
QUORUM = 5


def normalize(answer):
    a = " ".join(answer.lower().split())
    while a and a[-1] in ".?!, ":
        a = a[:-1]
    return a


def pct(num, den):
    return None if den == 0 else round(float(Fraction(100) * num / den), 1)


def main(out_dir):
    tasks = {}
    for line in Path(out_dir, "human_tasks.jsonl").read_text().splitlines():
        t = json.loads(line)
        tasks[t["task_id"]] = t
    records = [json.loads(l) for l in Path(out_dir, "human_records.jsonl").read_text().splitlines()]

    rows = []
    invalid = 0
    invalid_by_task = {tid: 0 for tid in tasks}
    claimed = set()
    for r in records:
        t = tasks.get(r["task_id"])
        if t is None:
            invalid += 1
            continue
        ok = normalize(r["annotator_task_answer"]) == normalize(t["correct_answer"])
        key = (r["task_id"], r["annotator_id"])
        if not ok or key in claimed:
            invalid += 1
            invalid_by_task[r["task_id"]] += 1
            continue
        claimed.add(key)
        model_pos = t["order"].index("model")
        gt_pos = 1 - model_pos
        pref = r["preference"]
        if pref == "equal":
            preferred = "none"
        else:
            preferred = t["order"][0 if pref == "prefer_a" else 1]
        rows.append({
            "task": r["task_id"], "annotator": r["annotator_id"],
            "model": r["ratings"][model_pos], "gt": r["ratings"][gt_pos],
            "preferred": preferred,
        })

    n = len(rows)

    def source(col):
        if n == 0:
            return {"rated": 0, "mean_rating": None, "shortcomings": None}
        total = sum(VALUE[row[col]["label"]] for row in rows)
        return {
            "rated": n,
            "mean_rating": pct(total, n),
            "shortcomings": {
                s: pct(sum(1 for row in rows if s in row[col]["shortcomings"]), n)
                for s in SHORTCOMINGS
            },
        }

    report = {
        "records": {"valid": n, "invalid": invalid},
        "quorum": QUORUM,
        "sources": {"model": source("model"), "ground_truth": source("gt")},
        "preference": None if n == 0 else {
            "model": pct(sum(1 for r in rows if r["preferred"] == "model"), n),
            "no_preference": pct(sum(1 for r in rows if r["preferred"] == "none"), n),
            "ground_truth": pct(sum(1 for r in rows if r["preferred"] == "ground_truth"), n),
        },
    }
    task_rows = []
    for tid in sorted(tasks):
        mine = sorted((r for r in rows if r["task"] == tid), key=lambda r: r["annotator"])
        m = [r["model"]["label"] for r in mine]
        g = [r["gt"]["label"] for r in mine]
        task_rows.append({
            "task_id": tid,
            "valid": len(mine),
            "invalid": invalid_by_task[tid],
            "under_quorum": len(mine) < QUORUM,
            "model_ratings": m,
            "ground_truth_ratings": g,
            "model_mean": pct(sum(VALUE[x] for x in m), len(m)),
            "ground_truth_mean": pct(sum(VALUE[x] for x in g), len(g)),
        })
    report["tasks"] = task_rows
    report["under_quorum"] = [t["task_id"] for t in task_rows if t["under_quorum"]]
    Path(out_dir, "human_golden.json").write_text(json.dumps(report, indent=1) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/fixtures")
