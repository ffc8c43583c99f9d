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
"""Builds the golden three-mode metric report for the 6-sample fixture.

Everything here is independent of the C++ code: task scores, tokenization
and bin-token stripping are re-implemented, and the metrics come from
pycocoevalcap and nltk. CIDEr document frequencies span all six samples in
every mode. Scaled BLEU weights each sample's clipped n-gram matches by its
task score before the corpus precisions are formed.

    python3 tests/oracle/report_oracle.py tests/fixtures
"""

import json
import math
import re
import sys
from pathlib import Path

from nltk.stem.porter import PorterStemmer
from nltk.translate.meteor_score import meteor_score
from pycocoevalcap.bleu.bleu_scorer import BleuScorer, cook_refs, cook_test
from pycocoevalcap.cider.cider import Cider
from pycocoevalcap.rouge.rouge import Rouge

PUNCT = set("!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~")
BIN = re.compile(r"<bin_\d{1,3}>")


def tokenize(text):
    text = BIN.sub(" ", text)
    out, cur = [], ""
    for ch in text:
        if ch.isspace():
            if cur:
                out.append(cur)
            cur = ""
        elif ch in PUNCT:
            if cur:
                out.append(cur)
            cur = ""
            out.append(ch)
        else:
            cur += ch.lower()
    if cur:
        out.append(cur)
    return out


def task_score(pred, gold):
    ds = gold["dataset"]
    if ds == "vqax":
        n = sum(a["count"] for a in gold["gold_answers"] if a["text"] == pred["answer"])
        return min(n, 3) / 3
    if ds == "esnlive":
        label = {"yes": "entailment", "maybe": "neutral", "no": "contradiction"}.get(pred["answer"])
        return 1.0 if label == gold["gold_answers"] else 0.0
    return 1.0 if pred["vcr_index"] == gold["gold_answers"] else 0.0


class NoWordNet:
    def synsets(self, word):
        return []


def bleu_from_comps(comps):
    tiny, small = 1e-15, 1e-9
    testlen = sum(c["testlen"] for c in comps)
    reflen = sum(c["reflen"] for c in comps)
    guess = [sum(c["guess"][k] for c in comps) for k in range(4)]
    correct = [sum(c["correct"][k] for c in comps) for k in range(4)]
    out, bleu = [], 1.0
    for k in range(4):
        bleu *= (correct[k] + tiny) / (guess[k] + small)
        out.append(bleu ** (1.0 / (k + 1)))
    ratio = (testlen + tiny) / (reflen + small)
    if ratio < 1:
        out = [b * math.exp(1 - 1 / ratio) for b in out]
    return out


def main(out_dir):
    gold = {}
    for line in Path(out_dir, "gold6.jsonl").read_text().splitlines():
        rec = json.loads(line)
        gold[rec["id"]] = rec
    preds = [json.loads(l) for l in Path(out_dir, "preds6.jsonl").read_text().splitlines()]

    stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)
    rows = []
    gts, res = {}, {}
    for i, p in enumerate(preds):
        g = gold[p["sample_id"]]
        cand = tokenize(p["explanation"])
        refs = [tokenize(r) for r in g["gold_explanations"]]
        gts[i] = [" ".join(r) for r in refs]
        res[i] = [" ".join(cand)]
        # BleuScorer needs the closest reference length resolved per sample.
        crefs = cook_refs([" ".join(r) for r in refs], n=4)
        comps = cook_test(" ".join(cand), crefs, eff=None, n=4)
        reflens = crefs[0]
        testlen = comps["testlen"]
        comps["reflen"] = BleuScorer()._single_reflen(reflens, "closest", testlen)
        rows.append({
            "id": p["sample_id"],
            "score": task_score(p, g),
            "malformed": p["answer"] == "",
            "cand": cand,
            "refs": refs,
            "bleu": comps,
            "rouge": Rouge().calc_score([" ".join(cand)], [" ".join(r) for r in refs]) if cand else 0.0,
            "meteor": meteor_score(refs, cand, stemmer=stemmer, wordnet=NoWordNet()),
        })
    _, cider_each = Cider().compute_score(gts, res)
    for row, c in zip(rows, cider_each):
        row["cider"] = float(c)

    accuracy = round(100 * sum(r["score"] for r in rows) / len(rows), 1)
    golden = {}
    for mode in ("filtered", "unfiltered", "scaled"):
        if mode == "filtered":
            used = [(r, 1.0) for r in rows if r["score"] > 0]
        elif mode == "unfiltered":
            used = [(r, 1.0) for r in rows]
        else:
            used = [(r, r["score"]) for r in rows]
        report = {
            "mode": mode,
            "accuracy": accuracy,
            "counts": {
                "total": len(rows),
                "evaluated": len(used),
                "excluded": len(rows) - len(used),
                "malformed": sum(r["malformed"] for r in rows),
            },
        }
        comps = []
        for r, w in used:
            c = dict(r["bleu"])
            c["correct"] = [w * x for x in c["correct"]]
            comps.append(c)
        bleu = bleu_from_comps(comps)
        n = len(used)
        raw = {
            "bleu1": 100 * bleu[0], "bleu2": 100 * bleu[1],
            "bleu3": 100 * bleu[2], "bleu4": 100 * bleu[3],
            "rouge_l": 100 * sum(w * r["rouge"] for r, w in used) / n,
            "meteor": 100 * sum(w * r["meteor"] for r, w in used) / n,
            "cider": 100 * sum(w * r["cider"] for r, w in used) / n,
        }
        report["metrics"] = {k: round(v, 1) for k, v in raw.items()}
        golden[mode] = {"report": report, "raw": raw}
    Path(out_dir, "report6_golden.json").write_text(json.dumps(golden, indent=1) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/fixtures")
