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
"""Freezes reference metric values for the C++ metric tests.

Needs pycocoevalcap (BLEU, ROUGE-L, CIDEr-D) and nltk (METEOR, Porter).
METEOR runs with the original Porter algorithm and without WordNet, which
is the toolkit's default exact+stem configuration.

    python3 tests/oracle/metric_oracle.py tests/fixtures
"""

import json
import random
import sys
from pathlib import Path

from nltk.stem.porter import PorterStemmer
from nltk.translate.meteor_score import meteor_score
from pycocoevalcap.bleu.bleu import Bleu
from pycocoevalcap.cider.cider import Cider
from pycocoevalcap.rouge.rouge import Rouge

SEED = 20261015

FAMILIES = [
    ["run", "runs", "running", "runner"],
    ["play", "plays", "playing", "played", "player", "players"],
    ["hold", "holds", "holding"],
    ["wear", "wears", "wearing"],
    ["sit", "sits", "sitting"],
    ["stand", "stands", "standing"],
    ["ride", "rides", "riding", "rider"],
    ["eat", "eats", "eating"],
    ["look", "looks", "looking", "looked"],
    ["happy", "happily", "happiness"],
    ["relate", "related", "relational", "relation"],
    ["condition", "conditional", "conditions"],
    ["generate", "generates", "generation", "generalization"],
    ["connect", "connected", "connecting", "connection", "connections"],
    ["hope", "hopeful", "hopefulness"],
    ["decide", "decisive", "decisiveness"],
    ["sensible", "sensibility", "sense"],
    ["electric", "electrical", "electricity"],
    ["agree", "agreed", "agreement"],
    ["cat", "cats"],
    ["dog", "dogs"],
    ["person", "people"],
    ["car", "cars"],
    ["ball", "balls"],
    ["tree", "trees"],
    ["controll", "controlling", "controlled"],
    ["fly", "flies", "flying"],
    ["cry", "cries", "crying"],
    ["sky", "skies"],
]

FILLER = [
    "the", "a", "is", "are", "on", "in", "of", "with", "because", "there",
    "man", "woman", "child", "street", "field", "water", "snow", "blue",
    "red", "green", "white", "large", "small", "table", "food", "bus",
    "shirt", "hat", "grass", "beach", "umbrella", "phone", "it", "they",
    "his", "her", "two", "three", "near", "behind", "front", "background",
]

PUNCT = [".", ",", "?", "!", "'"]


def family_of(word):
    for fam in FAMILIES:
        if word in fam:
            return fam
    return None


def base_sentence(rng):
    n = rng.randint(4, 14)
    words = []
    for _ in range(n):
        if rng.random() < 0.4:
            words.append(rng.choice(rng.choice(FAMILIES)))
        else:
            words.append(rng.choice(FILLER))
    if rng.random() < 0.5:
        words.insert(rng.randint(1, len(words)), rng.choice(PUNCT))
    if rng.random() < 0.6:
        words.append(".")
    return words


def mutate(words, rng, strength):
    out = list(words)
    for _ in range(strength):
        op = rng.random()
        i = rng.randrange(len(out))
        if op < 0.3:
            fam = family_of(out[i])
            if fam:
                out[i] = rng.choice(fam)
            else:
                out[i] = rng.choice(FILLER)
        elif op < 0.45 and len(out) > 1:
            del out[i]
        elif op < 0.65:
            out.insert(i, rng.choice(FILLER + PUNCT))
        elif op < 0.8 and len(out) > 1:
            j = min(i + 1, len(out) - 1)
            out[i], out[j] = out[j], out[i]
        else:
            out[i] = rng.choice(rng.choice(FAMILIES))
    return out


def make_pairs(rng, count):
    pairs = []
    for k in range(count):
        base = base_sentence(rng)
        refs = [mutate(base, rng, rng.randint(0, 3)) for _ in range(rng.randint(1, 4))]
        kind = k % 10
        if kind == 0:
            cand = list(refs[0])
        elif kind == 1:
            cand = [rng.choice(["zebra", "violin", "xylophone", "quartz"])
                    for _ in range(rng.randint(1, 5))]
        elif kind == 2:
            cand = [rng.choice(base)]
        else:
            cand = mutate(base, rng, rng.randint(1, 6))
        pairs.append((cand, refs))
    return pairs


def f_measure(p, r, beta=1.2):
    if p == 0 or r == 0:
        return 0.0
    return (1 + beta ** 2) * p * r / (r + beta ** 2 * p)


def lcs(a, b):
    row = [0] * (len(b) + 1)
    for x in a:
        prev = 0
        for j in range(1, len(b) + 1):
            cur = row[j]
            row[j] = prev + 1 if x == b[j - 1] else max(row[j], row[j - 1])
            prev = cur
    return row[-1]


def rouge_max_f(cand, refs):
    best = 0.0
    for ref in refs:
        l = lcs(cand, ref)
        best = max(best, f_measure(l / len(cand), l / len(ref)))
    return best


class NoWordNet:
    def synsets(self, word):
        return []


def main(out_dir):
    rng = random.Random(SEED)
    pairs = make_pairs(rng, 120)
    gts = {i: [" ".join(r) for r in refs] for i, (_, refs) in enumerate(pairs)}
    res = {i: [" ".join(c)] for i, (c, _) in enumerate(pairs)}

    bleu, _ = Bleu(4).compute_score(gts, res, verbose=0)
    rouge, rouge_each = Rouge().compute_score(gts, res)
    cider, cider_each = Cider().compute_score(gts, res)

    stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)
    meteor_each = [
        meteor_score(refs, cand, stemmer=stemmer, wordnet=NoWordNet())
        for cand, refs in pairs
    ]

    records = []
    for i, (cand, refs) in enumerate(pairs):
        records.append({
            "candidate": " ".join(cand),
            "references": [" ".join(r) for r in refs],
            "rouge_l": float(rouge_each[i]),
            "rouge_l_max_f": rouge_max_f(cand, refs),
            "meteor": float(meteor_each[i]),
            "cider": float(cider_each[i]),
        })
    fixture = {
        "description": "pycocoevalcap BLEU/ROUGE-L/CIDEr-D and nltk METEOR "
                       "(original Porter, no WordNet) over pre-tokenized text",
        "seed": SEED,
        "pairs": records,
        "corpus": {
            "bleu": [float(b) for b in bleu],
            "rouge_l": float(rouge),
            "meteor": sum(meteor_each) / len(meteor_each),
            "cider": float(cider),
        },
    }
    Path(out_dir, "metric_oracle.json").write_text(json.dumps(fixture, indent=1) + "\n")

    vocab = sorted({w for fam in FAMILIES for w in fam} | set(FILLER) | set(EXTRA_WORDS))
    stems = {w: stemmer.stem(w) for w in vocab}
    Path(out_dir, "porter_words.json").write_text(json.dumps(stems, indent=1, sort_keys=True) + "\n")


# Words chosen to reach every rule of the algorithm at least once.
EXTRA_WORDS = """
caresses ponies ties caress cats feed agreed plastered bled motoring sing
conflated troubled sized hopping tanned falling hissing fizzed failing filing
happy sky relational conditional rational valenci hesitanci digitizer
conformabli radicalli differentli vileli analogousli vietnamization predication
operator feudalism decisiveness hopefulness callousness formaliti sensitiviti
sensibiliti triplicate formative formalize electriciti electrical hopeful
goodness revival allowance inference airliner gyroscopic adjustable defensible
irritant replacement adjustment dependent adoption homologou communism
activate angulariti homologous effective bowdlerize probate rate cease
controll roll generalizations oscillators is as was has this us bus gas
yes eyes by dying lying tying sky skies enjoy enjoyed employ employment
abilities ability abate abatement agreement argument arguing argued
bottled bottling jumped jumping meeting meetings meet mice hinged hinge
ear earring national nationalism nationalization international
""".split()


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/fixtures")
