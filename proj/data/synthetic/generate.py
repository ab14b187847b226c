#!/usr/bin/env python3
"""Regenerates the bundled synthetic fixture: 9 layer CSVs + config.json.

20 entities in three latent groups. Each layer has its own number of sites;
every group prefers a different band of sites. Four entities are planted to be
filtered: two are absent everywhere, two are absent from one layer.
Output is deterministic (fixed seed, fixed formatting).
"""
import json
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent
SEED = 20240517
LAYERS = ["layer_a", "layer_b", "layer_c", "layer_d", "layer_e",
          "layer_f", "layer_g", "layer_h", "layer_i"]
SITES = [6, 9, 5, 12, 7, 10, 8, 11, 6]
ENTITIES = [f"E{i:02d}" for i in range(1, 21)]
GROUP = {e: i % 3 for i, e in enumerate(ENTITIES)}

ABSENT_EVERYWHERE = {"E18", "E19"}
# entity -> layer index where it has an all-zero row
ABSENT_IN_LAYER = {"E17": 4}
# only listed in this layer's file; missing rows elsewhere become zero rows
ONLY_IN = {"E20": 2}
# listed nowhere except as zero rows in these layers
E18_FILES = {0, 5}


def main():
    rng = random.Random(SEED)
    for l, (name, p) in enumerate(zip(LAYERS, SITES)):
        sites = [f"s{j + 1}" for j in range(p)]
        raw = {}
        for e in ENTITIES:
            if e in ONLY_IN and ONLY_IN[e] != l:
                continue
            if e == "E18" and l not in E18_FILES:
                continue
            g = GROUP[e]
            row = []
            for j in range(p):
                band = 3 * j // p
                base = 1.0 if band == g else 0.15
                v = base * rng.lognormvariate(0.0, 0.35)
                if rng.random() < 0.08:
                    v = 0.0
                row.append(v)
            if e in ABSENT_EVERYWHERE or ABSENT_IN_LAYER.get(e) == l:
                row = [0.0] * p
            elif sum(row) == 0.0:
                row[rng.randrange(p)] = 0.5
            raw[e] = row
        totals = [sum(r[j] for r in raw.values()) for j in range(p)]
        lines = ["entity," + ",".join(sites)]
        for e, row in raw.items():
            cells = [f"{v / totals[j]:.6f}" if v > 0 else "0" for j, v in enumerate(row)]
            lines.append(e + "," + ",".join(cells))
        (HERE / f"{name}.csv").write_text("\n".join(lines) + "\n")

    config = {
        "inputs": [f"{n}.csv" for n in LAYERS],
        "output_dir": "out",
        "similarity": {"kind": "rbf", "sigma": "auto"},
        "snf": {"k": "auto", "epsilon": 1e-6, "max_iter": 100},
        "weights": "paired",
        "methods": ["snf", "sma-f", "sma-r", "sma-w"],
        "clustering": {"resolution": 1.0, "seed": 0},
        "export": {"formats": ["edge-list", "graphml"], "threshold": 0.0},
    }
    (HERE / "config.json").write_text(json.dumps(config, indent=2) + "\n")


if __name__ == "__main__":
    main()
