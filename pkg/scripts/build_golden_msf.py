#!/usr/bin/env python3
"""Regenerate the golden annotation fixture used by the model tests.

The marking is a seeded random interval soup at realistic scale; the stats
are computed here by brute force on a per-sample array, deliberately not
through the library, so the fixture is an independent cross-check of
msf_stats. Output is committed at tests/data/golden_msf.json.
"""
import json
import math
import random
from pathlib import Path

LENGTH = 600_000
SAMPLE_RATE = 250.0
N_RAW = 300
SEED = 42


def main():
    rng = random.Random(SEED)
    raw = []
    for _ in range(N_RAW):
        start = rng.randrange(0, LENGTH - 2000)
        dur = max(25, int(rng.lognormvariate(math.log(500), 0.9)))
        raw.append([start, min(LENGTH, start + dur)])

    marked = bytearray(LENGTH)
    for s, e in raw:
        for i in range(s, e):
            marked[i] = 1

    runs = []
    i = 0
    while i < LENGTH:
        if marked[i]:
            j = i
            while j < LENGTH and marked[j]:
                j += 1
            runs.append((i, j))
            i = j
        else:
            i += 1

    durations = [(e - s) / SAMPLE_RATE for s, e in runs]
    n = len(durations)
    mean = sum(durations) / n
    var = sum((d - mean) ** 2 for d in durations) / n
    ordered = sorted(durations)
    if n % 2:
        median = ordered[n // 2]
    else:
        median = (ordered[n // 2 - 1] + ordered[n // 2]) / 2

    out = {
        "sample_rate": SAMPLE_RATE,
        "length": LENGTH,
        "raw_intervals": raw,
        "normalized_intervals": [[s, e] for s, e in runs],
        "stats": {
            "count": n,
            "duration_fraction": sum(marked) / LENGTH,
            "mean_s": mean,
            "std_s": math.sqrt(var),
            "median_s": median,
        },
    }
    dest = Path(__file__).resolve().parent.parent / "tests" / "data" / "golden_msf.json"
    dest.parent.mkdir(parents=True, exist_ok=True)
    dest.write_text(json.dumps(out, indent=2) + "\n")
    print(f"wrote {dest}: {n} intervals, "
          f"{100 * out['stats']['duration_fraction']:.2f}% marked")


if __name__ == "__main__":
    main()
