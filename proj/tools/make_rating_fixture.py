#!/usr/bin/env python3
# Copyright 2026 The endeval Authors
# SPDX-License-Identifier: Apache-2.0
"""Builds the two-annotator rating fixture used by the agreement tests.

Per-task scores behind the reference table are not available, so this
searches for integer 1-5 ratings of 25 Follow and 20 NotFollow tasks by two
annotators whose strata means and per-perspective Pearson r hit the
reference aggregates. The search is seeded and deterministic.

Usage: make_rating_fixture.py OUT_DIR
"""

import json
import math
import random
import sys
from pathlib import Path

N_FOLLOW, N_NOT_FOLLOW = 25, 20
PERSPECTIVES = ["fluency", "coherence", "instruction_following"]
# Strata means (averaged over both annotators) and annotator correlation.
TARGET_FOLLOW = [4.50, 4.12, 4.10]
TARGET_NOT_FOLLOW = [4.55, 4.10, 3.05]
TARGET_R = [0.43, 0.19, 0.36]


def pearson(x, y):
    n = len(x)
    mx, my = sum(x) / n, sum(y) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    if sxx == 0 or syy == 0:
        return None
    return sxy / math.sqrt(sxx * syy)


def initial_column(rng, n, total):
    """n integers in [1,5] summing to total, as even as possible, shuffled."""
    base, extra = divmod(total, n)
    col = [base + (1 if i < extra else 0) for i in range(n)]
    rng.shuffle(col)
    return col


def split_total(mean, n_tasks):
    total = round(mean * 2 * n_tasks)
    assert abs(total - mean * 2 * n_tasks) < 1e-9, "mean is not on the rating grid"
    return total // 2, total - total // 2


def solve_perspective(rng, p):
    fa, fb = split_total(TARGET_FOLLOW[p], N_FOLLOW)
    na, nb = split_total(TARGET_NOT_FOLLOW[p], N_NOT_FOLLOW)
    a = initial_column(rng, N_FOLLOW, fa) + initial_column(rng, N_NOT_FOLLOW, na)
    b = initial_column(rng, N_FOLLOW, fb) + initial_column(rng, N_NOT_FOLLOW, nb)
    strata = [(0, N_FOLLOW), (N_FOLLOW, N_FOLLOW + N_NOT_FOLLOW)]

    def loss(x, y):
        r = pearson(x, y)
        return 10.0 if r is None else abs(r - TARGET_R[p])

    best = loss(a, b)
    for step in range(200000):
        if best < 1e-4:
            break
        col = a if rng.random() < 0.5 else b
        lo, hi = strata[rng.randrange(2)]
        i, j = rng.randrange(lo, hi), rng.randrange(lo, hi)
        if i == j or col[i] >= 5 or col[j] <= 1:
            continue
        # Sum-preserving move inside one stratum and one annotator.
        col[i] += 1
        col[j] -= 1
        cur = loss(a, b)
        if cur <= best or rng.random() < 0.001:
            best = cur
        else:
            col[i] -= 1
            col[j] += 1
    return a, b


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "tests/fixtures/human_eval")
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20240521)
    columns = [solve_perspective(rng, p) for p in range(3)]

    # Tasks are listed in shuffled order so strata are not inferable from position.
    order = list(range(N_FOLLOW + N_NOT_FOLLOW))
    rng.shuffle(order)
    tasks, ratings = [], []
    for pos, k in enumerate(order):
        task_id = f"t{pos + 1:03d}"
        follow = k < N_FOLLOW
        tasks.append({
            "task_id": task_id,
            "instance_id": f"fixture-{k:03d}",
            "generator_name": "fixture-model",
            "context": f"Fixture story {k:03d} sentence one. Sentence two. Sentence three. Sentence four.",
            "instruction": f"What happens next in story {k:03d}?",
            "ending": f"The story {k:03d} ends.",
            "hidden_strata": "Follow" if follow else "NotFollow",
        })
        for annotator, idx in (("annotator-a", 0), ("annotator-b", 1)):
            rec = {"task_id": task_id, "annotator_id": annotator}
            for p, name in enumerate(PERSPECTIVES):
                rec[name] = columns[p][idx][k]
            rec["submitted_at"] = "2024-01-01T00:00:00Z"
            ratings.append(rec)

    (out / "tasks.json").write_text(json.dumps({"tasks": tasks}, indent=2) + "\n")
    with open(out / "ratings.jsonl", "w") as f:
        for r in sorted(ratings, key=lambda r: (r["task_id"], r["annotator_id"])):
            f.write(json.dumps(r) + "\n")

    for p, name in enumerate(PERSPECTIVES):
        a, b = columns[p]
        fm = (sum(a[:N_FOLLOW]) + sum(b[:N_FOLLOW])) / (2 * N_FOLLOW)
        nm = (sum(a[N_FOLLOW:]) + sum(b[N_FOLLOW:])) / (2 * N_NOT_FOLLOW)
        print(f"{name}: follow {fm:.4f} not_follow {nm:.4f} delta {fm - nm:.4f} r {pearson(a, b):.4f}")


if __name__ == "__main__":
    main()
