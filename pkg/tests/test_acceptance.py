"""Acceptance suite: one check per criterion, each reporting PASS or FAIL.

Run under pytest (the PASS/FAIL lines appear in the terminal summary) or
directly with ``python3 tests/test_acceptance.py [--seed N]``.
"""
from __future__ import annotations

import random
import sys
import time
from pathlib import Path

import pytest

from chanrestrict.csm import classify_csm
from chanrestrict.formats import kind_of, parse_model
from chanrestrict.generators import random_global_type, random_hmsc, random_prefix_msc, random_word
from chanrestrict.hmsc import classify_hmsc, hmsc_existential_bound, hmsc_half_duplex, hmsc_k_synchronisable
from chanrestrict.indist import one_step_neighbors
from chanrestrict.msc import is_valid, linearizations, msc_of, satisfies_causal_delivery
from chanrestrict.mst2hmsc import translate, verify_translation
from chanrestrict.events import half_duplex_violation_index, max_occupancy
from chanrestrict.restrictions import (
    classify_msc,
    classify_word,
    half_duplex_violation,
    is_k_synchronous,
    min_existential_bound,
)
from chanrestrict.oracles import brute_words, splits_into_exchanges

sys.path.insert(0, str(Path(__file__).parent))
from regen_golden import FIXTURES, GOLDEN, report  # noqa: E402

DEFAULT_SEED = 20240611
RESULTS: list[str] = []


def load(name: str):
    path = FIXTURES / name
    return parse_model(path.read_text(), kind_of(path))


def verdict_keys(vs):
    return [(v.prop, v.holds, v.parameter, v.bounded_claim) for v in vs]


def classify_any(model, name: str):
    kind = kind_of(name)
    if kind == "gt":
        return classify_hmsc(translate(model).hmsc)
    if kind == "hmsc":
        return classify_hmsc(model)
    if kind == "csm":
        return classify_csm(model, 12, 6)
    return classify_msc(model)


# -- the criteria: each returns a list of failure descriptions ------------------------

def crit_1(rng):
    fails = []
    for name, bounded in (("fig1.gt", False), ("fig1.hmsc", False), ("fig1.csm", True)):
        got = verdict_keys(classify_any(load(name), name))
        want = [
            ("half-duplex", True, None, bounded),
            ("exist-bounded", True, 1, bounded),
            ("k-synchronisable", True, 1, bounded),
        ]
        if got != want:
            fails.append(f"{name}: {got}")
    return fails


LANDSCAPE = {
    "h2.bmsc": [(False, None), (True, 1), (True, 2)],
    "h3.bmsc": [(False, None), (True, 1), (False, None)],
    "h4.bmsc": [(True, None), (True, 1), (False, None)],
    "h5.bmsc": [(True, None), (True, 1), (True, 3)],
}


def crit_2(rng):
    fails = []
    for name, want in LANDSCAPE.items():
        got = [(v.holds, v.parameter) for v in classify_msc(load(name))]
        if got != want:
            fails.append(f"{name}: {got}")
    return fails


def crit_3(rng):
    fails = []
    for csm, chart in (("c3.csm", "h3.bmsc"), ("c4.csm", "h2.bmsc")):
        got = [(v.holds, v.parameter) for v in classify_csm(load(csm), 12, 6)]
        if got != LANDSCAPE[chart]:
            fails.append(f"{csm}: {got} differs from {chart}")
    want = {
        "c5.csm": [("half-duplex", False, None, False), ("exist-bounded", False, None, False), ("k-synchronisable", True, 1, True)],
        "c6.csm": [("half-duplex", True, None, True), ("exist-bounded", False, None, False), ("k-synchronisable", True, 1, True)],
    }
    for name, expected in want.items():
        vs = classify_csm(load(name), 12, 6)
        if verdict_keys(vs) != expected:
            fails.append(f"{name}: {verdict_keys(vs)}")
        elif not (vs[1].witness and "lasso" in vs[1].witness and "channel" in vs[1].witness):
            fails.append(f"{name}: no pumping witness for the unbounded verdict")
    return fails


def _types(rng, n=200):
    return [random_global_type(rng, depth=5, max_branches=3) for _ in range(n)]


def crit_4(rng):
    fails = []
    for g in _types(rng):
        h = translate(g).hmsc
        if not hmsc_half_duplex(h).holds:
            fails.append(f"not half-duplex: {g}")
        elif hmsc_existential_bound(h) > 1:
            fails.append(f"bound above 1: {g}")
        elif not hmsc_k_synchronisable(h, 1).holds:
            fails.append(f"not 1-synchronisable: {g}")
    return fails


def crit_5(rng):
    fails = []
    for g in _types(rng):
        rep = verify_translation(g, 10)
        if not rep.ok:
            fails.append(f"{g}: {rep.detail} ({rep.counterexample})")
    return fails


def crit_6(rng):
    fails = []
    for _ in range(200):
        h = random_hmsc(rng, max_vertices=5, max_nodes=6)
        if hmsc_k_synchronisable(h, 1).holds and not hmsc_half_duplex(h).holds:
            fails.append(str(h.labels))
    return fails


def crit_7(rng):
    fails = []
    for _ in range(500):
        m = random_prefix_msc(rng, 8)
        words = brute_words(m)
        n_sends = len(m.sends)
        if min_existential_bound(m, max(1, n_sends)).bound != min(max_occupancy(w) for w in words):
            fails.append(f"bound: {m.labels}")
        hd = any(half_duplex_violation_index(w) is not None for w in words)
        if (half_duplex_violation(m) is not None) != hd:
            fails.append(f"half-duplex: {m.labels}")
        for k in range(1, max(1, n_sends) + 1):
            if (is_k_synchronous(m, k) is not None) != any(splits_into_exchanges(w, k) for w in words):
                fails.append(f"{k}-synchronous: {m.labels}")
    return fails


def crit_8(rng):
    fails = []
    for _ in range(500):
        w = random_word(rng, 10)
        ref = [v.key() for v in classify_word(w)]
        for u in one_step_neighbors(w):
            if [v.key() for v in classify_word(u)] != ref:
                fails.append(f"{w} vs {u}")
    return fails


def crit_9(rng):
    fails = []
    for _ in range(500):
        m = random_prefix_msc(rng, 8)
        if not is_valid(m) or not satisfies_causal_delivery(m):
            fails.append(str(m.labels))
    return fails


def crit_10(rng):
    fails = []
    for _ in range(500):
        m = random_prefix_msc(rng, 8)
        if not all(msc_of(w).isomorphic(m) for w in linearizations(m)):
            fails.append(str(m.labels))
    return fails


def crit_11(rng):
    fails = []
    for f in sorted(FIXTURES.iterdir()):
        golden = GOLDEN / f"{f.name}.json"
        if not golden.exists():
            fails.append(f"{f.name}: no golden file")
        elif report(f) != golden.read_text():
            fails.append(f"{f.name}: report differs from golden")
    return fails


CRITERIA = {
    1: ("list protocol as type, HMSC and CSM: HD, bound 1, 1-sync", crit_1),
    2: ("chart landscape h2..h5", crit_2),
    3: ("machine landscape c3..c6", crit_3),
    4: ("200 translated types are HD, bound <= 1, 1-sync", crit_4),
    5: ("200 translated types pass bounded language check at length 10", crit_5),
    6: ("200 random HMSCs: 1-sync implies HD", crit_6),
    7: ("500 prefix charts agree with exhaustive oracles", crit_7),
    8: ("500 words keep their verdicts under one-step swaps", crit_8),
    9: ("500 prefix charts satisfy causal delivery", crit_9),
    10: ("500 prefix charts survive linearise-then-rebuild", crit_10),
    11: ("fixture reports match golden files", crit_11),
}


def run_criterion(n: int, seed: int) -> tuple[bool, str]:
    title, fn = CRITERIA[n]
    t0 = time.perf_counter()
    fails = fn(random.Random(seed * 100 + n))
    dt = time.perf_counter() - t0
    status = "PASS" if not fails else "FAIL"
    line = f"criterion {n:2d} {status}  {title}  ({dt:.1f}s)"
    if fails:
        line += f"  {len(fails)} failure(s), first: {fails[0]}"
    return not fails, line


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, seed):
    ok, line = run_criterion(n, seed)
    RESULTS.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    import argparse

    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("criteria", nargs="*", type=int, default=sorted(CRITERIA))
    args = ap.parse_args()
    results = [run_criterion(n, args.seed) for n in args.criteria]
    for _, line in results:
        print(line, flush=True)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
