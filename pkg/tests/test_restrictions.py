import pytest

from chanrestrict.events import as_word
from chanrestrict.generators import random_prefix_msc
from chanrestrict.msc import bmsc_from_rows, empty_msc, msc_of
from chanrestrict.oracles import (
    oracle_half_duplex_violated,
    oracle_k_synchronous,
    oracle_min_bound,
    splits_into_exchanges,
)
from chanrestrict.restrictions import (
    check_decomposition,
    classify_word,
    half_duplex_violation,
    is_k_synchronous,
    min_existential_bound,
    min_sync_k,
)
from chanrestrict.events import is_b_bounded

FIG4 = {
    "h2": {"P": "P>Q!m Q>P?m", "Q": "Q>P!m P>Q?m"},
    "h3": {"P": "P>Q!m1 Q>P?m4", "Q": "Q>P!m4 Q>R!m2 R>Q?m3 P>Q?m1", "R": "Q>R?m2 R>Q!m3"},
    "h4": {"P": "R>P?c Q>P?a", "Q": "Q>P!a Q>R!b", "R": "Q>R?b R>P!c"},
    "h5": {"P": "P>Q!a R>P?c", "Q": "Q>R!b P>Q?a", "R": "R>P!c Q>R?b"},
}


@pytest.fixture(scope="module")
def charts():
    return {k: bmsc_from_rows(v) for k, v in FIG4.items()}


def test_existential_bound_examples(charts):
    assert min_existential_bound(charts["h2"], 2).bound == 1
    assert min_existential_bound(charts["h5"], 3).bound == 1
    m = bmsc_from_rows({"P": "P>Q!a P>Q!b", "Q": "P>Q?a P>Q?b"})
    res = min_existential_bound(m, 2)
    assert res.bound == 1 == oracle_min_bound(m)
    assert is_b_bounded(res.witness, 1)


def test_existential_bound_cap():
    # Q may only start receiving after R's x, which R sends after P's last send
    m = bmsc_from_rows({"P": "P>Q!a P>Q!b P>R!y", "R": "P>R?y R>Q!x", "Q": "R>Q?x P>Q?a P>Q?b"})
    assert oracle_min_bound(m) == 2
    assert min_existential_bound(m, 1) is None
    assert min_existential_bound(m, 2).bound == 2


def test_k_sync_examples(charts):
    dec = is_k_synchronous(charts["h2"], 2)
    assert dec is not None and [(len(s), len(r)) for s, r in dec.segments] == [(2, 2)]
    assert is_k_synchronous(charts["h5"], 1) is None
    assert is_k_synchronous(charts["h5"], 2) is None
    assert is_k_synchronous(charts["h5"], 3) is not None
    for k in range(1, len(charts["h3"]) + 1):
        assert is_k_synchronous(charts["h3"], k) is None


def test_min_sync_k_examples(charts):
    assert min_sync_k(msc_of("P>Q!cons P>Q?cons")).k == 1
    assert min_sync_k(charts["h4"]) is None
    assert min_sync_k(empty_msc()).k == 1


def test_half_duplex_examples(charts):
    v = half_duplex_violation(charts["h2"])
    assert v is not None
    assert {str(charts["h2"].labels[v.send1]), str(charts["h2"].labels[v.send2])} == {"P>Q!m", "Q>P!m"}
    assert half_duplex_violation(charts["h4"]) is None
    assert half_duplex_violation(charts["h5"]) is None


def test_classify_word_examples():
    hd, exb, sync = classify_word("P>Q!m Q>P!m")
    assert not hd.holds and exb.parameter == 1 and sync.parameter == 1
    assert splits_into_exchanges(as_word("P>Q!m Q>P!m"), 1)
    fig1 = "P>Q!cons P>Q?cons P>Q!nil P>Q?nil Q>P!ack Q>P?ack"
    assert [(v.holds, v.parameter) for v in classify_word(fig1)] == [(True, None), (True, 1), (True, 1)]
    assert [(v.holds, v.parameter) for v in classify_word("P>Q!a P>Q?a")] == [(True, None), (True, 1), (True, 1)]


def test_oracles_on_random_charts(rng):
    for _ in range(120):
        m = random_prefix_msc(rng, 7)
        n_sends = max(1, len(m.sends))
        assert min_existential_bound(m, n_sends).bound == oracle_min_bound(m)
        assert (half_duplex_violation(m) is not None) == oracle_half_duplex_violated(m)
        for k in (1, 2, 3):
            dec = is_k_synchronous(m, k)
            assert (dec is not None) == oracle_k_synchronous(m, k)
            if dec is not None:
                assert check_decomposition(m, dec) == []


def test_monotonicity(rng):
    for _ in range(60):
        m = random_prefix_msc(rng, 8)
        for k in (1, 2, 3):
            if is_k_synchronous(m, k) is not None:
                assert is_k_synchronous(m, k + 1) is not None
        res = min_existential_bound(m, max(1, len(m.sends)))
        assert is_b_bounded(res.witness, res.bound + 1)
