import pytest
from hypothesis import given, strategies as st

from chanrestrict.events import (
    Lasso,
    WordSyntaxError,
    as_word,
    format_word,
    half_duplex_violation_index,
    is_b_bounded,
    is_channel_compliant,
    is_complete,
    is_half_duplex_word,
    matching,
    of_process,
    parse_word,
    project,
    receives_on,
    sends_on,
    values,
)


def W(s):
    return as_word(s)


def test_word_syntax_round_trip():
    w = W("P>Q!m Q>P?ack")
    assert format_word(w) == "P>Q!m Q>P?ack"
    assert parse_word("ε") == ()
    assert format_word(()) == "ε"


@pytest.mark.parametrize("bad", ["P>P!m", "PQ!m", "P>Q#m", "P>Q!"])
def test_word_syntax_errors(bad):
    with pytest.raises(WordSyntaxError):
        parse_word(bad)


def test_projection_examples():
    assert project(W("P>Q!m P>Q?m"), sends_on("P", "Q")) == W("P>Q!m")
    assert project((), of_process("P")) == ()
    fig1 = W("P>Q!cons P>Q?cons P>Q!nil P>Q?nil Q>P!ack Q>P?ack")
    assert project(fig1, of_process("Q")) == W("P>Q?cons P>Q?nil Q>P!ack")
    assert values(project(fig1, receives_on("P", "Q"))) == ("cons", "nil")


def test_compliance_examples():
    assert is_channel_compliant(W("P>Q!m P>Q?m"))
    assert not is_channel_compliant(W("P>Q?m P>Q!m"))
    assert not is_channel_compliant(W("P>Q!a P>Q!b P>Q?b"))


def test_completeness_examples():
    assert is_complete(W("P>Q!m P>Q?m"))
    assert not is_complete(W("P>Q!m"))
    assert is_complete(Lasso((), W("P>Q!m")))
    with pytest.raises(ValueError):
        is_complete(W("P>Q?m"))


def test_matching_examples():
    assert matching(W("P>Q!m P>Q?m")) == {1: 2}
    assert matching(W("P>Q!a P>Q!b P>Q?a P>Q?b")) == {1: 3, 2: 4}
    assert matching(W("P>Q!m Q>P!m")) == {}


def test_bounded_examples():
    assert is_b_bounded(W("P>Q!m P>Q?m"), 1)
    w = W("P>Q!a P>Q!b P>Q?a P>Q?b")
    assert not is_b_bounded(w, 1) and is_b_bounded(w, 2)
    fig1 = W("P>Q!cons P>Q?cons P>Q!nil P>Q?nil Q>P!ack Q>P?ack")
    assert is_b_bounded(fig1, 1)
    assert not is_b_bounded(Lasso((), W("P>Q!m")), 5)
    assert is_b_bounded(Lasso((), W("P>Q!m P>Q?m")), 1)


def test_half_duplex_examples():
    assert not is_half_duplex_word(W("P>Q!m Q>P!m P>Q?m Q>P?m"))
    assert half_duplex_violation_index(W("P>Q!m Q>P!m P>Q?m Q>P?m")) == 2
    assert is_half_duplex_word(W("P>Q!m P>Q?m Q>P!m Q>P?m"))
    assert not is_half_duplex_word(Lasso((), W("P>Q!m Q>P!m")))


# -- properties ----------------------------------------------------------------------

procs = st.sampled_from("PQR")

@st.composite
def words(draw, max_len=8):
    out = []
    for _ in range(draw(st.integers(0, max_len))):
        p = draw(procs)
        q = draw(procs.filter(lambda x: x != p))
        out.append(as_word(f"{p}>{q}{draw(st.sampled_from('!?'))}{draw(st.sampled_from('ab'))}")[0])
    return tuple(out)


def brute_compliant(w):
    for i in range(len(w) + 1):
        pre = w[:i]
        for ch in {e.channel for e in pre}:
            s = values(project(pre, sends_on(*ch)))
            r = values(project(pre, receives_on(*ch)))
            if s[: len(r)] != r:
                return False
    return True


@given(words())
def test_compliance_matches_prefix_definition(w):
    assert is_channel_compliant(w) == brute_compliant(w)


@given(words())
def test_compliance_prefix_closed(w):
    if is_channel_compliant(w):
        assert all(is_channel_compliant(w[:i]) for i in range(len(w)))


@given(words(), words())
def test_projection_commutes_with_concatenation(u, v):
    for sel in (of_process("P"), sends_on("P", "Q"), receives_on("Q", "R")):
        assert project(u + v, sel) == project(u, sel) + project(v, sel)
        assert project(project(u, sel), sel) == project(u, sel)


@given(words(), st.integers(1, 4))
def test_boundedness_monotone(w, b):
    if is_b_bounded(w, b):
        assert is_b_bounded(w, b + 1)


@given(words())
def test_matching_brute_force(w):
    if not is_channel_compliant(w):
        return
    expected = {}
    for i, e in enumerate(w, 1):
        for j, f in enumerate(w, 1):
            if e.is_send and f.is_receive and e.channel == f.channel:
                n_s = sum(1 for x in w[:i] if x.is_send and x.channel == e.channel)
                n_r = sum(1 for x in w[:j] if x.is_receive and x.channel == e.channel)
                if n_s == n_r:
                    expected[i] = j
    assert matching(w) == expected


@given(words())
def test_half_duplex_simulation(w):
    if not is_channel_compliant(w):
        return
    queues = {}
    ok = True
    for e in w:
        q = queues.setdefault(e.channel, [])
        if e.is_send:
            q.append(e.msg)
        else:
            q.pop(0)
        rev = queues.get((e.channel[1], e.channel[0]), [])
        if q and rev:
            ok = False
            break
    assert is_half_duplex_word(w) == ok
