import pytest

from chanrestrict.events import as_word, format_word, is_channel_compliant, is_complete, is_half_duplex_word
from chanrestrict.generators import random_hmsc
from chanrestrict.hmsc import (
    Hmsc,
    HmscPath,
    LanguageBudgetExceeded,
    hmsc_existential_bound,
    hmsc_half_duplex,
    hmsc_k_synchronisable,
    hmsc_language,
    lasso_prefix_words,
    msc_of_path,
    path_mscs,
    paths,
    single_vertex_hmsc,
    validate_hmsc,
)
from chanrestrict.indist import closure
from chanrestrict.msc import bmsc_from_rows, empty_msc, linearizations, msc_of
from chanrestrict.restrictions import is_k_synchronous

H4D = {"P": "P>Q!a R>P?c", "Q": "Q>R!b P>Q?a", "R": "R>P!c Q>R?b"}
H4B = {"P": "P>Q!m1 Q>P?m4", "Q": "Q>P!m4 Q>R!m2 R>Q?m3 P>Q?m1", "R": "Q>R?m2 R>Q!m3"}
H4A = {"P": "P>Q!m Q>P?m", "Q": "Q>P!m P>Q?m"}


def test_fixture_hmscs_validate(fixture):
    assert validate_hmsc(fixture("fig1.hmsc")).ok
    assert validate_hmsc(fixture("h7.hmsc")).ok


def test_validation_failures():
    h = Hmsc(["a", "b"], [], "a", {"a", "b"}, {})
    assert "unreachable" in validate_hmsc(h).codes()
    h = Hmsc(["a", "b"], [("a", "b")], "a", set(), {})
    assert "incompletable" in validate_hmsc(h).codes()
    h = Hmsc(["a"], [], "a", {"a"}, {"a": msc_of("P>Q!m")})
    assert "label" in validate_hmsc(h).codes()


def test_paths(fixture):
    h = fixture("fig1.hmsc")
    ps = list(paths(h, 4))
    finite = [p.stem for p in ps if not p.is_lasso]
    assert finite == [("v0", "cons", "cons", "exit"), ("v0", "cons", "exit"), ("v0", "exit")]
    assert HmscPath(("v0",), ("cons",)) in ps
    assert list(paths(single_vertex_hmsc(empty_msc()), 3)) == [HmscPath(("v0",))]
    loop = Hmsc(["a", "b"], [("a", "b"), ("b", "a")], "a", set(), {})
    assert all(p.is_lasso for p in paths(loop, 4))


def test_msc_of_path(fixture):
    h = fixture("fig1.hmsc")
    m = msc_of_path(h, HmscPath(("v0", "exit")))
    assert m.isomorphic(msc_of("P>Q!nil P>Q?nil Q>P!ack Q>P?ack"))
    m = msc_of_path(h, HmscPath(("v0", "cons", "exit")))
    assert as_word("P>Q!cons P>Q!nil P>Q?cons P>Q?nil Q>P!ack Q>P?ack") in set(linearizations(m))


def test_language_examples(fixture):
    assert hmsc_language(single_vertex_hmsc(empty_msc()), 5) == {()}
    h = fixture("fig1.hmsc")
    lang = hmsc_language(h, 8)
    assert closure(lang) == lang
    for w in lang:
        assert is_channel_compliant(w) and is_complete(w)
    with pytest.raises(LanguageBudgetExceeded):
        hmsc_language(h, 12, budget=5)


def test_lasso_prefixes_are_not_words(fixture):
    h = fixture("fig1.hmsc")
    pre = lasso_prefix_words(h, 3, unroll=2)
    assert pre and not (pre & hmsc_language(h, 12))


def test_restriction_checks(fixture):
    fig1 = fixture("fig1.hmsc")
    assert hmsc_k_synchronisable(fig1, 1).holds
    assert hmsc_existential_bound(fig1) == 1
    assert hmsc_half_duplex(fig1).holds
    d = single_vertex_hmsc(bmsc_from_rows(H4D))
    v = hmsc_k_synchronisable(d, 2)
    assert not v.holds and v.witness == {"vertex": "v0"}
    assert hmsc_existential_bound(d) == 1
    b = single_vertex_hmsc(bmsc_from_rows(H4B))
    assert not any(hmsc_k_synchronisable(b, k).holds for k in range(1, 9))
    assert not hmsc_half_duplex(single_vertex_hmsc(bmsc_from_rows(H4A))).holds
    assert hmsc_half_duplex(fixture("h7.hmsc")).holds
    assert hmsc_existential_bound(single_vertex_hmsc(empty_msc())) == 0


def test_vertex_rules_agree_with_word_level_oracle(rng):
    for _ in range(60):
        h = random_hmsc(rng, 4, 4)
        if not validate_hmsc(h).ok:
            continue
        words = hmsc_language(h, 10) | lasso_prefix_words(h, len(h.vertices), unroll=2)
        word_violation = any(not is_half_duplex_word(w) for w in words)
        hd = hmsc_half_duplex(h)
        if word_violation:
            assert not hd.holds
        if not hd.holds:
            # the offending vertex chart shows the violation in every path through it
            v = hd.witness["vertex"]
            assert any(not is_half_duplex_word(w) for w in linearizations(h.labels[v]))
        for m in path_mscs(h, 10):
            if hmsc_k_synchronisable(h, 1).holds:
                assert is_k_synchronous(m, 1) is not None


def test_random_hmsc_languages_closed(rng):
    for _ in range(25):
        h = random_hmsc(rng, 3, 4)
        if validate_hmsc(h).ok:
            lang = hmsc_language(h, 8)
            assert closure(lang) == lang
