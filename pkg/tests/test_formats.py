import pytest

from chanrestrict.csm import project_bmsc
from chanrestrict.formats import (
    FormatError,
    format_bmsc,
    format_csm,
    format_hmsc,
    format_model,
    kind_of,
    parse_bmsc,
    parse_csm,
    parse_hmsc,
    parse_model,
)
from chanrestrict.generators import random_bmsc, random_hmsc, random_prefix_msc
from conftest import FIXTURES


@pytest.mark.parametrize("path", sorted(FIXTURES.iterdir()), ids=lambda p: p.name)
def test_fixture_files_round_trip(path):
    text = path.read_text()
    assert format_model(parse_model(text, kind_of(path)), path.stem) == text


def test_bmsc_layout():
    text = "bmsc h2 {\n  msg 1 : P -> Q : m ;\n  msg 2 : Q -> P : m ;\n  P : !1 ?2 ;\n  Q : !2 ?1 ;\n}\n"
    name, m = parse_bmsc(text)
    assert name == "h2" and len(m) == 4 and len(m.match) == 2
    assert format_bmsc(m, name) == text


def test_unmatched_send_allowed_standalone():
    _, m = parse_bmsc("bmsc x { msg 1 : P -> Q : m ; P : !1 ; }")
    assert m.match == {} and list(m.rows) == ["P", "Q"]


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("bmsc x { msg 1 : P -> Q : m ; Q : !1 ; }", "row of P"),
        ("bmsc x { msg 1 : P -> Q : m ; P : !1 !1 ; }", "twice"),
        ("bmsc x { msg 1 : P -> Q : m ; msg 1 : P -> Q : n ; P : !1 ; }", "declared twice"),
        ("bmsc x { msg 1 : P -> Q : m ; }", "never sent"),
        ("bmsc x { P : ?3 ; }", "not declared"),
        ("bmsc x { msg 1 : P -> P : m ; }", "itself"),
        ("bmsc x { msg 1 : P -> Q : m ; P : !1 ; } extra", "after the closing brace"),
        ("hmsc h { vertex a = bmsc { } ; }", "missing 'initial'"),
        ("hmsc h { initial a ; vertex a = bmsc { } ; edge a -> b ; }", "not declared"),
        ("csm c { machine P { s0 -> s1 : ! Q m ; } }", "no initial state"),
        ("csm c { machine P { initial s0 ; s0 -> s1 : send ; } }", "expected '!'"),
        ("csm c { machine P { initial s0 ; } machine P { initial s0 ; } }", "given twice"),
    ],
)
def test_parse_errors_have_positions(text, fragment):
    with pytest.raises(FormatError) as ei:
        parse_model(text, text.split()[0])
    assert fragment in str(ei.value)
    assert ei.value.line == 1


def test_error_position_multiline():
    with pytest.raises(FormatError) as ei:
        parse_csm("csm c {\n  machine P {\n    initial s0 ;\n    s0 -> s1 : ! P m ;\n  }\n}\n")
    assert (ei.value.line, ei.value.col) == (4, 18)


def test_kind_inference():
    assert kind_of("a/b/x.hmsc") == "hmsc"
    with pytest.raises(FormatError):
        kind_of("x.txt")


def test_random_round_trips(rng):
    for _ in range(40):
        m = random_prefix_msc(rng, 8)
        _, m2 = parse_bmsc(format_bmsc(m))
        assert m2.isomorphic(m)
        h = random_hmsc(rng, 4, 4)
        h2 = parse_hmsc(format_hmsc(h))
        assert format_hmsc(h2) == format_hmsc(h)
        a = project_bmsc(random_bmsc(rng, 6))
        assert format_csm(parse_csm(format_csm(a))) == format_csm(a)
