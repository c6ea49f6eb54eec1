"""Command-line front end.

Every command prints one JSON report on stdout and a short human summary
on stderr (silenced by ``--quiet``).  Exit codes: 0 holds, 1 violated,
2 positive only up to exploration bounds, 3 input error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .csm import Csm, check_deadlock, classify_csm, explore, validate_csm
from .events import Lasso, WordSyntaxError, as_word, format_word, is_channel_compliant
from .formats import FormatError, format_hmsc, kind_of, parse_model
from .globaltype import check_well_formed, type_language
from .hmsc import (
    Hmsc,
    LanguageBudgetExceeded,
    classify_hmsc,
    hmsc_existential_bound,
    hmsc_half_duplex,
    hmsc_k_synchronisable,
    hmsc_language,
    hmsc_min_sync_k,
    lasso_prefix_words,
    validate_hmsc,
)
from .indist import ClosureBudgetExceeded, closure
from .lexer import ParseError
from .msc import MscError, PrefixMsc, linearizations, validate
from .mst2hmsc import translate, verify_translation
from .restrictions import (
    EXIST_BOUNDED,
    HALF_DUPLEX,
    SYNCHRONISABLE,
    RestrictionVerdict,
    classify_msc,
    exist_bound_verdict,
    half_duplex_verdict,
    sync_verdict,
)

EXIT_HOLDS, EXIT_VIOLATED, EXIT_BOUNDED, EXIT_INPUT = 0, 1, 2, 3

PROPERTIES = {"hd": HALF_DUPLEX, "exb": EXIST_BOUNDED, "ksync": SYNCHRONISABLE}

DEFAULTS = {"depth": 12, "cap": 6, "max_len": 12, "unroll": 3}


class InputError(Exception):
    pass


# -- loading ------------------------------------------------------------------------

class Loaded:
    def __init__(self, name: str, kind: str, text: str, model):
        self.name, self.kind, self.text, self.model = name, kind, text, model

    def describe(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "sha256": hashlib.sha256(self.text.encode()).hexdigest(),
        }


def load(path: str | None, kind: str | None, word: str | None = None) -> Loaded:
    if word is not None:
        try:
            w = as_word(word)
        except WordSyntaxError as e:
            raise InputError(str(e)) from e
        return Loaded("<word>", "word", word, w)
    if path is None:
        raise InputError("no input file given")
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e
    try:
        kind = kind or kind_of(p)
        model = parse_model(text, kind)
    except ParseError as e:
        raise InputError(f"{p.name}:{e}") from e
    except MscError as e:
        raise InputError(f"{p.name}: {e}") from e
    return Loaded(p.name, kind, text, model)


def require_valid(src: Loaded) -> None:
    m = src.model
    if src.kind == "bmsc":
        rep = validate(m)
    elif src.kind == "hmsc":
        rep = validate_hmsc(m)
    elif src.kind == "csm":
        rep = validate_csm(m)
    else:
        return
    if not rep.ok:
        raise InputError(f"{src.name}: " + "; ".join(f"{i.code}: {i.detail}" for i in rep.issues))


def as_hmsc(src: Loaded) -> Hmsc:
    return translate(src.model, Path(src.name).stem).hmsc if src.kind == "gt" else src.model


# -- reports ------------------------------------------------------------------------

def verdict_json(v: RestrictionVerdict) -> dict:
    d = asdict(v)
    return {
        "property": d["prop"],
        "holds": d["holds"],
        "parameter": d["parameter"],
        "bounded_claim": d["bounded_claim"],
        "witness": d["witness"],
        "note": d["note"],
    }


def make_report(command: str, src: Loaded, bounds: dict, **body) -> dict:
    rep = {"tool": "chanrestrict", "version": __version__, "command": command, "input": src.describe(), "bounds": bounds}
    rep.update(body)
    rep["timing"] = None
    return rep


def exit_code(v: RestrictionVerdict) -> int:
    if not v.holds:
        return EXIT_VIOLATED
    return EXIT_BOUNDED if v.bounded_claim else EXIT_HOLDS


def bounds_of(args, **extra) -> dict:
    out = {
        "depth": args.depth,
        "cap": args.cap,
        "max_len": args.max_len,
        "max_b": args.max_b,
        "unroll": args.unroll,
    }
    out.update(extra)
    return out


def _max_sends(src: Loaded) -> int:
    if src.kind == "bmsc":
        return len(src.model.sends)
    if src.kind in ("hmsc", "gt"):
        h = as_hmsc(src)
        return max((len(h.labels[v].sends) for v in h.vertices), default=0)
    return 0


# -- verdict computation --------------------------------------------------------------

def compute_verdicts(src: Loaded, args, props) -> list[RestrictionVerdict]:
    """Verdicts for the requested properties, in the order given."""
    kind, m = src.kind, src.model
    max_b = args.max_b
    out = []
    if kind == "csm":
        all_v = classify_csm(m, args.depth, args.cap, max_b, args.k, args.unroll)
        by = {v.prop: v for v in all_v}
        return [by[p] for p in props]
    if kind == "bmsc":
        for p in props:
            if p == HALF_DUPLEX:
                out.append(half_duplex_verdict(m))
            elif p == EXIST_BOUNDED:
                out.append(exist_bound_verdict(m, max_b if max_b is not None else max(1, len(m.sends))))
            else:
                out.append(sync_verdict(m, args.k))
        return out
    h = as_hmsc(src)
    for p in props:
        if p == HALF_DUPLEX:
            out.append(hmsc_half_duplex(h))
        elif p == EXIST_BOUNDED:
            b = hmsc_existential_bound(h)
            note = "upper bound: maximum over vertex charts"
            if max_b is not None and b > max_b:
                out.append(RestrictionVerdict(EXIST_BOUNDED, True, b, bounded_claim=True, note=note + f"; exceeds --max-b {max_b}"))
            else:
                out.append(RestrictionVerdict(EXIST_BOUNDED, True, b, note=note))
        else:
            out.append(hmsc_k_synchronisable(h, args.k) if args.k is not None else hmsc_min_sync_k(h))
    if kind == "gt":
        for v in out:
            v.note = (v.note + "; " if v.note else "") + "decided on the translated HMSC"
    return out


# -- commands -----------------------------------------------------------------------

def cmd_check(args, src: Loaded):
    require_valid(src)
    v = compute_verdicts(src, args, [PROPERTIES[args.property]])[0]
    rep = make_report("check", src, bounds_of(args, k=args.k), verdicts=[verdict_json(v)])
    return rep, exit_code(v)


def cmd_classify(args, src: Loaded):
    require_valid(src)
    vs = compute_verdicts(src, args, [HALF_DUPLEX, EXIST_BOUNDED, SYNCHRONISABLE])
    rep = make_report("classify", src, bounds_of(args, k=args.k), verdicts=[verdict_json(v) for v in vs])
    return rep, EXIT_HOLDS


def cmd_translate(args, src: Loaded):
    if src.kind != "gt":
        raise InputError("translate expects a global type (.gt)")
    out = translate(src.model, Path(src.name).stem)
    text = format_hmsc(out.hmsc)
    body: dict = {}
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        body["output"] = Path(args.output).name
    else:
        body["hmsc"] = text
    h = out.hmsc
    body["vertices"] = len(h.vertices)
    body["edges"] = len(h.edges)
    if args.map:
        body["vertex_map"] = out.describe_map()
    code = EXIT_HOLDS
    if args.verify:
        vr = verify_translation(src.model, args.max_len)
        body["verification"] = vr.as_dict()
        code = EXIT_HOLDS if vr.ok else EXIT_VIOLATED
    return make_report("translate", src, bounds_of(args), **body), code


def _sorted_words(ws) -> list[str]:
    return [format_word(w) for w in sorted(ws, key=lambda w: (len(w), format_word(w)))]


def _language(src: Loaded, args) -> tuple[set, list[dict]]:
    """Maximal finite words up to max_len, plus extra entries flagged as prefixes."""
    n = args.max_len
    kind, m = src.kind, src.model
    extra: list[dict] = []
    if kind == "word":
        return {m}, extra
    if kind == "bmsc":
        return {w for w in linearizations(m) if len(w) <= n}, extra
    if kind == "gt":
        lang = type_language(m, n)
        extra = [{"lasso": str(l), "prefix": True} for l in sorted(lang.lassos, key=str)]
        return lang.finite, extra
    if kind == "hmsc":
        words = hmsc_language(m, n)
        pre = {w for w in lasso_prefix_words(m, len(m.vertices), args.unroll) if len(w) <= n}
        extra = [{"word": w, "prefix": True} for w in _sorted_words(pre - words)]
        return words, extra
    res = explore(m, min(args.depth, n), args.cap)
    words = {w for w in res.maximal if len(w) <= n}
    extra = [{"lasso": str(l), "prefix": True} for l in res.sorted_lassos()]
    return words, extra


def cmd_lang(args, src: Loaded):
    require_valid(src)
    words, extra = _language(src, args)
    if args.closure:
        words = closure(words)
    body = {"closure": bool(args.closure), "count": len(words), "words": _sorted_words(words)}
    if extra:
        body["prefixes"] = extra
    return make_report("lang", src, bounds_of(args), **body), EXIT_HOLDS


def cmd_closure(args, src: Loaded):
    require_valid(src)
    words, _ = _language(src, args)
    for w in words:
        if not is_channel_compliant(w):
            raise InputError(f"word is not channel-compliant: {format_word(w)}")
    cl = closure(words)
    body = {"seeds": len(words), "count": len(cl), "words": _sorted_words(cl)}
    return make_report("closure", src, bounds_of(args), **body), EXIT_HOLDS


def cmd_explore(args, src: Loaded):
    if src.kind != "csm":
        raise InputError("explore expects a CSM (.csm)")
    require_valid(src)
    a: Csm = src.model
    res = explore(a, args.depth, args.cap)
    dead = check_deadlock(a, args.depth, args.cap)
    body = {
        "configurations": len(res.configurations),
        "maximal_traces": [
            {"word": format_word(w), "complete": not res.maximal[w].queues} for w in res.maximal_traces
        ],
        "lassos": [str(l) for l in res.sorted_lassos()],
        "pumping": [p.as_dict() for p in res.pumping],
        "boundary": {"depth_hit": res.depth_hit, "cap_hit": res.cap_hit, "truncated": res.truncated},
        "deadlock": dead.describe(a.processes) if dead is not None else None,
    }
    code = EXIT_VIOLATED if dead is not None else (EXIT_BOUNDED if res.boundary_hit else EXIT_HOLDS)
    return make_report("explore", src, bounds_of(args), **body), code


def cmd_validate(args, src: Loaded):
    kind, m = src.kind, src.model
    issues: list[dict] = []
    if kind == "bmsc":
        rep = validate(m)
    elif kind == "hmsc":
        rep = validate_hmsc(m)
    elif kind == "csm":
        rep = validate_csm(m)
    elif kind == "gt":
        check_well_formed(m)
        rep = None
    else:
        rep = None
    if rep is not None:
        issues = [{"code": i.code, "detail": i.detail} for i in rep.issues]
    body = {"valid": not issues, "issues": issues}
    return make_report("validate", src, {}, **body), EXIT_HOLDS if not issues else EXIT_VIOLATED


COMMANDS = {
    "check": cmd_check,
    "classify": cmd_classify,
    "translate": cmd_translate,
    "lang": cmd_lang,
    "closure": cmd_closure,
    "explore": cmd_explore,
    "validate": cmd_validate,
}


# -- argument parsing -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chanrestrict", description="Channel restriction checks for message-passing models.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, file_required=True):
        if file_required:
            p.add_argument("file")
        else:
            p.add_argument("file", nargs="?")
            p.add_argument("--word", help="word literal such as 'P>Q!m P>Q?m' instead of a file")
        p.add_argument("--kind", choices=["gt", "bmsc", "hmsc", "csm"], help="input kind (default: from extension)")
        p.add_argument("--depth", type=int, default=DEFAULTS["depth"])
        p.add_argument("--cap", type=int, default=DEFAULTS["cap"])
        p.add_argument("--max-len", type=int, default=DEFAULTS["max_len"])
        p.add_argument("--max-b", type=int, default=None, help="largest channel bound tried (default: number of sends)")
        p.add_argument("--unroll", type=int, default=DEFAULTS["unroll"])
        p.add_argument("--quiet", action="store_true", help="no summary on stderr")
        p.add_argument("--timing", action="store_true", help="record wall-clock time in the report")

    p = sub.add_parser("check", help="decide one property")
    common(p)
    p.add_argument("--property", required=True, choices=sorted(PROPERTIES))
    p.add_argument("--k", type=int, default=None)

    p = sub.add_parser("classify", help="all three properties")
    common(p)
    p.add_argument("--k", type=int, default=None)

    p = sub.add_parser("translate", help="global type to HMSC")
    common(p)
    p.add_argument("-o", "--output")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--map", action="store_true")

    p = sub.add_parser("lang", help="bounded language")
    common(p, file_required=False)
    p.add_argument("--closure", action="store_true")

    p = sub.add_parser("closure", help="closure under indistinguishability")
    common(p, file_required=False)

    p = sub.add_parser("explore", help="bounded CSM exploration")
    common(p)

    p = sub.add_parser("validate", help="structural validation")
    common(p)
    return ap


def summary(rep: dict) -> str:
    head = f"{rep['command']} {rep['input']['name']}"
    if "verdicts" in rep:
        parts = []
        for v in rep["verdicts"]:
            mark = "yes" if v["holds"] else "no"
            if v["holds"] and v["bounded_claim"]:
                mark += " (up to bounds)"
            par = f" [{v['parameter']}]" if v["parameter"] is not None else ""
            parts.append(f"{v['property']}{par}: {mark}")
        return head + ": " + ", ".join(parts)
    if "count" in rep:
        return f"{head}: {rep['count']} words"
    if "valid" in rep:
        return f"{head}: {'valid' if rep['valid'] else 'invalid'}"
    return head


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        src = load(args.file, args.kind, getattr(args, "word", None))
        rep, code = COMMANDS[args.command](args, src)
    except (InputError, ParseError, MscError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (ClosureBudgetExceeded, LanguageBudgetExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BOUNDED
    if args.timing:
        rep["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    sys.stdout.write(json.dumps(rep, indent=2, ensure_ascii=False) + "\n")
    if not args.quiet:
        print(summary(rep), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
