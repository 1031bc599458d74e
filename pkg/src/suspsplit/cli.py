"""Command-line front end.

Subcommands: ``decompose``, ``normalize``, ``tables``, ``verify`` and
``enumerate``.  Exit codes: 0 success, 1 verification failure, 2 schema
error, 3 domain error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

import jsonschema

from .catalog import format_term, parse_term
from .decomposer import (
    InconsistentProfile,
    LocalizationRequired,
    ManifoldInput,
    OperationProfile,
    ShapeMismatch,
    Sq2Data,
    attaching_vector,
    decide,
)
from .normalizer import DepthExceeded, NonTermination, cofiber, normalize, orbit_equivalent
from .oracle import (
    CapExceeded,
    EnumerationBounds,
    Report,
    check_confluence,
    check_rule_soundness,
    count_inputs,
    cross_validate,
    enumerate_inputs,
    homology_of_decision,
    sweep,
)
from .pi_tables import UnknownComposite, UnsupportedPair, pi
from .torsion import FinAbGroup

EXIT_OK, EXIT_FAIL, EXIT_SCHEMA, EXIT_DOMAIN = 0, 1, 2, 3

_BIT_ROWS = {"type": "array", "items": {"type": "array", "items": {"enum": [0, 1]}}}
_CASE_R = {
    "type": "object",
    "properties": {"case": {"type": "string"}, "r": {"type": ["integer", "null"], "minimum": 1}},
    "required": ["case"],
    "additionalProperties": False,
}

INPUT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "InputDocument",
    "type": "object",
    "properties": {
        "schema": {"const": 1},
        "n": {"type": "integer", "minimum": 2, "maximum": 5},
        "l": {"type": "integer", "minimum": 0},
        "d": {"type": "integer", "minimum": 0},
        "torsion": {
            "type": "array",
            "items": {"type": "array", "prefixItems": [{"type": "integer", "minimum": 2},
                                                       {"type": "integer", "minimum": 1}],
                      "minItems": 2, "maxItems": 2},
        },
        "sq2": {
            "oneOf": [
                {"type": "object",
                 "properties": {"A": _BIT_ROWS, "B": _BIT_ROWS},
                 "required": ["A", "B"], "additionalProperties": False},
                {"type": "object",
                 "properties": {"c1": {"type": "integer", "minimum": 0},
                                "c2": {"type": "integer", "minimum": 0},
                                "chosen": {"type": "array",
                                           "items": {"type": "integer", "minimum": 0}}},
                 "required": ["c1", "c2", "chosen"], "additionalProperties": False},
            ]
        },
        "mode": {"enum": ["ops", "attach"]},
        "profile": {
            "type": "object",
            "properties": {
                "w2": {"type": "boolean"},
                "theta": _CASE_R,
                "tertiary": {"type": ["boolean", "null"]},
                "sq2H5": _CASE_R,
                "p1": _CASE_R,
            },
            "additionalProperties": False,
        },
        "coeffs": {
            "type": "object",
            "patternProperties": {"^(x|eps|y|z|s|t|a|b|c)$": {
                "type": "array", "items": {"enum": [0, 1, 2]}}},
            "additionalProperties": False,
        },
        "localize": {"type": "boolean"},
    },
    "required": ["schema", "n", "l", "d", "torsion"],
    "additionalProperties": False,
}


class SchemaError(ValueError):
    pass


def validate_document(doc) -> None:
    try:
        jsonschema.validate(doc, INPUT_SCHEMA)
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise SchemaError(f"{where}: {e.message}") from None
    if doc.get("mode", "ops") == "attach" and "profile" in doc:
        raise SchemaError("attach mode takes 'coeffs', not 'profile'")
    if doc.get("mode", "ops") == "ops" and "coeffs" in doc:
        raise SchemaError("ops mode takes 'profile', not 'coeffs'")


def profile_from_json(data: Optional[dict]) -> OperationProfile:
    data = data or {}
    theta = data.get("theta") or {}
    sq2h5 = data.get("sq2H5") or {}
    p1 = data.get("p1") or {}
    return OperationProfile(
        w2_nonzero=data.get("w2", False),
        theta_case=theta.get("case", "trivial"),
        theta_r=theta.get("r"),
        # absent means unknown: both values of epsilon stay open
        tertiary_nontrivial=data.get("tertiary"),
        sq2h5_case=sq2h5.get("case"),
        sq2h5_r=sq2h5.get("r"),
        p1_case=p1.get("case", "trivial"),
        p1_r=p1.get("r"),
    )


def input_from_document(doc: dict) -> ManifoldInput:
    """Build a :class:`ManifoldInput` from a schema-valid document."""
    validate_document(doc)
    try:
        T = FinAbGroup.from_pairs([tuple(pair) for pair in doc["torsion"]])
    except ValueError as e:
        raise SchemaError(f"torsion: {e}") from None
    sq2 = doc.get("sq2")
    if sq2 is not None:
        sq2 = Sq2Data(A=sq2.get("A"), B=sq2.get("B"), c1=sq2.get("c1"),
                      c2=sq2.get("c2"),
                      chosen=tuple(sq2["chosen"]) if "chosen" in sq2 else None)
    mode = doc.get("mode", "ops")
    return ManifoldInput(
        doc["n"], doc["l"], doc["d"], T, sq2=sq2, mode=mode,
        profile=profile_from_json(doc.get("profile")) if mode == "ops" else None,
        coeffs=doc.get("coeffs") if mode == "attach" else None,
        localize=doc.get("localize"),
    )


def document_from_input(inp: ManifoldInput) -> dict:
    doc = {"schema": 1, "n": inp.n, "l": inp.l, "d": inp.d,
           "torsion": [[q.p, q.r] for q in inp.torsion.torsion], "mode": inp.mode}
    s = inp.sq2
    if s is not None:
        if s.A is not None or s.B is not None:
            doc["sq2"] = {"A": [list(r) for r in s.A], "B": [list(r) for r in s.B]}
        else:
            doc["sq2"] = {"c1": s.c1 or 0, "c2": s.c2 or 0, "chosen": list(s.chosen or ())}
    if inp.mode == "ops":
        doc["profile"] = (inp.profile or OperationProfile()).to_json(inp.n)
    else:
        doc["coeffs"] = {k: list(v) for k, v in (inp.coeffs or {}).items()}
    if inp.localize is not None:
        doc["localize"] = inp.localize
    return doc


def _read_doc(path: str) -> dict:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e}") from None


def _load_input(args) -> ManifoldInput:
    if not args.file:
        raise SchemaError("an input document is required (-f FILE, or - for stdin)")
    doc = _read_doc(args.file)
    if isinstance(doc, dict):
        if getattr(args, "n", None) is not None:
            doc.setdefault("n", args.n)
            if doc["n"] != args.n:
                raise SchemaError(f"--n {args.n} disagrees with the document's n={doc['n']}")
        if getattr(args, "localize", None) is not None:
            doc["localize"] = args.localize
    return input_from_document(doc)


def _parse_bounds(text: Optional[str]) -> tuple:
    if not text:
        return (1, 1, 1, 2)
    try:
        parts = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise SchemaError(f"--bounds needs four integers l,d,t2,r, got {text!r}") from None
    if len(parts) != 4:
        raise SchemaError(f"--bounds needs four integers l,d,t2,r, got {text!r}")
    return parts


def _bounds(args, default_n=(2,)) -> EnumerationBounds:
    l, d, t2, r = _parse_bounds(args.bounds)
    ns = (args.n,) if args.n is not None else default_n
    try:
        return EnumerationBounds(l, d, t2, r, ns)
    except ValueError as e:
        raise SchemaError(str(e)) from None


def _emit(args, text: str, payload) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


# -- subcommands --------------------------------------------------------------

def cmd_decompose(args) -> int:
    res = decide(_load_input(args))
    _emit(args, str(res), res.to_json())
    return EXIT_OK


def cmd_normalize(args) -> int:
    inp = _load_input(args)
    if inp.mode != "attach":
        raise ShapeMismatch("normalize needs an attach-mode document")
    v = attaching_vector(inp)
    nf, trace = normalize(v)
    payload = {
        "target": [format_term(t) for t in v.target],
        "input": [list(c) for c in v.coeffs],
        "normal_form": [list(c) for c in nf.coeffs],
        "trace": trace,
        "cofiber": str(cofiber(nf)),
    }
    lines = [f"vector: {v}", f"normal form: {nf}",
             "trace: " + (", ".join(trace) if trace else "(none)"),
             f"cofiber: {payload['cofiber']}"]
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK


def cmd_tables(args) -> int:
    if args.pi is None or not args.space:
        raise SchemaError("tables needs --pi M and --space SPACE")
    try:
        t = parse_term(args.space)
    except ValueError as e:
        raise SchemaError(str(e)) from None
    G = pi(args.pi, t, prime=args.prime) if args.prime else pi(args.pi, t)
    payload = {"space": format_term(t), "m": args.pi, "prime": args.prime,
               "orders": list(G.orders), "generators": [g.name for g in G.generators],
               "text": str(G)}
    _emit(args, str(G), payload)
    return EXIT_OK


def cmd_verify(args) -> int:
    reports: list[Report] = []
    if args.file:
        inp = _load_input(args)
        res = decide(inp)
        rep = Report("homology").merge(homology_of_decision(inp))
        reports.append(rep)
        if inp.mode == "attach":
            reports.append(cross_validate(inp))
            reports.append(_orbit_report(inp, args.depth))
        if not args.json:
            print(res)
    else:
        b = _bounds(args, default_n=(2, 3, 4, 5))
        checks = args.check or ["homology", "modes", "rules", "confluence"]
        if "homology" in checks:
            rep = sweep(b, homology_of_decision, "ops", "homology (ops)")
            reports.append(rep)
            rep = sweep(b, homology_of_decision, "attach", "homology (attach)")
            reports.append(rep)
        odd_free = tuple(n for n in b.n_values if n in (2, 3))
        if "modes" in checks and odd_free:
            mb = EnumerationBounds(b.max_l, b.max_d, b.max_t2, b.max_r, odd_free)
            reports.append(sweep(mb, cross_validate, "attach", "mode agreement"))
        for n in odd_free:
            nb = EnumerationBounds(b.max_l, b.max_d, b.max_t2, b.max_r, (n,))
            if "rules" in checks:
                reports.append(check_rule_soundness(n, nb))
            if "confluence" in checks:
                reports.append(check_confluence(n, nb))
    if args.json:
        print(json.dumps([r.to_json() for r in reports], indent=2, sort_keys=True))
    else:
        for r in reports:
            print(r.line())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _orbit_report(inp: ManifoldInput, depth: Optional[int]) -> Report:
    # brute-force BFS confirms the normal form lies in the orbit of the input
    v = attaching_vector(inp)
    nf, trace = normalize(v)
    depth = len(trace) if depth is None else depth
    rep = Report(f"orbit search (depth {depth})", checked=1)
    try:
        if not orbit_equivalent(v, nf, depth):
            rep.fail(f"{nf} is not in the orbit of {v}")
    except DepthExceeded:
        rep.fail(f"{nf} not reached from {v} within {depth} moves")
    return rep


def cmd_enumerate(args) -> int:
    b = _bounds(args)
    if args.count:
        total = count_inputs(b, args.mode)
        _emit(args, str(total), {"count": total})
        return EXIT_OK
    for inp in enumerate_inputs(b, args.mode):
        print(json.dumps(document_from_input(inp), sort_keys=True))
    return EXIT_OK


# -- entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="suspsplit",
                                 description="Suspension splittings of simply connected (2n+2)-manifolds.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, with_file=True):
        p.add_argument("--json", action="store_true", help="emit structured JSON")
        if with_file:
            p.add_argument("-f", "--file", help="input document (JSON), - for stdin")
            p.add_argument("--n", type=int, help="dimension parameter n (2..5)")
            p.add_argument("--localize", action=argparse.BooleanOptionalAction, default=None,
                           help="report the answer away from 2")

    p = sub.add_parser("decompose", help="decide the wedge decomposition of Sigma M")
    common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("normalize", help="normalize an attaching vector, with trace")
    common(p)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("tables", help="look up a homotopy group of a catalog space")
    common(p, with_file=False)
    p.add_argument("--pi", type=int, help="homotopy degree m")
    p.add_argument("--space", help='catalog space, e.g. "C^5_eta" or "P^4(Z/2)"')
    p.add_argument("--prime", type=int, help="restrict to a p-primary component")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("verify", help="run oracle checks on one input or an enumerated set")
    common(p)
    p.add_argument("--bounds", help="l,d,t2,r enumeration bounds")
    p.add_argument("--depth", type=int,
                   help="BFS depth for the orbit search (default: the trace length)")
    p.add_argument("--check", action="append",
                   choices=["homology", "modes", "rules", "confluence"],
                   help="restrict to one check (repeatable)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", help="list or count inputs within bounds")
    common(p, with_file=False)
    p.add_argument("--n", type=int, help="dimension parameter n (default 2)")
    p.add_argument("--bounds", help="l,d,t2,r enumeration bounds")
    p.add_argument("--mode", choices=["attach", "ops"], default="attach")
    p.add_argument("--count", action="store_true", help="print the number of inputs only")
    p.set_defaults(func=cmd_enumerate)
    return ap


DOMAIN_ERRORS = (UnsupportedPair, UnknownComposite, InconsistentProfile, ShapeMismatch,
                 LocalizationRequired, NonTermination, CapExceeded, ValueError)


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_SCHEMA
    try:
        return args.func(args)
    except SchemaError as e:
        print(f"schema error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    except DOMAIN_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCHEMA


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
