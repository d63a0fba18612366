"""Command-line driver: JSON in, JSON report out.

Every command prints one report ``{"schema": 1, "command", "inputs",
"outcome", "exit_code", "wall_time", "version"}``.  ``inputs`` holds SHA-256
hashes of the resolved input texts; ``outcome`` is deterministic.  Exit
codes: 0 pass or verified, 1 fail or refuted, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from collections.abc import Sequence

from . import __version__
from .acceptance import run_all
from .algebra import (
    AsanumaParams,
    PresentedAlgebra,
    asanuma_algebra,
    asanuma_gr_algebra,
    polynomial_ring,
    subring_profile,
    verify_isomorphism_pair,
)
from .errors import AlgebraError, InducedMapTrivial, NotAsanumaShape
from .expmap import (
    ExpMap,
    asanuma_maps,
    check_exponential,
    check_lead_containment,
    derksen_report,
    induce_on_gr,
    invariant_basis,
    translation_maps,
)
from .field import ExtensionElement, PrimeField, field_of_order
from .geometry import count_points, singular_at, smoothness_certificate
from .grading import (
    WeightGrading,
    first_grading,
    gr_presentation,
    homogeneous_components,
    leading_form,
    second_grading,
    weight_degree,
)
from .poly import format_poly, parse_poly
from .search import candidate_count, search_expmaps, y_fixed_template

ASANUMA_GRAMMAR = "p=<prime>,m=<int>,e=<int>,s=<int>"
ALGEBRA_GRAMMAR = (
    "a JSON file or inline JSON object with {p, generators, relation[, rule, params]} or "
    "{asanuma: {p, m, e, s}[, graded: true]}, or the shorthand asanuma:" + ASANUMA_GRAMMAR
    + " / graded:" + ASANUMA_GRAMMAR
)
WEIGHTS_GRAMMAR = "first | second | a JSON file or inline JSON like {\"x\": 0, \"z\": 3, \"t\": 2, \"derive_y\": true}"


class UsageError(Exception):
    def __init__(self, flag: str, message: str, grammar: str = ""):
        text = f"{flag}: {message}"
        if grammar:
            text += f" (expected {grammar})"
        super().__init__(text)


class Inputs:
    """Resolves flag values to texts and remembers their hashes."""

    def __init__(self):
        self.hashes: dict[str, str] = {}

    def text(self, flag: str, value: str) -> str:
        if os.path.isfile(value):
            with open(value, encoding="utf-8") as fh:
                value = fh.read()
        self.hashes[flag] = hashlib.sha256(value.encode()).hexdigest()
        return value

    def json(self, flag: str, value: str, grammar: str = ""):
        raw = self.text(flag, value)
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise UsageError(flag, f"not valid JSON ({exc.msg} at offset {exc.pos})", grammar) from exc


def parse_asanuma(flag: str, text: str) -> AsanumaParams:
    try:
        fields = dict(part.split("=", 1) for part in text.replace(" ", "").split(","))
        values = [int(fields[k]) for k in ("p", "m", "e", "s")]
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(flag, f"cannot read {text!r}", ASANUMA_GRAMMAR) from exc
    return AsanumaParams(*values)


def algebra_from_json(data) -> PresentedAlgebra:
    if "asanuma" in data:
        a = data["asanuma"]
        P = AsanumaParams(int(a["p"]), int(a["m"]), int(a["e"]), int(a["s"]))
        return asanuma_gr_algebra(P) if data.get("graded") else asanuma_algebra(P)
    p = int(data["p"])
    gens = data["generators"]
    params = data.get("params", ["U", "V"])
    if not data.get("relation"):
        return polynomial_ring(p, gens, params)
    return PresentedAlgebra(p, gens, data["relation"], data.get("rule"), params)


def load_algebra(args, inputs: Inputs, flag: str = "--algebra") -> PresentedAlgebra:
    value = getattr(args, flag.lstrip("-").replace("-", "_"), None)
    if flag == "--algebra" and getattr(args, "asanuma", None):
        inputs.text("--asanuma", args.asanuma)
        return asanuma_algebra(parse_asanuma("--asanuma", args.asanuma))
    if not value:
        raise UsageError(flag, "missing", ALGEBRA_GRAMMAR)
    for prefix, build in (("asanuma:", asanuma_algebra), ("graded:", asanuma_gr_algebra)):
        if value.startswith(prefix):
            inputs.text(flag, value)
            return build(parse_asanuma(flag, value[len(prefix):]))
    data = inputs.json(flag, value, ALGEBRA_GRAMMAR)
    try:
        return algebra_from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(flag, f"incomplete algebra description ({exc})", ALGEBRA_GRAMMAR) from exc


def map_from_json(A: PresentedAlgebra, data) -> ExpMap:
    if "family" in data:
        return asanuma_maps(A, data["family"], data.get("parameter", 1))
    if "translation" in data:
        return translation_maps(len(A.generators), A.p)[A.generators.index(data["translation"])]
    return ExpMap(A, data["images"], data.get("u", "U"), data.get("v", "V"), data.get("name", ""))


MAP_GRAMMAR = 'a JSON file or inline JSON like {"images": {"t": "t + x^2*U", ...}} or {"family": "phi3", "parameter": "1"}'


def load_map(A: PresentedAlgebra, inputs: Inputs, value: str, flag: str = "--map") -> ExpMap:
    data = inputs.json(flag, value, MAP_GRAMMAR)
    try:
        return map_from_json(A, data)
    except (KeyError, TypeError) as exc:
        raise UsageError(flag, f"incomplete map description ({exc})", MAP_GRAMMAR) from exc


def load_weights(args, inputs: Inputs, A: PresentedAlgebra) -> WeightGrading:
    value = args.weights
    if not value:
        raise UsageError("--weights", "missing", WEIGHTS_GRAMMAR)
    if value in ("first", "second"):
        inputs.text("--weights", value)
        P = A.asanuma
        if value == "first":
            m = P.m if P else A.rule[A.vars.index("x")]
            return first_grading(m)
        if P is None:
            raise UsageError("--weights", f"preset {value!r} needs an Asanuma algebra", WEIGHTS_GRAMMAR)
        return second_grading(P)
    return WeightGrading.from_json(inputs.json("--weights", value, WEIGHTS_GRAMMAR))


def _element(args, inputs: Inputs, A: PresentedAlgebra):
    if args.element is None:
        raise UsageError("--element", "missing", "a polynomial in the generators, e.g. 'x^2*y + z^4'")
    return A.parse(inputs.text("--element", args.element))


def _verdict(ok: bool) -> int:
    return 0 if ok else 1


# -- commands ----------------------------------------------------------------------


def cmd_check_exp(args, inputs):
    A = load_algebra(args, inputs)
    phi = load_map(A, inputs, args.map)
    status = check_exponential(phi)
    return _verdict(status.verified), {"map": phi.to_json(), **status.to_json()}


def cmd_invariants(args, inputs):
    A = load_algebra(args, inputs)
    phi = load_map(A, inputs, args.map)
    status = check_exponential(phi)
    if not status.verified:
        return 1, {"map": phi.to_json(), **status.to_json()}
    W = load_weights(args, inputs, A) if args.weights else None
    basis = invariant_basis(phi, args.degree_bound, W)
    return 0, {"map": phi.to_json(), **basis.to_json()}


def cmd_induce_gr(args, inputs):
    A = load_algebra(args, inputs)
    phi = load_map(A, inputs, args.map)
    status = check_exponential(phi)
    if not status.verified:
        return 1, {"map": phi.to_json(), **status.to_json()}
    W = load_weights(args, inputs, A)
    try:
        induced = induce_on_gr(phi, W)
    except InducedMapTrivial as exc:
        return 1, {"status": "trivial", "reason": str(exc)}
    out = {
        "status": induced.status.state,
        "shift": induced.shift,
        "grading": induced.grading.to_json(),
        "gr_relation": induced.presentation.relation_text(),
        "images": {g: str(induced.images[g]) for g in induced.algebra.generators},
    }
    if args.degree_bound is not None:
        report = check_lead_containment(phi, induced, invariant_basis(phi, args.degree_bound))
        out["containment"] = report.to_json()
        return _verdict(report.passed), out
    return 0, out


def cmd_gr(args, inputs):
    A = load_algebra(args, inputs)
    W = load_weights(args, inputs, A)
    gp = gr_presentation(A, W)
    return 0, {
        "relation": gp.relation_text(),
        "weights": {g: gp.weights[g] for g in A.generators},
        "isomorphic_to_source": gp.is_isomorphic_to_source,
    }


def cmd_lead(args, inputs):
    A = load_algebra(args, inputs)
    W = load_weights(args, inputs, A)
    a = _element(args, inputs, A)
    return 0, {"element": str(a), "lead": str(leading_form(a, W)), "degree": weight_degree(a, W)}


def cmd_degree(args, inputs):
    A = load_algebra(args, inputs)
    W = load_weights(args, inputs, A)
    a = _element(args, inputs, A)
    parts = homogeneous_components(a, W)
    return 0, {
        "element": str(a),
        "degree": weight_degree(a, W),
        "components": {str(d): str(c) for d, c in parts.items()},
    }


def cmd_normalize(args, inputs):
    A = load_algebra(args, inputs)
    a = _element(args, inputs, A)
    return 0, {"normal_form": str(a), "profile": subring_profile(a).to_json()}


def cmd_search(args, inputs):
    A = load_algebra(args, inputs)
    if args.template in (None, "y-fixed"):
        inputs.text("--template", args.template or "y-fixed")
        template = y_fixed_template()
    else:
        template = inputs.json("--template", args.template, "a JSON object generator -> {fixed, unknown}")
    constraints = {"invariant": args.invariant} if args.invariant else None
    found = search_expmaps(A, template, constraints)
    return 0, {"candidates": candidate_count(A, template), "count": len(found), "maps": [phi.to_json() for phi in found]}


def cmd_derksen(args, inputs):
    if args.translations:
        maps = translation_maps(args.translations, args.p or 2)
        inputs.text("--translations", str(args.translations))
    else:
        A = load_algebra(args, inputs)
        if not args.map:
            raise UsageError("--map", "give at least one map (repeatable) or --translations N", MAP_GRAMMAR)
        maps = [load_map(A, inputs, m, f"--map[{i}]") for i, m in enumerate(args.map)]
        for phi in maps:
            status = check_exponential(phi)
            if not status.verified:
                return 1, {"map": phi.to_json(), **status.to_json()}
    report = derksen_report(maps, args.degree_bound)
    return 0, report.to_json()


def _count_one(rel, q, method, jobs):
    if method == "both":
        b = count_points(rel, q, "brute", jobs)
        s = count_points(rel, q, "stratified", jobs)
        return b.count == s.count, {"q": q, "count": b.count, "brute": b.count, "stratified": s.count}
    r = count_points(rel, q, method, jobs)
    return True, r.to_json()


def cmd_count_points(args, inputs):
    if args.batch:
        rows = inputs.json("--batch", args.batch, 'a JSON list of {"asanuma": "p=..,m=..,e=..,s=..", "q": int}')
        ok = True
        out = []
        for row in rows:
            P = parse_asanuma("--batch", row["asanuma"])
            good, res = _count_one(asanuma_algebra(P).relation_over_generators(), int(row["q"]), args.method, args.jobs)
            ok &= good
            out.append({"asanuma": P.to_json(), **res})
        return _verdict(ok), {"results": out}
    if args.q is None:
        raise UsageError("--q", "missing", "a prime power")
    A = load_algebra(args, inputs)
    good, res = _count_one(A.relation_over_generators(), args.q, args.method, args.jobs)
    return _verdict(good), res


def _coordinate(F, text: str):
    if isinstance(F, PrimeField):
        return F(int(text))
    f = parse_poly(text, (F.name,), F.prime_field)
    return F([f.coeff((k,)).value for k in range(F.degree)])


def cmd_singular(args, inputs):
    if not args.poly or not args.point:
        raise UsageError("--poly/--point", "both are required", "--poly 'z^2 + t^3 + 1' --point z=1,t=0")
    q = args.q or args.p
    if q is None:
        raise UsageError("--p", "missing", "the characteristic (or --q for an extension field)")
    F = field_of_order(q)
    names = args.vars.split(",") if args.vars else None
    text = inputs.text("--poly", args.poly)
    if names is None:
        names = sorted({c for c in text if c.isalpha()}, key=text.index)
    g = parse_poly(text, names, F.prime_field)
    try:
        point = {k: _coordinate(F, v) for k, v in (kv.split("=", 1) for kv in args.point.split(","))}
    except ValueError as exc:
        raise UsageError("--point", f"cannot read {args.point!r}", "name=value,name=value") from exc
    inputs.text("--point", args.point)
    cert = singular_at(g, point)
    return _verdict(cert.singular), cert.to_json()


def cmd_smooth(args, inputs):
    A = load_algebra(args, inputs)
    try:
        cert = smoothness_certificate(A)
    except NotAsanumaShape as exc:
        return 1, {"verdict": "not_certified", "reason": str(exc)}
    return 0, cert.to_json()


def cmd_verify_iso(args, inputs):
    A = load_algebra(args, inputs, "--source")
    B = load_algebra(args, inputs, "--target")
    fwd = inputs.json("--forward", args.forward, "JSON generator -> image text")
    bwd = inputs.json("--backward", args.backward, "JSON generator -> image text")
    ok = verify_isomorphism_pair(A, B, fwd, bwd)
    return _verdict(ok), {"isomorphism": ok}


def cmd_selftest(args, inputs):
    results = run_all(args.only.split(",") if args.only else None)
    if args.format == "text":
        for r in results:
            print(r.line(), file=sys.stderr)
    return _verdict(all(r.passed for r in results)), {
        "criteria": [r.to_json() for r in results],
        "matrix": {r.id: "pass" if r.passed else "fail" for r in results},
    }


COMMANDS = {
    "check-exp": (cmd_check_exp, "verify the exponential map axioms"),
    "invariants": (cmd_invariants, "invariant basis up to a degree bound"),
    "induce-gr": (cmd_induce_gr, "induced map on the associated graded ring"),
    "gr": (cmd_gr, "presentation of the associated graded ring"),
    "lead": (cmd_lead, "leading form of an element"),
    "degree": (cmd_degree, "filtration degree and homogeneous components"),
    "search": (cmd_search, "exhaustive template search for exponential maps"),
    "derksen": (cmd_derksen, "Derksen closure of invariant bases"),
    "count-points": (cmd_count_points, "F_q-point count of the hypersurface"),
    "singular": (cmd_singular, "Jacobian singularity certificate at a point"),
    "smooth": (cmd_smooth, "smoothness certificate via a unit partial derivative"),
    "verify-iso": (cmd_verify_iso, "check a pair of mutually inverse homomorphisms"),
    "normalize": (cmd_normalize, "normal form of an element"),
    "selftest": (cmd_selftest, "run the bundled acceptance suite"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", help=ALGEBRA_GRAMMAR)
    common.add_argument("--asanuma", help=ASANUMA_GRAMMAR)
    common.add_argument("--weights", help=WEIGHTS_GRAMMAR)
    common.add_argument("--degree-bound", type=int)
    common.add_argument("--q", type=int)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--format", choices=("json", "text"), default="json")

    parser = argparse.ArgumentParser(prog="asanuma", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    parsers = {name: sub.add_parser(name, parents=[common], help=h) for name, (_, h) in COMMANDS.items()}

    for name in ("check-exp", "invariants", "induce-gr"):
        parsers[name].add_argument("--map", required=True, help=MAP_GRAMMAR)
    parsers["derksen"].add_argument("--map", action="append", help=MAP_GRAMMAR + " (repeatable)")
    parsers["derksen"].add_argument("--translations", type=int, help="use X_i -> X_i + U on F_p[X_1..X_N]")
    parsers["derksen"].add_argument("--p", type=int)
    for name in ("lead", "degree", "normalize"):
        parsers[name].add_argument("--element")
    parsers["search"].add_argument("--template", help="'y-fixed' (default) or JSON generator -> {fixed, unknown}")
    parsers["search"].add_argument("--invariant", action="append", help="element forced invariant (repeatable)")
    parsers["count-points"].add_argument("--method", choices=("brute", "stratified", "both"), default="both")
    parsers["count-points"].add_argument("--batch")
    parsers["singular"].add_argument("--poly")
    parsers["singular"].add_argument("--vars", help="comma separated variable order")
    parsers["singular"].add_argument("--point", help="name=value,...; values in w over extensions")
    parsers["singular"].add_argument("--p", type=int)
    for flag in ("--source", "--target", "--forward", "--backward"):
        parsers["verify-iso"].add_argument(flag, required=True)
    parsers["selftest"].add_argument("--only", help="comma separated criterion ids")
    return parser


def _print(report: dict, fmt: str) -> None:
    if fmt == "text":
        outcome = report["outcome"]
        print(f"{report['command']}: exit {report['exit_code']}")
        for k, v in outcome.items():
            print(f"  {k}: {v if isinstance(v, (str, int, float, bool)) else json.dumps(v, sort_keys=True)}")
    else:
        print(json.dumps(report, sort_keys=True))


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fn, _ = COMMANDS[args.command]
    inputs = Inputs()
    t0 = time.perf_counter()
    try:
        code, outcome = fn(args, inputs)
    except UsageError as exc:
        code, outcome = 2, {"error": "usage", "message": str(exc)}
    except AlgebraError as exc:
        code, outcome = 2, {"error": type(exc).__name__, "message": str(exc)}
    report = {
        "schema": 1,
        "command": args.command,
        "inputs": dict(sorted(inputs.hashes.items())),
        "outcome": outcome,
        "exit_code": code,
        "wall_time": round(time.perf_counter() - t0, 6),
        "version": __version__,
    }
    _print(report, args.format)
    return code


def main() -> None:
    sys.exit(run())
