from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from src.cli.codec import SCHEMA, dumps, encode, encode_sequence, encode_value, load
from src.config.caps import Caps, load_caps
from src.flags.flags import check_flag, complete_flag, is_mnat_flag, mnat_completion
from src.functions.atlas import minimizer_atlas
from src.functions.mfunc import (
    MFunc,
    check_m_convex_fn,
    check_mnat_fn,
    convolution,
    elongation_fn,
    minimizer,
    truncation_fn,
)
from src.functions.quotients import (
    flag_constants,
    quotient_A,
    quotient_B,
    quotient_C,
    quotient_D,
    sparse_paving_quotient,
)
from src.generator import random_instances as gen
from src.generator.fixtures import fixture_document, fixture_names
from src.harness.artifacts import ArtifactStore
from src.harness.selftest import STAGE_COUNTS, STAGES, SelftestPlan, SelftestRunner
from src.lattice.core import GroundSet, as_point, format_rat, to_rat
from src.lattice.errors import CapExceeded, MConvexError, UsageError
from src.lift.lifts import Surjection, box_lift, compatible_lifts, k_polymatroid_lift, matroid_lift
from src.linking.linking_sets import induce, product
from src.msets.mconvex import (
    MConvexSet,
    SetFunction,
    check_m_convex,
    check_mnat_convex,
    check_order,
    check_submodular,
    greedy_vertex,
    layers,
    set_to_submodular,
    submodular_to_set,
    vertex_set,
)
from src.msets import operations as ops
from src.quotient.suite import ALL_METHODS, Skipped, quotient_suite, verdict_label

logger = logging.getLogger(__name__)

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    """argparse that reports bad usage through the JSON error channel."""

    def error(self, message: str):
        raise UsageError(message)


# -----------------------------
# Argument parsing helpers
# -----------------------------

def _ints(text: str) -> List[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _rats(text: str) -> List:
    return [to_rat(t.strip()) for t in text.split(",") if t.strip()]


def _subset(text: str, ground: GroundSet) -> int:
    """1-indexed element list -> mask."""
    return ground.mask_of(i - 1 for i in _ints(text))


def _require_args(args: argparse.Namespace, names: Sequence[str]) -> None:
    missing = ["--" + n.replace("_", "-") for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError(f"{args.command} {getattr(args, 'action', '')}".strip() + f" needs {missing}")


def _load_set(path) -> MConvexSet:
    obj = load(path, expect=("m-convex", "submodular"))
    return submodular_to_set(obj) if isinstance(obj, SetFunction) else obj


def _load_table(path) -> SetFunction:
    obj = load(path, expect=("m-convex", "submodular"))
    return set_to_submodular(obj) if isinstance(obj, MConvexSet) else obj


def _load_func(path) -> MFunc:
    return load(path, expect=("m-func", "mnat-func"))


# -----------------------------
# Output helpers
# -----------------------------

def _doc(kind: str, **fields) -> Dict[str, Any]:
    return {"schema": SCHEMA, "kind": kind, **fields}


def _verdict(prop: str, value: bool, **extra) -> Dict[str, Any]:
    return _doc("verdict", property=prop, verdict=bool(value), **extra)


def _points(S) -> List[List[int]]:
    return [list(x) for x in S.points]


def emit_coords(S, caps: Caps) -> Dict[str, Any]:
    """Layer structure and greedy vertices of a set, for external plotting."""
    out: Dict[str, Any] = {
        "layers": [{"sum": L.rank, "points": _points(L)} for L in layers(S)],
    }
    try:
        out["vertices"] = [
            [[encode_value(c) for c in v] for v in vertex_set(set_to_submodular(L), caps)] for L in layers(S)
        ]
    except CapExceeded as exc:
        out["vertices_skipped"] = str(exc)
    return out


def _with_coords(doc: Dict[str, Any], S, args) -> Dict[str, Any]:
    if getattr(args, "emit_coords", False):
        doc["coords"] = emit_coords(S, args.caps)
    return doc


def _encode_witness(w) -> Any:
    if isinstance(w, tuple):
        return [_encode_witness(x) for x in w]
    if hasattr(w, "to_dict"):
        return w.to_dict()
    return encode(w)


# -----------------------------
# Commands
# -----------------------------

def cmd_check(args) -> Dict[str, Any]:
    kind = {
        "m-convex": ("m-convex",),
        "mnat": ("mnat", "m-convex"),
        "submodular": ("submodular",),
        "m-func": ("m-func", "mnat-func"),
        "mnat-func": ("mnat-func", "m-func"),
    }[args.property]
    obj = load(args.input, expect=kind, verify=False)
    if args.property == "m-convex":
        ok = check_m_convex(obj)
    elif args.property == "mnat":
        ok = check_mnat_convex(obj)
    elif args.property == "submodular":
        ok = obj.table[0] == 0 and check_submodular(obj.table)
    elif args.property == "m-func":
        ok = check_m_convex_fn(obj)
    else:
        ok = check_mnat_fn(obj)
    return _verdict(args.property, ok)


def cmd_convert(args) -> Dict[str, Any]:
    obj = load(args.input, expect=("m-convex", "submodular"))
    if isinstance(obj, SetFunction):
        return _with_coords(encode(submodular_to_set(obj)), submodular_to_set(obj), args)
    return encode(set_to_submodular(obj))


def cmd_vertices(args) -> Dict[str, Any]:
    p = _load_table(args.input)
    if args.order is not None:
        order = check_order([i - 1 for i in _ints(args.order)], p.n)
        return _doc("vertex", order=[i + 1 for i in order], vertex=[encode_value(c) for c in greedy_vertex(p, order)])
    return _doc("vertices", vertices=[[encode_value(c) for c in v] for v in vertex_set(p, args.caps)])


def cmd_ops(args) -> Dict[str, Any]:
    P = _load_set(args.input)
    op = args.action
    if op == "restrict":
        _require_args(args, ["subset"])
        out = ops.restrict(P, _subset(args.subset, P.ground))
    elif op == "project":
        _require_args(args, ["subset"])
        out = ops.project(P, _subset(args.subset, P.ground))
    elif op == "sum":
        _require_args(args, ["other"])
        out = ops.minkowski_sum(P, _load_set(args.other))
    elif op == "translate":
        _require_args(args, ["vector"])
        out = ops.translate(P, _ints(args.vector))
    elif op == "truncate":
        out = ops.truncate(P, args.k or 1, verify=True)
    elif op == "elongate":
        out = ops.elongate(P, args.k or 1, verify=True)
    elif op == "box":
        _require_args(args, ["lo", "hi"])
        res = ops.intersect_box(P, _ints(args.lo), _ints(args.hi))
        return _with_coords(
            _doc("intersection", points=_points(res.points), upper=encode(res.upper)["table"],
                 lower=encode(res.lower)["table"], ground=encode(P)["ground"]),
            res.points, args)
    elif op == "plank":
        _require_args(args, ["alpha", "beta"])
        res = ops.intersect_plank(P, args.alpha, args.beta)
        return _with_coords(
            _doc("intersection", points=_points(res.points), upper=encode(res.upper)["table"],
                 lower=encode(res.lower)["table"], ground=encode(P)["ground"]),
            res.points, args)
    elif op == "minor":
        _require_args(args, ["subset", "k"])
        out = ops.basic_minor(P, _subset(args.subset, P.ground), args.k, verify=True)
    else:
        raise UsageError(f"unknown operation {op!r}")
    return _with_coords(encode(out), out, args)


def cmd_quotient(args) -> Dict[str, Any]:
    P, Q = _load_set(args.p), _load_set(args.q)
    methods = ALL_METHODS if args.methods == "all" else tuple(_ints(args.methods))
    bad = [m for m in methods if m not in ALL_METHODS]
    if bad:
        raise UsageError(f"unknown characterizations {bad}; expected 1..10 or 'all'")
    report = quotient_suite(P, Q, args.caps, methods)
    return _doc(
        "quotient-report",
        verdicts={str(k): verdict_label(v) for k, v in report.verdicts.items()},
        verdict=report.verdict,
        notes=report.notes,
        witnesses={str(k): _encode_witness(w) for k, w in report.witnesses.items()} if args.witnesses else {},
    )


def cmd_induce(args) -> Dict[str, Any]:
    G = load(args.linking, expect=("linking",))
    W = load(args.input, expect=("m-convex", "mnat"))
    out = induce(W, G)
    return _with_coords(encode(out), out, args)


def cmd_link_product(args) -> Dict[str, Any]:
    G = load(args.left, expect=("linking",))
    D = load(args.right, expect=("linking",))
    return encode(product(G, D, verify=args.verify))


def cmd_lift(args) -> Dict[str, Any]:
    P = _load_set(args.input)
    if args.action == "matroid":
        M, cert = matroid_lift(P, args.caps)
        return _doc("lift", lift=encode(M), certificate=cert.to_dict())
    if args.action == "kpoly":
        _require_args(args, ["k"])
        M, cert = k_polymatroid_lift(P, args.k, args.caps)
        return _doc("lift", lift=encode(M), certificate=cert.to_dict())
    if args.action == "box":
        _require_args(args, ["phi", "vector", "lo", "hi"])
        targets = [t - 1 for t in _ints(args.phi)]
        phi = Surjection(tuple(targets), P.n)
        box = (as_point(_ints(args.lo)), as_point(_ints(args.hi)))
        M = box_lift(P, box, phi, _ints(args.vector), args.caps)
        return _doc("lift", lift=encode(M))
    if args.action == "compatible":
        _require_args(args, ["other"])
        M, N, cert = compatible_lifts(P, _load_set(args.other), args.caps)
        return _doc("compatible-lifts", M=encode(M), N=encode(N), certificate=cert.to_dict())
    raise UsageError(f"unknown lift {args.action!r}")


def cmd_flag(args) -> Dict[str, Any]:
    if args.action == "constants":
        return _flag_constants(args)
    sets = list(load(args.input, expect=("flag",)))
    if args.action == "check":
        return _verdict("flag", check_flag(sets), mnat=is_mnat_flag(sets))
    if args.action == "complete":
        out = complete_flag(sets)
    elif args.action == "mnat-complete":
        out = mnat_completion(sets)
    else:
        raise UsageError(f"unknown flag action {args.action!r}")
    doc = encode_sequence("flag", out)
    if args.emit_coords:
        doc["coords"] = [emit_coords(S, args.caps) for S in out]
    return doc


def _flag_constants(args) -> Dict[str, Any]:
    chain = list(load(args.input, expect=("chain",)))
    c, h = flag_constants(chain)
    return _doc("flag-constants", constants=[format_rat(x) for x in c], h=encode(h))


def cmd_fn(args) -> Dict[str, Any]:
    action = args.action
    f = _load_func(args.f)
    if action == "minimizer":
        u = _rats(args.u) if args.u else None
        out = minimizer(f, u)
        return _with_coords(encode(out), out, args)
    if action == "truncate":
        return encode(truncation_fn(f))
    if action == "elongate":
        return encode(elongation_fn(f))
    _require_args(args, ["g"])
    g = _load_func(args.g)
    if action == "convolve":
        return encode(convolution(f, g))
    if action == "atlas":
        atlas = minimizer_atlas(f, g, args.caps)
        return _doc("atlas", cells=[
            {"u": [format_rat(c) for c in cell.u], "f": _points(cell.fcell), "g": _points(cell.gcell),
             "h": [list(x) for x in cell.hcell]}
            for cell in atlas
        ])
    if action == "sparse-paving":
        return encode(sparse_paving_quotient(f, g, args.caps))
    if action == "quotient":
        level = (args.level or "").upper()
        if level == "A":
            v = quotient_A(f, g)
            witness = None
        elif level == "B":
            v, w = quotient_B(f, g)
            witness = None if w is None else {"gamma": encode(w.gamma), "r": encode(w.r)}
        elif level == "C":
            v, witness = quotient_C(f, g), None
        elif level == "D":
            v, witness = quotient_D(f, g, args.caps), None
        else:
            raise UsageError(f"quotient level must be one of A, B, C, D, got {args.level!r}")
        doc = _doc("verdict", property=f"quotient-{level}",
                   verdict=None if isinstance(v, Skipped) else v)
        if isinstance(v, Skipped):
            doc["skipped"] = v.reason
        if witness is not None:
            doc["witness"] = witness
        return doc
    raise UsageError(f"unknown fn action {action!r}")


def cmd_gen(args) -> Dict[str, Any]:
    s, n, scale = args.seed, args.n, args.scale
    what = args.what
    if what == "submodular":
        return encode(gen.gen_submodular(s, n, scale))
    if what == "m-set":
        return encode(gen.gen_m_set(s, n, scale))
    if what == "quotient-pair":
        p, q = gen.gen_quotient_pair(s, n, scale)
        return _doc("pair", p=encode(p), q=encode(q), label=True)
    if what == "non-quotient-pair":
        p, q = gen.gen_non_quotient_pair(s, n, scale, args.caps)
        return _doc("pair", p=encode(p), q=encode(q), label=False)
    if what == "m-func":
        return encode(gen.gen_m_func(s, gen.gen_m_set(s, n, scale), args.curvature))
    if what == "function-pair":
        f, g = gen.gen_function_pair(s, n, scale, args.gap, args.curvature)
        return _doc("pair", f=encode(f), g=encode(g))
    if what == "chain":
        return encode_sequence("chain", gen.gen_function_chain(s, n, scale, args.length, args.curvature))
    if what == "sparse-paving-pair":
        f, g = gen.gen_sparse_paving_pair(s, max(n, 4), caps=args.caps)
        return _doc("pair", f=encode(f), g=encode(g))
    raise UsageError(f"unknown generator {what!r}")


def cmd_fixtures(args) -> Dict[str, Any]:
    if args.name:
        return fixture_document(args.name)
    return _doc("fixtures", names=fixture_names())


def cmd_selftest(args) -> Dict[str, Any]:
    sizes = {k: getattr(args, k) for k in ("n", "scale") + STAGE_COUNTS if getattr(args, k) is not None}
    plan = SelftestPlan(seed=args.seed, **sizes)
    store = ArtifactStore(str(args.cache_dir)) if args.cache_dir else None
    recompute = set(t.strip() for t in args.recompute.split(",") if t.strip()) if args.recompute else set()
    unknown = sorted(recompute - set(STAGES))
    if unknown:
        raise UsageError(f"unknown stages {unknown}; expected {list(STAGES)}")
    runner = SelftestRunner(store, args.caps)
    return runner.run(plan, recompute=recompute, progress=not args.quiet and sys.stderr.isatty())


COMMANDS = {
    "check": cmd_check,
    "convert": cmd_convert,
    "vertices": cmd_vertices,
    "ops": cmd_ops,
    "quotient": cmd_quotient,
    "induce": cmd_induce,
    "link-product": cmd_link_product,
    "lift": cmd_lift,
    "flag": cmd_flag,
    "fn": cmd_fn,
    "gen": cmd_gen,
    "fixtures": cmd_fixtures,
    "selftest": cmd_selftest,
}


# -----------------------------
# Parser
# -----------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mcq", description="Quotients of M-convex sets and functions.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    parser.add_argument("--caps", default=None, help="YAML mapping of cap overrides, e.g. '{atlas_pairs: 500}'")
    parser.add_argument("--caps-file", type=Path, default=None, help="YAML file with a 'caps' mapping")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("check", help="certify a set, table or function")
    p.add_argument("property", choices=["m-convex", "mnat", "submodular", "m-func", "mnat-func"])
    p.add_argument("--in", dest="input", type=Path, required=True)

    p = sub.add_parser("convert", help="set <-> submodular table")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--emit-coords", action="store_true")

    p = sub.add_parser("vertices", help="greedy vertices of the base polytope")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--order", default=None, help="1-indexed coordinates, maximized first")

    p = sub.add_parser("ops", help="set operations")
    p.add_argument("action", choices=["restrict", "project", "sum", "translate", "truncate", "elongate",
                                      "box", "plank", "minor"])
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--other", type=Path, default=None)
    p.add_argument("--subset", default=None, help="1-indexed elements, e.g. 1,3")
    p.add_argument("--vector", default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--lo", default=None)
    p.add_argument("--hi", default=None)
    p.add_argument("--alpha", type=int, default=None)
    p.add_argument("--beta", type=int, default=None)
    p.add_argument("--emit-coords", action="store_true")

    p = sub.add_parser("quotient", help="run the quotient characterizations")
    p.add_argument("--p", type=Path, required=True)
    p.add_argument("--q", type=Path, required=True)
    p.add_argument("--methods", default="all", help="'all' or a list such as 1,4,6")
    p.add_argument("--witnesses", action="store_true", help="include constructed witnesses")

    p = sub.add_parser("induce", help="induce a set through a linking set")
    p.add_argument("--linking", type=Path, required=True)
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--emit-coords", action="store_true")

    p = sub.add_parser("link-product", help="product of two linking sets")
    p.add_argument("--left", type=Path, required=True)
    p.add_argument("--right", type=Path, required=True)
    p.add_argument("--verify", action="store_true")

    p = sub.add_parser("lift", help="box, matroid and k-polymatroid lifts")
    p.add_argument("action", choices=["matroid", "kpoly", "box", "compatible"])
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--other", type=Path, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--phi", default=None, help="1-indexed target of every lifted element")
    p.add_argument("--vector", default=None)
    p.add_argument("--lo", default=None)
    p.add_argument("--hi", default=None)

    p = sub.add_parser("flag", help="flags of sets and chains of functions")
    p.add_argument("action", choices=["check", "complete", "mnat-complete", "constants"])
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--emit-coords", action="store_true")

    p = sub.add_parser("fn", help="M-convex functions")
    p.add_argument("action", choices=["minimizer", "atlas", "convolve", "quotient", "truncate", "elongate",
                                      "sparse-paving"])
    p.add_argument("level", nargs="?", default=None, help="A, B, C or D for 'fn quotient'")
    p.add_argument("--f", type=Path, required=True)
    p.add_argument("--g", type=Path, default=None)
    p.add_argument("--u", default=None, help="comma-separated rationals")
    p.add_argument("--emit-coords", action="store_true")

    p = sub.add_parser("gen", help="seeded random instances")
    p.add_argument("what", choices=["submodular", "m-set", "quotient-pair", "non-quotient-pair", "m-func",
                                    "function-pair", "chain", "sparse-paving-pair"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--scale", type=int, default=2)
    p.add_argument("--curvature", type=int, default=2)
    p.add_argument("--gap", type=int, default=1)
    p.add_argument("--length", type=int, default=3)

    p = sub.add_parser("fixtures", help="list or print the worked-example fixtures")
    p.add_argument("name", nargs="?", default=None)

    p = sub.add_parser("selftest", help="agreement harness over generated instances")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--cache-dir", type=Path, default=None)
    p.add_argument("--n", type=int, default=None, help="ground set size of generated instances")
    p.add_argument("--scale", type=int, default=None, help="value scale of generated instances")
    for stage in STAGE_COUNTS:
        p.add_argument(f"--{stage.replace('_', '-')}", dest=stage, type=int, default=None,
                       help=f"instances for the {stage} stage")
    p.add_argument("--recompute", default=None, help=f"comma-separated stages from {', '.join(STAGES)}")
    p.add_argument("--quiet", action="store_true")
    return parser


def _exit_code(doc: Dict[str, Any]) -> int:
    if doc.get("kind") == "verdict":
        return EXIT_FALSE if doc.get("verdict") is False else EXIT_TRUE
    if doc.get("kind") == "quotient-report":
        return EXIT_FALSE if doc.get("verdict") is False else EXIT_TRUE
    if doc.get("kind") == "selftest":
        return EXIT_TRUE if doc.get("ok") else EXIT_FALSE
    return EXIT_TRUE


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(
            level=logging.DEBUG if args.verbose else logging.WARNING,
            stream=stderr,
            format="%(levelname)s %(name)s: %(message)s",
        )
        args.caps = load_caps(str(args.caps_file) if args.caps_file else None, args.caps)
        doc = COMMANDS[args.command](args)
    except MConvexError as exc:
        stderr.write(dumps({"error": type(exc).__name__, "message": str(exc)}))
        return EXIT_USAGE
    stdout.write(dumps(doc))
    return _exit_code(doc)


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(argv)


if __name__ == "__main__":
    raise SystemExit(main())
