"""Command-line front end.

Exit codes: 0 for indistinguishable/equivalent or a successful construction,
1 for distinguished/inequivalent, 2 for any error.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Sequence

from .automata import MTA, MWA, automaton_from_json
from .equivalence import InternalError, mta_equiv, mta_equiv_randomised, mwa_equiv, mwa_equiv_rank
from .graphcore import (
    Graph, ModeError, cfi, hom_count, hom_count_pinned, make_complete, make_cycle, make_kneser,
    make_path, make_star,
)
from .homind import (
    ClassAutomaton, builtin_class, decide_cycles_spectral, decide_cyclespaths_spectral,
    decide_directed_cycles_fast, decide_homind,
)
from .ratlinalg import QMatrix, fmt_q, q
from .reductions import (
    Circuit, alpha, build_f_h, circuit_for_value, circuit_height, circuit_to_graph, cycles_to_cyclespaths,
    cyclespaths_to_cycles, decolour, default_family, eval_circuit, normalise_circuit, posdet_lift,
    vcp_to_pair, weighted_to_simple,
)

SCHEMAS = """\
JSON schemas
  graph      {"n": int, "directed": bool, "edges": [[u, v], ...], "colours": {"v": colour}}
             (colours optional; undirected edges listed once)
  automaton  MWA: {"states": s, "alphabet": [a, ...], "transitions": {a: s x s rows},
                   "initial": [s values], "final": [s values]}
             MTA: as MWA without "initial", plus "arity": {symbol: r}; transition
                  of an arity-r symbol has s^r rows and s columns
             values are integers or rational strings such as "-3/4"
  class      {"kind": "word"|"tree", "k": int, "states": [...], "initial": state,
              "accepting": [...], "step": {state: {letter: state}},
              "glue_step": {state: {state: state}} (tree kind only),
              "small_members": [graph, ...], "directed": bool, "name": str}
  matrix     list of rows of integers or rational strings
  circuit    {"gates": [{"label": "0"|"1"|"+"|"*", "children": [i, j]}, ...], "output": k}
"""

_NAMED = re.compile(r"^(C|P|K|S|DC)(\d+)$")


def named_graph(name: str) -> Graph:
    """C<n> cycle, P<n> path on n vertices, K<n> complete, S<n> star with n leaves, DC<n> directed cycle."""
    m = _NAMED.match(name)
    if not m:
        raise ValueError(f"unknown graph name {name!r}")
    kind, n = m.group(1), int(m.group(2))
    return {"C": make_cycle, "P": make_path, "K": make_complete, "S": make_star,
            "DC": lambda k: make_cycle(k, directed=True)}[kind](n)


def _load(path: str):
    with open(path) as fh:
        return json.load(fh)


def _graph(path: str) -> Graph:
    return Graph.from_json(_load(path))


def _matrix(path: str) -> QMatrix:
    rows = _load(path)
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ValueError(f"{path}: expected a list of rows")
    return QMatrix.from_rows([[q(x) for x in r] for r in rows], cols=len(rows[0]) if rows else 0)


def _mat_json(M: QMatrix) -> list[list[str]]:
    return [[fmt_q(x) for x in row] for row in M.to_rows()]


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


# ---------------------------------------------------------------------------
# commands

def cmd_decide(args) -> int:
    if (args.cls is None) == (args.class_file is None):
        raise ValueError("give exactly one of --class and --class-file")
    G, H = _graph(args.G), _graph(args.H)
    if args.method == "spectral":
        deciders = {"cycles": decide_cycles_spectral, "cycles-and-paths": decide_cyclespaths_spectral,
                    "directed-cycles": decide_directed_cycles_fast}
        if args.cls not in deciders:
            raise ValueError("--method spectral needs --class cycles, cycles-and-paths or directed-cycles")
        verdict = deciders[args.cls](G, H)
    else:
        spec = builtin_class(args.cls) if args.cls else ClassAutomaton.from_json(_load(args.class_file))
        verdict = decide_homind(spec, G, H, lump=not args.no_lump)
    _emit(verdict.to_json())
    return 0 if verdict.indistinguishable else 1


def cmd_eq(args) -> int:
    A, B = automaton_from_json(_load(args.A)), automaton_from_json(_load(args.B))
    want = MTA if args.mta else MWA
    if not (isinstance(A, want) and isinstance(B, want)):
        raise ValueError(f"both automata must be {'MTA' if args.mta else 'MWA'}s")
    method = args.method or ("closure" if args.mta else "basis")
    if args.mta:
        if method == "closure":
            verdict = mta_equiv(A, B)
        elif method == "randomised":
            if args.seed is None:
                raise ValueError("--method randomised requires --seed")
            verdict = mta_equiv_randomised(A, B, args.trials, args.seed)
        else:
            raise ValueError(f"method {method!r} is not available for MTAs")
    elif method == "basis":
        verdict = mwa_equiv(A, B, args.rank_bound)
    elif method == "rank":
        verdict = mwa_equiv_rank(A, B)
    else:
        raise ValueError(f"method {method!r} is not available for MWAs")
    _emit(verdict.to_json())
    return 0 if verdict.equivalent else 1


def cmd_oracle(args) -> int:
    F, G = _graph(args.F), _graph(args.G)
    pins = {}
    for p in args.pin:
        a, _, b = p.partition("=")
        pins[int(a)] = int(b)
    count = hom_count_pinned(F, G, pins) if pins else hom_count(F, G)
    _emit({"hom_count": count})
    return 0


def _circuit_payload(C: Circuit) -> dict:
    h = circuit_height(C)
    _, Ghat = circuit_to_graph(C)
    return {"circuit": C.to_json(), "value": eval_circuit(C), "height": h, "alpha": alpha(h),
            "graph": Ghat.to_json(), "pattern": build_f_h(h).to_json()}


def cmd_gadget(args) -> int:
    kind = args.kind
    if kind == "cfi":
        _emit(cfi(named_graph(args.base), args.parity).to_json())
    elif kind == "graph":
        _emit(named_graph(args.name).to_json())
    elif kind == "kneser":
        _emit(make_kneser(args.r, args.s).to_json())
    elif kind == "circuit":
        if args.value < 0 or args.height < 0:
            raise ValueError("value and height must be non-negative")
        _emit(_circuit_payload(circuit_for_value(args.value, args.height)))
    elif kind == "f_h":
        if args.relaxed and args.seed is None:
            raise ValueError("--relaxed requires --seed")
        _emit(build_f_h(args.height, hat=not args.no_hat, strict_depth=not args.relaxed, seed=args.seed).to_json())
    elif kind == "family":
        fam = default_family(args.palette)
        _emit({"P": fam.P.to_json(), "Q": fam.Q.to_json(), "V": fam.V.to_json(),
               "K": {c: g.to_json() for c, g in fam.K.items()}, "ell": fam.ell, "tip": 0})
    return 0


def cmd_reduce(args) -> int:
    kind = args.kind
    if kind in ("posdet", "vcp"):
        A = _matrix(args.A)
        if kind == "posdet":
            D, E = posdet_lift(A, _matrix(args.B))
        else:
            D, E = vcp_to_pair(A, [q(c) for c in args.coeffs])
        _emit({"D": _mat_json(D), "E": _mat_json(E)})
    elif kind == "weighted":
        G, period = weighted_to_simple(_matrix(args.A))
        _emit({"graph": G.to_json(), "period": period})
    elif kind in ("cp2c", "c2cp"):
        f = cyclespaths_to_cycles if kind == "cp2c" else cycles_to_cyclespaths
        L, R = f(_graph(args.G), _graph(args.H))
        _emit({"left": L.to_json(), "right": R.to_json()})
    elif kind == "decolour":
        fam = default_family(args.palette) if args.palette else default_family()
        D = decolour(_graph(args.G), fam)
        _emit({"graph": D.graph.to_json(), "ell": fam.ell,
               "gadgets": [{"kind": r.kind, "anchors": list(r.anchors), "tips": dict(r.tips),
                            "vertices": [r.vertices[0], r.vertices[-1]] if r.vertices else []}
                           for r in D.gadgets]})
    elif kind == "circuit":
        C = normalise_circuit(Circuit.from_json(_load(args.C)), args.min_height)
        _emit(_circuit_payload(C))
    return 0


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="homauto", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter, epilog=SCHEMAS)
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decide", help="decide homomorphism indistinguishability over a class",
                       formatter_class=argparse.RawDescriptionHelpFormatter, epilog=SCHEMAS)
    d.add_argument("--class", dest="cls", help="builtin class: cycles, cycles-and-paths, directed-cycles, "
                   "pathwidth-le(K), treewidth-le(K)")
    d.add_argument("--class-file", help="class automaton JSON")
    d.add_argument("--method", choices=["automaton", "spectral"], default="automaton")
    d.add_argument("--no-lump", action="store_true", help="disable automorphism-orbit lumping")
    d.add_argument("G")
    d.add_argument("H")
    d.set_defaults(func=cmd_decide)

    e = sub.add_parser("eq", help="equivalence of multiplicity automata",
                       formatter_class=argparse.RawDescriptionHelpFormatter, epilog=SCHEMAS)
    mode = e.add_mutually_exclusive_group(required=True)
    mode.add_argument("--mwa", action="store_true")
    mode.add_argument("--mta", action="store_true")
    e.add_argument("--method", choices=["basis", "rank", "closure", "randomised"])
    e.add_argument("--seed", type=int, help="required for the randomised method")
    e.add_argument("--trials", type=int, default=100)
    e.add_argument("--rank-bound", type=int, default=4,
                   help="cross-check basis verdicts by the rank method up to this many states")
    e.add_argument("A")
    e.add_argument("B")
    e.set_defaults(func=cmd_eq)

    o = sub.add_parser("oracle", help="brute-force homomorphism count")
    o.add_argument("F")
    o.add_argument("G")
    o.add_argument("--pin", action="append", default=[], metavar="U=V", help="pin vertex U of F to V of G")
    o.set_defaults(func=cmd_oracle)

    g = sub.add_parser("gadget", help="emit a constructed graph or fixture")
    gs = g.add_subparsers(dest="kind", required=True)
    x = gs.add_parser("cfi")
    x.add_argument("--base", required=True, help="named base graph, e.g. C3")
    x.add_argument("--parity", type=int, choices=[0, 1], default=0)
    x = gs.add_parser("graph")
    x.add_argument("--name", required=True, help="C<n>, P<n>, K<n>, S<n> or DC<n>")
    x = gs.add_parser("kneser")
    x.add_argument("--r", type=int, required=True)
    x.add_argument("--s", type=int, required=True)
    x = gs.add_parser("circuit", help="normalised circuit for a value, with its graph and pattern")
    x.add_argument("--value", type=int, required=True)
    x.add_argument("--height", type=int, default=0, help="minimum output height")
    x = gs.add_parser("f_h")
    x.add_argument("--height", type=int, required=True)
    x.add_argument("--relaxed", action="store_true", help="leaves at varying depths")
    x.add_argument("--seed", type=int)
    x.add_argument("--no-hat", action="store_true")
    x = gs.add_parser("family", help="default decolouring gadget family")
    x.add_argument("--palette", nargs="+", default=["0", "1", "+", "*", "S", "T"])
    g.set_defaults(func=cmd_gadget)

    r = sub.add_parser("reduce", help="apply a reduction")
    rs = r.add_subparsers(dest="kind", required=True)
    x = rs.add_parser("posdet")
    x.add_argument("A")
    x.add_argument("B")
    x = rs.add_parser("vcp")
    x.add_argument("A")
    x.add_argument("--coeffs", nargs="*", default=[], help="c_0 ... c_{n-1}")
    x = rs.add_parser("weighted")
    x.add_argument("A")
    for name in ("cp2c", "c2cp"):
        x = rs.add_parser(name)
        x.add_argument("G")
        x.add_argument("H")
    x = rs.add_parser("decolour")
    x.add_argument("G")
    x.add_argument("--palette", nargs="+")
    x = rs.add_parser("circuit")
    x.add_argument("C")
    x.add_argument("--min-height", type=int, default=0)
    r.set_defaults(func=cmd_reduce)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.func(args)
    except (ValueError, KeyError, ModeError, InternalError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
