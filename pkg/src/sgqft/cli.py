"""Command line interface: ``sgqft <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .graphs import (
    GraphError,
    StableGraph,
    canonical_text,
    canonicalize,
    enumerate_connected,
    enumerate_labelled,
    validate,
)
from .operators import (
    GraphSum,
    abstract_F,
    abstract_F_labelled,
    op_D,
    op_D_i,
    op_gamma,
    op_gamma_i,
    op_K,
    op_K_ij,
    op_partial,
    op_partial_i,
)
from .poly import Poly, kappa, theory
from .realization import (
    dual_hat_F,
    graph_sum_eval,
    hat_F,
    hat_F_labelled,
    s_transform,
    s_transform_labelled,
    symbolic_theory,
    theory_from_json,
    theory_to_json,
    wick_gaussian,
    wick_gaussian_labelled,
)
from . import hae as hae_mod
from .transforms import duality, eps_param, graph_transform
from .verify import SUITES, run_suite

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _cap() -> int:
    raw = os.environ.get("SGQFT_GENUS_CAP", "4")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"SGQFT_GENUS_CAP must be an integer, got {raw!r}") from None


def _guard(g: int, n: int):
    if g < 0 or n < 0 or 2 * g - 2 + n <= 0:
        raise UsageError(f"unstable type (g,n)=({g},{n})")
    if 2 * g - 2 + n > _cap():
        raise UsageError(
            f"2g-2+n = {2 * g - 2 + n} exceeds SGQFT_GENUS_CAP={_cap()}; raise the cap to proceed"
        )


def _legs(args):
    """``--legs`` as an int, or a label-count tuple when ``--labels`` is set."""
    try:
        parts = [int(x) for x in str(args.legs).split(",")]
    except ValueError:
        raise UsageError(f"--legs must be integers, got {args.legs!r}") from None
    if args.labels:
        if len(parts) != args.labels:
            raise UsageError(f"--legs needs {args.labels} comma-separated counts")
        return tuple(parts)
    if len(parts) != 1:
        raise UsageError("--legs takes one integer unless --labels is given")
    return parts[0]


def _read_graph(text: str) -> StableGraph:
    if text == "-":
        text = sys.stdin.read()
    elif os.path.exists(text):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"graph is not valid JSON: {exc}") from None
    msg = validate(data)
    if msg:
        raise UsageError(f"invalid graph: {msg}")
    return StableGraph.from_json(data)


def _coeff_text(c) -> str:
    return f"({c})" if isinstance(c, Poly) else str(Fraction(c))


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _emit_sum(s: GraphSum, fmt: str, out):
    if fmt == "json":
        out.write(json.dumps(s.to_json(), indent=1) + "\n")
        return
    if not s:
        out.write("0\n")
    for graph, c in s.items():
        out.write(f"{_coeff_text(c)}\t{_dump(graph.to_json())}\n")


def _emit_poly(p: Poly, fmt: str, out):
    if fmt == "json":
        out.write(json.dumps(p.to_json(), indent=1) + "\n")
    else:
        out.write(f"{p}\n")


def _emit_theory(t: dict, fmt: str, out):
    data = theory_to_json(t)
    if fmt == "json":
        out.write(json.dumps(data, indent=1) + "\n")
        return
    for key in data:
        out.write(f"{key}: {Poly.from_json(data[key])}\n")


def _load_theory(args, bound):
    if args.seed_file:
        try:
            with open(args.seed_file, encoding="utf-8") as fh:
                t = theory_from_json(json.load(fh))
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read theory file: {exc}") from None
        return t
    return symbolic_theory(bound, args.labels)


def _kappa_matrix(text: str, N: int) -> dict:
    """Parse the labelled ``--kappa`` value ``i,j=poly;...``.

    Entries not given are zero. Without ``--kappa`` the symbolic matrix is used.
    """
    out = {}
    if text is None:
        for i in range(1, N + 1):
            for j in range(i, N + 1):
                out[(i, j)] = Poly.var(kappa(i, j))
        return out
    for part in text.split(";"):
        if "=" not in part:
            raise UsageError("labelled --kappa takes entries like '1,1=kappa[1,1];1,2=0'")
        idx, val = part.split("=", 1)
        try:
            i, j = (int(x) for x in idx.split(","))
        except ValueError:
            raise UsageError(f"bad --kappa index {idx!r}") from None
        if not (1 <= i <= N and 1 <= j <= N):
            raise UsageError(f"--kappa index {idx!r} outside 1..{N}")
        out[(min(i, j), max(i, j))] = _parse_poly(val)
    return out


def _parse_poly(text):
    try:
        return Poly.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# subcommands


def cmd_enumerate(args, out):
    legs = _legs(args)
    n = sum(legs) if isinstance(legs, tuple) else legs
    _guard(args.genus, n)
    graphs = enumerate_labelled(args.genus, legs) if args.labels else enumerate_connected(args.genus, legs)
    records = []
    for G in graphs:
        key, aut = canonicalize(G)
        records.append({"key": canonical_text(key), "aut": aut, "graph": G.to_json()})
    if args.format == "json":
        out.write(json.dumps(records, indent=1) + "\n")
    else:
        for r in records:
            out.write(f"{r['key']}\taut={r['aut']}\t{_dump(r['graph'])}\n")


def cmd_aut(args, out):
    G = _read_graph(args.graph)
    key, aut = canonicalize(G)
    if args.format == "json":
        out.write(_dump({"key": canonical_text(key), "aut": aut}) + "\n")
    else:
        out.write(f"{canonical_text(key)}\taut={aut}\n")


def cmd_free_energy(args, out):
    legs = _legs(args)
    if args.labels:
        _guard(args.genus, sum(legs))
        s = abstract_F_labelled(args.genus, legs)
    else:
        _guard(args.genus, legs)
        s = abstract_F(args.genus, legs)
    _emit_sum(s, args.format, out)


def cmd_op(args, out):
    G = _read_graph(args.graph)
    N = args.labels
    if args.name == "K":
        if N:
            if args.i is None or args.j is None:
                raise UsageError("op K with --labels needs --i and --j")
            s = op_K_ij(G, args.i, args.j, N)
        else:
            s = op_K(G)
    else:
        if N and args.i is None:
            raise UsageError(f"op {args.name} with --labels needs --i")
        plain = {"partial": op_partial, "gamma": op_gamma, "D": op_D}[args.name]
        labelled = {"partial": op_partial_i, "gamma": op_gamma_i, "D": op_D_i}[args.name]
        s = labelled(G, args.i, N) if N else plain(G)
    _emit_sum(s, args.format, out)


def _graph_guard(G):
    from .graphs import genus

    _guard(genus(G), G.num_legs)


def cmd_transform(args, out):
    G = _read_graph(args.graph)
    _graph_guard(G)
    try:
        e = eps_param(args.epsilon)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit_sum(graph_transform(G, e, args.labels or None), args.format, out)


def cmd_dualize(args, out):
    G = _read_graph(args.graph)
    _graph_guard(G)
    _emit_sum(duality(G, args.labels or None), args.format, out)


def cmd_realize(args, out):
    legs = _legs(args)
    if args.labels:
        _guard(args.genus, sum(legs))
        _emit_poly(hat_F_labelled(args.genus, legs), args.format, out)
    else:
        _guard(args.genus, legs)
        _emit_poly(hat_F(args.genus, legs), args.format, out)


def cmd_dual_realize(args, out):
    legs = _legs(args)
    if args.labels:
        raise UsageError("dual-realize is one-dimensional")
    _guard(args.genus, legs)
    if args.form == "tilde":
        from math import factorial

        sym = lambda t: Poly.var(theory(*t))  # noqa: E731
        p = graph_sum_eval(args.genus, legs, sym, -Poly.var(kappa())) * factorial(legs)
    else:
        p = dual_hat_F(args.genus, legs)
    _emit_poly(p, args.format, out)


def cmd_s_transform(args, out):
    _guard_bound(args.genus_bound)
    T = _load_theory(args, args.genus_bound)
    if args.labels:
        res = s_transform_labelled(T, _kappa_matrix(args.kappa, args.labels), args.labels, args.genus_bound)
    else:
        k = _parse_poly(args.kappa) if args.kappa else Poly.var(kappa())
        res = s_transform(T, k, args.genus_bound)
    _emit_theory(res, args.format, out)


def cmd_wick(args, out):
    _guard_bound(args.genus_bound)
    T = _load_theory(args, args.genus_bound)
    if args.labels:
        res = wick_gaussian_labelled(T, _kappa_matrix(args.kappa, args.labels), args.labels, args.genus_bound)
    else:
        k = _parse_poly(args.kappa) if args.kappa else Poly.var(kappa())
        res = wick_gaussian(T, k, args.genus_bound)
    _emit_theory(res, args.format, out)


def _guard_bound(b):
    if b < 1:
        raise UsageError("--genus-bound must be at least 1")
    if b > _cap():
        raise UsageError(f"--genus-bound {b} exceeds SGQFT_GENUS_CAP={_cap()}")


def cmd_hae(args, out):
    g, n = args.genus, args.npoints
    if args.emit == "kz":
        if n != 0 or g < 2:
            raise UsageError("--emit kz needs --genus >= 2 and --npoints 0")
        _guard(g, 0)
        _emit_poly(hae_mod.closure_form(g), args.format, out)
        return
    _guard(g, n)
    p = hae_mod.tilde_F(g, n) if args.emit == "tilde" else hae_mod.holo_F(g, n)
    _emit_poly(p, args.format, out)


def cmd_verify(args, out):
    _guard_bound(args.bound)
    failed = 0
    results = []
    for suite, check, ok in run_suite(args.suite, args.bound):
        failed += not ok
        results.append({"suite": suite, "check": check, "passed": ok})
        if args.format == "text":
            out.write(f"{'PASS' if ok else 'FAIL'}  {suite}: {check}\n")
    if args.format == "json":
        out.write(json.dumps(results, indent=1) + "\n")
    else:
        out.write(f"{len(results) - failed}/{len(results)} checks passed\n")
    return EXIT_FAILED if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    def flags(default):
        # subcommands suppress defaults so flags given before them survive
        parser = _Parser(add_help=False)
        parser.add_argument("--format", choices=("text", "json"),
                            default="text" if default else argparse.SUPPRESS)
        parser.add_argument("--labels", type=int, metavar="N",
                            default=0 if default else argparse.SUPPRESS,
                            help="number of labels (0 for the unlabelled theory)")
        parser.add_argument("--seed-file", default=None if default else argparse.SUPPRESS,
                            help="theory JSON used as input")
        return parser

    common = flags(False)
    p = _Parser(prog="sgqft", description="Exact computations with stable graphs.",
                parents=[flags(True)])
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.set_defaults(func=func)
        return sp

    def genus_legs(sp):
        sp.add_argument("--genus", type=int, required=True)
        sp.add_argument("--legs", default="0", help="n, or l1,..,lN with --labels")

    genus_legs(add("enumerate", cmd_enumerate, "list connected stable graphs"))
    add("aut", cmd_aut, "canonical key and automorphism order").add_argument("--graph", required=True)
    genus_legs(add("free-energy", cmd_free_energy, "abstract free energy"))

    sp = add("op", cmd_op, "apply K, partial, gamma or D")
    sp.add_argument("name", choices=("K", "partial", "gamma", "D"))
    sp.add_argument("--graph", required=True)
    sp.add_argument("--i", type=int)
    sp.add_argument("--j", type=int)

    sp = add("transform", cmd_transform, "Type-epsilon expansion of a graph")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--epsilon", required=True)
    add("dualize", cmd_dualize, "duality map").add_argument("--graph", required=True)

    genus_legs(add("realize", cmd_realize, "Feynman realization of the free energy"))
    sp = add("dual-realize", cmd_dual_realize, "dual realization")
    genus_legs(sp)
    sp.add_argument("--form", choices=("expanded", "tilde"), default="expanded",
                    help="tilde: keep F[g,n] as the realized vertex weights n! hatF")

    for name, func in (("s-transform", cmd_s_transform), ("wick", cmd_wick)):
        sp = add(name, func, "propagator shift of a theory" if name == "s-transform"
                 else "formal Gaussian integral oracle")
        sp.add_argument("--kappa", help="propagator polynomial, default kappa")
        sp.add_argument("--genus-bound", type=int, default=3,
                        help="largest 2g-2+n computed")

    sp = add("hae", cmd_hae, "holomorphic anomaly amplitudes")
    sp.add_argument("--genus", type=int, required=True)
    sp.add_argument("--npoints", type=int, default=0)
    sp.add_argument("--emit", choices=("tilde", "holo", "kz"), default="tilde")

    sp = add("verify", cmd_verify, "run a verification suite")
    sp.add_argument("--suite", choices=SUITES + ("all",), default="all")
    sp.add_argument("--bound", type=int, default=3)
    return p


def run(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.labels < 0:
            raise UsageError("--labels must be nonnegative")
        code = args.func(args, out)
        return EXIT_OK if code is None else code
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_INVALID
    except (GraphError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INVALID


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
