"""Command line front end: ``tdnet <group> <command> [options]``.

Exit codes: 0 success, 1 domain error or failed check, 2 I/O or format error.
Graph-like inputs are JSON files (``-`` reads standard input); generated
objects go to ``--out`` or, without it, to standard output.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any

from tdnet import __version__, bigraph, construct, dcn, tdesign, verify
from tdnet.bigraph import FormatError, GraphError

log = logging.getLogger("tdnet")


class CheckFailed(Exception):
    """A verification ran and reported problems."""


# -- I/O helpers ------------------------------------------------------------
def _read_json(path: str) -> Any:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from None


def _emit(data: Any, out: str | None) -> None:
    text = json.dumps(data, indent=1) + "\n"
    if out:
        Path(out).write_text(text)
        log.info("wrote %s", out)
    else:
        sys.stdout.write(text)


def _report(args, data: dict[str, Any], lines: list[str]) -> None:
    if args.json:
        sys.stdout.write(json.dumps(data, indent=1, sort_keys=True) + "\n")
    else:
        for line in lines:
            print(line)


def _load_any(path: str):
    """``("constructed" | "design" | "graph", object)`` according to the file's shape."""
    data = _read_json(path)
    if construct.is_constructed(data):
        return "constructed", construct.from_dict(data)
    if isinstance(data, dict) and "groups" in data:
        return "design", tdesign.from_dict(data)
    return "graph", bigraph.from_dict(data)


def _host(path: str) -> bigraph.BipartiteGraph:
    # route output lives in the 2-step graph, so constructed files resolve to it
    kind, obj = _load_any(path)
    if kind == "constructed":
        return obj.two_step_graph
    if kind == "design":
        return obj.graph
    return obj


def _load_constructed(path: str) -> construct.ConstructedGraph:
    kind, obj = _load_any(path)
    if kind != "constructed":
        raise FormatError(f"{path}: expected a constructed graph (from 'construct two-step')")
    return obj


def _require_blocks(h: construct.ConstructedGraph, *refs: str) -> None:
    g = h.two_step_graph
    for r in refs:
        if r not in g or not g.is_block(r):
            raise GraphError(f"{r!r} is not a block of the 2-step graph")


def _load_design(path: str) -> tdesign.TransversalDesign:
    kind, obj = _load_any(path)
    if kind != "design":
        raise FormatError(f"{path}: expected a transversal design file")
    return obj


# -- td ---------------------------------------------------------------------
def cmd_td_build(args) -> None:
    t = tdesign.build_td(args.delta, args.k)
    _emit(tdesign.to_dict(t), args.out)


def cmd_td_verify(args) -> None:
    t = tdesign.from_dict(_read_json(args.inp))
    problems = tdesign.verify_td(t)
    lines = [f"design [{t.delta},{t.k}]: {'pass' if not problems else 'FAIL'}"] + [f"  {p}" for p in problems]
    _report(args, {"delta": t.delta, "k": t.k, "passed": not problems, "problems": problems}, lines)
    if problems:
        raise CheckFailed


# -- base -------------------------------------------------------------------
def cmd_base_cycle(args) -> None:
    _emit(bigraph.to_dict(construct.gen_cycle(args.n)), args.out)


def cmd_base_circulant(args) -> None:
    _emit(bigraph.to_dict(construct.gen_circulant(args.n, args.delta)), args.out)


def cmd_base_double_cover(args) -> None:
    g = bigraph.from_dict(_read_json(args.inp))
    _emit(bigraph.to_dict(construct.double_cover_join(g)), args.out)


# -- construct ----------------------------------------------------------------
def _cmd_construct(args, three: bool) -> None:
    h0 = bigraph.from_dict(_read_json(args.base))
    t = tdesign.from_dict(_read_json(args.td))
    c = construct.iterate(h0, t, args.iterations, three=three)
    g = c.graph
    log.info("%s graph: %d nodes, %d blocks", "3-step" if three else "2-step", g.n, g.e)
    _emit(construct.to_dict(c), args.out)


def cmd_construct_two(args) -> None:
    _cmd_construct(args, False)


def cmd_construct_three(args) -> None:
    _cmd_construct(args, True)


# -- dcn --------------------------------------------------------------------
def cmd_dcn_method_a(args) -> None:
    kind, obj = _load_any(args.inp)
    if kind == "design":
        raise FormatError(f"{args.inp}: expected a 3-step graph")
    _emit(dcn.to_dict(dcn.method_a(obj, args.c)), args.out)


def cmd_dcn_method_b(args) -> None:
    d = dcn.from_dict(_read_json(args.inp))
    _emit(dcn.to_dict(dcn.method_b(d)), args.out)


def cmd_dcn_counts(args) -> None:
    cnt = dcn.dcn_counts(args.n, args.e, args.d, args.delta, args.k, args.iterations, args.c, args.method)
    data = {
        "servers": cnt.servers,
        "level1": cnt.level1,
        "level2": cnt.level2,
        "switches": cnt.switches,
        "ports": cnt.ports,
        "diameter": cnt.diameter_bound,
    }
    lines = [f"{key}: {val:,}" for key, val in data.items()]
    _report(args, data, lines)


def cmd_dcn_table(args) -> None:
    rows = dcn.table_qfz()
    head = ("topology", "ports", "diameter", "servers", "switches")
    data = {"rows": [dict(zip(head, r)) for r in rows]}
    width = max(len(r[0]) for r in rows)
    lines = [f"{head[0]:<{width}}  {head[1]:>5}  {head[2]:>8}  {head[3]:>12}  {head[4]:>10}"]
    for name, ports, diam, servers, switches in rows:
        lines.append(f"{name:<{width}}  {ports:>5}  {diam:>8}  {servers:>12,}  {switches:>10,}")
    if args.figure:
        from tdnet import plotting

        plotting.servers_bar_chart(rows, args.figure)
        log.info("figure written to %s", args.figure)
    _report(args, data, lines)


def cmd_dcn_diameter(args) -> None:
    d = dcn.from_dict(_read_json(args.inp))
    diam = dcn.dcn_diameter(d)
    _report(args, {"servers": len(d.servers), "diameter": diam}, [f"server-to-server diameter: {diam}"])


# -- route ------------------------------------------------------------------
def _path_lines(ps) -> list[str]:
    lines = [f"{len(ps.paths)} {ps.mode}-disjoint paths, bound {ps.length_bound}, longest {ps.max_length}"]
    lines += [f"  [{p.length}] " + " - ".join(p.elements) for p in ps.paths]
    return lines


def cmd_route_one(args) -> None:
    from tdnet.routing import one_to_one_any

    h = _load_constructed(args.graph)
    _require_blocks(h, args.src, args.dst)
    ps = one_to_one_any(h, args.src, args.dst)
    if args.emit_paths:
        _emit(ps.to_dict(), args.emit_paths)
    _report(args, ps.to_dict(), _path_lines(ps))


def cmd_route_many(args) -> None:
    from tdnet.routing import one_to_many

    h = _load_constructed(args.graph)
    targets = [x.strip() for x in args.targets.split(",") if x.strip()]
    _require_blocks(h, args.src, *targets)
    ps = one_to_many(h, args.src, targets)
    if args.emit_paths:
        _emit(ps.to_dict(), args.emit_paths)
    _report(args, ps.to_dict(), _path_lines(ps))


# -- verify -----------------------------------------------------------------
def cmd_verify_paths(args) -> None:
    from tdnet.routing import PathSet

    host = _host(args.graph)
    data = _read_json(args.paths)
    raw = data.get("paths") if isinstance(data, dict) else data
    if not isinstance(raw, list) or not all(isinstance(p, list) for p in raw):
        raise FormatError(f"{args.paths}: expected a list of element sequences")
    lengths = [len(p) - 1 for p in raw]
    bound = data.get("length_bound", max(lengths, default=0)) if isinstance(data, dict) else max(lengths, default=0)
    ps = PathSet(tuple(tuple(p) for p in raw), args.mode, len(raw), int(bound), host)
    problems = verify.check_pathset(ps)
    lines = [f"{len(raw)} paths, mode {args.mode}: {'pass' if not problems else 'FAIL'}"] + [f"  {p}" for p in problems]
    _report(args, {"paths": len(raw), "mode": args.mode, "passed": not problems, "problems": problems}, lines)
    if problems:
        raise CheckFailed


def cmd_verify_menger(args) -> None:
    host = _host(args.graph)
    m = verify.menger_count(host, args.src, args.dst, args.mode)
    _report(
        args,
        {"source": args.src, "sink": args.dst, "mode": args.mode, "count": m},
        [f"max {args.mode}-disjoint paths {args.src} -> {args.dst}: {m}"],
    )


def cmd_verify_sweep(args) -> None:
    log.info("seed %d", args.seed)
    if args.theorem in (3, 4):
        t = _load_design(args.graph)
        fn = verify.sweep_theorem3 if args.theorem == 3 else verify.sweep_theorem4
        rep = fn(t, args.trials, seed=args.seed)
    elif args.theorem == 2:
        h = _load_constructed(args.graph)
        rep = verify.sweep_theorem2(h, jobs=args.jobs)
    else:
        h = _load_constructed(args.graph)
        rep = verify.sweep_theorem5(h, args.trials, seed=args.seed)
    log.info("slowest query %.4f s", rep.max_runtime)
    data = rep.to_dict()
    data.pop("max_runtime")  # keeps repeated runs byte-identical
    hist = ", ".join(f"{k}:{v}" for k, v in sorted(rep.length_histogram.items()))
    lines = [
        f"theorem {rep.theorem} sweep on {rep.instance}",
        f"queries: {rep.pairs_tested}  failures: {len(rep.failures)}  seed: {rep.seed}",
        f"path lengths: {hist}",
    ]
    if rep.counts:
        lines.append("cases: " + ", ".join(f"{k}={v}" for k, v in sorted(rep.counts.items())))
    lines += [f"  FAIL {f['query']}: {'; '.join(f['problems'])}" for f in rep.failures[:20]]
    if args.figure:
        from tdnet import plotting

        plotting.length_histogram(rep.length_histogram, args.figure, title=f"theorem {rep.theorem}: {rep.instance}")
        log.info("figure written to %s", args.figure)
    _report(args, data, lines)
    if rep.failures:
        raise CheckFailed


# -- export -----------------------------------------------------------------
def cmd_export_dot(args) -> None:
    data = _read_json(args.inp)
    if isinstance(data, dict) and "level1" in data:
        text = dcn.export_dot(dcn.from_dict(data))
    else:
        text = bigraph.export_dot(_host(args.inp))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# -- parser -----------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report on stdout")
    common.add_argument("-q", "--quiet", action="store_true", help="only warnings on stderr")

    p = argparse.ArgumentParser(prog="tdnet", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"tdnet {__version__}")
    groups = p.add_subparsers(dest="group", required=True)

    def sub(parent, name, fn, help_):
        sp = parent.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    # td
    td = groups.add_parser("td", help="transversal designs").add_subparsers(dest="cmd", required=True)
    sp = sub(td, "build", cmd_td_build, "build a [delta,k] design over GF(k)")
    sp.add_argument("--delta", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--out")
    sp = sub(td, "verify", cmd_td_verify, "check every design clause")
    sp.add_argument("--in", dest="inp", default="-")

    # base
    base = groups.add_parser("base", help="base graph generators").add_subparsers(dest="cmd", required=True)
    sp = sub(base, "cycle", cmd_base_cycle, "alternating cycle with n nodes and n blocks")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--out")
    sp = sub(base, "circulant", cmd_base_circulant, "circulant (delta, delta) graph on n nodes")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--delta", type=int, required=True)
    sp.add_argument("--out")
    sp = sub(base, "double-cover", cmd_base_double_cover, "double cover with cross edges")
    sp.add_argument("--in", dest="inp", default="-")
    sp.add_argument("--out")

    # construct
    con = groups.add_parser("construct", help="2-step and 3-step graphs").add_subparsers(dest="cmd", required=True)
    for name, fn in (("two-step", cmd_construct_two), ("three-step", cmd_construct_three)):
        sp = sub(con, name, fn, f"{name} graph from a base and a design")
        sp.add_argument("--base", required=True)
        sp.add_argument("--td", required=True)
        sp.add_argument("--iterations", type=int, default=1)
        sp.add_argument("--out")

    # dcn
    dg = groups.add_parser("dcn", help="data-centre networks").add_subparsers(dest="cmd", required=True)
    sp = sub(dg, "method-a", cmd_dcn_method_a, "method A network from a 3-step graph")
    sp.add_argument("--in", dest="inp", required=True)
    sp.add_argument("--c", type=int, default=1)
    sp.add_argument("--out")
    sp = sub(dg, "method-b", cmd_dcn_method_b, "method B network from a method A network")
    sp.add_argument("--in", dest="inp", required=True)
    sp.add_argument("--out")
    sp = sub(dg, "counts", cmd_dcn_counts, "closed-form sizes")
    for flag in ("--n", "--e", "--d", "--delta", "--k"):
        sp.add_argument(flag, type=int, required=True)
    sp.add_argument("--iterations", type=int, default=1)
    sp.add_argument("--c", type=int, default=1)
    sp.add_argument("--method", choices=("a", "b", "none"), default="a")
    sp = sub(dg, "table-qfz", cmd_dcn_table, "64-port comparison table")
    sp.add_argument("--figure", help="write a bar chart of server counts")
    sp = sub(dg, "diameter", cmd_dcn_diameter, "exact server-to-server diameter")
    sp.add_argument("--in", dest="inp", required=True)

    # route
    rg = groups.add_parser("route", help="disjoint path construction").add_subparsers(dest="cmd", required=True)
    sp = sub(rg, "one-to-one", cmd_route_one, "internally-disjoint paths between two blocks")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--src", required=True)
    sp.add_argument("--dst", required=True)
    sp.add_argument("--emit-paths")
    sp = sub(rg, "one-to-many", cmd_route_many, "edge-disjoint paths to a block multiset")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--src", required=True)
    sp.add_argument("--targets", required=True, help="comma separated, repeats allowed")
    sp.add_argument("--emit-paths")

    # verify
    vg = groups.add_parser("verify", help="independent checks").add_subparsers(dest="cmd", required=True)
    sp = sub(vg, "paths", cmd_verify_paths, "validate a path file")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--paths", required=True)
    sp.add_argument("--mode", choices=("internal", "edge"), default="internal")
    sp = sub(vg, "menger", cmd_verify_menger, "exact maximum number of disjoint paths")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--src", required=True)
    sp.add_argument("--dst", required=True)
    sp.add_argument("--mode", choices=("internal", "edge"), default="internal")
    sp = sub(vg, "sweep", cmd_verify_sweep, "randomised or exhaustive theorem sweep")
    sp.add_argument("--graph", required=True, help="constructed graph (2, 5) or design (3, 4)")
    sp.add_argument("--theorem", type=int, choices=(2, 3, 4, 5), required=True)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--figure", help="write a path-length histogram")

    sp = sub(groups, "export-dot", cmd_export_dot, "DOT text for a graph, design or network")
    sp.add_argument("--in", dest="inp", required=True)
    sp.add_argument("--out")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="tdnet: %(message)s", stream=sys.stderr, force=True)
    log.setLevel(logging.WARNING if args.quiet else logging.INFO)
    log.info("tdnet %s", __version__)
    try:
        args.fn(args)
    except CheckFailed:
        return 1
    except (FormatError, OSError, json.JSONDecodeError) as exc:
        log.error("input error: %s", exc)
        return 2
    except (GraphError, ValueError) as exc:
        log.error("%s", exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
