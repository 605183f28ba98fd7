"""Command-line front end.

Exit status: 0 on success, 1 on computational failure (including failed hard
assertions in ``verify``), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from .campaign import CacheCorruptError, ConfigError, load_config, rows_to_csv, run_campaign
from .counting import count_induced, count_subgraph
from .families import FamilyError, as_graph, parse_family
from .graph import GraphError, chromatic_number, color_critical_edges
from .graph6 import Graph6Error, read_graph6_file, write_graph6
from .search import DegenerateError, check_turan_good, ex_generalized, optimize_multipartite
from .spectral import check_path_bound, spectral_radius, walk_count


class UsageError(Exception):
    pass


def _family(text: str):
    try:
        return as_graph(parse_family(text))
    except FamilyError as exc:
        raise UsageError(f"bad family {text!r}: {exc}") from None


def _emit(args, header: list[str], rows: list[list], lines: list[str] | None = None) -> None:
    """Write machine output to ``--out`` in the requested format."""
    if not args.out:
        return
    if args.format == "lines":
        text = "\n".join(lines if lines is not None else [" ".join(map(str, r)) for r in rows]) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        text = buf.getvalue()
    Path(args.out).write_text(text)


def cmd_count(args) -> int:
    h = _family(args.H)
    if args.graph6:
        try:
            hosts = list(read_graph6_file(args.graph6))
        except (OSError, Graph6Error, GraphError) as exc:
            raise UsageError(str(exc)) from None
    elif args.G:
        hosts = [_family(args.G)]
    else:
        raise UsageError("count needs a host G or --graph6 FILE")
    rows = []
    for g in hosts:
        rep = count_subgraph(h, g)
        line = f"copies={rep.copies} embeddings={rep.embeddings} aut={rep.aut}"
        induced = None
        if args.induced:
            induced = count_induced(h, g)
            line += f" induced={induced}"
        if len(hosts) > 1:
            line = f"{write_graph6(g)} {line}"
        print(line)
        rows.append([write_graph6(g), rep.copies, rep.embeddings, rep.aut, "" if induced is None else induced])
    _emit(args, ["host", "copies", "embeddings", "aut", "induced"], rows)
    return 0


def cmd_construct(args) -> int:
    g = _family(args.SPEC)
    g6 = write_graph6(g)
    crit = [f"{e.u}-{e.v}" for e in color_critical_edges(g)] if g.num_edges else []
    print(g6)
    print(f"n={g.n} m={g.num_edges} chi={chromatic_number(g)} critical_edges={','.join(crit) or '-'}")
    _emit(args, ["graph6", "n", "m"], [[g6, g.n, g.num_edges]], [g6])
    return 0


def cmd_ex(args) -> int:
    rec = ex_generalized(args.N, _family(args.H), _family(args.F), jobs=args.jobs, allow_degenerate=args.allow_degenerate)
    print(rec.summary())
    print(f"witnesses={rec.witness_count} searched={rec.graphs_searched} elapsed={rec.elapsed:.2f}s")
    if args.witnesses:
        for w in rec.witnesses:
            print(w)
    _emit(
        args,
        ["n", "H", "F", "value", "turan_value", "turan_is_extremal", "unique", "witness_count"],
        [[rec.n, args.H, args.F, rec.value, rec.turan_value, rec.turan_is_extremal, rec.unique_extremal, rec.witness_count]],
        list(rec.witnesses),
    )
    return 0


def cmd_goodness(args) -> int:
    verdict = check_turan_good(_family(args.H), _family(args.F), args.NLO, args.NHI, jobs=args.jobs)
    print(f"{'n':>3} {'value':>10} {'turan':>10} equal unique")
    rows = []
    for r in verdict.rows:
        print(f"{r.n:>3} {r.value:>10} {r.turan_value:>10} {str(r.equal).lower():>5} {str(r.unique).lower():>6}")
        rows.append([r.n, r.value, r.turan_value, r.equal, r.unique])
    threshold = "none" if verdict.threshold is None else verdict.threshold
    print(f"threshold={threshold}")
    _emit(args, ["n", "value", "turan_value", "equal", "unique"], rows)
    return 0


def cmd_optimize(args) -> int:
    opt = optimize_multipartite(_family(args.H), args.R, args.N)
    print(opt.summary())
    rows = [[str(cv), opt.value, opt.balanced_is_optimal] for cv in opt.best]
    _emit(args, ["class_vector", "value", "balanced_is_optimal"], rows)
    return 0


def cmd_spectral(args) -> int:
    g = _family(args.G)
    est = spectral_radius(g)
    chk = check_path_bound(g, args.L)
    walks = walk_count(g, args.L - 1)
    print(f"mu={est.mu:.12g} iterations={est.iterations} residual={est.residual:.3g}")
    print(f"paths={chk.paths} half_walks={walks / 2:g} bound={chk.bound:.12g} holds={str(chk.holds).lower()}")
    _emit(args, ["mu", "paths", "walks", "bound", "holds"], [[est.mu, chk.paths, walks, chk.bound, chk.holds]])
    return 0 if chk.holds else 1


def cmd_verify(args) -> int:
    try:
        config = load_config(args.CONFIG)
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    if args.cache:
        config.cache_path = Path(args.cache)
    if args.out:
        config.output_path = Path(args.out)

    def progress(row, fresh):
        n = "-" if row.n is None else row.n
        origin = "run" if fresh else "cached"
        print(f"{row.experiment:<24} n={n:<3} {row.status:<12} {origin:<6} {json.dumps(row.outputs, sort_keys=True)}")

    result = run_campaign(config, jobs=args.jobs if args.jobs_given else None, progress=progress)
    fails = sum(r.status == "fail" for r in result.rows)
    print(f"rows={len(result.rows)} computed={result.computed} restored={result.restored} failed={fails}")
    if args.format == "lines" and args.out:
        Path(args.out).write_text("".join(r.to_json() + "\n" for r in result.rows))
    elif config.output_path is None:
        sys.stdout.write(rows_to_csv(result.rows))
    return result.exit_status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--jobs", type=int, default=None, help="worker processes")
    common.add_argument("--cache", help="result cache (verify only)")
    common.add_argument("--out", help="write machine-readable output here")
    common.add_argument("--format", choices=("csv", "lines"), default="csv")
    common.add_argument("--graph6", help="read host graphs from a graph6 file (count only)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="turangood", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("count", parents=[common], help="count copies of H in a host")
    s.add_argument("H")
    s.add_argument("G", nargs="?")
    s.add_argument("--induced", action="store_true")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("construct", parents=[common], help="build a family member")
    s.add_argument("SPEC")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("ex", parents=[common], help="exhaustive ex(n, H, F)")
    s.add_argument("N", type=int)
    s.add_argument("H")
    s.add_argument("F")
    s.add_argument("--allow-degenerate", action="store_true")
    s.add_argument("--witnesses", action="store_true", help="print witnesses as graph6")
    s.set_defaults(func=cmd_ex)

    s = sub.add_parser("goodness", parents=[common], help="compare ex(n,H,F) with the Turan graph")
    s.add_argument("H")
    s.add_argument("F")
    s.add_argument("NLO", type=int)
    s.add_argument("NHI", type=int)
    s.set_defaults(func=cmd_goodness)

    s = sub.add_parser("optimize", parents=[common], help="best complete R-partite host on N vertices")
    s.add_argument("H")
    s.add_argument("R", type=int)
    s.add_argument("N", type=int)
    s.set_defaults(func=cmd_optimize)

    s = sub.add_parser("spectral", parents=[common], help="walk and spectral path bound")
    s.add_argument("G")
    s.add_argument("L", type=int)
    s.set_defaults(func=cmd_spectral)

    s = sub.add_parser("verify", parents=[common], help="run a campaign file")
    s.add_argument("CONFIG")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    args.jobs_given = args.jobs is not None
    if args.jobs is None:
        args.jobs = 1
    if args.jobs < 1:
        parser.error("--jobs must be positive")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"turangood {args.command}: {exc}", file=sys.stderr)
        return 2
    except (DegenerateError, GraphError, CacheCorruptError, ArithmeticError, ValueError, RuntimeError) as exc:
        print(f"turangood {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
