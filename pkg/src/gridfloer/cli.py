"""Command-line front end: ``gridfloer compute|bounds|pair|torus|selftest``."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from collections import Counter
from fractions import Fraction
from pathlib import Path

from . import bounds as bnd
from .algebra import HomologyModule, homology_module, torsion_order
from .complex import (DEFAULT_MAX_GENERATORS, Specialization, build_complex,
                      verify_d_squared)
from .grid import (DEFAULT_MAX_GRID_SIZE, GridDiagram, GridError, SizeLimit, components,
                   read_grid, serialize, torus_grid)
from .selftest import CorpusError, SelftestConfig, format_table, run_selftest

CONVENTION = "grid-standard-v1"

EXIT_OK, EXIT_SELFTEST, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3

log = logging.getLogger("gridfloer")


class InputError(Exception):
    """Bad command-line input; reported with exit code 2."""


def _number(v):
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else float(v)
    return v


def _limits(args) -> dict:
    return dict(max_size=args.max_grid_size, max_generators=args.max_generators,
                threads=args.threads)


def _load(path, args) -> GridDiagram:
    try:
        return read_grid(path, max_size=args.max_grid_size)
    except SizeLimit:
        raise
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    except GridError as exc:
        raise InputError(f"{path}: {exc}") from None


# -- rendering ----------------------------------------------------------------

def summary_line(h: HomologyModule) -> str:
    if h.torsion:
        counts = sorted(Counter(h.torsion_exponents()).items())
        tor = ", ".join(f"F2[u]/u^{k} ×{c}" for k, c in counts)
    else:
        tor = "none"
    line = f"FREE ×{h.free_rank}, TOR: {tor}"
    if h.spec is not Specialization.HAT:
        label = "Ord'" if h.spec is Specialization.EQ else "Ord"
        line += f", {label}={torsion_order(h)}"
    return line


def render_module(h: HomologyModule, name, seconds: float) -> str:
    out = [f"{name or 'grid'} [{h.spec.value}]", summary_line(h)]
    if h.spec is not Specialization.HAT:
        out.append(f"max torsion order {torsion_order(h)}")
    out.append(h.dump().rstrip("\n"))
    out.append(f"time {seconds:.2f}s")
    return "\n".join(line for line in out if line)


def homology_json(h: HomologyModule) -> dict:
    free = [{k: _number(v) for k, v in h.grading_dict(g).items()} for g in h.free]
    torsion = [dict(k=k, **{a: _number(v) for a, v in h.grading_dict(g).items()})
               for g, k in h.torsion]
    return {"free": free, "torsion": torsion}


def bounds_json(g: GridDiagram, threads: int = 1, max_size: int = DEFAULT_MAX_GRID_SIZE,
                max_generators: int = DEFAULT_MAX_GENERATORS) -> dict:
    """Schema-stable report; everything except ``timing_ms`` is deterministic."""
    start = time.perf_counter()
    rep = bnd.bounds_report(g, max_size=max_size, max_generators=max_generators,
                            threads=threads)
    return {
        "name": g.name,
        "n": g.size,
        "components": components(g).component_count,
        "ord_minus": rep.ord_minus,
        "ord_eq": rep.ord_eq,
        "bounds": [{"quantity": b.quantity, "op": b.op, "value": b.value,
                    "provenance": b.provenance} for b in rep.bounds],
        "homology": homology_json(rep.minus_homology),
        "timing_ms": round((time.perf_counter() - start) * 1000),
        "convention": CONVENTION,
    }


def render_bounds(data: dict) -> str:
    lines = [f"{data['name'] or 'grid'}: n={data['n']}, components={data['components']}, "
             f"Ord={data['ord_minus']}, Ord'={data['ord_eq']}"]
    lines += [f"{b['quantity']} {b['op']} {b['value']}" for b in data["bounds"]]
    return "\n".join(lines)


def _dump_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=False)


# -- commands -------------------------------------------------------------------

def cmd_compute(args) -> int:
    g = _load(args.grid, args)
    spec = Specialization.parse(args.spec)
    start = time.perf_counter()
    c = build_complex(g, spec, **_limits(args))
    log.info("%s: %d generators, %d entries", spec.value, c.n_generators, c.n_edges)
    if spec is Specialization.FULL:
        ok = verify_d_squared(c)
        msg = (f"d^2 = 0 verified on {c.n_generators} generators, {c.n_edges} entries"
               if ok else "d^2 != 0: differential check FAILED")
        if args.json:
            print(_dump_json({"name": g.name, "spec": spec.value, "d_squared_zero": ok,
                              "generators": c.n_generators, "entries": c.n_edges,
                              "convention": CONVENTION}))
        else:
            print(msg)
        return EXIT_OK if ok else EXIT_SELFTEST
    h = homology_module(c)
    seconds = time.perf_counter() - start
    if args.json:
        data = {"name": g.name, "n": g.size, "spec": spec.value,
                "free_rank": h.free_rank, "max_torsion_order": torsion_order(h),
                "homology": homology_json(h), "timing_ms": round(seconds * 1000),
                "convention": CONVENTION}
        print(_dump_json(data))
    else:
        print(render_module(h, g.name, seconds))
    return EXIT_OK


def cmd_bounds(args) -> int:
    g = _load(args.grid, args)
    data = bounds_json(g, **_limits(args))
    print(_dump_json(data) if args.json else render_bounds(data))
    return EXIT_OK


def cmd_pair(args) -> int:
    g1, g2 = _load(args.grid1, args), _load(args.grid2, args)
    o1 = bnd.ord_pair(g1, **_limits(args))
    o2 = bnd.ord_pair(g2, **_limits(args))
    d_ot, d_t = bnd.pair_bounds_from_orders(o1, o2)
    if args.json:
        print(_dump_json({"first": {"name": g1.name, "ord_minus": o1[0], "ord_eq": o1[1]},
                          "second": {"name": g2.name, "ord_minus": o2[0], "ord_eq": o2[1]},
                          "bounds": [
                              {"quantity": "d_ot(K1,K2)", "op": ">=", "value": d_ot,
                               "provenance": bnd.PROV_ORIENTED},
                              {"quantity": "d_t(K1,K2)", "op": ">=", "value": d_t,
                               "provenance": bnd.PROV_UNORIENTED}],
                          "convention": CONVENTION}))
    else:
        print(f"d_ot(K1,K2) >= {d_ot}")
        print(f"d_t(K1,K2) >= {d_t}")
    return EXIT_OK


def cmd_torus(args) -> int:
    if args.p < 1 or args.q < 1:
        raise InputError("p and q must be positive")
    g = torus_grid(args.p, args.q, max_size=args.max_grid_size)
    count = components(g).component_count
    if count > 1:
        print(f"warning: T({args.p},{args.q}) has {count} components", file=sys.stderr)
    text = serialize(g)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.bounds:
        data = bounds_json(g, **_limits(args))
        print(_dump_json(data) if args.json else render_bounds(data))
    return EXIT_OK


def cmd_selftest(args) -> int:
    cfg = SelftestConfig(max_grid_size=args.max_grid_size, max_generators=args.max_generators,
                         threads=args.threads, corpus=args.corpus, stretch=args.stretch)
    results = run_selftest(cfg)
    if args.json:
        print(_dump_json([r.__dict__ | {"seconds": round(r.seconds, 3)} for r in results]))
    else:
        print(format_table(results))
    failed = [r for r in results if r.failed]
    print(f"{len(results) - len(failed)} ok, {len(failed)} failed", file=sys.stderr)
    return EXIT_SELFTEST if failed else EXIT_OK


# -- argument parsing -----------------------------------------------------------

def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--max-grid-size", type=_positive, default=DEFAULT_MAX_GRID_SIZE)
    common.add_argument("--max-generators", type=_positive, default=DEFAULT_MAX_GENERATORS)
    common.add_argument("--threads", type=_positive, default=os.cpu_count() or 1,
                        help="threads for complex construction (default: all cores)")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = argparse.ArgumentParser(prog="gridfloer",
                                description="Knot Floer torsion orders from grid diagrams.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", parents=[common], help="homology of one grid")
    c.add_argument("grid")
    c.add_argument("--spec", default="minus", choices=[s.value for s in Specialization])
    c.set_defaults(func=cmd_compute)

    b = sub.add_parser("bounds", parents=[common], help="lower bounds against the unknot")
    b.add_argument("grid")
    b.set_defaults(func=cmd_bounds)

    pr = sub.add_parser("pair", parents=[common], help="lower bounds for a pair of knots")
    pr.add_argument("grid1")
    pr.add_argument("grid2")
    pr.set_defaults(func=cmd_pair)

    t = sub.add_parser("torus", parents=[common], help="write a torus knot grid")
    t.add_argument("p", type=int)
    t.add_argument("q", type=int)
    t.add_argument("-o", "--output")
    t.add_argument("--bounds", action="store_true", help="also print the bounds report")
    t.set_defaults(func=cmd_torus)

    s = sub.add_parser("selftest", parents=[common], help="run the regression suite")
    s.add_argument("--corpus", help="corpus directory (default: $FLOER_CORPUS or bundled)")
    s.add_argument("--stretch", action="store_true", help="also run the n=9 stretch grids")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except SizeLimit as exc:
        print(f"error: resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (InputError, CorpusError, GridError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
