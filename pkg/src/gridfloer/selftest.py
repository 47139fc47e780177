"""Regression and property checks behind ``gridfloer selftest``."""
from __future__ import annotations

import json
import os
import random
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import bounds as bnd
from .algebra import homology_module
from .complex import (DEFAULT_MAX_GENERATORS, Specialization, build_complex, specialize,
                      verify_d_squared)
from .grid import DEFAULT_MAX_GRID_SIZE, GridDiagram, GridError, read_grid, validate
from .oracle import truncation_oracle

CORPUS_ENV = "FLOER_CORPUS"


class CorpusError(Exception):
    def __init__(self, path, reason):
        super().__init__(f"{path}: {reason}")
        self.path = path


@dataclass
class CheckResult:
    criterion: str
    name: str
    expected: str
    computed: str
    status: str          # "pass", "FAIL" or "skipped"
    seconds: float = 0.0

    @property
    def failed(self) -> bool:
        return self.status == "FAIL"


@dataclass
class CorpusEntry:
    name: str
    kind: str
    tier: str
    ord_minus: int | None
    ord_eq: int | None
    grid: GridDiagram | None
    path: Path | None = None
    note: str | None = None


@dataclass
class SelftestConfig:
    max_grid_size: int = DEFAULT_MAX_GRID_SIZE
    max_generators: int = DEFAULT_MAX_GENERATORS
    threads: int = 1
    corpus: Path | None = None
    stretch: bool = False
    random_grids: int = 50
    seed: int = 20241016
    results: list = field(default_factory=list)


def corpus_dir(override=None) -> Path:
    if override:
        return Path(override)
    if os.environ.get(CORPUS_ENV):
        return Path(os.environ[CORPUS_ENV])
    return Path(str(resources.files("gridfloer") / "corpus"))


def load_corpus(directory=None) -> list[CorpusEntry]:
    """Read ``manifest.json`` and every grid it names.

    Raises :class:`CorpusError` naming the offending file.
    """
    root = corpus_dir(directory)
    manifest = root / "manifest.json"
    try:
        data = json.loads(manifest.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise CorpusError(manifest, exc) from None
    entries = []
    for item in data["entries"]:
        path = root / item["file"] if item.get("file") else None
        grid = None
        if path is not None:
            try:
                grid = read_grid(path)
            except (OSError, GridError) as exc:
                raise CorpusError(path, exc) from None
        name = item.get("name") or (grid.name if grid and grid.name else path.stem)
        entries.append(CorpusEntry(name, item["kind"], item["tier"], item.get("ord_minus"),
                                   item.get("ord_eq"), grid, path, item.get("note")))
    return entries


def random_grid(rng: random.Random, n: int) -> GridDiagram:
    while True:
        x = list(range(n))
        o = list(range(n))
        rng.shuffle(x)
        rng.shuffle(o)
        if all(a != b for a, b in zip(x, o)):
            return validate(n, x, o)


def _fmt(pair) -> str:
    return "(" + ", ".join("-" if v is None else str(v) for v in pair) + ")"


def _record(cfg, criterion, name, expected, computed, ok, start, skipped=False):
    status = "skipped" if skipped else ("pass" if ok else "FAIL")
    cfg.results.append(CheckResult(criterion, name, expected, computed, status,
                                   time.perf_counter() - start))


def _limits(cfg):
    return dict(max_size=cfg.max_grid_size, max_generators=cfg.max_generators,
                threads=cfg.threads)


def check_torus(cfg, entries, tier, criterion):
    for e in entries:
        if e.kind != "torus" or e.tier != tier:
            continue
        start = time.perf_counter()
        expected = _fmt((e.ord_minus, e.ord_eq))
        if e.grid.size > cfg.max_grid_size or (tier == "stretch" and not cfg.stretch):
            _record(cfg, criterion, e.name, expected, "-", True, start, skipped=True)
            continue
        got = bnd.ord_pair(e.grid, **_limits(cfg))
        ok = got[0] == e.ord_minus and (e.ord_eq is None or got[1] == e.ord_eq)
        _record(cfg, criterion, e.name, expected, _fmt(got), ok, start)


def check_unknots(cfg, entries):
    reference = None
    for e in entries:
        if e.kind != "unknot":
            continue
        start = time.perf_counter()
        if e.grid.size > cfg.max_grid_size:
            _record(cfg, "3", e.name, "(0, 0)", "-", True, start, skipped=True)
            continue
        o, q, minus, eq = bnd.torsion_orders(e.grid, **_limits(cfg))
        torsion = (minus.torsion, eq.torsion)
        same = reference is None or torsion == reference
        reference = reference or torsion
        _record(cfg, "3", e.name, "(0, 0)", _fmt((o, q)), (o, q) == (0, 0) and same, start)


def _power_of_two(v: int) -> bool:
    return v > 0 and v & (v - 1) == 0


def check_unlinks(cfg, entries):
    for e in entries:
        if e.kind != "unlink":
            continue
        start = time.perf_counter()
        if e.grid.size > cfg.max_grid_size:
            _record(cfg, "4", e.name, "free 2^k", "-", True, start, skipped=True)
            continue
        h = homology_module(build_complex(e.grid, Specialization.MINUS, **_limits(cfg)))
        ok = not h.torsion and _power_of_two(h.free_rank)
        _record(cfg, "4", e.name, "torsion-free, rank 2^k",
                f"rank {h.free_rank}, {len(h.torsion)} torsion", ok, start)


def complex_properties(c_full, g) -> list[str]:
    """Problems found in a FULL complex and its specializations (empty if none)."""
    problems = []
    if not verify_d_squared(c_full):
        problems.append("d^2 != 0 (full)")
    for spec in (Specialization.MINUS, Specialization.EQ, Specialization.HAT):
        direct = build_complex(g, spec)
        if not verify_d_squared(direct):
            problems.append(f"d^2 != 0 ({spec.value})")
        derived = specialize(c_full, spec)
        if not (np.array_equal(direct.src, derived.src) and np.array_equal(direct.dst, derived.dst)
                and np.array_equal(direct.u_exp, derived.u_exp)):
            problems.append(f"{spec.value} differs from the specialized FULL complex")
    return problems


def check_properties(cfg):
    start = time.perf_counter()
    rng = random.Random(cfg.seed)
    bad = []
    for k in range(cfg.random_grids):
        n = rng.randint(2, min(6, cfg.max_grid_size))
        g = random_grid(rng, n)
        # build_complex raises if any entry breaks the grading laws
        full = build_complex(g, Specialization.FULL)
        bad.extend(f"grid {k}: {p}" for p in complex_properties(full, g))
    _record(cfg, "5", f"{cfg.random_grids} random grids n<=6", "0 failures",
            f"{len(bad)} failures" + (f" ({bad[0]})" if bad else ""), not bad, start)


def check_oracle(cfg, entries):
    for e in entries:
        if e.grid is None or e.grid.size > min(5, cfg.max_grid_size):
            continue
        for spec in (Specialization.MINUS, Specialization.EQ):
            start = time.perf_counter()
            c = build_complex(e.grid, spec)
            ok = homology_module(c) == truncation_oracle(c)
            _record(cfg, "6", f"{e.name} {spec.value}", "equal", "equal" if ok else "differ",
                    ok, start)


def check_bounds(cfg, entries):
    start = time.perf_counter()
    t34 = next(e.grid for e in entries if e.name == "T(3,4)")
    unknot = next(e.grid for e in entries if e.name == "unknot")
    if t34.size > cfg.max_grid_size:
        _record(cfg, "7", "bounds T(3,4)", "-", "-", True, start, skipped=True)
        return
    want = ["d_ot(K,U) >= 2", "d_t(K,U) >= 1", "u(K) >= 2", "u_q(K) >= 2", "br(K) >= 3"]
    got = bnd.bounds_report(t34, **_limits(cfg)).lines()
    _record(cfg, "7", "bounds T(3,4)", "; ".join(want), "; ".join(got), got == want, start)
    start = time.perf_counter()
    pb = bnd.pair_bounds(t34, unknot, **_limits(cfg))
    _record(cfg, "7", "pair T(3,4), unknot", "(2, 1)", _fmt(pb), pb == (2, 1), start)


CABLE_CASES = [
    ((1, True, False, [(2, 3)]), (2, 1)),
    ((2, False, True, [(2, 1)]), (5, 1)),
    ((2, True, False, [(3, 2)]), (4, 1)),
    ((3, True, False, [(2, 3), (3, 5)]), (13, 1)),
    ((1, True, False, [(4, 1), (5, 2)]), (20, 4)),
]


def check_cables(cfg):
    for args, want in CABLE_CASES:
        start = time.perf_counter()
        got = bnd.cable_bound(*args)
        _record(cfg, "8", f"cable ord={args[0]} {args[3]}", _fmt(want), _fmt(got),
                got == want, start)


def check_determinism(cfg, entries):
    from .cli import bounds_json
    start = time.perf_counter()
    t34 = next(e.grid for e in entries if e.name == "T(3,4)")
    if t34.size > cfg.max_grid_size:
        _record(cfg, "9", "T(3,4) json", "-", "-", True, start, skipped=True)
        return
    a = bounds_json(t34, threads=1, max_size=cfg.max_grid_size, max_generators=cfg.max_generators)
    b = bounds_json(t34, threads=4, max_size=cfg.max_grid_size, max_generators=cfg.max_generators)
    a.pop("timing_ms")
    b.pop("timing_ms")
    same = json.dumps(a) == json.dumps(b)
    _record(cfg, "9", "T(3,4) json threads 1 vs 4", "identical",
            "identical" if same else "differ", same, start)


def run_selftest(cfg: SelftestConfig) -> list[CheckResult]:
    entries = load_corpus(cfg.corpus)
    check_torus(cfg, entries, "required", "1")
    check_torus(cfg, entries, "stretch", "2")
    check_unknots(cfg, entries)
    check_unlinks(cfg, entries)
    check_properties(cfg)
    check_oracle(cfg, entries)
    check_bounds(cfg, entries)
    check_cables(cfg)
    check_determinism(cfg, entries)
    return cfg.results


def format_table(results) -> str:
    head = ("crit", "check", "expected", "computed", "status", "s")
    rows = [head] + [(r.criterion, r.name, r.expected, r.computed, r.status, f"{r.seconds:.2f}")
                     for r in results]
    widths = [max(len(row[i]) for row in rows) for i in range(len(head))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
                     for row in rows)
