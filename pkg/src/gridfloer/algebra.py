"""Homology of grid complexes as graded modules over F2[u].

Polynomials over F2 are Python ints read as bit vectors: bit ``i`` is the
coefficient of ``u^i``, so ``u^k`` is ``1 << k``.

Homology is computed in two stages.  Gaussian cancellation first removes
every pair of generators joined by a unit entry.  The residual complex is
much smaller and has all entries divisible by ``u``; Smith normal form of
its differential then gives the torsion summands ``F2[u]/u^k`` and the
graded free part.
"""
from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .complex import FloerComplex, InternalGradingViolation, Specialization


class NotAComplex(ValueError):
    pass


# -- F2[u] arithmetic -------------------------------------------------------

def pdeg(a: int) -> int:
    """Degree of ``a``; the zero polynomial has degree -1."""
    return a.bit_length() - 1


def pmul(a: int, b: int) -> int:
    if a & (a - 1) == 0 and a:
        return b << (a.bit_length() - 1)
    if b & (b - 1) == 0 and b:
        return a << (b.bit_length() - 1)
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def pdivmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    db = pdeg(b)
    q = 0
    while a and pdeg(a) >= db:
        shift = pdeg(a) - db
        q |= 1 << shift
        a ^= b << shift
    return q, a


def pgcd(a: int, b: int) -> int:
    while b:
        a, b = b, pdivmod(a, b)[1]
    return a


def valuation(a: int) -> int:
    """Largest ``k`` with ``u^k`` dividing ``a`` (``a`` nonzero)."""
    if a == 0:
        raise ValueError("valuation of zero")
    return (a & -a).bit_length() - 1


def pformat(a: int) -> str:
    if a == 0:
        return "0"
    terms = []
    for i in range(pdeg(a), -1, -1):
        if a >> i & 1:
            terms.append("1" if i == 0 else "u" if i == 1 else f"u^{i}")
    return " + ".join(terms)


# -- sparse matrices ----------------------------------------------------------

@dataclass
class MonomialSparseMatrix:
    """Sparse matrix with entries ``u^k`` (coefficient 1 over F2).

    ``entries`` maps ``(row, col)`` to the exponent ``k``.
    """

    shape: tuple[int, int]
    entries: dict[tuple[int, int], int] = field(default_factory=dict)
    row_gradings: list | None = None
    col_gradings: list | None = None

    def __post_init__(self):
        rows, cols = self.shape
        for (r, c), k in self.entries.items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside shape {self.shape}")
            if k < 0:
                raise ValueError(f"negative exponent at ({r}, {c})")

    @classmethod
    def from_dense(cls, rows) -> "MonomialSparseMatrix":
        """``rows`` holds exponents, with ``None`` for zero entries."""
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        entries = {(i, j): k for i, r in enumerate(rows) for j, k in enumerate(r) if k is not None}
        return cls((len(rows), ncols), entries)

    def poly_rows(self) -> dict[int, dict[int, int]]:
        out: dict[int, dict[int, int]] = {}
        for (r, c), k in self.entries.items():
            out.setdefault(r, {})[c] = 1 << k
        return out


def snf_pivots(rows: dict[int, dict[int, int]]) -> list[tuple[int, int, int]]:
    """Diagonalize a sparse polynomial matrix by Euclidean elimination.

    ``rows`` maps row -> {col: polynomial} and is consumed.  Returns the
    pivots ``(row, col, polynomial)`` in elimination order.  Each pivot is
    an entry of least degree (ties: lowest column, then row); the rest of
    its column is cleared with row operations and the rest of its row with
    column operations, re-pivoting whenever a nonzero remainder appears.
    """
    cols: dict[int, set[int]] = {}
    for r, row in rows.items():
        for c in row:
            cols.setdefault(c, set()).add(r)
    rows = {r: row for r, row in rows.items() if row}

    heap = [(pdeg(v), c, r) for r, row in rows.items() for c, v in row.items()]
    heapq.heapify(heap)

    def set_entry(r, c, val):
        row = rows.setdefault(r, {})
        if val:
            if row.get(c) != val:
                heapq.heappush(heap, (pdeg(val), c, r))
            row[c] = val
            cols.setdefault(c, set()).add(r)
        else:
            row.pop(c, None)
            s = cols.get(c)
            if s is not None:
                s.discard(r)
                if not s:
                    del cols[c]
            if not row:
                del rows[r]

    pivots = []
    while rows:
        while True:
            deg, c, r = heapq.heappop(heap)
            v = rows.get(r, {}).get(c)
            if v is not None and pdeg(v) == deg:
                break
        while True:
            p = rows[r][c]
            smaller = None
            for r2 in sorted(cols[c] - {r}):
                q, rem = pdivmod(rows[r2][c], p)
                for c2, v in list(rows[r].items()):
                    set_entry(r2, c2, rows.get(r2, {}).get(c2, 0) ^ pmul(q, v))
                set_entry(r2, c, rem)
                if rem and (smaller is None or pdeg(rem) < pdeg(smaller[0])):
                    smaller = (rem, r2, c)
            if smaller is None:
                for c2 in sorted(set(rows[r]) - {c}):
                    q, rem = pdivmod(rows[r][c2], p)
                    for r3 in list(cols[c]):
                        set_entry(r3, c2, rows.get(r3, {}).get(c2, 0) ^ pmul(q, rows[r3][c]))
                    if rem and (smaller is None or pdeg(rem) < pdeg(smaller[0])):
                        smaller = (rem, r, c2)
            if smaller is None:
                break
            _, r, c = smaller
        pivots.append((r, c, p))
        set_entry(r, c, 0)
    return pivots


def _divisibility_chain(diag: list[int]) -> list[int]:
    d = sorted(diag, key=lambda v: (pdeg(v), v))
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = pgcd(d[i], d[j])
            if g != d[i]:
                lcm = pdivmod(pmul(d[i], d[j]), g)[0]
                d[i], d[j] = g, lcm
    return d


def invariant_factors(m: MonomialSparseMatrix) -> list[int]:
    """Invariant factors as polynomials, each dividing the next."""
    return _divisibility_chain([p for _, _, p in snf_pivots(m.poly_rows())])


def smith_normal_form(m: MonomialSparseMatrix) -> list[int]:
    """Exponents ``k_1 <= k_2 <= ...`` of the invariant factors ``u^{k_i}``.

    For matrices whose invariant factors are not pure powers of ``u`` the
    ``u``-adic valuation of each factor is reported.
    """
    return [valuation(f) for f in invariant_factors(m)]


# -- cancellation -------------------------------------------------------------

def _levels(c: FloerComplex) -> tuple[np.ndarray, int]:
    # Edge exponents are implied by the first grading coordinate, so entries are
    # plain F2 incidences.  An entry x -> y is a unit iff level[y] == level[x] + step.
    if c.spec is Specialization.EQ:
        return c.delta2(), -2
    if c.spec is Specialization.FULL:
        raise ValueError("FULL complexes are check-only and cannot be reduced")
    return c.m_o, -1


def _adjacency(count: int, src: np.ndarray, dst: np.ndarray) -> list[set]:
    order = np.argsort(src, kind="stable")
    s, d = src[order], dst[order]
    bounds = np.searchsorted(s, np.arange(count + 1)).tolist()
    flat = d.tolist()
    return [set(flat[bounds[i]:bounds[i + 1]]) for i in range(count)]


def _cancel_units(count: int, src: np.ndarray, dst: np.ndarray,
                  level: np.ndarray, step: int) -> tuple[np.ndarray, list[set]]:
    out = _adjacency(count, src, dst)
    inc = _adjacency(count, dst, src)
    lvl = level.tolist()
    alive = np.ones(count, dtype=bool)
    # Dead generators are dropped lazily: neighbour sets may still mention
    # them, so every read subtracts ``dead``.
    dead: set[int] = set()
    unit_src = np.unique(src[level[dst] == level[src] + step])
    heap = [(lvl[x], x) for x in unit_src.tolist()]
    heapq.heapify(heap)
    while heap:
        _, x = heapq.heappop(heap)
        if not alive[x]:
            continue
        want = lvl[x] + step
        units = [t for t in out[x] if lvl[t] == want and t not in dead]
        if not units:
            continue
        y = min(units)
        tail = out[x] - dead
        tail.discard(y)
        preds = inc[y] - dead
        preds.discard(x)
        # d'(z) = d(z) + d(x) - y for every z hitting y (all coefficients are monomials)
        for z in preds:
            out[z] ^= tail
        for t in tail:
            inc[t] ^= preds
        tail_levels = {lvl[t] for t in tail}
        for z in preds:
            if lvl[z] + step in tail_levels:
                heapq.heappush(heap, (lvl[z], z))
        for v in (x, y):
            dead.add(v)
            alive[v] = False
            out[v] = inc[v] = None
    for v in range(count):
        if alive[v]:
            out[v] -= dead
    return alive, out


def _python_cancel(count, src, dst, level, step):
    alive, out = _cancel_units(count, src, dst, level, step)
    rs, rd = [], []
    for x in np.nonzero(alive)[0].tolist():
        for y in sorted(out[x]):
            rs.append(x)
            rd.append(y)
    return alive, np.array(rs, dtype=np.int64), np.array(rd, dtype=np.int64)


def _pick_backend(backend: str):
    if backend == "python":
        return _python_cancel
    try:
        from .fastcancel import cancel_units
    except ImportError:
        if backend == "numba":
            raise
        return _python_cancel
    return cancel_units


def cancel_reduce(c: FloerComplex, check: bool = False, backend: str = "auto") -> FloerComplex:
    """Cancel unit entries until none remain.

    Pivots are taken from the lowest grading level first (Maslov grading
    for MINUS/HAT, delta for EQ), then lowest source index, then lowest
    target index; working upwards through the gradings keeps fill-in small.
    The result is chain homotopy equivalent to ``c`` and every remaining
    entry is divisible by ``u``.  FULL complexes are bivariate and are not
    reduced here.  ``backend`` is "auto" (compiled kernel when numba is
    importable), "numba" or "python"; both give identical results.
    """
    level, step = _levels(c)
    if check:
        from .complex import verify_d_squared
        if not verify_d_squared(c):
            raise NotAComplex("differential does not square to zero")
    alive, src, dst = _pick_backend(backend)(c.n_generators, c.src, c.dst, level, step)
    keep = np.nonzero(alive)[0]
    new_index = -np.ones(c.n_generators, dtype=np.int64)
    new_index[keep] = np.arange(len(keep))
    exps = (level[dst] - level[src] - step) // 2
    if len(exps) and exps.min() < 1:
        raise InternalGradingViolation("unit entry survived cancellation")
    zero = np.zeros_like(exps)
    return FloerComplex(c.spec, c.m_o[keep], c.m_x[keep], new_index[src], new_index[dst],
                        exps if c.spec is not Specialization.HAT else zero, zero, c.grid_size)


# -- homology -------------------------------------------------------------------

def _half(v: int) -> int | Fraction:
    return v // 2 if v % 2 == 0 else Fraction(v, 2)


@dataclass(frozen=True)
class HomologyModule:
    """Graded ``F2[u]``-module: free summands plus torsion ``F2[u]/u^k``.

    Gradings are stored as doubled-integer keys: ``(m_o, 2A)`` for MINUS and
    HAT, ``(2 delta,)`` for EQ.  ``free`` holds one key per summand and
    ``torsion`` holds ``(key, k)`` pairs; both are sorted.  For HAT the
    free summands are copies of F2.
    """

    spec: Specialization
    free: tuple[tuple[int, ...], ...]
    torsion: tuple[tuple[tuple[int, ...], int], ...]

    @classmethod
    def canonical(cls, spec, free, torsion) -> "HomologyModule":
        return cls(spec, tuple(sorted(tuple(f) for f in free)),
                   tuple(sorted((tuple(g), int(k)) for g, k in torsion)))

    @property
    def free_rank(self) -> int:
        return len(self.free)

    def torsion_exponents(self) -> list[int]:
        return sorted(k for _, k in self.torsion)

    def grading_dict(self, key) -> dict:
        if self.spec is Specialization.EQ:
            return {"delta": _half(key[0])}
        return {"m": key[0], "a": _half(key[1])}

    def dump(self) -> str:
        lines = []
        for key in self.free:
            lines.append("FREE " + _fmt_grading(self.grading_dict(key)))
        for key, k in self.torsion:
            lines.append(f"TOR k={k} " + _fmt_grading(self.grading_dict(key)))
        return "".join(line + "\n" for line in lines)


def _fmt_value(v) -> str:
    if isinstance(v, Fraction):
        return f"{float(v):g}"
    return str(v)


def _fmt_grading(d: dict) -> str:
    return " ".join(f"{k}={_fmt_value(v)}" for k, v in d.items())


def _components(count: int, src, dst) -> list[list[int]]:
    parent = list(range(count))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in zip(src, dst):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for i in range(count):
        groups.setdefault(find(i), []).append(i)
    return [g for g in groups.values() if len(g) > 1]


def homology_module(c: FloerComplex, check: bool = False) -> HomologyModule:
    """Homology of a MINUS, EQ or HAT complex in normal form."""
    if c.spec is Specialization.FULL:
        raise ValueError("FULL complexes are check-only; homology is not a PID module")
    red = cancel_reduce(c, check=check)
    keys = red.grading_keys()
    src, dst = red.src.tolist(), red.dst.tolist()
    exps = red.exponents().tolist()
    if c.spec is Specialization.HAT:
        if src:
            raise InternalGradingViolation("HAT complex kept an entry after cancellation")
        return HomologyModule.canonical(c.spec, keys, [])
    by_source: dict[int, dict[int, int]] = {}
    for x, y, k in zip(src, dst, exps):
        by_source.setdefault(x, {})[y] = 1 << k
    torsion = []
    pivot_cols: set[int] = set()
    pivot_rows: list[int] = []
    for block in _components(red.n_generators, src, dst):
        rows: dict[int, dict[int, int]] = {}
        for x in block:
            for y, p in by_source.get(x, {}).items():
                rows.setdefault(y, {})[x] = p
        for r, col, p in snf_pivots(rows):
            k = valuation(p)
            if p != 1 << k or k == 0:
                raise InternalGradingViolation(f"unexpected invariant factor {pformat(p)}")
            torsion.append((keys[r], k))
            pivot_cols.add(col)
            pivot_rows.append(r)
    kernel = Counter(keys[i] for i in range(red.n_generators) if i not in pivot_cols)
    image = Counter(keys[r] for r in pivot_rows)
    if any(kernel[g] < cnt for g, cnt in image.items()):
        raise InternalGradingViolation("saturated image is not graded inside the kernel")
    free = list((kernel - image).elements())
    return HomologyModule.canonical(c.spec, free, torsion)


def torsion_order(h: HomologyModule) -> int:
    """Largest ``k`` among the torsion summands, 0 if there are none."""
    return max((k for _, k in h.torsion), default=0)
