"""The grid chain complex of a grid diagram over F2[u, v] and its specializations.

Generators are grid states: bijections from columns to rows, read as the
lattice points ``(i, s[i])``.  States are indexed by lexicographic rank, so
all per-state data lives in dense arrays.

The differential counts empty rectangles on the torus.  A rectangle from
``x`` to ``y`` has ``x`` at its lower-left and upper-right corners and ``y``
at the other two; it carries weight ``u^a v^b`` where ``a`` (``b``) is the
number of O (X) markings inside it.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

import numpy as np

from .grid import DEFAULT_MAX_GRID_SIZE, GridDiagram, SizeLimit

DEFAULT_MAX_GENERATORS = 4_000_000


class Specialization(enum.Enum):
    MINUS = "minus"   # v = 0
    EQ = "eq"         # v = u
    HAT = "hat"       # u = v = 0
    FULL = "full"     # bivariate

    @classmethod
    def parse(cls, text: str) -> "Specialization":
        try:
            return cls(text.lower())
        except ValueError:
            raise ValueError(f"unknown specialization {text!r}; "
                             f"choose from {[s.value for s in cls]}") from None


class InternalGradingViolation(RuntimeError):
    pass


@dataclass(frozen=True)
class Grading:
    m_o: int
    m_x: int
    alexander: Fraction
    delta: Fraction


@dataclass(frozen=True)
class GridState:
    perm: tuple[int, ...]
    index: int


# -- permutation indexing ---------------------------------------------------

def _factorials(n: int) -> np.ndarray:
    return np.array([math.factorial(k) for k in range(n + 1)], dtype=np.int64)


def perm_rank(perm) -> int:
    """Lexicographic rank of a permutation of ``0..n-1``."""
    n = len(perm)
    rank = 0
    for i in range(n):
        smaller = sum(1 for j in range(i + 1, n) if perm[j] < perm[i])
        rank += smaller * math.factorial(n - 1 - i)
    return rank


def perm_unrank(rank: int, n: int) -> tuple[int, ...]:
    pool = list(range(n))
    out = []
    for i in range(n):
        f = math.factorial(n - 1 - i)
        k, rank = divmod(rank, f)
        out.append(pool.pop(k))
    return tuple(out)


def lehmer_ranks(states: np.ndarray) -> np.ndarray:
    """Vectorized lexicographic rank of each row of ``states``."""
    _, n = states.shape
    fact = _factorials(n)
    rank = np.zeros(states.shape[0], dtype=np.int64)
    for i in range(n - 1):
        digit = (states[:, i + 1:] < states[:, i:i + 1]).sum(axis=1)
        rank += digit * fact[n - 1 - i]
    return rank


def check_size(n: int, max_size: int = DEFAULT_MAX_GRID_SIZE,
               max_generators: int = DEFAULT_MAX_GENERATORS) -> None:
    if n > max_size:
        raise SizeLimit(f"grid size {n} exceeds the limit {max_size}")
    if math.factorial(n) > max_generators:
        raise SizeLimit(f"{math.factorial(n)} generators exceed the limit {max_generators}")


def enumerate_states(g: GridDiagram, max_size: int = DEFAULT_MAX_GRID_SIZE,
                     max_generators: int = DEFAULT_MAX_GENERATORS) -> np.ndarray:
    """All ``n!`` states as an ``(n!, n)`` array; row ``k`` has rank ``k``."""
    n = g.size
    check_size(n, max_size, max_generators)
    return np.array(list(permutations(range(n))), dtype=np.int8).reshape(-1, n)


# -- gradings -----------------------------------------------------------------

def _maslov_array(states: np.ndarray, marks: tuple[int, ...]) -> np.ndarray:
    # M(x) = J(x,x) - 2J(x,M) + J(M,M) + 1 on the fundamental domain [0,n)^2,
    # with J(P,Q) = (I(P,Q) + I(Q,P)) / 2 and I counting strictly south-west pairs.
    count, n = states.shape
    s = states.astype(np.int16)
    pairs = n * (n - 1) // 2
    inversions = np.zeros(count, dtype=np.int64)
    for i in range(n - 1):
        inversions += (s[:, i + 1:] < s[:, i:i + 1]).sum(axis=1)
    j_xx = pairs - inversions
    cross = np.zeros(count, dtype=np.int64)
    for c, r in enumerate(marks):
        # state point (k, s_k) south-west of the marking (c + 1/2, r + 1/2)
        cross += (s[:, :c + 1] <= r).sum(axis=1)
        # marking south-west of the state point
        cross += (s[:, c + 1:] > r).sum(axis=1)
    j_mm = sum(1 for a in range(n) for b in range(a + 1, n) if marks[a] < marks[b])
    return j_xx - cross + j_mm + 1


def grading_arrays(g: GridDiagram, states: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(m_o, m_x)`` for every state."""
    return _maslov_array(states, g.o_perm), _maslov_array(states, g.x_perm)


def gradings(g: GridDiagram, s) -> Grading:
    perm = s.perm if isinstance(s, GridState) else tuple(s)
    arr = np.array([perm], dtype=np.int8)
    m_o, m_x = (int(v[0]) for v in grading_arrays(g, arr))
    n = g.size
    return Grading(m_o, m_x, Fraction(m_o - m_x - (n - 1), 2), Fraction(m_o + m_x, 2))


# -- rectangles ---------------------------------------------------------------

def empty_rectangles(g: GridDiagram, s) -> list[tuple[GridState, int, int]]:
    """Empty rectangles starting at state ``s``.

    Returns ``(target, a, b)`` triples ordered by (left column, right column),
    where ``a``/``b`` count the O/X markings inside.
    """
    perm = s.perm if isinstance(s, GridState) else tuple(s)
    n = len(perm)
    out = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            width = (j - i) % n
            bottom = perm[i]
            height = (perm[j] - bottom) % n
            if any(0 < (perm[(i + t) % n] - bottom) % n < height for t in range(1, width)):
                continue
            cols = [(i + t) % n for t in range(width)]
            a = sum(1 for c in cols if (g.o_perm[c] - bottom) % n < height)
            b = sum(1 for c in cols if (g.x_perm[c] - bottom) % n < height)
            target = list(perm)
            target[i], target[j] = target[j], target[i]
            target = tuple(target)
            out.append((GridState(target, perm_rank(target)), a, b))
    return out


def _pair_rectangles(g: GridDiagram, states: np.ndarray, ranks: np.ndarray,
                     i: int, j: int, keep_x: bool, keep_o: bool):
    n = g.size
    width = (j - i) % n
    s = states.astype(np.int16)
    bottom = s[:, i]
    height = (s[:, j] - bottom) % n
    empty = np.ones(len(s), dtype=bool)
    for t in range(1, width):
        rel = (s[:, (i + t) % n] - bottom) % n
        empty &= ~((rel > 0) & (rel < height))
    a = np.zeros(len(s), dtype=np.int16)
    b = np.zeros(len(s), dtype=np.int16)
    for t in range(width):
        c = (i + t) % n
        a += (g.o_perm[c] - bottom) % n < height
        b += (g.x_perm[c] - bottom) % n < height
    if not keep_x:
        empty &= b == 0
    if not keep_o:
        empty &= a == 0
    idx = np.nonzero(empty)[0]
    target = states[idx].copy()
    target[:, [i, j]] = target[:, [j, i]]
    return ranks[idx], lehmer_ranks(target), a[idx].astype(np.int8), b[idx].astype(np.int8)


def rectangle_arrays(g: GridDiagram, states: np.ndarray,
                     spec: "Specialization" = None, threads: int = 1):
    """All empty rectangles as parallel arrays ``(src, dst, a, b)``.

    ``spec`` drops rectangles that the specialization kills before they are
    materialized (MINUS needs ``b == 0``, HAT needs ``a == b == 0``).
    """
    n = g.size
    ranks = np.arange(len(states), dtype=np.int64)
    keep_x = spec not in (Specialization.MINUS, Specialization.HAT)
    keep_o = spec is not Specialization.HAT
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]

    def work(pair):
        return _pair_rectangles(g, states, ranks, pair[0], pair[1], keep_x, keep_o)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, pairs))
    else:
        parts = [work(p) for p in pairs]
    src = np.concatenate([p[0] for p in parts])
    dst = np.concatenate([p[1] for p in parts])
    a = np.concatenate([p[2] for p in parts])
    b = np.concatenate([p[3] for p in parts])
    return src, dst, a, b


# -- the complex --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FloerComplex:
    """A free chain complex over F2[u] (or F2[u, v]) with monomial entries.

    Entry ``k`` of the differential maps generator ``src[k]`` to
    ``u^u_exp[k] v^v_exp[k] * dst[k]``.  Edges are sorted by (src, dst) and
    no (src, dst, exponent) triple repeats.
    """

    spec: Specialization
    m_o: np.ndarray
    m_x: np.ndarray
    src: np.ndarray
    dst: np.ndarray
    u_exp: np.ndarray
    v_exp: np.ndarray
    grid_size: int

    @property
    def n_generators(self) -> int:
        return len(self.m_o)

    @property
    def n_edges(self) -> int:
        return len(self.src)

    def alexander2(self) -> np.ndarray:
        """Twice the Alexander grading."""
        return self.m_o - self.m_x - (self.grid_size - 1)

    def delta2(self) -> np.ndarray:
        """Twice the delta grading ``(m_o + m_x) / 2``."""
        return self.m_o + self.m_x

    def grading_keys(self) -> list[tuple[int, ...]]:
        """Per-generator grading used for homology: ``(m_o, 2A)`` or ``(2 delta,)``."""
        if self.spec is Specialization.EQ:
            return [(int(d),) for d in self.delta2()]
        return [(int(m), int(a)) for m, a in zip(self.m_o, self.alexander2())]

    @property
    def u_step(self) -> tuple[int, ...]:
        """Grading shift of multiplication by ``u`` in :meth:`grading_keys` units."""
        return (-2,) if self.spec is Specialization.EQ else (-2, -2)

    @property
    def d_step(self) -> tuple[int, ...]:
        """Degree of the differential in :meth:`grading_keys` units."""
        return (-2,) if self.spec is Specialization.EQ else (-1, 0)

    def exponents(self) -> np.ndarray:
        """The u-exponent of each entry (``u_exp + v_exp`` for FULL)."""
        return self.u_exp + self.v_exp if self.spec is Specialization.FULL else self.u_exp

    def dump(self) -> str:
        """Text dump, one ``x_index y_index u_exp v_exp`` line per entry."""
        rows = sorted(zip(self.src.tolist(), self.dst.tolist(),
                          self.u_exp.tolist(), self.v_exp.tolist()))
        return "".join(f"{x} {y} {a} {b}\n" for x, y, a, b in rows)

    @classmethod
    def from_edges(cls, spec: Specialization, m_o, m_x, edges, grid_size: int = 1,
                   check: bool = True) -> "FloerComplex":
        """Build a complex from ``(src, dst, u_exp[, v_exp])`` tuples.

        Repeated entries cancel in pairs.
        """
        rows = [tuple(e) + (0,) * (4 - len(e)) for e in edges]
        src, dst, ue, ve = (np.array(col, dtype=np.int64) for col in zip(*rows)) \
            if rows else (np.zeros(0, dtype=np.int64),) * 4
        m_o = np.asarray(m_o, dtype=np.int64)
        m_x = np.asarray(m_x, dtype=np.int64)
        src, dst, ue, ve = _reduce_mod2(src, dst, ue, ve, len(m_o))
        c = cls(spec, m_o, m_x, src, dst, ue, ve, grid_size)
        if check:
            _check_homogeneity(c)
        return c


def _reduce_mod2(src, dst, ue, ve, count):
    if len(src) == 0:
        z = np.zeros(0, dtype=np.int64)
        return z, z.copy(), z.copy(), z.copy()
    src = src.astype(np.int64)
    dst = dst.astype(np.int64)
    ue = ue.astype(np.int64)
    ve = ve.astype(np.int64)
    span = int(max(ue.max(), ve.max())) + 1
    key = ((src * count + dst) * span + ue) * span + ve
    uniq, counts = np.unique(key, return_counts=True)
    uniq = uniq[counts % 2 == 1]
    rest, ve = np.divmod(uniq, span)
    rest, ue = np.divmod(rest, span)
    src, dst = np.divmod(rest, count)
    return src, dst, ue, ve


def _check_homogeneity(c: FloerComplex) -> None:
    s, t = c.src, c.dst
    dm_o = c.m_o[s] - c.m_o[t]
    dm_x = c.m_x[s] - c.m_x[t]
    spec = c.spec
    if spec is Specialization.EQ:
        ok = (dm_o + dm_x) == 2 - 2 * c.u_exp
    elif spec is Specialization.FULL:
        ok = (dm_o == 1 - 2 * c.u_exp) & (dm_x == 1 - 2 * c.v_exp)
    elif spec is Specialization.MINUS:
        ok = (dm_o == 1 - 2 * c.u_exp) & (dm_x == 1)
    else:
        ok = (dm_o == 1) & (dm_x == 1) & (c.u_exp == 0)
    if not np.all(ok):
        bad = int(np.nonzero(~ok)[0][0])
        raise InternalGradingViolation(
            f"entry {int(s[bad])}->{int(t[bad])} with exponents "
            f"({int(c.u_exp[bad])}, {int(c.v_exp[bad])}) breaks the grading law")
    if len(c.u_exp) and c.grid_size > 1 and int(c.exponents().max()) > 4 * c.grid_size:
        raise InternalGradingViolation("exponent exceeds 4n")


def build_complex(g: GridDiagram, spec: Specialization,
                  max_size: int = DEFAULT_MAX_GRID_SIZE,
                  max_generators: int = DEFAULT_MAX_GENERATORS,
                  threads: int = 1) -> FloerComplex:
    states = enumerate_states(g, max_size, max_generators)
    m_o, m_x = grading_arrays(g, states)
    src, dst, a, b = rectangle_arrays(g, states, spec, threads)
    # every rectangle individually obeys the Maslov drop laws
    ok = (m_o[src] - m_o[dst] == 1 - 2 * a.astype(np.int64)) & \
         (m_x[src] - m_x[dst] == 1 - 2 * b.astype(np.int64))
    if not np.all(ok):
        raise InternalGradingViolation("rectangle breaks the Maslov drop law")
    zero = np.zeros_like(a)
    if spec is Specialization.MINUS:
        ue, ve = a, zero
    elif spec is Specialization.EQ:
        ue, ve = a.astype(np.int16) + b, zero
    elif spec is Specialization.HAT:
        ue, ve = zero, zero
    else:
        ue, ve = a, b
    src, dst, ue, ve = _reduce_mod2(src, dst, ue, ve, len(states))
    c = FloerComplex(spec, m_o, m_x, src, dst, ue, ve, g.size)
    _check_homogeneity(c)
    return c


def specialize(full: FloerComplex, spec: Specialization) -> FloerComplex:
    """Set ``v = 0``, ``v = u`` or ``u = v = 0`` in a FULL complex."""
    if full.spec is not Specialization.FULL:
        raise ValueError("specialize expects a FULL complex")
    src, dst, ue, ve = full.src, full.dst, full.u_exp, full.v_exp
    if spec is Specialization.FULL:
        return full
    if spec is Specialization.MINUS:
        keep = ve == 0
        new = (src[keep], dst[keep], ue[keep], ve[keep])
    elif spec is Specialization.EQ:
        new = (src, dst, ue + ve, np.zeros_like(ve))
    else:
        keep = (ue == 0) & (ve == 0)
        new = (src[keep], dst[keep], ue[keep], ve[keep])
    new = _reduce_mod2(*new, full.n_generators)
    return FloerComplex(spec, full.m_o, full.m_x, *new, full.grid_size)


def verify_d_squared(c: FloerComplex) -> bool:
    """True iff the differential squares to zero over the coefficient ring."""
    if c.n_edges == 0:
        return True
    order = np.argsort(c.src, kind="stable")
    src, dst = c.src[order], c.dst[order]
    ue, ve = c.u_exp[order], c.v_exp[order]
    start = np.searchsorted(src, np.arange(c.n_generators + 1))
    outdeg = start[dst + 1] - start[dst]
    first = np.repeat(np.arange(len(src)), outdeg)
    if len(first) == 0:
        return True
    offsets = np.arange(len(first)) - np.repeat(np.cumsum(outdeg) - outdeg, outdeg)
    second = start[dst[first]] + offsets
    x, z = src[first], dst[second]
    if c.spec is Specialization.HAT:
        pu, pv = np.zeros_like(x), np.zeros_like(x)
    else:
        pu, pv = ue[first] + ue[second], ve[first] + ve[second]
    span = int(max(pu.max(), pv.max())) + 1
    key = ((x * c.n_generators + z) * span + pu) * span + pv
    _, counts = np.unique(key, return_counts=True)
    return bool(np.all(counts % 2 == 0))
