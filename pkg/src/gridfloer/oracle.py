"""Independent cross-checks for the homology pipeline.

Nothing here shares code with cancellation or Smith normal form: the
truncation oracle works with plain F2 linear algebra on ``C / u^m``, the
reference gradings evaluate the point-pair formula with exact fractions,
and the minor oracle computes invariant factors from determinantal
divisors.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from fractions import Fraction
from itertools import combinations, permutations

from .algebra import HomologyModule, pdivmod, pgcd, pmul
from .complex import FloerComplex, Specialization
from .grid import GridDiagram, SizeLimit

ORACLE_MAX_GENERATORS = 10_000


def _add(g, h):
    return tuple(a + b for a, b in zip(g, h))


def _scale(g, k):
    return tuple(a * k for a in g)


def _f2_rank(vectors) -> int:
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
    return len(basis)


def truncated_ranks(c: FloerComplex, m: int):
    """Per-grading ranks of the differential on ``C / u^m`` over F2.

    Returns ``(image, kernel)`` dicts: ``image[g]`` is the rank of the part
    of ``d`` landing in grading ``g`` and ``kernel[g]`` the dimension of the
    cycles in grading ``g``.
    """
    keys = c.grading_keys()
    s, e = c.u_step, c.d_step
    position: dict[tuple, dict[tuple[int, int], int]] = defaultdict(dict)
    for i, key in enumerate(keys):
        for j in range(m):
            slot = position[_add(key, _scale(s, j))]
            slot[(i, j)] = len(slot)
    out = defaultdict(list)
    for x, y, k in zip(c.src.tolist(), c.dst.tolist(), c.exponents().tolist()):
        out[x].append((y, k))
    image: dict = {}
    kernel: dict = {}
    for g, slot in position.items():
        target = position.get(_add(g, e), {})
        vectors = []
        for (i, j) in slot:
            v = 0
            for y, k in out[i]:
                if j + k < m:
                    v ^= 1 << target[(y, j + k)]
            vectors.append(v)
        rank = _f2_rank(vectors)
        kernel[g] = len(slot) - rank
        image[_add(g, e)] = rank
    return image, kernel


def torsion_bound(c: FloerComplex) -> int:
    """Upper bound on any torsion exponent, from the grading spread."""
    first = [k[0] for k in c.grading_keys()]
    if not first:
        return 0
    spread = max(first) - min(first)
    return (spread + abs(c.d_step[0])) // abs(c.u_step[0])


def truncation_oracle(c: FloerComplex, max_generators: int = ORACLE_MAX_GENERATORS,
                      depth: int | None = None) -> HomologyModule:
    """Recover the homology module from graded ranks of ``C / u^m``.

    ``m`` runs from 1 to ``M = 1 + max exponent + margin``, with the margin
    large enough that ``M`` exceeds every possible torsion exponent.  Any
    free complex over F2[u] splits into free generators and pairs
    ``d(y) = u^k z``; in ``C / u^m`` such a pair contributes image in
    gradings ``t + j*s`` for ``k <= j < m`` (``t`` the grading of ``z``,
    ``s`` that of ``u``).  Comparing consecutive ``m`` after shifting by
    ``(m - 1) * s`` isolates the pairs by ``(t, k)``; the kernel counts then
    give the free generators.
    """
    if c.spec not in (Specialization.MINUS, Specialization.EQ):
        raise ValueError("the truncation oracle handles MINUS and EQ complexes")
    if c.n_generators > max_generators:
        raise SizeLimit(f"{c.n_generators} generators exceed the oracle limit {max_generators}")
    s, e = c.u_step, c.d_step
    max_exp = int(c.exponents().max()) if c.n_edges else 0
    big = max(1 + max_exp, torsion_bound(c) + 1) + 1
    if depth is not None:
        big = max(big, depth)
    image = [Counter()]
    kernel = [Counter()]
    for m in range(1, big + 1):
        im, ker = truncated_ranks(c, m)
        image.append(Counter(im))
        kernel.append(Counter(ker))
    gradings = sorted(set(c.grading_keys()))

    def shifted(table, m, g):
        h = _add(g, _scale(s, m - 1))
        return table[m][h] - table[m - 1][h]

    pairs = []   # (t, k), k = 0 included
    for g in gradings:
        prev = 0
        for m in range(1, big + 1):
            cur = shifted(image, m, g)   # pairs at g with k <= m - 1
            pairs.extend([(g, m - 1)] * (cur - prev))
            prev = cur
    at_t = Counter(t for t, _ in pairs)
    y_at = Counter(_add(_add(t, _scale(s, k)), _scale(e, -1)) for t, k in pairs if k >= 1)
    below = Counter(_add(t, _scale(e, -1)) for t, k in pairs if k >= 1)
    free = []
    for g in gradings:
        count = shifted(kernel, big, g) - at_t[g] - y_at[g] + below[g]
        if count < 0:
            raise AssertionError(f"negative free count at grading {g}")
        free.extend([g] * count)
    torsion = [(t, k) for t, k in pairs if k >= 1]
    return HomologyModule.canonical(c.spec, free, torsion)


# -- gradings by direct point counting ---------------------------------------

def _pairs_sw(p, q) -> int:
    return sum(1 for a in p for b in q if a[0] < b[0] and a[1] < b[1])


def reference_maslov(perm, marks) -> int:
    """``M(x) = J(x - M, x - M) + 1`` with ``J`` summed over explicit point pairs."""
    pts = [(Fraction(i), Fraction(r)) for i, r in enumerate(perm)]
    mk = [(Fraction(2 * i + 1, 2), Fraction(2 * r + 1, 2)) for i, r in enumerate(marks)]

    def j(p, q):
        return Fraction(_pairs_sw(p, q) + _pairs_sw(q, p), 2)

    value = j(pts, pts) - 2 * j(pts, mk) + j(mk, mk) + 1
    assert value.denominator == 1
    return int(value)


def reference_gradings(g: GridDiagram, perm) -> tuple[int, int]:
    return reference_maslov(perm, g.o_perm), reference_maslov(perm, g.x_perm)


# -- invariant factors from minors --------------------------------------------

def _det(mat) -> int:
    k = len(mat)
    total = 0
    for perm in permutations(range(k)):
        term = 1
        for i, j in enumerate(perm):
            term = pmul(term, mat[i][j])
            if not term:
                break
        total ^= term
    return total


def minor_invariant_factors(dense) -> list[int]:
    """Invariant factors of a small polynomial matrix via determinantal divisors.

    ``dense`` is a list of rows of F2[u] polynomials (ints).  ``d_k`` is the
    gcd of all ``k x k`` minors and the factors are ``d_k / d_(k-1)``.
    """
    rows = len(dense)
    cols = len(dense[0]) if rows else 0
    factors = []
    prev = 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = pgcd(g, _det([[dense[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        q, rem = pdivmod(g, prev)
        assert rem == 0
        factors.append(q)
        prev = g
    return factors
