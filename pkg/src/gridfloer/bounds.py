"""Lower bounds on tangle distances, unknotting numbers and bridge index.

If an oriented tangle replacement on ``n + 1`` strands turns ``K`` into
``K'`` then ``Ord(K) <= n + Ord(K')``; the unoriented version holds with
``Ord'`` in place of ``Ord``.  Comparing against the unknot (torsion-free,
so ``Ord(U) = Ord'(U) = 0``) gives the bounds on ``d_ot(K, U)`` and
``d_t(K, U)``.  ``Ord(K)`` also bounds the unknotting number, the number
of proper rational replacements needed to unknot ``K``, and ``br(K) - 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .algebra import HomologyModule, homology_module, torsion_order
from .complex import (DEFAULT_MAX_GENERATORS, Specialization, build_complex)
from .grid import DEFAULT_MAX_GRID_SIZE, GridDiagram, components

ORD_UNKNOT = 0
ORD_EQ_UNKNOT = 0

PROV_ORIENTED = "oriented tangle replacement bound: d_ot(K,K') + Ord(K') >= Ord(K)"
PROV_UNORIENTED = "tangle replacement bound: d_t(K,K') + Ord'(K') >= Ord'(K)"
PROV_UNKNOTTING = "unknotting number bound: u(K) >= Ord(K)"
PROV_RATIONAL = "proper rational unknotting bound: u_q(K) >= Ord(K)"
PROV_BRIDGE = "bridge index bound: br(K) - 1 >= Ord(K)"


class NotCoprime(ValueError):
    pass


class EmptyCableList(ValueError):
    pass


@dataclass(frozen=True)
class Bound:
    quantity: str
    op: str
    value: int
    provenance: str

    def line(self) -> str:
        return f"{self.quantity} {self.op} {self.value}"


@dataclass(frozen=True)
class BoundsReport:
    name: str | None
    ord_minus: int
    ord_eq: int
    bounds: tuple[Bound, ...]
    minus_homology: HomologyModule | None = field(default=None, compare=False)
    eq_homology: HomologyModule | None = field(default=None, compare=False)

    def lines(self) -> list[str]:
        return [b.line() for b in self.bounds]


def torsion_orders(g: GridDiagram, max_size: int = DEFAULT_MAX_GRID_SIZE,
                   max_generators: int = DEFAULT_MAX_GENERATORS, threads: int = 1):
    """``(Ord, Ord', HFL^-, HFL^=)`` of the link presented by ``g``."""
    minus = homology_module(build_complex(g, Specialization.MINUS, max_size, max_generators, threads))
    eq = homology_module(build_complex(g, Specialization.EQ, max_size, max_generators, threads))
    return torsion_order(minus), torsion_order(eq), minus, eq


def ord_pair(g: GridDiagram, **limits) -> tuple[int, int]:
    ord_minus, ord_eq, _, _ = torsion_orders(g, **limits)
    return ord_minus, ord_eq


def unknot_bounds(ord_minus: int, ord_eq: int) -> tuple[Bound, ...]:
    return (
        Bound("d_ot(K,U)", ">=", ord_minus - ORD_UNKNOT, PROV_ORIENTED),
        Bound("d_t(K,U)", ">=", ord_eq - ORD_EQ_UNKNOT, PROV_UNORIENTED),
        Bound("u(K)", ">=", ord_minus, PROV_UNKNOTTING),
        Bound("u_q(K)", ">=", ord_minus, PROV_RATIONAL),
        Bound("br(K)", ">=", ord_minus + 1, PROV_BRIDGE),
    )


def bounds_report(g: GridDiagram, **limits) -> BoundsReport:
    ord_minus, ord_eq, minus, eq = torsion_orders(g, **limits)
    return BoundsReport(g.name, ord_minus, ord_eq, unknot_bounds(ord_minus, ord_eq), minus, eq)


def pair_bounds_from_orders(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    # applying the replacement inequality in both directions
    return abs(a[0] - b[0]), abs(a[1] - b[1])


def pair_bounds(g1: GridDiagram, g2: GridDiagram, **limits) -> tuple[int, int]:
    """Lower bounds on ``(d_ot(K1, K2), d_t(K1, K2))``."""
    return pair_bounds_from_orders(ord_pair(g1, **limits), ord_pair(g2, **limits))


def cable_bound(ord_k: int, nontrivial: bool, lspace_not_trefoil: bool,
                pairs) -> tuple[int, int]:
    """Lower bounds ``(Ord(L), Ord'(L))`` for the iterated cable ``L = K_{p1,q1;...;pm,qm}``.

    With ``P = p1 * ... * pm``: a nontrivial ``K`` gives
    ``Ord(L) >= max(P * (Ord(K) - 1) + 1, P)``; an L-space knot other than
    the trefoil also gives ``Ord(L) >= P * (Ord(K) + 1) - 1`` and the larger
    bound is returned.  ``Ord'(L) >= floor(p1/2) * ... * floor(pm/2)``.  An
    ``Ord`` bound of 0 means no claim.
    """
    pairs = [tuple(p) for p in pairs]
    if not pairs:
        raise EmptyCableList("cable_bound needs at least one (p, q) pair")
    for p, q in pairs:
        if p < 1 or q < 1:
            raise ValueError(f"cable parameters must be positive, got ({p}, {q})")
        if math.gcd(p, q) != 1:
            raise NotCoprime(f"({p}, {q}) is not a coprime pair")
    if ord_k < 0:
        raise ValueError("Ord(K) must be non-negative")
    prod = math.prod(p for p, _ in pairs)
    ord_bound = 0
    if nontrivial or lspace_not_trefoil:
        ord_bound = max(prod * (ord_k - 1) + 1, prod)
    if lspace_not_trefoil:
        ord_bound = max(ord_bound, prod * (ord_k + 1) - 1)
    eq_bound = math.prod(p // 2 for p, _ in pairs)
    return ord_bound, eq_bound


# -- regression table -------------------------------------------------------

@dataclass(frozen=True)
class KnownValue:
    name: str
    ord_minus: int | None
    ord_eq: int | None
    source: str
    computable: bool
    torus: tuple[int, int] | None = None

    @property
    def status(self) -> str:
        return "computable" if self.computable else "reference-only"


def torus_formula(p: int, q: int) -> tuple[int, int | None]:
    """``Ord(T(p,q)) = min(p,q) - 1``; ``Ord'`` only when ``q = 1 mod p``.

    ``Ord'(T(p, pk+1)) = floor(p/2)``.  For other ``(p, q)`` (after trying
    both orders) ``None`` is returned for ``Ord'``.
    """
    ord_minus = min(p, q) - 1
    ord_eq = None
    for a, b in ((p, q), (q, p)):
        if a >= 2 and b % a == 1:
            ord_eq = a // 2
            break
    return ord_minus, ord_eq


def known_values(max_grid_size: int = DEFAULT_MAX_GRID_SIZE) -> list[KnownValue]:
    out = []
    for p, q in [(2, 3), (2, 5), (2, 7), (3, 4), (3, 5), (4, 5)]:
        o, e = torus_formula(p, q)
        out.append(KnownValue(f"T({p},{q})", o, e, "torus knot formula",
                              p + q <= max_grid_size, (p, q)))
    out.append(KnownValue("12n404", 2, None, "d_ot(K,U) = Ord(K) = 2", False))
    out.append(KnownValue("T(2,3;2,-1)", 2, 1, "cable of the trefoil", False))
    out.append(KnownValue("T(2,3;2,-3)", 2, 1, "cable of the trefoil", False))
    out.append(KnownValue("8_19", 2, None, "knot set A, Ord = 2 (8_19 = T(3,4))", True, (3, 4)))
    out.append(KnownValue("10_124", 2, None, "knot set A, Ord = 2 (10_124 = T(3,5))", True, (3, 5)))
    return out


def known_value(name: str, max_grid_size: int = DEFAULT_MAX_GRID_SIZE) -> KnownValue:
    for entry in known_values(max_grid_size):
        if entry.name == name:
            return entry
    if name.startswith("T(") and name.endswith(")"):
        p, q = (int(v) for v in name[2:-1].split(","))
        o, e = torus_formula(p, q)
        return KnownValue(name, o, e, "torus knot formula", p + q <= max_grid_size, (p, q))
    raise KeyError(name)


def is_knot(g: GridDiagram) -> bool:
    return components(g).component_count == 1
