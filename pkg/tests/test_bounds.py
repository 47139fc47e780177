import pytest

from gridfloer.bounds import (EmptyCableList, NotCoprime, bounds_report, cable_bound, is_knot,
                              known_value, known_values, ord_pair, pair_bounds,
                              pair_bounds_from_orders, torus_formula, unknot_bounds)
from gridfloer.grid import torus_grid, unknot_grid


def test_unknot_bounds_are_zero():
    rep = bounds_report(unknot_grid(2))
    assert [b.value for b in rep.bounds] == [0, 0, 0, 0, 1]


def test_t34_report():
    rep = bounds_report(torus_grid(3, 4))
    assert rep.lines() == ["d_ot(K,U) >= 2", "d_t(K,U) >= 1", "u(K) >= 2", "u_q(K) >= 2",
                           "br(K) >= 3"]
    assert all(b.provenance for b in rep.bounds)


def test_bound_order_and_values():
    names = [b.quantity for b in unknot_bounds(3, 2)]
    assert names == ["d_ot(K,U)", "d_t(K,U)", "u(K)", "u_q(K)", "br(K)"]
    assert [b.value for b in unknot_bounds(3, 2)] == [3, 2, 3, 3, 4]


def test_pair_bounds():
    assert pair_bounds_from_orders((2, 1), (0, 0)) == (2, 1)
    assert pair_bounds_from_orders((1, 1), (2, 1)) == (1, 0)
    g = torus_grid(2, 3)
    assert pair_bounds(g, g) == (0, 0)
    assert pair_bounds(torus_grid(3, 4), g) == (1, 0)


@pytest.mark.parametrize("args,want", [
    ((1, True, False, [(2, 3)]), (2, 1)),
    ((2, False, True, [(2, 1)]), (5, 1)),
    ((2, True, False, [(3, 2)]), (4, 1)),
    ((3, True, False, [(2, 3), (3, 5)]), (13, 1)),
    ((1, True, False, [(4, 1), (5, 2)]), (20, 4)),
    ((2, False, False, [(3, 2)]), (0, 1)),
])
def test_cable_bound(args, want):
    assert cable_bound(*args) == want


def test_cable_errors():
    with pytest.raises(NotCoprime):
        cable_bound(1, True, False, [(2, 4)])
    with pytest.raises(EmptyCableList):
        cable_bound(1, True, False, [])
    with pytest.raises(ValueError):
        cable_bound(1, True, False, [(0, 1)])
    with pytest.raises(ValueError):
        cable_bound(-1, True, False, [(2, 1)])


@pytest.mark.parametrize("p,q,want", [
    (2, 3, (1, 1)), (2, 7, (1, 1)), (3, 4, (2, 1)), (4, 5, (3, 2)), (3, 5, (2, None)),
    (5, 4, (3, 2)), (3, 7, (2, 1)),
])
def test_torus_formula(p, q, want):
    assert torus_formula(p, q) == want


def test_known_values_table():
    table = {k.name: k for k in known_values()}
    assert table["12n404"].status == "reference-only"
    assert table["12n404"].ord_minus == 2
    assert table["T(3,4)"].status == "computable"
    assert table["T(4,5)"].ord_eq == 2
    assert known_value("T(2,9)").ord_minus == 1
    with pytest.raises(KeyError):
        known_value("9_42")


@pytest.mark.parametrize("p,q", [(2, 3), (2, 5), (3, 4)])
def test_computed_torus_values_match_formula(p, q):
    o, e = torus_formula(p, q)
    assert ord_pair(torus_grid(p, q)) == (o, e)


def test_is_knot():
    assert is_knot(torus_grid(2, 3))
    assert not is_knot(torus_grid(2, 4))
