import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gridfloer.algebra import (HomologyModule, MonomialSparseMatrix, NotAComplex, _divisibility_chain,
                               cancel_reduce, homology_module, invariant_factors, pdivmod, pgcd,
                               pmul, smith_normal_form, snf_pivots, torsion_order)
from gridfloer.complex import FloerComplex, Specialization as S, build_complex
from gridfloer.grid import disjoint_union, mirror, stabilize, swap_markings, torus_grid, unknot_grid
from gridfloer.oracle import minor_invariant_factors


def test_polynomial_arithmetic():
    # (u + 1)^2 = u^2 + 1 over F2
    assert pmul(0b11, 0b11) == 0b101
    assert pdivmod(0b101, 0b11) == (0b11, 0)
    assert pgcd(0b110, 0b1010) == 0b110


@pytest.mark.parametrize("dense,expected", [
    ([[1, 1], [None, 2]], [1, 2]),
    ([[1, None], [None, 3]], [1, 3]),
    ([[None, None], [None, None]], []),
    ([[0, 2], [2, 0]], [0, 0]),
    ([[2, None, None], [None, 1, None]], [1, 2]),
])
def test_smith_normal_form_examples(dense, expected):
    assert smith_normal_form(MonomialSparseMatrix.from_dense(dense)) == expected


def test_invariant_factors_divide():
    f = invariant_factors(MonomialSparseMatrix.from_dense([[3, None], [None, 1]]))
    assert f == [0b10, 0b1000]


def test_negative_exponent_rejected():
    with pytest.raises(ValueError):
        MonomialSparseMatrix((1, 1), {(0, 0): -1})


polys = st.integers(min_value=0, max_value=15)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(polys, min_size=c, max_size=c), min_size=r, max_size=r))))
def test_snf_matches_determinantal_divisors(dense):
    rows = {i: {j: v for j, v in enumerate(row) if v} for i, row in enumerate(dense)}
    got = _divisibility_chain([p for _, _, p in snf_pivots(rows)])
    assert got == minor_invariant_factors(dense)


def _two_step(k):
    # x -> u^k y: homology F2[u]/u^k on y, no free part
    return FloerComplex.from_edges(S.MINUS, [0, 2 * k - 1], [0, -1], [(0, 1, k)])


@pytest.mark.parametrize("k", [0, 1, 3])
def test_cancel_reduce_small(k):
    red = cancel_reduce(_two_step(k))
    assert red.n_generators == (0 if k == 0 else 2)
    h = homology_module(_two_step(k))
    assert h.free_rank == 0
    assert h.torsion_exponents() == ([] if k == 0 else [k])


def test_cancellation_zigzag():
    # a -> c, b -> c + u d: cancelling a-c leaves b -> u d
    m_o, m_x = [0, 0, -1, 1], [0, 0, -1, -1]
    c = FloerComplex.from_edges(S.MINUS, m_o, m_x, [(0, 2, 0), (1, 2, 0), (1, 3, 1)])
    red = cancel_reduce(c)
    assert red.n_generators == 2 and red.n_edges == 1
    assert torsion_order(homology_module(c)) == 1


def test_not_a_complex():
    c = FloerComplex.from_edges(S.MINUS, [0, -1, -2], [0, -1, -2], [(0, 1, 0), (1, 2, 0)])
    with pytest.raises(NotAComplex):
        cancel_reduce(c, check=True)


def test_full_refused():
    with pytest.raises(ValueError):
        homology_module(build_complex(unknot_grid(2), S.FULL))


@pytest.mark.parametrize("spec", [S.MINUS, S.EQ, S.HAT])
def test_backends_agree(spec):
    c = build_complex(torus_grid(3, 4), spec)
    a = cancel_reduce(c, backend="numba")
    b = cancel_reduce(c, backend="python")
    assert a.dump() == b.dump()
    assert np.array_equal(a.m_o, b.m_o)


def test_hat_rank_is_determinant_times_power_of_two():
    h = homology_module(build_complex(torus_grid(2, 3), S.HAT))
    assert h.free_rank == 3 * 16 and not h.torsion


def test_trefoil_module():
    h = homology_module(build_complex(torus_grid(2, 3), S.MINUS))
    assert h.free_rank == 16
    assert h.torsion_exponents() == [1] * 16


def test_canonical_is_sorted():
    h = HomologyModule.canonical(S.EQ, [(2,), (0,)], [((4,), 1), ((0,), 2)])
    assert h.free == ((0,), (2,)) and h.torsion[0] == ((0,), 2)


def _orders(g):
    m = homology_module(build_complex(g, S.MINUS))
    e = homology_module(build_complex(g, S.EQ))
    return torsion_order(m), torsion_order(e), m.free_rank, e.free_rank


def test_invariance_under_moves():
    g = torus_grid(2, 3)
    base = _orders(g)
    for col in range(g.size):
        o, e, fm, fe = _orders(stabilize(g, col))
        # one more stabilization tensors with a rank-2 free module
        assert (o, e, fm, fe) == (base[0], base[1], 2 * base[2], 2 * base[3])
    assert _orders(mirror(g))[:2] == base[:2]
    assert _orders(swap_markings(mirror(g)))[:2] == base[:2]
    assert _orders(disjoint_union(g, unknot_grid(2)))[:2] == base[:2]


def test_unlink_is_free():
    h = homology_module(build_complex(disjoint_union(unknot_grid(2), unknot_grid(2)), S.MINUS))
    assert not h.torsion and h.free_rank == 8
