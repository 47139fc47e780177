import pytest

from gridfloer.algebra import homology_module
from gridfloer.complex import FloerComplex, Specialization as S, build_complex
from gridfloer.grid import SizeLimit, disjoint_union, mirror, torus_grid, unknot_grid
from gridfloer.oracle import (minor_invariant_factors, reference_maslov, truncated_ranks,
                              truncation_oracle)

GRIDS = {
    "unknot": unknot_grid(2),
    "unknot3": unknot_grid(3),
    "unknot4": unknot_grid(4),
    "T(2,3)": torus_grid(2, 3),
    "mirror T(2,3)": mirror(torus_grid(2, 3)),
    "unlink2": disjoint_union(unknot_grid(2), unknot_grid(2)),
}


@pytest.mark.parametrize("name", GRIDS)
@pytest.mark.parametrize("spec", [S.MINUS, S.EQ])
def test_oracle_agrees_with_reduction(name, spec):
    c = build_complex(GRIDS[name], spec)
    assert truncation_oracle(c) == homology_module(c)


def test_oracle_sees_higher_torsion():
    c = FloerComplex.from_edges(S.MINUS, [0, 3], [0, -1], [(0, 1, 2)])
    h = truncation_oracle(c)
    assert h.free == () and h.torsion == (((3, 4), 2),)
    assert h == homology_module(c)


def test_truncated_ranks_u0():
    # modulo u the MINUS differential is the HAT one
    c = build_complex(torus_grid(2, 3), S.MINUS)
    image, kernel = truncated_ranks(c, 1)
    hat = homology_module(build_complex(torus_grid(2, 3), S.HAT))
    assert sum(kernel.values()) - sum(image.values()) == hat.free_rank


def test_oracle_limits():
    c = build_complex(torus_grid(3, 4), S.MINUS)
    with pytest.raises(SizeLimit):
        truncation_oracle(c, max_generators=1000)
    with pytest.raises(ValueError):
        truncation_oracle(build_complex(unknot_grid(2), S.HAT))


def test_reference_maslov_of_marking_state():
    # lower-left corners of the O's: M_O = 1 - n; the other 2x2 state has M_O = 0
    assert reference_maslov((0, 1), (0, 1)) == -1
    assert reference_maslov((1, 0), (0, 1)) == 0


def test_minor_factors():
    assert minor_invariant_factors([[0b10, 0], [0, 0b100]]) == [0b10, 0b100]
    assert minor_invariant_factors([[0, 0], [0, 0]]) == []
