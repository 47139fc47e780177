import math

import pytest

from gridfloer.grid import (GridSyntaxError, NotAPermutation, SharedCell, SizeLimit, TooSmall,
                            components, disjoint_union, mirror, parse, read_grid, serialize,
                            stabilize, swap_markings, torus_grid, unknot_grid, validate)


def test_validate_accepts_2x2_unknot():
    g = validate(2, [1, 0], [0, 1])
    assert g.size == 2 and components(g).component_count == 1


@pytest.mark.parametrize("size,x,o,exc", [
    (1, [0], [0], TooSmall),
    (3, [0, 0, 1], [1, 2, 0], NotAPermutation),
    (3, [0, 1, 3], [1, 2, 0], NotAPermutation),
    (3, [0, 1], [1, 2, 0], NotAPermutation),
    (3, [0, 1, 2], [0, 2, 1], SharedCell),
])
def test_validate_rejects(size, x, o, exc):
    with pytest.raises(exc):
        validate(size, x, o)


def test_shared_cell_reports_column():
    with pytest.raises(SharedCell) as info:
        validate(3, [0, 1, 2], [1, 0, 2])
    assert info.value.column == 2


def test_size_limit():
    with pytest.raises(SizeLimit):
        validate(4, [1, 2, 3, 0], [0, 1, 2, 3], max_size=3)
    with pytest.raises(SizeLimit):
        torus_grid(4, 7)


@pytest.mark.parametrize("p", range(2, 9))
@pytest.mark.parametrize("q", range(2, 9))
def test_torus_components_match_gcd(p, q):
    if p + q > 16:
        pytest.skip("larger than needed")
    g = torus_grid(p, q, max_size=16)
    assert g.size == p + q
    assert components(g).component_count == math.gcd(p, q)


def test_unknot_grids_are_knots():
    for n in (2, 3, 4, 5):
        g = unknot_grid(n)
        assert g.size == n
        assert components(g).component_count == 1


def test_component_labels_cover_markings():
    g = disjoint_union(unknot_grid(2), unknot_grid(3))
    cm = components(g)
    assert cm.component_count == 2
    assert cm.x_component == (0, 0, 1, 1, 1)
    assert cm.o_component == cm.x_component


def test_mirror_and_swap_are_involutions():
    g = torus_grid(2, 5)
    assert mirror(mirror(g)).x_perm == g.x_perm
    assert swap_markings(swap_markings(g)) == g


def test_stabilize_grows_by_one_and_keeps_components():
    g = torus_grid(2, 3)
    for col in range(g.size):
        s = stabilize(g, col)
        assert s.size == g.size + 1
        assert components(s).component_count == 1


def test_round_trip(corpus):
    for path in corpus.glob("*.grid"):
        g = read_grid(path)
        assert parse(serialize(g)) == g
        assert serialize(parse(serialize(g))) == serialize(g)


def test_torus_file_has_four_lines():
    text = serialize(torus_grid(2, 3))
    assert text.splitlines() == ["# T(2,3)", "5", "X 3 4 0 1 2", "O 0 1 2 3 4"]


@pytest.mark.parametrize("text,line", [
    ("3\nX 0 1\nO 1 2 0\n", 2),
    ("three\nX 0 1 2\nO 1 2 0\n", 1),
    ("3\nY 0 1 2\nO 1 2 0\n", 2),
    ("3\nX 0 1 2\nX 0 1 2\n", 3),
    ("3\nX 0 a 2\nO 1 2 0\n", 2),
])
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(GridSyntaxError) as info:
        parse(text)
    assert info.value.line == line


def test_parse_missing_line():
    with pytest.raises(GridSyntaxError):
        parse("3\nX 0 1 2\n")
