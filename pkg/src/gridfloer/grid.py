"""Grid diagrams of oriented links.

Conventions (``grid-standard-v1``): columns are numbered 0..n-1 left to
right and rows 0..n-1 bottom to top.  ``x_perm[i]`` is the row of the X
marking in column ``i`` and ``o_perm[i]`` the row of the O marking.  A
marking in column ``c``, row ``r`` sits at the centre ``(c + 1/2, r + 1/2)``
of its cell.  O markings play the role of the ``w`` basepoints and X
markings the ``z`` basepoints; the link is oriented from X to O within a
column and from O to X within a row.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

DEFAULT_MAX_GRID_SIZE = 10


class GridError(ValueError):
    """Base class for invalid grid input."""


class TooSmall(GridError):
    pass


class NotAPermutation(GridError):
    pass


class SharedCell(GridError):
    def __init__(self, column: int):
        super().__init__(f"column {column} carries both an X and an O marking")
        self.column = column


class SizeLimit(GridError):
    pass


class GridSyntaxError(GridError):
    def __init__(self, message: str, line: int | None = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line


@dataclass(frozen=True)
class GridDiagram:
    x_perm: tuple[int, ...]
    o_perm: tuple[int, ...]
    name: str | None = field(default=None, compare=False)

    @property
    def size(self) -> int:
        return len(self.x_perm)

    n = size

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<GridDiagram{label} n={self.size} X={list(self.x_perm)} O={list(self.o_perm)}>"


@dataclass(frozen=True)
class ComponentMap:
    """Components of the link, keyed by marking.

    ``o_component[i]`` is the component through the O marking of column
    ``i`` and ``x_component[i]`` likewise for the X marking.
    """

    component_count: int
    o_component: tuple[int, ...]
    x_component: tuple[int, ...]


def _check_perm(values, n: int, label: str) -> tuple[int, ...]:
    out = []
    for v in values:
        if isinstance(v, bool) or int(v) != v:
            raise NotAPermutation(f"{label}: entry {v!r} is not an integer")
        out.append(int(v))
    seen = set()
    for i, v in enumerate(out):
        if not 0 <= v < n:
            raise NotAPermutation(f"{label}: row {v} in column {i} is out of range 0..{n - 1}")
        if v in seen:
            raise NotAPermutation(f"{label}: row {v} is used twice")
        seen.add(v)
    return tuple(out)


def validate(size: int, x, o, name: str | None = None, max_size: int | None = None) -> GridDiagram:
    """Check raw marking data and return a :class:`GridDiagram`."""
    x = list(x)
    o = list(o)
    if len(x) != size or len(o) != size:
        raise NotAPermutation(
            f"expected {size} entries per marking line, got X:{len(x)} O:{len(o)}")
    if size < 2:
        raise TooSmall(f"grid size must be at least 2, got {size}")
    if max_size is not None and size > max_size:
        raise SizeLimit(f"grid size {size} exceeds the limit {max_size}")
    xs = _check_perm(x, size, "X")
    os_ = _check_perm(o, size, "O")
    for i in range(size):
        if xs[i] == os_[i]:
            raise SharedCell(i)
    return GridDiagram(xs, os_, name)


def components(g: GridDiagram) -> ComponentMap:
    """Split the markings of ``g`` into link components.

    Starting from the X in column ``i`` we walk to the O in the same column,
    then along that O's row to the X there.  Components are numbered in
    order of the smallest column whose X they contain.
    """
    n = g.size
    x_in_row = [0] * n
    for col, row in enumerate(g.x_perm):
        x_in_row[row] = col
    x_comp = [-1] * n
    o_comp = [-1] * n
    count = 0
    for start in range(n):
        if x_comp[start] >= 0:
            continue
        col = start
        while x_comp[col] < 0:
            x_comp[col] = count
            o_comp[col] = count
            col = x_in_row[g.o_perm[col]]
        count += 1
    assert all(c >= 0 for c in x_comp) and all(c >= 0 for c in o_comp)
    return ComponentMap(count, tuple(o_comp), tuple(x_comp))


def torus_grid(p: int, q: int, max_size: int = DEFAULT_MAX_GRID_SIZE) -> GridDiagram:
    """Grid of size ``p + q`` for the ``(p, q)`` torus link.

    O markings run down the diagonal and each X is shifted ``q`` rows above
    its O (cyclically), so the component count is ``gcd(p, q)``.
    """
    if p < 2 or q < 2:
        raise GridError(f"torus_grid needs p, q >= 2, got ({p}, {q})")
    n = p + q
    if n > max_size:
        raise SizeLimit(f"torus grid T({p},{q}) needs size {n} > limit {max_size}")
    o = tuple(range(n))
    x = tuple((i + q) % n for i in range(n))
    return GridDiagram(x, o, f"T({p},{q})")


def unknot_grid(n: int = 2) -> GridDiagram:
    """A size ``n`` unknot: the 2x2 unknot stabilized ``n - 2`` times."""
    g = GridDiagram((1, 0), (0, 1), "unknot")
    for _ in range(n - 2):
        g = stabilize(g, 0)
    return GridDiagram(g.x_perm, g.o_perm, f"unknot{n}" if n > 2 else "unknot")


def mirror(g: GridDiagram) -> GridDiagram:
    n = g.size
    return GridDiagram(
        tuple(n - 1 - r for r in g.x_perm),
        tuple(n - 1 - r for r in g.o_perm),
        f"mirror({g.name})" if g.name else None,
    )


def swap_markings(g: GridDiagram) -> GridDiagram:
    """Exchange X and O markings (reverses the orientation of every component)."""
    return GridDiagram(g.o_perm, g.x_perm, g.name)


def disjoint_union(g1: GridDiagram, g2: GridDiagram,
                   max_size: int | None = None) -> GridDiagram:
    n1 = g1.size
    if max_size is not None and n1 + g2.size > max_size:
        raise SizeLimit(f"union size {n1 + g2.size} exceeds the limit {max_size}")
    name = f"{g1.name}+{g2.name}" if g1.name and g2.name else None
    return GridDiagram(
        g1.x_perm + tuple(r + n1 for r in g2.x_perm),
        g1.o_perm + tuple(r + n1 for r in g2.o_perm),
        name,
    )


def stabilize(g: GridDiagram, column: int) -> GridDiagram:
    """Stabilize at the X marking of ``column``.

    With ``r`` the row of that X, a new column ``column + 1`` and a new row
    ``r + 1`` are inserted (later columns and higher rows shift by one).  The
    old O of ``column`` stays put; the 2x2 block on columns
    ``column, column + 1`` and rows ``r, r + 1`` then holds X at
    ``(column, r + 1)``, X at ``(column + 1, r)`` and O at
    ``(column + 1, r + 1)``, with ``(column, r)`` left empty.
    """
    n = g.size
    if not 0 <= column < n:
        raise IndexError(f"column {column} out of range for size {n}")
    r = g.x_perm[column]

    def lift(row: int) -> int:
        return row + 1 if row > r else row

    x = [lift(v) for v in g.x_perm]
    o = [lift(v) for v in g.o_perm]
    x[column] = r + 1
    x.insert(column + 1, r)
    o.insert(column + 1, r + 1)
    return GridDiagram(tuple(x), tuple(o), g.name)


def parse(text: str, max_size: int | None = None) -> GridDiagram:
    """Read the text grid format.

    ::

        # optional name
        n
        X r0 r1 ... r(n-1)
        O r0 r1 ... r(n-1)
    """
    name = None
    size = None
    rows: dict[str, list[int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if size is not None or name is not None:
                raise GridSyntaxError("name comment must be the first line", lineno)
            name = line[1:].strip() or None
            continue
        tokens = line.split()
        if size is None:
            if len(tokens) != 1:
                raise GridSyntaxError(f"expected the grid size, got {line!r}", lineno)
            try:
                size = int(tokens[0])
            except ValueError:
                raise GridSyntaxError(f"grid size {tokens[0]!r} is not an integer", lineno) from None
            continue
        tag = tokens[0]
        if tag not in ("X", "O"):
            raise GridSyntaxError(f"expected a line starting with X or O, got {tag!r}", lineno)
        if tag in rows:
            raise GridSyntaxError(f"duplicate {tag} line", lineno)
        try:
            rows[tag] = [int(t) for t in tokens[1:]]
        except ValueError:
            raise GridSyntaxError(f"non-integer row index in {tag} line", lineno) from None
        if len(rows[tag]) != size:
            raise GridSyntaxError(
                f"{tag} line has {len(rows[tag])} entries, expected {size}", lineno)
    if size is None:
        raise GridSyntaxError("missing grid size line")
    for tag in ("X", "O"):
        if tag not in rows:
            raise GridSyntaxError(f"missing {tag} line")
    return validate(size, rows["X"], rows["O"], name=name, max_size=max_size)


def serialize(g: GridDiagram) -> str:
    lines = []
    if g.name:
        lines.append(f"# {g.name}")
    lines.append(str(g.size))
    lines.append("X " + " ".join(map(str, g.x_perm)))
    lines.append("O " + " ".join(map(str, g.o_perm)))
    return "\n".join(lines) + "\n"


def read_grid(path, max_size: int | None = None) -> GridDiagram:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), max_size=max_size)


def expected_torus_components(p: int, q: int) -> int:
    return math.gcd(p, q)
