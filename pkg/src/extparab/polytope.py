"""H-representation polytopes with exact membership, tight sets and edges.

A polytope is stored as ``{x : A x <= b}`` over rationals, with one
human-readable label per facet recording construction provenance.  Labels are
metadata: two polytopes compare equal when A and b agree entry for entry.

Edge enumeration assumes simple vertices (every vertex here has exactly d
tight, independent rows); anything else raises DegenerateVertex, because on
the constructed instances degeneracy means a bug, not a case to handle.

The cdd-compatible text formats live here too: ``H-representation`` files
with exact ``p/q`` entries (rows are ``b_i -A_i1 ... -A_id``), and the
matching ``V-representation`` writer for vertex lists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import exactla
from .errors import (
    BadParameters,
    DegenerateVertex,
    DimensionMismatch,
    FormatError,
    NotFeasible,
    ZeroDirection,
)
from .exactla import Matrix, Vector

TightSet = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class HPolytope:
    """Constraint system A x <= b with facet labels.

    Equality and hashing use (A, b) only; facet_labels carry provenance and
    are ignored, so a round-trip through the ``.ine`` format (which stores no
    labels) reproduces an equal polytope.
    """

    A: Matrix
    b: Vector
    facet_labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        a = exactla.mat(self.A)
        rhs = exactla.vec(self.b)
        if len(a) != len(rhs):
            raise DimensionMismatch("A and b row counts differ")
        for i, row in enumerate(a):
            if all(e == 0 for e in row):
                raise BadParameters(f"all-zero constraint row {i}")
        labels = tuple(self.facet_labels) or tuple(f"row{i}" for i in range(len(a)))
        if len(labels) != len(a):
            raise DimensionMismatch("facet label count differs from row count")
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "b", rhs)
        object.__setattr__(self, "facet_labels", labels)

    @property
    def num_facets(self) -> int:
        return len(self.A)

    @property
    def dim(self) -> int:
        return len(self.A[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, HPolytope):
            return NotImplemented
        return self.A == other.A and self.b == other.b

    def __hash__(self) -> int:
        return hash((self.A, self.b))

    @cached_property
    def _int_rows(self) -> tuple[tuple[tuple[int, ...], int], ...]:
        # Each row (A_i | b_i) scaled by a positive integer so that all
        # entries are integers; the scaling preserves the inequality, the
        # tight set and every ratio (b_i - A_i x)/(A_i d).
        scaled = []
        for row, rhs in zip(self.A, self.b):
            ints = exactla.clear_denominators(tuple(row) + (rhs,))
            scaled.append((ints[:-1], ints[-1]))
        return tuple(scaled)


def slacks(poly: HPolytope, x: Sequence) -> Vector:
    """b - A x, in the positively row-scaled integer system."""
    if len(x) != poly.dim:
        raise DimensionMismatch(f"point has dim {len(x)}, polytope {poly.dim}")
    return tuple(
        rhs - exactla.dot(row, x) for row, rhs in poly._int_rows
    )


def contains(poly: HPolytope, x: Sequence) -> bool:
    """Exact membership test A x <= b."""
    return all(s >= 0 for s in slacks(poly, x))


def tight_set(poly: HPolytope, x: Sequence) -> TightSet:
    """Indices of the rows satisfied with equality at a feasible point."""
    s = slacks(poly, x)
    if any(v < 0 for v in s):
        raise NotFeasible("point is outside the polytope")
    return tuple(i for i, v in enumerate(s) if v == 0)


def is_simple_vertex(poly: HPolytope, x: Sequence) -> bool:
    """True iff exactly d tight rows of full rank meet at x."""
    tight = tight_set(poly, x)
    if len(tight) != poly.dim:
        return False
    rows = tuple(poly.A[i] for i in tight)
    return exactla.rank(rows) == poly.dim


def edge_directions(
    poly: HPolytope, v: Sequence
) -> list[tuple[int, tuple[int, ...]]]:
    """The d primitive edge directions leaving a simple vertex.

    Returns one pair (leaving_facet, direction) per tight row i: the unique
    primitive integer vector with A_j . dir = 0 for every tight j != i and
    A_i . dir < 0.  Computed from the (positively scaled) inverse columns of
    the tight matrix, so one fraction-free elimination yields all d edges.
    """
    tight = tight_set(poly, v)
    if len(tight) != poly.dim:
        raise DegenerateVertex(
            f"{len(tight)} tight rows at a point of dimension {poly.dim}"
        )
    int_rows = [poly._int_rows[i][0] for i in tight]
    columns = exactla.int_inverse_scaled(int_rows)
    if columns is None:
        raise DegenerateVertex("tight rows are rank-deficient")
    result = []
    for k, col in enumerate(columns):
        direction = exactla.primitive(tuple(-c for c in col))
        # Defensive: an edge ray keeps d-1 tight rows and strictly leaves one.
        for j, row in enumerate(int_rows):
            prod = sum(a * e for a, e in zip(row, direction))
            if j == k:
                assert prod < 0, "leaving row must strictly decrease"
            else:
                assert prod == 0, "non-leaving tight row must stay tight"
        result.append((tight[k], direction))
    return result


def ratio_test(
    poly: HPolytope, x: Sequence, direction: Sequence
) -> tuple[Fraction | None, TightSet]:
    """Largest feasible step along a direction, with the blocking rows.

    Returns (mu_max, blockers) where mu_max = min over rows with
    A_i . direction > 0 of (b_i - A_i x)/(A_i . direction) and blockers is
    the argmin set; (None, ()) when no row blocks (unbounded ray).
    """
    if all(e == 0 for e in direction):
        raise ZeroDirection("ratio test along the zero direction")
    s = slacks(poly, x)
    advance = tuple(
        exactla.dot(row, direction) for row, _ in poly._int_rows
    )
    return _ratio_from_slacks(s, advance)


def _ratio_from_slacks(
    s: Sequence[Fraction], advance: Sequence[Fraction]
) -> tuple[Fraction | None, TightSet]:
    mu_max: Fraction | None = None
    blockers: list[int] = []
    for i, (slack, adv) in enumerate(zip(s, advance)):
        if adv <= 0:
            continue
        ratio = slack / adv
        if mu_max is None or ratio < mu_max:
            mu_max = ratio
            blockers = [i]
        elif ratio == mu_max:
            blockers.append(i)
    return mu_max, tuple(blockers)


# ---------------------------------------------------------------------------
# cdd-compatible text formats


def hrep_to_ine(poly: HPolytope) -> str:
    """Serialize as a cdd H-representation with exact rational entries."""
    lines = ["H-representation", "begin", f"{poly.num_facets} {poly.dim + 1} rational"]
    for row, rhs in zip(poly.A, poly.b):
        entries = [str(rhs)] + [str(-a) for a in row]
        lines.append(" ".join(entries))
    lines.append("end")
    return "\n".join(lines) + "\n"


def hrep_from_ine(text: str) -> HPolytope:
    """Parse a cdd H-representation produced by :func:`hrep_to_ine`."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("*")]
    try:
        start = lines.index("begin")
    except ValueError:
        raise FormatError("missing 'begin' line") from None
    if "H-representation" not in lines[:start]:
        raise FormatError("missing 'H-representation' header")
    header = lines[start + 1].split()
    if len(header) != 3 or header[2] != "rational":
        raise FormatError(f"unsupported size line: {lines[start + 1]!r}")
    m, cols = int(header[0]), int(header[1])
    rows = []
    rhs = []
    for ln in lines[start + 2 : start + 2 + m]:
        parts = ln.split()
        if len(parts) != cols:
            raise FormatError(f"row has {len(parts)} entries, expected {cols}")
        values = [Fraction(p) for p in parts]
        rhs.append(values[0])
        rows.append(tuple(-v for v in values[1:]))
    if lines[start + 2 + m] != "end":
        raise FormatError("missing 'end' line")
    return HPolytope(tuple(rows), tuple(rhs))


def vrep_to_ext(points: Iterable[Sequence]) -> str:
    """Serialize a vertex list as a cdd V-representation (rows ``1 x1 .. xd``)."""
    pts = [exactla.vec(p) for p in points]
    if not pts:
        raise FormatError("empty vertex list")
    dim = len(pts[0])
    lines = ["V-representation", "begin", f"{len(pts)} {dim + 1} rational"]
    for p in pts:
        lines.append(" ".join(["1"] + [str(c) for c in p]))
    lines.append("end")
    return "\n".join(lines) + "\n"
