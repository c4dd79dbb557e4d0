"""The deformed product of a polytope with a pair of normally equivalent fibers.

Given a polytope P in R^d, a linear functional phi with phi(P) = [0, 1], and
two normally equivalent polytopes sharing a constraint matrix B with
right-hand sides beta (fiber at phi = 0) and beta' (fiber at phi = 1), the
deformed product lives in R^{d+r} and interpolates the fiber as phi sweeps
across P:

* vertices: (p, v_j + phi(p) (w_j - v_j)) for every vertex p of P and every
  aligned fiber vertex pair (v_j, w_j);
* facets: the rows of P unchanged, plus (beta - beta') phi(x) + B u <= beta.

The product is combinatorially a Cartesian product, so vertex counts multiply
and every product vertex is simple.  ``dp_verify`` checks exactly that, and
returns a structured report instead of raising so callers can aggregate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import exactla, polytope
from .errors import DimensionMismatch, SizeMismatch
from .exactla import Matrix, Vector
from .polytope import HPolytope


@dataclass(frozen=True)
class Functional:
    """Linear functional x -> coeffs . x."""

    coeffs: Vector

    def __post_init__(self):
        object.__setattr__(self, "coeffs", exactla.vec(self.coeffs))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __call__(self, x: Sequence) -> Fraction:
        return exactla.dot(self.coeffs, x)

    @classmethod
    def coordinate(cls, dim: int, index: int) -> "Functional":
        return cls(exactla.unit(dim, index))


def dp_hrep(
    poly: HPolytope,
    phi: Functional,
    fiber_rows: Matrix,
    beta: Vector,
    beta_prime: Vector,
    fiber_labels: Sequence[str] | None = None,
) -> HPolytope:
    """H-representation of the deformed product in R^{d+r}.

    The caller guarantees phi(poly) = [0, 1]; that is a global construction
    invariant checked once per level, not re-derived here (it would need
    vertex data).
    """
    if phi.dim != poly.dim:
        raise DimensionMismatch("functional dimension differs from polytope")
    fiber_rows = exactla.mat(fiber_rows)
    beta = exactla.vec(beta)
    beta_prime = exactla.vec(beta_prime)
    if not (len(fiber_rows) == len(beta) == len(beta_prime)):
        raise DimensionMismatch("fiber rows and right-hand sides must align")
    r = len(fiber_rows[0])
    zero_tail = exactla.zeros(r)
    new_rows = [tuple(row) + zero_tail for row in poly.A]
    new_rhs = list(poly.b)
    for i, row in enumerate(fiber_rows):
        deformation = exactla.vscale(beta[i] - beta_prime[i], phi.coeffs)
        new_rows.append(deformation + tuple(row))
        new_rhs.append(beta[i])
    if fiber_labels is None:
        fiber_labels = tuple(f"fiber{i}" for i in range(len(fiber_rows)))
    labels = poly.facet_labels + tuple(fiber_labels)
    return HPolytope(tuple(new_rows), tuple(new_rhs), labels)


def dp_vrep(
    p_verts: Sequence[Sequence],
    phi: Functional,
    v_verts: Sequence[Sequence],
    w_verts: Sequence[Sequence],
) -> list[Vector]:
    """All m*n product vertices (p, v_j + phi(p) (w_j - v_j)).

    v_verts and w_verts must be aligned index by index under the fiber
    bijection; the alignment is the caller's (sorted-parameter) construction
    and is deliberately not re-derived here, so that alignment bugs surface
    in dp_verify instead of being silently repaired.
    """
    if len(v_verts) != len(w_verts):
        raise SizeMismatch("fiber vertex lists differ in length")
    v_pts = [exactla.vec(v) for v in v_verts]
    w_pts = [exactla.vec(w) for w in w_verts]
    out: list[Vector] = []
    for p in p_verts:
        p = exactla.vec(p)
        t = phi(p)
        for v, w in zip(v_pts, w_pts):
            tail = tuple(a + t * (b - a) for a, b in zip(v, w))
            out.append(p + tail)
    return out


@dataclass(frozen=True)
class DpVerifyReport:
    total: int
    expected: int | None
    duplicate_pairs: tuple[tuple[int, int], ...]
    infeasible: tuple[int, ...]
    non_simple: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return (
            not self.duplicate_pairs
            and not self.infeasible
            and not self.non_simple
            and (self.expected is None or self.total == self.expected)
        )

    def to_json_dict(self) -> dict:
        return {
            "ok": self.ok,
            "total": self.total,
            "expected": self.expected,
            "duplicate_pairs": [list(p) for p in self.duplicate_pairs],
            "infeasible": list(self.infeasible),
            "non_simple": list(self.non_simple),
        }


def dp_verify(
    hrep: HPolytope,
    points: Sequence[Sequence],
    expected_count: int | None = None,
) -> DpVerifyReport:
    """Check that every generated point is a distinct simple vertex of hrep."""
    pts = [exactla.vec(p) for p in points]
    seen: dict[Vector, int] = {}
    duplicates = []
    infeasible = []
    non_simple = []
    for idx, p in enumerate(pts):
        if p in seen:
            duplicates.append((seen[p], idx))
            continue
        seen[p] = idx
        if not polytope.contains(hrep, p):
            infeasible.append(idx)
            continue
        if not polytope.is_simple_vertex(hrep, p):
            non_simple.append(idx)
    return DpVerifyReport(
        total=len(pts),
        expected=expected_count,
        duplicate_pairs=tuple(duplicates),
        infeasible=tuple(infeasible),
        non_simple=tuple(non_simple),
    )
