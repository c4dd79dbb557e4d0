"""Active-set maximization of a quadratic over a simple H-polytope.

The method keeps a working set of tight constraints and repeatedly moves
along a feasible improving direction: pick a direction in the cone
``{d : A_tight d <= 0}`` with positive gradient inner product that keeps as
many working rows tight as possible, drop the one working row the direction
leaves, advance until either a facet blocks or the gradient along the
direction vanishes, and re-add a newly tight row while the direction still
improves.  At a simple vertex the tight-count maximizers are exactly the d
edge rays (each keeps d-1 of the d tight rows), so the search runs over
``edge_directions`` and asserts, defensively, that no candidate keeps all d
rows tight.

Every "for some" in that loop is a pivot-rule choice point.  Rules plug in
through three callbacks (direction, dropped row, entering row) and must pick
from the offered candidates; FirstIndex, LastIndex, SeededRandom and
Adversarial are provided.

Objectives are convex-or-not quadratics; with a convex one, movement along an
improving edge stays improving up to the edge endpoint, so every iterate is a
vertex and each loop body performs one edge move.  The runner records the
full trace: vertices, tight and active sets, directions, step lengths and
objective values, plus separate counters for loop bodies, edge moves and
vertices visited.
"""

from __future__ import annotations

import json
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import exactla, polytope
from .errors import (
    BadParameters,
    DegenerateVertex,
    DimensionMismatch,
    NotAVertex,
    NotImproving,
    UnboundedImprovement,
    UnknownRule,
)
from .exactla import Matrix, Vector
from .extension import ExtendedParabola
from .polytope import HPolytope, TightSet

DEFAULT_MAX_ITER = 10**7


@dataclass(frozen=True)
class QuadraticObjective:
    """f(x) = x^T quad x + linear . x + constant, with exact gradient."""

    quad: Matrix
    linear: Vector
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        quad = exactla.mat(self.quad)
        linear = exactla.vec(self.linear)
        if len(quad) != len(linear):
            raise DimensionMismatch("quadratic and linear parts disagree on dimension")
        if quad != exactla.transpose(quad):
            raise BadParameters("quadratic part must be exactly symmetric")
        object.__setattr__(self, "quad", quad)
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "constant", exactla.rat(self.constant))

    @property
    def dim(self) -> int:
        return len(self.linear)

    def value(self, x: Sequence) -> Fraction:
        ax = exactla.matvec(self.quad, x)
        return exactla.dot(x, ax) + exactla.dot(self.linear, x) + self.constant

    def gradient(self, x: Sequence) -> Vector:
        if len(x) != self.dim:
            raise DimensionMismatch(f"point has dim {len(x)}, objective {self.dim}")
        ax = exactla.matvec(self.quad, x)
        return tuple(2 * a + q for a, q in zip(ax, self.linear))

    def curvature_along(self, direction: Sequence) -> Fraction:
        return exactla.dot(direction, exactla.matvec(self.quad, direction))


def objective_constant(m_count: int) -> Fraction:
    """The linear coefficient 1 - 3/(2M - 2) that leaves only unit chords improving."""
    return 1 - Fraction(3, 2 * m_count - 2)


def pullback_objective(ext: ExtendedParabola) -> QuadraticObjective:
    """The instance objective phi(x)^2 - c phi(x) - phi'(x) on the tower.

    Rank-one convex quadratic part (outer product of the phi coefficients);
    on vertices phi' = phi^2 - phi cancels the curvature and the value
    reduces to (1 - c) phi, strictly increasing along the vertex path.
    """
    c = objective_constant(ext.params.vertex_count)
    c_phi = ext.phi.coeffs
    c_phi_prime = ext.phi_prime.coeffs
    quad = exactla.outer(c_phi, c_phi)
    linear = tuple(-c * a - b for a, b in zip(c_phi, c_phi_prime))
    return QuadraticObjective(quad, linear, Fraction(0))


def line_search(
    f: QuadraticObjective,
    x: Sequence,
    direction: Sequence,
    mu_max: Fraction | None,
) -> Fraction:
    """Largest step keeping the direction improving, capped by mu_max.

    The directional derivative g(mu) = grad(x) . d + 2 mu d^T quad d is
    affine in mu; the step is min(mu_max, root of g) with the root at
    infinity for nonnegative curvature.  Requires g(0) > 0.
    """
    g0 = exactla.dot(f.gradient(x), direction)
    if g0 <= 0:
        raise NotImproving(f"directional derivative {g0} is not positive")
    curvature = f.curvature_along(direction)
    if curvature >= 0:
        stationary = None
    else:
        stationary = -g0 / (2 * curvature)
    if mu_max is None and stationary is None:
        raise UnboundedImprovement("improving ray is unbounded")
    if mu_max is None:
        return stationary
    if stationary is None:
        return mu_max
    return min(mu_max, stationary)


def is_improving_edge(
    poly: HPolytope, f: QuadraticObjective, v: Sequence, direction: Sequence
) -> bool:
    """True iff grad f(v) . direction > 0, exactly."""
    if len(direction) != poly.dim:
        raise DimensionMismatch("direction dimension differs from polytope")
    return exactla.dot(f.gradient(v), direction) > 0


# ---------------------------------------------------------------------------
# Pivot rules

DirectionCandidate = tuple[int, tuple[int, ...]]


@dataclass(frozen=True)
class ChoiceContext:
    """Read-only state offered to a pivot rule at a choice point."""

    vertex: Vector
    tight: TightSet
    active: TightSet
    step: int


class PivotRule(ABC):
    """Fills the three 'for some' choice points of the active-set loop.

    Every method must return an element of the candidates it is offered; the
    runner enforces this.
    """

    @abstractmethod
    def choose_direction(
        self, candidates: Sequence[DirectionCandidate], ctx: ChoiceContext
    ) -> DirectionCandidate: ...

    @abstractmethod
    def choose_drop(self, candidates: Sequence[int], ctx: ChoiceContext) -> int: ...

    @abstractmethod
    def choose_enter(self, candidates: Sequence[int], ctx: ChoiceContext) -> int: ...


class FirstIndex(PivotRule):
    """Always the first offered candidate (lowest facet index)."""

    def choose_direction(self, candidates, ctx):
        return candidates[0]

    def choose_drop(self, candidates, ctx):
        return candidates[0]

    def choose_enter(self, candidates, ctx):
        return candidates[0]


class LastIndex(PivotRule):
    """Always the last offered candidate (highest facet index)."""

    def choose_direction(self, candidates, ctx):
        return candidates[-1]

    def choose_drop(self, candidates, ctx):
        return candidates[-1]

    def choose_enter(self, candidates, ctx):
        return candidates[-1]


class SeededRandom(PivotRule):
    """Uniform choice from a private RNG; deterministic given the seed."""

    def __init__(self, seed: int):
        self.seed = seed
        self._rng = random.Random(seed)

    def choose_direction(self, candidates, ctx):
        return candidates[self._rng.randrange(len(candidates))]

    def choose_drop(self, candidates, ctx):
        return candidates[self._rng.randrange(len(candidates))]

    def choose_enter(self, candidates, ctx):
        return candidates[self._rng.randrange(len(candidates))]


class Adversarial(PivotRule):
    """Delegates every choice to a callback(kind, candidates, ctx)."""

    def __init__(self, callback: Callable):
        self.callback = callback

    def choose_direction(self, candidates, ctx):
        return self.callback("direction", candidates, ctx)

    def choose_drop(self, candidates, ctx):
        return self.callback("drop", candidates, ctx)

    def choose_enter(self, candidates, ctx):
        return self.callback("enter", candidates, ctx)


def _spiteful_choice(kind: str, candidates, ctx):
    # Default adversary: middle candidate, to differ from First and Last.
    return candidates[len(candidates) // 2]


def make_rule(name: str, seed: int | None = None) -> PivotRule:
    """Rule registry for the CLI: first | last | random | adversarial."""
    if name == "first":
        return FirstIndex()
    if name == "last":
        return LastIndex()
    if name == "random":
        return SeededRandom(0 if seed is None else seed)
    if name == "adversarial":
        return Adversarial(_spiteful_choice)
    raise UnknownRule(f"no pivot rule named {name!r}")


RULE_CONSUMES_SEED = {"random"}


# ---------------------------------------------------------------------------
# Trace and runner


@dataclass(frozen=True)
class TraceStep:
    vertex: Vector
    tight: TightSet
    active: TightSet
    direction: tuple[int, ...] | None
    mu: Fraction | None
    f_value: Fraction


@dataclass(frozen=True)
class Trace:
    steps: tuple[TraceStep, ...]
    loop_iterations: int
    edge_moves: int
    terminated: str  # "Optimal" | "MaxIterations"

    @property
    def vertices_visited(self) -> int:
        return len(self.steps)

    @property
    def vertex_sequence(self) -> tuple[Vector, ...]:
        return tuple(s.vertex for s in self.steps)


def active_set_run(
    poly: HPolytope,
    f: QuadraticObjective,
    x0: Sequence,
    rule: PivotRule,
    max_iter: int | None = None,
) -> Trace:
    """Run the active-set loop from a simple vertex until locally optimal.

    Raises NotAVertex / DegenerateVertex when an iterate is not a simple
    vertex (with a convex quadratic this cannot happen, since line_search
    stops only at facet boundaries), and flags a blocking tie that would
    leave more than d tight rows as DegenerateVertex rather than perturbing.
    Hitting the iteration cap is reported in the trace, not raised.
    """
    if max_iter is None:
        max_iter = DEFAULT_MAX_ITER
    if f.dim != poly.dim:
        raise DimensionMismatch("objective dimension differs from polytope")
    x = exactla.vec(x0)
    slack = polytope.slacks(poly, x)
    if any(s < 0 for s in slack):
        raise NotAVertex("start point is not feasible")
    tight = tuple(i for i, s in enumerate(slack) if s == 0)
    if len(tight) != poly.dim:
        raise NotAVertex(f"start point has {len(tight)} tight rows, need {poly.dim}")
    active = tight
    int_rows = [r for r, _ in poly._int_rows]

    steps: list[TraceStep] = []
    loop_iterations = 0
    edge_moves = 0
    f_value = f.value(x)
    terminated = "Optimal"

    while True:
        if len(tight) != poly.dim:
            raise NotAVertex(f"iterate has {len(tight)} tight rows, need {poly.dim}")
        edges = polytope.edge_directions(poly, x)  # raises DegenerateVertex
        gradient = f.gradient(x)
        improving = [
            (facet, d) for facet, d in edges if exactla.dot(gradient, d) > 0
        ]
        if not improving:
            steps.append(TraceStep(x, tight, active, None, None, f_value))
            terminated = "Optimal"
            break
        if loop_iterations >= max_iter:
            steps.append(TraceStep(x, tight, active, None, None, f_value))
            terminated = "MaxIterations"
            break
        loop_iterations += 1

        ctx = ChoiceContext(vertex=x, tight=tight, active=active, step=len(steps))
        chosen = rule.choose_direction(improving, ctx)
        if chosen not in improving:
            raise UnknownRule("pivot rule returned a direction not offered")
        leaving, direction = chosen
        active_at_entry = active

        advance = tuple(
            sum(a * e for a, e in zip(row, direction)) for row in int_rows
        )
        # Drop branch: the edge ray strictly leaves exactly one tight row, so
        # the working set needs at most one removal before A_active d = 0.
        droppable = tuple(i for i in active if advance[i] < 0)
        if droppable:
            dropped = rule.choose_drop(droppable, ctx)
            if dropped not in droppable:
                raise UnknownRule("pivot rule returned a drop index not offered")
            active = tuple(i for i in active if i != dropped)
        assert all(advance[i] == 0 for i in active), "working rows must stay tight"

        mu_max, _blockers = polytope._ratio_from_slacks(slack, advance)
        mu = line_search(f, x, direction, mu_max)
        assert mu is not None and mu > 0, "a feasible improving edge must allow mu > 0"

        steps.append(TraceStep(x, tight, active_at_entry, direction, mu, f_value))

        x = tuple(a + mu * e for a, e in zip(x, direction))
        slack = tuple(s - mu * a for s, a in zip(slack, advance))
        tight = tuple(i for i, s in enumerate(slack) if s == 0)
        if len(tight) > poly.dim:
            raise DegenerateVertex(
                f"blocking tie leaves {len(tight)} tight rows at the new point"
            )
        edge_moves += 1
        new_value = f.value(x)
        assert new_value > f_value, "objective must strictly increase on a move"
        f_value = new_value

        if exactla.dot(f.gradient(x), direction) > 0:
            entering = tuple(sorted(set(tight) - set(active)))
            if entering:
                entered = rule.choose_enter(entering, ctx)
                if entered not in entering:
                    raise UnknownRule("pivot rule returned an enter index not offered")
                active = tuple(sorted(active + (entered,)))
        assert set(active) <= set(tight), "working set must stay within tight rows"

    return Trace(
        steps=tuple(steps),
        loop_iterations=loop_iterations,
        edge_moves=edge_moves,
        terminated=terminated,
    )


# ---------------------------------------------------------------------------
# Serialization


def trace_to_json_dict(
    trace: Trace,
    instance: dict | None = None,
    t_of: Callable[[Vector], int | None] | None = None,
) -> dict:
    """JSON form of a trace; rationals stay exact ``p/q`` strings."""
    steps = []
    for step in trace.steps:
        steps.append(
            {
                "t": t_of(step.vertex) if t_of else None,
                "vertex": [str(c) for c in step.vertex],
                "active": list(step.active),
                "direction": list(step.direction) if step.direction is not None else None,
                "mu": str(step.mu) if step.mu is not None else None,
                "f": str(step.f_value),
            }
        )
    return {
        "instance": instance,
        "steps": steps,
        "edge_moves": trace.edge_moves,
        "loop_iterations": trace.loop_iterations,
        "terminated": trace.terminated,
    }


def trace_to_json(trace: Trace, instance=None, t_of=None, indent=None) -> str:
    return json.dumps(trace_to_json_dict(trace, instance, t_of), indent=indent)


def trace_plot_rows(
    trace: Trace,
    ext: ExtendedParabola,
    significant_digits: int = 12,
) -> list[tuple[str, str, str, str]]:
    """CSV rows (t, phi, phi_prime, f) for plotting; decimals only here."""
    t_of = make_t_labeler(ext)
    rows = []
    for step in trace.steps:
        phi_val, phi_prime_val = ext.phi(step.vertex), ext.phi_prime(step.vertex)
        t = t_of(step.vertex)
        rows.append(
            (
                "" if t is None else str(t),
                exactla.to_decimal(phi_val, significant_digits),
                exactla.to_decimal(phi_prime_val, significant_digits),
                exactla.to_decimal(step.f_value, significant_digits),
            )
        )
    return rows


def make_t_labeler(ext: ExtendedParabola) -> Callable[[Vector], int | None]:
    """Map a vertex to its grid index t = phi(v) (M - 1), or None off-grid."""
    m_top = ext.params.vertex_count

    def t_of(vertex: Vector) -> int | None:
        value = ext.phi(vertex) * (m_top - 1)
        if value.denominator == 1 and 0 <= value.numerator <= m_top - 1:
            return int(value)
        return None

    return t_of
