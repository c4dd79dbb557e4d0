"""Experiment harness: chord scan, path certificate, iteration counts.

The instance maximizes phi^2 - c phi - phi' over the tower with n = 4d,
where c = 1 - 3/(2M - 2).  In the 2D shadow the vertices are
x(t) = (t, t^2/(M-1) - t)/(M-1) and the inner product of the gradient at
x(t) with the chord to x(t+k) collapses to k (3/2 - k)/(M-1)^2, positive
exactly for k = 1.  Because the objective is invariant under the projection
and edges upstairs map to edges and chords downstairs, scanning all chords in
2D certifies that no shortcut exists anywhere on the tower; the lift itself
is certified separately by walking the actual edge graph.

``chord_scan`` checks every (t, k) pair two independent ways (the closed
form, and the direct gradient/difference dot product) over the common
denominator 2 (M-1)^2, so the O(M^2) sweep stays in integer arithmetic.
``chord_inner_product`` does the same pair check in plain rational
arithmetic.  A disagreement between the two computations raises
InternalMismatch.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import activeset, exactla, extension, polytope
from .activeset import QuadraticObjective, Trace, make_rule, RULE_CONSUMES_SEED
from .errors import BadParameters, CertificateFailure, InternalMismatch, OutOfRange, ScanCapExceeded
from .extension import ConstructionParams, ExtendedParabola

SCAN_CAP_DEFAULT = 4096


def projected_vertex(m_count: int, t: int) -> tuple[Fraction, Fraction]:
    """Grid vertex (1/(M-1)) (t, t^2/(M-1) - t) of the shadow polygon."""
    if not 0 <= t <= m_count - 1:
        raise OutOfRange(f"t = {t} outside 0..{m_count - 1}")
    scale = Fraction(1, m_count - 1)
    return (scale * t, scale * (Fraction(t * t, m_count - 1) - t))


def shadow_gradient(m_count: int, point: Sequence) -> tuple[Fraction, Fraction]:
    """Gradient (2 x1 + (3/2)/(M-1) - 1, -1) of the shadow objective."""
    x1 = exactla.rat(point[0])
    return (2 * x1 + Fraction(3, 2) / (m_count - 1) - 1, Fraction(-1))


def chord_inner_product(m_count: int, t: int, k: int) -> Fraction:
    """Gradient-chord inner product at x(t) toward x(t+k), checked two ways.

    Computes the closed form k (3/2 - k)/(M-1)^2 and, independently, the dot
    product of the shadow gradient with the difference vector, and insists
    they agree before returning the value.
    """
    if k == 0:
        raise OutOfRange("k must be nonzero")
    if not 0 <= t <= m_count - 1 or not 0 <= t + k <= m_count - 1:
        raise OutOfRange(f"(t, k) = ({t}, {k}) outside the grid 0..{m_count - 1}")
    closed = Fraction(k, (m_count - 1) ** 2) * (Fraction(3, 2) - k)
    here = projected_vertex(m_count, t)
    there = projected_vertex(m_count, t + k)
    direct = exactla.dot(
        shadow_gradient(m_count, here), exactla.vsub(there, here)
    )
    if closed != direct:
        raise InternalMismatch(
            f"closed form {closed} != direct dot {direct} at (t, k) = ({t}, {k})"
        )
    return closed


@dataclass(frozen=True)
class ChordScanReport:
    m_count: int
    pairs_checked: int
    violations: tuple[tuple[int, int, Fraction], ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {
            "M": self.m_count,
            "pairs_checked": self.pairs_checked,
            "violations": [[t, k, str(v)] for t, k, v in self.violations],
            "ok": self.ok,
        }


def chord_scan(m_count: int, cap: int | None = SCAN_CAP_DEFAULT) -> ChordScanReport:
    """Exhaustive scan of all chords: improving iff one step forward.

    For every t <= M-2 and every valid k != 0 the inner product must be
    positive exactly when k = 1; at t = M-1 (the optimum) every chord must be
    non-improving.  Each pair is evaluated both as the closed form and the
    direct dot product, as integer numerators over 2 (M-1)^2; mismatches
    raise InternalMismatch.  The O(M^2) sweep refuses M beyond the cap.
    """
    if m_count < 2:
        raise BadParameters(f"M must be at least 2, got {m_count}")
    if cap is not None and m_count > cap:
        raise ScanCapExceeded(
            f"M = {m_count} exceeds the scan cap {cap}; raise or disable the cap"
        )
    denom = 2 * (m_count - 1) ** 2
    pairs = 0
    violations = []
    for t in range(m_count):
        g_num = 4 * t + 5 - 2 * m_count  # gradient x1-part over 2(M-1)
        for k in range(-t, m_count - t):
            if k == 0:
                continue
            closed_num = k * (3 - 2 * k)
            diff_y_num = k * (2 * t + k - m_count + 1)
            direct_num = g_num * k - 2 * diff_y_num
            if direct_num != closed_num:
                raise InternalMismatch(
                    f"numerators {closed_num} != {direct_num} at (t, k) = ({t}, {k})"
                )
            pairs += 1
            improving = closed_num > 0
            if improving != (k == 1):
                violations.append((t, k, Fraction(closed_num, denom)))
    return ChordScanReport(m_count, pairs, tuple(violations))


@dataclass(frozen=True)
class PathStep:
    t: int
    improving_edges: int
    successor_t: int | None


@dataclass(frozen=True)
class PathCertificate:
    m_count: int
    entries: tuple[PathStep, ...]

    def to_json_dict(self) -> dict:
        return {
            "M": self.m_count,
            "entries": [
                {"t": e.t, "improving_edges": e.improving_edges, "successor_t": e.successor_t}
                for e in self.entries
            ],
        }


def monotone_path_check(
    ext: ExtendedParabola, f: QuadraticObjective
) -> PathCertificate:
    """Certify the unique-improving-edge path t -> t+1 on the full tower.

    At every non-optimal vertex exactly one of the d edges improves, and
    following it lands exactly on the next indexed vertex; the optimum has
    none.  Any deviation raises CertificateFailure naming the offending t.
    """
    m_top = ext.params.vertex_count
    entries = []
    for t in range(m_top):
        vertex = extension.vertex_for_t(ext, t)
        edges = polytope.edge_directions(ext.poly, vertex)
        gradient = f.gradient(vertex)
        improving = [
            (facet, d) for facet, d in edges if exactla.dot(gradient, d) > 0
        ]
        expected = 0 if t == m_top - 1 else 1
        if len(improving) != expected:
            raise CertificateFailure(
                f"t = {t}: {len(improving)} improving edges, expected {expected}"
            )
        successor_t = None
        if improving:
            _, direction = improving[0]
            mu_max, _ = polytope.ratio_test(ext.poly, vertex, direction)
            if mu_max is None:
                raise CertificateFailure(f"t = {t}: improving edge is unbounded")
            nxt = tuple(a + mu_max * e for a, e in zip(vertex, direction))
            if nxt != extension.vertex_for_t(ext, t + 1):
                raise CertificateFailure(
                    f"t = {t}: improving edge does not reach vertex t + 1"
                )
            successor_t = t + 1
        entries.append(PathStep(t, len(improving), successor_t))
    return PathCertificate(m_top, tuple(entries))


@dataclass(frozen=True)
class ExperimentRow:
    rule: str
    seed: int | None
    vertices_visited: int
    edge_moves: int
    loop_iterations: int
    wall_time_ms: float


@dataclass(frozen=True)
class ExperimentTable:
    n: int
    d: int
    m_count: int
    rows: tuple[ExperimentRow, ...]

    def to_csv(self) -> str:
        lines = ["rule,seed,vertices_visited,edge_moves,loop_iterations,wall_time_ms"]
        for r in self.rows:
            seed = "" if r.seed is None else str(r.seed)
            lines.append(
                f"{r.rule},{seed},{r.vertices_visited},{r.edge_moves},"
                f"{r.loop_iterations},{r.wall_time_ms:.3f}"
            )
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "M": self.m_count,
            "rows": [
                {
                    "rule": r.rule,
                    "seed": r.seed,
                    "vertices_visited": r.vertices_visited,
                    "edge_moves": r.edge_moves,
                    "loop_iterations": r.loop_iterations,
                    "wall_time_ms": r.wall_time_ms,
                }
                for r in self.rows
            ],
        }


def iteration_experiment(
    n: int,
    d: int,
    rules: Sequence[str],
    seeds: Sequence[int],
    ext: ExtendedParabola | None = None,
    f: QuadraticObjective | None = None,
) -> ExperimentTable:
    """Run every rule (and every seed, for seeded rules) from vertex 0.

    Requires the n = 4d regime, in which the vertex count is 2^d.  Asserts
    that all runs produce the identical vertex sequence, visiting exactly
    2^d distinct vertices in 2^d - 1 edge moves; any deviation raises
    CertificateFailure.  A pre-built tower (possibly corrupted, for negative
    controls) can be passed in.
    """
    if n != 4 * d:
        raise BadParameters(f"iteration experiment requires n = 4d, got n={n}, d={d}")
    if ext is None:
        ext = extension.build(ConstructionParams(n=n, d=d))
    if f is None:
        f = activeset.pullback_objective(ext)
    m_top = ext.params.vertex_count
    start = extension.vertex_for_t(ext, 0)

    runs: list[tuple[str, int | None]] = []
    for rule_name in rules:
        if rule_name in RULE_CONSUMES_SEED:
            runs.extend((rule_name, seed) for seed in seeds)
        else:
            runs.append((rule_name, None))

    rows = []
    reference: Trace | None = None
    for rule_name, seed in runs:
        rule = make_rule(rule_name, seed)
        t0 = time.perf_counter()
        trace = activeset.active_set_run(ext.poly, f, start, rule, max_iter=4 * m_top)
        elapsed_ms = (time.perf_counter() - t0) * 1000.0
        if trace.terminated != "Optimal":
            raise CertificateFailure(
                f"{rule_name}/{seed}: terminated {trace.terminated}"
            )
        if reference is None:
            reference = trace
        elif trace.vertex_sequence != reference.vertex_sequence:
            raise CertificateFailure(
                f"{rule_name}/{seed}: vertex sequence differs from the first run"
            )
        expected = 2**d
        if trace.vertices_visited != expected:
            raise CertificateFailure(
                f"{rule_name}/{seed}: visited {trace.vertices_visited} vertices, "
                f"expected {expected}"
            )
        if len(set(trace.vertex_sequence)) != expected:
            raise CertificateFailure(f"{rule_name}/{seed}: repeated vertices in trace")
        if trace.edge_moves != expected - 1:
            raise CertificateFailure(
                f"{rule_name}/{seed}: {trace.edge_moves} moves, expected {expected - 1}"
            )
        rows.append(
            ExperimentRow(
                rule=rule_name,
                seed=seed,
                vertices_visited=trace.vertices_visited,
                edge_moves=trace.edge_moves,
                loop_iterations=trace.loop_iterations,
                wall_time_ms=elapsed_ms,
            )
        )
    return ExperimentTable(n=n, d=d, m_count=m_top, rows=tuple(rows))
