"""Volume entropy of metric graphs.

The entropy of a component with at least two independent cycles is the
unique t* > 0 with rho(B(t*)) = 1, found by safeguarded Newton iteration
on the convex function log rho(B(t)).  The Newton step uses the exact
eigenvalue derivative through the left/right Perron vectors; whenever an
iterate would leave the maintained sign bracket, a bisection step is
taken instead.  Components that reduce to a tree or to a single cycle
have entropy 0 exactly and are never sent to the numerical solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Sequence

import numpy as np

from .errors import InsufficientData, ValidationFailed
from .graph import ComponentKind, MetricGraph, components, reduce, validate
from .spectral import TransferMode, build_transfer, spectral_radius

if TYPE_CHECKING:  # pragma: no cover
    from .counting import CountProfile


@dataclass(frozen=True)
class EntropyResult:
    """Volume entropy of a graph (max over connected components)."""

    h: float
    residual: float
    iterations: int
    bracket: tuple[float, float]
    method: str  # "newton" | "bisection" | "hybrid" | "exact"
    per_component: tuple[tuple[str, float], ...]


@dataclass(frozen=True)
class CountSlopeEstimate:
    """Entropy estimate from an enumeration profile.

    ``band`` is the spread (max - min) of the pointwise log N(r) / r
    estimates across the window: the residual drift of the naive
    estimator, used as the confidence band around the fitted slope.
    """

    h_hat: float
    band: float
    window: tuple[float, float]
    n_samples: int


class _RhoRootProblem:
    """rho(B(t)) = 1 root finding for a matrix family with log-linear
    entries; used for both transfer modes."""

    def __init__(self, matrix_at: Callable[[float], np.ndarray],
                 lengths: np.ndarray, tol: float, max_iter: int):
        self.matrix_at = matrix_at
        self.lengths = np.asarray(lengths, dtype=float)
        self.l_min = float(np.min(self.lengths))
        self.tol = tol
        self.max_iter = max_iter
        self.evals = 0

    def eval(self, t: float):
        """Return (rho, d(log rho)/dt) at t."""
        self.evals += 1
        mat = self.matrix_at(t)
        data = spectral_radius(mat, tol=min(1e-12, self.tol / 10),
                               max_iter=self.max_iter)
        rho = data.rho
        if rho <= 0.0:
            return 0.0, None
        denom = float(data.left @ data.right) * rho
        if denom <= 0.0:
            return rho, None
        drho = -float(data.left @ (mat @ (self.lengths * data.right)))
        return rho, drho / denom

    def solve(self, t_hi0: float, t_lo: float = 0.0):
        """Root of rho(t) = 1 on [t_lo, inf), assuming rho(t_lo) >= 1.

        Returns (t, residual, method, bracket).
        """
        tol = self.tol
        rho_lo, _ = self.eval(t_lo)
        if rho_lo < 1.0 - tol:
            raise ValueError("lower bracket does not satisfy rho >= 1")
        if abs(rho_lo - 1.0) <= tol:
            return t_lo, abs(rho_lo - 1.0), "exact", (t_lo, t_lo)

        t_hi = max(t_hi0, t_lo + self.l_min, 1e-6)
        rho_hi, g_hi = self.eval(t_hi)
        guard = 0
        while rho_hi > 1.0 + tol:
            t_lo, rho_lo = t_hi, rho_hi
            t_hi = 2.0 * t_hi
            rho_hi, g_hi = self.eval(t_hi)
            guard += 1
            if guard > 200:
                raise ValueError("failed to bracket rho(t) = 1 from above")
        if abs(rho_hi - 1.0) <= tol:
            return t_hi, abs(rho_hi - 1.0), "exact", (t_lo, t_hi)

        # Residual target tight enough that the derivative bound
        # |d log rho / dt| >= l_min certifies a bracket of width <= tol.
        g_target = tol * min(1.0, 0.45 * self.l_min)
        lo, hi = t_lo, t_hi
        t, rho, dlog = t_hi, rho_hi, g_hi
        hybrid = False
        best = (t, abs(rho - 1.0))
        for _ in range(120):
            g = math.log(rho) if rho > 0 else -math.inf
            if abs(g) <= g_target and abs(rho - 1.0) <= tol:
                break
            t_next = None
            if dlog is not None and dlog < 0 and math.isfinite(g):
                t_next = t - g / dlog
            if t_next is None or not (lo < t_next < hi):
                t_next = 0.5 * (lo + hi)
                hybrid = True
            t = t_next
            rho, dlog = self.eval(t)
            if rho >= 1.0:
                lo = t
            else:
                hi = t
            if abs(rho - 1.0) < best[1]:
                best = (t, abs(rho - 1.0))
            if hi - lo <= 1e-15 * max(1.0, t):
                break
        else:  # pragma: no cover - iteration cap
            t, _ = best
            rho, dlog = self.eval(t)
        # Certify the bracket around the final iterate.
        delta = abs(math.log(max(rho, 1e-300))) / self.l_min
        bracket = (max(lo, t - delta), min(hi, t + delta))
        method = "hybrid" if hybrid else "newton"
        return t, abs(rho - 1.0), method, bracket


def _solve_component(core: MetricGraph, tol: float, max_iter: int,
                     bracket_hint: float | None):
    """Entropy of a reduced hyperbolic component."""
    lengths = np.array([d.length for d in core.darts])
    problem = _RhoRootProblem(
        lambda t: build_transfer(core, t).matrix, lengths, tol, max_iter)
    # Trivial upper bound log(k) / l_min where k + 1 is the max degree.
    k = core.max_degree() - 1
    t_hi0 = math.log(max(k, 2)) / core.min_length()
    t_lo = 0.0
    if bracket_hint is not None and bracket_hint > 0:
        rho_hint, _ = problem.eval(bracket_hint)
        if rho_hint >= 1.0 - tol:
            t_lo = bracket_hint
    return problem.solve(t_hi0, t_lo=t_lo), problem.evals


def volume_entropy(graph: MetricGraph, tol: float = 1e-10,
                   max_iter: int = 10_000,
                   bracket_hint: float | None = None) -> EntropyResult:
    """Volume entropy of a metric graph.

    Each connected component is reduced first; trivial and single-cycle
    components contribute exactly 0, hyperbolic components are solved for
    rho(B(t)) = 1.  The entropy of the graph is the maximum over
    components.  ``bracket_hint`` (a known lower bound for the answer,
    e.g. the previous entropy along a filtration) warm-starts the lower
    bracket of each component solve when applicable.

    Raises ValidationFailed on invalid input: no entropy is ever reported
    for a non-validated graph.
    """
    report = validate(graph)
    if report:
        raise ValidationFailed(report)

    per: list[tuple[str, float]] = []
    best = None  # (h, residual, iterations, bracket, method)
    total_iters = 0
    for comp, _ in components(graph):
        cid = min(comp.vertices)
        red = reduce(comp)
        if red.kinds[0] is not ComponentKind.HYPERBOLIC:
            per.append((cid, 0.0))
            continue
        (t, resid, method, bracket), evals = _solve_component(
            red.graph, tol, max_iter, bracket_hint)
        total_iters += evals
        per.append((cid, t))
        if best is None or t > best[0]:
            best = (t, resid, evals, bracket, method)

    if best is None:
        h = 0.0
        result = EntropyResult(0.0, 0.0, total_iters, (0.0, 0.0), "exact",
                               tuple(per))
    else:
        result = EntropyResult(best[0], best[1], total_iters, best[3],
                               best[4], tuple(per))
    return result


def rho_curve(graph: MetricGraph, t_values: Sequence[float],
              mode: TransferMode = TransferMode.NON_BACKTRACKING
              ) -> list[tuple[float, float]]:
    """Sample (t, rho(B(t))) along a parameter grid; diagnostic helper."""
    report = validate(graph)
    if report:
        raise ValidationFailed(report)
    out = []
    for t in t_values:
        rho = spectral_radius(build_transfer(graph, float(t), mode)).rho
        out.append((float(t), rho))
    return out


def entropy_from_counts(profile: "CountProfile",
                        window: tuple[float, float]) -> CountSlopeEstimate:
    """Estimate entropy as the least-squares slope of log N(r) over r.

    Samples sit at the distinct recorded lengths inside the window, with
    N evaluated just above each jump.  Requires at least 4 samples and a
    window inside the profile horizon.
    """
    r1, r2 = float(window[0]), float(window[1])
    lengths = np.asarray(profile.lengths)
    if lengths.size == 0:
        raise InsufficientData("profile records no lengths")
    if not (r2 > r1 >= float(lengths[0])):
        raise InsufficientData(
            f"window ({r1}, {r2}) must satisfy r2 > r1 >= min length")
    if r2 > profile.r_max:
        raise InsufficientData(
            f"window end {r2} exceeds profile horizon {profile.r_max}")
    jumps = np.unique(lengths[(lengths >= r1) & (lengths <= r2)])
    xs, ys = [], []
    for ell in jumps:
        n = int(np.searchsorted(lengths, ell, side="right"))
        if n > 0:
            xs.append(float(ell))
            ys.append(math.log(n))
    if len(xs) < 4:
        raise InsufficientData(
            f"only {len(xs)} sample points in window ({r1}, {r2})")
    slope = float(np.polyfit(xs, ys, 1)[0])
    pointwise = np.array(ys) / np.array(xs)
    band = float(np.max(pointwise) - np.min(pointwise))
    return CountSlopeEstimate(slope, band, (r1, r2), len(xs))
