"""Brute-force path/cycle enumeration and the counting identities.

The enumeration is the ground-truth oracle of the package: a depth-first
search over dart sequences with cumulative length below a horizon, exact
and duplicate-free.  Counts use the strict convention N(r) = #{lengths
< r} throughout; ties at a grid radius belong to the open side.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ._rootutil import bracketed_root
from .entropy import _RhoRootProblem, volume_entropy
from .errors import (DivergentSeries, HorizonTooLarge, MarginTooSmall,
                     NonConvergence, PreconditionError, UnknownVertex)
from .genfun import f_from, f_path, primitive_matrix
from .graph import MetricGraph, components, first_betti, validate
from .spectral import TransferMode, build_transfer, solve_resolvent, spectral_radius

DEFAULT_CAP = 10_000_000


class PathKind(Enum):
    PATHS_XY = "paths-xy"
    PATHS_FROM = "paths-from"
    CYCLES_AT = "cycles-at"
    PRIMITIVE_CYCLES_AT = "primitive-cycles-at"


@dataclass(frozen=True)
class EnumerationSpec:
    """What to enumerate: kind, mode, endpoints and horizon."""

    kind: PathKind
    r_max: float
    mode: TransferMode = TransferMode.NON_BACKTRACKING
    x: str | None = None
    y: str | None = None
    v: str | None = None
    cap: int = DEFAULT_CAP


@dataclass(frozen=True)
class CountProfile:
    """Sorted multiset of enumerated path lengths below a horizon.

    ``by_start`` (cycles) and ``by_pair`` (primitive cycles) are keyed by
    the 1-based attachment-dart indices at the base vertex, matching the
    l^{ij}_m bookkeeping of the recursion checks.
    """

    kind: PathKind
    mode: TransferMode
    r_max: float
    lengths: np.ndarray
    endpoints: tuple
    by_start: dict[int, np.ndarray] = field(default_factory=dict)
    by_pair: dict[tuple[int, int], np.ndarray] = field(default_factory=dict)
    attachment_ids: tuple[int, ...] = ()

    def count(self, r: float) -> int:
        """N(r): number of recorded lengths strictly below r."""
        return int(np.searchsorted(self.lengths, r, side="left"))

    def count_le(self, r: float) -> int:
        return int(np.searchsorted(self.lengths, r, side="right"))

    def jump_radii(self) -> np.ndarray:
        return np.unique(self.lengths)

    def to_csv(self) -> str:
        lines = ["length,cumulative"]
        uniq, counts = np.unique(self.lengths, return_counts=True)
        total = 0
        for ell, c in zip(uniq, counts):
            total += int(c)
            lines.append(f"{float(ell)!r},{total}")
        return "\n".join(lines) + "\n"


def _successor_table(graph: MetricGraph, mode: TransferMode):
    succ: list[list[tuple[int, float]]] = [[] for _ in graph.darts]
    for d in graph.darts:
        row = succ[d.id]
        for d2 in graph.out_darts(d.head):
            if mode is TransferMode.NON_BACKTRACKING and d2 == d.reverse:
                continue
            row.append((d2, graph.darts[d2].length))
    return succ


def _component_of(graph: MetricGraph, x: str) -> MetricGraph:
    for comp, _ in components(graph):
        if x in comp.vertex_set:
            return comp
    raise UnknownVertex(f"unknown vertex {x!r}")


def _branching(comp: MetricGraph, mode: TransferMode) -> float:
    return spectral_radius(build_transfer(comp, 0.0, mode)).rho


def _projected(comp: MetricGraph, mode: TransferMode, n_starts: int,
               r_max: float) -> float:
    if not comp.darts:
        return 0.0
    b = _branching(comp, mode)
    l_mean = float(np.mean([d.length for d in comp.darts]))
    levels = r_max / l_mean
    if b <= 1.05:
        return n_starts * (levels + 1.0) * len(comp.darts)
    return n_starts * (b ** levels - 1.0) / (b - 1.0)


def horizon_for_budget(graph: MetricGraph, x: str, target: int,
                       mode: TransferMode = TransferMode.NON_BACKTRACKING
                       ) -> float:
    """Horizon at which roughly ``target`` dart sequences from x exist."""
    comp = _component_of(graph, x)
    n_starts = max(len(comp.out_darts(x)), 1)
    b = _branching(comp, mode)
    l_mean = float(np.mean([d.length for d in comp.darts]))
    if b <= 1.05:
        return target / max(n_starts, 1) * l_mean
    return l_mean * math.log(target * (b - 1.0) / n_starts + 1.0) / math.log(b)


class _Budget:
    __slots__ = ("left", "r_max")

    def __init__(self, cap: int, r_max: float):
        self.left = cap
        self.r_max = r_max

    def spend(self, n: int):
        self.left -= n
        if self.left < 0:
            raise HorizonTooLarge(
                f"enumeration exceeded its cap; retry with a smaller "
                f"horizon (suggestion: {0.8 * self.r_max:.6g})",
                safe_horizon=0.8 * self.r_max)


def _dfs_paths(succ, heads, start, l0, r_max, target, budget: _Budget):
    """All dart sequences from ``start``; records every node when target
    is None, else only nodes whose head equals target."""
    out: list[float] = []
    stack = [(start, l0)]
    spent = 0
    while stack:
        d, cum = stack.pop()
        spent += 1
        if spent >= 8192:
            budget.spend(spent)
            spent = 0
        if target is None or heads[d] == target:
            out.append(cum)
        for d2, l2 in succ[d]:
            c2 = cum + l2
            if c2 < r_max:
                stack.append((d2, c2))
    budget.spend(spent)
    return out


def _dfs_primitive(succ, heads, start, l0, r_max, v, budget: _Budget):
    """Primitive cycles at v beginning with ``start``: the interior never
    visits v; a sequence ends the moment it arrives at v."""
    out: list[tuple[int, float]] = []  # (last dart, length)
    stack = [(start, l0)]
    spent = 0
    while stack:
        d, cum = stack.pop()
        spent += 1
        if spent >= 8192:
            budget.spend(spent)
            spent = 0
        if heads[d] == v:
            out.append((d, cum))
            continue
        for d2, l2 in succ[d]:
            c2 = cum + l2
            if c2 < r_max:
                stack.append((d2, c2))
    budget.spend(spent)
    return out


def enumerate_paths(graph: MetricGraph, spec: EnumerationSpec,
                    threads: int | None = None) -> CountProfile:
    """Exhaustively enumerate paths or cycles below ``spec.r_max``.

    Raises HorizonTooLarge (with a safe achievable horizon) when the
    projected or actual node count exceeds ``spec.cap``.  Workers may run
    per initial dart when ``threads`` (or ENTROGRAPH_THREADS) exceeds 1;
    the merged profile is sorted and therefore schedule-independent.
    """
    report = validate(graph)
    if report:
        raise PreconditionError("enumerate requires a valid graph")
    if spec.r_max <= 0:
        raise PreconditionError("horizon must be positive")
    if threads is None:
        threads = max(int(os.environ.get("ENTROGRAPH_THREADS", "1")), 1)

    if spec.kind is PathKind.PATHS_XY:
        base, endpoints = spec.x, (spec.x, spec.y)
        if spec.y not in graph.vertex_set:
            raise UnknownVertex(f"unknown vertex {spec.y!r}")
    elif spec.kind is PathKind.PATHS_FROM:
        base, endpoints = spec.x, (spec.x,)
    else:
        base, endpoints = spec.v, (spec.v,)
    comp = _component_of(graph, base)

    starts = comp.out_darts(base)
    projected = _projected(comp, spec.mode, len(starts), spec.r_max)
    if projected > spec.cap:
        b = _branching(comp, spec.mode)
        l_mean = float(np.mean([d.length for d in comp.darts]))
        if b > 1.05 and starts:
            safe = l_mean * math.log(
                0.8 * spec.cap * (b - 1.0) / len(starts) + 1.0) / math.log(b)
        else:
            safe = 0.8 * spec.r_max
        raise HorizonTooLarge(
            f"projected count {projected:.3g} exceeds cap {spec.cap:g}; "
            f"a horizon of about {safe:.6g} is achievable", safe_horizon=safe)

    succ = _successor_table(comp, spec.mode)
    heads = [d.head for d in comp.darts]
    budget = _Budget(int(1.25 * spec.cap) + 1024, spec.r_max)
    darts = comp.darts
    if spec.kind is PathKind.PRIMITIVE_CYCLES_AT:
        rev_index = {darts[s].reverse: k + 1 for k, s in enumerate(starts)}

        def run(k_s):
            k, s = k_s
            if darts[s].length >= spec.r_max:
                return k, []
            return k, _dfs_primitive(succ, heads, s, darts[s].length,
                                     spec.r_max, base, budget)

        results = _run_starts(run, list(enumerate(starts, 1)), threads)
        by_pair: dict[tuple[int, int], list[float]] = {}
        for k, rows in results:
            for last, cum in rows:
                by_pair.setdefault((k, rev_index[last]), []).append(cum)
        all_lengths = sorted(c for rows in by_pair.values() for c in rows)
        return CountProfile(
            spec.kind, spec.mode, spec.r_max,
            np.array(all_lengths), endpoints,
            by_pair={k: np.array(sorted(vs)) for k, vs in by_pair.items()},
            attachment_ids=tuple(starts))

    target = {PathKind.PATHS_XY: spec.y,
              PathKind.PATHS_FROM: None,
              PathKind.CYCLES_AT: base}[spec.kind]

    def run(k_s):
        k, s = k_s
        if darts[s].length >= spec.r_max:
            return k, []
        return k, _dfs_paths(succ, heads, s, darts[s].length, spec.r_max,
                             target, budget)

    results = _run_starts(run, list(enumerate(starts, 1)), threads)
    by_start = {k: np.array(sorted(rows)) for k, rows in results if rows}
    all_lengths = sorted(c for _, rows in results for c in rows)
    return CountProfile(
        spec.kind, spec.mode, spec.r_max, np.array(all_lengths), endpoints,
        by_start=by_start if spec.kind is PathKind.CYCLES_AT else {},
        attachment_ids=tuple(starts)
        if spec.kind is PathKind.CYCLES_AT else ())


def _run_starts(run, jobs, threads):
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run, jobs))
    return [run(job) for job in jobs]


# -- Laplace transform check (truncated integral plus tail bracket) -------

@dataclass(frozen=True)
class LaplaceReport:
    t: float
    f_value: float
    truncated: float
    tail_upper: float
    h_used: float
    m_used: float
    passed: bool


def _step_integral(profile: CountProfile, weight: float) -> float:
    """weight * integral_0^R N(r) e^{-weight r} dr, exact for the step
    function N (a finite sum of exponential segments)."""
    jumps = profile.jump_radii()
    total = 0.0
    for k, a in enumerate(jumps):
        b = jumps[k + 1] if k + 1 < len(jumps) else profile.r_max
        n_val = profile.count_le(a)
        total += n_val * (math.exp(-weight * a) - math.exp(-weight * b))
    return total


def _genfun_for_profile(profile: CountProfile, graph: MetricGraph, t: float):
    if profile.kind is PathKind.PATHS_XY:
        return f_path(graph, profile.endpoints[0], profile.endpoints[1], t,
                      mode=profile.mode)
    if profile.kind is PathKind.PATHS_FROM:
        return f_from(graph, profile.endpoints[0], t, mode=profile.mode)
    if profile.kind is PathKind.CYCLES_AT:
        v = profile.endpoints[0]
        return f_path(graph, v, v, t, mode=profile.mode)
    raise PreconditionError(
        "laplace_check supports path and cycle profiles only")


def _growth_rate(profile: CountProfile, graph: MetricGraph) -> float:
    if profile.mode is TransferMode.BACKTRACKING:
        return backtracking_entropy(graph, profile.endpoints[0]).h_transfer
    return volume_entropy(graph).h


def laplace_check(profile: CountProfile, graph: MetricGraph, t: float,
                  margin: float = 0.2, m_const: float | None = None,
                  h: float | None = None) -> LaplaceReport:
    """Check that f(t) equals t * integral N(r) e^{-tr} dr.

    The integral is truncated at the profile horizon R and the missing
    tail is bracketed by [0, t * M e^{(h-t)R} / (t-h)]; the report passes
    when the resolvent value of f lies inside the bracketed interval.
    ``m_const`` defaults to twice the largest N(r) e^{-hr} seen over the
    profile's upper half, an empirical stand-in for the proven constant
    when no BoundsReport is supplied.
    """
    if h is None:
        h = _growth_rate(profile, graph)
    if t < h + margin:
        raise MarginTooSmall(
            f"t = {t} is within {margin} of the growth rate {h:.6g}")
    if m_const is None:
        jumps = profile.jump_radii()
        tail = jumps[jumps >= 0.5 * profile.r_max]
        if tail.size == 0:
            tail = jumps
        m_const = 2.0 * max(
            (profile.count_le(ell) * math.exp(-h * ell) for ell in tail),
            default=1.0)
    truncated = _step_integral(profile, t)
    tail_upper = t * m_const * math.exp((h - t) * profile.r_max) / (t - h)
    f_val = _genfun_for_profile(profile, graph, t)
    if not f_val.converged:
        raise DivergentSeries(f"f diverges at t={t}")
    slack = 1e-9 * max(1.0, f_val.value)
    passed = (truncated - slack <= f_val.value
              <= truncated + tail_upper + slack)
    return LaplaceReport(float(t), f_val.value, truncated, tail_upper,
                         h, m_const, passed)


# -- recursion checks ------------------------------------------------------

def _default_radii(attained: np.ndarray, r_max: float, tie_guard: float,
                   want: int = 20) -> tuple[float, ...]:
    """Up to ``want`` check radii placed inside the gaps between attained
    cycle lengths, subdividing gaps evenly when there are fewer gaps than
    radii; every radius keeps a safe distance from attained values."""
    if attained.size == 0:
        return (r_max,)
    floor = 200.0 * tie_guard
    gaps = [(a, b) for a, b in zip(attained[:-1], attained[1:])
            if b - a > floor]
    gaps.append((float(attained[-1]), r_max))
    candidates: list[float] = []
    parts = 2
    while len(candidates) < want and parts <= 4096:
        candidates = []
        for a, b in gaps:
            step = (b - a) / parts
            if step <= floor:
                step, n_sub = (b - a) / 2.0, 2
            else:
                n_sub = parts
            candidates.extend(a + step * i for i in range(1, n_sub))
        parts *= 2
    candidates.sort()
    if len(candidates) <= want:
        return tuple(candidates)
    idx = np.unique(np.linspace(0, len(candidates) - 1, want).astype(int))
    return tuple(candidates[i] for i in idx)


@dataclass(frozen=True)
class RecursionReport:
    r_grid: tuple[float, ...]
    backtracking_mismatches: tuple[tuple[float, int, int], ...]
    non_backtracking_mismatches: tuple[tuple[float, int, int, int], ...]

    @property
    def passed(self) -> bool:
        return not self.backtracking_mismatches \
            and not self.non_backtracking_mismatches


def verify_recursions(graph: MetricGraph, v: str,
                      r_grid=None, r_max: float | None = None,
                      cap: int = DEFAULT_CAP,
                      tie_guard: float = 1e-9) -> RecursionReport:
    """Check the cycle-count recursions as exact integer identities.

    Backtracking: N_v(r) = k + sum_i N_v(r - l_i) over the k primitive
    cycle lengths l_i < r.  Non-backtracking, per starting dart e_i:
    N_i(r) = sum_j sum_{l^ij_m < r} (1 + sum_{k != j} N_k(r - l^ij_m)).
    Radii default to 20 midpoints between attained cycle lengths, which
    keeps every comparison strictly away from ties.

    Every count is evaluated at q - tie_guard.  A cycle length is
    accumulated in a different summation order on the two sides of the
    identity, so the float values differ by a few ulps; any radius
    farther than tie_guard from the attained lengths therefore yields
    the exact integer identity (the inner queries r - l only ever
    approach attained values that recompose to full cycle lengths, which
    the grid already avoids).
    """
    if r_grid is not None:
        r_grid = tuple(float(r) for r in r_grid)
        r_max = max(r_grid)
    if r_max is None:
        raise PreconditionError("either r_grid or r_max is required")

    bt_cyc = enumerate_paths(graph, EnumerationSpec(
        PathKind.CYCLES_AT, r_max, TransferMode.BACKTRACKING, v=v, cap=cap))
    bt_prim = enumerate_paths(graph, EnumerationSpec(
        PathKind.PRIMITIVE_CYCLES_AT, r_max, TransferMode.BACKTRACKING,
        v=v, cap=cap))
    nb_cyc = enumerate_paths(graph, EnumerationSpec(
        PathKind.CYCLES_AT, r_max, TransferMode.NON_BACKTRACKING, v=v,
        cap=cap))
    nb_prim = enumerate_paths(graph, EnumerationSpec(
        PathKind.PRIMITIVE_CYCLES_AT, r_max, TransferMode.NON_BACKTRACKING,
        v=v, cap=cap))

    if r_grid is None:
        r_grid = _default_radii(
            np.unique(np.concatenate([nb_cyc.lengths, bt_cyc.lengths]))
            if bt_cyc.lengths.size else np.array([]), r_max, tie_guard)

    n = graph.degree(v)
    empty = np.array([])

    def n_of(arr, q):
        return int(np.searchsorted(arr, q - tie_guard, side="left"))

    bt_bad: list[tuple[float, int, int]] = []
    nb_bad: list[tuple[float, int, int, int]] = []
    for r in r_grid:
        lhs = n_of(bt_cyc.lengths, r)
        prim = bt_prim.lengths[bt_prim.lengths < r - tie_guard]
        rhs = len(prim) + sum(n_of(bt_cyc.lengths, r - l) for l in prim)
        if lhs != rhs:
            bt_bad.append((r, lhs, rhs))
        for i in range(1, n + 1):
            lhs = n_of(nb_cyc.by_start.get(i, empty), r)
            rhs = 0
            for j in range(1, n + 1):
                prim_ij = nb_prim.by_pair.get((i, j), empty)
                for l in prim_ij[prim_ij < r - tie_guard]:
                    rhs += 1
                    for k in range(1, n + 1):
                        if k == j:
                            continue
                        rhs += n_of(nb_cyc.by_start.get(k, empty), r - l)
            if lhs != rhs:
                nb_bad.append((r, i, lhs, rhs))
    return RecursionReport(tuple(r_grid), tuple(bt_bad), tuple(nb_bad))


# -- growth bounds ---------------------------------------------------------

@dataclass(frozen=True)
class BoundsReport:
    """Two-sided growth bound check for cycle counts at a vertex."""

    h: float
    n: int
    m_formula: float
    m_empirical: float
    violations: tuple[tuple[float, int, float], ...]
    perron: np.ndarray
    a_matrix: np.ndarray
    rho_a: float
    r_max: float

    @property
    def passed(self) -> bool:
        return not self.violations


def _require_reduced_hyperbolic(graph: MetricGraph):
    if validate(graph):
        raise PreconditionError("graph is not valid")
    if len(components(graph)) != 1:
        raise PreconditionError("a connected graph is required")
    if first_betti(graph)[0] < 2:
        raise PreconditionError("at least two independent cycles required")
    if min(graph.degree(v) for v in graph.vertices) < 3:
        raise PreconditionError(
            "a reduced graph (all degrees >= 3) is required; call reduce()")


def growth_bounds(graph: MetricGraph, v: str, r_max: float,
                  tol: float = 1e-8, cap: int = DEFAULT_CAP) -> BoundsReport:
    """Verify m e^{hr} <= N_v(r) <= M e^{hr} with the explicit constant
    M = (n-1)/(n-2) * (sum w_i) / (min w_i).

    A(h) is assembled from primitive-cycle generating functions at v; its
    Perron vector w gives the constant and its spectral radius must come
    out as 1, tying the generating-function, spectral and entropy
    pipelines together.  The lower constant is reported empirically as
    the minimum of N_v(r) e^{-hr} over the enumerated range.
    """
    _require_reduced_hyperbolic(graph)
    n = graph.degree(v)
    h = volume_entropy(graph).h
    g_mat = primitive_matrix(graph, v, h)
    a_mat = g_mat.sum(axis=1, keepdims=True) - g_mat
    perron = spectral_radius(a_mat)
    rho_a = perron.rho
    if abs(rho_a - 1.0) > tol:
        raise NonConvergence(
            f"pipeline consistency failure: rho(A(h)) = {rho_a:.12g} "
            f"differs from 1 by more than {tol:g}")
    w = perron.right
    if np.min(w) <= 0:
        raise PreconditionError("Perron vector is not strictly positive")
    m_formula = (n - 1) / (n - 2) * float(np.sum(w) / np.min(w))

    profile = enumerate_paths(graph, EnumerationSpec(
        PathKind.CYCLES_AT, r_max, TransferMode.NON_BACKTRACKING, v=v,
        cap=cap))
    violations: list[tuple[float, int, float]] = []
    m_candidates: list[float] = []
    jumps = profile.jump_radii()
    for idx, ell in enumerate(jumps):
        n_at = profile.count_le(ell)
        bound = m_formula * math.exp(h * ell)
        if n_at > bound * (1.0 + 1e-12):
            violations.append((float(ell), n_at, bound))
        if idx > 0:
            m_candidates.append(profile.count(ell) * math.exp(-h * ell))
    m_candidates.append(profile.count(r_max) * math.exp(-h * r_max))
    m_emp = min(m_candidates) if m_candidates else 0.0
    return BoundsReport(h, n, m_formula, m_emp, tuple(violations), w,
                        a_mat, rho_a, r_max)


@dataclass(frozen=True)
class BacktrackingBoundReport:
    h: float
    l1: float
    m_formula: float
    violations: tuple[tuple[float, int, float], ...]
    r_max: float

    @property
    def passed(self) -> bool:
        return not self.violations


def backtracking_bound(graph: MetricGraph, v: str, r_max: float,
                       cap: int = DEFAULT_CAP) -> BacktrackingBoundReport:
    """Check N_v(r) <= M e^{h r} for backtracking cycles, with the
    closed-form constant M = max(2, 3 e^{-h l1}) and l1 the shortest
    primitive cycle length at v."""
    prim = enumerate_paths(graph, EnumerationSpec(
        PathKind.PRIMITIVE_CYCLES_AT, r_max, TransferMode.BACKTRACKING,
        v=v, cap=cap))
    if prim.lengths.size < 2:
        raise PreconditionError(
            "the backtracking bound needs at least two primitive cycles")
    l1 = float(prim.lengths[0])
    h = backtracking_entropy(graph, v).h_transfer
    m_formula = max(2.0, 3.0 * math.exp(-h * l1))
    profile = enumerate_paths(graph, EnumerationSpec(
        PathKind.CYCLES_AT, r_max, TransferMode.BACKTRACKING, v=v, cap=cap))
    violations = []
    for ell in profile.jump_radii():
        n_at = profile.count_le(ell)
        bound = m_formula * math.exp(h * ell)
        if n_at > bound * (1.0 + 1e-12):
            violations.append((float(ell), n_at, bound))
    return BacktrackingBoundReport(h, l1, m_formula, tuple(violations), r_max)


# -- backtracking entropy (two routes) -------------------------------------

@dataclass(frozen=True)
class BacktrackingEntropy:
    h_transfer: float
    h_g_root: float
    residual_transfer: float
    residual_g: float


def _primitive_cycle_genfun(comp: MetricGraph, v: str, t: float,
                            mode: TransferMode = TransferMode.BACKTRACKING,
                            margin: float = 1e-9) -> float:
    """g(t) for primitive cycles at v: a resolvent solve on the transfer
    matrix with v split into source/sink copies (rows of darts arriving
    at v are masked, so no sequence continues through v)."""
    tm = build_transfer(comp, t, mode)
    masked = tm.matrix.copy()
    tau = np.zeros(len(comp.darts))
    for d in comp.darts:
        if d.head == v:
            masked[d.id, :] = 0.0
            tau[d.id] = 1.0
    if spectral_radius(masked).rho >= 1.0 - margin:
        raise DivergentSeries(f"primitive-cycle series diverges at t={t}")
    u = solve_resolvent(masked, tau, margin=margin)
    s = np.zeros(len(comp.darts))
    for d in comp.out_darts(v):
        s[d] = math.exp(-t * comp.darts[d].length)
    return float(s @ u)


def backtracking_entropy(graph: MetricGraph, v: str,
                         tol: float = 1e-10) -> BacktrackingEntropy:
    """Growth rate of backtracking cycles at v, computed two ways.

    Route 1 solves rho(B_bt(t)) = 1 on the component of v; route 2 solves
    g(t) = 1 for the primitive-cycle generating function.  The two roots
    agree within solver tolerance; both are returned.
    """
    comp = _component_of(graph, v)
    if not comp.darts:
        return BacktrackingEntropy(0.0, 0.0, 0.0, 0.0)
    lengths = np.array([d.length for d in comp.darts])
    problem = _RhoRootProblem(
        lambda t: build_transfer(comp, t, TransferMode.BACKTRACKING).matrix,
        lengths, tol, 10_000)
    t_hi0 = math.log(max(comp.max_degree(), 2)) / comp.min_length()
    h1, resid1, _, _ = problem.solve(t_hi0)

    def g_minus_one(t: float) -> float:
        return _primitive_cycle_genfun(comp, v, t,
                                       margin=min(1e-9, tol)) - 1.0

    # Find a converged evaluation, walking up from 0 past the divergence
    # boundary of the interior dynamics when necessary.
    t_div = None
    t0 = 0.0
    try:
        f0 = g_minus_one(0.0)
    except DivergentSeries:
        t_div, off = 0.0, 1e-3 * comp.min_length()
        f0 = None
        for _ in range(200):
            try:
                f0 = g_minus_one(off)
                t0 = off
                break
            except DivergentSeries:
                t_div = off
                off *= 2.0
        if f0 is None:
            raise NonConvergence(
                "primitive-cycle series diverges on the whole probe range")
    if f0 > 0:
        lo, f_lo = t0, f0
        hi = f_hi = None
    elif t_div is None:
        # g converges at 0 with g(0) <= 1: the root is at t <= 0 and the
        # growth rate is 0 (finitely many cycles or exact criticality).
        return BacktrackingEntropy(h1, 0.0, resid1, abs(min(f0, 0.0)))
    else:
        # Root squeezed between the divergence boundary and t0.
        lo = f_lo = None
        hi, f_hi = t0, f0
        for _ in range(200):
            if hi - t_div <= 1e-13 * max(1.0, hi):
                raise NonConvergence(
                    "primitive-cycle root pinched at the divergence "
                    "boundary")
            mid = 0.5 * (t_div + hi)
            try:
                f_mid = g_minus_one(mid)
            except DivergentSeries:
                t_div = mid
                continue
            if f_mid > 0:
                lo, f_lo = mid, f_mid
                break
            hi, f_hi = mid, f_mid
        if lo is None:
            raise NonConvergence(
                "could not bracket the primitive-cycle root from below")
    if hi is None:
        hi = max(2.0 * h1, lo + 1.0 / comp.min_length())
        f_hi = g_minus_one(hi)
        guard = 0
        while f_hi > 0:
            hi *= 2.0
            f_hi = g_minus_one(hi)
            guard += 1
            if guard > 100:
                raise NonConvergence("could not bracket g(t) = 1 from above")
    h2, f2, _ = bracketed_root(g_minus_one, lo, hi, f_lo, f_hi)
    return BacktrackingEntropy(h1, h2, resid1, abs(f2))
