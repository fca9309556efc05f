"""Path generating functions evaluated through resolvent solves.

f_xy(t) sums e^{-l(p) t} over all nonempty non-backtracking paths from x
to y.  With the column-weighted transfer matrix B(t) this is the bilinear
form s_x (I - B(t))^{-1} tau_y, where s_x weights the darts leaving x by
e^{-t l} and tau_y flags the darts arriving at y.  Values converge
exactly for t above the component entropy; at or below it the evaluation
reports Divergent status instead of raising.

The empty path is never counted, including for x = y: paths are edge
concatenations, so f_xx starts at the shortest nonempty cycle through x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DivergentSeries, InvalidDartIndex, UnknownVertex
from .graph import Dart, MetricGraph, components, delete_vertex
from .spectral import TransferMode, build_transfer, solve_resolvent, spectral_radius


class GenFunKind(Enum):
    PATH_XY = "path-xy"
    PATH_FROM = "path-from"
    PRIMITIVE_IJ = "primitive-ij"


class GenFunStatus(Enum):
    CONVERGED = "converged"
    DIVERGENT = "divergent"


@dataclass(frozen=True)
class GenFunValue:
    """Evaluation of a generating function at a real parameter t."""

    value: float
    t: float
    kind: GenFunKind
    endpoints: tuple
    status: GenFunStatus
    disconnected: bool = False

    @property
    def converged(self) -> bool:
        return self.status is GenFunStatus.CONVERGED


def _component_of(graph: MetricGraph, x: str) -> MetricGraph:
    for comp, _ in components(graph):
        if x in comp.vertex_set:
            return comp
    raise UnknownVertex(f"unknown vertex {x!r}")


class _Resolvent:
    """Shared (graph component, t) factorization context.

    Evaluates many path generating functions against one transfer matrix
    build and one dense solve; ``ok`` is False when the series diverges.
    """

    def __init__(self, comp: MetricGraph, t: float,
                 mode: TransferMode = TransferMode.NON_BACKTRACKING,
                 margin: float = 1e-9):
        self.comp = comp
        self.t = float(t)
        self.mode = mode
        tm = build_transfer(comp, self.t, mode)
        self.matrix = tm.matrix
        self.weights = np.exp(-self.t * tm.dart_lengths)
        self.ok = spectral_radius(self.matrix).rho < 1.0 - margin
        self._solution_cache: dict[tuple, np.ndarray] = {}

    def start_vector(self, x: str) -> np.ndarray:
        s = np.zeros(len(self.comp.darts))
        for d in self.comp.out_darts(x):
            s[d] = self.weights[d]
        return s

    def arrive_indicator(self, ys: tuple[str, ...]) -> np.ndarray:
        tau = np.zeros(len(self.comp.darts))
        for d in self.comp.darts:
            if d.head in ys:
                tau[d.id] = 1.0
        return tau

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        if not self.ok:
            raise DivergentSeries("series diverges at this parameter")
        return solve_resolvent(self.matrix, rhs)

    def path_value(self, x: str, y: str) -> float:
        key = ("y", y)
        if key not in self._solution_cache:
            self._solution_cache[key] = self.solve(self.arrive_indicator((y,)))
        val = float(self.start_vector(x) @ self._solution_cache[key])
        return max(val, 0.0)

    def from_value(self, x: str) -> float:
        key = ("all",)
        if key not in self._solution_cache:
            self._solution_cache[key] = self.solve(
                np.ones(len(self.comp.darts)))
        return max(float(self.start_vector(x) @ self._solution_cache[key]), 0.0)


def f_path(graph: MetricGraph, x: str, y: str, t: float,
           mode: TransferMode = TransferMode.NON_BACKTRACKING,
           margin: float = 1e-9) -> GenFunValue:
    """Generating function f_xy(t) of paths from x to y.

    Returns value 0 with the ``disconnected`` flag when x and y lie in
    different components (the path set is empty); a Divergent status when
    t is at or below the component entropy.
    """
    if y not in graph.vertex_set:
        raise UnknownVertex(f"unknown vertex {y!r}")
    comp = _component_of(graph, x)
    if y not in comp.vertex_set:
        return GenFunValue(0.0, float(t), GenFunKind.PATH_XY, (x, y),
                           GenFunStatus.CONVERGED, disconnected=True)
    ctx = _Resolvent(comp, t, mode, margin)
    if not ctx.ok:
        return GenFunValue(math.inf, float(t), GenFunKind.PATH_XY, (x, y),
                           GenFunStatus.DIVERGENT)
    return GenFunValue(ctx.path_value(x, y), float(t), GenFunKind.PATH_XY,
                       (x, y), GenFunStatus.CONVERGED)


def f_from(graph: MetricGraph, x: str, t: float,
           mode: TransferMode = TransferMode.NON_BACKTRACKING,
           margin: float = 1e-9) -> GenFunValue:
    """Generating function f_x(t) = sum_y f_xy(t); one resolvent solve."""
    comp = _component_of(graph, x)
    ctx = _Resolvent(comp, t, mode, margin)
    if not ctx.ok:
        return GenFunValue(math.inf, float(t), GenFunKind.PATH_FROM, (x,),
                           GenFunStatus.DIVERGENT)
    return GenFunValue(ctx.from_value(x), float(t), GenFunKind.PATH_FROM,
                       (x,), GenFunStatus.CONVERGED)


def attachment_darts(graph: MetricGraph, v: str) -> tuple[Dart, ...]:
    """Darts leaving v in dart-id order; defines the 1-based indexing of
    the primitive-cycle bookkeeping at v (a loop contributes both of its
    darts)."""
    return tuple(graph.darts[d] for d in graph.out_darts(v))


def g_primitive(graph: MetricGraph, v: str, i: int, j: int, t: float,
                margin: float = 1e-9) -> GenFunValue:
    """Generating function g_ij(t) of primitive cycles at v.

    A primitive cycle leaves v along attachment dart e_i, returns along
    the reversal of attachment dart e_j, and does not visit v in its
    interior.  For non-loop attachments:

        g_ij(t) = e^{-(l_i + l_j) t} (f_{v_i v_j}(t) + [v_i = v_j, i != j])

    where f is taken in the graph with v deleted and the indicator adds
    the empty-interior bigon available when e_i, e_j are distinct parallel
    edges.  A loop dart e_i at v is itself a primitive cycle: it
    contributes e^{-l_i t} to g_ij exactly when e_j is its reversal, and
    cannot occur inside any longer primitive cycle.
    """
    darts = attachment_darts(graph, v)
    n = len(darts)
    if not (1 <= i <= n) or not (1 <= j <= n):
        raise InvalidDartIndex(
            f"indices must lie in 1..{n}, got ({i}, {j})")
    ei, ej = darts[i - 1], darts[j - 1]
    endpoints = (v, i, j)
    if ei.head == v or ej.head == v:  # loop dart at v
        if ei.head == v and ej.id == ei.reverse:
            value = math.exp(-t * ei.length)
        else:
            value = 0.0
        return GenFunValue(value, float(t), GenFunKind.PRIMITIVE_IJ,
                           endpoints, GenFunStatus.CONVERGED)
    inner = f_path(delete_vertex(graph, v), ei.head, ej.head, t,
                   margin=margin)
    if not inner.converged:
        return GenFunValue(math.inf, float(t), GenFunKind.PRIMITIVE_IJ,
                           endpoints, GenFunStatus.DIVERGENT)
    bigon = 1.0 if (ei.head == ej.head and i != j) else 0.0
    value = math.exp(-(ei.length + ej.length) * t) * (inner.value + bigon)
    return GenFunValue(value, float(t), GenFunKind.PRIMITIVE_IJ, endpoints,
                       GenFunStatus.CONVERGED)


def primitive_matrix(graph: MetricGraph, v: str, t: float,
                     margin: float = 1e-9) -> np.ndarray:
    """All g_ij(t) at v as an n x n array (one deletion, one solve pass).

    Raises DivergentSeries when t is at or below the entropy of the graph
    with v removed.
    """
    darts = attachment_darts(graph, v)
    n = len(darts)
    out = np.zeros((n, n))
    interior = delete_vertex(graph, v)
    contexts: dict[frozenset, _Resolvent] = {}
    comps = components(interior)
    for a in range(n):
        ea = darts[a]
        if ea.head == v:
            rev = ea.reverse
            for b in range(n):
                if darts[b].id == rev:
                    out[a, b] = math.exp(-t * ea.length)
            continue
        for b in range(n):
            eb = darts[b]
            if eb.head == v:
                continue
            f_val = 0.0
            comp = next((c for c, _ in comps if ea.head in c.vertex_set), None)
            if comp is not None and eb.head in comp.vertex_set:
                key = comp.vertex_set
                if key not in contexts:
                    contexts[key] = _Resolvent(comp, t, margin=margin)
                ctx = contexts[key]
                if not ctx.ok:
                    raise DivergentSeries(
                        f"g_ij diverges at t={t}: interior entropy reached")
                f_val = ctx.path_value(ea.head, eb.head)
            bigon = 1.0 if (ea.head == eb.head and a != b) else 0.0
            out[a, b] = math.exp(-(ea.length + eb.length) * t) * (f_val + bigon)
    return out


def check_symmetry(graph: MetricGraph, x: str, y: str, t: float) -> float:
    """|f_xy(t) - f_yx(t)|; path reversal makes this 0 up to float error."""
    fxy = f_path(graph, x, y, t)
    fyx = f_path(graph, y, x, t)
    if not (fxy.converged and fyx.converged):
        raise DivergentSeries(f"f_xy diverges at t={t}")
    return abs(fxy.value - fyx.value)
