"""Nonnegative-matrix machinery for dart-indexed transfer operators.

The weighted transfer matrix B(t) carries weight e^{-t*l(d')} on the
entered dart d' (column-weight convention, fixed project-wide so the
resolvent formulas for path generating functions are unambiguous).  The
spectral radius is computed per strongly connected component of the
support digraph with power iteration on (I + M), which neutralizes
periodic supports such as the dart graph of an even cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import DivergentSeries, NonConvergence
from .graph import MetricGraph


class TransferMode(Enum):
    NON_BACKTRACKING = "non-backtracking"
    BACKTRACKING = "backtracking"


@dataclass(frozen=True)
class TransferMatrix:
    """Dart-indexed weighted transition matrix at parameter t."""

    matrix: np.ndarray
    dart_lengths: np.ndarray
    t: float
    mode: TransferMode


@dataclass(frozen=True)
class PerronData:
    """Spectral radius with Perron vectors of the maximizing component.

    ``right`` and ``left`` are the unit-sum Perron vectors of the
    strongly connected component attaining the radius, extended by zeros
    to full dimension.  ``converged`` certifies the residual
    ||B r - rho r||_inf <= tol ||B||_inf ||r||_inf on that component.
    """

    rho: float
    right: np.ndarray
    left: np.ndarray
    converged: bool
    iterations: int


def build_transfer(graph: MetricGraph, t: float,
                   mode: TransferMode = TransferMode.NON_BACKTRACKING
                   ) -> TransferMatrix:
    """Weighted dart-transition matrix of a graph at parameter t >= 0.

    Entry (d, d') is e^{-t*l(d')} when head(d) = tail(d'), excluding
    d' = reverse(d) in non-backtracking mode; all other entries are 0.
    """
    n = len(graph.darts)
    lengths = np.array([d.length for d in graph.darts], dtype=float)
    weights = np.exp(-t * lengths)
    mat = np.zeros((n, n))
    for d in graph.darts:
        for d2 in graph.out_darts(d.head):
            if mode is TransferMode.NON_BACKTRACKING and d2 == d.reverse:
                continue
            mat[d.id, d2] = weights[d2]
    return TransferMatrix(mat, lengths, float(t), mode)


def _as_array(matrix) -> np.ndarray:
    if isinstance(matrix, TransferMatrix):
        return matrix.matrix
    return np.asarray(matrix, dtype=float)


def _power_block(block: np.ndarray, tol: float, max_iter: int):
    """Perron value/vector of an irreducible nonnegative block.

    Iterates x <- (s I + B) x with unit-sum normalization, where the
    shift s matches the row-sum scale of B: it makes the iteration
    primitive regardless of the block's period without drowning
    small-norm blocks.  Convergence is declared at
    ||B x - rho x||_inf <= tol ||B||_inf ||x||_inf, the scale-invariant
    residual floating point can reach.
    """
    n = block.shape[0]
    if n == 1:
        return float(block[0, 0]), np.ones(1), 1
    x = np.full(n, 1.0 / n)
    scale = max(float(np.max(np.abs(block).sum(axis=1))), 1e-300)
    for it in range(1, max_iter + 1):
        bx = block @ x
        rho = float(bx.sum())  # x has unit sum: Rayleigh value without
        resid = np.max(np.abs(bx - rho * x))  # a 1 + rho cancellation
        if resid <= tol * scale * max(np.max(x), 1e-300):
            return rho, x, it
        y = scale * x + bx
        x = y / y.sum()
    raise NonConvergence(
        f"power iteration residual {resid:.3e} above tol {tol:.1e} "
        f"after {max_iter} iterations (n={n})")


def spectral_radius(matrix, tol: float = 1e-12,
                    max_iter: int = 10_000) -> PerronData:
    """Spectral radius of a square nonnegative matrix with Perron vectors.

    The radius is the maximum over the strongly connected components of
    the support digraph; right/left vectors belong to the maximizing
    component and are extended by zeros.  Raises NonConvergence when the
    power-iteration residual fails to reach ``tol`` within ``max_iter``.
    """
    mat = _as_array(matrix)
    n = mat.shape[0]
    if n == 0:
        return PerronData(0.0, np.zeros(0), np.zeros(0), True, 0)
    support = csr_matrix(mat > 0)
    n_comp, labels = connected_components(support, directed=True,
                                          connection="strong")
    groups: dict[int, list[int]] = {}
    for i, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(i)

    best_rho, best_idx, total_iters = 0.0, None, 0
    best_vecs = None
    for idx in groups.values():
        if len(idx) == 1 and mat[idx[0], idx[0]] == 0.0:
            continue  # trivial component, eigenvalue 0
        block = mat[np.ix_(idx, idx)]
        rho, right, its = _power_block(block, tol, max_iter)
        total_iters += its
        if rho > best_rho:
            _, left, its_l = _power_block(block.T, tol, max_iter)
            total_iters += its_l
            best_rho, best_idx, best_vecs = rho, idx, (right, left)

    if best_idx is None:
        # Nilpotent support: radius 0; any zero column (row) carries an
        # exact right (left) eigenvector.
        right = np.zeros(n)
        left = np.zeros(n)
        right[int(np.argmin(mat.sum(axis=0)))] = 1.0
        left[int(np.argmin(mat.sum(axis=1)))] = 1.0
        return PerronData(0.0, right, left, True, total_iters)

    right = np.zeros(n)
    left = np.zeros(n)
    right[best_idx] = best_vecs[0]
    left[best_idx] = best_vecs[1]
    return PerronData(float(best_rho), right, left, True, total_iters)


def solve_resolvent(matrix, rhs, margin: float = 1e-9,
                    residual_tol: float = 1e-10) -> np.ndarray:
    """Solve (I - M) u = rhs, i.e. sum the Neumann series of M on rhs.

    Requires spectral_radius(M) < 1 - margin; otherwise the series
    diverges and DivergentSeries is raised (callers map this to
    generating-function divergence at t <= h).  Dense LU with iterative
    refinement keeps the residual below ``residual_tol * ||rhs||_inf``
    whenever float64 allows.
    """
    mat = _as_array(matrix)
    rhs = np.asarray(rhs, dtype=float)
    if mat.shape[0] == 0:
        return np.zeros(0)
    rho = spectral_radius(mat).rho
    if rho >= 1.0 - margin:
        raise DivergentSeries(
            f"resolvent precondition failed: spectral radius {rho:.12g} "
            f">= 1 - {margin:g}", rho=rho)
    a = np.eye(mat.shape[0]) - mat
    u = np.linalg.solve(a, rhs)
    scale = max(float(np.max(np.abs(rhs))), 1e-300)
    for _ in range(3):
        r = rhs - a @ u
        if float(np.max(np.abs(r))) <= residual_tol * scale:
            break
        u = u + np.linalg.solve(a, r)
    return u
