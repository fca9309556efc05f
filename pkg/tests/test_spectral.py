"""Transfer matrices, Perron data and resolvent solves."""

import math

import numpy as np
import pytest

from entrograph import (DivergentSeries, TransferMode, build_transfer,
                        solve_resolvent, spectral_radius)
from helpers import c4, complete4, dumbbell, eig_rho, rose, segment, theta

NB = TransferMode.NON_BACKTRACKING
BT = TransferMode.BACKTRACKING


def test_rose2_transfer_rows_have_three_ones_at_t0():
    tm = build_transfer(rose(2), 0.0, NB)
    assert tm.matrix.shape == (4, 4)
    assert np.all(np.isin(tm.matrix, (0.0, 1.0)))
    assert np.all(tm.matrix.sum(axis=1) == 3)
    # a dart never transitions to its own reversal
    for d in rose(2).darts:
        assert tm.matrix[d.id, d.reverse] == 0.0


def test_segment_nonbacktracking_transfer_is_zero():
    tm = build_transfer(segment(), 1.3, NB)
    assert np.all(tm.matrix == 0.0)


def test_segment_backtracking_transfer_at_ln2():
    tm = build_transfer(segment(), math.log(2.0), BT)
    expected = np.array([[0.0, 0.5], [0.5, 0.0]])
    assert np.allclose(tm.matrix, expected)


def test_transfer_entries_bounded_by_min_length_weight():
    g = dumbbell()
    t = 0.8
    tm = build_transfer(g, t, NB)
    positive = tm.matrix[tm.matrix > 0]
    assert np.all(positive <= math.exp(-t * g.min_length()) + 1e-15)


def test_spectral_radius_zero_matrix():
    data = spectral_radius(np.zeros((3, 3)))
    assert data.rho == 0.0
    assert data.converged
    assert np.max(np.abs(np.zeros((3, 3)) @ data.right)) == 0.0


def test_spectral_radius_rose2_closed_form():
    for t in (0.0, 0.5, math.log(3.0), 2.0):
        rho = spectral_radius(build_transfer(rose(2), t, NB)).rho
        assert rho == pytest.approx(3.0 * math.exp(-t), abs=1e-11)


def test_spectral_radius_block_diagonal_max():
    top = build_transfer(rose(2), 0.0, NB).matrix
    mat = np.zeros((7, 7))
    mat[:4, :4] = top
    assert spectral_radius(mat).rho == pytest.approx(3.0, abs=1e-11)


def test_spectral_radius_matches_eigvals_on_seeded_matrices():
    rng = np.random.default_rng(7)
    for _ in range(8):
        n = rng.integers(2, 9)
        mat = rng.random((n, n)) * (rng.random((n, n)) < 0.6)
        assert spectral_radius(mat).rho == pytest.approx(
            eig_rho(mat), abs=1e-9)


def test_perron_vectors_residual_invariant():
    mat = build_transfer(complete4(), 0.4, NB).matrix
    data = spectral_radius(mat, tol=1e-13)
    scale = np.max(np.abs(mat).sum(axis=1))
    for vec, m in ((data.right, mat), (data.left, mat.T)):
        resid = np.max(np.abs(m @ vec - data.rho * vec))
        assert resid <= 1e-12 * scale * np.max(vec)
    assert data.right.sum() == pytest.approx(1.0)
    assert data.left.sum() == pytest.approx(1.0)


def test_periodic_support_converges():
    # C4's dart graph is two disjoint 4-cycles: period 4 without a shift.
    mat = build_transfer(c4(), 0.3, NB).matrix
    assert spectral_radius(mat).rho == pytest.approx(math.exp(-0.3),
                                                     abs=1e-11)


def test_rho_strictly_decreasing_in_t():
    for g in (rose(2), theta(), complete4(), dumbbell()):
        pairs = [(0.0, 0.4), (0.4, 1.1), (1.1, 2.3)]
        for t1, t2 in pairs:
            r1 = spectral_radius(build_transfer(g, t1, NB)).rho
            r2 = spectral_radius(build_transfer(g, t2, NB)).rho
            assert r2 < r1


def test_log_rho_convex_in_t():
    for g in (rose(2), complete4(), dumbbell(), theta((1.0, 1.4, 2.2))):
        t1, t2 = 0.2, 1.8
        mid = 0.5 * (t1 + t2)
        logs = [math.log(spectral_radius(build_transfer(g, t, NB)).rho)
                for t in (t1, mid, t2)]
        assert logs[1] <= 0.5 * (logs[0] + logs[2]) + 1e-9


def test_backtracking_rho_at_zero_is_max_degree_on_regular_graphs():
    assert spectral_radius(build_transfer(complete4(), 0.0, BT)).rho == \
        pytest.approx(3.0, abs=1e-11)
    assert spectral_radius(build_transfer(theta(), 0.0, BT)).rho == \
        pytest.approx(3.0, abs=1e-11)


def test_resolvent_identity_and_scalar():
    v = np.array([1.0, -2.0, 3.0])
    assert np.allclose(solve_resolvent(np.zeros((3, 3)), v), v)
    assert solve_resolvent(np.array([[0.5]]), np.array([1.0]))[0] == \
        pytest.approx(2.0)


def test_resolvent_rose2_uniform():
    mat = build_transfer(rose(2), math.log(4.0), NB)
    u = solve_resolvent(mat, np.ones(4))
    assert np.allclose(u, 4.0, atol=1e-10)


def test_resolvent_raises_on_divergence():
    mat = build_transfer(rose(2), math.log(3.0), NB)  # rho exactly 1
    with pytest.raises(DivergentSeries):
        solve_resolvent(mat, np.ones(4))


def test_resolvent_residual_tolerance():
    mat = build_transfer(complete4(), 0.75, NB).matrix
    rhs = np.linspace(1.0, 2.0, mat.shape[0])
    u = solve_resolvent(mat, rhs)
    resid = np.max(np.abs(rhs - (np.eye(len(rhs)) - mat) @ u))
    assert resid <= 1e-10 * np.max(np.abs(rhs))


def test_resolvent_matches_truncated_neumann_series():
    mat = build_transfer(complete4(), 0.9, NB).matrix
    rho = spectral_radius(mat).rho
    rhs = np.ones(mat.shape[0])
    u = solve_resolvent(mat, rhs)
    for k in (4, 9, 16):
        partial = np.zeros_like(rhs)
        term = rhs.copy()
        for _ in range(k + 1):
            partial += term
            term = mat @ term
        bound = rho ** (k + 1) / (1.0 - rho) * np.max(np.abs(rhs))
        assert np.max(np.abs(u - partial)) <= bound + 1e-12
