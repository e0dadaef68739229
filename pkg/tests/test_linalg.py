"""Rank-aware helpers: thresholds, frames, pseudoinverse."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from kreinls import RankThresholdAmbiguous
from kreinls.linalg import (g_orthonormalize, hpd_sqrt, herm_sign_and_root,
                            null_frame, numerical_rank, orth_frame, pinv,
                            subspace_intersection, subspace_sum)


def test_numerical_rank_basic():
    assert numerical_rank(np.array([1.0, 0.5, 1e-15]), 3) == 2
    assert numerical_rank(np.array([0.0, 0.0]), 2) == 0
    assert numerical_rank(np.array([]), 0) == 0


def test_numerical_rank_ambiguity_guard():
    # a singular value inside the decade around dim * smax * 1e-12
    with pytest.raises(RankThresholdAmbiguous) as exc:
        numerical_rank(np.array([1.0, 3e-12]), 2)
    assert exc.value.sigma == pytest.approx(3e-12)
    # explicit threshold overrides the guard placement
    assert numerical_rank(np.array([1.0, 3e-12]), 2, rank_tol=1e-9) == 1


def test_numerical_rank_context_anchors_noise():
    # a pure-noise block: full rank against itself, rank zero in context
    noise = np.array([3e-17, 1e-17])
    assert numerical_rank(noise, 2) == 2
    assert numerical_rank(noise, 2, context=1.0) == 0


def test_orth_and_null_frames():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((5, 3)) @ rng.standard_normal((3, 5))
    col = orth_frame(a)
    ker = null_frame(a)
    assert col.shape == (5, 3) and ker.shape == (5, 2)
    assert_allclose(col.conj().T @ col, np.eye(3), atol=1e-12)
    assert np.linalg.norm(a @ ker) < 1e-12
    assert null_frame(np.zeros((4, 4))).shape == (4, 4)


def test_pinv_minimal_norm_solution():
    rng = np.random.default_rng(1)
    m = rng.standard_normal((4, 2)) @ rng.standard_normal((2, 4))
    x = rng.standard_normal((4, 3))
    n = m @ x
    x0 = pinv(m) @ n
    assert np.linalg.norm(m @ x0 - n) < 1e-10
    # any other solution is at least as large in Frobenius norm
    ker = null_frame(m)
    for j in range(ker.shape[1]):
        shift = np.outer(ker[:, j], np.ones(3))
        assert np.linalg.norm(x0) <= np.linalg.norm(x0 + 0.7 * shift) + 1e-12


def test_herm_sign_and_root_polar_convention():
    q = np.linalg.qr(np.random.default_rng(2).standard_normal((4, 4)))[0]
    a = q @ np.diag([2.0, -0.5, 0.0, 1.0]) @ q.T
    u, root, rootinv = herm_sign_and_root(a)
    assert_allclose(u @ (root @ root), a, atol=1e-12)       # a = u|a|
    kern = q[:, 2]
    assert np.linalg.norm(u @ kern) < 1e-12                 # N(u) = N(a)
    assert_allclose(rootinv @ root @ rootinv, rootinv, atol=1e-12)


def test_hpd_sqrt_and_g_orthonormalize():
    rng = np.random.default_rng(3)
    m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    g = m @ m.conj().T + np.eye(4)
    root, iroot = hpd_sqrt(g)
    assert_allclose(root @ root, g, atol=1e-10)
    assert_allclose(root @ iroot, np.eye(4), atol=1e-10)

    frame = g_orthonormalize(rng.standard_normal((4, 2)), g)
    assert_allclose(frame.conj().T @ g @ frame, np.eye(2), atol=1e-10)


def test_subspace_sum_and_intersection():
    e = np.eye(4)
    s1 = e[:, :2]
    s2 = e[:, 1:3]
    assert subspace_sum(s1, s2).shape[1] == 3
    inter = subspace_intersection(s1, s2)
    assert inter.shape[1] == 1
    assert abs(abs(inter[1, 0]) - 1.0) < 1e-12
