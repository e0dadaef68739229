"""Rank-aware dense linear algebra helpers.

Every rank decision in the package funnels through :func:`numerical_rank`
so that the cutoff (``dim * sigma_max * 1e-12``) and the ambiguity guard
are applied uniformly.
"""

import numpy as np

from .errors import RankThresholdAmbiguous

RANK_RTOL = 1e-12
AMBIGUITY_FACTOR = 10.0


def as_complex(a):
    return np.asarray(a, dtype=complex)


def herm(a):
    """Hermitian part (A + A*)/2."""
    return 0.5 * (a + a.conj().T)


def opnorm(a):
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def scale_of(*operands):
    """Tolerance scale: max(1, operator norms of the operands)."""
    return max(1.0, *(opnorm(a) for a in operands)) if operands else 1.0


def numerical_rank(sigma, dim, rank_tol=None, context=0.0):
    """Rank from a descending singular-value array.

    The cutoff is dim * max(sigma_max, context) * 1e-12; ``context`` lets
    callers anchor the decision to the scale the matrix was computed at
    (e.g. the weight norm for a compressed block), so a block that is
    pure rounding noise is rank zero rather than spuriously full.

    Raises RankThresholdAmbiguous when a singular value falls within a
    factor of ``AMBIGUITY_FACTOR`` of the cutoff: deciding would corrupt
    downstream complementability tests.
    """
    sigma = np.asarray(sigma, dtype=float)
    if sigma.size == 0:
        return 0
    smax = max(sigma.max(), context)
    if smax == 0.0:
        return 0
    tol = dim * smax * RANK_RTOL if rank_tol is None else rank_tol
    bad = (sigma > tol / AMBIGUITY_FACTOR) & (sigma < tol * AMBIGUITY_FACTOR)
    if bad.any():
        s = float(sigma[bad][0])
        raise RankThresholdAmbiguous(
            f"singular value {s:.3e} within a decade of rank cutoff {tol:.3e}",
            sigma=s, threshold=tol)
    return int((sigma > tol).sum())


def orth_frame(a, rank_tol=None, context=0.0):
    """Orthonormal basis of the column space of ``a`` (SVD based)."""
    a = as_complex(a)
    if a.size == 0:
        return np.zeros((a.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    r = numerical_rank(s, max(a.shape), rank_tol, context)
    return np.ascontiguousarray(u[:, :r])


def null_frame(a, rank_tol=None, context=0.0):
    """Orthonormal basis of the (right) nullspace of ``a``."""
    a = as_complex(a)
    n = a.shape[1]
    if a.shape[0] == 0 or not a.any():
        return np.eye(n, dtype=complex)
    _, s, vh = np.linalg.svd(a)
    r = numerical_rank(s, max(a.shape), rank_tol, context)
    return np.ascontiguousarray(vh[r:].conj().T)


def pinv(a, rank_tol=None, context=0.0):
    """Moore-Penrose pseudoinverse with the shared rank cutoff."""
    a = as_complex(a)
    if a.size == 0:
        return np.zeros((a.shape[1], a.shape[0]), dtype=complex)
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    r = numerical_rank(s, max(a.shape), rank_tol, context)
    inv = np.zeros_like(s)
    inv[:r] = 1.0 / s[:r]
    return (vh.conj().T * inv) @ u.conj().T


def herm_eig_split(a, zero_tol):
    """Eigendecomposition of a Hermitian matrix into (values, vectors),
    values treated as exactly zero when ``|lam| <= zero_tol``."""
    a = as_complex(a)
    if a.shape[0] == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=complex)
    w, q = np.linalg.eigh(herm(a))
    w = np.where(np.abs(w) <= zero_tol, 0.0, w)
    return w, q


def herm_sign_and_root(a, rank_tol=None, context=0.0):
    """Polar data of a Hermitian matrix: (u, |a|^{1/2}, pinv(|a|^{1/2})).

    ``u`` is sign(a) on R(a) and zero on N(a), matching the partial
    isometry convention N(u) = N(a).
    """
    a = as_complex(a)
    k = a.shape[0]
    if k == 0:
        z = np.zeros((0, 0), dtype=complex)
        return z, z.copy(), z.copy()
    w, q = np.linalg.eigh(herm(a))
    absw = np.abs(w)
    r_mask = np.zeros(k, dtype=bool)
    if max(absw.max(), context) > 0:
        order = np.argsort(absw)[::-1]
        rank = numerical_rank(absw[order], k, rank_tol, context)
        r_mask[order[:rank]] = True
    sgn = np.where(r_mask, np.sign(w), 0.0)
    root = np.sqrt(absw) * r_mask
    rootinv = np.divide(1.0, np.sqrt(absw), out=np.zeros(k), where=r_mask)
    u = (q * sgn) @ q.conj().T
    return u, (q * root) @ q.conj().T, (q * rootinv) @ q.conj().T


def hpd_sqrt(g):
    """Square root and inverse square root of a Hermitian positive
    definite matrix (eigendecomposition; g must be well away from
    singular, which signature Grams are)."""
    w, q = np.linalg.eigh(herm(g))
    if w.min() <= 0:
        raise np.linalg.LinAlgError("matrix is not positive definite")
    return (q * np.sqrt(w)) @ q.conj().T, (q / np.sqrt(w)) @ q.conj().T


def g_orthonormalize(frame, g):
    """Re-express a full-column-rank frame so its columns are orthonormal
    in the inner product with Gram matrix ``g`` (Cholesky of the small
    Gram; the subspace is unchanged)."""
    frame = as_complex(frame)
    if frame.shape[1] == 0:
        return frame
    small = frame.conj().T @ g @ frame
    ell = np.linalg.cholesky(herm(small))
    return frame @ np.linalg.inv(ell.conj().T)


def g_orthocomplement(frame, g, dim, rank_tol=None):
    """Frame of the g-orthogonal complement of span(frame), columns
    orthonormalized in the g inner product."""
    if frame.shape[1] == 0:
        return g_orthonormalize(np.eye(dim, dtype=complex), g)
    comp = null_frame(frame.conj().T @ g, rank_tol)
    return g_orthonormalize(comp, g)


def subspace_sum(*frames):
    """Orthonormal frame of the span of the union of the given frames."""
    cols = [f for f in frames if f.shape[1] > 0]
    if not cols:
        dim = frames[0].shape[0]
        return np.zeros((dim, 0), dtype=complex)
    return orth_frame(np.hstack(cols))


def subspace_intersection(fa, fb, rank_tol=None):
    """Orthonormal frame of span(fa) ∩ span(fb)."""
    dim = fa.shape[0]
    if fa.shape[1] == 0 or fb.shape[1] == 0:
        return np.zeros((dim, 0), dtype=complex)
    # x in both spans  <=>  x ⟂ both orthocomplements
    pa = np.eye(dim) - fa @ fa.conj().T
    pb = np.eye(dim) - fb @ fb.conj().T
    return null_frame(np.vstack([pa, pb]), rank_tol)


def min_eig_herm(a):
    """Smallest eigenvalue of the Hermitian part of ``a``."""
    a = np.asarray(a)
    if a.shape[0] == 0:
        return 0.0
    return float(np.linalg.eigvalsh(herm(a)).min())
