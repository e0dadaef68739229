"""Subspaces, companions, preimages, W-definite splits and W-symmetric
projections.

Frames are dim x k matrices with orthonormal columns in the coordinate
inner product; k = 0 (empty frame) is a valid subspace.  Splits under an
alternate signature J' are orthonormal in the associated inner product
with Gram G = J_ref * J'; for the reference signature this is the plain
coordinate construction.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from .core import SignatureOperator, require_krein_selfadjoint
from .errors import (DimensionMismatch, InternalCertificateFailure,
                     NotComplementable)
from .linalg import (as_complex, herm, min_eig_herm, null_frame, opnorm,
                     orth_frame, scale_of, subspace_intersection,
                     subspace_sum)


@dataclass(frozen=True)
class Subspace:
    """A closed subspace given by an orthonormal column frame."""

    frame: np.ndarray

    def __post_init__(self):
        f = np.ascontiguousarray(as_complex(self.frame))
        f.setflags(write=False)
        object.__setattr__(self, "frame", f)

    @classmethod
    def from_span(cls, a, rank_tol=None):
        """Subspace spanned by the columns of ``a`` (any matrix)."""
        return cls(orth_frame(as_complex(a), rank_tol))

    @classmethod
    def zero(cls, dim):
        return cls(np.zeros((dim, 0), dtype=complex))

    @classmethod
    def full(cls, dim):
        return cls(np.eye(dim, dtype=complex))

    @property
    def ambient_dim(self):
        return self.frame.shape[0]

    @property
    def dim(self):
        return self.frame.shape[1]

    def projector(self):
        """Coordinate-orthogonal projection onto the subspace."""
        return self.frame @ self.frame.conj().T

    def orthonormality_defect(self):
        k = self.dim
        return opnorm(self.frame.conj().T @ self.frame - np.eye(k))

    def contains(self, vectors, tol):
        """Do the given columns lie in the subspace (within tol)?"""
        v = as_complex(vectors)
        if v.ndim == 1:
            v = v[:, None]
        resid = v - self.frame @ (self.frame.conj().T @ v)
        return opnorm(resid) <= tol * scale_of(v)

    def coordinate_complement(self, rank_tol=None):
        return Subspace(null_frame(self.frame.conj().T, rank_tol))


def range_subspace(b, rank_tol=None):
    """Numerical column space of ``b``."""
    return Subspace.from_span(b, rank_tol)


def orthogonal_companion(s, space):
    """S^[perp] = {h : [h, x] = 0 for all x in S} = J_ref (S^perp).

    J_ref is unitary, so mapping an orthonormal frame keeps it orthonormal.
    """
    comp = s.coordinate_complement()
    return Subspace(space.j_ref @ comp.frame)


def preimage(a, t, rank_tol=None):
    """A^{-1}(T): the maximal subspace mapped into T by ``a``.

    The kernel rank decision is anchored to the norm of ``a`` so a
    residual map that is pure rounding noise counts as zero.
    """
    a = as_complex(a)
    n = a.shape[0]
    residual_map = (np.eye(n) - t.projector()) @ a
    return Subspace(null_frame(residual_map, rank_tol, context=opnorm(a)))


@dataclass(frozen=True)
class WSplit:
    """Decomposition S = S_+ [+]_W S_- into a W-nonnegative and a
    W-nonpositive part, orthogonal in the inner product of the signature
    that produced the split, with [W s_+, s_-] = 0."""

    s_plus: Subspace
    s_minus: Subspace
    signature: SignatureOperator

    def defects(self, w, space):
        """Residuals of the three split invariants (orthogonality in the
        split's inner product, cross W-orthogonality, definiteness)."""
        fp, fm = self.s_plus.frame, self.s_minus.frame
        g = self.signature.gram
        jw = space.j_ref @ w
        ortho = opnorm(fp.conj().T @ g @ fm) if fp.size and fm.size else 0.0
        cross = opnorm(fm.conj().T @ jw @ fp) if fp.size and fm.size else 0.0
        neg_on_plus = max(0.0, -min_eig_herm(fp.conj().T @ jw @ fp))
        pos_on_minus = max(0.0, -min_eig_herm(-(fm.conj().T @ jw @ fm)))
        return {"orthogonality": ortho, "w_cross": cross,
                "plus_nonnegative": neg_on_plus,
                "minus_nonpositive": pos_on_minus}


def w_split(s, w, signature, space):
    """Split S into W-nonnegative and W-nonpositive parts.

    Diagonalizes the form [W x, x] restricted to S against the Gram of the
    given signature (a Hermitian-definite generalized eigenproblem; for the
    reference signature this is eigh of U* J_ref W U).  Zero eigenvalues go
    to the nonnegative side.
    """
    w = require_krein_selfadjoint(w, space)
    u = s.frame
    k = s.dim
    if k == 0:
        return WSplit(Subspace.zero(space.dim), Subspace.zero(space.dim),
                      signature)
    a = herm(u.conj().T @ (space.j_ref @ w) @ u)
    g = herm(u.conj().T @ signature.gram @ u)
    lam, vec = eigh(a, g)
    ztol = space.tol * scale_of(w)
    plus = lam >= -ztol
    # eigh(a, g) returns g-orthonormal eigenvectors: frames below are
    # orthonormal in the signature's inner product
    return WSplit(
        s_plus=Subspace(np.ascontiguousarray(u @ vec[:, plus])),
        s_minus=Subspace(np.ascontiguousarray(u @ vec[:, ~plus])),
        signature=signature)


def is_complementable(w, s, space, rank_tol=None):
    """H = S + W^{-1}(S^[perp])?"""
    w = require_krein_selfadjoint(w, space)
    t = preimage(w, orthogonal_companion(s, space), rank_tol)
    total = subspace_sum(s.frame, t.frame)
    return total.shape[1] == space.dim


def is_w_nonnegative(w, s, space):
    """[Wx, x] >= 0 on the subspace (compressed form PSD within tol)."""
    w = require_krein_selfadjoint(w, space)
    if s.dim == 0:
        return True
    m = s.frame.conj().T @ (space.j_ref @ w) @ s.frame
    return min_eig_herm(m) >= -space.tol * scale_of(w)


def is_w_nonpositive(w, s, space):
    if s.dim == 0:
        return True
    return is_w_nonnegative(-as_complex(w), s, space)


def oblique_projection(onto, along):
    """Projection with range span(onto) and kernel span(along); the two
    frames must form a basis of the ambient space."""
    n = onto.shape[0]
    k = onto.shape[1]
    if along.shape[1] != n - k:
        raise DimensionMismatch("range and kernel dimensions do not add up")
    basis = np.hstack([onto, along])
    ext = np.hstack([onto, np.zeros((n, n - k), dtype=complex)])
    return ext @ np.linalg.inv(basis)


def _complement_within(inner, outer):
    """Frame of the coordinate-orthogonal complement of span(inner) inside
    span(outer); requires span(inner) <= span(outer)."""
    if outer.shape[1] == 0:
        return outer
    if inner.shape[1] == 0:
        return outer
    coords = inner.conj().T @ outer     # inner expressed against outer
    return outer @ null_frame(coords)


def symmetric_projection(w, s, space, extra_kernel=None, rank_tol=None):
    """Projection Q onto S with WQ = Q^# W.

    The kernel is the canonical choice: the coordinate-orthogonal
    complement of S ∩ W^{-1}(S^[perp]) inside W^{-1}(S^[perp]).  When
    ``extra_kernel`` is given, its frame is forced into N(Q) (it must lie
    inside the preimage and be independent of S); this is what the
    three-term weight decomposition needs.
    """
    w = require_krein_selfadjoint(w, space)
    t = preimage(w, orthogonal_companion(s, space), rank_tol)
    if subspace_sum(s.frame, t.frame).shape[1] < space.dim:
        raise NotComplementable(
            "S + W^{-1}(S^[perp]) does not fill the space")
    d = subspace_intersection(s.frame, t.frame, rank_tol)
    if extra_kernel is not None and extra_kernel.shape[1] > 0:
        rest = _complement_within(
            subspace_sum(d, extra_kernel), t.frame)
        kernel = subspace_sum(extra_kernel, rest)
    else:
        kernel = _complement_within(d, t.frame)
    q = oblique_projection(s.frame, kernel)

    sc = scale_of(q)
    if opnorm(q @ q - q) > space.tol * sc * sc:
        raise InternalCertificateFailure("projection is not idempotent")
    jw = space.j_ref @ w
    sym = jw @ q - q.conj().T @ jw      # WQ = Q^#W in coordinate form
    if opnorm(sym) > space.tol * scale_of(w) * sc:
        raise InternalCertificateFailure(
            "constructed projection is not W-symmetric")
    return q


def projection_with_kernel(s, seed, mix_strength=1.5):
    """Seeded sampler for the family {E : E^2 = E, N(E) = S}.

    The range is a random complement of S: the graph of a bounded random
    map from S^perp into S, so the sample stays well conditioned.
    """
    n = s.ambient_dim
    k = s.dim
    if k >= n:
        raise DimensionMismatch("S must be a proper subspace")
    v = s.coordinate_complement().frame
    if k == 0:
        return np.eye(n, dtype=complex)
    rng = np.random.default_rng(seed)
    ell = rng.standard_normal((k, n - k)) + 1j * rng.standard_normal((k, n - k))
    nl = opnorm(ell)
    if nl > mix_strength:
        ell *= mix_strength / nl
    c = v + s.frame @ ell               # complement frame (not orthonormal)
    return c @ np.linalg.inv(v.conj().T @ c) @ v.conj().T
