"""Indefinite inner-product arithmetic over a fixed coordinate space.

The space is modeled concretely: vectors live in C^dim with the standard
inner product <x, y> = y* x, and the indefinite product is
[x, y] = <J_ref x, y> for a reference signature operator J_ref.  Alternate
fundamental decompositions are just other signature matrices over the same
coordinates, so independence claims become plain matrix identities.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import DimensionMismatch, NotASignature, NotKreinSelfadjoint
from .linalg import as_complex, herm, hpd_sqrt, min_eig_herm, opnorm, scale_of

DEFAULT_TOL = 1e-10


def _frozen(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class KreinSpace:
    """Coordinate Krein space: dimension, reference signature, tolerance.

    All predicate comparisons in the package are relative: a residual r
    counts as zero when r <= tol * scale with scale = max(1, operand
    norms).  Values are immutable and safe to share across threads.
    """

    dim: int
    j_ref: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.dim <= 0:
            raise DimensionMismatch("dimension must be positive")
        j = as_complex(self.j_ref)
        if j.shape != (self.dim, self.dim):
            raise DimensionMismatch(
                f"j_ref shape {j.shape} does not match dim {self.dim}")
        sc = scale_of(j)
        if opnorm(j - j.conj().T) > self.tol * sc:
            raise NotASignature("reference signature is not Hermitian")
        if opnorm(j @ j - np.eye(self.dim)) > self.tol * sc * sc:
            raise NotASignature("reference signature is not an involution")
        object.__setattr__(self, "j_ref", _frozen(j))

    @property
    def signature_counts(self):
        """(n_plus, n_minus) eigenvalue counts of the reference signature."""
        w = np.linalg.eigvalsh(herm(self.j_ref))
        n_minus = int((w < 0).sum())
        return self.dim - n_minus, n_minus

    def check_operator(self, a):
        a = as_complex(a)
        if a.shape != (self.dim, self.dim):
            raise DimensionMismatch(
                f"operator shape {a.shape} does not match dim {self.dim}")
        return a

    def check_vector(self, x):
        x = as_complex(x).reshape(-1)
        if x.shape != (self.dim,):
            raise DimensionMismatch(
                f"vector length {x.shape[0]} does not match dim {self.dim}")
        return x


def standard_space(n_plus, n_minus, tol=DEFAULT_TOL):
    """Space with J_ref = diag(+1 x n_plus, -1 x n_minus)."""
    j = np.diag(np.r_[np.ones(n_plus), -np.ones(n_minus)]).astype(complex)
    return KreinSpace(n_plus + n_minus, j, tol)


def validate_signature(j, g_ref, tol):
    """Raise NotASignature unless ``j`` is an involution, selfadjoint and
    positive in the inner product with Gram ``g_ref``."""
    n = j.shape[0]
    sc = scale_of(j)
    if opnorm(j @ j - np.eye(n)) > tol * sc * sc:
        raise NotASignature("J^2 differs from the identity")
    gj = g_ref @ j
    if opnorm(gj - gj.conj().T) > tol * scale_of(gj):
        raise NotASignature("J is not selfadjoint for the ambient product")
    if min_eig_herm(gj) <= tol * scale_of(gj):
        raise NotASignature("induced inner product is not positive definite")


@dataclass(frozen=True)
class SignatureOperator:
    """A signature operator J' over the ambient space: J'^2 = I,
    J_ref·J' Hermitian positive definite, so <x,y>' = [J'x, y] is an
    inner product with Gram matrix G = J_ref·J'."""

    entries: np.ndarray
    gram: np.ndarray = field(repr=False, default=None)
    gram_sqrt: np.ndarray = field(repr=False, default=None)
    gram_isqrt: np.ndarray = field(repr=False, default=None)

    @classmethod
    def from_matrix(cls, entries, space):
        j = space.check_operator(entries)
        validate_signature(j, space.j_ref, space.tol)
        g = herm(space.j_ref @ j)
        root, iroot = hpd_sqrt(g)
        return cls(entries=_frozen(j), gram=_frozen(g),
                   gram_sqrt=_frozen(root), gram_isqrt=_frozen(iroot))

    @classmethod
    def reference(cls, space):
        return cls.from_matrix(space.j_ref, space)


def krein_adjoint(a, space):
    """[.,.]-adjoint: A^# = J_ref A* J_ref.

    Satisfies [Ax, y] = [x, A^# y] and (A^#)^# = A.
    """
    a = space.check_operator(a)
    return space.j_ref @ a.conj().T @ space.j_ref


def krein_gram(x, y, space):
    """Indefinite product [x, y] = <J_ref x, y>, linear in x."""
    x = space.check_vector(x)
    y = space.check_vector(y)
    return complex(np.vdot(y, space.j_ref @ x))


def is_krein_selfadjoint(w, space):
    """W = W^#, i.e. J_ref·W Hermitian within tolerance."""
    w = space.check_operator(w)
    jw = space.j_ref @ w
    return opnorm(jw - jw.conj().T) <= space.tol * scale_of(w)


def require_krein_selfadjoint(w, space, what="weight"):
    w = space.check_operator(w)
    if not is_krein_selfadjoint(w, space):
        raise NotKreinSelfadjoint(f"{what} is not [.,.]-selfadjoint")
    return w


def is_krein_positive(w, space):
    """[Wx, x] >= 0 for all x, i.e. J_ref·W positive semidefinite."""
    w = require_krein_selfadjoint(w, space, what="operator")
    return min_eig_herm(space.j_ref @ w) >= -space.tol * scale_of(w)


def random_signature_operator(space, seed, strength=1.0):
    """Seeded alternate fundamental decomposition.

    J' = V J_ref V^{-1} with V = exp(K) and K = (H - H^#)/2 for a random
    H, so V is [.,.]-unitary and J' passes every SignatureOperator
    invariant by construction.  ``strength`` caps the norm of K, bounding
    the conditioning of the induced Gram.
    """
    rng = np.random.default_rng(seed)
    n = space.dim
    h = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    k = 0.5 * (h - krein_adjoint(h, space))
    nk = opnorm(k)
    if nk > strength:
        k *= strength / nk
    v = expm(k)
    j = v @ space.j_ref @ np.linalg.inv(v)
    return SignatureOperator.from_matrix(j, space)
