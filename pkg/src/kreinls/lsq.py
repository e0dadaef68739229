"""Weighted indefinite least squares solvers.

Covers the quadratic objective F(X) = (BX-C)^# W (BX-C), the operator
normal equation, the indefinite minimum solver (and its maximization
mirror), the pointwise vector variant, the two-sided range split
B = B_+ + B_-, and the min-max solver with saddle certificates.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (SignatureOperator, krein_adjoint,
                   require_krein_selfadjoint)
from .errors import (InternalCertificateFailure, MinMaxUnsolvable,
                     NormalEquationUnsolvable, RangeNotNonnegative,
                     RangeNotNonpositive)
from .linalg import herm, opnorm, orth_frame, pinv, scale_of
from .schur import schur_complement
from .subspaces import (WSplit, is_complementable, is_w_nonnegative,
                        is_w_nonpositive, range_subspace,
                        symmetric_projection, w_split)


@dataclass(frozen=True)
class WeightedProblem:
    """The data (W, B, C) of min/max/min-max of (BX-C)^# W (BX-C)."""

    w: np.ndarray
    b: np.ndarray
    c: np.ndarray
    space: "KreinSpace"

    def __post_init__(self):
        w = require_krein_selfadjoint(self.w, self.space)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "b", self.space.check_operator(self.b))
        object.__setattr__(self, "c", self.space.check_operator(self.c))

    def range_b(self, rank_tol=None):
        return range_subspace(self.b, rank_tol)


def eval_f(p, x):
    """F(X) = (BX - C)^# W (BX - C); always [.,.]-selfadjoint."""
    x = p.space.check_operator(x)
    r = p.b @ x - p.c
    return krein_adjoint(r, p.space) @ p.w @ r


def normal_matrices(p):
    """(B^# W B, B^# W C): the operator normal equation is M X = N."""
    bw = krein_adjoint(p.b, p.space) @ p.w
    return bw @ p.b, bw @ p.c


def _normal_context(p):
    """Scale at which B^#WB is computed; anchors its rank decision."""
    return opnorm(p.b) ** 2 * opnorm(p.w)


def normal_solvable(p, rank_tol=None):
    """Douglas range condition R(B^#WC) ⊆ R(B^#WB), as a predicate."""
    m, n = normal_matrices(p)
    frame = orth_frame(m, rank_tol, context=_normal_context(p))
    outside = n - frame @ (frame.conj().T @ n)
    return opnorm(outside) <= p.space.tol * scale_of(m, n)


def solve_normal(p, rank_tol=None):
    """Minimal-norm solution of B^# W (BX - C) = 0.

    Solvability is the Douglas range condition R(B^#WC) ⊆ R(B^#WB);
    when it fails the violation residual is attached to the error.
    """
    m, n = normal_matrices(p)
    ctx = _normal_context(p)
    sc = scale_of(m, n)
    frame = orth_frame(m, rank_tol, context=ctx)
    outside = n - frame @ (frame.conj().T @ n)
    violation = opnorm(outside)
    if violation > p.space.tol * sc:
        raise NormalEquationUnsolvable(
            f"Douglas range condition fails (residual {violation:.3e})",
            residual=violation)
    x0 = pinv(m, rank_tol, context=ctx) @ n
    resid = opnorm(m @ x0 - n)
    if resid > p.space.tol * sc:
        raise InternalCertificateFailure(
            f"normal equation residual {resid:.3e} after solvable test")
    return x0


def normal_residual(p, x):
    """|| B^# W (BX - C) ||."""
    m, n = normal_matrices(p)
    return opnorm(m @ p.space.check_operator(x) - n)


@dataclass(frozen=True)
class CertificateReport:
    """Sampled operator-order certificate: the most negative normalized
    eigenvalue seen and how many samples broke the tolerance."""

    n_samples: int
    min_floor: float
    violations: int
    tol: float

    @property
    def passed(self):
        return self.violations == 0


def _batched_f(p, xs):
    """F(X_i) for a stack of matrices, shape (n, dim, dim)."""
    j = p.space.j_ref
    r = np.einsum("ij,njk->nik", p.b, xs) - p.c
    radj = j @ r.conj().transpose(0, 2, 1) @ j
    return radj @ (p.w @ r)


def _sample_directions(space, anchor, n_samples, seed):
    """Matrices anchor + t * R at log-spaced scales t; mixing scales makes
    first-order optimality violations visible alongside global ones."""
    rng = np.random.default_rng(seed)
    d = space.dim
    r = rng.standard_normal((n_samples, d, d)) \
        + 1j * rng.standard_normal((n_samples, d, d))
    r /= np.maximum(1e-12, np.abs(r).max(axis=(1, 2)))[:, None, None]
    t = np.logspace(-2, 1, n_samples)
    return anchor + t[:, None, None] * r


def _order_floors(space, diffs):
    """Normalized smallest eigenvalues of J_ref * diff for a stack of
    differences that should be positive in the indefinite order."""
    h = space.j_ref @ diffs
    h = 0.5 * (h + h.conj().transpose(0, 2, 1))
    eigs = np.linalg.eigvalsh(h)
    scales = np.maximum(1.0, np.abs(eigs).max(axis=1))
    return eigs.min(axis=1) / scales


def minimality_certificate(p, x0, n_samples=64, seed=0, sense="min"):
    """Sampled check that F(X) - F(X0) (or its negative, for the maximum
    problem) stays positive in the indefinite order."""
    xs = _sample_directions(p.space, x0, n_samples, seed)
    diffs = _batched_f(p, xs) - eval_f(p, x0)
    if sense == "max":
        diffs = -diffs
    floors = _order_floors(p.space, diffs)
    tol = p.space.tol
    return CertificateReport(
        n_samples=n_samples, min_floor=float(floors.min()),
        violations=int((floors < -tol).sum()), tol=tol)


@dataclass(frozen=True)
class ImsSolution:
    """Indefinite minimum (or maximum) solution record."""

    x0: np.ndarray
    extremal_value: np.ndarray
    schur_value: Optional[np.ndarray]
    normal_residual: float
    certificate: CertificateReport
    sense: str

    @property
    def min_value(self):
        return self.extremal_value


def _solve_extremal(p, sense, certificate_samples, seed, rank_tol):
    s = p.range_b(rank_tol)
    if sense == "min":
        if not is_w_nonnegative(p.w, s, p.space):
            raise RangeNotNonnegative("R(B) is not W-nonnegative")
    else:
        if not is_w_nonpositive(p.w, s, p.space):
            raise RangeNotNonpositive("R(B) is not W-nonpositive")
    x0 = solve_normal(p, rank_tol)
    value = eval_f(p, x0)
    resid = normal_residual(p, x0)

    schur_value = None
    if is_complementable(p.w, s, p.space, rank_tol):
        shorted = schur_complement(p.w, s, p.space, rank_tol=rank_tol).schur
        schur_value = krein_adjoint(p.c, p.space) @ shorted @ p.c
        gap = opnorm(value - schur_value)
        if gap > p.space.tol * scale_of(p.w, p.c, value):
            raise InternalCertificateFailure(
                f"extremal value differs from Schur form by {gap:.3e}")

    cert = minimality_certificate(p, x0, certificate_samples, seed, sense)
    if not cert.passed:
        raise InternalCertificateFailure(
            f"{sense} certificate violated: floor {cert.min_floor:.3e}")
    return ImsSolution(x0=x0, extremal_value=value, schur_value=schur_value,
                       normal_residual=resid, certificate=cert, sense=sense)


def solve_ims(p, certificate_samples=64, seed=0, rank_tol=None):
    """Indefinite minimum solution of BX - C = 0 with weight W.

    Succeeds iff R(B) is W-nonnegative and the normal equation is
    solvable; the returned record carries F(X0), the Schur-complement
    value when the weight is complementable, and a sampled dominance
    certificate.
    """
    return _solve_extremal(p, "min", certificate_samples, seed, rank_tol)


def solve_ims_max(p, certificate_samples=64, seed=0, rank_tol=None):
    """Mirror of solve_ims for the maximization problem (R(B) must be
    W-nonpositive)."""
    return _solve_extremal(p, "max", certificate_samples, seed, rank_tol)


def solve_wils_vector(p, y, rank_tol=None):
    """Pointwise variant: z minimizing [W(Bz - y), Bz - y].

    Same normal equation, one right-hand side; minimal-norm z returned.
    """
    y = p.space.check_vector(y)
    s = p.range_b(rank_tol)
    if not is_w_nonnegative(p.w, s, p.space):
        raise RangeNotNonnegative("R(B) is not W-nonnegative")
    m, _ = normal_matrices(p)
    ctx = _normal_context(p)
    rhs = krein_adjoint(p.b, p.space) @ p.w @ y
    sc = scale_of(m, rhs[:, None])
    frame = orth_frame(m, rank_tol, context=ctx)
    outside = rhs - frame @ (frame.conj().T @ rhs)
    violation = float(np.linalg.norm(outside))
    if violation > p.space.tol * sc:
        raise NormalEquationUnsolvable(
            f"no weighted solution for this right-hand side "
            f"(residual {violation:.3e})", residual=violation)
    return pinv(m, rank_tol, context=ctx) @ rhs


def wils_objective(p, z, y):
    """[W(Bz - y), Bz - y] for a candidate z (real for selfadjoint W)."""
    r = p.b @ p.space.check_vector(z) - p.space.check_vector(y)
    return complex(np.vdot(r, p.space.j_ref @ p.w @ r))


@dataclass(frozen=True)
class SplitB:
    """B = B_+ + B_- with W-nonnegative/W-nonpositive closed ranges,
    orthogonal in the splitting signature's inner product."""

    b_plus: np.ndarray
    b_minus: np.ndarray
    split: WSplit

    def defects(self, p):
        """Residuals of the SplitB invariants."""
        out = dict(self.split.defects(p.w, p.space))
        out["sum"] = opnorm(p.b - (self.b_plus + self.b_minus))
        return out


def split_b(p, signature=None, rank_tol=None):
    """Split B along the W-definite decomposition of its range.

    B_+/- = P_+/- B where P_+/- project onto the split parts,
    orthogonally in the signature's inner product.
    """
    if signature is None:
        signature = SignatureOperator.reference(p.space)
    s = p.range_b(rank_tol)
    split = w_split(s, p.w, signature, p.space)
    g = signature.gram
    fp, fm = split.s_plus.frame, split.s_minus.frame
    p_plus = fp @ fp.conj().T @ g
    p_minus = fm @ fm.conj().T @ g
    return SplitB(b_plus=p_plus @ p.b, b_minus=p_minus @ p.b, split=split)


def eval_fj(p, split, x, y):
    """Two-variable objective F_J(X, Y); F_J(X, X) = F(X)."""
    x = p.space.check_operator(x)
    y = p.space.check_operator(y)
    r = split.b_plus @ x + split.b_minus @ y - p.c
    return krein_adjoint(r, p.space) @ p.w @ r


@dataclass(frozen=True)
class ImmsSolution:
    """Indefinite min-max solution Z = Z1 + Z2 (canonical Z2 = 0)."""

    z: np.ndarray
    z1: np.ndarray
    z2: np.ndarray
    minmax_value: np.ndarray
    schur_value: Optional[np.ndarray]


def solve_imms(p, rank_tol=None):
    """Indefinite min-max solution of BX - C = 0 with weight W.

    Z1 solves the normal equation, Z2 = 0; when the weight is
    complementable the value is checked against both closed forms
    C^# W_{/[R(B)]} C and C^# W (I - Q) C.
    """
    try:
        z1 = solve_normal(p, rank_tol)
    except NormalEquationUnsolvable as exc:
        raise MinMaxUnsolvable(
            f"range condition R(C) ⊆ R(B) + W^-1(R(B)^[perp]) fails "
            f"(residual {exc.residual:.3e})", residual=exc.residual) from exc
    z2 = np.zeros_like(z1)
    z = z1 + z2
    value = eval_f(p, z)

    schur_value = None
    s = p.range_b(rank_tol)
    if is_complementable(p.w, s, p.space, rank_tol):
        shorted = schur_complement(p.w, s, p.space, rank_tol=rank_tol).schur
        cadj = krein_adjoint(p.c, p.space)
        schur_value = cadj @ shorted @ p.c
        q = symmetric_projection(p.w, s, p.space, rank_tol=rank_tol)
        via_q = cadj @ p.w @ (np.eye(p.space.dim) - q) @ p.c
        sc = scale_of(p.w, p.c, value)
        if opnorm(value - schur_value) > p.space.tol * sc \
                or opnorm(value - via_q) > p.space.tol * sc:
            raise InternalCertificateFailure(
                "min-max value disagrees with the closed forms")
    return ImmsSolution(z=z, z1=z1, z2=z2, minmax_value=value,
                        schur_value=schur_value)


def neutral_shift(p, seed, rank_tol=None):
    """A Z2 with (B Z2)^# W (B Z2) = 0: maps into the W-neutral directions
    of R(B).  Zero when the compressed form has no kernel."""
    s = p.range_b(rank_tol)
    if s.dim == 0:
        return np.zeros((p.space.dim, p.space.dim), dtype=complex)
    a = herm(s.frame.conj().T @ (p.space.j_ref @ p.w) @ s.frame)
    lam, vec = np.linalg.eigh(a)
    ztol = p.space.tol * scale_of(p.w)
    kernel = vec[:, np.abs(lam) <= ztol]
    if kernel.shape[1] == 0:
        return np.zeros((p.space.dim, p.space.dim), dtype=complex)
    rng = np.random.default_rng(seed)
    targets = s.frame @ kernel          # neutral directions inside R(B)
    mix = rng.standard_normal((targets.shape[1], p.space.dim)) \
        + 1j * rng.standard_normal((targets.shape[1], p.space.dim))
    return pinv(p.b, rank_tol) @ (targets @ mix)


@dataclass(frozen=True)
class SaddleReport:
    """Operator-order saddle evidence F_J(Z, Y) <= F_J(Z, Z) <= F_J(X, Z)
    over sampled X and Y."""

    n_samples: int
    min_floor_min_side: float
    min_floor_max_side: float
    violations_min_side: int
    violations_max_side: int
    tol: float

    @property
    def passed(self):
        return self.violations_min_side == 0 and self.violations_max_side == 0


def verify_saddle(p, split, sol, n_samples=64, seed=0):
    """Sample the two saddle inequalities around a candidate solution."""
    z = sol.z if hasattr(sol, "z") else p.space.check_operator(sol)
    center = eval_fj(p, split, z, z)
    xs = _sample_directions(p.space, z, n_samples, seed)
    ys = _sample_directions(p.space, z, n_samples, seed + 1)

    j = p.space.j_ref
    bz_minus = split.b_minus @ z
    r_min = np.einsum("ij,njk->nik", split.b_plus, xs) + bz_minus - p.c
    radj = j @ r_min.conj().transpose(0, 2, 1) @ j
    f_x_z = radj @ (p.w @ r_min)

    bz_plus = split.b_plus @ z
    r_max = bz_plus + np.einsum("ij,njk->nik", split.b_minus, ys) - p.c
    radj = j @ r_max.conj().transpose(0, 2, 1) @ j
    f_z_y = radj @ (p.w @ r_max)

    floors_min = _order_floors(p.space, f_x_z - center)
    floors_max = _order_floors(p.space, center - f_z_y)
    tol = p.space.tol
    return SaddleReport(
        n_samples=n_samples,
        min_floor_min_side=float(floors_min.min()),
        min_floor_max_side=float(floors_max.min()),
        violations_min_side=int((floors_min < -tol).sum()),
        violations_max_side=int((floors_max < -tol).sum()),
        tol=tol)
