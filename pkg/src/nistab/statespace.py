"""LTI state-space systems: transfer evaluation, poles, residues, minimality.

A system is the quadruple (A, B, C, D) with square transfer matrix
G(s) = C (sI - A)^{-1} B + D.  Systems are immutable value objects; every
operation here is a pure function of its arguments.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    DegenerateEigenvectorsError,
    DimensionError,
    NearPoleError,
    NotAPoleError,
    NotSimplePoleError,
    SingularAError,
)
from .linalg import DEFAULT_TOL, min_singular_value

#: an eigenvalue counts as "on the imaginary axis" when |Re| <= TOL_AXIS * max(1, |lambda|)
TOL_AXIS = 1e-7
#: resolvent guard: evaluation fails when smallest singular value of (sI - A) < TOL_POLE
TOL_POLE = 1e-12


def _matrix(x, name: str) -> np.ndarray:
    M = np.asarray(x, dtype=float)
    if M.ndim != 2:
        raise DimensionError(f"{name} must be a 2-d real matrix, got {M.ndim}-d")
    if not np.all(np.isfinite(M)):
        raise DimensionError(f"{name} must have finite entries")
    return M


@dataclass(frozen=True)
class StateSpace:
    """Immutable state-space realization of a square LTI system."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    label: str = ""

    def __post_init__(self):
        A = _matrix(self.A, "A")
        B = _matrix(self.B, "B")
        C = _matrix(self.C, "C")
        D = _matrix(self.D, "D")
        n = A.shape[0]
        if A.shape != (n, n):
            raise DimensionError(f"A must be square, got {A.shape}")
        m = B.shape[1]
        if n < 1 or m < 1:
            raise DimensionError("state and i/o dimensions must be at least 1")
        if B.shape != (n, m):
            raise DimensionError(f"B must be {n}x{m}, got {B.shape}")
        if C.shape != (m, n):
            raise DimensionError(f"C must be {m}x{n}, got {C.shape}")
        if D.shape != (m, m):
            raise DimensionError(f"D must be {m}x{m}, got {D.shape}")
        for name, M in (("A", A), ("B", B), ("C", C), ("D", D)):
            M = M.copy()
            M.setflags(write=False)
            object.__setattr__(self, name, M)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    def __repr__(self):
        tag = f" {self.label!r}" if self.label else ""
        return f"<StateSpace{tag} n={self.n} m={self.m}>"


@dataclass
class ResidueReport:
    """Residue data for an imaginary-axis pole at +j*omega0.

    ``K0`` is the limit of (s - j w0) s G(s); for a negative-imaginary system
    it must be positive semidefinite Hermitian.
    """

    omega0: float
    K0: np.ndarray
    is_simple: bool
    hermitian_residual: float
    min_eig: float

    def accepted(self, tol: float = DEFAULT_TOL) -> bool:
        scale = max(1.0, float(np.linalg.norm(self.K0, "fro")))
        return self.is_simple and self.hermitian_residual <= tol * scale and self.min_eig >= -tol * scale


@dataclass
class MinimalityReport:
    """PBH test outcome; ``failures`` lists (eigenvalue, direction, min_sv)."""

    minimal: bool
    failures: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.minimal


def eval_tf(sys: StateSpace, s: complex, tol_pole: float = TOL_POLE) -> np.ndarray:
    """Evaluate G(s) = C (sI - A)^{-1} B + D at one complex point.

    Raises NearPoleError when sI - A is numerically singular, reporting the
    eigenvalue of A closest to s.
    """
    n = sys.n
    res = s * np.eye(n) - sys.A
    sigma = min_singular_value(res)
    if sigma < tol_pole * max(1.0, abs(s), float(np.linalg.norm(sys.A, 2))):
        eigs = np.linalg.eigvals(sys.A)
        worst = eigs[np.argmin(np.abs(eigs - s))]
        raise NearPoleError(
            f"evaluation point {s} is within the resolvent guard of pole {worst}", worst
        )
    return sys.C @ np.linalg.solve(res, sys.B.astype(complex)) + sys.D


def poles(sys: StateSpace) -> np.ndarray:
    """Eigenvalues of A (the poles of G for a minimal realization)."""
    return np.linalg.eigvals(sys.A)


def is_minimal(sys: StateSpace, tol: float = DEFAULT_TOL) -> MinimalityReport:
    """PBH controllability/observability test at every eigenvalue of A."""
    scale = tol * max(1.0, float(np.linalg.norm(sys.A, 2)))
    failures = []
    for lam in np.linalg.eigvals(sys.A):
        shifted = sys.A - lam * np.eye(sys.n)
        sv_c = min_singular_value(np.hstack([shifted, sys.B.astype(complex)]))
        if sv_c <= scale:
            failures.append((complex(lam), "controllability", sv_c))
        sv_o = min_singular_value(np.vstack([shifted, sys.C.astype(complex)]))
        if sv_o <= scale:
            failures.append((complex(lam), "observability", sv_o))
    return MinimalityReport(minimal=not failures, failures=failures)


def dc_gain(sys: StateSpace, tol: float = DEFAULT_TOL) -> np.ndarray:
    """G(0) = D - C A^{-1} B; requires A nonsingular (no pole at the origin)."""
    sigma = min_singular_value(sys.A)
    if sigma <= tol * max(1.0, float(np.linalg.norm(sys.A, 2))):
        raise SingularAError(
            f"A is numerically singular (sigma_min {sigma:.3e}); G has a pole at the origin"
        )
    G0 = sys.D - sys.C @ np.linalg.solve(sys.A, sys.B)
    asym = float(np.linalg.norm(G0 - G0.T, "fro"))
    if asym > tol * max(1.0, float(np.linalg.norm(G0, "fro"))):
        warnings.warn(
            f"DC gain of {sys.label or 'system'} is asymmetric ({asym:.3e}); "
            "not expected of a negative-imaginary system",
            stacklevel=2,
        )
    return G0


def residue_at_pole(sys: StateSpace, omega0: float, tol: float = TOL_AXIS) -> ResidueReport:
    """Residue matrix K0 = lim_{s -> j w0} (s - j w0) s G(s) at a simple pole.

    Computed from right/left eigenvectors of A rather than a numerical limit,
    which is ill-conditioned near the pole.  K0 = j w0 (C v)(w* B)/(w* v).
    """
    if omega0 <= 0:
        raise NotAPoleError("omega0 must be positive (axis poles are taken as +j omega0)")
    target = 1j * omega0
    eigs, V = np.linalg.eig(sys.A)
    scale = max(1.0, omega0)
    dist = np.abs(eigs - target)
    cluster = np.flatnonzero(dist <= tol * scale)
    if cluster.size == 0:
        raise NotAPoleError(
            f"j*{omega0} is not an eigenvalue of A (closest at distance {dist.min():.3e})"
        )
    if cluster.size > 1:
        raise NotSimplePoleError(
            f"eigenvalue j*{omega0} has algebraic multiplicity {cluster.size}"
        )
    # defectiveness guard: a simple pole leaves sI - A with a 1-dim kernel
    kernel_dim = int(np.sum(np.linalg.svd(sys.A - target * np.eye(sys.n), compute_uv=False)
                            <= tol * max(1.0, float(np.linalg.norm(sys.A, 2)))))
    if kernel_dim > 1:
        raise NotSimplePoleError(f"eigenvalue j*{omega0} is defective (kernel dim {kernel_dim})")
    idx = int(cluster[0])
    v = V[:, idx]
    eigs_t, W = np.linalg.eig(sys.A.T)
    jdx = int(np.argmin(np.abs(eigs_t - np.conj(target))))
    w = W[:, jdx]
    denom = complex(w.conj() @ v)
    if abs(denom) < tol:
        raise DegenerateEigenvectorsError(
            f"left/right eigenvectors nearly orthogonal (|w*v| = {abs(denom):.3e})"
        )
    K0 = target * np.outer(sys.C @ v, w.conj() @ sys.B.astype(complex)) / denom
    herm = (K0 + K0.conj().T) / 2
    return ResidueReport(
        omega0=float(omega0),
        K0=K0,
        is_simple=True,
        hermitian_residual=float(np.linalg.norm(K0 - K0.conj().T, "fro")),
        min_eig=float(np.linalg.eigvalsh(herm).min()),
    )


def imag_axis_pole_frequencies(sys: StateSpace, tol_axis: float = TOL_AXIS) -> list[float]:
    """Positive frequencies w0 where A has an eigenvalue on the imaginary axis."""
    out: list[float] = []
    for lam in np.linalg.eigvals(sys.A):
        if abs(lam.real) <= tol_axis * max(1.0, abs(lam)) and lam.imag > 0:
            out.append(float(lam.imag))
    return sorted(out)
