"""Negative-imaginary certification of LTI systems.

Three independent routes are provided:

* a frequency sweep of the Hermitian matrix j(G(jw) - G(jw)*) together with
  pole/residue screening (definition-level test),
* a positive-real reduction that sweeps F(jw) = jw (G(jw) - D) instead
  (cross-validation route; F + F* equals w * j(G - G*) analytically),
* a state-space certificate search for a symmetric Y > 0 with
  A Y + Y A^T <= 0 and A Y C^T = -B, returning P = Y^{-1} and a factor L
  with L^T L = -(A Y + Y A^T).

Sign convention used throughout: A Y + Y A^T = -L^T L.  Every certificate
carries this convention string so downstream checks are unambiguous.

The certificate search runs alternating projections between the affine
subspace that encodes the coupling constraint exactly (parametrized through
its nullspace) and the product of PSD cones {Y - eps I >= 0} x
{-(A Y + Y A^T) >= 0}, with eigenvalue clamping as the cone projection and
a least-squares map back to the subspace.  Feasibility, not nearest-point
projection, is the goal; over-relaxation speeds convergence.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    AsymmetricDError,
    GenerationFailedError,
    NearPoleError,
    NotCertifiedError,
    SingularAError,
)
from .linalg import DEFAULT_TOL, min_singular_value
from .statespace import (
    TOL_AXIS,
    TOL_POLE,
    StateSpace,
    eval_tf,
    imag_axis_pole_frequencies,
    is_minimal,
    residue_at_pole,
)

SIGN_CONVENTION = "A@Y + Y@A.T == -L.T@L with Y == inv(P)"


class Verdict(str, enum.Enum):
    NI = "NI"
    SNI = "SNI"
    NOT_NI = "NotNI"
    INCONCLUSIVE = "Inconclusive"


class CertStatus(str, enum.Enum):
    CERTIFIED = "Certified"
    INFEASIBLE = "Infeasible"
    MAX_ITERATIONS = "MaxIterations"


@dataclass(frozen=True)
class FrequencyGrid:
    """Sampling of (0, inf) used by the sweep certifiers."""

    omega_min: float = 1e-3
    omega_max: float = 1e3
    points: int = 400
    spacing: str = "logarithmic"
    exclusion_radius: float = 1e-2

    def __post_init__(self):
        if not (0 < self.omega_min < self.omega_max):
            raise ValueError("need 0 < omega_min < omega_max")
        if self.points < 2:
            raise ValueError("need at least 2 grid points")
        if self.spacing not in ("logarithmic", "linear"):
            raise ValueError(f"unknown spacing {self.spacing!r}")
        if self.exclusion_radius < 0:
            raise ValueError("exclusion_radius must be nonnegative")

    def omegas(self) -> np.ndarray:
        if self.spacing == "logarithmic":
            return np.logspace(np.log10(self.omega_min), np.log10(self.omega_max), self.points)
        return np.linspace(self.omega_min, self.omega_max, self.points)


@dataclass
class GridPoint:
    omega: float
    min_eig: float | None
    status: str  # "ok" | "excluded" | "near-pole"


@dataclass
class FrequencyReport:
    grid: FrequencyGrid
    per_point: list[GridPoint]
    pole_findings: list
    origin_pole: bool
    rhp_pole: bool
    verdict: Verdict
    warnings: list[str] = field(default_factory=list)

    def worst_point(self) -> GridPoint | None:
        pts = [p for p in self.per_point if p.status == "ok"]
        return min(pts, key=lambda p: p.min_eig) if pts else None


@dataclass
class PositiveRealReport:
    grid: FrequencyGrid
    per_point: list[GridPoint]
    pole_findings: list
    rhp_pole: bool
    verdict: Verdict
    warnings: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict in (Verdict.NI, Verdict.SNI)


@dataclass
class NICertificate:
    """Witness for the state-space NI conditions (or their infeasibility)."""

    verdict: CertStatus
    P: np.ndarray | None = None
    Y: np.ndarray | None = None
    L: np.ndarray | None = None
    lyap_residual: float = float("nan")
    coupling_residual: float = float("nan")
    factor_residual: float = float("nan")
    strict: bool = False
    rank_condition_min_sv: float = float("nan")
    iterations: int = 0
    convention: str = SIGN_CONVENTION
    infeasibility_witness: np.ndarray | None = None
    system_label: str = ""

    @property
    def certified(self) -> bool:
        return self.verdict is CertStatus.CERTIFIED


@dataclass
class WZeroReport:
    """Zeros of W(s) = L P (sI - A)^{-1} B - L C^T on the positive imaginary axis."""

    per_point: list[GridPoint]
    flagged: list[float]
    origin_value: float
    passed: bool


@dataclass
class SolverOptions:
    tol: float = DEFAULT_TOL
    eps_scale: float = 1e-6
    max_iterations: int = 5000
    stall_window: int = 200
    stall_improvement: float = 1e-3
    step: float = 1.0  # Douglas-Rachford step scale in (0, 2)


def default_grid() -> FrequencyGrid:
    return FrequencyGrid()


# ---------------------------------------------------------------------------
# frequency-domain certifiers


def _classify_poles(sys: StateSpace, tol_axis: float):
    eigs = np.linalg.eigvals(sys.A)
    scale_a = max(1.0, float(np.linalg.norm(sys.A, 2)))
    origin = bool(np.any(np.abs(eigs) <= tol_axis * scale_a))
    rhp = bool(np.any(eigs.real > tol_axis * np.maximum(1.0, np.abs(eigs))))
    return eigs, origin, rhp


def _sweep(sys: StateSpace, grid: FrequencyGrid, transform,
           tol_axis: float = TOL_AXIS, tol_pole: float = TOL_POLE) -> list[GridPoint]:
    """Evaluate min eig of ``transform(omega, G(j omega))`` over the grid.

    Points inside the exclusion radius of an imaginary-axis pole are skipped;
    resolvent blow-ups are recorded as conditioning failures.
    """
    pole_ws = imag_axis_pole_frequencies(sys, tol_axis)
    points = []
    for omega in grid.omegas():
        omega = float(omega)
        if any(abs(omega - w0) <= grid.exclusion_radius * max(1.0, w0) for w0 in pole_ws):
            points.append(GridPoint(omega, None, "excluded"))
            continue
        try:
            G = eval_tf(sys, 1j * omega, tol_pole)
        except NearPoleError:
            points.append(GridPoint(omega, None, "near-pole"))
            continue
        M = transform(omega, G)
        val = float(np.linalg.eigvalsh((M + M.conj().T) / 2).min())
        points.append(GridPoint(omega, val, "ok"))
    return points


def _residue_findings(sys: StateSpace, tol_axis: float):
    """Residue reports for every positive-frequency axis pole; (findings, problems)."""
    findings, problems = [], []
    for w0 in imag_axis_pole_frequencies(sys, tol_axis):
        try:
            findings.append(residue_at_pole(sys, w0, tol_axis))
        except Exception as exc:  # NotSimple / Degenerate / NotAPole borderline
            problems.append(f"pole at j*{w0:.6g}: {exc}")
    return findings, problems


def freq_ni_test(sys: StateSpace, grid: FrequencyGrid | None = None,
                 tol: float = DEFAULT_TOL, tol_axis: float = TOL_AXIS,
                 tol_pole: float = TOL_POLE) -> FrequencyReport:
    """Definition-level NI test: pole locations, residues, and the grid sweep."""
    grid = grid or default_grid()
    notes = []
    mini = is_minimal(sys)
    if not mini:
        notes.append("realization is not minimal; pole-based conditions may be spurious")
        warnings.warn(f"{sys.label or 'system'}: realization is not minimal", stacklevel=2)
    _, origin, rhp = _classify_poles(sys, tol_axis)
    findings, problems = _residue_findings(sys, tol_axis)
    notes.extend(problems)
    points = _sweep(sys, grid, lambda w, G: 1j * (G - G.conj().T), tol_axis, tol_pole)
    valid = [p.min_eig for p in points if p.status == "ok"]
    if origin or rhp or problems or any(not f.accepted(tol) for f in findings):
        verdict = Verdict.NOT_NI
    elif not valid:
        verdict = Verdict.INCONCLUSIVE
        notes.append("no usable grid points (all excluded or ill-conditioned)")
    elif min(valid) < -tol:
        verdict = Verdict.NOT_NI
    else:
        verdict = Verdict.NI
    return FrequencyReport(grid, points, findings, origin, rhp, verdict, notes)


def freq_sni_test(sys: StateSpace, grid: FrequencyGrid | None = None,
                  tol: float = DEFAULT_TOL, tol_axis: float = TOL_AXIS,
                  tol_pole: float = TOL_POLE) -> FrequencyReport:
    """Strict test: all poles in the open left half plane, sweep strictly positive.

    A grid cannot prove strictness on all of (0, inf); margins inside the
    tolerance band therefore yield ``Inconclusive`` rather than ``SNI``.
    """
    grid = grid or default_grid()
    notes = []
    eigs, origin, rhp = _classify_poles(sys, tol_axis)
    axis = bool(imag_axis_pole_frequencies(sys, tol_axis)) or origin
    points = _sweep(sys, grid, lambda w, G: 1j * (G - G.conj().T), tol_axis, tol_pole)
    valid = [p.min_eig for p in points if p.status == "ok"]
    if rhp or axis:
        verdict = Verdict.NOT_NI
        notes.append("poles outside the open left half plane")
    elif not valid:
        verdict = Verdict.INCONCLUSIVE
        notes.append("no usable grid points")
    elif min(valid) < -tol:
        verdict = Verdict.NOT_NI
    elif min(valid) <= tol:
        verdict = Verdict.INCONCLUSIVE
        notes.append(f"sweep minimum {min(valid):.3e} inside the +/-{tol:.1e} band")
    else:
        verdict = Verdict.SNI
    return FrequencyReport(grid, points, [], origin, rhp, verdict, notes)


def positive_real_check(sys: StateSpace, grid: FrequencyGrid | None = None,
                        tol: float = DEFAULT_TOL, tol_axis: float = TOL_AXIS,
                        tol_pole: float = TOL_POLE) -> PositiveRealReport:
    """NI via positive realness of F(s) = s (G(s) - D).

    Checks F(jw) + F(jw)* >= 0 on the grid, pole locations in the closed left
    half plane, and PSD Hermitian residues on the axis (the residues of F at
    j w0 coincide with the NI residue matrices of G).
    """
    sigma = min_singular_value(sys.A)
    if sigma <= tol * max(1.0, float(np.linalg.norm(sys.A, 2))):
        raise SingularAError("A is numerically singular; F(s) = s(G(s) - D) is undefined at 0")
    notes = []
    _, _, rhp = _classify_poles(sys, tol_axis)
    findings, problems = _residue_findings(sys, tol_axis)
    notes.extend(problems)
    D = sys.D

    def hermitian_part_f(w, G):
        F = 1j * w * (G - D)
        return F + F.conj().T

    points = _sweep(sys, grid or default_grid(), hermitian_part_f, tol_axis, tol_pole)
    valid = [p.min_eig for p in points if p.status == "ok"]
    if rhp or problems or any(not f.accepted(tol) for f in findings):
        verdict = Verdict.NOT_NI
    elif not valid:
        verdict = Verdict.INCONCLUSIVE
        notes.append("no usable grid points")
    elif min(valid) < -tol:
        verdict = Verdict.NOT_NI
    else:
        verdict = Verdict.NI
    return PositiveRealReport(grid or default_grid(), points, findings, rhp, verdict, notes)


# ---------------------------------------------------------------------------
# state-space certificate search


_SQRT2 = np.sqrt(2.0)


def _sym_basis(n: int) -> list[np.ndarray]:
    """Orthonormal basis of symmetric n x n matrices: diagonals, then off-diagonals."""
    basis = []
    for i in range(n):
        E = np.zeros((n, n))
        E[i, i] = 1.0
        basis.append(E)
    off = 1.0 / _SQRT2
    for i in range(n):
        for j in range(i + 1, n):
            E = np.zeros((n, n))
            E[i, j] = off
            E[j, i] = off
            basis.append(E)
    return basis


def _svec(M: np.ndarray, n: int) -> np.ndarray:
    """Coordinates of symmetric M in the _sym_basis ordering (isometry)."""
    iu, ju = np.triu_indices(n, k=1)
    return np.concatenate([np.diag(M), _SQRT2 * M[iu, ju]])


def _smat(s: np.ndarray, n: int) -> np.ndarray:
    M = np.zeros((n, n))
    M[np.diag_indices(n)] = s[:n]
    iu, ju = np.triu_indices(n, k=1)
    off = s[n:] / _SQRT2
    M[iu, ju] = off
    M[ju, iu] = off
    return M


def lmi_ni_certificate(sys: StateSpace, opts: SolverOptions | None = None) -> NICertificate:
    """Search for Y = Y^T > 0 with A Y + Y A^T <= 0 and A Y C^T = -B.

    On success the certificate carries P = Y^{-1}, the factor L with
    L^T L = -(A Y + Y A^T), and the three residuals that make it checkable
    by direct matrix arithmetic.  An empty affine constraint set yields an
    ``Infeasible`` verdict with a separating-functional witness; otherwise
    infeasibility is declared when the projection gap stagnates.
    """
    opts = opts or SolverOptions()
    tol = opts.tol
    n, m = sys.n, sys.m
    A, B, C = sys.A, sys.B, sys.C
    norm_a = float(np.linalg.norm(A, 2))
    if min_singular_value(A) <= tol * max(1.0, norm_a):
        raise SingularAError("A is numerically singular; the NI certificate requires det(A) != 0")
    d_asym = float(np.linalg.norm(sys.D - sys.D.T, "fro"))
    if d_asym > tol * max(1.0, float(np.linalg.norm(sys.D, "fro"))):
        raise AsymmetricDError(f"D is not symmetric (defect {d_asym:.3e})")

    basis = _sym_basis(n)
    nsym = len(basis)
    # coupling A Y C^T = -B, with A invertible, reduces to Y C^T = V
    V = -np.linalg.solve(A, B)
    K = np.stack([(E @ C.T).ravel() for E in basis], axis=1)
    b = V.ravel()
    U_k, sv_k, Vt_k = np.linalg.svd(K, full_matrices=True)
    rank_k = int(np.sum(sv_k > 1e-12 * (sv_k[0] if sv_k.size else 1.0)))
    pinv_k = (Vt_k[:rank_k].T / sv_k[:rank_k]) @ U_k[:, :rank_k].T
    s_particular = pinv_k @ b
    affine_defect = K @ s_particular - b
    if np.linalg.norm(affine_defect) > tol * max(1.0, np.linalg.norm(b)):
        # no symmetric Y satisfies the coupling equation; the least-squares
        # residual is orthogonal to the range, hence a separating functional
        return NICertificate(
            verdict=CertStatus.INFEASIBLE,
            infeasibility_witness=affine_defect.reshape(n, m),
            coupling_residual=float(np.linalg.norm(A @ affine_defect.reshape(n, m))),
            system_label=sys.label,
        )

    null_basis = Vt_k[rank_k:].T  # nsym x d, orthonormal
    dim_free = null_basis.shape[1]
    Yp = _smat(s_particular, n)
    Yp = (Yp + Yp.T) / 2
    null_mats = [_smat(null_basis[:, k], n) for k in range(dim_free)]

    eps = opts.eps_scale / max(1.0, norm_a)
    eye = np.eye(n)

    def lyap(Y):
        return A @ Y + Y @ A.T

    def embed(Ymat, Zmat):
        return np.concatenate([_svec(Ymat, n), _svec(Zmat, n)])

    f0 = embed(Yp - eps * eye, -lyap(Yp))
    if dim_free:
        Gmap = np.stack([embed(Nk, -lyap(Nk)) for Nk in null_mats], axis=1)
        pinv_g = np.linalg.pinv(Gmap, rcond=1e-12)
    else:
        Gmap = np.zeros((2 * nsym, 0))
        pinv_g = np.zeros((0, 2 * nsym))

    # clamp floors sit half a tolerance below the cone boundary: the true
    # feasible point is then interior to the relaxed sets, which turns the
    # tangential (sublinear) approach on thin feasible slivers into a
    # linear-rate one, while the certified residuals stay within tolerance
    tol_lyap = tol * max(1.0, norm_a)
    floors = (-eps / 2, -tol_lyap / 2)

    def psd_clamp(z):
        out = []
        for block, floor in zip((z[:nsym], z[nsym:]), floors):
            M = _smat(block, n)
            w, U = np.linalg.eigh((M + M.T) / 2)
            out.append(_svec((U * np.maximum(w, floor)) @ U.T, n))
        return np.concatenate(out)

    def make_y(theta):
        Y = Yp.copy()
        for t, Nk in zip(theta, null_mats):
            Y += t * Nk
        return (Y + Y.T) / 2

    scale_b = max(1.0, float(np.linalg.norm(B, "fro")))

    def residuals(Y):
        lyap_min = float(-np.linalg.eigvalsh(lyap(Y)).max())
        y_min = float(np.linalg.eigvalsh(Y).min())
        coupling = float(np.linalg.norm(B + A @ Y @ C.T, "fro"))
        gap = (max(0.0, -lyap_min) / max(1.0, norm_a)
               + max(0.0, eps / 2 - y_min)
               + coupling / scale_b)
        ok = lyap_min >= -tol_lyap and y_min >= eps / 2 and coupling <= tol * scale_b
        return lyap_min, y_min, coupling, gap, ok

    # Douglas-Rachford splitting between the affine family and the product
    # cone; the shadow point (cone projection pulled back to the family) is
    # the candidate checked each iteration.  Plain alternating projections
    # approach thin feasible slivers tangentially and can need 1e4+ sweeps;
    # DR reaches the same points in tens of iterations.
    def proj_affine(z):
        return f0 + Gmap @ (pinv_g @ (z - f0))

    z = f0.copy()
    window_best = np.inf
    prev_window_best = np.inf
    status = CertStatus.MAX_ITERATIONS
    Y = make_y(np.zeros(dim_free))
    iterations = opts.max_iterations
    for it in range(1, opts.max_iterations + 1):
        pc = psd_clamp(z)
        pa = proj_affine(2 * pc - z)
        z = z + opts.step * (pa - pc)
        theta = pinv_g @ (pc - f0)
        Y = make_y(theta)
        lyap_min, y_min, coupling, gap, ok = residuals(Y)
        if ok:
            status = CertStatus.CERTIFIED
            iterations = it
            break
        window_best = min(window_best, gap)
        if it % opts.stall_window == 0:
            if (window_best > prev_window_best * (1 - opts.stall_improvement)
                    and window_best > 1e-7):
                status = CertStatus.INFEASIBLE
                iterations = it
                break
            prev_window_best = window_best
            window_best = np.inf

    lyap_min, y_min, coupling, gap, ok = residuals(Y)
    if status is not CertStatus.CERTIFIED:
        return NICertificate(
            verdict=status,
            Y=Y,
            lyap_residual=lyap_min,
            coupling_residual=coupling,
            iterations=iterations,
            system_label=sys.label,
        )
    return _assemble_certificate(sys, Y, iterations, tol)


def _assemble_certificate(sys: StateSpace, Y: np.ndarray, iterations: int,
                          tol: float) -> NICertificate:
    """Build the checkable certificate (P, L, residuals) from a feasible Y."""
    A = sys.A
    W = -(A @ Y + Y @ A.T)
    W = (W + W.T) / 2
    # same eigendecomposition square root as psd_factor, with the clamp band
    # widened to the solver's certified tolerance (relative to ||A||)
    thr = tol * max(1.0, float(np.linalg.norm(A, 2)), float(np.abs(np.linalg.eigvalsh(W)).max()))
    w, U = np.linalg.eigh(W)
    keep = w > thr
    L = np.sqrt(w[keep])[:, np.newaxis] * U[:, keep].T
    P = np.linalg.inv(Y)
    P = (P + P.T) / 2
    return NICertificate(
        verdict=CertStatus.CERTIFIED,
        P=P,
        Y=Y,
        L=L,
        lyap_residual=float(np.linalg.eigvalsh(W).min()),
        coupling_residual=float(np.linalg.norm(sys.B + A @ Y @ sys.C.T, "fro")),
        factor_residual=float(np.linalg.norm(L.T @ L + A @ Y + Y @ A.T, "fro")),
        iterations=iterations,
        system_label=sys.label,
    )


def certificate_from_y(sys: StateSpace, Y: np.ndarray, tol: float = DEFAULT_TOL) -> NICertificate:
    """Certificate for a known feasible Y (used by constructive generation)."""
    return _assemble_certificate(sys, (Y + Y.T) / 2, 0, tol)


# ---------------------------------------------------------------------------
# strictness checks


def sni_rank_condition(sys: StateSpace, cert: NICertificate,
                       grid: FrequencyGrid | None = None,
                       tol: float = DEFAULT_TOL) -> float:
    """Minimum singular value over the grid of [[A - jwI, B], [L P, -L C^T]].

    Full column rank of this pencil for all w > 0 is the strictness condition
    that excludes imaginary-axis closed-loop eigenvalues.  Sets ``cert.strict``
    and ``cert.rank_condition_min_sv``.
    """
    if not cert.certified:
        raise NotCertifiedError("sni_rank_condition requires a certified system")
    grid = grid or default_grid()
    n, m = sys.n, sys.m
    L, P = cert.L, cert.P
    lower = np.hstack([L @ P, -(L @ sys.C.T)])
    min_sv = np.inf
    if n + L.shape[0] < n + m:
        min_sv = 0.0  # fewer rows than columns: full column rank impossible
    else:
        for omega in grid.omegas():
            top = np.hstack([sys.A - 1j * float(omega) * np.eye(n), sys.B])
            sv = min_singular_value(np.vstack([top, lower]))
            min_sv = min(min_sv, sv)
    cert.rank_condition_min_sv = float(min_sv)
    cert.strict = bool(min_sv > tol)
    return float(min_sv)


def w_transfer_zero_check(sys: StateSpace, cert: NICertificate,
                          grid: FrequencyGrid | None = None,
                          tol: float = DEFAULT_TOL) -> WZeroReport:
    """Zeros of W(jw) = L P (jwI - A)^{-1} B - L C^T for w > 0.

    W(s) = s M(s) vanishes at the origin by construction, so the value at the
    low end of the grid is recorded without being flagged.
    """
    if not cert.certified:
        raise NotCertifiedError("w_transfer_zero_check requires a certified system")
    grid = grid or default_grid()
    L, P = cert.L, cert.P
    LP = L @ P
    LCt = L @ sys.C.T
    eye = np.eye(sys.n)
    points: list[GridPoint] = []
    flagged: list[float] = []
    omegas = grid.omegas()
    for omega in omegas:
        omega = float(omega)
        if L.shape[0] == 0:
            points.append(GridPoint(omega, 0.0, "ok"))
            flagged.append(omega)
            continue
        try:
            Wjw = LP @ np.linalg.solve(1j * omega * eye - sys.A, sys.B.astype(complex)) - LCt
        except np.linalg.LinAlgError:
            points.append(GridPoint(omega, None, "near-pole"))
            continue
        sv = min_singular_value(Wjw) if L.shape[0] >= sys.m else 0.0
        points.append(GridPoint(omega, sv, "ok"))
        if sv < tol and omega > omegas[0]:
            flagged.append(omega)
    origin_value = next((p.min_eig for p in points if p.min_eig is not None), 0.0)
    return WZeroReport(points, flagged, float(origin_value), passed=not flagged)


# ---------------------------------------------------------------------------
# constructive generation


def random_ni_system(seed: int, n: int, m: int, strict: bool = False,
                     with_feedthrough: bool = False,
                     max_retries: int = 50) -> tuple[StateSpace, NICertificate]:
    """Draw a random NI (or SNI) system with its by-construction certificate.

    Draws Y > 0, skew S and PSD W, sets A = (S - W/2) Y^{-1} so that
    A Y + Y A^T = -W, then B = -A Y C^T for random C.  Deterministic in
    ``seed``; retries until the realization is minimal, A is comfortably
    nonsingular and (for strict systems) the rank condition holds.
    """
    if n < 1 or m < 1:
        raise GenerationFailedError("need n >= 1 and m >= 1")
    rng = np.random.default_rng(seed)
    grid = FrequencyGrid(points=120)
    for _ in range(max_retries):
        Qm, _ = np.linalg.qr(rng.standard_normal((n, n)))
        Y = Qm @ np.diag(rng.uniform(0.5, 2.0, n)) @ Qm.T
        T = rng.standard_normal((n, n))
        S = (T - T.T) / 2
        F = rng.standard_normal((n, n)) / np.sqrt(n)
        W = F @ F.T
        if strict:
            W += 0.1 * np.eye(n)
        A = (S - W / 2) @ np.linalg.inv(Y)
        if min_singular_value(A) <= 1e-4 * max(1.0, float(np.linalg.norm(A, 2))):
            continue
        C = rng.standard_normal((m, n))
        B = -A @ Y @ C.T
        if with_feedthrough:
            R = rng.standard_normal((m, m)) * 0.3
            D = R @ R.T  # PSD, hence symmetric
        else:
            D = np.zeros((m, m))
        sys = StateSpace(A, B, C, D, label=f"random-ni-{seed}")
        if not is_minimal(sys):
            continue
        if strict and np.linalg.eigvals(A).real.max() >= -TOL_AXIS:
            continue
        cert = certificate_from_y(sys, Y)
        if strict:
            if sni_rank_condition(sys, cert, grid) <= DEFAULT_TOL:
                continue
        return sys, cert
    raise GenerationFailedError(
        f"could not generate an {'SNI' if strict else 'NI'} system after {max_retries} draws"
    )
