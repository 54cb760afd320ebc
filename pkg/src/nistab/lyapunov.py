"""Block Lyapunov certificate for the closed loop and its dissipation identity.

The storage function is the quadratic form x^T Q x with

    Q = [[P1 - C1^T D2 C1, -C1^T C2], [-C2^T C1, P2 - C2^T D1 C2]]

whose positive definiteness is equivalent to the DC-gain condition
lambda_max(G(0) H(0)) < 1.  Along closed-loop trajectories its derivative
collapses to -||ytilde1||^2 - ||ytilde2||^2 with
ytilde_i = L_i P_i x_i - L_i C_i^T u_i; that identity is verified
numerically here rather than re-deriving the intermediate algebra.

Loop outputs are solved once at state construction (u1 = y2, u2 = y1); both
evaluations of the storage function use those outputs.  The difference
between x^T Q x and V1 + V2 - 2 y1^T y2 is exactly the feedthrough
correction y1^T D2 y1 + y2^T D1 y2, which vanishes for strictly proper
blocks; the identity including the correction is asserted unconditionally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson, cumulative_trapezoid

from .exceptions import DimensionError, FeedthroughError, NIStabError, NotCertifiedError
from .interconnect import closed_loop, dc_gain_condition
from .linalg import DEFAULT_TOL
from .nicert import NICertificate
from .statespace import StateSpace


@dataclass
class LyapunovCertificate:
    Q: np.ndarray
    min_eig_Q: float
    P1: np.ndarray
    P2: np.ndarray
    n1: int
    n2: int
    plant: StateSpace
    controller: StateSpace
    derivative_identity_residual: float = float("nan")
    dissipation_bound_checked: bool = False


@dataclass
class InterconnectState:
    """State of the closed loop with the loop outputs solved in."""

    x1: np.ndarray
    x2: np.ndarray
    u1: np.ndarray
    u2: np.ndarray
    y1: np.ndarray
    y2: np.ndarray
    exact_loop: bool

    @property
    def x(self) -> np.ndarray:
        return np.concatenate([self.x1, self.x2])


@dataclass
class ValueReport:
    value: float                    # x^T Q x
    alternative: float              # V1 + V2 - 2 y1^T y2
    feedthrough_correction: float   # y1^T D2 y1 + y2^T D1 y2
    residual: float                 # |value - alternative - correction|


@dataclass
class DerivativeCheck:
    vdot_quadratic: float
    vdot_dissipation: float
    residual: float
    ytilde1: np.ndarray
    ytilde2: np.ndarray


@dataclass
class EquivalenceReport:
    agree: bool
    borderline: bool
    min_eig_Q: float
    lambda_max: float

    def __bool__(self) -> bool:
        return self.agree


@dataclass
class DissipationReport:
    integral: float           # Simpson value of int ||ytilde2||^2 dt
    integral_trapezoid: float
    v0: float
    max_cumulative: float
    tol_int: float
    passed: bool


def make_state(plant: StateSpace, controller: StateSpace,
               x1: np.ndarray, x2: np.ndarray,
               tol: float = DEFAULT_TOL) -> InterconnectState:
    """Solve the loop equations u1 = y2, u2 = y1 for the given states.

    With D1 @ D2 = 0 (the interconnection stability hypothesis) the substitution is
    direct; otherwise the general (I - D1 D2)^{-1} solve is used and the state
    is flagged as not exactly covered by the block closed-loop formula.
    """
    x1 = np.atleast_1d(np.asarray(x1, dtype=float))
    x2 = np.atleast_1d(np.asarray(x2, dtype=float))
    if x1.shape != (plant.n,) or x2.shape != (controller.n,):
        raise DimensionError(
            f"states must have shapes ({plant.n},) and ({controller.n},), "
            f"got {x1.shape} and {x2.shape}"
        )
    D1, D2 = plant.D, controller.D
    m = plant.m
    loop = np.eye(m) - D1 @ D2
    if np.linalg.svd(loop, compute_uv=False).min() <= tol:
        raise FeedthroughError("loop is not well posed: I - D1 D2 is singular")
    dd = float(np.linalg.norm(D1 @ D2, "fro"))
    exact = dd <= tol * max(1.0, float(np.linalg.norm(D1, "fro"))
                            * float(np.linalg.norm(D2, "fro")))
    y1 = np.linalg.solve(loop, plant.C @ x1 + D1 @ (controller.C @ x2))
    y2 = controller.C @ x2 + D2 @ y1
    return InterconnectState(x1=x1, x2=x2, u1=y2, u2=y1, y1=y1, y2=y2, exact_loop=exact)


def block_gram(P1: np.ndarray, P2: np.ndarray,
               plant: StateSpace, controller: StateSpace) -> LyapunovCertificate:
    """Assemble Q from the block formula and report its minimum eigenvalue."""
    P1 = np.asarray(P1, dtype=float)
    P2 = np.asarray(P2, dtype=float)
    C1, D1 = plant.C, plant.D
    C2, D2 = controller.C, controller.D
    if P1.shape != (plant.n, plant.n) or P2.shape != (controller.n, controller.n):
        raise DimensionError("P1/P2 shapes do not match the plant/controller state dims")
    if plant.m != controller.m:
        raise DimensionError("plant and controller i/o dimensions differ")
    Q = np.block([
        [P1 - C1.T @ D2 @ C1, -C1.T @ C2],
        [-C2.T @ C1, P2 - C2.T @ D1 @ C2],
    ])
    Q = (Q + Q.T) / 2
    return LyapunovCertificate(
        Q=Q,
        min_eig_Q=float(np.linalg.eigvalsh(Q).min()),
        P1=P1, P2=P2, n1=plant.n, n2=controller.n,
        plant=plant, controller=controller,
    )


def gram_dc_equivalence(plant: StateSpace, controller: StateSpace,
                       P1: np.ndarray, P2: np.ndarray,
                       tol: float = 1e-6) -> EquivalenceReport:
    """Do (Q positive definite) and (lambda_max(G(0)H(0)) < 1) agree?

    Cases with either margin inside the tolerance band are flagged borderline
    (the equivalence holds there only in the semidefinite boundary sense).
    """
    cert = block_gram(P1, P2, plant, controller)
    lam_max, _ = dc_gain_condition(plant, controller, tol=DEFAULT_TOL)
    q_pd = cert.min_eig_Q > tol
    dc_ok = lam_max < 1.0 - tol
    borderline = abs(cert.min_eig_Q) <= tol or abs(lam_max - 1.0) <= tol
    return EquivalenceReport(
        agree=bool(q_pd == dc_ok or borderline),
        borderline=bool(borderline),
        min_eig_Q=cert.min_eig_Q,
        lambda_max=lam_max,
    )


def lyapunov_value(state: InterconnectState, cert: LyapunovCertificate,
                   tol: float = 1e-10) -> ValueReport:
    """Evaluate the storage function both ways and check they coincide.

    The block quadratic form x^T Q x equals V1 + V2 - 2 y1^T y2 plus the
    feedthrough correction y1^T D2 y1 + y2^T D1 y2 whenever the outputs
    satisfy the loop constraint; a residual above ``tol`` (scaled) means the
    state was not produced by ``make_state`` for this interconnection.
    """
    x = state.x
    if x.shape != (cert.Q.shape[0],):
        raise DimensionError("state dimension does not match the certificate")
    value = float(x @ cert.Q @ x)
    alt = (float(state.x1 @ cert.P1 @ state.x1)
           + float(state.x2 @ cert.P2 @ state.x2)
           - 2.0 * float(state.y1 @ state.y2))
    correction = (float(state.y1 @ cert.controller.D @ state.y1)
                  + float(state.y2 @ cert.plant.D @ state.y2))
    residual = abs(value - alt - correction)
    scale = max(1.0, float(x @ x) * max(1.0, float(np.linalg.norm(cert.Q, 2))))
    if residual > tol * scale:
        raise NIStabError(
            f"storage-function evaluations disagree (residual {residual:.3e}); "
            "state outputs do not satisfy the loop constraint"
        )
    return ValueReport(value=value, alternative=alt,
                       feedthrough_correction=correction, residual=residual)


def lyapunov_derivative(state: InterconnectState,
                        plant: StateSpace, controller: StateSpace,
                        certs: tuple[NICertificate, NICertificate],
                        lyap_cert: LyapunovCertificate | None = None) -> DerivativeCheck:
    """Both sides of the dissipation identity at one state.

    Computes x^T (A_cl^T Q + Q A_cl) x with A_cl taken from the interconnect
    module (one source of truth) and the dissipation form
    -||ytilde1||^2 - ||ytilde2||^2, returning both and their difference.
    """
    cert1, cert2 = certs
    if not (cert1.certified and cert2.certified):
        raise NotCertifiedError("lyapunov_derivative requires certified blocks")
    if lyap_cert is None:
        lyap_cert = block_gram(cert1.P, cert2.P, plant, controller)
    cl = closed_loop(plant, controller)
    x = state.x
    M = cl.A_cl.T @ lyap_cert.Q + lyap_cert.Q @ cl.A_cl
    vdot_quad = float(x @ M @ x)
    yt1 = cert1.L @ (cert1.P @ state.x1) - cert1.L @ (plant.C.T @ state.u1)
    yt2 = cert2.L @ (cert2.P @ state.x2) - cert2.L @ (controller.C.T @ state.u2)
    vdot_diss = -float(yt1 @ yt1) - float(yt2 @ yt2)
    return DerivativeCheck(
        vdot_quadratic=vdot_quad,
        vdot_dissipation=vdot_diss,
        residual=abs(vdot_quad - vdot_diss),
        ytilde1=yt1,
        ytilde2=yt2,
    )


def dissipation_integral_check(trace, tol_int: float = 1e-6) -> DissipationReport:
    """Check int_0^t ||ytilde2||^2 ds <= V(0) + tol_int along a trace.

    The cumulative integral is evaluated with composite Simpson quadrature
    (the plain trapezoid value is reported as well, but its O(dt^2) bias is
    too coarse for the bound when the plant is lossless and the inequality
    is tight).  The integrand is nonnegative, so the cumulative maximum is
    attained at the final time.
    """
    f = np.asarray(trace.ytilde2_normsq, dtype=float)
    t = np.asarray(trace.times, dtype=float)
    if f.shape != t.shape:
        raise DimensionError("trace time and dissipation arrays differ in length")
    v0 = float(trace.V[0]) if len(trace.V) else 0.0
    if len(t) < 2:
        return DissipationReport(0.0, 0.0, v0, 0.0, tol_int, passed=True)
    cum_simpson = cumulative_simpson(f, x=t, initial=0.0)
    cum_trap = cumulative_trapezoid(f, t, initial=0.0)
    max_cum = float(cum_simpson.max())
    return DissipationReport(
        integral=float(cum_simpson[-1]),
        integral_trapezoid=float(cum_trap[-1]),
        v0=v0,
        max_cumulative=max_cum,
        tol_int=tol_int,
        passed=bool(max_cum <= v0 + tol_int),
    )
