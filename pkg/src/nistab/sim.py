"""Autonomous time propagation of the closed loop with Lyapunov monitoring.

The loop is LTI, so the default propagator applies one matrix exponential
e^{A_cl dt} repeatedly (exact up to the exponential's own accuracy); a
fixed-step RK4 integrator is available for cross-checking.  When block
certificates are supplied, the storage function V = x^T Q x and the
dissipation rate ||ytilde2||^2 are recorded alongside the states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError
from .interconnect import ClosedLoop
from .lyapunov import InterconnectState, LyapunovCertificate, block_gram, make_state
from .nicert import NICertificate

METHODS = ("expm_exact", "rk4")


@dataclass
class SimulationTrace:
    times: np.ndarray
    states: list[InterconnectState]
    V: np.ndarray
    ytilde2_normsq: np.ndarray
    dt: float
    method: str


def simulate(cl: ClosedLoop, x0: np.ndarray, t_final: float, dt: float = 1e-2,
             method: str = "expm_exact",
             certs: tuple[NICertificate, NICertificate] | None = None,
             lyap_cert: LyapunovCertificate | None = None) -> SimulationTrace:
    """Propagate x' = A_cl x from x0 on a uniform grid of spacing dt.

    ``expm_exact`` computes one matrix exponential and reuses it each step;
    ``rk4`` takes four stage evaluations per step.  V and ||ytilde2||^2 are
    NaN unless certificates are provided.
    """
    from .linalg import matrix_exponential

    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    n = cl.n
    if x0.shape != (n,):
        raise DimensionError(f"x0 must have shape ({n},), got {x0.shape}")
    if dt <= 0:
        raise DimensionError("dt must be positive")
    if t_final < dt:
        raise DimensionError("t_final must be at least one step long")
    if method not in METHODS:
        raise DimensionError(f"unknown method {method!r}; pick one of {METHODS}")
    steps = int(round(t_final / dt))
    times = np.arange(steps + 1) * dt

    if certs is not None and lyap_cert is None:
        lyap_cert = block_gram(certs[0].P, certs[1].P, cl.plant, cl.controller)

    n1 = cl.plant.n
    A = cl.A_cl
    if method == "expm_exact":
        phi = matrix_exponential(A, dt)

        def step(x):
            return phi @ x
    else:
        def step(x):
            k1 = A @ x
            k2 = A @ (x + 0.5 * dt * k1)
            k3 = A @ (x + 0.5 * dt * k2)
            k4 = A @ (x + dt * k3)
            return x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

    states: list[InterconnectState] = []
    V = np.full(steps + 1, np.nan)
    diss = np.full(steps + 1, np.nan)
    x = x0.copy()
    for k in range(steps + 1):
        state = make_state(cl.plant, cl.controller, x[:n1], x[n1:])
        states.append(state)
        if lyap_cert is not None:
            V[k] = float(state.x @ lyap_cert.Q @ state.x)
        if certs is not None:
            c2 = certs[1]
            yt2 = c2.L @ (c2.P @ state.x2) - c2.L @ (cl.controller.C.T @ state.u2)
            diss[k] = float(yt2 @ yt2)
        if k < steps:
            x = step(x)
    return SimulationTrace(times=times, states=states, V=V,
                           ytilde2_normsq=diss, dt=dt, method=method)


def v_monotone(trace: SimulationTrace, tol: float = 1e-8) -> tuple[bool, float]:
    """Whether V never increases by more than tol per step; returns the worst rise."""
    V = np.asarray(trace.V, dtype=float)
    if len(V) < 2 or np.isnan(V).all():
        return True, 0.0
    rises = np.diff(V)
    worst = float(np.nanmax(rises)) if rises.size else 0.0
    return bool(worst <= tol), worst


def trace_to_csv(trace: SimulationTrace) -> str:
    """Serialize a trace as CSV with 12 significant digits per value.

    Header is ``t,x1,...,xn,V,ytilde2sq``; one row per step, deterministic.
    """
    nx = len(trace.states[0].x) if trace.states else 0
    header = ",".join(["t", *(f"x{i + 1}" for i in range(nx)), "V", "ytilde2sq"])
    lines = [header]
    for k, t in enumerate(trace.times):
        vals = [t, *trace.states[k].x, trace.V[k], trace.ytilde2_normsq[k]]
        lines.append(",".join(f"{float(v):.12g}" for v in vals))
    return "\n".join(lines) + "\n"
