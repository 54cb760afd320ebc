"""Positive-feedback interconnection of an NI plant and an SNI controller.

The loop closes u1 = y2 and u2 = y1 with no sign inversion.  Under the
feedthrough hypothesis D1 @ D2 = 0 (both D's symmetric, so D2 @ D1 = 0 as
well) the closed-loop state matrix is

    A_cl = [[A1 + B1 D2 C1, B1 C2], [B2 C1, A2 + B2 D1 C2]]

and internal stability is decided by its spectrum.  ``analyze`` checks every
stability hypothesis (plant NI, controller SNI, feedthrough product,
controller feedthrough PSD, DC-gain condition) and always reports the
closed-loop spectrum as ground truth, so hypothesis violations can be
compared against the actual behaviour.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    DimensionError,
    FeedthroughError,
    NIStabError,
    NonRealSpectrumError,
)
from .linalg import DEFAULT_TOL, min_eig_sym
from .nicert import (
    FrequencyGrid,
    FrequencyReport,
    NICertificate,
    SolverOptions,
    Verdict,
    default_grid,
    freq_ni_test,
    freq_sni_test,
    lmi_ni_certificate,
    sni_rank_condition,
)
from .statespace import TOL_AXIS, StateSpace, dc_gain

#: Hurwitz band: eigenvalues with |Re| <= HURWITZ_TOL * max(1, ||A_cl||) are "on axis"
HURWITZ_TOL = 1e-8


class Stability(str, enum.Enum):
    INTERNALLY_STABLE = "InternallyStable"
    UNSTABLE = "Unstable"
    MARGINAL = "MarginallyStableOnAxis"
    HYPOTHESIS_VIOLATED = "HypothesisViolated"


@dataclass
class ClosedLoop:
    plant: StateSpace
    controller: StateSpace
    A_cl: np.ndarray
    eigenvalues: np.ndarray
    dc_product_eigs: np.ndarray | None
    lambda_max: float | None
    well_posed: bool
    dd_product_norm: float

    @property
    def n(self) -> int:
        return self.A_cl.shape[0]


@dataclass
class StabilityVerdict:
    verdict: Stability
    violated_hypotheses: list[str]
    margin: float


@dataclass
class AnalysisResult:
    verdict: StabilityVerdict
    closed_loop: ClosedLoop | None
    hypotheses: dict
    lambda_max: float | None
    plant_certificate: NICertificate | None
    controller_certificate: NICertificate | None
    plant_freq: FrequencyReport
    controller_freq: FrequencyReport
    warnings: list[str] = field(default_factory=list)


def _check_dims(plant: StateSpace, controller: StateSpace) -> None:
    if plant.m != controller.m:
        raise DimensionError(
            f"plant is {plant.m}x{plant.m} but controller is {controller.m}x{controller.m}"
        )


def closed_loop(plant: StateSpace, controller: StateSpace,
                tol: float = DEFAULT_TOL) -> ClosedLoop:
    """Assemble the closed-loop matrix for the positive-feedback loop.

    Requires the feedthrough hypothesis ||D1 @ D2|| <= tol, under which the
    loop is automatically well posed and the block formula is exact.
    """
    _check_dims(plant, controller)
    D1, D2 = plant.D, controller.D
    dd = float(np.linalg.norm(D1 @ D2, "fro"))
    scale = max(1.0, float(np.linalg.norm(D1, "fro")) * float(np.linalg.norm(D2, "fro")))
    if dd > tol * scale:
        raise FeedthroughError(
            f"||D1 @ D2|| = {dd:.3e} violates the zero feedthrough-product hypothesis"
        )
    A1, B1, C1 = plant.A, plant.B, plant.C
    A2, B2, C2 = controller.A, controller.B, controller.C
    A_cl = np.block([
        [A1 + B1 @ D2 @ C1, B1 @ C2],
        [B2 @ C1, A2 + B2 @ D1 @ C2],
    ])
    eigs = np.linalg.eigvals(A_cl)
    dc_eigs = None
    lam_max = None
    try:
        lam_max, _, dc_eigs = _dc_product(plant, controller, tol)
    except NIStabError:
        pass
    m = plant.m
    well_posed = bool(
        np.linalg.svd(np.eye(m) - D1 @ D2, compute_uv=False).min() > tol
    )
    return ClosedLoop(plant, controller, A_cl, eigs, dc_eigs, lam_max, well_posed, dd)


def _dc_product(plant: StateSpace, controller: StateSpace, tol: float):
    G0 = dc_gain(plant, tol)
    H0 = dc_gain(controller, tol)
    eigs = np.linalg.eigvals(G0 @ H0)
    radius = float(np.abs(eigs).max()) if eigs.size else 0.0
    if float(np.abs(eigs.imag).max()) > tol * max(1.0, radius):
        raise NonRealSpectrumError(
            "DC-gain product has complex eigenvalues "
            f"(max |Im| = {np.abs(eigs.imag).max():.3e}); inputs are unlikely to be NI"
        )
    lam_max = float(eigs.real.max())
    return lam_max, G0 @ H0, eigs


def dc_gain_condition(plant: StateSpace, controller: StateSpace,
                      tol: float = DEFAULT_TOL) -> tuple[float, bool]:
    """Largest (real) eigenvalue of G(0) H(0) and whether it is below 1.

    The maximum real part is used after asserting realness of the spectrum;
    eigenvalues far below 1 (including negative ones) satisfy the condition.
    """
    _check_dims(plant, controller)
    lam_max, _, _ = _dc_product(plant, controller, tol)
    return lam_max, bool(lam_max < 1.0 - tol)


def analyze(plant: StateSpace, controller: StateSpace,
            grid: FrequencyGrid | None = None,
            tol: float = DEFAULT_TOL,
            tol_axis: float = TOL_AXIS,
            hurwitz_tol: float = HURWITZ_TOL,
            solver: SolverOptions | None = None) -> AnalysisResult:
    """Full stability pipeline for the positive-feedback interconnection.

    Certifies the plant (NI) and controller (SNI, including the rank
    condition), checks the feedthrough and DC-gain hypotheses, and computes
    the closed-loop spectrum.  Nothing short-circuits: hypothesis violations
    are collected, and the spectrum is still reported when it is computable,
    so the prediction can be compared with the ground truth.
    """
    _check_dims(plant, controller)
    grid = grid or default_grid()
    notes: list[str] = []
    hypotheses: dict = {}
    violated: list[str] = []

    def record(name: str, ok: bool, detail: str) -> None:
        hypotheses[name] = {"satisfied": bool(ok), "detail": detail}
        if not ok:
            violated.append(name)

    plant_cert: NICertificate | None = None
    try:
        plant_cert = lmi_ni_certificate(plant, solver)
        record("plant_ni", plant_cert.certified,
               f"certificate verdict {plant_cert.verdict.value}")
    except NIStabError as exc:
        record("plant_ni", False, str(exc))
    plant_freq = freq_ni_test(plant, grid, tol, tol_axis)
    if plant_cert is not None and plant_cert.certified and plant_freq.verdict is Verdict.NOT_NI:
        notes.append("frequency sweep disagrees with the plant certificate; inspect the report")

    controller_cert: NICertificate | None = None
    try:
        controller_cert = lmi_ni_certificate(controller, solver)
        if controller_cert.certified:
            sni_rank_condition(controller, controller_cert, grid, tol)
        ok = controller_cert.certified and controller_cert.strict
        record("controller_sni", ok,
               f"certificate verdict {controller_cert.verdict.value}, "
               f"rank-condition min sv {controller_cert.rank_condition_min_sv:.3e}")
    except NIStabError as exc:
        record("controller_sni", False, str(exc))
    controller_freq = freq_sni_test(controller, grid, tol, tol_axis)

    dd = float(np.linalg.norm(plant.D @ controller.D, "fro"))
    dd_scale = max(1.0, float(np.linalg.norm(plant.D, "fro"))
                   * float(np.linalg.norm(controller.D, "fro")))
    record("feedthrough_product_zero", dd <= tol * dd_scale, f"||D1 @ D2|| = {dd:.3e}")

    h_inf_min = min_eig_sym(controller.D)
    record("controller_feedthrough_psd", h_inf_min >= -tol,
           f"min eig H(inf) = {h_inf_min:.3e}")
    notes.append(
        "some statements of the interconnection stability result write the "
        "controller feedthrough hypothesis as N(inf) >= 0 with N undefined; "
        "this analysis implements H(inf) = D2 >= 0"
    )

    lam_max: float | None = None
    try:
        lam_max, holds = dc_gain_condition(plant, controller, tol)
        record("dc_gain", holds, f"lambda_max(G(0) H(0)) = {lam_max:.9g}")
    except NIStabError as exc:
        record("dc_gain", False, str(exc))

    cl: ClosedLoop | None = None
    margin = float("nan")
    spectrum_class = None
    try:
        cl = closed_loop(plant, controller, tol)
        band = hurwitz_tol * max(1.0, float(np.linalg.norm(cl.A_cl, 2)))
        max_re = float(cl.eigenvalues.real.max())
        margin = -max_re
        if max_re < -band:
            spectrum_class = Stability.INTERNALLY_STABLE
        elif max_re <= band:
            spectrum_class = Stability.MARGINAL
        else:
            spectrum_class = Stability.UNSTABLE
    except FeedthroughError:
        notes.append("closed-loop matrix not assembled: feedthrough hypothesis fails")

    if violated:
        verdict = Stability.HYPOTHESIS_VIOLATED
    elif spectrum_class is None:
        verdict = Stability.HYPOTHESIS_VIOLATED
    else:
        verdict = spectrum_class
    return AnalysisResult(
        verdict=StabilityVerdict(verdict, violated, margin),
        closed_loop=cl,
        hypotheses=hypotheses,
        lambda_max=lam_max,
        plant_certificate=plant_cert,
        controller_certificate=controller_cert,
        plant_freq=plant_freq,
        controller_freq=controller_freq,
        warnings=notes,
    )
