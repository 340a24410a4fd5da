"""Returns-to-scale classification at frontier points.

Every hyperplane  u.y - v.x = w  (u, v >= 0) supporting the convex
technology at a frontier anchor confines its intercept w to an
interval.  The sign of that interval decides the local scale behaviour:
negative throughout means increasing returns, positive throughout means
decreasing returns, and an interval admitting zero means constant
returns.  Classifying at a point strictly inside a unit's minimum face
makes the verdict independent of which optimal projection the slack
model happened to return.

Each endpoint of the interval comes from one LP over multipliers
normalised by  v . x_anchor = 1.  Finite endpoints are reported exactly
and may fall outside the clamp; an unbounded endpoint is substituted by
the matching clamp value (+clamp or -clamp), pushed just far enough to
never cross the finite endpoint.  Either way the sign information, and
hence the classification, is preserved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dea, grs
from .lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LinearProgram, LpError, SolverSettings, solve

__all__ = [
    "INCREASING",
    "CONSTANT",
    "DECREASING",
    "RTS_TOL",
    "NotOnFrontierError",
    "NormalizationUnattainableError",
    "SupportingHyperplane",
    "RtsClassification",
    "intercept_bounds",
    "extreme_hyperplanes",
    "classify_rts",
    "rts_of_dmu",
]

INCREASING = "increasing"
CONSTANT = "constant"
DECREASING = "decreasing"

# Attainability of a zero intercept is an LP-tolerance-dominated call.
RTS_TOL = 1e-6


class NotOnFrontierError(RuntimeError):
    """No supporting hyperplane passes through the anchor point."""


class NormalizationUnattainableError(ValueError):
    """The anchor's inputs admit no v >= 0 with v . x = 1 (all non-positive)."""


@dataclass(frozen=True, eq=False)
class SupportingHyperplane:
    """Multipliers (u, v) and intercept w of u.y - v.x = w.

    Supporting means u.y_j - v.x_j <= w for every observed unit, with
    equality at the anchor; v is normalised so that v . x_anchor = 1.
    """

    output_multipliers: np.ndarray
    input_multipliers: np.ndarray
    intercept: float


@dataclass(frozen=True)
class RtsClassification:
    """Intercept interval at the anchor and the class it implies."""

    omega_min: float
    omega_max: float
    rts_class: str


def _anchor(point):
    x_hat = np.atleast_1d(np.asarray(point[0], dtype=float))
    y_hat = np.atleast_1d(np.asarray(point[1], dtype=float))
    return x_hat, y_hat


def _hyperplane_program(dataset, x_hat, y_hat, sense, omega_lo, omega_hi):
    """LP over [u | v | omega | support slacks] anchored at (x_hat, y_hat)."""
    n, m, s = dataset.n_dmus, dataset.n_inputs, dataset.n_outputs
    q = s + m + 1 + n
    omega_col = s + m
    rows = 2 + n
    A = np.zeros((rows, q))
    rhs = np.zeros(rows)
    # multiplier normalisation at the anchor
    A[0, s:s + m] = x_hat
    rhs[0] = 1.0
    # the hyperplane is binding at the anchor
    A[1, :s] = y_hat
    A[1, s:s + m] = -x_hat
    A[1, omega_col] = -1.0
    # and weakly dominates every observed unit
    A[2:, :s] = dataset.outputs.T
    A[2:, s:s + m] = -dataset.inputs.T
    A[2:, omega_col] = -1.0
    A[2:, omega_col + 1:] = np.eye(n)
    lower = np.zeros(q)
    lower[omega_col] = omega_lo
    upper = np.full(q, np.inf)
    upper[omega_col] = omega_hi
    cost = np.zeros(q)
    cost[omega_col] = 1.0
    return LinearProgram(sense, cost, A, rhs, lower_bounds=lower, upper_bounds=upper)


def intercept_bounds(dataset: dea.Dataset, point,
                     settings: SolverSettings | None = None,
                     clamp: float = 1.0) -> tuple[float, float]:
    """Smallest and largest supporting intercept at ``point``.

    ``point`` is an (inputs, outputs) pair lying on the efficient
    frontier of the convex technology, e.g. a GRS interior projection.
    An unbounded endpoint is replaced by -clamp / +clamp (or by the
    finite endpoint when that lies beyond the clamp, so the interval
    stays ordered).
    """
    x_hat, y_hat = _anchor(point)
    if x_hat.shape[0] != dataset.n_inputs or y_hat.shape[0] != dataset.n_outputs:
        raise ValueError("anchor point does not match the dataset's dimensions")
    if float(x_hat.max()) <= 0.0:
        raise NormalizationUnattainableError(
            "anchor inputs are all non-positive; the multiplier normalisation "
            "v . x = 1 is unattainable and the scale class is undefined here"
        )
    if clamp <= 0.0:
        raise ValueError("clamp must be strictly positive")
    bounds = []
    unbounded = []
    for sense in ("minimize", "maximize"):
        lp = _hyperplane_program(dataset, x_hat, y_hat, sense, -np.inf, np.inf)
        sol = solve(lp, settings)
        if sol.status == INFEASIBLE:
            raise NotOnFrontierError(
                "no supporting hyperplane passes through the anchor; "
                "it does not lie on the efficient frontier"
            )
        unbounded.append(sol.status == UNBOUNDED)
        bounds.append(None if sol.status == UNBOUNDED else float(sol.objective_value))
    omega_min, omega_max = bounds
    # a substituted endpoint must never cross the finite one
    if unbounded[0]:
        omega_min = -clamp if omega_max is None else min(-clamp, omega_max)
    if unbounded[1]:
        omega_max = max(clamp, omega_min)
    return omega_min, omega_max


def extreme_hyperplanes(dataset: dea.Dataset, point,
                        settings: SolverSettings | None = None,
                        clamp: float = 1.0):
    """Witness hyperplanes attaining the clamped intercept extremes.

    Unlike ``intercept_bounds`` the intercept variable is boxed into
    [-clamp, clamp] here, so both solves are bounded and each returns a
    concrete supporting hyperplane; the clamp must therefore contain at
    least one admissible intercept for the anchor.
    """
    x_hat, y_hat = _anchor(point)
    if float(x_hat.max()) <= 0.0:
        raise NormalizationUnattainableError(
            "anchor inputs are all non-positive; no multiplier normalisation exists"
        )
    s, m = dataset.n_outputs, dataset.n_inputs
    planes = []
    for sense in ("minimize", "maximize"):
        lp = _hyperplane_program(dataset, x_hat, y_hat, sense, -clamp, clamp)
        sol = solve(lp, settings)
        if sol.status != OPTIMAL:
            raise NotOnFrontierError(
                f"clamped supporting-hyperplane program ended {sol.status}"
            )
        planes.append(SupportingHyperplane(
            output_multipliers=np.maximum(sol.primal[:s], 0.0),
            input_multipliers=np.maximum(sol.primal[s:s + m], 0.0),
            intercept=float(sol.primal[s + m]),
        ))
    return planes[0], planes[1]


def classify_rts(bounds: tuple[float, float], rts_tol: float = RTS_TOL) -> str:
    """Scale class implied by an intercept interval.

    Constant when zero is attainable, decreasing when the whole interval
    is positive, increasing when it is negative.
    """
    omega_min, omega_max = bounds
    if omega_min <= rts_tol and omega_max >= -rts_tol:
        return CONSTANT
    if omega_min > rts_tol:
        return DECREASING
    return INCREASING


def rts_of_dmu(dataset: dea.Dataset, o: int, scheme: str = "ram",
               settings: SolverSettings | None = None,
               efficient_indices=None,
               eff_tol: float = dea.EFF_TOL,
               support_tol: float = grs.SUPPORT_TOL,
               rts_tol: float = RTS_TOL,
               clamp: float = 1.0) -> RtsClassification:
    """Scale class of unit ``o`` under the convex ("vrs") technology.

    Scores the unit, anchors at its GRS interior projection, and reads
    the class off the supporting-intercept interval there.  The verdict
    does not depend on which relative-interior point was returned.
    """
    result = dea.evaluate(dataset, o, scheme, "vrs", settings, eff_tol)
    reference = grs.identify_grs(
        dataset, o, result, scheme, "vrs", efficient_indices, settings,
        support_tol, eff_tol,
    )
    anchor = (reference.interior_projection_inputs,
              reference.interior_projection_outputs)
    omega_min, omega_max = intercept_bounds(dataset, anchor, settings, clamp)
    return RtsClassification(
        omega_min, omega_max, classify_rts((omega_min, omega_max), rts_tol)
    )
