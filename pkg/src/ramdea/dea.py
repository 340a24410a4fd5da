"""Slack-based additive DEA over an immutable observation matrix.

A dataset holds n named units, each consuming m inputs to produce s
outputs (negative values are allowed).  The evaluator scores one unit at
a time by maximising a weighted sum of input excesses and output
shortfalls reachable inside the production set spanned by all units:
the convex hull under the "vrs" regime, the conical hull under "crs".

Weight schemes:

  ram       slack on row k weighted by 1 / ((m+s) * spread of row k);
            the reported score is rho = 1 - weighted optimum, which
            lies in (0, 1] whenever every spread is positive
  additive  unit weights; the raw weighted optimum is reported
  bam       like ram but with one-sided spreads measured from the unit
            under evaluation

Whenever a weight's divisor is zero the weight is defined as zero and
the corresponding slack is pinned to zero in any model built from it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lp import OPTIMAL, LinearProgram, LpError, SolverSettings, solve

__all__ = [
    "SCHEMES",
    "REGIMES",
    "EFF_TOL",
    "Dataset",
    "Ranges",
    "RamResult",
    "compute_ranges",
    "slack_weights",
    "evaluate",
    "efficient_set",
]

SCHEMES = ("ram", "additive", "bam")
REGIMES = ("vrs", "crs")

# A unit counts as efficient when its total range-normalised slack stays
# below this; two orders above the solver's feas_tol to absorb roundoff.
EFF_TOL = 1e-7


class Dataset:
    """Immutable m-input / s-output observation matrix over n named units.

    ``inputs`` is m x n and ``outputs`` is s x n: one column per unit.
    Labels are only used for reporting and default to x1..xm / y1..ys.
    """

    def __init__(self, names, inputs, outputs, input_labels=None, output_labels=None):
        names = tuple(str(n) for n in names)
        # private copies, so freezing them below cannot affect the caller
        inputs = np.array(inputs, dtype=float, ndmin=2)
        outputs = np.array(outputs, dtype=float, ndmin=2)
        n = len(names)
        if n < 1:
            raise ValueError("dataset needs at least one unit")
        if len(set(names)) != n:
            raise ValueError("unit names must be pairwise distinct")
        if inputs.ndim != 2 or outputs.ndim != 2:
            raise ValueError("inputs and outputs must be two-dimensional")
        if inputs.shape[1] != n or outputs.shape[1] != n:
            raise ValueError(
                f"expected {n} columns, got inputs {inputs.shape}, outputs {outputs.shape}"
            )
        if inputs.shape[0] < 1 or outputs.shape[0] < 1:
            raise ValueError("need at least one input row and one output row")
        if not (np.all(np.isfinite(inputs)) and np.all(np.isfinite(outputs))):
            raise ValueError("observations must be finite")
        m, s = inputs.shape[0], outputs.shape[0]
        self.names = names
        self.inputs = inputs
        self.outputs = outputs
        self.input_labels = self._labels(input_labels, "x", m)
        self.output_labels = self._labels(output_labels, "y", s)
        inputs.setflags(write=False)
        outputs.setflags(write=False)

    @staticmethod
    def _labels(labels, prefix, count):
        if labels is None:
            return tuple(f"{prefix}{k + 1}" for k in range(count))
        labels = tuple(str(v) for v in labels)
        if len(labels) != count:
            raise ValueError(f"expected {count} labels, got {len(labels)}")
        return labels

    @property
    def n_dmus(self) -> int:
        return len(self.names)

    @property
    def n_inputs(self) -> int:
        return self.inputs.shape[0]

    @property
    def n_outputs(self) -> int:
        return self.outputs.shape[0]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown unit name: {name!r}") from None

    def unit(self, o: int):
        """Input and output column of unit ``o``."""
        return self.inputs[:, o].copy(), self.outputs[:, o].copy()


@dataclass(frozen=True, eq=False)
class Ranges:
    """Observed spread (max minus min) of every input and output row."""

    input_ranges: np.ndarray
    output_ranges: np.ndarray


@dataclass(frozen=True, eq=False)
class RamResult:
    """One unit's score, optimal slacks, intensities and projection.

    ``slack_sum`` is (m+s) times the optimal weighted slack total, kept
    exactly as the solver produced it; for the ram scheme it equals the
    total of the range-normalised slacks and rho = 1 - slack_sum/(m+s).
    For the additive and bam schemes ``rho`` holds the raw weighted
    optimum instead of a score in [0, 1].
    """

    dmu_index: int
    rho: float
    input_slacks: np.ndarray
    output_slacks: np.ndarray
    lambdas: np.ndarray
    projection_inputs: np.ndarray
    projection_outputs: np.ndarray
    slack_sum: float
    efficient: bool


def compute_ranges(dataset: Dataset) -> Ranges:
    """Per-row spread between the largest and smallest observation."""
    return Ranges(
        np.ptp(dataset.inputs, axis=1),
        np.ptp(dataset.outputs, axis=1),
    )


def slack_weights(dataset: Dataset, scheme: str = "ram", o: int | None = None):
    """Objective weights (w_in, w_out) for the slack variables.

    ``o`` is only consulted by the bam scheme, whose one-sided spreads
    are anchored at the evaluated unit.  Zero divisors yield zero
    weights (the matching slacks get pinned by the model builders).
    """
    _check_scheme(scheme)
    m, s = dataset.n_inputs, dataset.n_outputs
    if scheme == "additive":
        return np.ones(m), np.ones(s)
    if scheme == "ram":
        spread = compute_ranges(dataset)
        den_in = (m + s) * spread.input_ranges
        den_out = (m + s) * spread.output_ranges
    else:  # bam
        if o is None:
            raise ValueError("the bam scheme needs the evaluated unit index")
        den_in = (m + s) * (dataset.inputs[:, o] - dataset.inputs.min(axis=1))
        den_out = (m + s) * (dataset.outputs.max(axis=1) - dataset.outputs[:, o])
    w_in = np.where(den_in > 0.0, 1.0 / np.where(den_in > 0.0, den_in, 1.0), 0.0)
    w_out = np.where(den_out > 0.0, 1.0 / np.where(den_out > 0.0, den_out, 1.0), 0.0)
    return w_in, w_out


def evaluate(dataset: Dataset, o: int, scheme: str = "ram", regime: str = "vrs",
             settings: SolverSettings | None = None,
             eff_tol: float = EFF_TOL) -> RamResult:
    """Score unit ``o`` and return one optimal slack pattern.

    Cannot be infeasible under "vrs" (the unit itself is a feasible
    combination), so a non-optimal solver status is raised as LpError.
    """
    _check_scheme(scheme)
    _check_regime(regime)
    n, m, s = dataset.n_dmus, dataset.n_inputs, dataset.n_outputs
    if not 0 <= o < n:
        raise IndexError(f"unit index {o} out of range for {n} units")
    x_o, y_o = dataset.unit(o)
    w_in, w_out = slack_weights(dataset, scheme, o)

    convexity = regime == "vrs"
    rows = m + s + (1 if convexity else 0)
    q = n + m + s
    A = np.zeros((rows, q))
    A[:m, :n] = dataset.inputs
    A[:m, n:n + m] = np.eye(m)
    A[m:m + s, :n] = dataset.outputs
    A[m:m + s, n + m:] = -np.eye(s)
    rhs = np.concatenate([x_o, y_o])
    if convexity:
        A[-1, :n] = 1.0
        rhs = np.concatenate([rhs, [1.0]])
    upper = np.full(q, np.inf)
    upper[n:n + m][w_in == 0.0] = 0.0
    upper[n + m:][w_out == 0.0] = 0.0
    cost = np.concatenate([np.zeros(n), w_in, w_out])

    lp = LinearProgram("maximize", cost, A, rhs, upper_bounds=upper)
    sol = solve(lp, settings)
    if sol.status != OPTIMAL:
        raise LpError(f"slack model for unit {o} ended {sol.status}")

    lambdas = np.maximum(sol.primal[:n], 0.0)
    s_in = np.maximum(sol.primal[n:n + m], 0.0)
    s_out = np.maximum(sol.primal[n + m:], 0.0)
    weighted = float(sol.objective_value)
    slack_sum = (m + s) * weighted
    rho = 1.0 - weighted if scheme == "ram" else weighted
    return RamResult(
        dmu_index=o,
        rho=rho,
        input_slacks=s_in,
        output_slacks=s_out,
        lambdas=lambdas,
        projection_inputs=x_o - s_in,
        projection_outputs=y_o + s_out,
        slack_sum=slack_sum,
        efficient=bool(slack_sum <= eff_tol),
    )


def efficient_set(dataset: Dataset, scheme: str = "ram", regime: str = "vrs",
                  settings: SolverSettings | None = None,
                  eff_tol: float = EFF_TOL) -> list[int]:
    """Ascending indices of all units whose optimal slacks vanish."""
    return [
        o for o in range(dataset.n_dmus)
        if evaluate(dataset, o, scheme, regime, settings, eff_tol).efficient
    ]


def _check_scheme(scheme: str) -> None:
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")


def _check_regime(regime: str) -> None:
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}; expected one of {REGIMES}")
