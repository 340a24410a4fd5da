"""End-to-end acceptance checks, one test per contract item.

Each test prints a single PASS/FAIL line (visible with ``pytest -s``)
and enforces its stated tolerance and, where given, its time budget.
"""

import json
import time
from contextlib import contextmanager

import numpy as np
import pytest

import oracles
from ramdea import cli, dea, grs, rts

EIGHT_SCORES = (1.0, 1.0, 1.0, 1.0, 0.786, 0.714, 0.786, 0.643)
EIGHT_MEMBERS = (
    (0,), (1,), (1, 2, 3), (3,), (3,), (1,), (1, 2, 3), (1, 2, 3),
)
EIGHT_CLASSES = (
    rts.INCREASING, rts.CONSTANT, rts.DECREASING, rts.DECREASING,
    rts.DECREASING, rts.CONSTANT, rts.DECREASING, rts.DECREASING,
)


@contextmanager
def criterion(number, label):
    try:
        yield
    except BaseException:
        print(f"criterion {number} ({label}): FAIL")
        raise
    print(f"criterion {number} ({label}): PASS")


@pytest.fixture(scope="module")
def eight(frontier8):
    frontier = dea.efficient_set(frontier8)
    results = [dea.evaluate(frontier8, o) for o in range(frontier8.n_dmus)]
    references = [
        grs.identify_grs(frontier8, o, results[o], efficient_indices=frontier)
        for o in range(frontier8.n_dmus)
    ]
    return frontier8, frontier, results, references


def test_criterion_1_efficiency_scores(frontier8):
    with criterion(1, "efficiency scores on the 8-unit example"):
        start = time.perf_counter()
        scores = [dea.evaluate(frontier8, o).rho for o in range(8)]
        elapsed = time.perf_counter() - start
        assert scores == pytest.approx(EIGHT_SCORES, abs=5e-4)
        assert elapsed < 1.0, f"scoring took {elapsed:.3f}s"


def test_criterion_2_reference_sets(eight):
    with criterion(2, "global reference sets"):
        ds, _, results, references = eight
        for o in range(8):
            reference = references[o]
            assert reference.members == EIGHT_MEMBERS[o]
            member_weights = [
                reference.weights[k]
                for k, j in enumerate(reference.efficient_indices)
                if j in reference.members
            ]
            assert all(w > 1e-7 for w in member_weights)
            assert reference.weights.sum() == pytest.approx(1.0, abs=1e-9)
            resid = oracles.optimal_pattern_residuals(ds, results[o], reference)
            assert np.all(np.abs(resid) <= 1e-9)


def test_criterion_3_interior_projection(eight):
    with criterion(3, "interior projection of the most inefficient unit"):
        _, _, _, references = eight
        point = np.array([
            references[7].interior_projection_inputs[0],
            references[7].interior_projection_outputs[0],
        ])
        a, b = np.array([2.0, 5.0]), np.array([5.0, 8.0])
        direction = (b - a) / np.linalg.norm(b - a)
        offset = point - a
        along = float(offset @ direction)
        across = offset - along * direction
        assert np.linalg.norm(across) <= 1e-7  # on the segment
        assert along > 1e-7  # strictly past the lower endpoint
        assert along < np.linalg.norm(b - a) - 1e-7  # and short of the upper


def test_criterion_4_minimum_faces(eight):
    with criterion(4, "minimum-face geometry"):
        ds, _, _, references = eight
        for o in (6, 7):
            face = grs.minimum_face(ds, references[o])
            assert set(face.vertex_indices) == {1, 2, 3}
            assert face.dimension == 1
        for o in (4, 5):
            assert grs.minimum_face(ds, references[o]).dimension == 0


def test_criterion_5_scale_classes_and_intercepts(eight):
    with criterion(5, "returns-to-scale classes and intercept spot checks"):
        ds, frontier, _, _ = eight
        classes = [
            rts.rts_of_dmu(ds, o, efficient_indices=frontier).rts_class
            for o in range(8)
        ]
        assert tuple(classes) == EIGHT_CLASSES
        omega_min, _ = rts.intercept_bounds(ds, ([5.0], [8.0]))
        assert omega_min == pytest.approx(0.600, abs=1e-6)
        _, omega_max = rts.intercept_bounds(ds, ([2.0], [5.0]))
        assert omega_max == pytest.approx(1.500, abs=1e-6)
        _, omega_max = rts.intercept_bounds(ds, ([1.0], [2.0]))
        assert omega_max == pytest.approx(-0.333, abs=5e-4)


def test_criterion_6_oracle_equivalence_on_random_instances():
    with criterion(6, "one-solve identification equals the per-unit oracle"):
        rng = np.random.default_rng(20250811)
        start = time.perf_counter()
        cases = [(1.0, 10.0)] * 100 + [(-5.0, 10.0)] * 20
        for low, high in cases:
            n = int(rng.integers(2, 13))
            m = int(rng.integers(1, 4))
            s = int(rng.integers(1, 4))
            ds = dea.Dataset(
                [f"u{k}" for k in range(n)],
                rng.uniform(low, high, (m, n)),
                rng.uniform(low, high, (s, n)),
            )
            results = [dea.evaluate(ds, j) for j in range(n)]
            frontier = [j for j in range(n) if results[j].efficient]
            o = int(rng.integers(n))
            reference = grs.identify_grs(ds, o, results[o],
                                         efficient_indices=frontier)
            oracle = grs.oracle_grs(ds, o, results[o],
                                    efficient_indices=frontier)
            assert reference.members == oracle
            support = {j for j in range(n)
                       if results[o].lambdas[j] > grs.SUPPORT_TOL}
            assert support <= set(reference.members)
        elapsed = time.perf_counter() - start
        assert elapsed < 60.0, f"120 instances took {elapsed:.1f}s"


def test_criterion_7_maximal_support_kernel():
    with criterion(7, "maximal-support size equals brute-force enumeration"):
        rng = np.random.default_rng(97)
        for trial in range(200):
            p = int(rng.integers(1, 5))
            q1 = int(rng.integers(1, 6))
            q2 = int(rng.integers(0, 7 - q1))
            A = np.where(rng.random((p, q1)) < 0.35, 0.0,
                         rng.uniform(-3.0, 3.0, (p, q1)))
            B = np.where(rng.random((p, q2)) < 0.35, 0.0,
                         rng.uniform(-3.0, 3.0, (p, q2)))
            if trial % 2:
                d = None
            else:
                d = A @ rng.uniform(0.0, 2.0, q1) + B @ rng.uniform(0.0, 2.0, q2)
            u, _ = grs.max_support_solution(A, B if q2 else None, d)
            mine = int(np.sum(u > grs.SUPPORT_TOL))
            assert mine == oracles.max_support_size_bruteforce(A, B, d)


def test_criterion_8_anchor_independence(eight):
    with criterion(8, "classification is anchor-independent on the minimum face"):
        ds, _, _, references = eight
        rng = np.random.default_rng(101)
        for o in (4, 5, 6, 7):
            members = list(references[o].members)
            classes = set()
            for _ in range(5):
                weights = rng.uniform(0.1, 1.0, len(members))
                weights /= weights.sum()
                anchor = (ds.inputs[:, members] @ weights,
                          ds.outputs[:, members] @ weights)
                classes.add(rts.classify_rts(rts.intercept_bounds(ds, anchor)))
            assert classes == {EIGHT_CLASSES[o]}


def test_criterion_9_seventy_unit_report(tmp_path, capsys):
    with criterion(9, "70-unit five-input three-output report under 10s"):
        rng = np.random.default_rng(103)
        lines = ["dmu," + ",".join(f"in:x{i}" for i in range(1, 6))
                 + "," + ",".join(f"out:y{r}" for r in range(1, 4))]
        for k in range(70):
            row = rng.uniform(1.0, 10.0, 8)
            lines.append(f"S{k + 1}," + ",".join(f"{v:.4f}" for v in row))
        path = tmp_path / "schools.csv"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")

        start = time.perf_counter()
        code = cli.main(["report", "--data", str(path), "--format", "json"])
        elapsed = time.perf_counter() - start
        out = capsys.readouterr().out
        assert code == 0
        reports = json.loads(out)
        assert len(reports) == 70
        assert all({"rho", "grs", "rts"} <= set(obj) for obj in reports)
        assert elapsed < 10.0, f"full report took {elapsed:.1f}s"
