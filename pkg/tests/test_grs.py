import numpy as np
import pytest

import oracles
from ramdea import dea, grs, lp

# reference sets for the 8-unit example, 0-based: the three units whose
# projections are not unique all share {DMU2, DMU3, DMU4}
EIGHT_MEMBERS = (
    (0,), (1,), (1, 2, 3), (3,), (3,), (1,), (1, 2, 3), (1, 2, 3),
)


@pytest.fixture(scope="module")
def eight(frontier8):
    frontier = dea.efficient_set(frontier8)
    results = [dea.evaluate(frontier8, o) for o in range(frontier8.n_dmus)]
    return frontier8, frontier, results


def random_dataset(rng, low=1.0, high=10.0):
    n = int(rng.integers(2, 10))
    m = int(rng.integers(1, 4))
    s = int(rng.integers(1, 4))
    return dea.Dataset(
        [f"u{k}" for k in range(n)],
        rng.uniform(low, high, (m, n)),
        rng.uniform(low, high, (s, n)),
    )


# -- maximal-support primitive ---------------------------------------


def test_unique_solution():
    u, v = grs.max_support_solution([[1.0]], d=[2.0])
    assert u == pytest.approx([2.0], abs=1e-9)
    assert v.size == 0


def test_homogeneous_trivial_kernel():
    u, v = grs.max_support_solution(np.eye(2))
    assert np.all(u <= grs.SUPPORT_TOL)


def test_homogeneous_full_support():
    A = np.array([[1.0, 1.0, -2.0]])
    u, v = grs.max_support_solution(A)
    assert np.sum(u > grs.SUPPORT_TOL) == 3
    assert A @ u == pytest.approx([0.0], abs=1e-9)


def test_degenerate_normalizer_raises():
    with pytest.raises(grs.DegenerateNormalizerError):
        grs.max_support_solution([[1.0]], d=[-1.0])


def test_nonhomogeneous_solution_is_feasible():
    A = np.array([[1.0, -1.0], [2.0, 1.0]])
    B = np.array([[1.0], [0.0]])
    d = np.array([1.0, 5.0])
    u, v = grs.max_support_solution(A, B, d)
    assert np.all(u >= -1e-12) and np.all(v >= -1e-12)
    assert A @ u + B @ v == pytest.approx(d, abs=1e-9)


def test_support_size_matches_bruteforce():
    rng = np.random.default_rng(31)
    for trial in range(40):
        p = int(rng.integers(1, 5))
        q1 = int(rng.integers(1, 6))
        q2 = int(rng.integers(0, 7 - q1))
        A = np.where(rng.random((p, q1)) < 0.35, 0.0, rng.uniform(-3.0, 3.0, (p, q1)))
        B = np.where(rng.random((p, q2)) < 0.35, 0.0, rng.uniform(-3.0, 3.0, (p, q2)))
        if trial % 2:
            d = None
        else:
            d = A @ rng.uniform(0.0, 2.0, q1) + B @ rng.uniform(0.0, 2.0, q2)
        u, v = grs.max_support_solution(A, B if q2 else None, d)
        resid = A @ u + (B @ v if q2 else 0.0) - (0.0 if d is None else d)
        assert np.all(np.abs(resid) <= 1e-8)
        mine = int(np.sum(u > grs.SUPPORT_TOL))
        assert mine == oracles.max_support_size_bruteforce(A, B, d)


# -- GRS program construction ----------------------------------------


def test_program_shape(eight):
    ds, frontier, results = eight
    program = grs.build_grs_program(ds, 6, results[6], efficient_indices=frontier)
    # 4 members + target, doubled, plus one slack per input and output
    assert program.cols == 2 * 5 + 2
    assert program.rows == 4
    assert program.sense == "maximize"
    # companion block is boxed into [0, 1]
    assert np.all(program.upper_bounds[5:10] == 1.0)
    assert np.all(program.objective[5:10] == 1.0)
    assert np.all(program.rhs == 0.0)


def test_program_shape_without_convexity(eight):
    ds, _, _ = eight
    result = dea.evaluate(ds, 6, regime="crs")
    frontier = dea.efficient_set(ds, regime="crs")
    program = grs.build_grs_program(ds, 6, result, regime="crs",
                                    efficient_indices=frontier)
    assert program.rows == 3  # input, output, budget


def test_efficient_unit_budget_pins_slacks(eight):
    ds, frontier, results = eight
    reference = grs.identify_grs(ds, 1, results[1], efficient_indices=frontier)
    assert np.all(np.abs(reference.input_slacks) <= 1e-10)
    assert np.all(np.abs(reference.output_slacks) <= 1e-10)


# -- identification on the 8-unit example ----------------------------


def test_members_match_known_sets_and_oracle(eight):
    ds, frontier, results = eight
    for o in range(ds.n_dmus):
        reference = grs.identify_grs(ds, o, results[o], efficient_indices=frontier)
        assert reference.members == EIGHT_MEMBERS[o]
        assert grs.oracle_grs(ds, o, results[o], efficient_indices=frontier) \
            == EIGHT_MEMBERS[o]


def test_weights_are_a_strict_convex_combination(eight):
    ds, frontier, results = eight
    for o in range(ds.n_dmus):
        reference = grs.identify_grs(ds, o, results[o], efficient_indices=frontier)
        assert reference.weights.sum() == pytest.approx(1.0, abs=1e-9)
        for k, j in enumerate(reference.efficient_indices):
            if j in reference.members:
                assert reference.weights[k] > grs.SUPPORT_TOL
            else:
                assert reference.weights[k] <= grs.SUPPORT_TOL


def test_optimal_pattern_rows_hold(eight):
    ds, frontier, results = eight
    for o in range(ds.n_dmus):
        reference = grs.identify_grs(ds, o, results[o], efficient_indices=frontier)
        resid = oracles.optimal_pattern_residuals(ds, results[o], reference)
        assert np.all(np.abs(resid) <= 1e-9)


def test_interior_projection_of_units_with_unique_projection(eight):
    ds, frontier, results = eight
    for o, expected_x, expected_y in ((0, 1.0, 2.0), (4, 5.0, 8.0)):
        reference = grs.identify_grs(ds, o, results[o], efficient_indices=frontier)
        assert reference.interior_projection_inputs == pytest.approx(
            [expected_x], abs=1e-9
        )
        assert reference.interior_projection_outputs == pytest.approx(
            [expected_y], abs=1e-9
        )


def test_interior_projection_strictly_inside_segment(eight):
    ds, frontier, results = eight
    reference = grs.identify_grs(ds, 7, results[7], efficient_indices=frontier)
    x_hat = reference.interior_projection_inputs[0]
    y_hat = reference.interior_projection_outputs[0]
    assert y_hat - x_hat == pytest.approx(3.0, abs=1e-9)  # on the facet line
    assert x_hat > 2.0 + 1e-7 and x_hat < 5.0 - 1e-7
    # reconstruction from the weights gives the same point
    lam = np.zeros(ds.n_dmus)
    lam[list(reference.efficient_indices)] = reference.weights
    assert ds.inputs @ lam == pytest.approx([x_hat], abs=1e-9)
    assert ds.outputs @ lam == pytest.approx([y_hat], abs=1e-9)


def test_stage_one_support_is_dominated(eight):
    ds, frontier, results = eight
    for o in range(ds.n_dmus):
        reference = grs.identify_grs(ds, o, results[o], efficient_indices=frontier)
        support = {j for j in range(ds.n_dmus)
                   if results[o].lambdas[j] > grs.SUPPORT_TOL}
        assert support <= set(reference.members)


def test_stage_one_projection_lies_in_member_hull(eight):
    ds, frontier, results = eight
    for o in range(ds.n_dmus):
        reference = grs.identify_grs(ds, o, results[o], efficient_indices=frontier)
        members = list(reference.members)
        point = np.concatenate([results[o].projection_inputs,
                                results[o].projection_outputs])
        columns = np.vstack([
            np.vstack([ds.inputs[:, members], ds.outputs[:, members]]),
            np.ones((1, len(members))),
        ])
        rhs = np.concatenate([point, [1.0]])
        feasibility = lp.LinearProgram("minimize", np.zeros(len(members)),
                                       columns, rhs)
        assert lp.solve(feasibility).status == lp.OPTIMAL


def test_budget_row_exactness(eight):
    ds, frontier, results = eight
    spread = dea.compute_ranges(ds)
    for o in range(ds.n_dmus):
        reference = grs.identify_grs(ds, o, results[o], efficient_indices=frontier)
        total = (reference.input_slacks / spread.input_ranges).sum() \
            + (reference.output_slacks / spread.output_ranges).sum()
        budget = results[o].slack_sum
        assert abs(total - budget) <= 1e-9 * (1.0 + budget)


def test_identification_under_crs(eight):
    ds, _, _ = eight
    frontier = dea.efficient_set(ds, regime="crs")
    result = dea.evaluate(ds, 2, regime="crs")
    reference = grs.identify_grs(ds, 2, result, regime="crs",
                                 efficient_indices=frontier)
    assert reference.members == (1,)
    assert reference.members == grs.oracle_grs(ds, 2, result, regime="crs",
                                               efficient_indices=frontier)
    # conical weights need not sum to one: the projection is 1.5x unit 2
    assert reference.weights[frontier.index(1)] == pytest.approx(1.5, abs=1e-9)


def test_identify_equals_oracle_on_random_data():
    rng = np.random.default_rng(37)
    for trial in range(20):
        low = -5.0 if trial % 4 == 0 else 1.0
        ds = random_dataset(rng, low=low)
        frontier = dea.efficient_set(ds)
        o = int(rng.integers(ds.n_dmus))
        result = dea.evaluate(ds, o)
        reference = grs.identify_grs(ds, o, result, efficient_indices=frontier)
        assert reference.members == grs.oracle_grs(ds, o, result,
                                                   efficient_indices=frontier)
        resid = oracles.optimal_pattern_residuals(ds, result, reference)
        assert np.all(np.abs(resid) <= 1e-8)


def test_identify_equals_oracle_for_other_schemes(eight):
    ds, _, _ = eight
    for scheme in ("additive", "bam"):
        frontier = dea.efficient_set(ds, scheme=scheme)
        for o in range(ds.n_dmus):
            result = dea.evaluate(ds, o, scheme=scheme)
            reference = grs.identify_grs(ds, o, result, scheme=scheme,
                                         efficient_indices=frontier)
            assert reference.members == grs.oracle_grs(
                ds, o, result, scheme=scheme, efficient_indices=frontier
            )


def test_mismatched_result_rejected(eight):
    ds, frontier, results = eight
    with pytest.raises(ValueError):
        grs.build_omega_system(ds, 3, results[2], efficient_indices=frontier)


# -- minimum face ------------------------------------------------------


def test_face_of_collinear_members_is_a_segment(eight):
    ds, frontier, results = eight
    for o in (6, 7):
        reference = grs.identify_grs(ds, o, results[o], efficient_indices=frontier)
        face = grs.minimum_face(ds, reference)
        assert face.vertex_indices == (1, 2, 3)
        assert face.dimension == 1


def test_face_of_singleton_is_a_point(eight):
    ds, frontier, results = eight
    reference = grs.identify_grs(ds, 4, results[4], efficient_indices=frontier)
    face = grs.minimum_face(ds, reference)
    assert face.vertex_indices == (3,)
    assert face.dimension == 0


def test_face_dimension_counts_independent_directions():
    ds = dea.Dataset(
        ["a", "b", "c", "d"],
        [[1.0, 1.0, 1.0, 1.0]],
        [[2.0, 2.0, 2.0, 2.0], [1.0, 3.0, 5.0, 1.0], [0.0, 0.0, 1.0, 0.0]],
    )
    fake = grs.GrsResult(
        o=0, efficient_indices=(0, 1, 2), weights=np.array([0.4, 0.3, 0.3]),
        members=(0, 1, 2), input_slacks=np.zeros(1), output_slacks=np.zeros(3),
        interior_projection_inputs=np.ones(1),
        interior_projection_outputs=np.zeros(3),
    )
    assert grs.minimum_face(ds, fake).dimension == 2
