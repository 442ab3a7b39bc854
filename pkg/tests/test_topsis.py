import numpy as np
import pytest

from shelterkit.errors import NumericError, ValidationError
from shelterkit.topsis import (DEFAULT_CAPACITY_WEIGHTS, DecisionMatrix,
                               closeness_and_rank, evaluate, ideal_solutions,
                               normalize, weighted_distances)

from reference_tables import (ANTI_IDEAL, CAPACITY_RANK_ORDER,
                              CAPACITY_REFERENCE, DISTRICT_ORDER, IDEAL,
                              STANDARDIZED_MATRIX)

RAW = np.array([
    # the six capacity indicators per district, DISTRICT_ORDER rows
    [59.61, 28.545, 1034.0, 30.81, 0.6175, 1.9347],
    [55.4522, 50.9871, 241.4, 13.69, 0.8559, 4.0506],
    [133.301, 56.8943, 1068.3, 44.06, 1.9994, 3.0254],
    [173.2681, 37.139, 1309.7, 24.37, 2.0694, 7.1100],
    [111.5981, 89.9178, 1723.1, 72.89, 1.0125, 1.5311],
    [103.1, 68.02, 379.1, 7.11, 2.3877, 14.5007],
    [259.41, 128.14, 1464.8, 16.18, 1.0156, 16.0328],
])
INDICATORS = tuple(f"x{i}" for i in range(1, 7))


def make_matrix(values=RAW, weights=DEFAULT_CAPACITY_WEIGHTS):
    return DecisionMatrix(tuple(DISTRICT_ORDER), INDICATORS,
                          np.asarray(values, dtype=float),
                          np.asarray(weights, dtype=float))


def test_normalization_matches_reference_matrix():
    z = normalize(RAW)
    assert np.allclose(z, STANDARDIZED_MATRIX, atol=5e-4)
    assert np.allclose((z ** 2).sum(axis=0), 1.0, atol=1e-12)


def test_ideal_points_match_reference():
    z = np.array(STANDARDIZED_MATRIX)
    z_plus, z_minus = ideal_solutions(z, [True] * 6)
    assert np.allclose(z_plus, IDEAL, atol=1e-4)
    assert np.allclose(z_minus, ANTI_IDEAL, atol=1e-4)


def test_cost_direction_swaps_ideal_points():
    z = np.array(STANDARDIZED_MATRIX)
    z_plus, z_minus = ideal_solutions(z, [False] * 6)
    assert np.allclose(z_plus, ANTI_IDEAL, atol=1e-4)
    assert np.allclose(z_minus, IDEAL, atol=1e-4)


def test_full_ranking_matches_reference():
    r = evaluate(make_matrix())
    assert [r.names[i] for i in np.argsort(r.ranks)] == CAPACITY_RANK_ORDER
    for name, dp, dm, s, rank in zip(r.names, r.d_plus, r.d_minus,
                                     r.closeness, r.ranks):
        want_dp, want_dm, want_s, want_rank = CAPACITY_REFERENCE[name]
        assert dp == pytest.approx(want_dp, abs=5e-4)
        assert dm == pytest.approx(want_dm, abs=5e-4)
        assert s == pytest.approx(want_s, abs=5e-4)
        assert rank == want_rank


def test_anchor_rows():
    r = evaluate(make_matrix())
    i_hong = r.names.index("Hongshan")
    i_jh = r.names.index("Jianghan")
    assert r.d_plus[i_hong] == pytest.approx(0.2797, abs=5e-4)
    assert r.closeness[i_hong] == pytest.approx(0.6063, abs=5e-4)
    assert r.d_minus[i_jh] == pytest.approx(0.0736, abs=5e-4)
    assert r.closeness[i_jh] == pytest.approx(0.1293, abs=5e-4)


def test_squared_weight_variant_differs_but_still_ranks():
    r1 = evaluate(make_matrix())
    r2 = evaluate(make_matrix(), squared_weights=True)
    assert r1.closeness != r2.closeness
    assert sorted(r2.ranks) == list(range(1, 8))


def test_column_scale_invariance():
    scales = np.array([3.0, 0.01, 250.0, 1.0, 7.5, 0.2])
    r1 = evaluate(make_matrix())
    r2 = evaluate(make_matrix(values=RAW * scales))
    assert np.allclose(r1.closeness, r2.closeness, atol=1e-12)
    assert r1.ranks == r2.ranks


def test_dominated_row_ranks_last():
    vals = np.vstack([RAW, RAW.min(axis=0) * 0.5])
    m = DecisionMatrix(tuple(DISTRICT_ORDER) + ("Dominated",), INDICATORS,
                       vals, np.asarray(DEFAULT_CAPACITY_WEIGHTS))
    r = evaluate(m)
    assert r.ranks[-1] == 8


def test_two_rows_one_column():
    m = DecisionMatrix(("a", "b"), ("x1",), [[2.0], [6.0]], [1.0 - 1e-7])
    r = evaluate(m)
    assert r.closeness == pytest.approx((0.0, 1.0), abs=1e-12)
    assert r.ranks == (2, 1)


def test_rank_ties_are_stable():
    r = closeness_and_rank(("a", "b", "c"), [0.3, 0.3, 0.1], [0.3, 0.3, 0.5])
    assert r.ranks == (2, 3, 1)   # equal closeness keeps input order


def test_by_rank_ordering():
    rows = evaluate(make_matrix()).by_rank()
    assert [row[0] for row in rows] == CAPACITY_RANK_ORDER
    assert [row[4] for row in rows] == list(range(1, 8))


def test_validation_faults():
    with pytest.raises(ValidationError, match="names"):
        DecisionMatrix(("a",), INDICATORS, RAW, DEFAULT_CAPACITY_WEIGHTS)
    with pytest.raises(ValidationError, match="sum"):
        make_matrix(weights=[0.3, 0.3, 0.3, 0.3, 0.15, 0.15])
    with pytest.raises(ValidationError, match="finite"):
        bad = RAW.copy(); bad[0, 0] = np.nan
        make_matrix(values=bad)
    with pytest.raises(ValidationError, match="zero"):
        bad = RAW.copy(); bad[:, 2] = 0.0
        make_matrix(values=bad)


def test_degenerate_identical_rows_rejected():
    m = DecisionMatrix(("a", "b"), ("x1", "x2"), [[1.0, 2.0], [1.0, 2.0]],
                       [0.5, 0.5])
    with pytest.raises(NumericError, match="coincides"):
        evaluate(m)


def test_weighted_distance_definition():
    # one row, hand-computed: D = sqrt(sum w (z* - z)^2), weight linear
    z = np.array([[0.2, 0.4]])
    zp, zm = np.array([0.6, 0.9]), np.array([0.1, 0.2])
    dp, dm = weighted_distances(z, zp, zm, [0.5, 0.5])
    assert dp[0] == pytest.approx(np.sqrt(0.5 * 0.16 + 0.5 * 0.25), abs=1e-12)
    assert dm[0] == pytest.approx(np.sqrt(0.5 * 0.01 + 0.5 * 0.04), abs=1e-12)
    dp2, _ = weighted_distances(z, zp, zm, [0.5, 0.5], squared_weights=True)
    assert dp2[0] == pytest.approx(np.sqrt(0.25 * 0.16 + 0.25 * 0.25), abs=1e-12)
