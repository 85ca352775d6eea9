import numpy as np
import pytest

from agdmm import (BasisDescriptor, Matrix, RationalCurve, basis_descriptor,
                   check_code_condition, decode, decode_with_coefficients,
                   encode, matmul, partition, recovery_threshold,
                   scheme_params, usable_places, worker_multiply)
from agdmm.codes import result_from_json, result_to_json, task_from_json, task_to_json
from agdmm.exceptions import (IndivisibleDimensions, Inconsistent, InsufficientResponses,
                              RankDeficient, SchemeCurveMismatch, TooFewPlaces)


@pytest.fixture
def gf7_matdot2(gf7):
    return scheme_params("rational_matdot", RationalCurve(gf7), 2, r=1, s=2, t=1)


# -- parameter validation ----------------------------------------------------------

def test_scheme_curve_mismatch(gf25, kummer8_curve):
    with pytest.raises(SchemeCurveMismatch):
        scheme_params("poly_ag", RationalCurve(gf25), 8, 5, r=8, s=2, t=5)
    with pytest.raises(SchemeCurveMismatch):
        scheme_params("rational_poly", kummer8_curve, 4, 6, r=8, s=2, t=6)
    # wrong m: the curve's closed-form conditions fail
    with pytest.raises(SchemeCurveMismatch):
        scheme_params("poly_ag", kummer8_curve, 4, 5, r=8, s=2, t=5)


def test_indivisible_dimensions(kummer8_curve, matdot3_curve):
    with pytest.raises(IndivisibleDimensions):
        scheme_params("poly_ag", kummer8_curve, 8, 5, r=9, s=2, t=5)
    with pytest.raises(IndivisibleDimensions):
        scheme_params("matdot_ag", matdot3_curve, 3, r=4, s=7, t=2)


def test_matdot_takes_no_n(matdot3_curve):
    with pytest.raises(ValueError):
        scheme_params("matdot_ag", matdot3_curve, 3, 2, r=4, s=6, t=2)


# -- descriptors --------------------------------------------------------------------

def test_poly_ag_descriptor_small(kummer8_curve):
    params = scheme_params("poly_ag", kummer8_curve, 8, 5, r=8, s=2, t=5)
    desc = basis_descriptor(params)
    assert desc.orders[:10] == (0, 8, 16, 24, 32, 1, 9, 17, 25, 33)
    assert len(set(desc.orders)) == 40
    assert desc.threshold == 47


def test_order_tables_match_formulas(kummer8_curve):
    params = scheme_params("poly_ag", kummer8_curve, 8, 5, r=8, s=1, t=5)
    desc = basis_descriptor(params)
    for i in range(8):
        for j in range(5):
            assert desc.orders[i * 5 + j] == i + 8 * j


def test_rational_matdot_descriptor(gf7_matdot2):
    desc = basis_descriptor(gf7_matdot2)
    assert desc.orders == (1, 0, 2, 1)  # (i, j) row-major exponents
    assert desc.target_order == 1
    assert desc.threshold == 3
    assert check_code_condition(desc, "rational_matdot")


def test_check_code_condition_poly(kummer8_curve):
    params = scheme_params("poly_ag", kummer8_curve, 8, 5, r=8, s=2, t=5)
    assert check_code_condition(basis_descriptor(params), "poly_ag")


def test_check_code_condition_rejects_collisions():
    # f_i = y^i, g_j = y^j: diagonal orders 2i are not all equal
    desc = BasisDescriptor(
        scheme="matdot_ag", m=2, n=2,
        f_monomials=((0, 1), (0, 2)), g_monomials=((0, 1), (0, 2)),
        orders=(2, 3, 3, 4), target_order=1, threshold=5)
    assert not check_code_condition(desc, "matdot_ag")
    # duplicate pole orders break the block-grid condition
    desc = BasisDescriptor(
        scheme="poly_ag", m=2, n=2,
        f_monomials=((0, 1), (0, 2)), g_monomials=((0, 1), (0, 2)),
        orders=(2, 3, 3, 4), target_order=None, threshold=5)
    assert not check_code_condition(desc, "poly_ag")


def test_recovery_thresholds(kummer8_curve, matdot3_curve, gf25):
    assert recovery_threshold(
        scheme_params("poly_ag", kummer8_curve, 8, 5, r=8, s=2, t=5)) == 47
    assert recovery_threshold(
        scheme_params("rational_poly", RationalCurve(gf25), 4, 6, r=4, s=2, t=6)) == 24
    assert recovery_threshold(
        scheme_params("matdot_ag", matdot3_curve, 3, r=2, s=3, t=2)) == 9
    assert recovery_threshold(
        scheme_params("rational_matdot", RationalCurve(gf25), 4, r=2, s=4, t=2)) == 7


# -- partitioning --------------------------------------------------------------------

def test_partition_poly_rows_and_columns(gf7):
    params = scheme_params("rational_poly", RationalCurve(gf7), 2, 1, r=2, s=1, t=1)
    a = Matrix(gf7, [[1], [2]])
    b = Matrix(gf7, [[3]])
    a_blocks, b_blocks = partition(a, b, params)
    assert [blk.to_lists() for blk in a_blocks] == [[[1]], [[2]]]
    assert [blk.to_lists() for blk in b_blocks] == [[[3]]]


def test_partition_matdot_columns_and_rows(gf7):
    params = scheme_params("rational_matdot", RationalCurve(gf7), 2, r=1, s=2, t=1)
    a = Matrix(gf7, [[1, 2]])
    b = Matrix(gf7, [[3], [4]])
    a_blocks, b_blocks = partition(a, b, params)
    assert [blk.to_lists() for blk in a_blocks] == [[[1]], [[2]]]
    assert [blk.to_lists() for blk in b_blocks] == [[[3]], [[4]]]


@pytest.mark.parametrize("scheme,m,n", [("rational_poly", 2, 3), ("rational_matdot", 3, None)])
def test_partition_reassembles(gf7, scheme, m, n):
    params = scheme_params(scheme, RationalCurve(gf7), m, n, r=6, s=6, t=6)
    rng = np.random.default_rng(0)
    a = Matrix.random(gf7, 6, 6, rng)
    b = Matrix.random(gf7, 6, 6, rng)
    a_blocks, b_blocks = partition(a, b, params)
    if scheme == "rational_poly":
        assert np.array_equal(np.vstack([blk.codes for blk in a_blocks]), a.codes)
        assert np.array_equal(np.hstack([blk.codes for blk in b_blocks]), b.codes)
    else:
        assert np.array_equal(np.hstack([blk.codes for blk in a_blocks]), a.codes)
        assert np.array_equal(np.vstack([blk.codes for blk in b_blocks]), b.codes)


# -- encoding and worker computation ---------------------------------------------------

def test_encode_shares_by_hand(gf7, gf7_matdot2):
    # f = A1 + A2 x = 1 + 2x, g = B1 x + B2 = 3x + 4
    params = gf7_matdot2
    a_blocks, b_blocks = partition(Matrix(gf7, [[1, 2]]), Matrix(gf7, [[3], [4]]), params)
    desc = basis_descriptor(params)
    places = usable_places(params.curve, params.scheme)
    tasks = encode(a_blocks, b_blocks, desc, places[:3])
    assert tasks[0].f_share.to_lists() == [[1]] and tasks[0].g_share.to_lists() == [[4]]
    assert tasks[1].f_share.to_lists() == [[3]] and tasks[1].g_share.to_lists() == [[0]]


def test_encode_too_few_places(gf7, gf7_matdot2):
    a_blocks, b_blocks = partition(Matrix(gf7, [[1, 2]]), Matrix(gf7, [[3], [4]]),
                                   gf7_matdot2)
    desc = basis_descriptor(gf7_matdot2)
    places = usable_places(gf7_matdot2.curve, gf7_matdot2.scheme)
    with pytest.raises(TooFewPlaces):
        encode(a_blocks, b_blocks, desc, places[:2])


def test_worker_multiply_by_hand(gf7, gf7_matdot2):
    a_blocks, b_blocks = partition(Matrix(gf7, [[1, 2]]), Matrix(gf7, [[3], [4]]),
                                   gf7_matdot2)
    desc = basis_descriptor(gf7_matdot2)
    places = usable_places(gf7_matdot2.curve, gf7_matdot2.scheme)
    tasks = encode(a_blocks, b_blocks, desc, places[:3])
    res, count = worker_multiply(tasks[0])
    assert res.h.to_lists() == [[4]]
    assert count == 1 * 1 * 1


def test_worker_op_counts_closed_form(kummer8_curve, matdot3_curve):
    rng = np.random.default_rng(1)
    poly = scheme_params("poly_ag", kummer8_curve, 8, 5, r=16, s=6, t=10)
    a, b = Matrix.random(poly.curve.field, 16, 6, rng), Matrix.random(poly.curve.field, 6, 10, rng)
    tasks = encode(*partition(a, b, poly), basis_descriptor(poly),
                   usable_places(poly.curve, poly.scheme)[:47])
    _, count = worker_multiply(tasks[0])
    assert count == (16 // 8) * 6 * (10 // 5)

    matdot = scheme_params("matdot_ag", matdot3_curve, 3, r=4, s=6, t=5)
    a, b = Matrix.random(matdot.curve.field, 4, 6, rng), Matrix.random(matdot.curve.field, 6, 5, rng)
    tasks = encode(*partition(a, b, matdot), basis_descriptor(matdot),
                   usable_places(matdot.curve, matdot.scheme)[:9])
    _, count = worker_multiply(tasks[0])
    assert count == 4 * (6 // 3) * 5


# -- decoding -----------------------------------------------------------------------

def run_pipeline(params, rng, places=None):
    field = params.curve.field
    a = Matrix.random(field, params.r, params.s, rng)
    b = Matrix.random(field, params.s, params.t, rng)
    desc = basis_descriptor(params)
    if places is None:
        places = usable_places(params.curve, params.scheme)[:desc.threshold]
    tasks = encode(*partition(a, b, params), desc, places)
    results = [worker_multiply(t)[0] for t in tasks]
    direct, _ = matmul(a, b)
    return desc, results, direct


def test_decode_matdot_by_hand(gf7, gf7_matdot2):
    params = gf7_matdot2
    a_blocks, b_blocks = partition(Matrix(gf7, [[1, 2]]), Matrix(gf7, [[3], [4]]), params)
    desc = basis_descriptor(params)
    places = usable_places(params.curve, params.scheme)[:3]
    tasks = encode(a_blocks, b_blocks, desc, places)
    results = [worker_multiply(t)[0] for t in tasks]
    assert [res.h.to_lists()[0][0] for res in results] == [4, 0, 1]
    product, coeffs = decode_with_coefficients(results, desc, params)
    assert product.to_lists() == [[4]]  # 1*3 + 2*4 = 11 = 4 mod 7
    # h = (1 + 2x)(3x + 4) = 4 + 4x + 6x^2 over GF(7)
    assert [row[0] for row in coeffs.to_lists()] == [4, 4, 6]


def test_decode_rational_poly_from_any_points(gf7):
    params = scheme_params("rational_poly", RationalCurve(gf7), 2, 2, r=2, s=1, t=2)
    a = Matrix(gf7, [[1], [2]])
    b = Matrix(gf7, [[3, 4]])
    desc = basis_descriptor(params)
    all_places = usable_places(params.curve, params.scheme)
    rng = np.random.default_rng(5)
    for _ in range(10):
        chosen = [all_places[i] for i in rng.choice(7, size=4, replace=False)]
        tasks = encode(*partition(a, b, params), desc, chosen)
        results = [worker_multiply(t)[0] for t in tasks]
        assert decode(results, desc, params).to_lists() == [[3, 4], [6, 1]]


def test_decode_poly_ag_matches_direct(kummer8_curve):
    params = scheme_params("poly_ag", kummer8_curve, 8, 5, r=16, s=6, t=10)
    rng = np.random.default_rng(11)
    desc, results, direct = run_pipeline(params, rng)
    assert decode(results, desc, params) == direct


def test_decode_insufficient_responses(gf7, gf7_matdot2):
    desc, results, _ = run_pipeline(gf7_matdot2, np.random.default_rng(0))
    with pytest.raises(InsufficientResponses):
        decode(results[:2], desc, gf7_matdot2)


def test_decode_rank_deficient_on_duplicate_places(gf7, gf7_matdot2):
    params = gf7_matdot2
    desc = basis_descriptor(params)
    places = usable_places(params.curve, params.scheme)
    dup = [places[0], places[0], places[1]]
    tasks = encode(*partition(Matrix(gf7, [[1, 2]]), Matrix(gf7, [[3], [4]]), params),
                   desc, dup)
    results = [worker_multiply(t)[0] for t in tasks]
    with pytest.raises(RankDeficient) as err:
        decode(results, desc, params)
    assert "place ids" in str(err.value)


def test_decode_detects_corruption(kummer8_curve):
    # the AG system is overdetermined (genus > 0), so tampering is caught
    params = scheme_params("poly_ag", kummer8_curve, 8, 5, r=8, s=2, t=5)
    rng = np.random.default_rng(3)
    desc, results, _ = run_pipeline(params, rng)
    h = results[0].h
    h.codes[0, 0] = (h.codes[0, 0] + 1) % params.curve.field.q
    with pytest.raises(Inconsistent):
        decode(results, desc, params)


def test_matdot_duplicate_rows_still_decode(matdot3_curve):
    # places sharing a y value produce identical evaluation rows; the fibers
    # have size <= 2, so 9 distinct places always span the 5 needed columns
    params = scheme_params("matdot_ag", matdot3_curve, 3, r=2, s=3, t=2)
    places = usable_places(matdot3_curve, "matdot_ag")
    by_y = {}
    for pl in places:
        by_y.setdefault(pl.y, []).append(pl)
    assert max(len(v) for v in by_y.values()) == 2
    rng = np.random.default_rng(17)
    desc = basis_descriptor(params)
    for _ in range(20):
        chosen = [places[i] for i in rng.choice(len(places), size=desc.threshold,
                                                replace=False)]
        field = params.curve.field
        a = Matrix.random(field, 2, 3, rng)
        b = Matrix.random(field, 3, 2, rng)
        tasks = encode(*partition(a, b, params), desc, chosen)
        results = [worker_multiply(t)[0] for t in tasks]
        assert decode(results, desc, params) == matmul(a, b)[0]


@pytest.mark.parametrize("scheme,curve_fixture,m,n,dims", [
    ("poly_ag", "kummer8_curve", 8, 5, (16, 6, 10)),
    ("rational_poly", None, 4, 6, (8, 6, 12)),
    ("matdot_ag", "matdot3_curve", 3, None, (6, 6, 6)),
    ("rational_matdot", None, 3, None, (4, 6, 5)),
])
def test_end_to_end_random_subsets(scheme, curve_fixture, m, n, dims, request, gf25):
    curve = request.getfixturevalue(curve_fixture) if curve_fixture else RationalCurve(gf25)
    r, s, t = dims
    params = scheme_params(scheme, curve, m, n, r=r, s=s, t=t)
    desc = basis_descriptor(params)
    all_places = usable_places(curve, scheme)
    rng = np.random.default_rng(99)
    for _ in range(10):
        chosen = [all_places[i] for i in rng.choice(len(all_places), size=desc.threshold,
                                                    replace=False)]
        desc2, results, direct = run_pipeline(params, rng, places=chosen)
        assert decode(results, desc2, params) == direct


def test_task_result_json_roundtrip(gf7, gf7_matdot2):
    desc = basis_descriptor(gf7_matdot2)
    places = usable_places(gf7_matdot2.curve, gf7_matdot2.scheme)[:3]
    tasks = encode(*partition(Matrix(gf7, [[1, 2]]), Matrix(gf7, [[3], [4]]),
                              gf7_matdot2), desc, places)
    obj = task_to_json(tasks[0])
    assert obj == {"place": 0, "f": [[1]], "g": [[4]]}
    restored = task_from_json(gf7, obj)
    assert restored.f_share == tasks[0].f_share and restored.g_share == tasks[0].g_share
    res, _ = worker_multiply(tasks[0])
    robj = result_to_json(res)
    assert robj == {"place": 0, "h": [[4]]}
    assert result_from_json(gf7, robj).h == res.h
