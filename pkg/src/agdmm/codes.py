"""Partitioning, share encoding and decoding for the four multiplication schemes.

Block-grid ("poly") schemes split A into m row blocks and B into n column
blocks; every block product A_i B_j is the coefficient of one product monomial
and the master needs R responses to separate all m*n of them:

    rational_poly   f_i = x^(i-1),  g_j = x^(m(j-1)),  R = m*n
    poly_ag         f_i = y^(i-1),  g_j = x^(j-1),     R = genus + m*n

Inner-product ("matdot") schemes split A into m column blocks and B into m row
blocks; AB equals the single coefficient sitting at the middle exponent m-1:

    rational_matdot f_i = x^(i-1),  g_j = x^(m-j),     R = 2m - 1
    matdot_ag       f_i = y^(i-1),  g_j = y^(m-j),     R = 2*genus + 2m - 1

The AG thresholds are exact, not bounds: on curves passing verify_friendly the
product function lies in a space of dimension R whose evaluation map at any R
distinct usable places is injective, so the linear system decoded here is
always full column rank.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import curves as _curves
from .curves import (AFFINE, KummerCurve, RationalCurve, TraceCurve, genus,
                     places_by_id, validate_curve, verify_friendly)
from .exceptions import (IndivisibleDimensions, InsufficientResponses, PlaceNotEvaluable,
                         RankDeficient, SchemeCurveMismatch, TooFewPlaces)
from .linalg import Matrix, matmul, solve_exact

SCHEMES = ("rational_poly", "poly_ag", "rational_matdot", "matdot_ag")
POLY_SCHEMES = ("rational_poly", "poly_ag")
MATDOT_SCHEMES = ("rational_matdot", "matdot_ag")


@dataclass(frozen=True)
class SchemeParams:
    """A fully validated scheme instance: curve, partition and matrix sizes."""

    scheme: str
    curve: object
    m: int
    n: int | None
    r: int
    s: int
    t: int


def scheme_params(scheme, curve, m, n=None, *, r, s, t):
    """Validate and freeze scheme parameters.

    Raises SchemeCurveMismatch when the curve kind or its closed-form
    invariants do not support the scheme, IndivisibleDimensions when the
    partition does not divide the matrix sizes.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    validate_curve(curve)
    rational = isinstance(curve, RationalCurve)
    if scheme.startswith("rational") != rational:
        raise SchemeCurveMismatch(f"scheme {scheme} on a {curve.kind} curve")
    if m < 1 or (n is not None and n < 1):
        raise ValueError("partition parameters must be positive")
    if scheme in POLY_SCHEMES:
        if n is None:
            raise ValueError(f"scheme {scheme} needs both m and n")
        if r % m or t % n:
            raise IndivisibleDimensions(f"need m | r and n | t, got m={m}, r={r}, n={n}, t={t}")
    else:
        if n is not None:
            raise ValueError(f"scheme {scheme} takes no n")
        if s % m:
            raise IndivisibleDimensions(f"need m | s, got m={m}, s={s}")
    if scheme == "poly_ag":
        report = verify_friendly(curve, "poly", m)
        if not report.passed:
            raise SchemeCurveMismatch(
                f"curve fails poly conditions {report.failed_checks()} for m={m}")
    elif scheme == "matdot_ag":
        report = verify_friendly(curve, "matdot", m)
        if not report.passed:
            raise SchemeCurveMismatch(
                f"curve fails matdot conditions {report.failed_checks()} for m={m}")
    return SchemeParams(scheme, curve, m, n, r, s, t)


def recovery_threshold(params):
    """Minimum number of worker responses that always suffices to decode."""
    m = params.m
    if params.scheme == "rational_poly":
        return m * params.n
    if params.scheme == "poly_ag":
        return genus(params.curve) + m * params.n
    if params.scheme == "rational_matdot":
        return 2 * m - 1
    return 2 * genus(params.curve) + 2 * m - 1


@dataclass(frozen=True)
class BasisDescriptor:
    """Encoding functions as (x_exp, y_exp) monomials plus their order table.

    orders[i*n + j] is the order of f_i * g_j at the distinguished place (the
    expansion exponent the decoder separates); for matdot schemes
    target_order = m - 1 marks the coefficient equal to AB.
    """

    scheme: str
    m: int
    n: int
    f_monomials: tuple
    g_monomials: tuple
    orders: tuple
    target_order: int | None
    threshold: int


def basis_descriptor(params):
    """Monomials, order table and threshold for a validated scheme instance."""
    m = params.m
    rational = isinstance(params.curve, RationalCurve)
    if params.scheme.startswith("rational") != rational:
        raise SchemeCurveMismatch(f"scheme {params.scheme} on a {params.curve.kind} curve")
    if params.scheme == "rational_poly":
        n = params.n
        f_mon = tuple((i, 0) for i in range(m))
        g_mon = tuple((m * j, 0) for j in range(n))
    elif params.scheme == "poly_ag":
        n = params.n
        f_mon = tuple((0, i) for i in range(m))
        g_mon = tuple((j, 0) for j in range(n))
    elif params.scheme == "rational_matdot":
        n = m
        f_mon = tuple((i, 0) for i in range(m))
        g_mon = tuple((m - 1 - j, 0) for j in range(n))
    else:
        n = m
        f_mon = tuple((0, i) for i in range(m))
        g_mon = tuple((0, m - 1 - j) for j in range(n))
    orders = []
    for i in range(m):
        for j in range(n):
            if params.scheme == "poly_ag":
                # pole orders at infinity: y has a simple pole there, x an m-fold one
                orders.append(i + m * j)
            else:
                orders.append(sum(f_mon[i]) + sum(g_mon[j]))
    target = m - 1 if params.scheme in MATDOT_SCHEMES else None
    return BasisDescriptor(params.scheme, m, n, f_mon, g_mon, tuple(orders),
                           target, recovery_threshold(params))


def check_code_condition(desc, scheme):
    """Order-table separation condition for the given scheme family.

    Block-grid schemes need all m*n orders pairwise distinct. Inner-product
    schemes need the target order hit by exactly the m diagonal pairs.
    """
    if scheme in POLY_SCHEMES:
        return len(set(desc.orders)) == desc.m * desc.n
    hits = [(i, j) for i in range(desc.m) for j in range(desc.n)
            if desc.orders[i * desc.n + j] == desc.target_order]
    return hits == [(i, i) for i in range(desc.m)]


def partition(a, b, params):
    """Split A and B into the scheme's blocks; concatenation reproduces them."""
    m = params.m
    if params.scheme in POLY_SCHEMES:
        n = params.n
        if a.rows % m or b.cols % n:
            raise IndivisibleDimensions(f"m={m} must divide rows(A)={a.rows}, "
                                        f"n={n} cols(B)={b.cols}")
        br, bc = a.rows // m, b.cols // n
        a_blocks = [Matrix(a.field, a.codes[i * br:(i + 1) * br, :], validate=False)
                    for i in range(m)]
        b_blocks = [Matrix(b.field, b.codes[:, j * bc:(j + 1) * bc], validate=False)
                    for j in range(n)]
    else:
        if a.cols % m or b.rows % m:
            raise IndivisibleDimensions(f"m={m} must divide cols(A)={a.cols} "
                                        f"and rows(B)={b.rows}")
        w = a.cols // m
        a_blocks = [Matrix(a.field, a.codes[:, i * w:(i + 1) * w], validate=False)
                    for i in range(m)]
        b_blocks = [Matrix(b.field, b.codes[i * w:(i + 1) * w, :], validate=False)
                    for i in range(m)]
    return a_blocks, b_blocks


@dataclass
class EncodedTask:
    place_id: int
    f_share: Matrix
    g_share: Matrix


@dataclass
class WorkerResult:
    place_id: int
    h: Matrix
    arrival_rank: int | None = None


def _monomial_coefficients(field, monomials, xs, ys):
    """Evaluate each (x_exp, y_exp) monomial at all places at once -> (k, N)."""
    cols = []
    for xe, ye in monomials:
        c = field.pow(xs, xe)
        if ye:
            if ys is None:
                raise PlaceNotEvaluable("scheme uses y but places carry no y coordinate")
            c = field.mul(c, field.pow(ys, ye))
        cols.append(np.broadcast_to(np.asarray(c), xs.shape))
    return np.stack(cols)


def _place_coords(field, places):
    for pl in places:
        if pl.kind != AFFINE:
            raise PlaceNotEvaluable(f"place {pl.id} is {pl.kind}")
    xs = np.array([pl.x for pl in places], dtype=np.int64)
    ys = None
    if all(pl.y is not None for pl in places):
        ys = np.array([pl.y for pl in places], dtype=np.int64)
    return xs, ys


def encode(a_blocks, b_blocks, desc, places):
    """Per-place shares f(P) = sum_i phi_i(P) A_i and g(P) = sum_j psi_j(P) B_j."""
    if len(places) < desc.threshold:
        raise TooFewPlaces(f"{len(places)} places < threshold {desc.threshold}")
    field = a_blocks[0].field
    xs, ys = _place_coords(field, places)

    def combine(coeffs, blocks):
        acc = None
        for c, blk in zip(coeffs, blocks):
            term = field.mul(c[:, None, None], blk.codes[None, :, :])
            acc = term if acc is None else field.add(acc, term)
        return acc

    f_all = combine(_monomial_coefficients(field, desc.f_monomials, xs, ys), a_blocks)
    g_all = combine(_monomial_coefficients(field, desc.g_monomials, xs, ys), b_blocks)
    return [EncodedTask(pl.id, Matrix(field, f_all[k], validate=False),
                        Matrix(field, g_all[k], validate=False))
            for k, pl in enumerate(places)]


def worker_multiply(task):
    """One worker's job: the share product, plus its field-multiplication count."""
    h, count = matmul(task.f_share, task.g_share)
    return WorkerResult(task.place_id, h), count


def _product_monomials(desc):
    """Monomial per decode column: every f_i g_j for block-grid schemes, the
    expansion powers 0 .. 2m-2 of the single encoding variable for matdot."""
    if desc.scheme in POLY_SCHEMES:
        return [(fx + gx, fy + gy)
                for fx, fy in desc.f_monomials for gx, gy in desc.g_monomials]
    use_y = desc.scheme == "matdot_ag"
    return [(0, d) if use_y else (d, 0) for d in range(2 * desc.m - 1)]


def decode(results, desc, params, ops=None):
    """Recover AB from the first `threshold` responses."""
    product, _ = decode_with_coefficients(results, desc, params, ops=ops)
    return product


def decode_with_coefficients(results, desc, params, ops=None):
    """Like decode, but also returns the full coefficient solution matrix.

    Row c of the coefficient matrix is the flattened block attached to decode
    column c; matdot tests use the off-target rows, so they are kept.
    """
    threshold = desc.threshold
    if len(results) < threshold:
        raise InsufficientResponses(f"{len(results)} responses < threshold {threshold}")
    used = list(results)[:threshold]
    lookup = places_by_id(params.curve)
    places = [lookup[res.place_id] for res in used]
    field = params.curve.field
    xs, ys = _place_coords(field, places)
    columns = _product_monomials(desc)
    eval_matrix = Matrix(field,
                         _monomial_coefficients(field, columns, xs, ys).T.copy(),
                         validate=False)
    rhs = Matrix(field, np.stack([res.h.codes.reshape(-1) for res in used]), validate=False)
    try:
        coeffs = solve_exact(eval_matrix, rhs, ops=ops)
    except RankDeficient as exc:
        ids = [pl.id for pl in places]
        raise RankDeficient(f"{exc} (place ids {ids})") from exc
    if desc.scheme in MATDOT_SCHEMES:
        product = Matrix(field, coeffs.codes[desc.target_order].reshape(params.r, params.t))
        return product, coeffs
    br, bc = params.r // desc.m, params.t // desc.n
    out = np.zeros((params.r, params.t), dtype=np.int64)
    for i in range(desc.m):
        for j in range(desc.n):
            block = coeffs.codes[i * desc.n + j].reshape(br, bc)
            out[i * br:(i + 1) * br, j * bc:(j + 1) * bc] = block
    return Matrix(field, out, validate=False), coeffs


# -- wire formats ------------------------------------------------------------

def task_to_json(task):
    return {"place": task.place_id, "f": task.f_share.to_lists(), "g": task.g_share.to_lists()}


def task_from_json(field, obj):
    return EncodedTask(int(obj["place"]), Matrix(field, obj["f"]), Matrix(field, obj["g"]))


def result_to_json(res):
    return {"place": res.place_id, "h": res.h.to_lists()}


def result_from_json(field, obj):
    return WorkerResult(int(obj["place"]), Matrix(field, obj["h"]))
