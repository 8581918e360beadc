from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from terwpoly.algebra import Polynomial
from terwpoly.drg_core import dual_eigenvalues, parse_array, q_polynomial_orderings, spectrum
from terwpoly.terwilliger import (
    ADMISSIBLE,
    BOUNDARY,
    VIOLATED,
    DiameterTooSmallError,
    admissible_check,
    forbidden_region,
    interval_bound,
    p_plus_minus,
    p_plus_plus,
    terwilliger_polynomial,
    tau_coefficients,
)

X = Polynomial.x()


def _all_duals(ia):
    spec = spectrum(ia)
    return [dual_eigenvalues(ia, spec, o).theta_star for o in q_polynomial_orderings(ia, spec)]


def test_halved_7_cube_natural_ordering():
    ia = parse_array("21,10,3;1,6,15")
    td = terwilliger_polynomial(ia, _all_duals(ia)[0])
    assert td.p_plus_plus == -X**2 + 4 * X + 15
    assert td.p_plus_minus == -3 * X - 3
    assert td.p_minus_minus == X**2 - 1
    assert td.T == -(X - 4) * (X - 3) * (X + 1) * (X + 2)
    assert td.tau == (Fraction(1, 5), Fraction(-4, 5), Fraction(-4, 5))
    region = forbidden_region(td.T, td.roots)
    assert region.forbidden_intervals == ((None, -2), (-1, 3), (4, None))
    assert region.interior() == [(-1, 3)]
    assert not region.contains(3) and region.contains(0) and region.contains(-5)


def test_halved_7_cube_second_ordering():
    ia = parse_array("21,10,3;1,6,15")
    td = terwilliger_polynomial(ia, _all_duals(ia)[1])
    assert td.leading_coefficient == Fraction(1, 9)
    assert td.roots.exact_multiset() == [-6, -2, 3, 19]


@pytest.mark.parametrize(
    "text, lead, roots",
    [
        ("91,66,45;1,6,15", -24, [Fraction(-5, 2), -2, 10, Fraction(31, 2)]),
        ("66,45,28;1,6,30", -21, [Fraction(-8, 3), -2, 8, 14]),
        ("120,91,66,45;1,6,15,56", Fraction(-275, 9), [Fraction(-12, 5), -2, 12, Fraction(86, 5)]),
        ("36,25,16;1,4,18", -18, [Fraction(-8, 3), -2, 4, Fraction(22, 3)]),
    ],
)
def test_open_arrays(text, lead, roots):
    ia = parse_array(text)
    [duals] = _all_duals(ia)
    td = terwilliger_polynomial(ia, duals)
    assert td.exact
    assert td.leading_coefficient == lead
    assert td.roots.exact_multiset() == roots


def test_diameter_two_is_rejected():
    ia = parse_array("3,2;1,1")
    with pytest.raises(DiameterTooSmallError):
        terwilliger_polynomial(ia, [3, 1, -2])
    with pytest.raises(DiameterTooSmallError):
        p_plus_minus(ia)


@given(st.fractions(min_value=-30, max_value=30, max_denominator=11).filter(bool),
       st.fractions(min_value=-30, max_value=30, max_denominator=11), st.sampled_from([0, 1]))
@settings(max_examples=60, deadline=None)
def test_T_is_invariant_under_affine_duals(scale, shift, index):
    ia = parse_array("21,10,3;1,6,15")
    duals = _all_duals(ia)[index]
    moved = [scale * t + shift for t in duals]
    assert terwilliger_polynomial(ia, moved).T == terwilliger_polynomial(ia, duals).T


# matrix identities on the first and second subconstituents, checked against counts


def _local_blocks(g, dist, x):
    nb = g.neighbors(x)
    s2 = np.flatnonzero(dist[x] == 2)
    A = g.adjacency
    At = A[nb][:, nb].toarray().astype(np.int64)
    B1 = A[nb][:, s2].toarray().astype(np.int64)
    B3 = (dist[np.ix_(nb, s2)] == 3).astype(np.int64)
    return At, B1, B3


def _check_identity(observed, At, coeffs):
    """observed == cJ*J + cI*I + cA*At + cA2*At^2, entry by entry in exact arithmetic."""
    cJ, cI, cA, cA2 = coeffs
    At2 = At @ At
    k = At.shape[0]
    eye = np.eye(k, dtype=bool)
    keys = np.stack([eye.astype(np.int64), At, At2, observed], axis=-1).reshape(-1, 4)
    for diag, adj, sq, obs in np.unique(keys, axis=0):
        assert cJ + cI * int(diag) + cA * int(adj) + cA2 * int(sq) == int(obs)


@pytest.mark.parametrize("bundle", ["halved7", "folded_j12", "halved9"])
def test_subconstituent_matrix_identities(bundle, request):
    g, dist, ia = request.getfixturevalue(bundle)
    a1, c2, k = ia.ai(1), ia.ci(2), ia.k
    p213, p123 = ia.p[2][1][3], ia.p[1][2][3]
    for duals in _all_duals(ia):
        t0, t1, t2 = tau_coefficients(ia, duals)
        for x in (0, g.n // 3, g.n - 1):
            At, B1, B3 = _local_blocks(g, dist, x)
            _check_identity(B1 @ B1.T, At, (c2 - 1, k - c2, a1 - c2, -1))
            _check_identity(B1 @ B3.T, At, (p213, -p213, -p213, 0))
            _check_identity(B3 @ B3.T, At, (p123 * t2, p123 * (1 - a1 * t0 - t2), p123 * (t1 - t2), p123 * t0))


@pytest.mark.parametrize("bundle", ["halved7", "folded_j12"])
def test_gram_determinant_equals_T(bundle, request):
    g, dist, ia = request.getfixturevalue(bundle)
    for duals in _all_duals(ia):
        td = terwilliger_polynomial(ia, duals)
        At, B1, B3 = _local_blocks(g, dist, 0)
        w, U = np.linalg.eigh(At.astype(float))
        ones = np.ones(len(w)) / np.sqrt(len(w))
        for eta, vec in zip(w, U.T):
            if abs(eta - float(ia.ai(1))) < 1e-9 and abs(vec @ ones) > 1e-6:
                continue
            vec = vec - (vec @ ones) * ones
            vec /= np.linalg.norm(vec)
            plus, minus = B1.T @ vec, B3.T @ vec
            gram = np.array([[plus @ plus, plus @ minus], [plus @ minus, minus @ minus]])
            assert np.linalg.det(gram) == pytest.approx(float(td.T(Fraction(round(eta)))), abs=1e-6)
            assert plus @ plus == pytest.approx(float(p_plus_plus(ia)(Fraction(round(eta)))), abs=1e-8)


def test_admissible_check():
    T = -(X - 4) * (X - 3) * (X + 1) * (X + 2)
    assert admissible_check(T, 3) == BOUNDARY
    assert admissible_check(T, Fraction(7, 2)) == ADMISSIBLE
    assert admissible_check(T, 0) == VIOLATED
    assert admissible_check(T, 3.0 + 1e-13) == BOUNDARY
    assert admissible_check(T, 2.5) == VIOLATED


def test_forbidden_region_with_positive_lead_and_no_roots():
    region = forbidden_region((X - 1) * (X - 2))
    assert region.forbidden_intervals == ((1, 2),)
    region = forbidden_region(X**2 + 1)
    assert region.forbidden_intervals == ()
    region = forbidden_region(-(X**2) - 1)
    assert region.forbidden_intervals == ((None, None),)
    assert region.approximate


def test_interval_bound():
    assert interval_bound(10, 3, -2, 1) == (0, True)
    # -2 lies inside (-3, 1), so the sum over Petersen's non-principal spectrum goes negative
    petersen = [1] * 5 + [-2] * 4
    value, eq = interval_bound(10, 3, -3, 1)
    assert value == sum((e + 3) * (e - 1) for e in petersen) == -12 and not eq
    value, eq = interval_bound(10, 3, -1, Fraction(1, 2))
    assert value == sum((e + 1) * (e - Fraction(1, 2)) for e in petersen) > 0 and not eq
    assert interval_bound(91, 24, -2, 10) == (0, True)
    with pytest.raises(ValueError):
        interval_bound(10, 3, 1, -2)


@given(st.integers(min_value=5, max_value=24), st.data())
@settings(max_examples=80, deadline=None)
def test_interval_bound_nonnegative_on_spectral_gaps(n, data):
    half = list(range(1, n // 2 + 1))
    conn = data.draw(st.lists(st.sampled_from(half), min_size=1, max_size=len(half), unique=True))
    row = np.zeros(n, dtype=int)
    for s in conn:
        row[s % n] = row[-s % n] = 1
    A = np.array([np.roll(row, i) for i in range(n)])
    k = int(row.sum())
    eigs = np.sort(np.linalg.eigvalsh(A.astype(float)))
    j = int(np.argmin(np.abs(eigs - k)))
    rest = np.delete(eigs, j)
    distinct = sorted({round(e, 9) for e in rest})
    for r, s in zip(distinct, distinct[1:]):
        value, _ = interval_bound(n, k, r, s)
        assert value >= -1e-7
