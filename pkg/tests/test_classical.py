from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from terwpoly.algebra import Polynomial
from terwpoly.classical import (
    ClassicalParameters,
    Imprimitivity,
    InfeasibleParametersError,
    PseudoPartitionParameters,
    classical_array,
    classical_dual_sequence,
    classical_ordering,
    classical_triple_root_list,
    dual_relation_check,
    gaussian_bracket,
    imprimitivity,
    imprimitivity_names,
    known_classical_families,
    pseudo_partition_array,
)
from terwpoly.drg_core import dual_eigenvalues, spectrum
from terwpoly.terwilliger import terwilliger_polynomial

X = Polynomial.x()
CP = ClassicalParameters.of


@pytest.mark.parametrize(
    "params, array",
    [
        ((3, 1, 2, 7), "{21,10,3;1,6,15}"),
        ((4, 1, 1, 4), "{16,9,4,1;1,4,9,16}"),
        ((4, 1, 2, 9), "{36,21,10,3;1,6,15,28}"),
        ((3, 1, 0, 1), "{3,2,1;1,2,3}"),
        ((3, 2, 2, 14), "{98,72,32;1,9,49}"),  # Grassmann J_2(6,3)
        ((3, 2, 0, 2), "{14,12,8;1,3,7}"),  # dual polar graph
    ],
)
def test_frozen_classical_arrays(params, array):
    assert str(classical_array(CP(*params))) == array


def test_gaussian_bracket():
    assert gaussian_bracket(0, 2) == 0
    assert gaussian_bracket(3, 2) == 7
    assert gaussian_bracket(5, 1) == 5
    assert gaussian_bracket(3, Fraction(-2)) == 3


def test_non_positive_entries_are_infeasible():
    with pytest.raises(InfeasibleParametersError, match="b_0"):
        classical_array(CP(3, 1, 2, -7))
    with pytest.raises(InfeasibleParametersError):
        classical_array(CP(3, 1, 2, 4))


def test_classical_ordering_of_halved_7_cube_is_natural():
    cp = CP(3, 1, 2, 7)
    order, duals = classical_ordering(cp)
    assert order.is_natural
    assert list(duals.theta_star) == [7, 3, -1, -5]
    assert dual_relation_check(cp, classical_dual_sequence(cp))
    ia = classical_array(cp)
    assert not dual_relation_check(cp, dual_eigenvalues(ia, spectrum(ia), 2).theta_star)


def test_imprimitivity():
    assert imprimitivity(CP(3, 1, 2, 7)) == Imprimitivity.PRIMITIVE
    assert imprimitivity_names(imprimitivity(CP(4, 1, 1, 4))) == ["antipodal"]
    assert imprimitivity_names(imprimitivity(CP(4, 1, 0, 1))) == ["bipartite", "antipodal"]
    assert imprimitivity_names(imprimitivity(CP(3, 2, 0, 1))) == ["bipartite"]


@pytest.mark.parametrize(
    "params, roots",
    [((3, 1, 2, 7), [-2, -1, 3, 4]), ((4, 1, 1, 4), [-2, -1, 2, 2]), ((4, 1, 2, 9), [-2, -1, 5, 6]),
     ((3, 2, 2, 14), [-3, -1, 11, 11])],
)
def test_closed_form_roots(params, roots):
    assert classical_triple_root_list(CP(*params)) == roots


def _closed_form_T(cp):
    """The product formula for T in classical parameters."""
    D, b, al, be = cp.D, cp.b, cp.alpha, cp.beta
    ia = classical_array(cp)
    b2 = ia.bi(2)
    top = gaussian_bracket(D, b)
    ppl = -X**2 + (al * top + be - al - 1 - (al + 1) * (b + 1)) * X + be * top - (al + 1) * (b + 1)
    pmm = X**2 + (2 - al * b) * X - al * b + 1
    return b2 / (al + 1) * ppl * pmm - b2**2 * (X + 1) ** 2


def _q_analogue_families():
    out = []
    for q in (2, 3):
        for D in (3, 4):
            for e in (0, 1, 2):
                out.append((f"dual polar q={q} e={e}", CP(D, q, 0, q**e)))
            for n in range(2 * D, 2 * D + 2):
                out.append((f"J_{q}({n},{D})", CP(D, q, q, gaussian_bracket(n - D + 1, q) - 1)))
            out.append((f"bilinear q={q}", CP(D, q, q - 1, q ** (D + 1) - 1)))
    return out


FAMILIES = sorted(known_classical_families(12).items()) + _q_analogue_families()


@given(st.sampled_from(FAMILIES), st.fractions(min_value=-9, max_value=9, max_denominator=5).filter(bool),
       st.fractions(min_value=-9, max_value=9, max_denominator=5))
@settings(max_examples=60, deadline=None)
def test_assembled_T_equals_closed_forms(item, scale, shift):
    name, cp = item
    ia = classical_array(cp)
    order, duals = classical_ordering(cp, ia)
    T = terwilliger_polynomial(ia, [scale * t + shift for t in duals.theta_star]).T
    assert T == _closed_form_T(cp), name
    assert T.lead == -ia.bi(2) / (cp.alpha + 1)
    assert sorted(T(r) for r in classical_triple_root_list(cp)) == [0, 0, 0, 0]
    assert terwilliger_polynomial(ia, classical_dual_sequence(cp)).T == T


@pytest.mark.parametrize(
    "alpha, Dprime, gamma, array",
    [
        (2, 3, 1, "{91,66,45;1,6,15}"),
        (2, 3, 2, "{66,45,28;1,6,30}"),
        (2, 4, 2, "{120,91,66,45;1,6,15,56}"),
        (1, 3, 2, "{36,25,16;1,4,18}"),
        (1, 3, 1, "{49,36,25;1,4,9}"),
        (0, 3, 1, "{7,6,5;1,2,3}"),
    ],
)
def test_pseudo_partition_arrays(alpha, Dprime, gamma, array):
    pp = PseudoPartitionParameters(alpha, Dprime, gamma)
    assert str(pseudo_partition_array(pp)) == array
    assert pp.cover_diameter == 2 * Dprime + (gamma == 1)


def test_pseudo_partition_domain():
    with pytest.raises(ValueError):
        pseudo_partition_array(PseudoPartitionParameters(3, 3, 1))
    with pytest.raises(ValueError):
        pseudo_partition_array(PseudoPartitionParameters(1, 3, 3))
