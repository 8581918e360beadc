"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line; the lines are printed in the pytest
terminal summary and when this file is run directly.
"""
from __future__ import annotations

import io
import json
import time
from contextlib import redirect_stdout
from fractions import Fraction

import pytest

from terwpoly import cli
from terwpoly import graph_oracle as go
from terwpoly.algebra import Polynomial
from terwpoly.classical import ClassicalParameters, classical_array, classical_ordering, classical_triple_root_list
from terwpoly.drg_core import parse_array, q_polynomial_orderings, spectrum
from terwpoly.terwilliger import interval_bound, terwilliger_polynomial
from terwpoly.type2 import (
    OPEN_ARRAYS,
    Type2Parameters,
    condition_check,
    gamma_r,
    known_type2_parameters,
    screen,
    type2_array,
    type2_eigenvalues,
    type2_leading_coefficient,
    type2_ordering,
    type2_terwilliger_roots,
)

X = Polynomial.x()
F = Fraction
RESULTS: dict[int, str] = {}


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    RESULTS[n] = line
    print(line)


def bundle(family, *params):
    g = go.build(family, params)
    dist = go.distance_matrix(g)
    return g, dist, go.check_distance_regular(g, dist)


def test_criterion_1_classical_closed_form_roots():
    start = time.perf_counter()
    cases = {
        (3, 1, 2, 7): (-(X - 4) * (X - 3) * (X + 1) * (X + 2), [-2, -1, 3, 4]),
        (4, 1, 1, 4): (None, [-2, -1, 2, 2]),
        (4, 1, 2, 9): (None, [-2, -1, 5, 6]),
    }
    problems = []
    for params, (expected_T, roots) in cases.items():
        cp = ClassicalParameters.of(*params)
        ia = classical_array(cp)
        _, duals = classical_ordering(cp, ia)
        td = terwilliger_polynomial(ia, duals.theta_star)
        if expected_T is not None and td.T != expected_T:
            problems.append(f"{params}: T = {td.T}")
        if not td.roots.all_exact or td.roots.exact_multiset() != roots:
            problems.append(f"{params}: roots {td.roots.values()}")
        if classical_triple_root_list(cp) != roots:
            problems.append(f"{params}: closed form {classical_triple_root_list(cp)}")
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed < 1
    record(1, ok, f"classical roots exact for (3,1,2,7), (4,1,1,4), (4,1,2,9) in {elapsed:.3f}s {problems or ''}")
    assert ok, problems


def test_criterion_2_type2_root_identities():
    start = time.perf_counter()
    problems, count = [], 0
    for D in range(3, 7):
        for name, p in known_type2_parameters(D).items():
            count += 1
            ia = type2_array(p)
            _, duals = type2_ordering(p, ia)
            td = terwilliger_polynomial(ia, duals.theta_star)
            closed = type2_terwilliger_roots(p, ia)
            if not closed.identities_hold or closed.roots != closed.alternate_forms:
                problems.append(f"{name}: printed forms disagree")
            if not td.roots.all_exact or td.roots.exact_multiset() != closed.sorted():
                problems.append(f"{name}: roots {td.roots.values()} vs {closed.sorted()}")
            lead = type2_leading_coefficient(p, ia)
            if not td.leading_coefficient == lead == -ia.p[1][2][3] * td.tau[0]:
                problems.append(f"{name}: leading coefficient {td.leading_coefficient} vs {lead}")
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed < 5
    record(2, ok, f"{count} type-2 tuples (3 <= D <= 6): roots, both forms, leading term in {elapsed:.2f}s {problems or ''}")
    assert ok, problems


def test_criterion_3_triple_law_oracle():
    start = time.perf_counter()
    problems, triples = [], 0
    for family, params in (("halved-cube", (7,)), ("halved-cube", (9,)), ("folded-johnson", (6,))):
        g, dist, ia = bundle(family, *params)
        for order in q_polynomial_orderings(ia):
            rep = go.verify_spear(g, order, dist=dist, ia=ia)
            triples += sum(rep.checked.values())
            expected = {(i, d) for i in range(1, ia.D) for d in (1, 2)}
            if not rep.passed or set(rep.checked) != expected:
                problems.append(f"{g.name} {order.sequence}: {rep.summary()}")
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed < 300
    record(3, ok, f"triple law exact on 1/2H(7,2), 1/2H(9,2), folded J(12,6): {triples} triples, 0 violations, {elapsed:.1f}s {problems or ''}")
    assert ok, problems


def test_criterion_4_local_eigenvalues():
    start = time.perf_counter()
    expected_zeros = {"1/2H(7,2)": [-2, 3], "folded 1/2H(14,2)": [-2, 10]}
    problems, checked = [], 0
    for family, params in (("halved-cube", (7,)), ("halved-cube", (9,)), ("folded-johnson", (6,)),
                           ("folded-halved-cube", (14,))):
        g, dist, ia = bundle(family, *params)
        for order in q_polynomial_orderings(ia):
            rep = go.verify_terwilliger(g, order, dist=dist, ia=ia, tolerance=1e-9)
            checked += rep.checked
            if not rep.passed or rep.minimum < -1e-9:
                problems.append(f"{g.name} {order.sequence}: {rep.summary()}")
            if g.name in expected_zeros and rep.zeros != expected_zeros[g.name]:
                problems.append(f"{g.name} zeros {rep.zeros}")
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed < 600
    record(4, ok, f"T(eta) >= -1e-9 at {checked} local eigenvalues, zeros {{3,-2}} and {{10,-2}}, {elapsed:.1f}s {problems or ''}")
    assert ok, problems


def test_criterion_5_screening_regression():
    start = time.perf_counter()
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli.main(["screen-known", "--json"])
    report = json.loads(buf.getvalue())
    verdicts = {s["array"]: s["verdict"] for s in report["screenings"]}
    srgs = {
        "{91,66,45;1,6,15}": (91, 24, 12, 4),
        "{66,45,28;1,6,30}": (66, 20, 10, 4),
        "{120,91,66,45;1,6,15,56}": (120, 28, 14, 4),
        "{36,25,16;1,4,18}": (36, 10, 4, 2),
    }
    problems = []
    if verdicts != cli.EXPECTED_SCREEN or code != 0:
        problems.append(f"verdicts {verdicts}, exit {code}")
    for name, p in OPEN_ARRAYS.items():
        rep = screen(p)
        t, D = rep.input.t, rep.input.D
        if t in (2 * D, 2 * D + 1):
            bound = interval_bound(rep.array.k, rep.array.ai(1), F(-2), rep.gamma2 * (t - 2) / 2)
            if bound != (0, True) or rep.interval_bound != bound:
                problems.append(f"{name}: interval bound {bound}")
        if rep.srg.as_tuple() != srgs[name]:
            problems.append(f"{name}: srg {rep.srg}")
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed < 1
    record(5, ok, f"screen-known: 3 x folded-halved-cube, 1 x folded-Johnson, interval bound 0, SRG parameters match, {elapsed:.3f}s {problems or ''}")
    assert ok, problems


def test_criterion_6_interval_bound():
    first = interval_bound(10, 3, -2, 1)
    second = interval_bound(10, 3, -3, 1)
    ok = first == (0, True) and second[0] > 0 and not second[1]
    record(6, ok, f"interval_bound(10,3,-2,1) = {first}; interval_bound(10,3,-3,1) = {second} (criterion asks > 0)")
    assert first == (0, True)
    assert second[0] > 0 and not second[1]


def test_criterion_7_condition():
    cases = {"91,66,45;1,6,15": True, "36,25,16;1,4,18": False, "66,45,28;1,6,30": False}
    got = {a: condition_check(parse_array(a)) for a in cases}
    ok = got == cases
    record(7, ok, f"c3-3c2+3 = b2-2b1+k-c2+2 = 0: {got}")
    assert ok


def test_criterion_8_construction_consistency():
    start = time.perf_counter()
    P = Type2Parameters.of
    shipped = [
        (("halved-cube", 7), [classical_array(ClassicalParameters.of(3, 1, 2, 7)), type2_array(P(F(7, 2), F(5, 4), F(7, 4), 3))]),
        (("halved-cube", 9), [classical_array(ClassicalParameters.of(4, 1, 2, 9)), type2_array(P(F(9, 2), F(7, 4), F(9, 4), 4))]),
        (("johnson", 8, 4), [classical_array(ClassicalParameters.of(4, 1, 1, 4))]),
        (("johnson", 9, 3), [classical_array(ClassicalParameters.of(3, 1, 1, 6))]),
        (("cube", 6), [classical_array(ClassicalParameters.of(6, 1, 0, 1))]),
        (("folded-johnson", 6), [type2_array(P(6, F(5, 2), 6, 3))]),
        (("folded-johnson", 7), [type2_array(P(7, F(7, 2), 7, 3))]),
        (("folded-halved-cube", 12), [type2_array(P(6, F(5, 2), F(11, 2), 3))]),
        (("folded-halved-cube", 14), [type2_array(P(7, F(7, 2), F(13, 2), 3))]),
        (("grid", 6), [parse_array("10,5;1,2")]),
        (("triangular", 8), [parse_array("12,5;1,4")]),
        (("petersen",), [parse_array("3,2;1,1")]),
        (("clebsch",), [parse_array("10,3;1,6")]),
        (("schlafli",), [parse_array("16,5;1,8")]),
    ]
    problems = []
    for (family, *params), arrays in shipped:
        got = go.check_distance_regular(go.build(family, params))
        for want in arrays:
            if got != want:
                problems.append(f"{family}{params}: {got} != {want}")
    spectra = 0
    for D in range(3, 9):
        for name, p in known_type2_parameters(D).items():
            ia = type2_array(p)
            spectra += 1
            if sorted(type2_eigenvalues(p, ia)) != sorted(spectrum(ia).thetas):
                problems.append(f"{name}: spectrum")
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed < 120
    record(8, ok, f"{len(shipped)} constructions reproduce their arrays; {spectra} type-2 spectra match; {elapsed:.1f}s {problems or ''}")
    assert ok, problems


def test_criterion_9_gamma2_h_pairing():
    problems = []
    for D in range(3, 9):
        for name, p in known_type2_parameters(D).items():
            g2 = gamma_r(type2_array(p), 2)
            want = (2, 4) if name.startswith("folded J") else (4, 8)
            if (g2, p.h) != want:
                problems.append(f"{name}: gamma2 = {g2}, h = {p.h}")
    ok = not problems
    record(9, ok, f"gamma2 = 2, h = 4 on folded Johnson; gamma2 = 4, h = 8 on (folded) halved cubes {problems or ''}")
    assert ok, problems


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
