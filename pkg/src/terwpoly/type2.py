"""Type-2 Q-polynomial parameters and screening of pseudo-partition arrays.

A type-2 array is parameterized by ``(t, x, y, D)``; ``h`` is fixed by
``c_1 = 1`` and ``t* = x + y + D + 1 - t``.  :func:`screen` walks the
case analysis that pins down every graph with
``{x, y, D} = {(t-1)/2, t/2, t-1+2/gamma_2}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any

from .algebra import Number, as_fraction
from .drg_core import (
    DualEigenvalues,
    InfeasibleArrayError,
    IntersectionArray,
    QPolyOrdering,
    Spectrum,
    dual_eigenvalues,
    q_polynomial_orderings,
    spectrum,
    theta_hat,
    validate,
)
from .terwilliger import TerwilligerData, forbidden_region, interval_bound, terwilliger_polynomial


class Type2ParameterError(ValueError):
    """Parameters outside the domain of the type-2 formulas, or inconsistent with them."""


@dataclass(frozen=True)
class Type2Parameters:
    t: Fraction
    x: Fraction
    y: Fraction
    D: int

    @classmethod
    def of(cls, t: Number, x: Number, y: Number, D: int) -> "Type2Parameters":
        p = cls(as_fraction(t), as_fraction(x), as_fraction(y), int(D))
        if p.D < 3:
            raise Type2ParameterError(f"D must be at least 3, got {p.D}")
        if p.t.denominator == 1 and 1 <= p.t <= 2 * p.D - 1:
            raise Type2ParameterError(f"t = {p.t} lies in {{1, ..., {2 * p.D - 1}}}")
        return p

    @property
    def t_star(self) -> Fraction:
        return self.x + self.y + self.D + 1 - self.t

    @property
    def h(self) -> Fraction:
        return _h_for(self.t, self.x, self.y, self.D)

    @property
    def h_star(self) -> Fraction:
        return _h_for(self.t_star, self.x, self.y, self.D)

    def __str__(self):
        return f"(t={self.t}, x={self.x}, y={self.y}, D={self.D})"


def _h_for(t: Fraction, x: Fraction, y: Fraction, D: int) -> Fraction:
    """The h making ``c_1 = 1`` in the type-2 formula with parameter t."""
    den = (2 - t) * (1 - t)
    num = (1 - t + x) * (1 - t + y) * (1 - t + D)
    if den == 0 or num == 0:
        raise Type2ParameterError(f"c_1 = 1 cannot fix h for t = {t}, x = {x}, y = {y}, D = {D}")
    return den / num


def _guard(value: Fraction, what: str) -> Fraction:
    if value == 0:
        raise Type2ParameterError(f"vanishing denominator {what}")
    return value


def type2_c(p: Type2Parameters, i: int) -> Fraction:
    t, x, y, D, h = p.t, p.x, p.y, p.D, p.h
    if i == D:
        return h * D * (D - t + x) * (D - t + y) / _guard(2 * D - t - 1, "2D - t - 1")
    return h * i * (i - t + x) * (i - t + y) * (i - t + D) / _guard((2 * i - t) * (2 * i - t - 1), f"(2i-t)(2i-t-1) at i={i}")


def type2_b(p: Type2Parameters, i: int) -> Fraction:
    t, x, y, D, h = p.t, p.x, p.y, p.D, p.h
    return h * (i - t) * (i - x) * (i - y) * (i - D) / _guard((2 * i - t) * (2 * i - t + 1), f"(2i-t)(2i-t+1) at i={i}")


def type2_array(p: Type2Parameters) -> IntersectionArray:
    bs = [type2_b(p, i) for i in range(p.D)]
    cs = [type2_c(p, i) for i in range(1, p.D + 1)]
    b0 = p.h * p.x * p.y * p.D / _guard(p.t - 1, "t - 1")
    if b0 != bs[0]:
        raise Type2ParameterError(f"b_0 = {bs[0]} from the b_i formula but {b0} from hxyD/(t-1)")
    try:
        return validate(bs + cs, p.D)
    except InfeasibleArrayError as exc:
        raise Type2ParameterError(f"{p} gives an infeasible array: {exc}") from None


def type2_eigenvalues(p: Type2Parameters, ia: IntersectionArray | None = None) -> list[Fraction]:
    """``theta_i = b_0 + h i (i - t*)``, indexed in Q-polynomial order."""
    ia = ia or type2_array(p)
    return [ia.k + p.h * i * (i - p.t_star) for i in range(p.D + 1)]


def check_type2_spectrum(p: Type2Parameters, ia: IntersectionArray, spec: Spectrum) -> list[Fraction]:
    thetas = type2_eigenvalues(p, ia)
    if sorted(thetas) != sorted(spec.thetas, key=float) or not spec.all_exact:
        raise Type2ParameterError(
            f"eigenvalues {[str(t) for t in thetas]} of {p} differ from the spectrum "
            f"{[str(t) for t in spec.thetas]} of {ia}"
        )
    return thetas


def type2_ordering(
    p: Type2Parameters, ia: IntersectionArray | None = None, spec: Spectrum | None = None
) -> tuple[QPolyOrdering, DualEigenvalues]:
    """The Q-polynomial ordering listing eigenvalues in the type-2 index order."""
    ia = ia or type2_array(p)
    spec = spec or spectrum(ia)
    thetas = check_type2_spectrum(p, ia, spec)
    wanted = tuple(spec.index_of(th) for th in thetas)
    for order in q_polynomial_orderings(ia, spec):
        if order.sequence == wanted:
            return order, dual_eigenvalues(ia, spec, order)
    raise Type2ParameterError(f"{ia} is not Q-polynomial in the type-2 order {wanted}")


@dataclass(frozen=True)
class DualParameters:
    h_star: Fraction
    t_star: Fraction
    b0_star_multiplicity: Any
    b0_star_formula: Fraction | None
    matches: bool
    note: str = ""


def dual_parameters(p: Type2Parameters, duals: DualEigenvalues) -> DualParameters:
    """Compare the computed duals with ``b*_0 + h* i (i - t)``.

    ``b*_0`` is taken to be the rank ``theta*_0`` of ``E_1``; the value
    ``h* x y D/(t* - 1)`` from the dual array formula is reported next to it.
    """
    hs = p.h_star
    b0s = duals.theta_star[0]
    predicted = [b0s + hs * i * (i - p.t) for i in range(p.D + 1)]
    matches = list(duals.theta_star) == predicted
    formula = hs * p.x * p.y * p.D / (p.t_star - 1) if p.t_star != 1 else None
    note = "" if formula == b0s else f"h*xyD/(t*-1) = {formula} differs from rank {b0s}"
    return DualParameters(hs, p.t_star, b0s, formula, matches, note)


def gamma_r(ia: IntersectionArray, r: int) -> Fraction:
    if r > ia.D:
        raise ValueError(f"r = {r} exceeds D = {ia.D}")
    return sum(((-1) ** i * ia.ci(r - i) * comb(r, i) for i in range(r + 1)), Fraction(0))


def beta_r(ia: IntersectionArray, r: int) -> Fraction:
    if r > ia.D:
        raise ValueError(f"r = {r} exceeds D = {ia.D}")
    return sum(((-1) ** i * ia.bi(r - i) * comb(r, i) for i in range(r + 1)), Fraction(0))


def condition_check(ia: IntersectionArray) -> bool:
    """``c_3 - 3c_2 + 3 = b_2 - 2b_1 + k - c_2 + 2 = 0``."""
    if ia.D < 3:
        raise ValueError("condition needs D >= 3")
    first = ia.ci(3) - 3 * ia.ci(2) + 3
    second = ia.bi(2) - 2 * ia.bi(1) + ia.k - ia.ci(2) + 2
    return first == 0 and second == 0


def h_from_gamma2(gamma2: Number) -> Fraction:
    return 2 * as_fraction(gamma2)


@dataclass(frozen=True)
class Type2Roots:
    roots: tuple[Fraction, Fraction, Fraction, Fraction]
    alternate_forms: tuple[Fraction, Fraction, Fraction, Fraction]
    identities_hold: bool
    hypothesis_values: tuple[Fraction, ...] | None = None

    def sorted(self) -> list[Fraction]:
        return sorted(self.roots)


def type2_terwilliger_roots(p: Type2Parameters, ia: IntersectionArray | None = None) -> Type2Roots:
    """The four closed-form roots of ``T``, each in both of its printed forms.

    The last two alternate forms are ``theta_hat`` of the type-2
    eigenvalues ``theta_D`` and ``theta_1``.
    """
    ia = ia or type2_array(p)
    t, x, y, D = p.t, p.x, p.y, p.D
    b1 = ia.bi(1)
    g = _guard
    r1 = -1 - (x - 1) * (D - 1) * (t - 1) / g((x - t + 1) * (D - t + 1) * (t - 3), "(x-t+1)(D-t+1)(t-3)")
    r2 = -1 - (y - 1) * (D - 1) * (t - 1) / g((y - t + 1) * (D - t + 1) * (t - 3), "(y-t+1)(D-t+1)(t-3)")
    r3 = -1 - (x - 1) * (y - 1) * (t - 1) / g((x - t + 1) * (y - t + 1) * (t - 3), "(x-t+1)(y-t+1)(t-3)")
    r4 = -1 - (1 - t) / g(3 - t, "3-t")
    f1 = -1 - b1 * (y - t + 1) / g((t - 1) * (y - 1), "(t-1)(y-1)")
    f2 = -1 - b1 * (x - t + 1) / g((t - 1) * (x - 1), "(t-1)(x-1)")
    f3 = -1 - b1 * (D - t + 1) / g((t - 1) * (D - 1), "(t-1)(D-1)")
    f4 = -2 - 2 / (t - 3)
    thetas = type2_eigenvalues(p, ia)
    hat_D = theta_hat(ia, thetas[D])
    hat_1 = theta_hat(ia, thetas[1])
    ok = r1 == f1 and r2 == f2 and r3 == f3 == hat_D and r4 == f4 == hat_1

    hyp = None
    gamma2 = gamma_r(ia, 2)
    if gamma2 != 0 and sorted([x, y, Fraction(D)]) == sorted(_hypothesis_triple(t, gamma2)):
        hyp = (
            -2 - 2 / (t - 3),
            Fraction(-2),
            gamma2 * (t - 2) / 2,
            -1 + (gamma2 * (t - 2) + 2) * (t - 1) / (2 * (t - 3)),
        )
        ok = ok and sorted(hyp) == sorted([r1, r2, r3, r4])
    return Type2Roots((r1, r2, r3, r4), (f1, f2, f3, f4), ok, hyp)


def type2_leading_coefficient(p: Type2Parameters, ia: IntersectionArray | None = None) -> Fraction:
    """``-(2 p^1_{23} / b_1) (t-3)^2 / ((t-2)(t-5))``."""
    ia = ia or type2_array(p)
    t = p.t
    return -(2 * ia.p[1][2][3] / ia.bi(1)) * (t - 3) ** 2 / _guard((t - 2) * (t - 5), "(t-2)(t-5)")


def _hypothesis_triple(t: Fraction, gamma2: Fraction) -> list[Fraction]:
    return [(t - 1) / 2, t / 2, t - 1 + 2 / gamma2]


@dataclass(frozen=True)
class SRGParameters:
    v: Fraction
    k: Fraction
    lam: Fraction
    mu: Fraction

    @property
    def integral(self) -> bool:
        return all(z.denominator == 1 for z in (self.v, self.k, self.lam, self.mu))

    def as_tuple(self) -> tuple[Fraction, ...]:
        return (self.v, self.k, self.lam, self.mu)

    def __str__(self):
        return "(" + ",".join(str(z) for z in self.as_tuple()) + ")"


def srg_local_parameters(t: Number, gamma2: Number) -> SRGParameters:
    t, g2 = as_fraction(t), as_fraction(gamma2)
    return SRGParameters(t + g2 * t * (t - 1) / 2, (t - 1) * g2, t * g2 / 2 - 2, g2)


@dataclass(frozen=True)
class SeidelMatch:
    family: str
    m: int | None = None

    def __str__(self):
        return self.family if self.m is None else f"{self.family}(m={self.m})"


SPORADIC_SRGS = {
    "Shrikhande": (16, 6, 2, 2),
    "Chang": (28, 12, 6, 4),
    "Petersen": (10, 3, 0, 1),
    "Clebsch": (16, 10, 6, 6),
    "Schlafli": (27, 16, 10, 8),
}


def seidel_match(v, k, lam, mu) -> list[SeidelMatch]:
    """Families of strongly regular graphs with smallest eigenvalue -2 having these parameters."""
    params = tuple(as_fraction(z) for z in (v, k, lam, mu))
    if any(z.denominator != 1 for z in params):
        return []
    v, k, lam, mu = (int(z) for z in params)
    out = []
    if v % 2 == 0 and v // 2 >= 2:
        m = v // 2
        if (k, lam, mu) == (2 * m - 2, 2 * m - 4, 2 * m - 2):
            out.append(SeidelMatch("multipartite", m))
    m = math.isqrt(v) if v >= 0 else -1
    if m >= 3 and m * m == v and (k, lam, mu) == (2 * (m - 1), m - 2, 2):
        out.append(SeidelMatch("grid", m))
    if k % 2 == 0:
        m = k // 2 + 2
        if m >= 5 and (v, lam, mu) == (comb(m, 2), m - 2, 4):
            out.append(SeidelMatch("triangular", m))
    for name, prm in SPORADIC_SRGS.items():
        if (v, k, lam, mu) == prm:
            out.append(SeidelMatch(name))
    order = ["multipartite", "grid", "Shrikhande", "triangular", "Chang", "Petersen", "Clebsch", "Schlafli"]
    return sorted(out, key=lambda s: order.index(s.family))


VERDICTS = ("folded-Johnson", "folded-halved-cube", "halved-odd-cube", "infeasible", "inconclusive")


@dataclass
class ScreeningReport:
    input: Type2Parameters
    array: IntersectionArray | None = None
    gamma2: Fraction | None = None
    condition: bool | None = None
    branch: str | None = None
    ordering: tuple[int, ...] | None = None
    dual: DualParameters | None = None
    roots: list[Fraction] | None = None
    closed_form_roots: list[Fraction] | None = None
    leading_coefficient: Fraction | None = None
    forbidden_interval: tuple[Fraction, Fraction] | None = None
    interval_bound: tuple[Fraction, bool] | None = None
    srg: SRGParameters | None = None
    seidel_matches: list[SeidelMatch] = field(default_factory=list)
    eliminated: dict[str, str] = field(default_factory=dict)
    decision_row: str | None = None
    verdict: str = "inconclusive"
    reason: str = ""
    steps: list[str] = field(default_factory=list)

    def note(self, msg: str) -> None:
        self.steps.append(msg)

    def finish(self, verdict: str, reason: str) -> "ScreeningReport":
        assert verdict in VERDICTS
        self.verdict, self.reason = verdict, reason
        return self


# c_2 of each family with theta_D = b_1 - 1, and why it is or is not ours
HALVED_CUBE_TABLE = {
    2: ("Hamming, Doob or locally Petersen", "c_2 = gamma_2 + 2 > 2 since gamma_2 >= 1"),
    4: ("Johnson", "Johnson graphs are Q-polynomial of type 2A, not type 2"),
    6: ("halved cube", None),
    10: ("Gosset", "the Gosset graph is Q-polynomial of type 2A, not type 2"),
}


def _halved_cube_order(D: int) -> tuple[int, ...]:
    # natural indices listed as E_0, E_2, E_4, ..., E_3, E_1
    evens = list(range(0, D + 1, 2))
    odds = [i for i in range(D, 0, -1) if i % 2 == 1]
    return tuple(evens + odds)


def _eliminate(match: SeidelMatch, t: Fraction, D: int) -> str | None:
    """Why a Seidel family cannot be the local graph, or None if it can."""
    fam, m = match.family, match.m
    if fam == "multipartite":
        return "k = mu forces t = 2"
    if fam == "Petersen":
        return "gamma_2 = 1 and t = 4 force D = 2"
    if fam == "Clebsch":
        return "gamma_2 = 6 forces t = 8/3"
    if fam == "Schlafli":
        return "gamma_2 = 8 forces t = 3"
    if fam == "Shrikhande":
        return "t = m >= 6 since D >= 3, but the Shrikhande graph has m = 4"
    if fam == "Chang":
        return "m = 2t >= 12 since D >= 3, but the Chang graphs have m = 8"
    if fam == "grid" and t != m:
        return f"grid requires t = m = {m}, but t = {t}"
    if fam == "triangular" and 2 * t != m:
        return f"triangular graph requires 2t = m = {m}, but t = {t}"
    return None


def screen(p: Type2Parameters) -> ScreeningReport:
    rep = ScreeningReport(input=p)
    try:
        ia = type2_array(p)
    except Type2ParameterError as exc:
        return rep.finish("infeasible", f"array generation failed: {exc}")
    rep.array = ia
    rep.gamma2 = g2 = gamma_r(ia, 2)
    rep.condition = condition_check(ia)
    rep.note(f"array {ia}, gamma_2 = {g2}, c3-3c2+3 = b2-2b1+k-c2+2 = 0: {rep.condition}")
    if g2 <= 0:
        return rep.finish("infeasible", f"gamma_2 = {g2} <= 0")
    t, D = p.t, p.D
    if sorted([p.x, p.y, Fraction(D)]) != sorted(_hypothesis_triple(t, g2)):
        return rep.finish("inconclusive", "{x, y, D} != {(t-1)/2, t/2, t-1+2/gamma_2}")
    if p.h != h_from_gamma2(g2):
        return rep.finish("infeasible", f"h = {p.h} but 2 gamma_2 = {h_from_gamma2(g2)}")
    rep.note(f"h = 2 gamma_2 = {p.h}")
    spec = spectrum(ia)
    try:
        order, duals = type2_ordering(p, ia, spec)
    except Type2ParameterError as exc:
        return rep.finish("infeasible", str(exc))
    rep.ordering = order.sequence
    rep.dual = dual_parameters(p, duals)
    if not rep.dual.matches:
        return rep.finish("infeasible", "dual eigenvalues do not follow b*_0 + h* i (i - t)")
    thetas = type2_eigenvalues(p, ia)

    if t == D + 1 - 2 / g2:
        rep.branch = "t = D + 1 - 2/gamma_2"
        if thetas[D] != ia.bi(1) - 1:
            return rep.finish("infeasible", f"theta_D = {thetas[D]} != b_1 - 1 = {ia.bi(1) - 1}")
        rep.note(f"theta_D = b_1 - 1 = {thetas[D]}")
        c2 = ia.ci(2)
        row = HALVED_CUBE_TABLE.get(int(c2)) if c2.denominator == 1 else None
        if row is None:
            return rep.finish("infeasible", f"no graph with theta_D = b_1 - 1 has c_2 = {c2}")
        rep.decision_row = f"c_2 = {c2}: {row[0]}"
        if row[1] is not None:
            return rep.finish("infeasible", row[1])
        if order.sequence != _halved_cube_order(D):
            return rep.finish("infeasible", f"ordering {order.sequence} is not E_0,E_2,...,E_3,E_1")
        if g2 != 4:
            return rep.finish("infeasible", f"halved cube needs gamma_2 = 4, got {g2}")
        return rep.finish("halved-odd-cube", f"halved {2 * D + 1}-cube (c_2 = 6, gamma_2 = 4)")

    if t not in (2 * D, 2 * D + 1):
        return rep.finish("inconclusive", f"t = {t} is neither D + 1 - 2/gamma_2 nor in {{2D, 2D+1}}")

    rep.branch = "t in {2D, 2D+1}"
    td: TerwilligerData = terwilliger_polynomial(ia, duals.theta_star)
    closed = type2_terwilliger_roots(p, ia)
    rep.roots = td.roots.values() if td.roots is not None else None
    rep.closed_form_roots = closed.sorted()
    rep.leading_coefficient = td.leading_coefficient
    if not td.exact or not td.roots.all_exact or rep.roots != rep.closed_form_roots or not closed.identities_hold:
        return rep.finish("infeasible", "Terwilliger roots disagree with the closed forms")
    expected_lead = type2_leading_coefficient(p, ia)
    if td.leading_coefficient != expected_lead:
        return rep.finish("infeasible", f"leading coefficient {td.leading_coefficient} != {expected_lead}")
    if td.leading_coefficient >= 0:
        return rep.finish("inconclusive", "leading coefficient of T is not negative")
    s = g2 * (t - 2) / 2
    region = forbidden_region(td.T, td.roots)
    inner = region.interior()
    rep.forbidden_interval = inner[0] if len(inner) == 1 else None
    if rep.forbidden_interval != (Fraction(-2), s):
        return rep.finish("inconclusive", f"forbidden interior interval {inner} != (-2, {s})")
    rep.note(f"local eigenvalues avoid (-2, {s})")
    rep.interval_bound = bound = interval_bound(ia.k, ia.ai(1), Fraction(-2), s)
    if bound[0] < 0:
        return rep.finish("infeasible", f"interval bound {bound[0]} < 0")
    if not bound[1]:
        return rep.finish("inconclusive", f"interval bound {bound[0]} > 0, local graph not forced")
    rep.srg = srg = srg_local_parameters(t, g2)
    if srg.v != ia.k or srg.k != ia.ai(1) or not srg.integral:
        return rep.finish("infeasible", f"local parameters {srg} clash with b_0 = {ia.k}, a_1 = {ia.ai(1)}")
    rep.note(f"local graph strongly regular {srg}")
    rep.seidel_matches = seidel_match(*srg.as_tuple())
    survivors = []
    for mt in rep.seidel_matches:
        why = _eliminate(mt, t, D)
        if why is None:
            survivors.append(mt)
        else:
            rep.eliminated[str(mt)] = why
    if not survivors:
        return rep.finish("infeasible", f"no strongly regular graph with smallest eigenvalue -2 has parameters {srg}")
    fam = survivors[0]
    if fam.family == "grid" and g2 == 2:
        return rep.finish("folded-Johnson", f"locally {fam.m}x{fam.m} grid: folded J({2 * fam.m},{fam.m})")
    if fam.family == "triangular" and g2 == 4:
        return rep.finish("folded-halved-cube", f"locally T({fam.m}): folded halved {fam.m}-cube")
    return rep.finish("inconclusive", f"local graph {fam} not covered")


def known_type2_parameters(D: int) -> dict[str, Type2Parameters]:
    """Parameters of the known type-2 graphs of diameter D."""
    h = Fraction(1, 2)
    out = {}
    for t in (2 * D + 1, 2 * D):
        if t % 2:
            out[f"folded J({2 * t},{t})"] = Type2Parameters.of(t, Fraction(t, 2), t, D)
            out[f"folded 1/2H({2 * t},2)"] = Type2Parameters.of(t, Fraction(t, 2), t - h, D)
        else:
            out[f"folded J({2 * t},{t})"] = Type2Parameters.of(t, Fraction(t - 1, 2), t, D)
            out[f"folded 1/2H({2 * t},2)"] = Type2Parameters.of(t, Fraction(t - 1, 2), t - h, D)
    t = D + h
    out[f"1/2H({2 * D + 1},2)"] = Type2Parameters.of(t, (t - 1) / 2, t / 2, D)
    return out


OPEN_ARRAYS = {
    "{91,66,45;1,6,15}": Type2Parameters.of(7, Fraction(7, 2), Fraction(13, 2), 3),
    "{66,45,28;1,6,30}": Type2Parameters.of(6, Fraction(5, 2), Fraction(11, 2), 3),
    "{120,91,66,45;1,6,15,56}": Type2Parameters.of(8, Fraction(7, 2), Fraction(15, 2), 4),
    "{36,25,16;1,4,18}": Type2Parameters.of(6, Fraction(5, 2), 6, 3),
}
