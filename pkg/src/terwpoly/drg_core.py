"""Intersection arrays and the parameters derived from them.

Everything stays in exact rationals as long as the eigenvalues are
rational.  Irrational eigenvalues are carried as floats, and every
quantity derived from them (multiplicities, dual eigenvalues, Krein
parameters) is then a float compared at ``APPROX_TOLERANCE``.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence, Union

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .algebra import Polynomial, as_fraction, snap_rational

log = logging.getLogger(__name__)

Scalar = Union[Fraction, float]

APPROX_TOLERANCE = 1e-9


class ArrayParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class InfeasibleArrayError(ValueError):
    def __init__(self, violations: Sequence[str]):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


class DegenerateDualsError(ValueError):
    """A formula needed a difference of dual eigenvalues that vanishes."""


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def exact_list(values) -> list[Scalar]:
    """Promote ints to Fractions so that division stays exact."""
    return [Fraction(x) if isinstance(x, int) else x for x in values]


def near_zero(x: Scalar, tol: float = APPROX_TOLERANCE, scale: float = 1.0) -> bool:
    if is_exact(x):
        return x == 0
    return abs(x) <= tol * max(1.0, scale)


@dataclass(frozen=True)
class IntersectionArray:
    """The array ``{b_0, ..., b_{D-1}; c_1, ..., c_D}``.

    Construct through :func:`validate` (or :func:`parse_array`) so the
    invariants are checked; ``warnings`` lists soft feasibility issues.
    """

    b: tuple[Fraction, ...]
    c: tuple[Fraction, ...]
    warnings: tuple[str, ...] = field(default=(), compare=False)

    @property
    def D(self) -> int:
        return len(self.b)

    @property
    def k(self) -> Fraction:
        return self.b[0]

    def bi(self, i: int) -> Fraction:
        if 0 <= i < self.D:
            return self.b[i]
        return Fraction(0)

    def ci(self, i: int) -> Fraction:
        if 1 <= i <= self.D:
            return self.c[i - 1]
        return Fraction(0)

    def ai(self, i: int) -> Fraction:
        return self.k - self.bi(i) - self.ci(i)

    @property
    def a(self) -> tuple[Fraction, ...]:
        return tuple(self.ai(i) for i in range(self.D + 1))

    @cached_property
    def valencies(self) -> tuple[Fraction, ...]:
        return tuple(valencies(self))

    @property
    def v(self) -> Fraction:
        return sum(self.valencies, Fraction(0))

    @cached_property
    def p(self) -> "PTensor":
        return intersection_numbers(self)

    def __str__(self):
        return "{" + ",".join(map(str, self.b)) + ";" + ",".join(map(str, self.c)) + "}"

    def to_text(self) -> str:
        return ",".join(map(str, self.b)) + ";" + ",".join(map(str, self.c))


_TOKEN = re.compile(r"\s*([+-]?\d+(?:\s*/\s*\d+)?)\s*")


def parse_array(text: str) -> IntersectionArray:
    """Parse ``"b0,b1,...;c1,...,cD"`` (integers or ``p/q``) and validate it."""
    if text.count(";") != 1:
        pos = text.find(";", text.find(";") + 1) if ";" in text else len(text)
        raise ArrayParseError("expected exactly one ';' separating b and c", pos)
    semi = text.index(";")
    halves = [(text[:semi], 0), (text[semi + 1:], semi + 1)]
    values: list[list[Fraction]] = []
    for chunk, offset in halves:
        vals = []
        pos = offset
        for tok in chunk.split(","):
            m = _TOKEN.fullmatch(tok)
            if not m:
                raise ArrayParseError(f"bad token {tok.strip()!r}", pos)
            num = m.group(1).replace(" ", "")
            try:
                vals.append(Fraction(num))
            except ZeroDivisionError:
                raise ArrayParseError(f"zero denominator in {num!r}", pos) from None
            pos += len(tok) + 1
        values.append(vals)
    b, c = values
    if len(b) != len(c):
        raise ArrayParseError(f"{len(b)} b-values but {len(c)} c-values", semi)
    return validate(b + c, len(b))


def validate(raw: Sequence, D: int) -> IntersectionArray:
    """Check the hard invariants of an intersection array.

    Raises :class:`InfeasibleArrayError` listing every violated hard
    invariant.  Monotonicity and integrality problems become warnings.
    """
    vals = [as_fraction(x) for x in raw]
    if D < 1 or len(vals) != 2 * D:
        raise InfeasibleArrayError([f"expected {2 * D} values for diameter {D}, got {len(vals)}"])
    b, c = tuple(vals[:D]), tuple(vals[D:])
    errors = []
    for i, x in enumerate(b):
        if x < 1:
            errors.append(f"b_{i} = {x} < 1")
    for i, x in enumerate(c, start=1):
        if x < 1:
            errors.append(f"c_{i} = {x} < 1")
    if c[0] != 1:
        errors.append(f"c_1 = {c[0]} != 1")
    k = b[0]
    for i in range(D + 1):
        bi = b[i] if i < D else 0
        ci = c[i - 1] if i >= 1 else 0
        if k - bi - ci < 0:
            errors.append(f"a_{i} = {k - bi - ci} < 0")
    if errors:
        raise InfeasibleArrayError(errors)

    warnings = []
    for i in range(D - 1):
        if b[i] < b[i + 1]:
            warnings.append(f"b_{i} < b_{i + 1}")
        if c[i] > c[i + 1]:
            warnings.append(f"c_{i + 1} > c_{i + 2}")
    ks = [Fraction(1)]
    for i in range(1, D + 1):
        ks.append(ks[-1] * b[i - 1] / c[i - 1])
    for i, ki in enumerate(ks):
        if ki.denominator != 1:
            warnings.append(f"k_{i} = {ki} is not an integer")
    for w in warnings:
        log.warning("array %s: %s", "{" + ",".join(map(str, b)) + ";" + ",".join(map(str, c)) + "}", w)
    return IntersectionArray(b, c, tuple(warnings))


def valencies(ia: IntersectionArray) -> list[Fraction]:
    ks = [Fraction(1)]
    for i in range(1, ia.D + 1):
        ks.append(ks[-1] * ia.bi(i - 1) / ia.ci(i))
    return ks


PTensor = list  # p[h][i][j], nested lists of Fractions


def intersection_numbers(ia: IntersectionArray) -> PTensor:
    """All ``p^h_ij`` from the recursion on ``A_1 A_i``.

    Uses ``c_{i+1} p^h_{i+1,j} = c_h p^{h-1}_{ij} + a_h p^h_{ij}
    + b_h p^{h+1}_{ij} - b_{i-1} p^h_{i-1,j} - a_i p^h_{ij}``.
    """
    D = ia.D
    zero = Fraction(0)
    p = [[[zero] * (D + 1) for _ in range(D + 1)] for _ in range(D + 1)]
    for h in range(D + 1):
        p[h][0][h] = Fraction(1)
        if h >= 1:
            p[h][1][h - 1] = ia.ci(h)
        p[h][1][h] = ia.ai(h)
        if h < D:
            p[h][1][h + 1] = ia.bi(h)

    def get(h, i, j):
        if 0 <= h <= D and 0 <= i <= D and 0 <= j <= D:
            return p[h][i][j]
        return zero

    for i in range(1, D):
        for h in range(D + 1):
            for j in range(D + 1):
                three = ia.ci(h) * get(h - 1, i, j) + ia.ai(h) * get(h, i, j) + ia.bi(h) * get(h + 1, i, j)
                p[h][i + 1][j] = (three - ia.bi(i - 1) * get(h, i - 1, j) - ia.ai(i) * get(h, i, j)) / ia.ci(i + 1)
    bad = [
        f"p^{h}_{{{i},{j}}} = {p[h][i][j]} < 0"
        for h in range(D + 1)
        for i in range(D + 1)
        for j in range(D + 1)
        if p[h][i][j] < 0
    ]
    if bad:
        raise InfeasibleArrayError(bad)
    return p


def characteristic_polynomial(ia: IntersectionArray) -> Polynomial:
    """Monic polynomial whose roots are the eigenvalues of the array."""
    x = Polynomial.x()
    prev, cur = Polynomial([1]), x
    for i in range(1, ia.D):
        prev, cur = cur, ((x - ia.ai(i)) * cur - ia.bi(i - 1) * prev) * (Fraction(1) / ia.ci(i + 1))
    char = (x - ia.ai(ia.D)) * cur - ia.bi(ia.D - 1) * prev
    return char.monic()


def standard_sequence(ia: IntersectionArray, theta: Scalar) -> list[Scalar]:
    """``u_0 = 1, u_1 = theta/k`` and ``c_i u_{i-1} + a_i u_i + b_i u_{i+1} = theta u_i``."""
    u = [Fraction(1), theta / ia.k]
    for i in range(1, ia.D):
        u.append(((theta - ia.ai(i)) * u[i] - ia.ci(i) * u[i - 1]) / ia.bi(i))
    return u[: ia.D + 1]


def theta_hat(ia: IntersectionArray, theta: Scalar) -> Scalar:
    return -1 - ia.bi(1) / (theta + 1)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in natural (descending) order with multiplicities."""

    thetas: tuple[Scalar, ...]
    multiplicities: tuple[Scalar, ...]
    v: Fraction
    issues: tuple[str, ...] = ()

    @property
    def D(self) -> int:
        return len(self.thetas) - 1

    def is_exact(self, j: int) -> bool:
        return is_exact(self.thetas[j])

    @property
    def all_exact(self) -> bool:
        return all(is_exact(t) for t in self.thetas)

    @property
    def feasible(self) -> bool:
        return not self.issues

    def index_of(self, theta: Scalar) -> int:
        for j, t in enumerate(self.thetas):
            if t == theta or (not (is_exact(t) and is_exact(theta)) and abs(t - theta) <= APPROX_TOLERANCE):
                return j
        raise KeyError(theta)


def spectrum(ia: IntersectionArray) -> Spectrum:
    """Eigenvalues of the tridiagonal intersection matrix and multiplicities.

    Located numerically, then each is promoted to an exact rational when
    it is an exact root of the characteristic polynomial.
    """
    D = ia.D
    diag = np.array([float(ia.ai(i)) for i in range(D + 1)])
    off = np.sqrt(np.array([float(ia.bi(i) * ia.ci(i + 1)) for i in range(D)]))
    approx = sorted(eigh_tridiagonal(diag, off, eigvals_only=True), reverse=True)
    char = characteristic_polynomial(ia)
    thetas: list[Scalar] = []
    for t in approx:
        exact = snap_rational(char, float(t))
        thetas.append(exact if exact is not None else float(t))
    issues = []
    for j in range(D):
        x, y = thetas[j], thetas[j + 1]
        same = x == y if is_exact(x) and is_exact(y) else abs(x - y) <= APPROX_TOLERANCE
        if same:
            raise InfeasibleArrayError([f"repeated eigenvalue {x}"])
    ks = ia.valencies
    v = ia.v
    mults: list[Scalar] = []
    for t in thetas:
        u = standard_sequence(ia, t)
        norm = sum(ki * ui * ui for ki, ui in zip(ks, u))
        m = v / norm
        mults.append(m)
        mf = float(m)
        if mf <= 0 or abs(mf - round(mf)) > 1e-6:
            issues.append(f"multiplicity {m} of eigenvalue {t} is not a positive integer")
    if thetas[0] != ia.k:
        issues.append(f"largest eigenvalue {thetas[0]} != k")
    return Spectrum(tuple(thetas), tuple(mults), v, tuple(issues))


@dataclass(frozen=True)
class QPolyOrdering:
    """Natural-order indices of the idempotents listed as ``E_0, E_1, ...``."""

    sequence: tuple[int, ...]

    @property
    def e1(self) -> int:
        return self.sequence[1]

    @property
    def is_natural(self) -> bool:
        return self.sequence == tuple(range(len(self.sequence)))


@dataclass(frozen=True)
class DualEigenvalues:
    ordering: QPolyOrdering | None
    theta_star: tuple[Scalar, ...]

    @property
    def exact(self) -> bool:
        return all(is_exact(t) for t in self.theta_star)

    def __getitem__(self, i):
        return self.theta_star[i]

    def __len__(self):
        return len(self.theta_star)


def dual_eigenvalues(ia: IntersectionArray, spec: Spectrum, ordering: QPolyOrdering | int) -> DualEigenvalues:
    """``theta*_i = m_j u_i(theta_j)`` for the idempotent ``E_j`` in position 1.

    ``ordering`` is either a :class:`QPolyOrdering` or the natural index j.
    """
    if isinstance(ordering, QPolyOrdering):
        j, order = ordering.e1, ordering
    else:
        j, order = int(ordering), None
    m = spec.multiplicities[j]
    ts = tuple(m * u for u in standard_sequence(ia, spec.thetas[j]))
    scale = max(abs(float(t)) for t in ts)
    for a in range(len(ts)):
        for b in range(a + 1, len(ts)):
            if near_zero(ts[a] - ts[b], scale=scale):
                raise DegenerateDualsError(f"theta*_{a} = theta*_{b} = {ts[a]} for E_1 = E_{j}")
    return DualEigenvalues(order, ts)


def krein_parameters(ia: IntersectionArray, spec: Spectrum) -> list:
    """``q[h][i][j] = (m_i m_j / v) sum_l k_l u_l(th_i) u_l(th_j) u_l(th_h)``, natural indices."""
    D = ia.D
    ks = ia.valencies
    us = [standard_sequence(ia, t) for t in spec.thetas]
    ms = spec.multiplicities
    v = spec.v
    q = [[[None] * (D + 1) for _ in range(D + 1)] for _ in range(D + 1)]
    for h in range(D + 1):
        for i in range(D + 1):
            for j in range(i, D + 1):
                s = sum(ks[l] * us[i][l] * us[j][l] * us[h][l] for l in range(D + 1))
                q[h][i][j] = q[h][j][i] = ms[i] * ms[j] / v * s
    return q


def krein_violations(q: list, tol: float = APPROX_TOLERANCE) -> list[str]:
    out = []
    n = len(q)
    for h in range(n):
        for i in range(n):
            for j in range(i, n):
                x = q[h][i][j]
                if (x < 0) if is_exact(x) else (x < -tol):
                    out.append(f"q^{h}_{{{i},{j}}} = {x} < 0")
    return out


def q_polynomial_orderings(
    ia: IntersectionArray,
    spec: Spectrum | None = None,
    krein: list | None = None,
    tol: float = APPROX_TOLERANCE,
) -> list[QPolyOrdering]:
    """Every ordering of the idempotents under which ``E_1 o E_i`` is tridiagonal.

    Each non-trivial idempotent is tried as ``E_1`` and the ordering is
    extended greedily: the next idempotent is the unused one appearing in
    ``E_1 o E_i``.  The completed candidate is then checked in full.
    """
    spec = spec or spectrum(ia)
    q = krein if krein is not None else krein_parameters(ia, spec)
    D = ia.D
    scale = max(abs(float(m)) for m in spec.multiplicities)

    def nz(x):
        return not near_zero(x, tol, scale)

    found = []
    for e1 in range(1, D + 1):
        seq = [0, e1]
        while len(seq) < D + 1:
            cur = seq[-1]
            nxt = [h for h in range(D + 1) if h not in seq and nz(q[h][e1][cur])]
            if len(nxt) != 1:
                break
            seq.append(nxt[0])
        if len(seq) != D + 1:
            continue
        ok = True
        for a in range(D + 1):
            for b_ in range(D + 1):
                val = q[seq[b_]][e1][seq[a]]
                if abs(a - b_) > 1 and nz(val):
                    ok = False
                if abs(a - b_) == 1 and not nz(val):
                    ok = False
        if ok:
            found.append(QPolyOrdering(tuple(seq)))
    return found
