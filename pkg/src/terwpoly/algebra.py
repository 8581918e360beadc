"""Exact rational polynomials and real roots of low-degree polynomials.

Scalars are :class:`fractions.Fraction`.  Polynomials are immutable and
all ring operations are exact.  Floating point is used only to *locate*
candidate roots; a rational root is reported as exact only after it has
been verified by exact evaluation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

Number = Union[int, Fraction]

ROOT_TOLERANCE = 1e-12


class UnsupportedDegreeError(ValueError):
    pass


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused so that inexact values cannot leak into the
    exact path by accident.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def _coeff(a):
    if isinstance(a, float):
        return a
    if isinstance(a, (np.floating,)):
        return float(a)
    return as_fraction(a)


class Polynomial:
    """Dense univariate polynomial with Fraction coefficients.

    ``coeffs[i]`` is the coefficient of ``x**i``.  Trailing zeros are
    stripped, so the zero polynomial has an empty coefficient tuple and
    degree -1.  Float coefficients are allowed for the approximate path;
    such a polynomial reports ``is_exact == False`` and arithmetic with
    it stays in floats.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[Number | float] = ()):
        c = [_coeff(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    @classmethod
    def x(cls) -> "Polynomial":
        return cls([0, 1])

    @classmethod
    def constant(cls, a: Number) -> "Polynomial":
        return cls([a])

    @classmethod
    def from_roots(cls, roots: Iterable[Number], lead: Number = 1) -> "Polynomial":
        p = cls([lead])
        for r in roots:
            p = p * cls([-as_fraction(r), 1])
        return p

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    @property
    def lead(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def coeff(self, i: int) -> Fraction:
        return self._c[i] if 0 <= i < len(self._c) else Fraction(0)

    def is_zero(self) -> bool:
        return not self._c

    @property
    def is_exact(self) -> bool:
        return all(isinstance(a, Fraction) for a in self._c)

    def __call__(self, x):
        """Horner evaluation; exact for rational ``x``, float for float ``x``."""
        acc = 0
        for a in reversed(self._c):
            acc = acc * x + a
        if isinstance(acc, int):
            acc = Fraction(acc)
        return acc

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial([other])

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self._c), len(o._c))
        return Polynomial(self.coeff(i) + o.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-a for a in self._c)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if self.is_zero() or o.is_zero():
            return Polynomial()
        out = [0] * (len(self._c) + len(o._c) - 1)
        for i, a in enumerate(self._c):
            if a == 0:
                continue
            for j, b in enumerate(o._c):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = Polynomial([1])
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial([other])
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(self._c)

    def __repr__(self):
        return f"Polynomial({[str(a) for a in self._c]})"

    def __str__(self):
        if not self._c:
            return "0"
        terms = []
        for i in range(len(self._c) - 1, -1, -1):
            a = self._c[i]
            if a == 0:
                continue
            mono = "" if i == 0 else ("λ" if i == 1 else f"λ^{i}")
            if mono and abs(a) == 1:
                body = mono
            else:
                body = f"{abs(a)}{'*' if mono else ''}{mono}"
            sign = "-" if a < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s

    def derivative(self) -> "Polynomial":
        return Polynomial(i * a for i, a in enumerate(self._c) if i > 0)

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._c)
        dq = other.degree
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - dq - 1, -1, -1):
            q = rem[k + dq] / other.lead
            quot[k] = q
            if q:
                for j, b in enumerate(other._c):
                    rem[k + j] -= q * b
        return Polynomial(quot), Polynomial(rem[:dq])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return Polynomial(a / self.lead for a in self._c)

    def to_float(self) -> np.ndarray:
        """Coefficients high-to-low as floats (numpy.roots convention)."""
        return np.array([float(a) for a in reversed(self._c)])

    def integer_coeffs(self) -> list[int]:
        """Primitive integer multiple of self (positive leading coefficient)."""
        den = 1
        for a in self._c:
            den = den * a.denominator // math.gcd(den, a.denominator)
        ints = [int(a * den) for a in self._c]
        g = 0
        for a in ints:
            g = math.gcd(g, a)
        g = g or 1
        if ints and ints[-1] < 0:
            g = -g
        return [a // g for a in ints]


def evaluate(p: Polynomial, x: Number) -> Fraction:
    return p(as_fraction(x))


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    while not q.is_zero():
        p, q = q, p % q
    return p.monic()


def squarefree_decomposition(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Yun's algorithm: ``p = lead * prod f_i**i`` with f_i square-free, coprime."""
    if p.degree < 1:
        return []
    out = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        b = b // a
        c = d // a
        if a.degree > 0:
            out.append((a, i))
        d = c - b.derivative()
        i += 1
    return out


def is_rational_square(q: Fraction) -> bool:
    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


def rational_sqrt(q: Fraction) -> Fraction:
    return Fraction(math.isqrt(q.numerator), math.isqrt(q.denominator))


def snap_rational(p: Polynomial, approx: float) -> Fraction | None:
    """Return an exact rational root of ``p`` near ``approx``, if there is one.

    By the rational root theorem a root ``r/s`` of the primitive integer
    form of ``p`` has ``s`` dividing the leading coefficient, so the
    candidates are best approximations with bounded denominator.  Every
    candidate is checked by exact evaluation.
    """
    if not math.isfinite(approx):
        return None
    ints = p.integer_coeffs()
    bound = max(abs(ints[-1]), 1)
    tried = set()
    for limit in (1, 2, 4, 8, 16, 64, 256, 1024, bound):
        if limit > bound:
            limit = bound
        cand = Fraction(approx).limit_denominator(limit)
        if cand in tried:
            continue
        tried.add(cand)
        if bound % cand.denominator == 0 and p(cand) == 0:
            return cand
    return None


def _float_roots(p: Polynomial) -> list[float]:
    if p.degree < 1:
        return []
    r = np.roots(p.to_float())
    scale = max(1.0, float(np.max(np.abs(r)))) if len(r) else 1.0
    return sorted(float(z.real) for z in r if abs(z.imag) <= 1e-7 * scale)


def _polish(p: Polynomial, r: float) -> float:
    dp = p.derivative()
    for _ in range(8):
        d = dp(r)
        if d == 0:
            break
        step = p(r) / d
        r -= step
        if abs(step) <= 1e-17 * max(1.0, abs(r)):
            break
    return r


def _error_bound(p: Polynomial, r: float) -> float:
    # a disk of radius n|p(r)/p'(r)| around r contains a root of p
    xr = Fraction(r)
    d = p.derivative()(xr)
    if d == 0:
        return math.inf
    return float(p.degree * abs(p(xr) / d))


@dataclass(frozen=True)
class RealRootSet:
    """Real roots of a polynomial, split into exact and approximate ones.

    ``exact_roots`` holds ``(root, multiplicity)``; ``residual_roots``
    holds ``(approximation, multiplicity, error_bound)``.
    """

    exact_roots: tuple[tuple[Fraction, int], ...]
    residual_roots: tuple[tuple[float, int, float], ...]
    tolerance: float = ROOT_TOLERANCE

    @property
    def all_exact(self) -> bool:
        return not self.residual_roots

    def count(self) -> int:
        return sum(m for _, m in self.exact_roots) + sum(m for _, m, _ in self.residual_roots)

    def sorted_entries(self) -> list[tuple[Fraction | float, int, bool]]:
        entries = [(r, m, True) for r, m in self.exact_roots]
        entries += [(r, m, False) for r, m, _ in self.residual_roots]
        # exact/exact comparisons are exact; anything involving a float is
        # compared as a float, and values within tolerance keep exact-first
        entries.sort(key=lambda e: (float(e[0]), not e[2]))
        return entries

    def values(self) -> list[Fraction | float]:
        """Roots ascending, repeated by multiplicity."""
        out = []
        for r, m, _ in self.sorted_entries():
            out.extend([r] * m)
        return out

    def exact_multiset(self) -> list[Fraction]:
        out = []
        for r, m in sorted(self.exact_roots):
            out.extend([r] * m)
        return out


def _roots_squarefree(f: Polynomial, tolerance: float) -> tuple[list[Fraction], list[tuple[float, float]]]:
    exact: list[Fraction] = []
    approx: list[tuple[float, float]] = []
    while f.degree >= 1:
        if f.degree == 1:
            exact.append(-f.coeff(0) / f.coeff(1))
            return exact, approx
        if f.degree == 2:
            a, b, c = f.coeff(2), f.coeff(1), f.coeff(0)
            disc = b * b - 4 * a * c
            if disc < 0:
                return exact, approx
            if is_rational_square(disc):
                s = rational_sqrt(disc)
                exact.extend([(-b - s) / (2 * a), (-b + s) / (2 * a)])
                return exact, approx
            s = math.sqrt(float(disc))
            # numerically stable pair
            q = -0.5 * (float(b) + math.copysign(s, float(b)))
            for r in (q / float(a), float(c) / q):
                r = _polish(f, r)
                approx.append((r, _error_bound(f, r)))
            return exact, approx
        found = None
        for guess in _float_roots(f):
            found = snap_rational(f, guess)
            if found is not None:
                break
        if found is None:
            for guess in _float_roots(f):
                r = _polish(f, guess)
                approx.append((r, _error_bound(f, r)))
            return exact, approx
        exact.append(found)
        f = f // Polynomial([-found, 1])
    return exact, approx


def real_roots(p: Polynomial, tolerance: float = ROOT_TOLERANCE) -> RealRootSet:
    """All real roots of ``p`` (degree 1 to 4) with multiplicities.

    Rational roots come back exact.  Irrational real roots come back as
    floats with an error bound; a bound above ``tolerance`` is an error
    since the contract on approximate roots would be broken.
    """
    if not 1 <= p.degree <= 4:
        raise UnsupportedDegreeError(f"real_roots supports degree 1..4, got {p.degree}")
    exact: dict[Fraction, int] = {}
    residual: list[tuple[float, int, float]] = []
    for factor, mult in squarefree_decomposition(p):
        ex, ap = _roots_squarefree(factor, tolerance)
        for r in ex:
            exact[r] = exact.get(r, 0) + mult
        for r, err in ap:
            if err > tolerance * max(1.0, abs(r)):
                raise ArithmeticError(f"root near {r} only located to {err:.3g}")
            residual.append((r, mult, err))
    return RealRootSet(
        exact_roots=tuple(sorted(exact.items())),
        residual_roots=tuple(sorted(residual)),
        tolerance=tolerance,
    )



def approximate_real_roots(p: Polynomial, tolerance: float = ROOT_TOLERANCE) -> RealRootSet:
    """Real roots of a float-coefficient polynomial, all reported as residual.

    Roots closer than ``sqrt(tolerance)`` (relative) are merged into one
    root with multiplicity, since a multiple root only survives rounding
    as a small cluster.
    """
    if not 1 <= p.degree <= 4:
        raise UnsupportedDegreeError(f"real_roots supports degree 1..4, got {p.degree}")
    raw = np.roots(p.to_float())
    scale = max(1.0, float(np.max(np.abs(raw))))
    merge = math.sqrt(tolerance) * scale * 10
    reals = sorted(float(z.real) for z in raw if abs(z.imag) <= merge)
    clusters: list[list[float]] = []
    for r in reals:
        if clusters and r - clusters[-1][-1] <= merge:
            clusters[-1].append(r)
        else:
            clusters.append([r])
    out = []
    for cl in clusters:
        r = sum(cl) / len(cl)
        if len(cl) == 1:
            r = _polish(p, r)
            err = abs(p(r)) / max(abs(p.derivative()(r)), 1e-300) * p.degree
        else:
            err = max(cl) - min(cl)
        out.append((r, len(cl), float(err)))
    return RealRootSet(exact_roots=(), residual_roots=tuple(out), tolerance=tolerance)
