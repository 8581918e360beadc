"""The Terwilliger polynomial ``T = p++ p-- - (p+-)^2`` (second subconstituent).

For a base vertex x and an eigenvector w of the local graph with
non-principal eigenvalue eta, the Gram determinant of the two vectors
obtained by pushing w into the second subconstituent equals
``|w|^4 T(eta)``, so ``T(eta) >= 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import ROOT_TOLERANCE, Polynomial, RealRootSet, approximate_real_roots, real_roots
from .drg_core import DegenerateDualsError, IntersectionArray, Scalar, exact_list, is_exact, near_zero


class DiameterTooSmallError(ValueError):
    pass


@dataclass(frozen=True)
class TerwilligerData:
    p_plus_plus: Polynomial
    p_plus_minus: Polynomial
    p_minus_minus: Polynomial
    T: Polynomial
    tau: tuple[Scalar, Scalar, Scalar]
    roots: RealRootSet | None

    @property
    def leading_coefficient(self) -> Scalar:
        return self.T.lead

    @property
    def exact(self) -> bool:
        return self.T.is_exact


def p_plus_plus(ia: IntersectionArray) -> Polynomial:
    """``-l^2 + (a_1 - c_2) l + (k - c_2)``."""
    a1, c2, k = ia.ai(1), ia.ci(2), ia.k
    return Polynomial([k - c2, a1 - c2, -1])


def p_plus_minus(ia: IntersectionArray) -> Polynomial:
    """``-p^2_{13} (l + 1)``."""
    if ia.D < 3:
        raise DiameterTooSmallError(f"Terwilliger polynomial requires D >= 3, got D = {ia.D}")
    p213 = ia.p[2][1][3]
    return Polynomial([-p213, -p213])


def tau_coefficients(ia: IntersectionArray, duals: Sequence[Scalar]) -> tuple[Scalar, Scalar, Scalar]:
    if ia.D < 3:
        raise DiameterTooSmallError(f"Terwilliger polynomial requires D >= 3, got D = {ia.D}")
    t0, t1, t2, t3 = exact_list(duals)[:4]
    scale = max(abs(float(x)) for x in duals)
    for name, val in (
        ("theta*_0 - theta*_2", t0 - t2),
        ("theta*_3 - theta*_2", t3 - t2),
        ("theta*_1 - theta*_2", t1 - t2),
        ("theta*_0 - theta*_1", t0 - t1),
    ):
        if near_zero(val, scale=scale):
            raise DegenerateDualsError(f"{name} vanishes")
    a1, b1, c2 = ia.ai(1), ia.bi(1), ia.ci(2)
    lead = (t2 - t1) / (t3 - t2)
    r13 = (t1 - t3) / (t0 - t2)
    spread = t0 + t1 - t2 - t3

    tau0 = (t2 - t1) * spread / (b1 * (t0 - t2) * (t3 - t2))
    tau1 = lead * (r13 - (a1 - 1) / b1 - (a1 - 1) * r13 / b1)
    tau2 = lead * (
        r13
        - (a1 + 1 - c2) / b1
        - (a1 + 1) * r13 / b1
        + ((t1 - t2) ** 2 - (t0 - t1) * (t2 - t3)) / ((t0 - t1) * (t0 - t2))
        - (t0 - t1) * spread / (b1 * (t0 - t2) * (t1 - t2))
    )
    return tau0, tau1, tau2


def p_minus_minus(ia: IntersectionArray, duals: Sequence[Scalar]) -> Polynomial:
    """``p^1_{23} (tau0 l^2 + (tau1 - tau2) l + (1 - a_1 tau0 - tau2))``."""
    tau0, tau1, tau2 = tau_coefficients(ia, duals)
    p123 = ia.p[1][2][3]
    a1 = ia.ai(1)
    return Polynomial([p123 * (1 - a1 * tau0 - tau2), p123 * (tau1 - tau2), p123 * tau0])


def _roots_of(T: Polynomial) -> RealRootSet | None:
    if not 1 <= T.degree <= 4:
        return None
    if T.is_exact:
        return real_roots(T)
    return approximate_real_roots(T)


def terwilliger_polynomial(ia: IntersectionArray, duals: Sequence[Scalar]) -> TerwilligerData:
    """Assemble ``T`` for the Q-polynomial structure given by ``duals``.

    ``duals`` are the dual eigenvalues indexed by distance; any affine
    image of them gives the same polynomial.
    """
    duals = list(duals)
    if ia.D < 3:
        raise DiameterTooSmallError(f"Terwilliger polynomial requires D >= 3, got D = {ia.D}")
    ppl = p_plus_plus(ia)
    ppm = p_plus_minus(ia)
    tau = tau_coefficients(ia, duals)
    pmm = p_minus_minus(ia, duals)
    T = ppl * pmm - ppm * ppm
    return TerwilligerData(ppl, ppm, pmm, T, tau, _roots_of(T))


ADMISSIBLE, BOUNDARY, VIOLATED = "admissible", "boundary", "violated"


def admissible_check(T: Polynomial, eta, tolerance: float = 1e-9) -> str:
    """Classify ``T(eta)``: negative is a violation, zero is a thin-module candidate.

    Exact ``T`` at exact ``eta`` is decided exactly; anything else is
    compared against ``tolerance``.
    """
    val = T(eta)
    if is_exact(val):
        if val == 0:
            return BOUNDARY
        return ADMISSIBLE if val > 0 else VIOLATED
    if abs(val) <= tolerance:
        return BOUNDARY
    return ADMISSIBLE if val > 0 else VIOLATED


@dataclass(frozen=True)
class AdmissibleRegion:
    """Open intervals on which ``T < 0``; ``None`` endpoints are infinite."""

    forbidden_intervals: tuple[tuple[Scalar | None, Scalar | None], ...]
    approximate: bool = False

    def contains(self, eta) -> bool:
        for lo, hi in self.forbidden_intervals:
            if (lo is None or eta > lo) and (hi is None or eta < hi):
                return True
        return False

    def interior(self) -> list[tuple[Scalar, Scalar]]:
        return [(lo, hi) for lo, hi in self.forbidden_intervals if lo is not None and hi is not None]


def _sample_between(lo, hi):
    if lo is None:
        return hi - 1
    if hi is None:
        return lo + 1
    return (lo + hi) / 2


def forbidden_region(T: Polynomial, roots: RealRootSet | None = None) -> AdmissibleRegion:
    """Where ``T`` is negative, from the sign of ``T`` between consecutive real roots.

    With four real roots (counted with multiplicity) and negative leading
    coefficient this is ``(-inf, r1) U (r2, r3) U (r4, inf)``.  With
    fewer real roots the region is still computed but flagged approximate.
    """
    if T.is_zero():
        return AdmissibleRegion((), approximate=False)
    if roots is None:
        roots = _roots_of(T)
    distinct = [r for r, _, _ in roots.sorted_entries()]
    approximate = (not roots.all_exact) or roots.count() != T.degree
    points: list = [None] + distinct + [None]
    intervals = []
    for lo, hi in zip(points, points[1:]):
        if lo is None and hi is None:
            sample = Fraction(0)
        else:
            sample = _sample_between(lo, hi)
        if T(sample) < 0:
            intervals.append((lo, hi))
    return AdmissibleRegion(tuple(intervals), approximate)


def interval_bound(v, k, r, s) -> tuple[Fraction, bool]:
    """``k v - k^2 + k (r + s) + (v - 1) r s`` and whether it is exactly zero.

    Non-negative whenever no non-principal eigenvalue of a k-regular
    graph on v vertices lies strictly between r and s; zero exactly for a
    strongly regular graph with non-principal eigenvalues r and s.
    """
    if not r < s:
        raise ValueError(f"need r < s, got r = {r}, s = {s}")
    value = k * v - k * k + k * (r + s) + (v - 1) * r * s
    if is_exact(value):
        value = Fraction(value)
        return value, value == 0
    return value, math.isclose(value, 0.0, abs_tol=ROOT_TOLERANCE)
