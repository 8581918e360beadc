"""Affine law for the triple intersection numbers ``[i, i+1, i+1]``.

Fix ``x`` and two distinct neighbours ``y, z`` of ``x`` at distance
``delta`` from each other.  For a Q-polynomial graph the number of
vertices at distances ``(i, i+1, i+1)`` from ``(x, y, z)`` is an affine
function of the count at ``(1, 2, 2)``, with coefficients depending only
on the intersection numbers and dual eigenvalues.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .classical import ClassicalParameters, classical_array, gaussian_bracket
from .drg_core import DegenerateDualsError, IntersectionArray, Scalar, exact_list, near_zero


@dataclass(frozen=True)
class TripleLaw:
    i: int
    delta: int
    sigma: Scalar
    rho: Scalar

    def predict(self, count122) -> Scalar:
        return self.sigma * count122 + self.rho


def _nonzero(value: Scalar, what: str, scale: float) -> Scalar:
    if near_zero(value, scale=scale):
        raise DegenerateDualsError(f"{what} vanishes")
    return value


def triple_law(ia: IntersectionArray, duals: Sequence[Scalar], i: int, delta: int) -> TripleLaw:
    if ia.D < 3:
        raise ValueError("triple law needs diameter at least 3")
    if not 1 <= i <= ia.D - 1:
        raise ValueError(f"i must lie in 1..{ia.D - 1}, got {i}")
    if delta not in (1, 2):
        raise ValueError(f"delta must be 1 or 2, got {delta}")
    t = exact_list(duals)
    scale = max(abs(float(x)) for x in t)
    P = ia.p[1][i][i + 1]
    b1 = ia.bi(1)
    d02 = _nonzero(t[0] - t[2], "theta*_0 - theta*_2", scale)
    d01 = _nonzero(t[0] - t[1], "theta*_0 - theta*_1", scale)
    step = _nonzero(t[i + 1] - t[i], f"theta*_{i + 1} - theta*_{i}", scale)
    spread = t[0] + t[1] - t[i] - t[i + 1]

    sigma = P * (t[2] - t[1]) * spread / (b1 * d02 * step)
    rho = P * (t[1] - t[i]) / step
    if delta == 2:
        rho += P * (
            (d01 * (t[1] - t[2]) * (t[2] - t[i + 1]) - (t[1] - t[2]) ** 2 * (t[1] - t[i])) / (d01 * d02 * step)
            + (d01 * spread - ia.ci(i) * d02 * (t[i - 1] - t[i])) / (b1 * d02 * step)
        )
    return TripleLaw(i, delta, sigma, rho)


def classical_triple_law(cp: ClassicalParameters, i: int, delta: int) -> TripleLaw:
    """Same law, written directly in the classical parameters."""
    ia = classical_array(cp)
    if not 1 <= i <= ia.D - 1:
        raise ValueError(f"i must lie in 1..{ia.D - 1}, got {i}")
    if delta not in (1, 2):
        raise ValueError(f"delta must be 1 or 2, got {delta}")
    b = cp.b
    P = ia.p[1][i][i + 1]
    b1 = ia.bi(1)
    ratio = (2 * gaussian_bracket(i + 1, b) - (1 + b**i)) / (1 + b)
    sigma = P * ratio / b1
    rho = -P * b * gaussian_bracket(i - 1, b)
    if delta == 2:
        rho += P * (b / b1) * (ia.ci(i) - ratio)
    return TripleLaw(i, delta, sigma, rho)


def local_122_identity(a1, b1, delta: int, count111) -> Fraction:
    """``[1,2,2]`` from ``[1,1,1]`` for a pair of neighbours of the base vertex."""
    if delta == 1:
        return Fraction(count111) + b1 - a1 + 1
    if delta == 2:
        return Fraction(count111) + b1 - a1 - 1
    raise ValueError(f"delta must be 1 or 2, got {delta}")
