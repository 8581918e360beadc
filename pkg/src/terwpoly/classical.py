"""Classical parameters ``(D, b, alpha, beta)`` and pseudo-partition arrays."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Number, as_fraction
from .drg_core import (
    DualEigenvalues,
    InfeasibleArrayError,
    IntersectionArray,
    QPolyOrdering,
    Spectrum,
    dual_eigenvalues,
    near_zero,
    q_polynomial_orderings,
    spectrum,
    validate,
)


class InfeasibleParametersError(ValueError):
    pass


@dataclass(frozen=True)
class ClassicalParameters:
    D: int
    b: Fraction
    alpha: Fraction
    beta: Fraction

    @classmethod
    def of(cls, D: int, b: Number, alpha: Number, beta: Number) -> "ClassicalParameters":
        return cls(int(D), as_fraction(b), as_fraction(alpha), as_fraction(beta))

    def __str__(self):
        return f"({self.D},{self.b},{self.alpha},{self.beta})"


def gaussian_bracket(j: int, b: Number) -> Fraction:
    """``[j 1] = 1 + b + ... + b^(j-1)``; equals j when b = 1."""
    b = as_fraction(b)
    return sum((b**e for e in range(j)), Fraction(0))


def classical_array(cp: ClassicalParameters) -> IntersectionArray:
    D, b, al, be = cp.D, cp.b, cp.alpha, cp.beta
    top = gaussian_bracket(D, b)
    cs = [gaussian_bracket(i, b) * (1 + al * gaussian_bracket(i - 1, b)) for i in range(1, D + 1)]
    bs = [(top - gaussian_bracket(i, b)) * (be - al * gaussian_bracket(i, b)) for i in range(D)]
    bad = [f"b_{i} = {x}" for i, x in enumerate(bs) if x <= 0]
    bad += [f"c_{i} = {x}" for i, x in enumerate(cs, start=1) if x <= 0]
    if bad:
        raise InfeasibleParametersError(f"classical parameters {cp} give non-positive entries: " + ", ".join(bad))
    try:
        return validate(bs + cs, D)
    except InfeasibleArrayError as exc:
        raise InfeasibleParametersError(f"classical parameters {cp}: {exc}") from None


def classical_dual_sequence(cp: ClassicalParameters) -> tuple[Fraction, ...]:
    """A normalized dual sequence with ``theta*_i - theta*_0 = -[i 1] b^(1-i)``.

    Every formula built on dual eigenvalues is invariant under affine
    changes of them, so this stands in for the true duals of the
    classical Q-polynomial structure.
    """
    if cp.b == 0:
        raise InfeasibleParametersError("b = 0")
    return tuple(-gaussian_bracket(i, cp.b) * cp.b ** (1 - i) for i in range(cp.D + 1))


def dual_relation_check(cp: ClassicalParameters, duals) -> bool:
    """Does ``theta*_i - theta*_0 = (theta*_1 - theta*_0) [i 1] b^(1-i)`` hold for all i?"""
    ts = list(duals)
    if len(ts) != cp.D + 1:
        return False
    step = ts[1] - ts[0]
    scale = max(abs(float(t)) for t in ts)
    for i, t in enumerate(ts):
        rhs = step * gaussian_bracket(i, cp.b) * cp.b ** (1 - i)
        if not near_zero((t - ts[0]) - rhs, scale=scale):
            return False
    return True


def classical_ordering(
    cp: ClassicalParameters, ia: IntersectionArray | None = None, spec: Spectrum | None = None
) -> tuple[QPolyOrdering, DualEigenvalues]:
    """The Q-polynomial ordering whose duals satisfy the classical relation."""
    ia = ia or classical_array(cp)
    spec = spec or spectrum(ia)
    for order in q_polynomial_orderings(ia, spec):
        duals = dual_eigenvalues(ia, spec, order)
        if dual_relation_check(cp, duals.theta_star):
            return order, duals
    raise InfeasibleParametersError(f"no Q-polynomial ordering of {ia} matches classical parameters {cp}")


class Imprimitivity(enum.Flag):
    PRIMITIVE = 0
    BIPARTITE = enum.auto()
    ANTIPODAL = enum.auto()


def imprimitivity(cp: ClassicalParameters) -> Imprimitivity:
    flags = Imprimitivity.PRIMITIVE
    if cp.alpha == 0 and cp.beta == 1:
        flags |= Imprimitivity.BIPARTITE
    if cp.b == 1 and cp.beta == 1 + cp.alpha * (cp.D - 1):
        flags |= Imprimitivity.ANTIPODAL
    return flags


def imprimitivity_names(flags: Imprimitivity) -> list[str]:
    names = [f.name.lower() for f in (Imprimitivity.BIPARTITE, Imprimitivity.ANTIPODAL) if f in flags]
    return names or ["primitive"]


@dataclass(frozen=True)
class PseudoPartitionParameters:
    alpha: int
    Dprime: int
    gamma: int

    @property
    def cover_diameter(self) -> int:
        return 2 * self.Dprime + (1 if self.gamma == 1 else 0)


def pseudo_partition_array(pp: PseudoPartitionParameters) -> IntersectionArray:
    """Array of the folded graph of an antipodal classical graph with b = 1."""
    if pp.alpha not in (0, 1, 2):
        raise ValueError(f"alpha must be 0, 1 or 2, got {pp.alpha}")
    if pp.gamma not in (1, 2):
        raise ValueError(f"gamma must be 1 or 2, got {pp.gamma}")
    if pp.Dprime < 3:
        raise ValueError(f"folded diameter must be at least 3, got {pp.Dprime}")
    al, Dp, D = pp.alpha, pp.Dprime, pp.cover_diameter
    bs = [(D - i) * (1 + al * (D - 1 - i)) for i in range(Dp)]
    cs = [i * (1 + al * (i - 1)) for i in range(1, Dp)]
    cs.append(pp.gamma * Dp * (1 + al * (Dp - 1)))
    return validate(bs + cs, Dp)


def classical_triple_root_list(cp: ClassicalParameters) -> list[Fraction]:
    """Closed-form roots of the Terwilliger polynomial, sorted ascending."""
    D, b, al, be = cp.D, cp.b, cp.alpha, cp.beta
    if b == 0:
        raise InfeasibleParametersError("b = 0")
    if b == 1:
        fourth = al * (D - 1) - 1
    else:
        fourth = al * b * (b ** (D - 1) - 1) / (b - 1) - 1
    return sorted([be - al - 1, Fraction(-1), -b - 1, fourth])


def known_classical_families(N_max: int = 14) -> dict[str, ClassicalParameters]:
    """Classical parameters of Johnson, Hamming and halved cube graphs with D >= 3."""
    out = {}
    for n in range(6, N_max + 1):
        for d in range(3, n // 2 + 1):
            out[f"J({n},{d})"] = ClassicalParameters.of(d, 1, 1, n - d)
    for n in range(3, N_max + 1):
        out[f"H({n},2)"] = ClassicalParameters.of(n, 1, 0, 1)
    for n in range(6, N_max + 1):
        out[f"1/2H({n},2)"] = ClassicalParameters.of(n // 2, 1, 2, 2 * ((n + 1) // 2) - 1)
    return out

