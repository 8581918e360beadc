"""Concrete graphs and brute-force oracles.

Builders return a :class:`ConcreteGraph` with a sparse boolean adjacency
matrix.  The oracles recompute intersection arrays, local spectra and
triple intersection numbers directly from distances, independently of
the formula modules they are used to check.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Hashable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .drg_core import (
    IntersectionArray,
    QPolyOrdering,
    dual_eigenvalues,
    q_polynomial_orderings,
    spectrum,
    validate,
)
from .terwilliger import BOUNDARY, VIOLATED, admissible_check, terwilliger_polynomial
from .triples import triple_law

MAX_VERTICES = 20000
EIGEN_TOLERANCE = 1e-9
# rational eigenvalues of integer matrices are integers; snap to them when this close
INTEGER_SNAP = 1e-6


class GraphSizeError(ValueError):
    pass


class GraphError(ValueError):
    """Malformed graph: loops, asymmetry or disconnection."""


class NotDistanceRegularError(ValueError):
    def __init__(self, message: str, witness: tuple[int, int]):
        super().__init__(f"{message} (witness pair {witness})")
        self.witness = witness


@dataclass
class ConcreteGraph:
    name: str
    labels: list[Hashable]
    adjacency: sp.csr_matrix
    fold_mask: int | None = None

    def __post_init__(self):
        A = self.adjacency
        if A.shape != (len(self.labels), len(self.labels)):
            raise GraphError(f"{self.name}: adjacency shape {A.shape} does not match {len(self.labels)} labels")
        if A.diagonal().any():
            raise GraphError(f"{self.name}: loops present")
        if (A != A.T).nnz:
            raise GraphError(f"{self.name}: adjacency not symmetric")

    @property
    def n(self) -> int:
        return len(self.labels)

    def neighbors(self, x: int) -> np.ndarray:
        A = self.adjacency
        return A.indices[A.indptr[x] : A.indptr[x + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.adjacency.indptr)

    def edges(self) -> list[tuple[int, int]]:
        coo = sp.triu(self.adjacency, k=1).tocoo()
        return sorted(zip(coo.row.tolist(), coo.col.tolist()))


def _check_size(n: int, max_vertices: int, what: str) -> None:
    if n > max_vertices:
        raise GraphSizeError(f"{what} has {n} vertices, above the cap of {max_vertices}")


def _from_neighbor_rule(name, labels, neighbors_of, fold_mask=None) -> ConcreteGraph:
    index = {lab: i for i, lab in enumerate(labels)}
    rows, cols = [], []
    for i, lab in enumerate(labels):
        for nb in neighbors_of(lab):
            rows.append(i)
            cols.append(index[nb])
    n = len(labels)
    A = sp.csr_matrix((np.ones(len(rows), dtype=bool), (rows, cols)), shape=(n, n))
    A.sum_duplicates()
    A.sort_indices()
    return ConcreteGraph(name, list(labels), A, fold_mask)


def _from_pair_rule(name, labels, adjacent) -> ConcreteGraph:
    n = len(labels)
    rows, cols = [], []
    for i, j in itertools.combinations(range(n), 2):
        if adjacent(labels[i], labels[j]):
            rows += [i, j]
            cols += [j, i]
    A = sp.csr_matrix((np.ones(len(rows), dtype=bool), (rows, cols)), shape=(n, n))
    A.sort_indices()
    return ConcreteGraph(name, list(labels), A)


def _subsets(N: int, d: int) -> list[int]:
    return sorted(sum(1 << i for i in c) for c in itertools.combinations(range(N), d))


def johnson(N: int, D: int, max_vertices: int = MAX_VERTICES) -> ConcreteGraph:
    """D-subsets of an N-set as bitmasks, adjacent when they share D - 1 elements."""
    if not 1 <= D < N:
        raise ValueError(f"need 1 <= D < N, got N = {N}, D = {D}")
    _check_size(comb(N, D), max_vertices, f"J({N},{D})")
    full = (1 << N) - 1

    def nbrs(s):
        ins = [i for i in range(N) if s >> i & 1]
        outs = [i for i in range(N) if not s >> i & 1]
        return [s ^ (1 << i) ^ (1 << j) for i in ins for j in outs]

    return _from_neighbor_rule(f"J({N},{D})", _subsets(N, D), nbrs, full if N == 2 * D else None)


def cube(N: int, max_vertices: int = MAX_VERTICES) -> ConcreteGraph:
    _check_size(2**N, max_vertices, f"H({N},2)")
    return _from_neighbor_rule(
        f"H({N},2)", list(range(2**N)), lambda s: [s ^ (1 << i) for i in range(N)], (1 << N) - 1
    )


def halved_cube(N: int, max_vertices: int = MAX_VERTICES) -> ConcreteGraph:
    """Even-weight words of length N, adjacent at Hamming distance 2."""
    _check_size(2 ** (N - 1), max_vertices, f"1/2H({N},2)")
    labels = [s for s in range(2**N) if bin(s).count("1") % 2 == 0]
    flips = [(1 << i) | (1 << j) for i, j in itertools.combinations(range(N), 2)]
    fold = (1 << N) - 1 if N % 2 == 0 else None
    return _from_neighbor_rule(f"1/2H({N},2)", labels, lambda s: [s ^ f for f in flips], fold)


def folded(g: ConcreteGraph, max_vertices: int = MAX_VERTICES) -> ConcreteGraph:
    """Quotient by the antipodal map ``s -> s ^ fold_mask``.

    A class is labelled by its smaller member; two classes are adjacent
    when some members are.
    """
    if g.fold_mask is None:
        raise ValueError(f"{g.name} has no antipodal complement map")
    m = g.fold_mask
    index = {lab: i for i, lab in enumerate(g.labels)}
    labels = sorted({min(s, s ^ m) for s in g.labels})
    _check_size(len(labels), max_vertices, f"folded {g.name}")

    def nbrs(s):
        out = set()
        for rep in (s, s ^ m):
            for j in g.neighbors(index[rep]):
                u = g.labels[j]
                out.add(min(u, u ^ m))
        out.discard(s)
        return sorted(out)

    return _from_neighbor_rule(f"folded {g.name}", labels, nbrs)


def triangular(m: int) -> ConcreteGraph:
    g = johnson(m, 2)
    g.name = f"T({m})"
    g.fold_mask = None
    return g


def grid(m: int) -> ConcreteGraph:
    labels = [(i, j) for i in range(m) for j in range(m)]
    return _from_pair_rule(f"{m}x{m} grid", labels, lambda a, b: (a[0] == b[0]) != (a[1] == b[1]))


def petersen() -> ConcreteGraph:
    """Kneser graph on the 2-subsets of a 5-set."""
    return _from_pair_rule("Petersen", _subsets(5, 2), lambda a, b: a & b == 0)


def clebsch() -> ConcreteGraph:
    """The (16,10,6,6) graph: 4-bit words at Hamming distance 2 or 3."""
    return _from_pair_rule("Clebsch", list(range(16)), lambda a, b: bin(a ^ b).count("1") in (2, 3))


def _lines() -> list[tuple]:
    return (
        [("a", i) for i in range(6)]
        + [("b", i) for i in range(6)]
        + [("c", i, j) for i, j in itertools.combinations(range(6), 2)]
    )


def _lines_meet(p, q) -> bool:
    if p[0] > q[0]:
        p, q = q, p
    kinds = p[0] + q[0]
    if kinds in ("aa", "bb"):
        return False
    if kinds == "ab":
        return p[1] != q[1]
    if kinds in ("ac", "bc"):
        return p[1] in q[1:]
    return not set(p[1:]) & set(q[1:])


def schlafli() -> ConcreteGraph:
    """The (27,16,10,8) graph: the 27 lines on a cubic surface, adjacent when skew."""
    return _from_pair_rule("Schlafli", _lines(), lambda p, q: not _lines_meet(p, q))


FAMILIES = ("johnson", "cube", "halved-cube", "folded-johnson", "folded-cube", "folded-halved-cube",
            "triangular", "grid", "petersen", "clebsch", "schlafli")


def build(family: str, params: Sequence[int] = (), max_vertices: int = MAX_VERTICES) -> ConcreteGraph:
    params = [int(x) for x in params]
    fam = family.replace("_", "-").lower()
    builders = {
        "johnson": lambda: johnson(*params, max_vertices=max_vertices),
        "cube": lambda: cube(*params, max_vertices=max_vertices),
        "halved-cube": lambda: halved_cube(*params, max_vertices=max_vertices),
        "folded-johnson": lambda: folded(johnson(2 * params[0], params[0], max_vertices=2 * max_vertices), max_vertices),
        "folded-cube": lambda: folded(cube(*params, max_vertices=2 * max_vertices), max_vertices),
        "folded-halved-cube": lambda: folded(halved_cube(*params, max_vertices=2 * max_vertices), max_vertices),
        "triangular": lambda: triangular(*params),
        "grid": lambda: grid(*params),
        "petersen": petersen,
        "clebsch": clebsch,
        "schlafli": schlafli,
    }
    if fam not in builders:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    try:
        return builders[fam]()
    except (TypeError, IndexError):
        raise ValueError(f"bad parameters {params} for {family}") from None


def distance_matrix(g: ConcreteGraph, chunk: int = 512) -> np.ndarray:
    """All-pairs distances as uint8, by breadth-first search run level by
    level for a block of sources at once (one sparse product per level).
    """
    ncomp, _ = connected_components(g.adjacency, directed=False)
    if ncomp != 1:
        raise GraphError(f"{g.name} is disconnected ({ncomp} components)")
    n = g.n
    A = g.adjacency.astype(np.float32)
    out = np.zeros((n, n), dtype=np.uint8)
    for start in range(0, n, chunk):
        rows = np.arange(start, min(n, start + chunk))
        seen = np.zeros((len(rows), n), dtype=bool)
        seen[np.arange(len(rows)), rows] = True
        frontier = seen.astype(np.float32)
        level = 0
        while True:
            level += 1
            if level > 255:
                raise GraphError(f"{g.name} has diameter above 255")
            reach = (A @ frontier.T).T > 0
            new = reach & ~seen
            if not new.any():
                break
            out[rows] = np.where(new, level, out[rows])
            seen |= new
            frontier = new.astype(np.float32)
    return out


def check_distance_regular(g: ConcreteGraph, dist: np.ndarray | None = None, chunk: int = 1024) -> IntersectionArray:
    """Recover ``{b; c}`` by counting, for every ordered pair at distance i,
    neighbours of the second vertex at distance i - 1, i, i + 1 from the first.
    """
    dist = distance_matrix(g) if dist is None else dist
    D = int(dist.max())
    n = g.n
    A = g.adjacency.astype(np.int32)
    found: dict[tuple[str, int], int] = {}

    def record(kind, i, values, mask, rows):
        if not mask.any():
            return
        vals = values[mask]
        lo, hi = int(vals.min()), int(vals.max())
        key = (kind, i)
        ref = found.setdefault(key, lo)
        if lo != hi or lo != ref:
            bad = hi if lo == ref else lo
            r, c = np.argwhere(mask & (values == bad))[0]
            raise NotDistanceRegularError(f"{kind}_{i} not constant on {g.name}", (int(rows[r]), int(c)))

    for start in range(0, n, chunk):
        rows = np.arange(start, min(n, start + chunk))
        block = dist[rows]
        for j in range(D + 1):
            # counts[x, u] = |Gamma(u) cap Gamma_j(x)|
            counts = (A @ (block == j).T.astype(np.int32)).T
            record("c", j + 1, counts, block == j + 1, rows)
            record("a", j, counts, block == j, rows)
            if j >= 1:
                record("b", j - 1, counts, block == j - 1, rows)
    bs = [found[("b", i)] for i in range(D)]
    cs = [found[("c", i)] for i in range(1, D + 1)]
    return validate(bs + cs, D)


def local_graph(g: ConcreteGraph, x: int) -> ConcreteGraph:
    nb = g.neighbors(x)
    sub = g.adjacency[nb][:, nb].tocsr()
    return ConcreteGraph(f"local graph of {g.name} at {x}", [g.labels[i] for i in nb], sub)


def local_spectrum(g: ConcreteGraph, x: int) -> np.ndarray:
    """Eigenvalues of the local graph at x, ascending."""
    nb = g.neighbors(x)
    M = g.adjacency[nb][:, nb].toarray().astype(float)
    return np.linalg.eigvalsh(M)


def non_principal(eigs: np.ndarray, degree: int, tol: float = EIGEN_TOLERANCE) -> np.ndarray:
    """Drop one copy of the valency: the eigenvalue carried by the all-ones vector."""
    j = int(np.argmin(np.abs(eigs - degree)))
    if abs(eigs[j] - degree) > tol * max(1, degree):
        raise GraphError(f"local graph is not {degree}-regular")
    return np.delete(eigs, j)


def _snap(eta: float):
    r = round(eta)
    return Fraction(r) if abs(eta - r) < INTEGER_SNAP else float(eta)


def triple_count(dist: np.ndarray, x: int, y: int, z: int, i: int, j: int, k: int) -> int:
    return int(np.count_nonzero((dist[x] == i) & (dist[y] == j) & (dist[z] == k)))


@dataclass
class SpearReport:
    ordering: tuple[int, ...] | None
    passed: bool
    checked: dict[tuple[int, int], int] = field(default_factory=dict)
    witness: tuple | None = None

    def summary(self) -> str:
        stats = ", ".join(f"(i={i},delta={d}): {c}" for (i, d), c in sorted(self.checked.items()))
        state = "PASS" if self.passed else f"FAIL at {self.witness}"
        return f"triple law {state}; triples checked {stats}"


@dataclass
class TerwilligerReport:
    ordering: tuple[int, ...] | None
    passed: bool
    checked: int = 0
    zeros: list = field(default_factory=list)
    minimum: float | None = None
    witness: tuple | None = None

    def summary(self) -> str:
        state = "PASS" if self.passed else f"FAIL at {self.witness}"
        zs = ", ".join(str(z) for z in self.zeros)
        return f"local eigenvalue bound {state}; {self.checked} eigenvalues, zeros at {{{zs}}}"


def _resolve_duals(g, dist, ordering, duals, ia):
    ia = ia or check_distance_regular(g, dist)
    if duals is not None:
        return ia, None, list(duals)
    spec = spectrum(ia)
    if ordering is None:
        orders = q_polynomial_orderings(ia, spec)
        if not orders:
            raise ValueError(f"{g.name} is not Q-polynomial")
        ordering = orders[0]
    if isinstance(ordering, QPolyOrdering):
        seq = ordering.sequence
    else:
        seq = tuple(ordering)
    return ia, seq, list(dual_eigenvalues(ia, spec, QPolyOrdering(seq)).theta_star)


def verify_spear(
    g: ConcreteGraph,
    ordering: QPolyOrdering | Sequence[int] | None = None,
    *,
    duals: Sequence | None = None,
    dist: np.ndarray | None = None,
    ia: IntersectionArray | None = None,
) -> SpearReport:
    """Check ``[i, i+1, i+1] = sigma_i [1,2,2] + rho_{i,delta}`` for every base
    vertex x, ordered pair of distinct neighbours (y, z) and 1 <= i <= D - 1.

    ``duals`` overrides the dual eigenvalues of ``ordering``.
    """
    dist = distance_matrix(g) if dist is None else dist
    ia, seq, ts = _resolve_duals(g, dist, ordering, duals, ia)
    D = ia.D
    laws = {(i, d): triple_law(ia, ts, i, d) for i in range(1, D) for d in (1, 2)}
    rep = SpearReport(seq, True)
    for x in range(g.n):
        nb = g.neighbors(x)
        k = len(nb)
        off = ~np.eye(k, dtype=bool)
        delta = dist[np.ix_(nb, nb)]
        counts = {}
        for i in range(1, D):
            shell = np.flatnonzero(dist[x] == i)
            M = (dist[np.ix_(nb, shell)] == i + 1).astype(np.int32)
            counts[i] = M @ M.T
        base = counts[1]
        for i in range(1, D):
            for d in (1, 2):
                mask = off & (delta == d)
                if not mask.any():
                    continue
                pairs = np.unique(np.stack([base[mask], counts[i][mask]], axis=1), axis=0)
                law = laws[(i, d)]
                for c122, cii in pairs:
                    if law.predict(int(c122)) != int(cii):
                        r, c = np.argwhere(mask & (base == c122) & (counts[i] == cii))[0]
                        rep.passed = False
                        rep.witness = (x, int(nb[r]), int(nb[c]), i, int(cii), law.predict(int(c122)))
                        return rep
                rep.checked[(i, d)] = rep.checked.get((i, d), 0) + int(mask.sum())
    return rep


def verify_terwilliger(
    g: ConcreteGraph,
    ordering: QPolyOrdering | Sequence[int] | None = None,
    *,
    duals: Sequence | None = None,
    dist: np.ndarray | None = None,
    ia: IntersectionArray | None = None,
    tolerance: float = EIGEN_TOLERANCE,
) -> TerwilligerReport:
    """Check ``T(eta) >= -tolerance`` at every non-principal local eigenvalue."""
    dist = distance_matrix(g) if dist is None else dist
    ia, seq, ts = _resolve_duals(g, dist, ordering, duals, ia)
    T = terwilliger_polynomial(ia, ts).T
    a1 = int(ia.ai(1))
    rep = TerwilligerReport(seq, True)
    seen: dict = {}
    zeros = set()
    for x in range(g.n):
        for eta in non_principal(local_spectrum(g, x), a1):
            key = _snap(eta)
            rep.checked += 1
            if key not in seen:
                seen[key] = (admissible_check(T, key, tolerance), T(key))
            verdict, value = seen[key]
            if verdict == BOUNDARY:
                zeros.add(key)
            if verdict == VIOLATED:
                rep.passed = False
                rep.witness = (x, key, value)
                break
        if not rep.passed:
            break
    values = [float(v) for _, v in seen.values()]
    rep.minimum = min(values) if values else None
    rep.zeros = sorted(zeros, key=float)
    return rep


def export_edges(g: ConcreteGraph) -> str:
    """Edge list, one ``u v`` pair per line, 0-indexed."""
    return "".join(f"{u} {v}\n" for u, v in g.edges())
