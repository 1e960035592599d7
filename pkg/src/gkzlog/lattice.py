"""Exact integer linear algebra: kernels, rational solving, monoid membership.

Indices are 0-based throughout the library; the JSON layer converts
index sets to 1-based labels.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd
from typing import Iterator, Sequence

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.spatial import ConvexHull, QhullError

from .exceptions import NonPositiveWeight, NotHomogeneous, RankDeficient
from .validation import check_int_matrix, dot

IntVector = tuple[int, ...]


# --------------------------------------------------------------------------
# rational elimination


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q. Returns (matrix, pivot columns)."""
    M = [[Fraction(x) for x in row] for row in rows]
    if not M:
        return M, []
    ncols = len(M[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def solve_exact(M: Sequence[Sequence], rhs: Sequence
                ) -> tuple[tuple[Fraction, ...], list[tuple[Fraction, ...]]] | None:
    """Solve ``M x = rhs`` over Q.

    Returns ``(particular solution, null space basis)``, or ``None`` when the
    system is inconsistent.
    """
    nrows = len(M)
    ncols = len(M[0]) if nrows else 0
    if len(rhs) != nrows:
        raise ValueError("right-hand side length does not match the matrix")
    if ncols == 0:
        return ((), []) if all(Fraction(b) == 0 for b in rhs) else None
    aug = [list(row) + [rhs[i]] for i, row in enumerate(M)]
    R, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = R[i][ncols]
    free = [c for c in range(ncols) if c not in pivots]
    null = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -R[i][f]
        null.append(tuple(vec))
    return tuple(x), null


# --------------------------------------------------------------------------
# integer normal forms


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hnf_rows(rows: Sequence[Sequence[int]]) -> list[IntVector]:
    """Row-style Hermite normal form; zero rows are dropped.

    Pivots are positive and entries above a pivot lie in ``[0, pivot)``.
    """
    M = [list(r) for r in rows]
    if not M:
        return []
    ncols = len(M[0])
    r = 0
    pivots = []
    for c in range(ncols):
        for i in range(r + 1, len(M)):
            if M[i][c] == 0:
                continue
            a, b = M[r][c], M[i][c]
            g, x, y = _xgcd(a, b)
            ra, rb = a // g, b // g
            new_r = [x * p + y * q for p, q in zip(M[r], M[i])]
            new_i = [-rb * p + ra * q for p, q in zip(M[r], M[i])]
            M[r], M[i] = new_r, new_i
        if M[r][c] == 0:
            continue
        if M[r][c] < 0:
            M[r] = [-x for x in M[r]]
        piv = M[r][c]
        for i in range(r):
            q = M[i][c] // piv
            if q:
                M[i] = [a - q * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return [tuple(row) for row in M[:r]]


def _bareiss_det(M: list[list[int]]) -> int:
    n = len(M)
    if n == 0:
        return 1
    M = [row[:] for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def maximal_minor_gcd(rows: Sequence[Sequence[int]]) -> int:
    """gcd of the r x r minors of an r x n integer matrix (r <= n).

    Equals the product of the elementary divisors, so the row lattice is
    saturated in Z^n exactly when this is 1.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return 1
    r, n = len(rows), len(rows[0])
    g = 0
    for cols in combinations(range(n), r):
        g = gcd(g, _bareiss_det([[row[c] for c in cols] for row in rows]))
        if g == 1:
            return 1
    return g


# --------------------------------------------------------------------------
# matrices and lattices


@dataclass(frozen=True)
class AMatrix:
    """Integer d x n matrix of full row rank with a homogeneity certificate.

    ``homogenizer`` is a rational row vector c with ``c . a_j = 1`` for
    every column; construction fails if none exists.
    """

    entries: tuple[IntVector, ...]
    labels: tuple[str, ...] = ()
    homogenizer: tuple[Fraction, ...] = field(default=(), compare=False)

    def __post_init__(self):
        entries = check_int_matrix(self.entries, "A")
        object.__setattr__(self, "entries", entries)
        d, n = len(entries), len(entries[0])
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(j + 1) for j in range(n)))
        elif len(self.labels) != n:
            raise ValueError("need one label per column")
        else:
            object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        if rank(entries) < d:
            raise RankDeficient(f"A has rank {rank(entries)} < d = {d}")
        # c A = (1, ..., 1)  <=>  A^T c^T = 1
        sol = solve_exact([list(col) for col in zip(*entries)], [1] * n)
        if sol is None:
            raise NotHomogeneous("no rational c with c.a_j = 1 for all columns")
        object.__setattr__(self, "homogenizer", sol[0])

    @property
    def d(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries[0])

    def column(self, j: int) -> IntVector:
        return tuple(row[j] for row in self.entries)

    def apply(self, u: Sequence) -> tuple:
        """Return ``A . u``."""
        return tuple(dot(row, u) for row in self.entries)

    def submatrix(self, cols: Sequence[int]) -> list[list[int]]:
        return [[row[c] for c in cols] for row in self.entries]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def positive_part(u: Sequence[int]) -> IntVector:
    return tuple(max(x, 0) for x in u)


def negative_part(u: Sequence[int]) -> IntVector:
    return tuple(max(-x, 0) for x in u)


def kernel_basis(A: AMatrix | Sequence[Sequence[int]]) -> list[IntVector]:
    """Canonical Z-basis of ker_Z(A), returned as the HNF of the basis rows.

    The basis comes from unimodular row reduction of ``[A^T | I]``, hence
    spans the full (saturated) kernel; it is then put in Hermite normal
    form so the output is reproducible.
    """
    if not isinstance(A, AMatrix):
        rows = check_int_matrix(A, "A")
        if rank(rows) < len(rows):
            raise RankDeficient(f"A has rank {rank(rows)} < d = {len(rows)}")
    else:
        rows = A.entries
    d, n = len(rows), len(rows[0])
    aug = [[rows[i][j] for i in range(d)] + [int(j == k) for k in range(n)] for j in range(n)]
    reduced = hnf_rows(aug)
    # hnf_rows drops zero rows; the full reduction keeps n rows since the identity block is unimodular
    kernel = [row[d:] for row in reduced if all(x == 0 for x in row[:d])]
    if len(kernel) != n - rank(rows):
        raise AssertionError("kernel rank mismatch")  # pragma: no cover
    return hnf_rows(kernel)


def is_saturated(basis: Sequence[Sequence[int]]) -> bool:
    return maximal_minor_gcd(basis) == 1


def lattice_points_in_box(basis: Sequence[Sequence[int]], radius: int) -> Iterator[IntVector]:
    """All u in the Z-span of ``basis`` with ``|u|_inf <= radius``."""
    if not basis:
        return iter(())
    n = len(basis[0])
    return lattice_points_in_bounds(basis, [-radius] * n, [radius] * n)


def lattice_points_in_bounds(basis: Sequence[Sequence[int]], lower: Sequence[int],
                             upper: Sequence[int]) -> Iterator[IntVector]:
    """All u in the Z-span of ``basis`` with ``lower <= u <= upper`` coordinatewise.

    Works on the Hermite form of the basis, so coordinates are fixed one
    pivot at a time and out-of-range branches are cut early.
    """
    n = len(lower)
    H = hnf_rows(basis) if basis else []
    if not H:
        if all(lo <= 0 <= hi for lo, hi in zip(lower, upper)):
            yield (0,) * n
        return
    pivots = [next(c for c, x in enumerate(row) if x) for row in H]
    if any(not lower[j] <= 0 <= upper[j] for j in range(pivots[0])):
        return  # columns before the first pivot are identically zero
    # columns fully determined once the first k coefficients are chosen
    determined = [list(range(pivots[k], pivots[k + 1] if k + 1 < len(H) else n))
                  for k in range(len(H))]

    def rec(k: int, partial: list[int]) -> Iterator[IntVector]:
        if k == len(H):
            yield tuple(partial)
            return
        row, p = H[k], pivots[k]
        d = row[p]
        lo = -((partial[p] - lower[p]) // d)
        hi = (upper[p] - partial[p]) // d
        for c in range(lo, hi + 1):
            nxt = [a + c * b for a, b in zip(partial, row)]
            if all(lower[j] <= nxt[j] <= upper[j] for j in determined[k]):
                yield from rec(k + 1, nxt)

    yield from rec(0, [0] * n)


def lattice_coordinates(u: Sequence[int], H: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    """Coefficients c with ``c . H = u`` for a basis ``H`` in Hermite form, or None."""
    r = list(u)
    coeffs = []
    for row in H:
        p = next(c for c, x in enumerate(row) if x)
        if r[p] % row[p]:
            return None
        q = r[p] // row[p]
        coeffs.append(q)
        r = [a - q * b for a, b in zip(r, row)]
    return tuple(coeffs) if not any(r) else None


def find_lattice_point(basis: Sequence[Sequence[int]], lower: Sequence, upper: Sequence,
                       rows: Sequence[tuple[Sequence, object, object]] = ()) -> IntVector | None:
    """Search for u in the Z-span of ``basis`` meeting linear bounds.

    ``lower[j] <= u_j <= upper[j]`` (``None`` means unbounded) and
    ``lb <= a . u <= ub`` for every ``(a, lb, ub)`` in ``rows``. The search is
    an integer program solved in floating point; a returned point has been
    re-checked in exact integer arithmetic, while ``None`` only means that
    no point was found.
    """
    H = hnf_rows(basis) if basis else []
    n = len(lower)
    cons_a, cons_lo, cons_hi = [], [], []
    checks = []
    for j in range(n):
        if lower[j] is not None or upper[j] is not None:
            a = [int(k == j) for k in range(n)]
            checks.append((a, lower[j], upper[j]))
    checks.extend((list(a), lb, ub) for a, lb, ub in rows)
    zero = (0,) * n
    if not H or not checks:
        return zero if _meets(zero, checks) else None
    # variables (c, t): u = c H, and t_j >= |u_j| with sum(t) minimized so
    # that witnesses stay small and numerically clean
    Hf = np.array(H, dtype=float)
    k = len(H)
    for a, lb, ub in checks:
        cons_a.append(np.concatenate([Hf @ np.array([float(x) for x in a]), np.zeros(n)]))
        cons_lo.append(-np.inf if lb is None else float(lb))
        cons_hi.append(np.inf if ub is None else float(ub))
    for j in range(n):
        for sign in (1.0, -1.0):
            row = np.zeros(k + n)
            row[:k] = sign * Hf[:, j]
            row[k + j] = -1.0
            cons_a.append(row)
            cons_lo.append(-np.inf)
            cons_hi.append(0.0)
    cost = np.concatenate([np.zeros(k), np.ones(n)])
    lower_b = np.concatenate([np.full(k, -np.inf), np.zeros(n)])
    res = milp(cost, integrality=np.concatenate([np.ones(k), np.zeros(n)]),
               bounds=Bounds(lower_b, np.inf),
               constraints=LinearConstraint(np.array(cons_a), cons_lo, cons_hi))
    if res.status != 0 or res.x is None:
        return None
    c = [int(round(x)) for x in res.x[:k]]
    u = tuple(sum(ci * row[j] for ci, row in zip(c, H)) for j in range(n))
    return u if _meets(u, checks) else None


def _meets(u, checks) -> bool:
    for a, lb, ub in checks:
        val = dot(a, u)
        if (lb is not None and val < lb) or (ub is not None and val > ub):
            return False
    return True


def cone_facets(generators: Sequence[Sequence[int]]) -> list[IntVector]:
    """Integer vectors f with ``f . g >= 0`` for all generators, one per facet found.

    Facets of the cone spanned by ``generators`` inside its own linear
    span are located with qhull and then each one is confirmed exactly, so
    every returned inequality is valid; a degenerate hull can only make
    the list shorter.
    """
    gens = [tuple(g) for g in generators if any(g)]
    if not gens:
        return []
    H = hnf_rows(gens)
    r, n = len(H), len(gens[0])
    coords = [lattice_coordinates(g, H) for g in gens]
    pivots = [next(c for c, x in enumerate(row) if x) for row in H]
    candidates: list[tuple[Fraction, ...]] = []
    if r == 1:
        if all(c[0] > 0 for c in coords):
            candidates.append((Fraction(1),))
        elif all(c[0] < 0 for c in coords):
            candidates.append((Fraction(-1),))
    else:
        pts = np.array([[0.0] * r] + [[float(x) for x in c] for c in coords])
        try:
            hull = ConvexHull(pts)
        except (QhullError, ValueError):
            hull = None
        if hull is not None:
            scale = float(np.abs(pts).max())
            for eq in hull.equations:
                if abs(eq[-1]) > 1e-9 * scale:
                    continue  # facet not through the apex
                on = [c for c in coords if abs(float(np.dot(eq[:-1], c))) < 1e-7 * scale]
                sol = solve_exact(on, [0] * len(on)) if on else None
                if sol is None or len(sol[1]) != 1:
                    continue
                lam = sol[1][0]
                vals = [dot(lam, c) for c in coords]
                if all(x <= 0 for x in vals):
                    lam, vals = tuple(-x for x in lam), [-x for x in vals]
                if all(x >= 0 for x in vals) and lam not in candidates:
                    candidates.append(lam)
    # c = u_P H_P^{-1} on the pivot columns, so lam . c = f . u with f supported there
    HP = [[H[i][p] for p in pivots] for i in range(r)]
    out = []
    for lam in candidates:
        sol = solve_exact(HP, list(lam))
        f = [Fraction(0)] * n
        for p, x in zip(pivots, sol[0]):
            f[p] = x
        den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in f), 1)
        fi = [int(x * den) for x in f]
        g = reduce(gcd, fi, 0)
        fi = tuple(x // g for x in fi)
        if all(dot(fi, gg) >= 0 for gg in gens) and fi not in out:
            out.append(fi)
    return sorted(out)


class MonoidMembership:
    """Decides ``u in C(w) = N g_1 + ... + N g_m`` for generators with g.w > 0.

    Any representation satisfies ``sum c_i (g_i . w) = u . w`` with
    ``c_i >= 0``, so a depth-first search pruned by the remaining weight is
    exact. Results are memoized per instance.
    """

    def __init__(self, generators: Sequence[Sequence[int]], weight: Sequence):
        self.generators = [tuple(g) for g in generators]
        self.weight = tuple(Fraction(x) for x in weight)
        self.gen_weights = [dot(g, self.weight) for g in self.generators]
        bad = [g for g, gw in zip(self.generators, self.gen_weights) if gw <= 0]
        if bad:
            raise NonPositiveWeight(f"generator {bad[0]} has non-positive weight", generator=bad[0])
        self.min_weight = min(self.gen_weights) if self.generators else None
        n = len(self.generators[0]) if self.generators else 0
        # coordinates where no generator is negative must stay nonnegative
        self._nonneg = [j for j in range(n) if all(g[j] >= 0 for g in self.generators)]
        self._nonpos = [j for j in range(n) if all(g[j] <= 0 for g in self.generators)]
        # exactly checked facet inequalities of the cone spanned by the generators
        self.facets = cone_facets(self.generators)
        self._cache: dict[IntVector, bool] = {}

    def __contains__(self, u: Sequence[int]) -> bool:
        return self._member(tuple(u))

    def _member(self, u: IntVector) -> bool:
        if not any(u):
            return True
        if not self.generators:
            return False
        hit = self._cache.get(u)
        if hit is not None:
            return hit
        uw = dot(u, self.weight)
        if uw < self.min_weight or any(u[j] < 0 for j in self._nonneg) \
                or any(u[j] > 0 for j in self._nonpos) \
                or any(dot(f, u) < 0 for f in self.facets):
            result = False
        else:
            result = False
            for g, gw in zip(self.generators, self.gen_weights):
                if gw <= uw and self._member(tuple(a - b for a, b in zip(u, g))):
                    result = True
                    break
        self._cache[u] = result
        return result

    def elements_array(self, bound) -> np.ndarray:
        """Elements of C(w) of weight ``<= bound`` as rows, sorted by (weight, u)."""
        n = len(self.generators[0]) if self.generators else 0
        if not self.generators:
            return np.zeros((1, n), dtype=np.int64)
        bound = Fraction(bound)
        scale = reduce(lambda a, b: a * b // gcd(a, b),
                       [x.denominator for x in self.weight] + [bound.denominator], 1)
        w_int = np.array([int(x * scale) for x in self.weight], dtype=np.int64)
        cap = int(bound * scale)
        gens = np.array(self.generators, dtype=np.int64)
        gw = gens @ w_int
        steps = int(cap // int(gw.min())) + 1
        reach = steps * int(np.abs(gens).max())
        radix = 2 * reach + 1
        if radix ** n >= 2 ** 62:
            return self._elements_rows(gens, w_int, cap)
        powers = radix ** np.arange(n - 1, -1, -1, dtype=np.int64)

        def encode(rows):
            return (rows + reach) @ powers

        frontier = np.zeros((1, n), dtype=np.int64)
        keys = encode(frontier)
        chunks = [frontier]
        # breadth-first over the number of generators used
        while len(frontier):
            cand = (frontier[:, None, :] + gens[None, :, :]).reshape(-1, n)
            cand = cand[cand @ w_int <= cap]
            ck, idx = np.unique(encode(cand), return_index=True)
            fresh = ~np.isin(ck, keys, assume_unique=True)
            frontier = cand[idx[fresh]]
            keys = np.union1d(keys, ck[fresh])
            chunks.append(frontier)
        pts = np.concatenate(chunks)
        order = np.lexsort(tuple(pts[:, j] for j in range(n - 1, -1, -1)) + (pts @ w_int,))
        return pts[order]

    def _elements_rows(self, gens, w_int, cap) -> np.ndarray:
        n = gens.shape[1]
        seen = np.zeros((1, n), dtype=np.int64)
        frontier = seen
        while len(frontier):
            cand = (frontier[:, None, :] + gens[None, :, :]).reshape(-1, n)
            cand = np.unique(cand[cand @ w_int <= cap], axis=0)
            both = np.concatenate([seen, cand])
            _, idx, cnt = np.unique(both, axis=0, return_index=True, return_counts=True)
            frontier = both[idx[(cnt == 1) & (idx >= len(seen))]]
            seen = np.concatenate([seen, frontier])
        order = np.lexsort(tuple(seen[:, j] for j in range(n - 1, -1, -1)) + (seen @ w_int,))
        return seen[order]

    def elements_up_to(self, bound) -> list[IntVector]:
        """All elements of C(w) of weight ``<= bound``, sorted by (weight, u)."""
        if not self.generators:
            return []
        return [tuple(int(x) for x in row) for row in self.elements_array(bound)]


def in_monoid_Cw(u: Sequence[int], generators: Sequence[Sequence[int]], weight: Sequence) -> bool:
    """True iff ``u`` is a nonnegative integer combination of ``generators``."""
    return tuple(u) in MonoidMembership(generators, weight)


def in_lattice_span(u: Sequence[int], basis: Sequence[Sequence[int]]) -> bool:
    """True iff ``u`` is an integer combination of ``basis``."""
    return lattice_coordinates(u, hnf_rows(basis)) is not None


def gcd_list(values) -> int:
    return reduce(gcd, values, 0)
