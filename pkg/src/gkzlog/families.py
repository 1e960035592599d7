"""Built-in problem families and worked fixtures with their known answers."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .exceptions import UnknownFixture
from .lattice import AMatrix
from .validation import rational_list


@dataclass
class FamilySpec:
    """A matrix, weight, parameter, and perturbation directions, plus known answers.

    ``expected`` uses 1-based column indices and lists exponents of
    monomials in the perturbation variables.
    """

    name: str
    params: dict
    A: AMatrix
    w: tuple
    beta: tuple
    B: list[tuple[int, ...]]
    v: tuple | None = None
    expected: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "family": self.name,
            "params": dict(self.params),
            "matrix": self.A.tolist(),
            "labels": list(self.A.labels) if self.A.labels else None,
            "weight": rational_list(self.w),
            "beta": rational_list(self.beta),
            "B": [list(b) for b in self.B],
            "v": None if self.v is None else rational_list(self.v),
            "expected": self.expected,
        }


# --------------------------------------------------------------------------
# Aomoto-Gel'fand systems


def aomoto_columns(m: int, l: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, m + 1) for j in range(m + 1, m + l + 1)]


def aomoto_weight(m: int, l: int) -> dict[tuple[int, int], int]:
    """A staircase weight: larger on cells further north-west.

    ``K ((m+1-i) + (m+l+1-j)) + i j`` with ``K = m + l + 1``; the product
    term breaks the ties an additive weight leaves on 2x2 minors.
    """
    K = m + l + 1
    return {(i, j): K * ((m + 1 - i) + (m + l + 1 - j)) + i * j for i, j in aomoto_columns(m, l)}


def is_staircase_weight(w: dict[tuple[int, int], int]) -> bool:
    """``w_(i,j) > w_(p,q)`` whenever ``(i,j) != (p,q)``, ``i <= p`` and ``j <= q``."""
    cells = list(w)
    return all(w[a] > w[b] for a in cells for b in cells
               if a != b and a[0] <= b[0] and a[1] <= b[1])


def minor_vector(cols, i, j, p, q) -> tuple[int, ...]:
    """``E_(i,j) + E_(p,q) - E_(i,q) - E_(p,j)`` in column coordinates."""
    pos = {c: k for k, c in enumerate(cols)}
    u = [0] * len(cols)
    u[pos[(i, j)]] += 1
    u[pos[(p, q)]] += 1
    u[pos[(i, q)]] -= 1
    u[pos[(p, j)]] -= 1
    return tuple(u)


def make_aomoto(m: int, l: int) -> FamilySpec:
    """Columns ``e_i + e_j`` for ``1 <= i <= m < j <= m + l``, ordered by (i, j).

    The last coordinate row is dropped: the rows sum to twice the row of
    ones, so the full incidence matrix has rank ``m + l - 1``.
    """
    if m < 2 or l < 2:
        raise ValueError("Aomoto-Gel'fand systems need m, l >= 2")
    cols = aomoto_columns(m, l)
    rows = [[int(c[0] == r or c[1] == r) for c in cols] for r in range(1, m + l)]
    A = AMatrix(rows, labels=[f"({i},{j})" for i, j in cols])
    wmap = aomoto_weight(m, l)
    if not is_staircase_weight(wmap):  # pragma: no cover - guarded by construction
        raise AssertionError("constructed weight is not a staircase weight")
    w = tuple(wmap[c] for c in cols)
    s_index = [(i, j) for i in range(1, m) for j in range(m + 1, m + l)]
    B = [minor_vector(cols, i, j, i + 1, j + 1) for i, j in s_index]
    s_pos = {c: k for k, c in enumerate(s_index)}

    def mono(*cells):
        e = [0] * len(s_index)
        for c in cells:
            e[s_pos[c]] += 1
        return e

    pb = [mono(a, b) for a in s_index for b in s_index
          if a <= b and a[0] <= b[0] and a[1] <= b[1]]
    perp = []
    for r in range(0, min(m, l)):
        for chain in combinations(s_index, r):
            if all(x[0] < y[0] and x[1] > y[1] for x, y in zip(chain, chain[1:])):
                perp.append(mono(*chain))
    expected = {
        "dim": comb(m + l - 2, m - 1),
        "standard_pairs_anchor0": comb(m + l - 2, m - 1),
        "v": [0] * len(cols),
        "P_B_monomials": sorted(pb),
        "PB_perp_monomials": sorted(perp),
        "s_index": [list(c) for c in s_index],
        "groebner_size": comb(m, 2) * comb(l, 2),
    }
    return FamilySpec("aomoto", {"m": m, "l": l}, A, w, (0,) * A.d, B, (0,) * len(cols), expected)


# --------------------------------------------------------------------------
# Lauricella F_C


def make_fc(m: int) -> FamilySpec:
    """Columns ``e_0 + e_i`` then ``e_0 - e_i`` for i = 1..m; weight ``w_(+-i) = m - i``."""
    if m < 2:
        raise ValueError("F_C needs m >= 2")
    n = 2 * m
    rows = [[1] * n]
    for i in range(1, m + 1):
        rows.append([1 if k == i - 1 else -1 if k == m + i - 1 else 0 for k in range(n)])
    labels = [str(i) for i in range(1, m + 1)] + [str(-i) for i in range(1, m + 1)]
    A = AMatrix(rows, labels=labels)
    w = tuple([m - i for i in range(1, m + 1)] * 2)
    sums = [w[i - 1] + w[m + i - 1] for i in range(1, m + 1)]
    if any(a <= b for a, b in zip(sums, sums[1:])):  # pragma: no cover
        raise AssertionError("F_C weight must have decreasing w_i + w_-i")
    B = []
    for i in range(1, m):
        g = [0] * n
        g[i - 1] += 1
        g[m + i - 1] += 1
        g[m - 1] -= 1
        g[2 * m - 1] -= 1
        B.append(tuple(g))
    h = m - 1
    squares = [[2 if k == i else 0 for k in range(h)] for i in range(h)]
    perp = sorted([[int(k in I) for k in range(h)]
                   for r in range(h + 1) for I in combinations(range(h), r)])
    expected = {
        "dim": 2 ** (m - 1),
        "v": [0] * n,
        "P_B_monomials": squares,
        "PB_perp_monomials": perp,
        "groebner": [list(b) for b in B],
    }
    return FamilySpec("fc", {"m": m}, A, w, (0,) * A.d, B, (0,) * n, expected)


# --------------------------------------------------------------------------
# worked fixtures


def _sst352() -> FamilySpec:
    A = AMatrix([[1, 1, 1, 1, 1], [-1, 1, 1, -1, 0], [-1, -1, 1, 1, 0]])
    B = [(1, 0, 1, 0, -2), (0, 1, 0, 1, -2)]
    expected = {
        "groebner": [[1, 0, 1, 0, -2], [0, 1, 0, 1, -2]],
        "exponents": [[0, 0, 0, 0, 1]],
        "N": [[], [5]],
        "Nc": [[1, 3], [2, 4], [1, 3, 5], [2, 4, 5], [1, 2, 3, 4]],
        "K_N": [],
        "P_N_monomials": [[2, 0], [0, 2]],
        "PN_perp_monomials": [[0, 0], [1, 0], [0, 1], [1, 1]],
        "dim_PN_perp": 4,
        "dim_Qv_perp": 4,
        "holonomic_rank": 4,
        # with B = {g1} only
        "single_direction": {"B": [[1, 0, 1, 0, -2]], "N": [[], [5]],
                             "Nc": [[1, 3], [1, 3, 5]], "P_N_monomials": [[2]],
                             "dim_PN_perp": 2},
    }
    return FamilySpec("sst352", {}, A, (1, 1, 1, 1, 0), (1, 0, 0), B, (0, 0, 0, 0, 1), expected)


def _noncm() -> FamilySpec:
    A = AMatrix([[1, 1, 1, 1], [0, 1, 3, 4]])
    B = [(1, -2, 2, -1), (0, 1, -3, 2)]
    expected = {
        "groebner": [[1, -2, 2, -1], [0, 1, -3, 2], [2, -3, 1, 0], [1, -1, -1, 1]],
        "G_sets": [[1], [4], [1], [1]],
        "N": [[2], [3], [2, 3]],
        "Nc": [[1, 2], [1, 3], [1, 4], [2, 4], [1, 2, 4], [1, 3, 4]],
        "K_N": [],
        "P_N_monomials": [[2, 0], [1, 1], [0, 2]],
        "P_B_monomials": [[1, 0], [0, 1]],
        "dim_PN_perp": 3,
        "dim_PB_perp": 1,
        # m(s) = (-2 s1 + s2)(2 s1 - 3 s2)
        "m_s": {"2,0": "-4", "1,1": "8", "0,2": "-3"},
        "m_in_PN": True,
        "exponent_test": "inconclusive",
    }
    return FamilySpec("noncm", {}, A, (3, 1, 0, 0), (-2, -1), B, (0, -2, -1, 1), expected)


def _sst363() -> FamilySpec:
    A = AMatrix([[1] * 9, [0, 1, 2] * 3, [0, 0, 0, 1, 1, 1, 2, 2, 2]])
    B = [(0, 1, -1, 0, -1, 1, 0, 0, 0), (0, 0, 0, 1, -1, 0, -1, 1, 0),
         (0, 0, 0, 1, -2, 1, 0, 0, 0), (0, 1, 0, 0, -2, 0, 0, 1, 0),
         (1, -1, 0, -1, 1, 0, 0, 0, 0), (0, 0, 0, 0, 1, -1, 0, -1, 1)]
    h = 6

    def e(*idx):
        out = [0] * h
        for i in idx:
            out[i - 1] += 1
        return out

    expected = {
        "groebner_size": 20,
        # G-sets of the six lattice vectors in B, in that order
        "G_sets": [[2, 6], [4, 8], [4, 6], [2, 8], [1], [9]],
        "P_B_lex": [
            {"lead": e(1, 2)}, {"lead": e(1, 3)}, {"lead": e(1, 4)}, {"lead": e(2, 3)},
            {"lead": e(2, 4)}, {"lead": e(3, 3)}, {"lead": e(4, 4)},
            {"lead": e(1, 1), "tail": e(3, 4)}, {"lead": e(2, 2), "tail": e(3, 4)},
            {"lead": e(5)}, {"lead": e(6)},
        ],
        "dim_Qv_perp": 6,
        # q_(e3+e4) = d3 d4 - 1/2 d1^2 - 1/2 d2^2
        "q_e3e4": {"0,0,1,1,0,0": "1", "2,0,0,0,0,0": "-1/2", "0,2,0,0,0,0": "-1/2"},
    }
    return FamilySpec("sst363", {}, A, (2, 0, 0, 0, -1, 0, 0, 0, 2), (1, 1, 1), B,
                      (0, 0, 0, 0, 1, 0, 0, 0, 0), expected)


FIXTURES = {"sst352": _sst352, "noncm": _noncm, "sst363": _sst363}


def fixture(name: str) -> FamilySpec:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise UnknownFixture(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}",
                             name=name) from None


def family(name: str, m: int | None = None, l: int | None = None) -> FamilySpec:
    """Dispatch on a family or fixture name."""
    if name in ("aomoto", "aomoto_gelfand"):
        if m is None or l is None:
            raise ValueError("aomoto needs m and l")
        return make_aomoto(m, l)
    if name in ("fc", "lauricella_fc"):
        if m is None:
            raise ValueError("fc needs m")
        return make_fc(m)
    return fixture(name)


def aomoto_B_form(m: int, l: int, mu: int, nu: int) -> dict[tuple[int, int], int]:
    """``s_(mu,nu) - s_(mu,nu-1) - s_(mu-1,nu) + s_(mu-1,nu-1)`` with out-of-range s dropped."""
    out: dict[tuple[int, int], int] = {}
    for (a, b), c in (((mu, nu), 1), ((mu, nu - 1), -1), ((mu - 1, nu), -1), ((mu - 1, nu - 1), 1)):
        if 1 <= a < m and m + 1 <= b < m + l:
            out[(a, b)] = out.get((a, b), 0) + c
    return {k: v for k, v in out.items() if v}


__all__ = ["FamilySpec", "make_aomoto", "make_fc", "fixture", "family", "FIXTURES",
           "aomoto_B_form", "aomoto_weight", "is_staircase_weight"]
