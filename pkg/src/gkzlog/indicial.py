"""Standard pairs, fake exponents, and the distraction of the initial ideal."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .lattice import AMatrix, solve_exact
from .polycore import SparsePoly
from .toricgb import MonomialIdeal, ToricBasis
from .validation import as_fraction, rational_list


@dataclass(frozen=True, order=True)
class StandardPair:
    """Anchor ``a`` and face ``sigma`` with ``a_j = 0`` on ``sigma``."""

    anchor: tuple[int, ...]
    face: frozenset[int]

    def monomial_covered(self, e: Sequence[int]) -> bool:
        return all(x == a for j, (x, a) in enumerate(zip(e, self.anchor)) if j not in self.face)

    def to_json(self):
        return {"anchor": list(self.anchor), "face": sorted(j + 1 for j in self.face)}


def _admissible(anchor: Sequence[int], face: frozenset[int], gens) -> bool:
    # x^(anchor + b) avoids the ideal for every b supported on face
    return all(any(m[j] > anchor[j] for j in range(len(anchor)) if j not in face) for m in gens)


def _maximal_faces(anchor, gens, n) -> set[frozenset[int]]:
    if not _admissible(anchor, frozenset(), gens):
        return set()
    zeros = [j for j in range(n) if anchor[j] == 0]
    faces: list[frozenset[int]] = []

    # admissible faces are closed under subsets, so growing in index order finds all
    def grow(face: frozenset[int], start: int):
        faces.append(face)
        for idx in range(start, len(zeros)):
            bigger = face | {zeros[idx]}
            if _admissible(anchor, bigger, gens):
                grow(bigger, idx + 1)

    grow(frozenset(), 0)
    return {f for f in faces if not any(f < g for g in faces)}


def standard_pairs(M: MonomialIdeal, nvars: int | None = None) -> list[StandardPair]:
    """All standard pairs of the monomial ideal ``M``, sorted canonically.

    Anchors range over standard monomials with ``a_j < max_j`` (the largest
    exponent of x_j among the generators), which contains every anchor of
    a standard pair.
    """
    gens = list(M.generators)
    n = nvars if nvars is not None else M.nvars
    if not gens:
        return [StandardPair((0,) * n, frozenset(range(n)))]
    if any(not any(m) for m in gens):
        return []
    caps = [max(m[j] for m in gens) for j in range(n)]
    anchors = []
    stack = [(0,) * n]
    seen = set(stack)
    while stack:
        a = stack.pop()
        if M.contains(a):
            continue
        anchors.append(a)
        for j in range(n):
            if a[j] + 1 < caps[j]:
                b = a[:j] + (a[j] + 1,) + a[j + 1:]
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
    candidates = {StandardPair(a, f) for a in anchors for f in _maximal_faces(a, gens, n)}

    def contained(p: StandardPair, q: StandardPair) -> bool:
        # p.anchor + N^p.face inside q.anchor + N^q.face
        return p.face <= q.face and all(
            x >= y and (x == y or j in q.face)
            for j, (x, y) in enumerate(zip(p.anchor, q.anchor)))

    out = [p for p in candidates if not any(q != p and contained(p, q) for q in candidates)]
    return sorted(out, key=lambda p: (-len(p.face), sorted(p.face), p.anchor))


# --------------------------------------------------------------------------
# fake exponents


@dataclass
class FakeExponent:
    v: tuple[Fraction, ...]
    pairs: list[StandardPair] = field(default_factory=list)

    def to_json(self):
        return {"v": rational_list(self.v), "pairs": [p.to_json() for p in self.pairs]}


@dataclass
class ExponentSearch:
    exponents: list[FakeExponent]
    diagnostics: list[dict]

    def __iter__(self):
        return iter(self.exponents)

    def __len__(self):
        return len(self.exponents)

    def __getitem__(self, i):
        return self.exponents[i]


def falling_at(v: Sequence, e: Sequence[int]) -> Fraction:
    """``[v]_e = prod_j v_j (v_j - 1) ... (v_j - e_j + 1)``."""
    out = Fraction(1)
    for x, k in zip(v, e):
        for i in range(k):
            out *= x - i
    return out


def fake_exponents(A: AMatrix, beta: Sequence, gb: ToricBasis) -> ExponentSearch:
    """Fake exponents of H_A(beta) for the weight behind ``gb``.

    Each standard pair (a, sigma) of the initial ideal fixes ``v_j = a_j``
    off sigma; ``A v = beta`` then determines v on sigma. Pairs without a
    unique solution are skipped and listed in the diagnostics.
    """
    beta = tuple(as_fraction(b) for b in beta)
    if len(beta) != A.d:
        raise ValueError(f"beta must have length {A.d}")
    pairs = standard_pairs(gb.initial_ideal(), A.n)
    found: dict[tuple, FakeExponent] = {}
    diagnostics = []
    for p in pairs:
        face = sorted(p.face)
        off = [j for j in range(A.n) if j not in p.face]
        rhs = [b - sum(A.entries[i][j] * p.anchor[j] for j in off) for i, b in enumerate(beta)]
        sol = solve_exact(A.submatrix(face), rhs) if face else (
            ((), []) if all(x == 0 for x in rhs) else None)
        if sol is None:
            diagnostics.append({"pair": p.to_json(), "status": "inconsistent"})
            continue
        if sol[1]:
            diagnostics.append({"pair": p.to_json(), "status": "not unique"})
            continue
        v = [Fraction(a) for a in p.anchor]
        for j, x in zip(face, sol[0]):
            v[j] = x
        v = tuple(v)
        if A.apply(v) != beta or any(falling_at(v, b.plus) for b in gb):
            diagnostics.append({"pair": p.to_json(), "status": "fails distraction"})
            continue
        found.setdefault(v, FakeExponent(v)).pairs.append(p)
    exps = sorted(found.values(), key=lambda f: f.v)
    return ExponentSearch(exps, diagnostics)


# --------------------------------------------------------------------------
# distraction


def g_sets(gb: ToricBasis, v: Sequence) -> list[frozenset[int]]:
    """``G^(i) = nsupp(v - g_i) minus nsupp(v)``: j with v_j in N and v_j < g_ij."""
    v = [as_fraction(x) for x in v]
    return [frozenset(j for j, (x, gj) in enumerate(zip(v, b.g))
                      if x.denominator == 1 and 0 <= x < gj) for b in gb]


def theta_falling(e: Sequence[int]) -> SparsePoly:
    """``[theta]_e = prod_j theta_j (theta_j - 1) ... (theta_j - e_j + 1)``."""
    n = len(e)
    out = SparsePoly.constant(1, n, "theta")
    for j, k in enumerate(e):
        for i in range(k):
            lin = [0] * n
            lin[j] = 1
            out = out * SparsePoly.linear_form(lin, "theta", -i)
    return out


@dataclass
class Distraction:
    monomial_part: list[SparsePoly]
    localized: list[SparsePoly]
    g_sets: list[frozenset[int]]


def distraction_generators(gb: ToricBasis, v: Sequence) -> Distraction:
    """Distracted leading terms ``[theta]_{g+}`` and the localized products at ``v``."""
    v = [as_fraction(x) for x in v]
    n = len(v)
    G = g_sets(gb, v)
    local = []
    for S in G:
        p = SparsePoly.constant(1, n, "theta")
        for j in sorted(S):
            lin = [0] * n
            lin[j] = 1
            p = p * SparsePoly.linear_form(lin, "theta", -v[j])
        local.append(p)
    return Distraction([theta_falling(b.plus) for b in gb], local, G)


def fake_indicial_generators(A: AMatrix, beta: Sequence, gb: ToricBasis) -> list[SparsePoly]:
    """``A theta - beta`` together with the distracted initial monomials."""
    beta = [as_fraction(b) for b in beta]
    euler = [SparsePoly.linear_form(row, "theta", -b) for row, b in zip(A.entries, beta)]
    return euler + [theta_falling(b.plus) for b in gb]
