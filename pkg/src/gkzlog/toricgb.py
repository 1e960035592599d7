"""Reduced Groebner bases of toric ideals I_A and their initial ideals.

Binomials ``d^a - d^b`` are stored as exponent pairs; every S-polynomial
and reduction step of a pure-difference binomial ideal is again such a
binomial, so Buchberger never touches coefficients.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

from .lattice import AMatrix, IntVector, kernel_basis, lattice_points_in_box, negative_part, positive_part
from .polycore import TermOrder
from .validation import as_fraction, dot

Pair = tuple[IntVector, IntVector]


@dataclass(frozen=True)
class Binomial:
    """``d^{g+} - d^{g-}`` with ``g+`` the leading side."""

    g: IntVector

    @property
    def plus(self) -> IntVector:
        return positive_part(self.g)

    @property
    def minus(self) -> IntVector:
        return negative_part(self.g)

    lead = plus

    def to_json(self):
        return {"g": list(self.g), "lead": list(self.plus)}


@dataclass(frozen=True)
class MonomialIdeal:
    """Monomial ideal given by pairwise non-divisible exponent vectors."""

    generators: tuple[IntVector, ...]

    def __post_init__(self):
        gens = sorted(set(tuple(g) for g in self.generators))
        minimal = [g for g in gens
                   if not any(h != g and all(a <= b for a, b in zip(h, g)) for h in gens)]
        object.__setattr__(self, "generators", tuple(minimal))

    @property
    def nvars(self) -> int:
        return len(self.generators[0]) if self.generators else 0

    def contains(self, e: Sequence[int]) -> bool:
        return any(all(a <= b for a, b in zip(g, e)) for g in self.generators)

    def is_squarefree(self) -> bool:
        return all(max(g) <= 1 for g in self.generators)


@dataclass
class ToricBasis:
    """Reduced Groebner basis of I_A under a weight refined by grevlex."""

    binomials: list[Binomial]
    weight: tuple
    order: TermOrder
    generic: bool = True
    ties: list[IntVector] = field(default_factory=list)

    def __len__(self):
        return len(self.binomials)

    def __iter__(self):
        return iter(self.binomials)

    def __getitem__(self, i):
        return self.binomials[i]

    @property
    def vectors(self) -> list[IntVector]:
        return [b.g for b in self.binomials]

    def initial_ideal(self) -> MonomialIdeal:
        return initial_ideal(self)

    def max_weight(self):
        return max((dot(b.g, self.weight) for b in self.binomials), default=0)

    def max_shift(self):
        return max((dot(b.plus, self.weight) for b in self.binomials), default=0)

    def to_json(self):
        return {
            "basis": [b.to_json() for b in self.binomials],
            "initial_ideal": [list(g) for g in self.initial_ideal().generators],
            "generic": self.generic,
        }


# --------------------------------------------------------------------------
# binomial Buchberger


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _orient(a: IntVector, b: IntVector, key) -> Pair | None:
    if a == b:
        return None
    return (a, b) if key(a) > key(b) else (b, a)


def _top_reduce(p: Pair, basis: list[Pair], key) -> Pair | None:
    a, b = p
    while True:
        for la, lb in basis:
            if _divides(la, a):
                a = tuple(x - y + z for x, y, z in zip(a, la, lb))
                break
        else:
            return (a, b)
        o = _orient(a, b, key)
        if o is None:
            return None
        a, b = o


def _reduce_monomial(m: IntVector, basis: list[Pair]) -> IntVector:
    while True:
        for la, lb in basis:
            if _divides(la, m):
                m = tuple(x - y + z for x, y, z in zip(m, la, lb))
                break
        else:
            return m


def binomial_groebner(gens: Sequence[Pair], order: TermOrder) -> list[Pair]:
    """Reduced Groebner basis of the ideal spanned by ``x^a - x^b`` pairs.

    Input must be homogeneous for some positive grading so that
    reductions terminate under weight orders with negative entries.
    """
    key = order.key
    basis: list[Pair] = []
    pairs: list[tuple[int, int]] = []
    for a, b in gens:
        o = _orient(tuple(a), tuple(b), key)
        if o is None:
            continue
        r = _top_reduce(o, basis, key)
        if r is not None:
            pairs.extend((i, len(basis)) for i in range(len(basis)))
            basis.append(r)

    def lcm_key(pr):
        i, j = pr
        L = tuple(max(x, y) for x, y in zip(basis[i][0], basis[j][0]))
        return key(L)

    while pairs:
        pairs.sort(key=lcm_key, reverse=True)
        i, j = pairs.pop()
        (a1, b1), (a2, b2) = basis[i], basis[j]
        L = tuple(max(x, y) for x, y in zip(a1, a2))
        if all(x + y == z for x, y, z in zip(a1, a2, L)):
            continue  # coprime leads: S-polynomial reduces to zero
        s1 = tuple(l - x + y for l, x, y in zip(L, a1, b1))
        s2 = tuple(l - x + y for l, x, y in zip(L, a2, b2))
        o = _orient(s1, s2, key)
        if o is None:
            continue
        r = _top_reduce(o, basis, key)
        if r is not None:
            pairs.extend((k, len(basis)) for k in range(len(basis)))
            basis.append(r)
    return _interreduce_binomials(basis, key)


def _interreduce_binomials(basis: list[Pair], key) -> list[Pair]:
    basis = sorted(set(basis), key=lambda p: key(p[0]))
    minimal: list[Pair] = []
    for p in basis:
        if not any(_divides(q[0], p[0]) for q in minimal):
            minimal = [q for q in minimal if not _divides(p[0], q[0])]
            minimal.append(p)
    out = []
    for idx, (a, b) in enumerate(minimal):
        others = [q for k, q in enumerate(minimal) if k != idx]
        out.append((a, _reduce_monomial(b, others)))
    return sorted(out, key=lambda p: key(p[0]))


def _lattice_binomial(u: Sequence[int]) -> Pair:
    return positive_part(u), negative_part(u)


def _saturate(basis_vectors: Sequence[IntVector], n: int) -> list[Pair]:
    """Generators of (I_L : (x_1 ... x_n)^inf), one variable at a time.

    For each i, a grevlex basis with x_i cheapest is computed and every
    element is divided by its largest power of x_i.
    """
    current = [_lattice_binomial(b) for b in basis_vectors]
    for i in range(n):
        perm = tuple(j for j in range(n) if j != i) + (i,)
        G = binomial_groebner(current, TermOrder("grevlex", perm=perm))
        current = []
        for a, b in G:
            k = min(a[i], b[i])
            if k:
                a = a[:i] + (a[i] - k,) + a[i + 1:]
                b = b[:i] + (b[i] - k,) + b[i + 1:]
            current.append((a, b))
    return current


def weight_order(weight: Sequence) -> TermOrder:
    return TermOrder("weight", tuple(as_fraction(x) for x in weight))


def toric_groebner(A: AMatrix, weight: Sequence, method: str = "saturation",
                   degree_bound: int | None = None) -> ToricBasis:
    """Reduced Groebner basis of I_A with respect to ``weight``.

    ``method="saturation"`` saturates the lattice-basis ideal; the
    ``"enumeration"`` mode takes all binomials of lattice vectors with
    ``|u|_inf <= degree_bound`` (grown until two bounds agree) and is meant
    for cross-checking. Ties in ``w`` are broken by grevlex; the result
    then has ``generic=False`` and a warning is emitted.
    """
    weight = tuple(as_fraction(x) for x in weight)
    n = A.n
    if len(weight) != n:
        raise ValueError(f"weight must have length {n}")
    order = weight_order(weight)
    L = kernel_basis(A)
    if not L:
        return ToricBasis([], weight, order)
    if method == "saturation":
        gens = _saturate(L, n)
        G = binomial_groebner(gens, order)
    elif method == "enumeration":
        R = degree_bound or 1
        prev = None
        while True:
            gens = [_lattice_binomial(u) for u in lattice_points_in_box(L, R) if any(u)]
            G = binomial_groebner(gens, order)
            if degree_bound is not None or G == prev:
                break
            prev, R = G, R + 1
    else:
        raise ValueError(f"unknown method {method!r}")

    binomials = []
    ties = []
    for a, b in G:
        if any(x and y for x, y in zip(a, b)):
            raise AssertionError(f"reduced toric basis element with common factor: {a}, {b}")
        g = tuple(x - y for x, y in zip(a, b))
        if any(A.apply(g)):
            raise AssertionError(f"basis element {g} is not in the kernel")
        if dot(a, weight) == dot(b, weight):
            ties.append(g)
        binomials.append(Binomial(g))
    generic = not ties
    if not generic:
        warnings.warn(f"weight {weight} is not generic for A: {len(ties)} tied binomials",
                      stacklevel=2)
    return ToricBasis(binomials, weight, order, generic, ties)


def initial_ideal(gb: ToricBasis) -> MonomialIdeal:
    return MonomialIdeal(tuple(b.plus for b in gb.binomials))


def reduces_to_zero(u: Sequence[int], gb: ToricBasis) -> bool:
    """True iff ``d^{u+} - d^{u-}`` has normal form 0 modulo ``gb``."""
    pairs = [(b.plus, b.minus) for b in gb.binomials]
    a, b = _lattice_binomial(u)
    return _reduce_monomial(a, pairs) == _reduce_monomial(b, pairs)
