"""Perturbation data for a fake exponent v and a set B of lattice vectors.

Index sets are frozensets of 0-based column indices. Polynomials in the
perturbation variables use the ring label ``"s"``; constant-coefficient
operators in them use ``"ds"`` (and ``"dz"`` for the left factor of the
star operation).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .exceptions import (AssumptionViolated, NotABasis, NotArtinian, NotInKernel,
                         ZeroDenominator)
from .indicial import falling_at, g_sets
from .lattice import (AMatrix, MonoidMembership, find_lattice_point, hnf_rows, kernel_basis,
                      lattice_points_in_bounds, lattice_points_in_box, rank, solve_exact)
from .polycore import (GREVLEX, LEX, SparsePoly, TermOrder, apply_diffop, exp_factorial,
                       in_ideal, monomials_of_degree, normal_form, reduced_groebner,
                       standard_monomials)
from .toricgb import ToricBasis
from .validation import as_fraction, dot, rational_list, sorted_index_sets

IndexSet = frozenset


# --------------------------------------------------------------------------
# supports


def negative_support(x: Sequence) -> IndexSet:
    """Indices j with ``x_j`` a negative integer."""
    out = []
    for j, value in enumerate(x):
        q = as_fraction(value)
        if q.denominator == 1 and q < 0:
            out.append(j)
    return frozenset(out)


def support(x: Sequence) -> IndexSet:
    return frozenset(j for j, value in enumerate(x) if value)


def support_of_set(B: Sequence[Sequence[int]]) -> IndexSet:
    """Union of the supports of the vectors in ``B``."""
    out: set[int] = set()
    for b in B:
        out |= support(b)
    return frozenset(out)


def _check_in_kernel(A: AMatrix | None, B, lattice) -> None:
    for b in B:
        if A is not None:
            if any(A.apply(b)):
                raise NotInKernel(f"{list(b)} is not in ker A", vector=list(b))
        elif rank(list(lattice) + [list(b)]) != rank(lattice):
            raise NotInKernel(f"{list(b)} is not in the lattice", vector=list(b))


@dataclass
class AssumptionReport:
    holds: bool
    reason: str
    witness: tuple[int, ...] | None = None

    def to_json(self):
        return {"holds": self.holds, "reason": self.reason,
                "witness": None if self.witness is None else list(self.witness)}


def is_lattice_basis(B: Sequence[Sequence[int]], lattice: Sequence[Sequence[int]]) -> bool:
    """True iff ``B`` is a Z-basis of the lattice spanned by ``lattice``."""
    if len(B) != len(lattice):
        return False
    return hnf_rows(B) == hnf_rows(lattice) if B else not lattice


def check_assumption(v: Sequence, B: Sequence[Sequence[int]], lattice: Sequence[Sequence[int]],
                     A: AMatrix | None = None) -> AssumptionReport:
    """Linear independence of ``B`` and ``nsupp(v) within supp(B) u nsupp(v+u)`` on L.

    A violation needs ``j in nsupp(v)`` outside supp(B) with ``v_j + u_j >= 0``
    for some u in L. Such u exists exactly when the j-th coordinate is not
    identically zero on L, since that coordinate then takes arbitrarily
    large values; the decision is therefore exact.
    """
    _check_in_kernel(A, B, lattice)
    if B and rank(B) < len(B):
        return AssumptionReport(False, "B is linearly dependent")
    I0 = negative_support(v)
    sB = support_of_set(B)
    if I0 <= sB:
        return AssumptionReport(True, "nsupp(v) is contained in supp(B)")
    if is_lattice_basis(B, lattice):
        return AssumptionReport(True, "B is a basis of L")
    for j in sorted(I0 - sB):
        b = next((b for b in lattice if b[j]), None)
        if b is None:
            continue
        vj = as_fraction(v[j])
        k = -(vj // b[j]) if b[j] > 0 else (vj // -b[j]) * -1
        k = int(k)
        u = tuple(k * x for x in b)
        if vj + u[j] < 0:  # pragma: no cover - guarded by the choice of k
            u = tuple(x * 2 for x in u)
        return AssumptionReport(False, f"coordinate {j + 1} of v is negative and can be lifted",
                                u)
    return AssumptionReport(True, "every coordinate of nsupp(v) outside supp(B) vanishes on L")


# --------------------------------------------------------------------------
# the coefficients a_u(s)


@dataclass(frozen=True)
class Factor:
    """The affine form ``(Bs)_j + c``."""

    j: int
    c: Fraction

    @property
    def pure(self) -> bool:
        return self.c == 0


@dataclass
class CoefficientRecord:
    """``a_u(s) = const * prod(num) / prod(den)`` with factors ``(Bs)_j + c``.

    ``num_pure``/``den_pure`` hold the indices j of factors equal to
    ``(Bs)_j``; the unit lists hold factors with nonzero constant term.
    ``const`` collects factors with ``(Bs)_j = 0`` (j outside supp(B)).
    """

    u: tuple[int, ...]
    const: Fraction
    num_pure: tuple[int, ...]
    den_pure: tuple[int, ...]
    num_units: tuple[Factor, ...]
    den_units: tuple[Factor, ...]

    @property
    def is_zero(self) -> bool:
        return self.const == 0

    def value_at_zero(self) -> Fraction:
        """``a_u(0)``; requires no pure factor in the denominator."""
        if self.den_pure:
            raise ZeroDenominator("a_u has a pole at s = 0", u=list(self.u))
        if self.num_pure or not self.const:
            return Fraction(0)
        out = self.const
        for f in self.num_units:
            out *= f.c
        for f in self.den_units:
            out /= f.c
        return out

    def to_json(self):
        def fac(fs):
            return [{"j": f.j + 1, "c": rational_list([f.c])[0]} for f in fs]
        return {"u": list(self.u), "const": rational_list([self.const])[0],
                "num_pure": [j + 1 for j in self.num_pure],
                "den_pure": [j + 1 for j in self.den_pure],
                "num_units": fac(self.num_units), "den_units": fac(self.den_units)}


def a_u(v: Sequence, B: Sequence[Sequence[int]], u: Sequence[int]) -> CoefficientRecord:
    """Factored ``[v+Bs]_{u-} / [v+Bs+u]_{u+}``.

    For each j only one of numerator and denominator has factors, so pure
    factors never cancel inside a_u itself; they cancel against m(s).
    """
    v = [as_fraction(x) for x in v]
    sB = support_of_set(B)
    const = Fraction(1)
    num_pure, den_pure, num_units, den_units = [], [], [], []
    for j, uj in enumerate(u):
        if uj < 0:
            cs = [v[j] - k for k in range(-uj)]
            target_pure, target_units, is_num = num_pure, num_units, True
        elif uj > 0:
            cs = [v[j] + uj - k for k in range(uj)]
            target_pure, target_units, is_num = den_pure, den_units, False
        else:
            continue
        for c in cs:
            if j not in sB:
                if c == 0:
                    if is_num:
                        const = Fraction(0)
                    else:
                        raise ZeroDenominator(
                            f"[v+Bs+u]_(u+) vanishes identically for u={list(u)}", u=list(u))
                else:
                    const = const * c if is_num else const / c
            elif c == 0:
                target_pure.append(j)
            else:
                target_units.append(Factor(j, c))
    return CoefficientRecord(tuple(u), const, tuple(num_pure), tuple(den_pure),
                             tuple(num_units), tuple(den_units))


def bs_forms(B: Sequence[Sequence[int]], n: int) -> list[SparsePoly]:
    """The linear forms ``(Bs)_j = sum_k b^(k)_j s_k`` for j = 1..n."""
    h = len(B)
    return [SparsePoly.linear_form([B[k][j] for k in range(h)], "s") for j in range(n)]


def minimal_sets(sets) -> list[IndexSet]:
    """Inclusion-minimal members, sorted by (size, elements)."""
    ordered = sorted(set(sets), key=lambda S: (len(S), sorted(S)))
    out: list[IndexSet] = []
    for S in ordered:
        if not any(T <= S for T in out):
            out.append(S)
    return out


def bs_product(forms: Sequence[SparsePoly], J, h: int) -> SparsePoly:
    out = SparsePoly.constant(1, h, "s")
    for j in sorted(J):
        out = out * forms[j]
    return out


# --------------------------------------------------------------------------
# negative-support collections


@dataclass
class SupportCollection:
    """Classification of the negative supports ``I_u = nsupp(v+u)``, u in L.

    ``ns`` holds the classes all of whose members lie in C(w). A class is
    moved to ``ns_c`` only on an exact witness; ``reasons`` records how
    each class was decided and ``witnesses`` the refuting lattice points.
    """

    I0: IndexSet
    N: list[IndexSet]
    Nc: list[IndexSet]
    K_N: IndexSet
    ns: list[IndexSet]
    ns_c: list[IndexSet]
    radius: int
    stabilized: bool
    reasons: dict[IndexSet, str] = field(default_factory=dict)
    witnesses: dict[IndexSet, tuple[int, ...]] = field(default_factory=dict)
    representatives: dict[IndexSet, tuple[int, ...]] = field(default_factory=dict)

    def in_N(self, I: IndexSet) -> bool:
        return I in self._N_set

    def __post_init__(self):
        self._N_set = set(self.N)

    def to_json(self):
        return {
            "I0": sorted(j + 1 for j in self.I0),
            "N": sorted_index_sets(self.N),
            "Nc": sorted_index_sets(self.Nc),
            "K_N": sorted(j + 1 for j in self.K_N),
            "NS": sorted_index_sets(self.ns),
            "NS_c": sorted_index_sets(self.ns_c),
            "radius": self.radius,
            "stabilized": self.stabilized,
        }


def default_radius(gb: ToricBasis) -> int:
    return max((max(abs(x) for x in b.g) for b in gb), default=1) + 1


class _Classifier:
    """Decides NS_w(v) membership class by class.

    Realized classes are found by a search over sign patterns; refutations
    come from lattice points of the class with ``u.w <= 0``, points outside
    the cone of C(w), or window points failing exact monoid membership.
    """

    def __init__(self, v, lattice, gb: ToricBasis):
        self.v = [as_fraction(x) for x in v]
        self.n = len(self.v)
        self.lattice = hnf_rows(lattice) if lattice else []
        self.gb = gb
        self.w = gb.weight
        scale = lcm(*(Fraction(x).denominator for x in self.w)) if self.w else 1
        self.w_int = [int(x * scale) for x in self.w]
        self.monoid = MonoidMembership(gb.vectors, self.w) if len(gb) else None
        self.intpos = [j for j in range(self.n) if self.v[j].denominator == 1]
        self.I0 = negative_support(self.v)
        self.gsets = [S for S in g_sets(gb, self.v)]

    def class_of(self, u) -> IndexSet:
        return frozenset(j for j in self.intpos if self.v[j] + u[j] < 0)

    def in_Cw(self, u) -> bool:
        if not any(u):
            return True
        return self.monoid is not None and tuple(u) in self.monoid

    def _bounds(self, I, decided, radius=None):
        lo: list = [None if radius is None else -radius] * self.n
        hi: list = [None if radius is None else radius] * self.n
        for j in decided:
            vj = int(self.v[j])
            if j in I:
                hi[j] = -vj - 1 if radius is None else min(radius, -vj - 1)
            else:
                lo[j] = -vj if radius is None else max(-radius, -vj)
        return lo, hi

    def _outside_monoid_cheap(self, u) -> bool:
        if not any(u):
            return False
        if dot(u, self.w) <= 0:
            return True
        return self.monoid is None or any(dot(f, u) < 0 for f in self.monoid.facets)

    def realized(self, seed_radius: int) -> tuple[dict, dict]:
        reps: dict[IndexSet, tuple] = {}
        refuted: dict[IndexSet, tuple] = {}
        for u in lattice_points_in_box(self.lattice, seed_radius) if self.lattice else [(0,) * self.n]:
            I = self.class_of(u)
            reps.setdefault(I, u)
            if I not in refuted and self._outside_monoid_cheap(u):
                refuted[I] = u
        known = list(reps)

        def rec(k: int, chosen: frozenset):
            decided = self.intpos[:k]
            dset = set(decided)
            if not any((K & dset) == chosen for K in known):
                lo, hi = self._bounds(chosen, decided)
                u = find_lattice_point(self.lattice, lo, hi)
                if u is None:
                    return
                I = self.class_of(u)
                if I not in reps:
                    reps[I] = u
                    known.append(I)
            if k == len(self.intpos):
                return
            j = self.intpos[k]
            rec(k + 1, chosen | {j})
            rec(k + 1, chosen)

        rec(0, frozenset())
        return reps, refuted

    def global_refutation(self, I) -> tuple[tuple, str] | None:
        lo, hi = self._bounds(I, self.intpos)
        bound = -1 if I == self.I0 else 0
        u = find_lattice_point(self.lattice, lo, hi, [(self.w_int, None, bound)])
        if u is not None and any(u):
            return u, "weight"
        if I == self.I0 and self.lattice:
            # nonzero points of weight zero
            for j in range(self.n):
                for lb, ub in ((1, None), (None, -1)):
                    row = [int(k == j) for k in range(self.n)]
                    u = find_lattice_point(self.lattice, lo, hi,
                                           [(self.w_int, 0, 0), (row, lb, ub)])
                    if u is not None:
                        return u, "weight"
        for f in (self.monoid.facets if self.monoid else []):
            u = find_lattice_point(self.lattice, lo, hi, [(f, None, -1)])
            if u is not None:
                return u, "cone"
        return None

    def window_refutation(self, I, radius: int) -> tuple | None:
        lo, hi = self._bounds(I, self.intpos, radius)
        pts = sorted(lattice_points_in_bounds(self.lattice, lo, hi) if self.lattice
                     else [(0,) * self.n], key=lambda u: (dot(u, self.w), u))
        for u in pts:
            if not self.in_Cw(u):
                return u
        return None

    def certified(self, I) -> bool:
        # a class outside NS contains some G^(i) minus I0
        return not any(S <= I - self.I0 for S in self.gsets)


def ns_collections(v: Sequence, B: Sequence[Sequence[int]], gb: ToricBasis,
                   lattice: Sequence[Sequence[int]] | None = None,
                   radius: int | None = None) -> SupportCollection:
    """Classify the negative supports of lattice translates of ``v``.

    Membership of a class in NS_w(v) quantifies over infinitely many lattice
    points. Classes are refuted only by exact witnesses; a class with no
    witness is accepted if it contains no set ``G^(i) minus I0`` (such a class
    cannot lie outside NS) or if every lattice point of the class in the
    window ``|u|_inf <= radius`` lies in C(w). ``stabilized`` reports that
    doubling the window refutes nothing new.
    """
    if lattice is None:
        lattice = [b.g for b in gb]
    R = radius if radius is not None else default_radius(gb)
    if R < 1:
        raise ValueError("radius must be at least 1")
    cl = _Classifier(v, lattice, gb)
    reps, refuted = cl.realized(seed_radius=max(1, min(R, default_radius(gb) - 1)))
    reasons: dict[IndexSet, str] = {}
    for I in refuted:
        reasons[I] = "weight" if dot(refuted[I], cl.w) <= 0 else "cone"
    open_classes = []
    for I in sorted(reps, key=lambda s: (len(s), sorted(s))):
        if I in refuted:
            continue
        hit = cl.global_refutation(I)
        if hit is not None:
            refuted[I], reasons[I] = hit
        elif cl.certified(I):
            reasons[I] = "support criterion"
        else:
            open_classes.append(I)
    for I in open_classes:
        u = cl.window_refutation(I, R)
        if u is not None:
            refuted[I], reasons[I] = u, "window"
    late = {}
    for I in open_classes:
        if I in refuted:
            continue
        u = cl.window_refutation(I, 2 * R)
        if u is not None:
            late[I] = u
        else:
            reasons[I] = "window"
    stabilized = not late
    ns = [I for I in reps if I not in refuted]
    ns_c = [I for I in reps if I in refuted]
    sB = support_of_set(B)
    key = sB | cl.I0
    N = [I for I in ns if (sB | I) == key]
    Nc = [I for I in ns_c if (sB | I) == key]
    K = frozenset.intersection(*N) if N else cl.I0
    order = lambda s: (len(s), sorted(s))  # noqa: E731
    return SupportCollection(cl.I0, sorted(N, key=order), sorted(Nc, key=order), K,
                             sorted(ns, key=order), sorted(ns_c, key=order), R, stabilized,
                             reasons, refuted, reps)


# --------------------------------------------------------------------------
# ideals and orthogonal complements


@dataclass
class IdealRecord:
    name: str
    generators: list[SparsePoly]
    order: TermOrder
    gb: list[SparsePoly] = field(default_factory=list)

    def __post_init__(self):
        gens = [g for g in self.generators if g]
        self.generators = _dedupe(gens)
        if self.generators and not self.gb:
            self.gb = reduced_groebner(self.generators, self.order)

    @property
    def nvars(self) -> int:
        return self.generators[0].nvars if self.generators else 0

    def contains(self, f: SparsePoly) -> bool:
        if not self.gb:
            return f.is_zero()
        return in_ideal(f, self.gb, self.order)

    def contains_ideal(self, other: "IdealRecord") -> bool:
        return all(self.contains(g) for g in other.generators)

    def same_as(self, other: "IdealRecord") -> bool:
        return [g.terms for g in self.gb] == [g.terms for g in other.gb] or (
            self.contains_ideal(other) and other.contains_ideal(self))

    def to_json(self):
        return {"generators": [g.to_json() for g in self.generators],
                "groebner_basis": [g.to_json() for g in self.gb],
                "order": self.order.to_json()}


def _dedupe(polys):
    seen, out = set(), []
    for p in polys:
        key = tuple(sorted(p.terms.items()))
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


@dataclass
class OrthBasis:
    """Basis ``q_nu`` of P^perp indexed by the standard monomials ``nu``."""

    exponents: list[tuple[int, ...]]
    operators: list[SparsePoly]
    artinian: bool = True
    cap: int | None = None

    def __len__(self):
        return len(self.operators)

    def __iter__(self):
        return iter(self.operators)

    def __getitem__(self, i):
        return self.operators[i]


def orth_basis(P: IdealRecord, nvars: int | None = None, cap: int | None = None,
               ring: str = "ds") -> OrthBasis:
    """Basis of the orthogonal complement of a homogeneous ideal.

    For each standard monomial ``s^nu`` the operator is
    ``d^nu / nu! + sum_mu c_{mu,nu} d^mu / mu!`` where mu runs over the
    non-standard monomials of degree ``|nu|`` and ``NF(s^mu) = sum_nu
    c_{mu,nu} s^nu``. A non-Artinian quotient raises unless ``cap`` limits
    the degree, in which case the truncated basis is flagged.
    """
    h = P.nvars if nvars is None else nvars
    if P.generators and any(not g.is_homogeneous() for g in P.generators):
        raise ValueError("orth_basis needs a homogeneous ideal")
    if not P.gb:
        if h == 0:
            return OrthBasis([()], [SparsePoly.constant(1, 0, ring)])
        if cap is None:
            raise NotArtinian("the zero ideal has an infinite-dimensional complement")
        std = [e for k in range(cap + 1) for e in sorted(monomials_of_degree(h, k), key=P.order.key)]
        artinian = False
    else:
        std = standard_monomials(P.gb, h, P.order)
        artinian = std is not None
        if std is None:
            if cap is None:
                raise NotArtinian(f"C[s]/{P.name} is not finite dimensional")
            warnings.warn(f"{P.name} is not Artinian; orthogonal complement truncated at degree {cap}",
                          stacklevel=2)
            std = standard_monomials(P.gb, h, P.order, max_degree=cap)
    std_set = set(std)
    nf_cache: dict[int, list[tuple[tuple, SparsePoly]]] = {}
    ops = []
    for nu in std:
        k = sum(nu)
        if k not in nf_cache:
            rows = []
            for mu in monomials_of_degree(h, k):
                if mu in std_set:
                    continue
                mono = SparsePoly.monomial(mu, 1, P.gb[0].ring if P.gb else "s")
                nf = normal_form(mono, P.gb, P.order) if P.gb else mono
                rows.append((mu, nf))
            nf_cache[k] = rows
        terms = {nu: Fraction(1, exp_factorial(nu))}
        for mu, nf in nf_cache[k]:
            c = nf.terms.get(nu)
            if c:
                terms[mu] = c / exp_factorial(mu)
        ops.append(SparsePoly(h, terms, ring))
    return OrthBasis(list(std), ops, artinian, cap)


def span_rank(polys: Sequence[SparsePoly]) -> int:
    """Dimension of the Q-span of ``polys``."""
    monos = sorted({e for p in polys for e in p.terms})
    index = {e: i for i, e in enumerate(monos)}
    rows = []
    for p in polys:
        row = [Fraction(0)] * len(monos)
        for e, c in p.terms.items():
            row[index[e]] = c
        rows.append(row)
    return rank(rows) if rows and monos else 0


def span_contains(big: Sequence[SparsePoly], small: Sequence[SparsePoly]) -> bool:
    return span_rank(list(big) + list(small)) == span_rank(big)


# --------------------------------------------------------------------------
# star operation and the substitution maps


def star_apply(U: SparsePoly, q: SparsePoly) -> SparsePoly:
    """``U(d_z) * q(d_s) = (U(d_z) . q(z))|_{z = d_s}``."""
    return apply_diffop(U, q.relabel("ds")).relabel(q.ring)


def star_preimage(U: SparsePoly, q: SparsePoly) -> SparsePoly | None:
    """Some ``r`` with ``U * r = q``, by exact linear solving degree by degree.

    The unknown ``r`` ranges over polynomials of degree at most
    ``deg q + deg U``; returns None when no preimage exists there.
    """
    h = q.nvars
    top = (q.degree() if q else 0) + (U.degree() if U else 0)
    monos = [e for k in range(top + 1) for e in monomials_of_degree(h, k)]
    images = [star_apply(U, SparsePoly.monomial(e, 1, q.ring)) for e in monos]
    targets = sorted({e for p in images for e in p.terms} | set(q.terms))
    M = [[img.terms.get(t, Fraction(0)) for img in images] for t in targets]
    rhs = [q.terms.get(t, Fraction(0)) for t in targets]
    if not targets:
        return SparsePoly.zero(h, q.ring)
    sol = solve_exact(M, rhs)
    if sol is None:
        return None
    return SparsePoly(h, {e: c for e, c in zip(monos, sol[0])}, q.ring)


def phi_B(f: SparsePoly, B: Sequence[Sequence[int]]) -> SparsePoly:
    """``theta_j -> (Bs)_j``."""
    return f.substitute_linear_forms([list(b) for b in B], "s")


def psi_B(q: SparsePoly, B: Sequence[Sequence[int]], ring: str = "x") -> SparsePoly:
    """``d_{s_k} -> (xB)_k = sum_j b^(k)_j x_j``."""
    n = len(B[0]) if B else 0
    M = [[B[k][j] for k in range(len(B))] for j in range(n)]
    if not B:
        return SparsePoly.constant(q.constant_term(), n, ring)
    return q.substitute_linear_forms(M, ring)


# --------------------------------------------------------------------------
# assembled data


@dataclass
class PerturbationData:
    A: AMatrix
    beta: tuple[Fraction, ...]
    gb: ToricBasis
    v: tuple[Fraction, ...]
    B: list[tuple[int, ...]]
    assumption: AssumptionReport
    supports: SupportCollection
    g_sets: list[IndexSet]
    m_s: SparsePoly
    P_N: IdealRecord
    P_B: IdealRecord
    Q_v: IdealRecord
    PN_perp: OrthBasis
    PB_perp: OrthBasis
    B_is_basis: bool
    flags: dict = field(default_factory=dict)

    @property
    def h(self) -> int:
        return len(self.B)

    @property
    def n(self) -> int:
        return self.A.n

    def forms(self) -> list[SparsePoly]:
        return bs_forms(self.B, self.A.n)

    def to_json(self):
        return {
            "v": rational_list(self.v),
            "B": [list(b) for b in self.B],
            "assumption": self.assumption.to_json(),
            "supports": self.supports.to_json(),
            "G_sets": [sorted(j + 1 for j in S) for S in self.g_sets],
            "m_s": self.m_s.to_json(),
            "P_N": self.P_N.to_json(),
            "P_B": self.P_B.to_json(),
            "Q_v": self.Q_v.to_json(),
            "PN_perp": [q.to_json() for q in self.PN_perp],
            "PB_perp": [q.to_json() for q in self.PB_perp],
            "flags": dict(self.flags),
        }


def is_fake_exponent(A: AMatrix, beta, gb: ToricBasis, v) -> bool:
    return A.apply(v) == tuple(beta) and not any(falling_at(v, b.plus) for b in gb)


def perturbation_data(A: AMatrix, beta: Sequence, gb: ToricBasis, v: Sequence,
                      B: Sequence[Sequence[int]] | None = None, radius: int | None = None,
                      order: TermOrder = LEX) -> PerturbationData:
    """Collections, ideals, and orthogonal complements for the fake exponent ``v``.

    ``B`` defaults to the canonical kernel basis. Raises AssumptionViolated
    when B is dependent or the negative-support condition fails.
    """
    beta = tuple(as_fraction(b) for b in beta)
    v = tuple(as_fraction(x) for x in v)
    if not is_fake_exponent(A, beta, gb, v):
        raise ValueError("v is not a fake exponent: A v = beta and [v]_{g+} = 0 are required")
    L = kernel_basis(A)
    B = [tuple(b) for b in (L if B is None else B)]
    report = check_assumption(v, B, L, A)
    if not report.holds:
        raise AssumptionViolated(report.reason, witness=report.witness)
    h, n = len(B), A.n
    supports = ns_collections(v, B, gb, L, radius)
    forms = bs_forms(B, n)
    G = g_sets(gb, v)
    K = supports.K_N
    m_s = bs_product(forms, supports.I0 - K, h)
    # (Bs)^S is a multiple of (Bs)^S' for S' inside S, so minimal sets suffice
    pn_sets = minimal_sets({(I | J) - K for I in supports.N for J in supports.Nc})
    P_N = IdealRecord("P_N", [bs_product(forms, S, h) for S in pn_sets], order)
    P_B = IdealRecord("P_B", [bs_product(forms, S, h) for S in G], order)
    euler = [SparsePoly.linear_form(row, "theta") for row in A.entries]
    monos = []
    for S in G:
        e = [0] * n
        for j in S:
            e[j] = 1
        monos.append(SparsePoly.monomial(e, 1, "theta"))
    Q_v = IdealRecord("Q_v", euler + monos, GREVLEX)
    PN_perp = orth_basis(P_N, h)
    PB_perp = orth_basis(P_B, h)
    mPB = IdealRecord("m P_B", [m_s * g for g in P_B.generators], order)
    flags = {
        "assumption_holds": report.holds,
        "stabilized": supports.stabilized,
        "m_in_PN": P_N.contains(m_s),
        "PN_equals_m_PB": P_N.same_as(mPB),
        "chain_m_PB_in_PN": P_N.contains_ideal(mPB),
        "chain_PN_in_PB": P_B.contains_ideal(P_N),
        "B_is_basis": is_lattice_basis(B, L),
    }
    return PerturbationData(A, beta, gb, v, B, report, supports, G, m_s, P_N, P_B, Q_v,
                            PN_perp, PB_perp, flags["B_is_basis"], flags)


@dataclass
class ExponentTest:
    is_certified_exponent: bool
    m_in_PN: bool
    status: str
    degree_shortcut: bool | None

    def to_json(self):
        return {"is_certified_exponent": self.is_certified_exponent, "m_in_PN": self.m_in_PN,
                "status": self.status, "degree_shortcut": self.degree_shortcut}


def exponent_test(data: PerturbationData) -> ExponentTest:
    """``m(s)`` outside P_N certifies that v is an exponent; otherwise inconclusive."""
    m_in = data.P_N.contains(data.m_s)
    shortcut = None
    if data.B_is_basis:
        I0 = data.supports.I0
        shortcut = all(len(I | J) > len(I0) for I in data.supports.N for J in data.supports.Nc)
    status = "certified" if not m_in else "inconclusive"
    return ExponentTest(not m_in, m_in, status, shortcut)


def g_sets_json(sets) -> list[list[int]]:
    return [sorted(j + 1 for j in S) for S in sets]


def q_v_perp(data: PerturbationData) -> OrthBasis:
    """Q_v^perp computed directly from Q_v, as polynomials in x."""
    ob = orth_basis(data.Q_v, data.n, ring="x")
    return OrthBasis(ob.exponents, [q.relabel("x") for q in ob.operators], ob.artinian, ob.cap)


@dataclass
class QvPerpImage:
    images: list[SparsePoly]
    annihilated: bool
    surjective: bool | None


def psi_image_Qv_perp(data: PerturbationData, certify_surjective: bool = False) -> QvPerpImage:
    """``Psi_B`` applied to the basis of P_B^perp, with exact certificates.

    Each image is checked to be killed by ``d_x^{G^(i)}`` and by the
    operators ``sum_j a_ij d_j``. When B is a basis of L the images span
    Q_v^perp; ``certify_surjective`` compares against Q_v^perp computed from
    Q_v directly.
    """
    n = data.n
    images = [psi_B(q, data.B, "x") for q in data.PB_perp]
    killers = []
    for S in data.g_sets:
        e = [0] * n
        for j in S:
            e[j] = 1
        killers.append(SparsePoly.monomial(e, 1, "dx"))
    killers += [SparsePoly.linear_form(row, "dx") for row in data.A.entries]
    ok = all(apply_diffop(k, f).is_zero() for f in images for k in killers)
    surjective = None
    if certify_surjective:
        if not data.B_is_basis:
            raise NotABasis("B does not span L, so Psi_B need not be onto Q_v^perp")
        direct = q_v_perp(data).operators
        surjective = span_rank(images) == len(direct) and span_contains(direct, images)
    return QvPerpImage(images, ok, surjective)
