"""Exact sparse multivariate polynomials over Q and commutative Buchberger.

A :class:`SparsePoly` is a map from exponent tuples to nonzero Fractions,
tagged with a ring label (``"s"``, ``"ds"``, ``"dz"``, ``"theta"``, ``"x"``,
``"l"``) so that accidental mixing of rings is caught early.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import Iterable, Mapping, Sequence

from .exceptions import NotAUnit, VariableMismatch
from .validation import as_fraction, format_rational

Exponent = tuple[int, ...]


def falling(n: int, k: int) -> int:
    """Falling factorial n (n-1) ... (n-k+1) for integers n, k >= 0."""
    out = 1
    for i in range(k):
        out *= n - i
    return out


def exp_factorial(e: Sequence[int]) -> int:
    return prod(factorial(x) for x in e)


@dataclass(frozen=True)
class TermOrder:
    """Monomial order: ``lex``, ``grevlex``, or ``weight`` refined by grevlex.

    ``perm`` lists variable indices from most to least significant; empty
    means the natural order x_1 > x_2 > ... > x_n.
    """

    kind: str = "grevlex"
    weight: tuple = ()
    perm: tuple = ()

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "weight"):
            raise ValueError(f"unknown term order {self.kind!r}")
        if self.kind == "weight" and not self.weight:
            raise ValueError("weight order needs a weight vector")
        object.__setattr__(self, "weight", tuple(as_fraction(x) for x in self.weight))
        object.__setattr__(self, "perm", tuple(self.perm))

    def _perm(self, n: int):
        return self.perm if self.perm else range(n)

    def key(self, e: Exponent):
        """Sort key: ``key(a) > key(b)`` iff ``x^a > x^b``."""
        perm = self._perm(len(e))
        if self.kind == "lex":
            return tuple(e[i] for i in perm)
        rev = tuple(-e[i] for i in reversed(perm))
        if self.kind == "grevlex":
            return (sum(e),) + rev
        return (sum(w * a for w, a in zip(self.weight, e)), sum(e)) + rev

    def to_json(self):
        out = {"kind": self.kind}
        if self.weight:
            out["weight"] = [format_rational(x) for x in self.weight]
        if self.perm:
            out["perm"] = [i + 1 for i in self.perm]
        return out


GREVLEX = TermOrder("grevlex")
LEX = TermOrder("lex")


class SparsePoly:
    """Polynomial in ``nvars`` variables with exact rational coefficients."""

    __slots__ = ("nvars", "terms", "ring")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None, ring: str = "s"):
        self.nvars = nvars
        self.ring = ring
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nvars:
                    raise VariableMismatch(f"exponent {e} does not have {nvars} entries")
                c = Fraction(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
            clean = {e: c for e, c in clean.items() if c}
        self.terms = clean

    # construction ---------------------------------------------------------

    @classmethod
    def _raw(cls, nvars, terms, ring):
        p = cls.__new__(cls)
        p.nvars, p.terms, p.ring = nvars, terms, ring
        return p

    @classmethod
    def zero(cls, nvars: int, ring: str = "s") -> "SparsePoly":
        return cls._raw(nvars, {}, ring)

    @classmethod
    def constant(cls, c, nvars: int, ring: str = "s") -> "SparsePoly":
        return cls(nvars, {(0,) * nvars: c}, ring)

    @classmethod
    def monomial(cls, e: Sequence[int], c=1, ring: str = "s") -> "SparsePoly":
        return cls(len(e), {tuple(e): c}, ring)

    @classmethod
    def variable(cls, i: int, nvars: int, ring: str = "s") -> "SparsePoly":
        e = [0] * nvars
        e[i] = 1
        return cls.monomial(e, 1, ring)

    @classmethod
    def linear_form(cls, coeffs: Sequence, ring: str = "s", constant=0) -> "SparsePoly":
        n = len(coeffs)
        terms = {tuple(int(i == k) for i in range(n)): c for k, c in enumerate(coeffs)}
        terms[(0,) * n] = constant
        return cls(n, terms, ring)

    # basic protocol -------------------------------------------------------

    def _check(self, other: "SparsePoly"):
        if self.nvars != other.nvars or self.ring != other.ring:
            raise VariableMismatch(
                f"cannot combine {self.ring}[{self.nvars}] with {other.ring}[{other.nvars}]")

    def _coerce(self, other):
        if isinstance(other, SparsePoly):
            self._check(other)
            return other
        return SparsePoly.constant(as_fraction(other), self.nvars, self.ring)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, SparsePoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == SparsePoly.constant(other, self.nvars, self.ring)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"SparsePoly({self.to_str()!r}, ring={self.ring!r})"

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return SparsePoly._raw(self.nvars, out, self.ring)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly._raw(self.nvars, {e: -c for e, c in self.terms.items()}, self.ring)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            return self.scale(other)
        self._check(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        return SparsePoly._raw(self.nvars, out, self.ring)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        out = SparsePoly.constant(1, self.nvars, self.ring)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c) -> "SparsePoly":
        c = as_fraction(c)
        if not c:
            return SparsePoly.zero(self.nvars, self.ring)
        return SparsePoly._raw(self.nvars, {e: v * c for e, v in self.terms.items()}, self.ring)

    def mul_monomial(self, e: Exponent, c=1) -> "SparsePoly":
        c = Fraction(c)
        return SparsePoly._raw(
            self.nvars, {tuple(a + b for a, b in zip(k, e)): v * c for k, v in self.terms.items()},
            self.ring)

    def relabel(self, ring: str) -> "SparsePoly":
        return SparsePoly._raw(self.nvars, dict(self.terms), ring)

    # inspection -----------------------------------------------------------

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def coefficient(self, e: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(e), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.nvars)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_part(self, k: int) -> "SparsePoly":
        return SparsePoly._raw(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == k},
                               self.ring)

    def support_variables(self) -> set[int]:
        return {i for e in self.terms for i, a in enumerate(e) if a}

    def lead_monomial(self, order: TermOrder = GREVLEX) -> Exponent:
        return max(self.terms, key=order.key)

    def lead_coefficient(self, order: TermOrder = GREVLEX) -> Fraction:
        return self.terms[self.lead_monomial(order)]

    def sorted_terms(self, order: TermOrder = GREVLEX) -> list[tuple[Exponent, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def monic(self, order: TermOrder = GREVLEX) -> "SparsePoly":
        return self.scale(1 / self.lead_coefficient(order)) if self.terms else self

    def evaluate(self, point: Sequence) -> Fraction:
        return sum((c * prod(Fraction(x) ** a for x, a in zip(point, e))
                    for e, c in self.terms.items()), Fraction(0))

    # calculus and substitution ---------------------------------------------

    def derivative(self, i: int) -> "SparsePoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return SparsePoly._raw(self.nvars, out, self.ring)

    def substitute_linear_forms(self, M: Sequence[Sequence], ring: str) -> "SparsePoly":
        """Ring map sending variable k to ``sum_j M[j][k] * y_j``.

        ``M`` has one row per target variable and one column per source
        variable.
        """
        if not M:
            target_n = 0
        else:
            target_n = len(M)
            if any(len(row) != self.nvars for row in M):
                raise VariableMismatch("substitution matrix has the wrong number of columns")
        images = [SparsePoly(target_n, {tuple(int(i == j) for i in range(target_n)): M[j][k]
                                        for j in range(target_n)}, ring)
                  for k in range(self.nvars)]
        out = SparsePoly.zero(target_n, ring)
        cache: dict[tuple[int, int], SparsePoly] = {}
        for e, c in self.terms.items():
            term = SparsePoly.constant(c, target_n, ring)
            for k, a in enumerate(e):
                if a:
                    if (k, a) not in cache:
                        cache[(k, a)] = images[k] ** a
                    term = term * cache[(k, a)]
            out = out + term
        return out

    # serialization ---------------------------------------------------------

    def to_json(self) -> list[dict]:
        return [{"exp": list(e), "coef": format_rational(c)}
                for e, c in self.sorted_terms(GREVLEX)]

    @classmethod
    def from_json(cls, data: Iterable[Mapping], nvars: int, ring: str = "s") -> "SparsePoly":
        return cls(nvars, {tuple(t["exp"]): as_fraction(t["coef"]) for t in data}, ring)

    def to_str(self, names: Sequence[str] | None = None, order: TermOrder = GREVLEX) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = [f"{self.ring}{i + 1}" for i in range(self.nvars)]
        parts = []
        for e, c in self.sorted_terms(order):
            mono = "*".join(n if a == 1 else f"{n}^{a}" for n, a in zip(names, e) if a)
            if not mono:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{format_rational(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


# --------------------------------------------------------------------------
# differential operators with constant coefficients


def apply_diffop(U: SparsePoly, f: "SparsePoly | TruncatedSeries"):
    """Apply ``U(d)`` to ``f``: ``d^mu . s^nu = [nu]_mu s^(nu - mu)``.

    The ring label of ``U`` is ignored; only the variable count must agree.
    Series keep their degree cap.
    """
    if isinstance(f, TruncatedSeries):
        return TruncatedSeries(apply_diffop(U, f.poly), f.cap, f.graded)
    if U.nvars != f.nvars:
        raise VariableMismatch(f"operator has {U.nvars} variables, target has {f.nvars}")
    out: dict[Exponent, Fraction] = {}
    for mu, a in U.terms.items():
        for nu, b in f.terms.items():
            if all(x >= y for x, y in zip(nu, mu)):
                coef = a * b * prod(falling(x, y) for x, y in zip(nu, mu))
                e = tuple(x - y for x, y in zip(nu, mu))
                v = out.get(e, 0) + coef
                if v:
                    out[e] = v
                else:
                    del out[e]
    return SparsePoly._raw(f.nvars, out, f.ring)


def pair_at_zero(q: SparsePoly, h: SparsePoly) -> Fraction:
    """``[q(d) . h]|_{s=0} = sum_nu q_nu h_nu nu!``."""
    if q.nvars != h.nvars:
        raise VariableMismatch("pairing needs equal variable counts")
    small, big = (q, h) if len(q.terms) <= len(h.terms) else (h, q)
    return sum((c * big.terms[e] * exp_factorial(e) for e, c in small.terms.items()
                if e in big.terms), Fraction(0))


# --------------------------------------------------------------------------
# truncated power series


@dataclass(frozen=True)
class TruncatedSeries:
    """Polynomial with terms of degree > ``cap`` discarded.

    Degree is measured in the first ``graded`` variables (all by default),
    so coefficients may themselves be polynomials in trailing variables.
    """

    poly: SparsePoly
    cap: int
    graded: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "poly", _truncate(self.poly, self.cap, self._g))

    @property
    def _g(self):
        return self.poly.nvars if self.graded is None else self.graded

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            cap = min(self.cap, other.cap)
            return TruncatedSeries(_truncated_product(self.poly, other.poly, cap, self._g),
                                   cap, self.graded)
        if isinstance(other, SparsePoly):
            return TruncatedSeries(_truncated_product(self.poly, other, self.cap, self._g),
                                   self.cap, self.graded)
        return TruncatedSeries(self.poly.scale(other), self.cap, self.graded)

    def __add__(self, other):
        o = other.poly if isinstance(other, TruncatedSeries) else other
        return TruncatedSeries(self.poly + o, self.cap, self.graded)


def _truncate(p: SparsePoly, cap: int, g: int) -> SparsePoly:
    return SparsePoly._raw(p.nvars, {e: c for e, c in p.terms.items() if sum(e[:g]) <= cap}, p.ring)


def _truncated_product(p: SparsePoly, q: SparsePoly, cap: int, g: int) -> SparsePoly:
    p._check(q)
    out: dict[Exponent, Fraction] = {}
    qt = [(e, sum(e[:g]), c) for e, c in q.terms.items()]
    for e1, c1 in p.terms.items():
        d1 = sum(e1[:g])
        if d1 > cap:
            continue
        for e2, d2, c2 in qt:
            if d1 + d2 <= cap:
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
    return SparsePoly._raw(p.nvars, out, p.ring)


def series_invert(f: TruncatedSeries) -> TruncatedSeries:
    """Inverse of a unit, via the geometric series ``1/(c(1+g))``."""
    c = f.poly.constant_term()
    if not c:
        raise NotAUnit("constant term is zero")
    g = f._g
    if any(sum(e[:g]) == 0 and any(e) for e in f.poly.terms):
        raise NotAUnit("the degree-0 part must be a nonzero constant")
    nvars, ring = f.poly.nvars, f.poly.ring
    one = SparsePoly.constant(1, nvars, ring)
    tail = (f.poly - SparsePoly.constant(c, nvars, ring)).scale(-1 / c)  # f = c (1 - tail)
    out, power = one, one
    for _ in range(f.cap):
        power = _truncated_product(power, tail, f.cap, g)
        if not power:
            break
        out = out + power
    return TruncatedSeries(out.scale(1 / c), f.cap, f.graded)


def exp_series(p: SparsePoly, cap: int, graded: int | None = None) -> TruncatedSeries:
    """``exp(p)`` truncated at degree ``cap``; ``p`` must have no constant term."""
    if p.constant_term():
        raise ValueError("exp_series needs a polynomial without constant term")
    g = p.nvars if graded is None else graded
    term = SparsePoly.constant(1, p.nvars, p.ring)
    out = term
    for k in range(1, cap + 1):
        term = _truncated_product(term, p, cap, g).scale(Fraction(1, k))
        if not term:
            break
        out = out + term
    return TruncatedSeries(out, cap, graded)


# --------------------------------------------------------------------------
# Groebner bases


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


class _Basis:
    """Groebner basis under construction: monic polynomials with cached leads."""

    def __init__(self, order: TermOrder):
        self.order = order
        self.polys: list[dict[Exponent, Fraction]] = []
        self.leads: list[Exponent] = []
        self.active: list[bool] = []

    def reduce(self, terms: dict[Exponent, Fraction], full: bool = True,
               skip: int | None = None) -> dict[Exponent, Fraction]:
        key = self.order.key
        p = dict(terms)
        rem: dict[Exponent, Fraction] = {}
        while p:
            m = max(p, key=key)
            c = p[m]
            for idx, (lead, g) in enumerate(zip(self.leads, self.polys)):
                if idx == skip or not self.active[idx]:
                    continue
                if _divides(lead, m):
                    shift = tuple(x - y for x, y in zip(m, lead))
                    for e, v in g.items():
                        t = tuple(a + b for a, b in zip(e, shift))
                        nv = p.get(t, 0) - c * v
                        if nv:
                            p[t] = nv
                        else:
                            p.pop(t, None)
                    break
            else:
                rem[m] = c
                del p[m]
                if not full:
                    rem.update(p)
                    return rem
        return rem


def _monic_terms(terms, order):
    lead = max(terms, key=order.key)
    inv = 1 / terms[lead]
    return {e: c * inv for e, c in terms.items()}, lead


def reduced_groebner(gens: Sequence[SparsePoly], order: TermOrder = GREVLEX) -> list[SparsePoly]:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Buchberger with normal selection and the Gebauer-Moeller update.
    Generators are monic and sorted by increasing leading monomial.
    """
    gens = [g for g in gens if g]
    if not gens:
        return []
    nvars, ring = gens[0].nvars, gens[0].ring
    for g in gens:
        gens[0]._check(g)
    key = order.key
    basis = _Basis(order)
    pairs: set[tuple[int, int]] = set()

    def add(terms):
        terms, lead = _monic_terms(terms, order)
        nonlocal pairs
        k = len(basis.polys)
        lm = basis.leads
        # Gebauer-Moeller: drop old pairs made redundant by the new lead
        kept = set()
        for (i, j) in pairs:
            l_ij = _lcm(lm[i], lm[j])
            if not _divides(lead, l_ij) or l_ij == _lcm(lm[i], lead) or l_ij == _lcm(lm[j], lead):
                kept.add((i, j))
        by_lcm: dict[Exponent, list[int]] = {}
        for i in range(k):
            by_lcm.setdefault(_lcm(lm[i], lead), []).append(i)
        minimal = []
        for L in sorted(by_lcm, key=lambda e: (sum(e), key(e))):
            if all(not _divides(M, L) for M in minimal):
                minimal.append(L)
        new = set()
        for L in minimal:
            cands = by_lcm[L]
            # first criterion: coprime leads need no pair
            if any(L == tuple(a + b for a, b in zip(lm[i], lead)) for i in cands):
                continue
            new.add((min(cands), k))
        pairs = kept | new
        basis.polys.append(terms)
        basis.leads.append(lead)
        basis.active.append(True)

    for g in sorted(gens, key=lambda p: key(p.lead_monomial(order))):
        r = basis.reduce(g.terms, full=False)
        if r:
            add(r)
    while pairs:
        i, j = min(pairs, key=lambda p: (lambda L: (sum(L), key(L)))(_lcm(basis.leads[p[0]],
                                                                         basis.leads[p[1]])))
        pairs.discard((i, j))
        L = _lcm(basis.leads[i], basis.leads[j])
        s: dict[Exponent, Fraction] = {}
        for idx, sign in ((i, 1), (j, -1)):
            shift = tuple(a - b for a, b in zip(L, basis.leads[idx]))
            for e, c in basis.polys[idx].items():
                t = tuple(a + b for a, b in zip(e, shift))
                v = s.get(t, 0) + sign * c
                if v:
                    s[t] = v
                else:
                    s.pop(t, None)
        r = basis.reduce(s, full=False)
        if r:
            add(r)
    return _interreduce([SparsePoly._raw(nvars, p, ring) for p in basis.polys], order)


def _interreduce(G: list[SparsePoly], order: TermOrder) -> list[SparsePoly]:
    key = order.key
    G = sorted((g.monic(order) for g in G if g), key=lambda g: key(g.lead_monomial(order)))
    minimal: list[SparsePoly] = []
    for g in G:
        lm = g.lead_monomial(order)
        if not any(_divides(h.lead_monomial(order), lm) for h in minimal):
            minimal = [h for h in minimal if not _divides(lm, h.lead_monomial(order))]
            minimal.append(g)
    out = []
    for idx, g in enumerate(minimal):
        others = [h for k, h in enumerate(minimal) if k != idx]
        out.append(normal_form(g, others, order).monic(order))
    return sorted(out, key=lambda g: key(g.lead_monomial(order)))


def normal_form(f: SparsePoly, G: Sequence[SparsePoly], order: TermOrder = GREVLEX) -> SparsePoly:
    """Remainder of ``f`` on division by ``G``: no term is divisible by a lead of ``G``."""
    basis = _Basis(order)
    for g in G:
        if g:
            f._check(g)
            terms, lead = _monic_terms(g.terms, order)
            basis.polys.append(terms)
            basis.leads.append(lead)
            basis.active.append(True)
    return SparsePoly._raw(f.nvars, basis.reduce(f.terms, full=True), f.ring)


def s_polynomial(f: SparsePoly, g: SparsePoly, order: TermOrder = GREVLEX) -> SparsePoly:
    lf, lg = f.lead_monomial(order), g.lead_monomial(order)
    L = _lcm(lf, lg)
    a = f.mul_monomial(tuple(x - y for x, y in zip(L, lf)), 1 / f.terms[lf])
    b = g.mul_monomial(tuple(x - y for x, y in zip(L, lg)), 1 / g.terms[lg])
    return a - b


def in_ideal(f: SparsePoly, G: Sequence[SparsePoly], order: TermOrder = GREVLEX) -> bool:
    """Membership test; ``G`` must be a Groebner basis under ``order``."""
    return normal_form(f, G, order).is_zero()


def standard_monomials(G: Sequence[SparsePoly], nvars: int, order: TermOrder = GREVLEX,
                       max_degree: int | None = None) -> list[Exponent] | None:
    """Monomials outside the initial ideal of ``G``, sorted by (degree, order).

    Returns ``None`` when infinitely many exist and ``max_degree`` is not
    given.
    """
    leads = [g.lead_monomial(order) for g in G]
    if any(not any(l) for l in leads):
        return []
    artinian = all(any(l[i] > 0 and sum(l) == l[i] for l in leads) for i in range(nvars))
    if not artinian and max_degree is None:
        return None
    if max_degree is None:
        max_degree = sum(max(l[i] for l in leads if l[i] and sum(l) == l[i]) - 1
                         for i in range(nvars))
    out: list[Exponent] = []
    layer: set[Exponent] = {(0,) * nvars}
    for deg in range(max_degree + 1):
        layer = {e for e in layer if not any(_divides(l, e) for l in leads)}
        if not layer:
            break
        out.extend(sorted(layer, key=order.key))
        nxt = set()
        for e in layer:
            for i in range(nvars):
                f = list(e)
                f[i] += 1
                nxt.add(tuple(f))
        layer = nxt
    return out


def monomials_of_degree(nvars: int, k: int):
    if nvars == 0:
        if k == 0:
            yield ()
        return
    if nvars == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in monomials_of_degree(nvars - 1, k - first):
            yield (first,) + rest
