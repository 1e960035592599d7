"""Truncated logarithmic series solutions and their verification.

A series is stored bigraded: ``sum_u x^(v+u) p_u(l)`` where ``l_j`` stands
for ``log x_j``; logarithms are never expanded.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Sequence

import numpy as np

from .exceptions import AssumptionViolated, QNotInPerp, ZeroDenominator
from .indicial import fake_exponents
from .lattice import AMatrix, MonoidMembership, kernel_basis, rank
from .polycore import (SparsePoly, TruncatedSeries, exp_factorial, exp_series,
                       monomials_of_degree, pair_at_zero, series_invert)
from .perturb import (IdealRecord, PerturbationData, a_u, exponent_test, negative_support,
                      perturbation_data, psi_B, q_v_perp, star_apply)
from .toricgb import ToricBasis, toric_groebner
from .validation import as_fraction, dot, format_rational, rational_list


@dataclass
class LogSeries:
    """``x^v sum_u x^u p_u(l)`` truncated at ``u.w <= T``."""

    v: tuple[Fraction, ...]
    terms: dict[tuple[int, ...], SparsePoly]
    T: Fraction
    w: tuple[Fraction, ...]
    q: SparsePoly | None = None

    @property
    def n(self) -> int:
        return len(self.v)

    def coefficient(self, u) -> SparsePoly:
        return self.terms.get(tuple(u), SparsePoly.zero(self.n, "l"))

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: (dot(kv[0], self.w), kv[0]))

    def to_json(self):
        return {
            "q": None if self.q is None else self.q.to_json(),
            "T": format_rational(self.T),
            "terms": [{"u": list(u), "coef_log_poly": p.to_json()} for u, p in self.sorted_items()],
        }

    @classmethod
    def from_json(cls, data, v, w, h: int | None = None) -> "LogSeries":
        v = tuple(as_fraction(x) for x in v)
        n = len(v)
        terms = {tuple(t["u"]): SparsePoly.from_json(t["coef_log_poly"], n, "l")
                 for t in data["terms"]}
        q = None
        if data.get("q") is not None and h is not None:
            q = SparsePoly.from_json(data["q"], h, "ds")
        return cls(v, {u: p for u, p in terms.items() if p}, as_fraction(data["T"]),
                   tuple(as_fraction(x) for x in w), q)


def default_truncation(gb: ToricBasis) -> Fraction:
    return 3 * Fraction(gb.max_weight())


def in_perp(q: SparsePoly, P: IdealRecord) -> bool:
    """Direct check that ``[q(d) . (s^mu g)]|_0 = 0`` for all generators g of P.

    Only products of degree at most ``deg q`` can pair nontrivially.
    """
    if not q:
        return True
    D = q.degree()
    h = q.nvars
    for g in P.generators:
        dg = min(sum(e) for e in g.terms)
        for k in range(0, D - dg + 1):
            for mu in monomials_of_degree(h, k):
                if pair_at_zero(q, g.mul_monomial(mu).relabel(q.ring)):
                    return False
    return True


class SeriesBuilder:
    """Shared lattice enumeration and coefficient expansions for one PerturbationData.

    Writing ``m(s) a_u(s) = U_u(s)`` and ``x^(Bs) = exp(<l, Bs>)``, the
    coefficient of ``x^(v+u)`` is ``sum_alpha [U_u]_alpha R_(q,alpha)(l)`` with
    ``R_(q,alpha) = sum_gamma q_(alpha+gamma) (alpha+gamma)!/gamma! (lB)^gamma``,
    so only the s-expansion of U_u depends on u.
    """

    def __init__(self, data: PerturbationData, T=None, max_degree: int | None = None):
        self.data = data
        self.T = default_truncation(data.gb) if T is None else as_fraction(T)
        self.n, self.h = data.n, data.h
        self.forms = data.forms()
        self.m_set = data.supports.I0 - data.supports.K_N
        if max_degree is None:
            max_degree = max((q.degree() for q in data.PN_perp if q), default=0)
        self.max_degree = max_degree
        self.points = self._select_points()
        self._units: dict[tuple, dict] = {}
        self._tables: dict[tuple, list] = {}
        self._y_powers: dict[tuple, SparsePoly] = {}

    def _select_points(self) -> list[tuple[tuple[int, ...], int]]:
        data, cls = self.data, self.data.supports
        if len(data.gb):
            pts = MonoidMembership(data.gb.vectors, data.gb.weight).elements_array(self.T)
        else:
            pts = np.zeros((1, self.n), dtype=np.int64)
        intpos = [j for j, x in enumerate(data.v) if x.denominator == 1]
        vint = np.array([int(data.v[j]) for j in intpos], dtype=np.int64)
        bits = np.array([1 << k for k in range(len(intpos))], dtype=object)
        neg = (pts[:, intpos] + vint) < 0 if intpos else np.zeros((len(pts), 0), dtype=bool)
        masks = neg.astype(object) @ bits if intpos else np.zeros(len(pts), dtype=object)
        sB = frozenset(j for b in data.B for j, x in enumerate(b) if x)
        I0 = cls.I0
        low_of: dict[int, int | None] = {}
        for mask in set(masks.tolist()):
            I = frozenset(intpos[k] for k in range(len(intpos)) if (mask >> k) & 1)
            if I not in cls.representatives:
                raise RuntimeError(f"negative support {sorted(I)} was not classified")
            if not cls.in_N(I) or (I - I0) - sB:
                low_of[mask] = None  # outside L' or a_u identically zero
            else:
                low_of[mask] = len(I - I0) + len(self.m_set) - len(I0 - I)
        out = []
        for row, mask in zip(pts.tolist(), masks.tolist()):
            low = low_of[mask]
            if low is not None and low <= self.max_degree:
                out.append((tuple(row), low))
        return out

    # -- s-expansion of m(s) a_u(s) -----------------------------------------

    def unit_expansion(self, u) -> dict[tuple, Fraction]:
        """Coefficients of ``m(s) a_u(s)`` up to degree ``max_degree``.

        Unit factors ``c + L`` enter through ``log(c + L) = log c +
        sum_r (-1)^(r+1) L^r / (r c^r)``, grouped by the linear form L.
        """
        if u in self._units:
            return self._units[u]
        D = self.max_degree
        rec = a_u(self.data.v, self.data.B, u)
        out: dict[tuple, Fraction] = {}
        if not rec.is_zero:
            if set(rec.den_pure) - self.m_set:
                raise ZeroDenominator(f"a_u has an uncancelled pole for u={list(u)}", u=list(u))
            pure = sorted(self.m_set - set(rec.den_pure)) + list(rec.num_pure)
            if len(pure) <= D:
                const = rec.const
                sums: dict[int, list[Fraction]] = {}
                rest = D - len(pure)
                for f, sign in [(f, 1) for f in rec.num_units] + [(f, -1) for f in rec.den_units]:
                    const = const * f.c if sign > 0 else const / f.c
                    if rest:
                        acc = sums.setdefault(f.j, [Fraction(0)] * (rest + 1))
                        inv = 1 / f.c
                        p = Fraction(1)
                        for r in range(1, rest + 1):
                            p *= inv
                            acc[r] += sign * p
                poly = SparsePoly.constant(const, self.h, "s")
                for j in pure:
                    poly = TruncatedSeries(poly * self.forms[j], D).poly
                if rest and sums:
                    log = SparsePoly.zero(self.h, "s")
                    for j, acc in sums.items():
                        Lp = SparsePoly.constant(1, self.h, "s")
                        for r in range(1, rest + 1):
                            Lp = Lp * self.forms[j]
                            if acc[r]:
                                log = log + Lp.scale(acc[r] * Fraction((-1) ** (r + 1), r))
                    if log:
                        poly = (TruncatedSeries(exp_series(log, rest).poly, D) * poly).poly
                out = dict(poly.terms)
        self._units[u] = out
        return out

    def direct_expansion(self, u, D: int) -> SparsePoly:
        """``m(s) a_u(s)`` by explicit products and series inversion (slow reference)."""
        rec = a_u(self.data.v, self.data.B, u)
        if rec.is_zero:
            return SparsePoly.zero(self.h, "s")
        if set(rec.den_pure) - self.m_set:
            raise ZeroDenominator(f"a_u has an uncancelled pole for u={list(u)}", u=list(u))
        num = SparsePoly.constant(rec.const, self.h, "s")
        for j in sorted(self.m_set - set(rec.den_pure)) + list(rec.num_pure):
            num = num * self.forms[j]
        for f in rec.num_units:
            num = TruncatedSeries(num * (self.forms[f.j] + f.c), D).poly
        series = TruncatedSeries(num, D)
        if rec.den_units:
            den = SparsePoly.constant(1, self.h, "s")
            for f in rec.den_units:
                den = TruncatedSeries(den * (self.forms[f.j] + f.c), D).poly
            series = series * series_invert(TruncatedSeries(den, D))
        return series.poly

    # -- pairing with q -----------------------------------------------------

    def _y_power(self, gamma) -> SparsePoly:
        if gamma not in self._y_powers:
            out = SparsePoly.constant(1, self.n, "l")
            for k, a in enumerate(gamma):
                if a:
                    y = SparsePoly.linear_form(list(self.data.B[k]), "l")
                    out = out * y ** a
            self._y_powers[gamma] = out
        return self._y_powers[gamma]

    def table(self, q: SparsePoly) -> dict[tuple, SparsePoly]:
        key = tuple(sorted(q.terms.items()))
        if key not in self._tables:
            tab: dict[tuple, SparsePoly] = {}
            for nu, c in q.terms.items():
                # split nu = alpha + gamma
                for alpha in _sub_exponents(nu):
                    gamma = tuple(a - b for a, b in zip(nu, alpha))
                    coef = c * Fraction(exp_factorial(nu), exp_factorial(gamma))
                    term = self._y_power(gamma).scale(coef)
                    tab[alpha] = tab[alpha] + term if alpha in tab else term
            self._tables[key] = tab
        return self._tables[key]

    def coefficient(self, u, q: SparsePoly) -> SparsePoly:
        D = q.degree() if q else 0
        U = self.unit_expansion(tuple(u))
        tab = self.table(q)
        out = SparsePoly.zero(self.n, "l")
        for alpha, c in U.items():
            if sum(alpha) <= D and alpha in tab:
                out = out + tab[alpha].scale(c)
        return out

    def direct_coefficient(self, u, q: SparsePoly) -> SparsePoly:
        """Reference path: expand in the joint (s, l) ring and pair at s = 0."""
        D = q.degree() if q else 0
        ex = self.direct_expansion(tuple(u), D)
        h, n = self.h, self.n
        pad = (0,) * n
        lifted = SparsePoly(h + n, {e + pad: c for e, c in ex.terms.items()}, "sl")
        terms = {}
        for j in range(n):
            for k, b in enumerate(self.data.B):
                if b[j]:
                    e = [0] * (h + n)
                    e[k] = 1
                    e[h + j] = 1
                    terms[tuple(e)] = terms.get(tuple(e), 0) + b[j]
        E = exp_series(SparsePoly(h + n, terms, "sl"), D, graded=h)
        joint = TruncatedSeries(lifted, D, h) * E
        return pair_with(q, joint.poly, h, n)


def _sub_exponents(nu):
    if not nu:
        yield ()
        return
    for a in range(nu[0] + 1):
        for rest in _sub_exponents(nu[1:]):
            yield (a,) + rest


def pair_with(q: SparsePoly, joint: SparsePoly, h: int, n: int) -> SparsePoly:
    """``[q(d_s) . F(s, l)]|_{s=0} = sum_nu q_nu nu! [s^nu]F`` as a polynomial in l."""
    out: dict[tuple, Fraction] = {}
    for e, c in joint.terms.items():
        nu, lam = e[:h], e[h:]
        qc = q.terms.get(nu)
        if qc:
            val = out.get(lam, 0) + qc * c * exp_factorial(nu)
            if val:
                out[lam] = val
            else:
                del out[lam]
    return SparsePoly(n, out, "l")


def series_solution(data: PerturbationData, q: SparsePoly, T=None,
                    builder: SeriesBuilder | None = None) -> LogSeries:
    """``(q(d_s) . m(s) F_N(x, s))|_{s=0}`` truncated at weight T."""
    if not data.assumption.holds:
        raise AssumptionViolated(data.assumption.reason)
    if q.nvars != data.h:
        raise QNotInPerp(f"q must have {data.h} variables")
    if not in_perp(q, data.P_N):
        raise QNotInPerp("q does not annihilate P_N under the pairing")
    b = builder or SeriesBuilder(data, T)
    terms = {}
    D = q.degree() if q else 0
    for u, low in b.points:
        if low is None or low > D:
            continue
        p = b.coefficient(u, q)
        if p:
            terms[u] = p
    return LogSeries(data.v, terms, b.T, tuple(data.gb.weight), q)


def starting_term(data: PerturbationData, q: SparsePoly) -> tuple[tuple, SparsePoly]:
    """The u = 0 coefficient in closed form, ``Psi_B(m(d_z) * q)(log x)``."""
    m_op = data.m_s.relabel("dz")
    r = star_apply(m_op, q)
    return data.v, psi_B(r, data.B, "l")


# --------------------------------------------------------------------------
# verification


@dataclass
class Residual:
    operator: str
    shift: tuple
    weight: Fraction
    value: SparsePoly

    def to_json(self):
        return {"operator": self.operator, "x_exponent_minus_v": rational_list(self.shift),
                "weight": format_rational(self.weight), "value": self.value.to_json()}


@dataclass
class VerificationReport:
    passed: bool
    checked_weight: Fraction
    first_residual_weight: Fraction | None
    residuals: list[Residual] = field(default_factory=list)

    @property
    def weight(self) -> Fraction:
        """Weight up to which all residuals vanish."""
        return self.checked_weight if self.first_residual_weight is None else min(
            self.checked_weight, self.first_residual_weight)

    def to_json(self, limit: int = 10):
        return {"pass": self.passed, "weight": format_rational(self.weight),
                "checked_weight": format_rational(self.checked_weight),
                "first_residual_weight": None if self.first_residual_weight is None
                else format_rational(self.first_residual_weight),
                "residuals": [r.to_json() for r in self.residuals[:limit]]}


def _apply_partials(alpha: list[Fraction], p: SparsePoly, e: Sequence[int]):
    """``d^e . (x^alpha p(l)) = x^(alpha - e) p'(l)``."""
    alpha = list(alpha)
    for j, k in enumerate(e):
        for _ in range(k):
            p = p.scale(alpha[j]) + p.derivative(j)
            alpha[j] -= 1
    return tuple(alpha), p


def verify_annihilation_direct(series: LogSeries, A: AMatrix, beta: Sequence, gb: ToricBasis,
                               weight_checked=None) -> VerificationReport:
    """Term-by-term reference implementation of :func:`verify_annihilation`."""
    beta = [as_fraction(b) for b in beta]
    w = series.w
    n = series.n
    bound = _checked_bound(series, gb, weight_checked)
    residuals: list[Residual] = []
    for u, p in series.sorted_items():
        alpha = [x + y for x, y in zip(series.v, u)]
        for i, row in enumerate(A.entries):
            r = SparsePoly.zero(n, "l")
            for j, a in enumerate(row):
                if a:
                    r = r + (p.scale(alpha[j]) + p.derivative(j)).scale(a)
            r = r - p.scale(beta[i])
            if r:
                residuals.append(Residual(f"euler {i + 1}", tuple(u), dot(u, w), r))
    for k, b in enumerate(gb):
        acc: dict[tuple, SparsePoly] = {}
        for u, p in series.terms.items():
            alpha = [x + y for x, y in zip(series.v, u)]
            for sign, e in ((1, b.plus), (-1, b.minus)):
                target, val = _apply_partials(alpha, p, e)
                t = tuple(x - y for x, y in zip(target, series.v))
                acc[t] = acc.get(t, SparsePoly.zero(n, "l")) + (val if sign > 0 else -val)
        for t, val in acc.items():
            if val:
                residuals.append(Residual(f"binomial {k + 1}", t, dot(t, w), val))
    return _report(residuals, bound)


def _checked_bound(series, gb, weight_checked):
    shift = max((dot(b.plus, series.w) for b in gb), default=0)
    return series.T - shift if weight_checked is None else as_fraction(weight_checked)


def _report(residuals, bound) -> VerificationReport:
    residuals.sort(key=lambda r: (r.weight, r.operator, r.shift))
    inside = [r for r in residuals if r.weight <= bound]
    first = inside[0].weight if inside else None
    return VerificationReport(not inside, bound, first, inside)


_INT64_SAFE = 1 << 62


class _TermMatrix:
    """Series coefficients as an integer matrix over a monomial basis in l.

    Row r holds ``scale * p_(u_r)``; the basis is closed under division so
    that derivatives stay inside it.
    """

    def __init__(self, series: LogSeries):
        items = series.sorted_items()
        self.us = [u for u, _ in items]
        monos = set()
        for _, p in items:
            for e in p.terms:
                stack = [e]
                while stack:
                    f = stack.pop()
                    if f in monos:
                        continue
                    monos.add(f)
                    for j, a in enumerate(f):
                        if a:
                            stack.append(f[:j] + (a - 1,) + f[j + 1:])
        self.monos = sorted(monos)
        self.index = {e: i for i, e in enumerate(self.monos)}
        self.scale = 1
        for _, p in items:
            for c in p.terms.values():
                self.scale = lcm(self.scale, c.denominator)
        rows = [[0] * len(self.monos) for _ in items]
        for r, (_, p) in enumerate(items):
            for e, c in p.terms.items():
                rows[r][self.index[e]] = int(c * self.scale)
        self.rows = rows
        self.max_abs = max((abs(x) for row in rows for x in row), default=0)
        self.degree = max((sum(e) for e in self.monos), default=0)
        n = series.n
        self.deriv = []
        for j in range(n):
            src, tgt, mult = [], [], []
            for i, e in enumerate(self.monos):
                if e[j]:
                    src.append(i)
                    tgt.append(self.index[e[:j] + (e[j] - 1,) + e[j + 1:]])
                    mult.append(e[j])
            self.deriv.append((np.array(src, dtype=np.int64), np.array(tgt, dtype=np.int64),
                               np.array(mult, dtype=np.int64)))

    def array(self, dtype):
        if dtype is object:
            out = np.empty((len(self.rows), len(self.monos)), dtype=object)
            out[:, :] = self.rows if self.rows else out
            return out
        return np.array(self.rows, dtype=np.int64).reshape(len(self.rows), len(self.monos))

    def derivative(self, M, j):
        src, tgt, mult = self.deriv[j]
        out = np.zeros_like(M)
        if len(src):
            out[:, tgt] = M[:, src] * (mult if M.dtype != object else mult.astype(object))
        return out

    def to_poly(self, row, denom, n) -> SparsePoly:
        return SparsePoly(n, {e: Fraction(int(x), denom) for e, x in zip(self.monos, row) if x}, "l")


def verify_annihilation(series: LogSeries, A: AMatrix, beta: Sequence, gb: ToricBasis,
                        weight_checked=None) -> VerificationReport:
    """Apply the Euler operators and the Groebner binomials to a truncated series.

    Uses ``theta_j . (x^a p(l)) = x^a (a_j p + d_(l_j) p)`` and
    ``d_j . (x^a p(l)) = x^(a - e_j) (a_j p + d_(l_j) p)``. Residuals are
    indexed by ``t = exponent - v``; a binomial residual at t sees every
    contributing term once ``t.w <= T - max(g+.w)``, the weight up to which
    vanishing is required. Arithmetic is exact: coefficients are scaled to
    integers, and matrices fall back to Python integers when int64 could
    overflow.
    """
    beta = [as_fraction(b) for b in beta]
    n = series.n
    bound = _checked_bound(series, gb, weight_checked)
    residuals: list[Residual] = []
    if not series.terms:
        return _report(residuals, bound)
    tm = _TermMatrix(series)
    dv = 1
    for x in series.v:
        dv = lcm(dv, x.denominator)
    vd = [int(x * dv) for x in series.v]
    U = np.array(tm.us, dtype=np.int64).reshape(len(tm.us), n)
    where = {u: r for r, u in enumerate(tm.us)}
    deg = tm.degree

    def pick_dtype(factors):
        growth = tm.max_abs * 2
        for f in factors:
            growth *= f
        return np.int64 if growth < _INT64_SAFE else object

    umax = int(np.abs(U).max()) if U.size else 0
    vmax = max((abs(x) for x in vd), default=0)
    alpha_big = vmax + dv * umax
    # Euler operators, scaled by dv
    for i, row in enumerate(A.entries):
        a_sum = sum(abs(a) for a in row)
        dtype = pick_dtype([a_sum * (alpha_big + dv * deg) + abs(beta[i] * dv) + 1])
        M = tm.array(dtype)
        base = U * dv + np.array(vd, dtype=np.int64)
        coef = base @ np.array(row, dtype=np.int64) - int(beta[i] * dv)
        R = coef.astype(dtype).reshape(-1, 1) * M
        for j, a in enumerate(row):
            if a:
                R = R + tm.derivative(M, j) * (dv * a)
        for r in np.nonzero((R != 0).any(axis=1))[0]:
            u = tm.us[r]
            residuals.append(Residual(f"euler {i + 1}", u, dot(u, series.w),
                                      tm.to_poly(R[r], tm.scale * dv, n)))

    def side(M, e, dtype):
        alpha = U * dv + np.array(vd, dtype=np.int64)
        if dtype is object:
            alpha = alpha.astype(object)
        for j, k in enumerate(e):
            for step in range(k):
                a = (alpha[:, j] - dv * step).reshape(-1, 1)
                M = a * M + tm.derivative(M, j) * dv
        return M

    gmax = max((max(abs(x) for x in b.g) for b in gb), default=0)
    lo = int(U.min()) - gmax
    radix = int(U.max()) + gmax - lo + 1
    powers = None
    if radix ** n < _INT64_SAFE:
        powers = radix ** np.arange(n - 1, -1, -1, dtype=np.int64)
        keys = (U - lo) @ powers
        order = np.argsort(keys)
        sorted_keys = keys[order]

    def partners(g):
        if powers is None:
            return np.array([where.get(tuple(x - y for x, y in zip(u, g)), -1) for u in tm.us],
                            dtype=np.int64)
        want = (U - np.array(g, dtype=np.int64) - lo) @ powers
        pos = np.minimum(np.searchsorted(sorted_keys, want), len(keys) - 1)
        return np.where(sorted_keys[pos] == want, order[pos], -1)

    for k, b in enumerate(gb):
        kp, km = sum(b.plus), sum(b.minus)
        top = max(kp, km)
        factor = alpha_big + dv * (max(b.plus + b.minus) + deg)
        dtype = pick_dtype([factor] * top + [dv ** top])
        M = tm.array(dtype)
        P = side(M, b.plus, dtype) * (dv ** (top - kp))
        Q = side(M, b.minus, dtype) * (dv ** (top - km))
        partner = partners(b.g)
        found = partner >= 0
        V = P.copy()
        V[found] = V[found] - Q[partner[found]]
        denom = tm.scale * dv ** top
        for r in np.nonzero((V != 0).any(axis=1))[0]:
            t = tuple(x - y for x, y in zip(tm.us[r], b.plus))
            residuals.append(Residual(f"binomial {k + 1}", t, dot(t, series.w),
                                      tm.to_poly(V[r], denom, n)))
        unused = np.ones(len(tm.us), dtype=bool)
        unused[partner[found]] = False
        for r in np.nonzero(unused & (Q != 0).any(axis=1))[0]:
            t = tuple(x - y for x, y in zip(tm.us[r], b.minus))
            residuals.append(Residual(f"binomial {k + 1}", t, dot(t, series.w),
                                      tm.to_poly(-Q[r], denom, n)))
    return _report(residuals, bound)


# --------------------------------------------------------------------------
# fundamental systems


@dataclass
class ExponentSolutions:
    v: tuple[Fraction, ...]
    data: PerturbationData | None
    solutions: list[LogSeries]
    starting_terms: list[SparsePoly]
    verification: list[VerificationReport]
    report: dict

    def to_json(self):
        sols = []
        for s, st, ver in zip(self.solutions, self.starting_terms, self.verification):
            d = s.to_json()
            d["starting_term"] = st.to_json()
            d["verify"] = ver.to_json()
            sols.append(d)
        return {"exponent": rational_list(self.v), "report": self.report, "solutions": sols}


@dataclass
class FundamentalSystem:
    A: AMatrix
    beta: tuple
    gb: ToricBasis
    T: Fraction
    exponents: list[ExponentSolutions]

    @property
    def solutions(self) -> list[LogSeries]:
        return [s for e in self.exponents for s in e.solutions]

    @property
    def passed(self) -> bool:
        return all(r.passed for e in self.exponents for r in e.verification)


def fundamental_system(A: AMatrix, beta: Sequence, w: Sequence, T=None, radius: int | None = None,
                       B: Sequence[Sequence[int]] | Callable | None = None,
                       gb: ToricBasis | None = None) -> FundamentalSystem:
    """Series solutions for every fake exponent, each verified against H_A(beta).

    ``B`` may be a fixed list of lattice vectors, a callable ``v -> B``, or
    None for the canonical kernel basis.
    """
    beta = tuple(as_fraction(b) for b in beta)
    gb = gb or toric_groebner(A, w)
    T = default_truncation(gb) if T is None else as_fraction(T)
    out = []
    for fe in fake_exponents(A, beta, gb):
        v = fe.v
        Bv = B(v) if callable(B) else B
        try:
            data = perturbation_data(A, beta, gb, v, Bv, radius)
        except AssumptionViolated as exc:
            out.append(ExponentSolutions(v, None, [], [], [], {"error": exc.to_dict()}))
            continue
        builder = SeriesBuilder(data, T)
        sols, starts, checks = [], [], []
        for q in data.PN_perp:
            s = series_solution(data, q, T, builder)
            sols.append(s)
            starts.append(starting_term(data, q)[1])
            checks.append(verify_annihilation(s, A, beta, gb))
        qv = q_v_perp(data)
        et = exponent_test(data)
        zero = tuple([0] * A.n)
        report = {
            "dim_PN_perp": len(data.PN_perp),
            "dim_PB_perp": len(data.PB_perp),
            "dim_Qv_perp": len(qv),
            "PN_equals_m_PB": data.flags["PN_equals_m_PB"],
            "exponent_test": et.to_json(),
            "stabilized": data.supports.stabilized,
            "starting_term_rank": _rank_of(starts),
            "starting_terms_match_series": all(
                st == s.coefficient(zero) for st, s in zip(starts, sols)),
            "verify_pass": all(c.passed for c in checks),
        }
        out.append(ExponentSolutions(v, data, sols, starts, checks, report))
    return FundamentalSystem(A, beta, gb, T, out)


def _rank_of(polys: Sequence[SparsePoly]) -> int:
    monos = sorted({e for p in polys for e in p.terms})
    if not monos:
        return 0
    return rank([[p.terms.get(e, Fraction(0)) for e in monos] for p in polys])
