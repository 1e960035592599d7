"""Acceptance criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python3 tests/test_acceptance.py``.
"""
import itertools
import random
import sys
import time
import warnings
from fractions import Fraction
from math import comb
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import data_for, groebner_for, spec_for, system_for  # noqa: E402
from gkzlog.families import fixture, make_aomoto, make_fc  # noqa: E402
from gkzlog.indicial import fake_exponents, standard_pairs  # noqa: E402
from gkzlog.logseries import default_truncation, fundamental_system, starting_term  # noqa: E402
from gkzlog.perturb import (IdealRecord, exponent_test, perturbation_data, q_v_perp,  # noqa: E402
                            span_contains, span_rank, star_apply)
from gkzlog.polycore import LEX, SparsePoly, apply_diffop, normal_form, s_polynomial  # noqa: E402
from gkzlog.toricgb import toric_groebner  # noqa: E402
from gkzlog.validation import sorted_index_sets  # noqa: E402

FIXTURES = ["sst352", "noncm", "sst363"]
FAMILIES = ["aomoto2x2", "aomoto2x3", "aomoto2x4", "aomoto3x3", "fc2", "fc3", "fc4"]


def emit(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line, flush=True)
    return ok


def timed(fn):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        t = time.perf_counter()
        out = fn()
        return out, time.perf_counter() - t


def lin(coeffs, ring="x"):
    return SparsePoly.linear_form(coeffs, ring)


def criterion_1():
    def work():
        spec = fixture("sst352")
        gb = toric_groebner(spec.A, spec.w)
        data = perturbation_data(spec.A, spec.beta, gb, spec.v, spec.B)
        return spec, gb, data, q_v_perp(data)
    (spec, gb, data, qv), dt = timed(work)
    g1, g2 = spec.B
    want_qv = [SparsePoly.constant(1, 5, "x"), lin(g1), lin(g2), lin(g1) * lin(g2)]
    checks = [
        sorted(gb.vectors) == sorted([(1, 0, 1, 0, -2), (0, 1, 0, 1, -2)]),
        sorted_index_sets(data.supports.N) == [[], [5]],
        len(data.supports.Nc) == 5,
        {tuple(g.terms.items()) for g in data.P_N.gb} == {(((2, 0), 1),), (((0, 2), 1),)},
        len(data.PN_perp) == 4,
        span_rank(qv.operators) == 4 and span_contains(qv.operators, want_qv)
        and span_contains(want_qv, qv.operators),
        dt < 5,
    ]
    return emit(1, all(checks), f"sst352 pipeline checks {checks}, {dt:.2f}s (< 5s)")


def criterion_2():
    def work():
        spec = fixture("noncm")
        gb = toric_groebner(spec.A, spec.w)
        data = perturbation_data(spec.A, spec.beta, gb, spec.v, spec.B)
        return spec, data, exponent_test(data)
    (spec, data, test), dt = timed(work)
    leads = lambda P: sorted(g.lead_monomial(P.order) for g in P.gb)
    monic = lambda P: all(len(g.terms) == 1 for g in P.gb)
    m_op = data.m_s.relabel("dz")
    checks = [
        leads(data.P_N) == [(0, 2), (1, 1), (2, 0)] and monic(data.P_N),
        leads(data.P_B) == [(0, 1), (1, 0)] and monic(data.P_B),
        data.P_N.contains(data.m_s),
        all(star_apply(m_op, q).is_zero() for q in data.PN_perp),
        test.status == "inconclusive",
        dt < 5,
    ]
    return emit(2, all(checks), f"noncm checks {checks}, {dt:.2f}s (< 5s)")


def criterion_3():
    def work():
        spec = fixture("sst363")
        gb = toric_groebner(spec.A, spec.w)
        data = perturbation_data(spec.A, spec.beta, gb, spec.v, spec.B)
        return spec, gb, data, q_v_perp(data)
    (spec, gb, data, qv), dt = timed(work)
    by_vector = {b.g: S for b, S in zip(gb, data.g_sets)}
    gsets = [sorted(j + 1 for j in by_vector.get(b, ())) for b in spec.B]
    h = 6
    s = [SparsePoly.variable(i, h) for i in range(h)]
    want = [s[0] * s[1], s[0] * s[2], s[0] * s[3], s[1] * s[2], s[1] * s[3], s[2] * s[2],
            s[3] * s[3], s[0] * s[0] + s[2] * s[3], s[1] * s[1] + s[2] * s[3], s[4], s[5]]
    got = sorted(tuple(sorted(g.terms.items())) for g in data.P_B.gb)
    want_q = {(0, 0, 1, 1, 0, 0): Fraction(1), (2, 0, 0, 0, 0, 0): Fraction(-1, 2),
              (0, 2, 0, 0, 0, 0): Fraction(-1, 2)}
    checks = [
        len(gb) == 20,
        all(b in by_vector for b in spec.B) and gsets == spec.expected["G_sets"],
        data.P_B.order == LEX and got == sorted(tuple(sorted(p.terms.items())) for p in want),
        len(qv) == 6,
        any(q.terms == want_q for q in data.PN_perp),
        dt < 60,
    ]
    return emit(3, all(checks), f"sst363 checks {checks}, {dt:.2f}s (< 60s)")


def criterion_4():
    def work():
        rows = []
        for m, l in [(2, 2), (2, 3), (2, 4), (3, 3)]:
            spec = make_aomoto(m, l)
            gb = toric_groebner(spec.A, spec.w)
            data = perturbation_data(spec.A, spec.beta, gb, spec.v, spec.B)
            zero = [p for p in standard_pairs(gb.initial_ideal(), spec.A.n) if not any(p.anchor)]
            rows.append((m, l, len(data.PB_perp), len(zero)))
        return rows
    rows, dt = timed(work)
    ok = all(a == b == comb(m + l - 2, m - 1) for m, l, a, b in rows) and dt < 120
    ok &= [r[2] for r in rows] == [2, 3, 4, 6]
    return emit(4, ok, f"(m,l,dim PB_perp,anchor-0 pairs) {rows}, {dt:.2f}s (< 120s)")


def criterion_5():
    def work():
        rows = []
        for m in (2, 3, 4):
            spec = make_fc(m)
            gb = toric_groebner(spec.A, spec.w)
            fs = fundamental_system(spec.A, spec.beta, spec.w, B=spec.B, gb=gb)
            (e,) = fs.exponents
            pb = sorted(g.lead_monomial(e.data.P_B.order) for g in e.data.P_B.gb)
            squares = sorted(tuple(2 * (k == i) for k in range(m - 1)) for i in range(m - 1))
            rows.append((m, len(q_v_perp(e.data)), pb == squares and all(
                len(g.terms) == 1 for g in e.data.P_B.gb), len(e.solutions)))
        return rows
    rows, dt = timed(work)
    ok = all(q == n == 2 ** (m - 1) and pb for m, q, pb, n in rows) and dt < 60
    return emit(5, ok, f"(m,dim Q0_perp,P_B squares,#solutions) {rows}, {dt:.2f}s (< 60s)")


def criterion_6():
    details, ok = [], True
    for name in FIXTURES + FAMILIES:
        fs = system_for(name)
        T = default_truncation(fs.gb)
        shift = max(sum(x * y for x, y in zip(b.plus, fs.gb.weight)) for b in fs.gb)
        reports = [r for e in fs.exponents for r in e.verification]
        errors = [e for e in fs.exponents if e.data is None]
        good = (fs.T == T and bool(reports) and not errors
                and all(r.passed and not r.residuals and r.weight >= T - shift for r in reports))
        ok &= good
        details.append(f"{name}:{len(reports)}{'ok' if good else 'BAD'}")
    return emit(6, ok, "series verified to T - maxshift, T = 3 max(g.w): " + " ".join(details))


def criterion_7():
    rng = random.Random(2024)
    fails = []
    # S-polynomials of every toric basis reduce to zero
    for name in FIXTURES + FAMILIES:
        gb = groebner_for(name)
        polys = [SparsePoly(len(b.g), {b.plus: 1, b.minus: -1}, "d") for b in gb]
        if not all(normal_form(s_polynomial(a, b, gb.order), polys, gb.order).is_zero()
                   for a, b in itertools.combinations(polys, 2)):
            fails.append(f"spair:{name}")
    # ideal chain m P_B <= P_N <= P_B
    for name in FIXTURES + FAMILIES:
        d = data_for(name)
        mPB = IdealRecord("mPB", [d.m_s * g for g in d.P_B.generators], d.P_N.order)
        if not (d.P_N.contains_ideal(mPB) and d.P_B.contains_ideal(d.P_N)):
            fails.append(f"chain:{name}")

    def rp(h, deg, ring, k=3):
        out = {}
        for _ in range(k):
            e = [0] * h
            for _ in range(rng.randint(0, deg)):
                e[rng.randrange(h)] += 1
            out[tuple(e)] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        return SparsePoly(h, out, ring)
    n_assoc = n_adj = 0
    for _ in range(200):
        h = rng.randint(1, 3)
        U, V, q = rp(h, 2, "dz"), rp(h, 2, "dz"), rp(h, 4, "ds", 4)
        n_assoc += star_apply(U, star_apply(V, q)) == star_apply(U * V, q)
        W, q2, f = rp(h, 3, "s"), rp(h, 3, "ds"), rp(h, 3, "s")
        n_adj += apply_diffop(q2, W * f).constant_term() == apply_diffop(
            star_apply(W.relabel("dz"), q2), f).constant_term()
    if n_assoc != 200:
        fails.append(f"assoc:{n_assoc}/200")
    if n_adj != 200:
        fails.append(f"adjunction:{n_adj}/200")
    # m in P_N iff m(d_z) * P_N^perp = 0, on both fixtures
    for name in ("sst352", "noncm"):
        d = data_for(name)
        killed = all(star_apply(d.m_s.relabel("dz"), q).is_zero() for q in d.PN_perp)
        if d.P_N.contains(d.m_s) != killed:
            fails.append(f"membership:{name}")
    # starting terms agree with the u = 0 series coefficient
    n_start = 0
    for name in FIXTURES + FAMILIES:
        for e in system_for(name).exponents:
            for q, s in zip(e.data.PN_perp if e.data else [], e.solutions):
                n_start += 1
                if starting_term(e.data, q)[1] != s.coefficient((0,) * e.data.n):
                    fails.append(f"start:{name}")
    ok = not fails
    return emit(7, ok, f"S-pairs, chain, star assoc {n_assoc}/200, adjunction {n_adj}/200, "
                       f"membership test, {n_start} starting terms; failures {fails}")


def criterion_8():
    flags = []
    for name in FIXTURES:
        spec = spec_for(name)
        gb = groebner_for(name)
        for fe in fake_exponents(spec.A, spec.beta, gb):
            d = (data_for(name) if fe.v == tuple(spec.v)
                 else perturbation_data(spec.A, spec.beta, gb, fe.v, spec.B))
            flags.append((name, d.supports.stabilized))
    for name in FAMILIES:
        flags.append((name, data_for(name).supports.stabilized))
    ok = all(f for _, f in flags)
    bad = [n for n, f in flags if not f]
    return emit(8, ok, f"stabilized at default radius for {len(flags)} bundled exponents; "
                       f"unstabilized {bad}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 9)])
def test_acceptance(criterion, capsys):
    with capsys.disabled():
        print()
        ok = criterion()
    assert ok


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
