import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gkzlog.families import aomoto_columns
from gkzlog.indicial import (distraction_generators, fake_exponents, fake_indicial_generators,
                             falling_at, g_sets, standard_pairs, theta_falling)
from gkzlog.toricgb import MonomialIdeal


def brute_pairs(gens, n, top=3):
    """Maximal (anchor, face) pairs found by exhaustive search in a box."""
    M = MonomialIdeal(tuple(gens))
    out = []
    for a in itertools.product(range(top), repeat=n):
        if M.contains(a):
            continue
        zeros = [j for j in range(n) if a[j] == 0]
        for r in range(len(zeros) + 1):
            for face in itertools.combinations(zeros, r):
                ok = all(any(g[j] > a[j] for j in range(n) if j not in face) for g in gens)
                if ok:
                    out.append((a, frozenset(face)))

    def inside(p, q):
        return p[1] <= q[1] and all(x >= y and (x == y or j in q[1])
                                    for j, (x, y) in enumerate(zip(p[0], q[0])))
    return {p for p in out if not any(q != p and inside(p, q) for q in out)}


def test_single_generator():
    pairs = standard_pairs(MonomialIdeal(((1, 0),)), 2)
    assert [(p.anchor, p.face) for p in pairs] == [((0, 0), frozenset({1}))]


def test_sst352_pairs(get_gb):
    pairs = standard_pairs(get_gb("sst352").initial_ideal(), 5)
    assert len(pairs) == 4
    assert all(not any(p.anchor) and len(p.face) == 3 for p in pairs)
    assert {(p.anchor, p.face) for p in pairs} == brute_pairs(
        [(1, 0, 1, 0, 0), (0, 1, 0, 1, 0)], 5, 2)


@pytest.mark.parametrize("gens", [[(2, 0, 1), (0, 1, 1)], [(1, 1, 0), (0, 2, 0), (1, 0, 2)],
                                  [(2, 1, 0), (0, 0, 2)]])
def test_pairs_match_exhaustive_search(gens):
    got = {(p.anchor, p.face) for p in standard_pairs(MonomialIdeal(tuple(gens)), 3)}
    assert got == brute_pairs(gens, 3, 3)


@given(st.lists(st.tuples(*[st.integers(0, 2)] * 3).filter(any), min_size=1, max_size=3),
       st.tuples(*[st.integers(0, 6)] * 3))
def test_pairs_cover_exactly_standard_monomials(gens, e):
    if sum(e) > 6:
        return
    M = MonomialIdeal(tuple(gens))
    pairs = standard_pairs(M, 3)
    assert M.contains(e) != any(p.monomial_covered(e) for p in pairs)


def staircase_paths(m, l):
    out = []
    # south-west corner to north-east corner, moving north or east
    for norths in itertools.combinations(range(m + l - 2), m - 1):
        i, j, cells = m, m + 1, [(m, m + 1)]
        for step in range(m + l - 2):
            if step in norths:
                i -= 1
            else:
                j += 1
            cells.append((i, j))
        out.append(frozenset(cells))
    return out


@pytest.mark.parametrize("m,l", [(2, 2), (2, 3), (2, 4), (3, 3)])
def test_aomoto_anchor_zero_pairs_are_staircase_paths(m, l, get_spec, get_gb):
    name = f"aomoto{m}x{l}"
    spec = get_spec(name)
    cols = aomoto_columns(m, l)
    pairs = [p for p in standard_pairs(get_gb(name).initial_ideal(), spec.A.n) if not any(p.anchor)]
    faces = {frozenset(cols[j] for j in p.face) for p in pairs}
    assert faces == set(staircase_paths(m, l))
    assert len(pairs) == spec.expected["standard_pairs_anchor0"]


def test_sst352_fake_exponent(get_spec, get_gb):
    spec = get_spec("sst352")
    found = fake_exponents(spec.A, spec.beta, get_gb("sst352"))
    assert [fe.v for fe in found] == [(0, 0, 0, 0, 1)]


@pytest.mark.parametrize("name", ["aomoto2x3", "aomoto3x3", "fc3", "fc4"])
def test_unique_zero_exponent_for_families(name, get_spec, get_gb):
    spec = get_spec(name)
    found = fake_exponents(spec.A, spec.beta, get_gb(name))
    assert [fe.v for fe in found] == [tuple([0] * spec.A.n)]


@pytest.mark.parametrize("name", ["sst352", "noncm", "sst363", "fc3"])
def test_fake_exponents_kill_fake_indicial_ideal(name, get_spec, get_gb):
    spec, gb = get_spec(name), get_gb(name)
    found = fake_exponents(spec.A, spec.beta, gb)
    assert found.exponents
    gens = fake_indicial_generators(spec.A, spec.beta, gb)
    for fe in found:
        assert spec.A.apply(fe.v) == tuple(spec.beta)
        assert all(g.evaluate(fe.v) == 0 for g in gens)


def test_noncm_contains_target(get_spec, get_gb):
    spec = get_spec("noncm")
    vs = [fe.v for fe in fake_exponents(spec.A, spec.beta, get_gb("noncm"))]
    assert (0, -2, -1, 1) in vs


def test_g_sets(get_spec, get_gb):
    gb = get_gb("sst352")
    pos = {b.g: S for b, S in zip(gb, g_sets(gb, (0, 0, 0, 0, 1)))}
    assert pos[(1, 0, 1, 0, -2)] == {0, 2} and pos[(0, 1, 0, 1, -2)] == {1, 3}
    spec, gb = get_spec("noncm"), get_gb("noncm")
    pos = {b.g: S for b, S in zip(gb, g_sets(gb, spec.v))}
    want = dict(zip(map(tuple, spec.expected["groebner"]), spec.expected["G_sets"]))
    for g, S in want.items():
        assert sorted(j + 1 for j in pos[g]) == S


def test_g_sets_for_nonnegative_exponent_with_squarefree_leads(get_gb):
    gb = get_gb("fc3")
    for b, S in zip(gb, g_sets(gb, (0,) * 6)):
        assert S == {j for j, x in enumerate(b.plus) if x}


def test_distraction_localizes_at_v(get_spec, get_gb):
    spec, gb = get_spec("noncm"), get_gb("noncm")
    dist = distraction_generators(gb, spec.v)
    for p, q in zip(dist.monomial_part, dist.localized):
        assert p.evaluate(spec.v) == 0
        assert q.evaluate(spec.v) == 0 or not q.degree()
    assert theta_falling((2,)).evaluate((Fraction(5),)) == 20


def test_falling_at():
    assert falling_at((5, Fraction(1, 2)), (2, 2)) == 20 * Fraction(1, 2) * Fraction(-1, 2)
