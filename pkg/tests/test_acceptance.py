"""Acceptance criteria, one marked group per criterion.

The terminal summary (see conftest) prints one PASS/FAIL line per criterion.
All comparisons are exact unless the label names a tolerance.
"""

import itertools
import random
from fractions import Fraction

import pytest

from aed.bounds import LINE_Q, all_bounds
from aed.congruence import CongruenceCode, count, density, max_index
from aed.detector import ExplicitCode, is_aed, min_hamming_distance, packing_set, verify_packing
from aed.params import ChannelParams, Mode, normalize
from aed.search import admissible_params, build_conflict_graph, expand_grid, greedy_lower_bound, search, sweep
from aed.simulator import Adversary, run

from oracles import congruence_count, detects

F, C, Z = Mode.FINITE, Mode.CYCLIC, Mode.INTEGER

DIVISIBLE = [(q, n, t) for q in range(2, 9) for n in (1, 2, 3) for t in (1, 2, 3) if q % (t + 1) == 0]


def with_t(q, n, t, mode):
    return [p for p in admissible_params(q, n, mode) if p.t == t]


def crit(num, label):
    return pytest.mark.criterion(num, label)


@crit(1, "divisible congruence codes: count == q^n/(t+1) and AED for all j, (a,h) [exact]")
@pytest.mark.parametrize("q,n,t", DIVISIBLE)
def test_c1_divisible_congruence_codes(q, n, t):
    channels = with_t(q, n, t, F)
    assert channels
    for j in range(t + 1):
        code = CongruenceCode(n, t, j, q, F)
        assert count(code) == q**n // (t + 1) == congruence_count(q, n, t, j)
        words = ExplicitCode.from_congruence(code)
        for p in channels:
            assert is_aed(words, p).holds, (p, j)


@crit(2, "finite optimum == line bound q^n/(t+1) where applicable, with and without bound pruning [exact]")
@pytest.mark.parametrize("use_bounds", [True, False])
@pytest.mark.parametrize("q,n,t", DIVISIBLE)
def test_c2_line_bound_sharp(q, n, t, use_bounds):
    checked = 0
    for p in with_t(q, n, t, F):
        line = {b.name: b for b in all_bounds(p)}[LINE_Q]
        if not line.applicable:
            continue
        r = search(p, use_bounds=use_bounds)
        assert r.exact and r.lower == line.value == q**n // (t + 1), p
        assert is_aed(r.witness, p)
        checked += 1
    assert checked


@crit(3, "cyclic optimum == q^n/(t+1) and attained by a congruence code [exact]")
@pytest.mark.parametrize("q,n,t", DIVISIBLE)
def test_c3_cyclic_optimum(q, n, t):
    target = q**n // (t + 1)
    for p in with_t(q, n, t, C):
        r = search(p, use_bounds=False)
        assert r.exact and r.lower == target, p
        attained = [
            j for j in range(t + 1)
            if count(CongruenceCode(n, t, j, q, C)) == target
            and is_aed(ExplicitCode.from_congruence(CongruenceCode(n, t, j, q, C)), p)
        ]
        assert attained, p


@crit(4, "packing of C(n;t) by S in window k=8 and |S| == t+1, n<=3, t<=6 [exact]")
@pytest.mark.parametrize("n,t", [(n, t) for n in (1, 2, 3) for t in range(1, 7)])
def test_c4_packing(n, t):
    code = CongruenceCode(n, t)
    seen = 0
    for a in range(1, t + 1):
        for h in range(1, n + 1):
            if a * h < t:
                continue
            p = ChannelParams(None, n, a, h, t, Z)
            S = packing_set(p)
            assert len(S) == t + 1
            assert verify_packing(code, S, 8), p
            seen += 1
    assert seen


@crit(5, "density of C(n;t) at k=1000 within 2n/k of 1/(t+1), n<=3, t<=6 [tol 2n/k]")
@pytest.mark.parametrize("n,t", [(n, t) for n in (1, 2, 3) for t in range(1, 7)])
def test_c5_density(n, t):
    k = 1000
    rep = density(CongruenceCode(n, t), k)
    assert rep.exact == Fraction(1, t + 1)
    assert abs(rep.empirical - Fraction(1, t + 1)) <= Fraction(2 * n, k)


def _unrestricted_grid():
    seen = []
    for q, n, t in itertools.product(range(2, 7), (1, 2), range(1, 5)):
        p = normalize(ChannelParams(q, n, None, None, t, F))
        if p not in seen:
            seen.append(p)
    return seen


@crit(6, "finite (.,.,t) optimum == |C_q^(j*)(n;t)| with j* = floor((q-1)n/2) mod (t+1), q<=6, n<=2, t<=4 [exact]")
@pytest.mark.parametrize("p", _unrestricted_grid(), ids=lambda p: p.format())
def test_c6_closed_form_index_is_optimal(p):
    r = search(p)
    assert r.exact
    jstar = max_index(p.q, p.n, p.t)
    assert r.lower == count(CongruenceCode(p.n, p.t, jstar, p.q, F))


def _random_codes(num, seed):
    rng = random.Random(seed)
    out = []
    for _ in range(num):
        q, n = rng.randint(2, 4), rng.randint(1, 4)
        space = list(itertools.product(range(q), repeat=n))
        size = rng.randint(1, min(len(space), 12))
        out.append((q, n, ExplicitCode.from_words(rng.sample(space, size), q, n)))
    return out


def _congruence_codes():
    out = []
    for q, n in itertools.product(range(2, 5), range(1, 5)):
        for t in range(1, (q - 1) * n + 1):
            for j in range(t + 1):
                code = ExplicitCode.from_congruence(CongruenceCode(n, t, j, q, C))
                if len(code):
                    out.append((q, n, code))
    return out


@crit(7, "cyclic (.,h,.) AED <=> min Hamming distance > h on 200 random + all congruence codes, q,n<=4 [exact]")
@pytest.mark.parametrize("family", ["random", "congruence"])
def test_c7_cyclic_hamming(family):
    codes = _random_codes(200, seed=20240) if family == "random" else _congruence_codes()
    for q, n, code in codes:
        d = min_hamming_distance(code) if len(code) > 1 else n + 1
        for h in range(1, n + 1):
            p = normalize(ChannelParams(q, n, None, h, None, C))
            assert is_aed(code, p).holds == (d > h), (q, n, h, code.words)


@crit(8, "1e5-trial simulation on C_6^(j)(2;2): zero in-model misses, weight-3 adversary misses > 0 [exact]")
@pytest.mark.parametrize("j", [0, 1, 2])
def test_c8_simulation(j):
    code = CongruenceCode(2, 2, j, 6, F)
    p = normalize(ChannelParams(6, 2, 2, 2, 2, F))
    rep = run(code, p, 100_000, seed=j)
    assert rep.in_model_misses == 0 and rep.misses == 0
    for adv in (Adversary(3), Adversary(3, coordinate=0)):
        rep = run(code, p, 100_000, seed=j, out_of_model=adv)
        assert rep.in_model_misses == 0
        assert rep.misses > 0


@crit(9, "sweep q<=5, n<=2, both modes: optimum within every applicable bound, witness AED, greedy <= exact [exact]")
@pytest.mark.parametrize("mode", ["finite", "cyclic"])
def test_c9_sweep_consistency(mode):
    grid = expand_grid({"q": [2, 3, 4, 5], "n": [1, 2], "modes": [mode], "max_vertices": 1024})
    assert grid
    for row in sweep(grid, use_bounds=False):
        p, r = row.params, row.result
        assert r.exact, p
        for b in all_bounds(p):
            if b.applicable:
                assert r.lower <= b.floor, (p, b.name)
        assert len(r.witness) == r.lower and is_aed(r.witness, p)
        assert detects(r.witness.words, p.q, p.n, p.a, p.h, p.t, p.mode.value)
        assert len(greedy_lower_bound(build_conflict_graph(p))) <= r.lower
