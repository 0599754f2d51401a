import itertools
import random

import pytest

from aed.bounds import best_size_bound
from aed.congruence import CongruenceCode, count
from aed.detector import ExplicitCode, is_aed
from aed.params import CapacityError, ChannelParams, Mode, normalize
from aed.search import (
    Budget, SWEEP_COLUMNS, admissible_params, build_conflict_graph, congruence_size,
    exact_optimum, expand_grid, greedy_lower_bound, search, sweep, sweep_csv,
)
from aed.error_model import count_errors

from oracles import max_aed_size

F, C = Mode.FINITE, Mode.CYCLIC


def P(q, n, a, h, t, mode=F):
    return normalize(ChannelParams(q, n, a, h, t, mode))


def edges(g):
    return {(u, v) for u in range(g.num_vertices) for v in g.neighbors(u) if u < v}


def test_graph_examples():
    assert edges(build_conflict_graph(P(3, 1, None, None, 1))) == {(0, 1), (1, 2)}
    g = build_conflict_graph(P(2, 2, 1, 2, 2))
    assert edges(g) == {(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)}
    assert edges(build_conflict_graph(P(3, 1, None, None, 1, C))) == {(0, 1), (1, 2), (0, 2)}
    assert g.word(2) == (1, 0) and g.rank((1, 1)) == 3


def test_vertex_cap(monkeypatch):
    with pytest.raises(CapacityError):
        build_conflict_graph(P(4, 3, 1, 1, 1), cap=63)
    monkeypatch.setenv("AED_VERTEX_CAP", "10")
    with pytest.raises(CapacityError):
        build_conflict_graph(P(4, 2, 1, 1, 1))


def test_independent_sets_are_detecting_codes():
    rng = random.Random(2)
    for _ in range(60):
        q, n = rng.randint(2, 4), rng.randint(1, 3)
        a = rng.randint(1, q - 1)
        h = rng.randint(1, n)
        t = rng.randint(a, a * h)
        mode = rng.choice([F, C])
        p = P(q, n, a, h, t, mode)
        g = build_conflict_graph(p)
        sub = rng.sample(range(g.num_vertices), rng.randint(1, min(6, g.num_vertices)))
        assert g.is_independent(sub) == is_aed(g.code(sub), p).holds


def test_cyclic_degree_bound_and_finite_order():
    for q, n in [(3, 2), (4, 2), (5, 2)]:
        for p in admissible_params(q, n, C):
            g = build_conflict_graph(p)
            limit = 2 * (count_errors(p) - 1)
            assert max(g.degree(v) for v in range(g.num_vertices)) <= limit
        for p in admissible_params(q, n, F):
            g = build_conflict_graph(p)
            for u, v in edges(g):
                wu, wv = g.word(u), g.word(v)
                assert all(x <= y for x, y in zip(wu, wv)) or all(x >= y for x, y in zip(wu, wv))


def test_exact_examples():
    r = search(P(3, 1, None, None, 1))
    assert r.exact and r.lower == 2 and r.witness.words == ((0,), (2,))
    for p in admissible_params(6, 2, F):
        if p.t == 2:
            assert search(p).lower == 12
    r = search(P(3, 2, None, 1, None, C))
    assert r.exact and r.lower == 3
    assert is_aed(ExplicitCode.from_congruence(CongruenceCode(2, 2, 0, 3, C)), P(3, 2, None, 1, None, C))
    r = search(P(4, 1, None, None, 2), use_bounds=False)
    assert r.lower == 2 and r.witness.words == ((0,), (3,))


@pytest.mark.parametrize("mode", [F, C])
def test_exact_matches_subset_bruteforce(mode):
    for q, n in [(2, 1), (3, 1), (4, 1), (5, 1), (2, 2), (3, 2), (2, 3)]:
        for p in admissible_params(q, n, mode):
            want, _ = max_aed_size(q, n, p.a, p.h, p.t, mode.value)
            r = search(p, use_bounds=False)
            assert r.exact and r.lower == want, p
            assert search(p).lower == want


def test_greedy_examples():
    tri = build_conflict_graph(P(3, 1, None, None, 1, C))
    assert len(greedy_lower_bound(tri)) == 1
    path = build_conflict_graph(P(3, 1, None, None, 1))
    assert greedy_lower_bound(path).words == ((0,), (2,))
    g = build_conflict_graph(P(4, 2, 1, 1, 1))
    gr = greedy_lower_bound(g)
    assert is_aed(gr, g.params) and len(gr) <= exact_optimum(g).lower
    order = list(range(g.num_vertices))
    assert is_aed(greedy_lower_bound(g, order), g.params)


def test_budget_gives_valid_interval():
    p = P(8, 3, 1, 3, 3)
    r = search(p, Budget(nodes=50))
    assert r.lower <= r.upper <= r.stats["root_cover"]
    assert len(r.witness) == r.lower and is_aed(r.witness, p)
    # known optimum, starved budget: the interval still brackets it
    p = P(4, 2, 1, 2, 2)
    want = search(p, use_bounds=False).lower
    r = search(p, Budget(nodes=1), use_bounds=False)
    assert r.lower <= want <= r.upper


def test_deterministic_witness():
    p = P(5, 2, 2, 2, 3, C)
    a, b = search(p, use_bounds=False), search(p, use_bounds=False)
    assert a.witness == b.witness and a.stats["nodes"] == b.stats["nodes"]


def test_mode_dominance_and_cyclic_bound():
    for q, n in [(2, 2), (3, 2), (4, 2), (5, 2), (3, 3)]:
        for p in admissible_params(q, n, C):
            cyc = search(p, use_bounds=False)
            fin = search(normalize(ChannelParams(q, n, p.a, p.h, p.t, F)), use_bounds=False)
            assert cyc.lower <= fin.lower
            assert cyc.lower <= q**n // (p.t + 1)


def test_expand_grid():
    grid = expand_grid({"q": [3], "n": [2], "modes": ["finite", "cyclic"]})
    assert len(grid) == 2 * len(admissible_params(3, 2, F))
    assert all(p.is_normalized for p in grid)
    only = expand_grid({"q": [4, 9], "n": [2], "t": [2], "max_vertices": 20})
    assert {p.q for p in only} == {4} and {p.t for p in only} == {2}


def test_sweep_rows_and_flags():
    rows = sweep(expand_grid({"q": [2, 3, 4, 5, 6], "n": [1, 2], "modes": ["finite"]}))
    for r in rows:
        p = r.params
        if p.q % (p.t + 1) == 0 and best_size_bound(p) is not None:
            assert r.result.lower == p.q**p.n // (p.t + 1)
            assert r.flag in ("tight", "counterexample")
    flagged = [r for r in rows if r.flag == "counterexample"]
    assert any(r.params.as_tuple() == (3, 2, 1, 2, 2) for r in flagged)
    four = [r for r in rows if r.params.as_tuple() == (4, 1, 2, 1, 2)][0]
    assert four.result.lower == 2 and four.bound == 2 and four.flag == "tight"

    text = sweep_csv(rows)
    lines = text.splitlines()
    assert lines[0] == ",".join(SWEEP_COLUMNS) and len(lines) == len(rows) + 1


def test_counterexample_is_genuine():
    # amplitude-limited errors: the four corners beat every congruence code
    p = P(3, 2, 1, 2, 2)
    r = search(p, use_bounds=False)
    assert r.lower == 4 and r.witness.words == ((0, 0), (0, 2), (2, 0), (2, 2))
    assert max(count(CongruenceCode(2, 2, j, 3, F)) for j in range(3)) == 3
    assert congruence_size(p) == 3


def test_truncated_flag():
    rows = sweep([P(8, 3, 1, 3, 3)], Budget(nodes=5), use_bounds=False)
    assert rows[0].flag in ("truncated", "counterexample")
    assert not rows[0].result.exact


@pytest.mark.parametrize("q,t", [(3, 1), (4, 2), (5, 2), (5, 3), (6, 3), (6, 4)])
def test_single_symbol_optimum_beats_closed_form_index(q, t):
    from aed.congruence import best_index, max_index
    p = P(q, 1, None, None, t)
    want, _ = max_aed_size(q, 1, p.a, p.h, p.t, "finite")
    assert search(p).lower == want == count(CongruenceCode(1, t, best_index(q, 1, t), q, F))
    assert count(CongruenceCode(1, t, max_index(q, 1, t), q, F)) < want
