"""Exact optimal code sizes by maximum independent set search.

Words of [q]^n are vertices, ranked in mixed radix so that rank order is
lexicographic order.  Two distinct words are joined when one can be turned
into the other by an admissible error; error-detecting codes are exactly the
independent sets of this conflict graph.

The solver is a branch and bound over int bitsets.  Each node partitions its
candidate set greedily into cliques of the conflict graph; an independent set
meets every clique at most once, so the number of cliques bounds what the
candidates can still contribute.  Vertices are branched on in reverse cover
order, which lets whole tails be cut as soon as the bound stops beating the
incumbent.
"""

from __future__ import annotations

import csv
import io
import itertools
import logging
import os
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .bounds import best_size_bound
from .congruence import CongruenceCode, best_index, count
from .detector import ExplicitCode, is_aed
from .error_model import error_matrix
from .params import CapacityError, ChannelParams, Mode, normalize

log = logging.getLogger(__name__)

DEFAULT_VERTEX_CAP = 2**20


def vertex_cap() -> int:
    env = os.environ.get("AED_VERTEX_CAP")
    return int(env) if env else DEFAULT_VERTEX_CAP


def all_words(q: int, n: int) -> np.ndarray:
    """Every word of [q]^n as rows, in rank (lexicographic) order."""
    grids = np.indices((q,) * n).reshape(n, -1).T
    return grids.astype(np.int64)


@dataclass
class ConflictGraph:
    params: ChannelParams
    adj: list[int]
    num_edges: int

    @property
    def q(self) -> int:
        return self.params.q

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def num_vertices(self) -> int:
        return len(self.adj)

    def rank(self, word: Sequence[int]) -> int:
        r = 0
        for v in word:
            r = r * self.q + int(v)
        return r

    def word(self, rank: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.n):
            rank, d = divmod(rank, self.q)
            out.append(d)
        return tuple(reversed(out))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def neighbors(self, v: int) -> list[int]:
        a, out = self.adj[v], []
        while a:
            low = a & -a
            out.append(low.bit_length() - 1)
            a ^= low
        return out

    def is_independent(self, vertices: Iterable[int]) -> bool:
        mask = 0
        vs = list(vertices)
        for v in vs:
            mask |= 1 << v
        return all(not (self.adj[v] & mask) for v in vs)

    def code(self, vertices: Iterable[int]) -> ExplicitCode:
        return ExplicitCode.from_words((self.word(v) for v in vertices), self.q, self.n)


def _pack_rows(src: np.ndarray, dst: np.ndarray, V: int) -> list[int]:
    if V <= 8192:
        m = np.zeros((V, V), dtype=bool)
        m[src, dst] = True
        m[dst, src] = True
        packed = np.packbits(m, axis=1, bitorder="little")
        return [int.from_bytes(row.tobytes(), "little") for row in packed]
    adj = [0] * V
    for s, d in zip(src.tolist(), dst.tolist()):
        adj[s] |= 1 << d
        adj[d] |= 1 << s
    return adj


def build_conflict_graph(p: ChannelParams, cap: int | None = None) -> ConflictGraph:
    p = normalize(p)
    if not p.bounded:
        raise ValueError("conflict graphs need a finite or cyclic alphabet")
    cap = vertex_cap() if cap is None else cap
    V = p.q**p.n
    if V > cap:
        raise CapacityError(f"q^n = {V} vertices exceed the cap {cap} (set AED_VERTEX_CAP to raise it)")
    W = all_words(p.q, p.n)
    radix = p.q ** np.arange(p.n - 1, -1, -1, dtype=np.int64)
    ids = np.arange(V, dtype=np.int64)
    srcs, dsts = [], []
    for f in error_matrix(p, nonzero_only=True):
        Y = W + f
        if p.mode is Mode.CYCLIC:
            Y %= p.q
            ok = slice(None)
        else:
            ok = (Y < p.q).all(axis=1)
        srcs.append(ids[ok])
        dsts.append(Y[ok] @ radix)
    src = np.concatenate(srcs) if srcs else np.empty(0, dtype=np.int64)
    dst = np.concatenate(dsts) if dsts else np.empty(0, dtype=np.int64)
    adj = _pack_rows(src, dst, V)
    edges = sum(a.bit_count() for a in adj) // 2
    return ConflictGraph(p, adj, edges)


def greedy_lower_bound(g: ConflictGraph, order: Sequence[int] | None = None) -> ExplicitCode:
    """Maximal independent set by greedy insertion, minimum degree first by default."""
    return g.code(_greedy(g, order))


def _greedy(g: ConflictGraph, order: Sequence[int] | None = None) -> list[int]:
    if order is None:
        order = sorted(range(g.num_vertices), key=lambda v: (g.degree(v), v))
    blocked, chosen = 0, []
    for v in order:
        if not (blocked >> v) & 1:
            chosen.append(v)
            blocked |= g.adj[v] | (1 << v)
    return sorted(chosen)


def _clique_cover(P: int, adj: list[int]) -> tuple[list[int], list[int]]:
    """Greedy partition of P into cliques; returns vertices and running clique count."""
    order, cols = [], []
    k = 0
    while P:
        k += 1
        Q = P
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            P ^= low
            Q &= adj[v]
            order.append(v)
            cols.append(k)
    return order, cols


@dataclass(frozen=True)
class Budget:
    nodes: int | None = None
    seconds: float | None = None


@dataclass
class SearchResult:
    lower: int
    upper: int
    witness: ExplicitCode
    stats: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def optimum(self) -> int | None:
        return self.lower if self.exact else None

    def to_dict(self, include_time: bool = False) -> dict:
        stats = dict(self.stats)
        if not include_time:
            stats.pop("wall_time", None)
        return {
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "witness": [list(w) for w in self.witness],
            "stats": stats,
        }


def exact_optimum(g: ConflictGraph, budget: Budget = Budget(), use_bounds: bool = True) -> SearchResult:
    """Maximum independent set of the conflict graph, or an interval if the budget runs out.

    With ``use_bounds`` the closed-form size bounds that apply to the channel
    cap the root; otherwise the search relies on clique covers alone.
    """
    start = time.perf_counter()
    adj = g.adj
    V = g.num_vertices
    best_set = _greedy(g)
    best = len(best_set)
    full = (1 << V) - 1
    root_order, root_cols = _clique_cover(full, adj)
    upper_cap = root_cols[-1] if root_cols else 0
    theorem = best_size_bound(g.params) if use_bounds else None
    if theorem is not None:
        upper_cap = min(upper_cap, theorem)
    stats = {"nodes": 1, "prunes": 0, "greedy": best, "root_cover": root_cols[-1] if root_cols else 0,
             "theorem_bound": theorem}

    exhausted = False
    open_upper = 0
    chosen: list[int] = []
    # frame: [size, P, order, cols, i]
    stack = [[0, full, root_order, root_cols, len(root_order) - 1]]
    while stack:
        if best >= upper_cap:
            break
        if (budget.nodes is not None and stats["nodes"] >= budget.nodes) or (
            budget.seconds is not None and time.perf_counter() - start > budget.seconds
        ):
            exhausted = True
            for size, _, _, cols, i in stack:
                if i >= 0:
                    open_upper = max(open_upper, size + cols[i])
            break
        fr = stack[-1]
        size, P, order, cols, i = fr
        if i < 0 or size + cols[i] <= best:
            if i >= 0:
                stats["prunes"] += 1
            stack.pop()
            if stack:
                chosen.pop()
            continue
        v = order[i]
        fr[4] = i - 1
        bit = 1 << v
        fr[1] = P & ~bit
        chosen.append(v)
        if size + 1 > best:
            best = size + 1
            best_set = sorted(chosen)
        child = P & ~adj[v] & ~bit
        if child:
            c_order, c_cols = _clique_cover(child, adj)
            stats["nodes"] += 1
            stack.append([size + 1, child, c_order, c_cols, len(c_order) - 1])
        else:
            chosen.pop()

    upper = min(upper_cap, max(best, open_upper)) if exhausted else best
    upper = max(upper, best)
    stats["wall_time"] = time.perf_counter() - start
    return SearchResult(best, upper, g.code(best_set), stats)


def search(p: ChannelParams, budget: Budget = Budget(), use_bounds: bool = True) -> SearchResult:
    return exact_optimum(build_conflict_graph(p), budget, use_bounds)


# sweeps ---------------------------------------------------------------------

SWEEP_COLUMNS = ("q", "n", "a", "h", "t", "mode", "lower", "upper", "exact", "congruence_size", "flag")


def admissible_params(q: int, n: int, mode: Mode | str) -> list[ChannelParams]:
    """Every normalized (a, h, t) for the given alphabet and length."""
    mode = Mode(mode)
    out = []
    for a in range(1, q):
        for h in range(1, n + 1):
            for t in range(a, a * h + 1):
                out.append(ChannelParams(q, n, a, h, t, mode))
    return out


def expand_grid(spec: dict) -> list[ChannelParams]:
    """Instances from a grid description.

    Keys: ``q``, ``n``, ``modes`` (lists); optional ``a``, ``h``, ``t`` lists
    restrict the otherwise exhaustive admissible triples; ``max_vertices``
    drops instances with q^n above it.
    """
    modes = spec.get("modes", spec.get("mode", ["finite"]))
    if isinstance(modes, str):
        modes = [modes]
    cap = spec.get("max_vertices")
    out, seen = [], set()
    for mode, q, n in itertools.product(modes, spec["q"], spec["n"]):
        if cap is not None and q**n > cap:
            continue
        for p in admissible_params(q, n, mode):
            if any(k in spec and getattr(p, k) not in spec[k] for k in ("a", "h", "t")):
                continue
            if p not in seen:
                seen.add(p)
                out.append(p)
    return out


@dataclass
class SweepRow:
    params: ChannelParams
    result: SearchResult
    congruence_size: int
    bound: int | None

    @property
    def flag(self) -> str:
        r = self.result
        if r.lower > self.congruence_size:
            return "counterexample"
        if not r.exact:
            return "truncated"
        if self.bound is not None and r.lower == self.bound:
            return "tight"
        return "gap"

    def as_row(self) -> dict:
        p = self.params
        return {
            "q": p.q, "n": p.n, "a": p.a, "h": p.h, "t": p.t, "mode": p.mode.value,
            "lower": self.result.lower, "upper": self.result.upper,
            "exact": int(self.result.exact), "congruence_size": self.congruence_size,
            "flag": self.flag,
        }


def congruence_size(p: ChannelParams) -> int:
    """Size of the largest congruence code that detects the channel's errors.

    Over [q] every residue class detects, so this is the largest class (the
    closed-form residue is not always it).  In the cyclic case wraparound can
    break detection, so each residue is checked.
    """
    p = normalize(p)
    if p.mode is Mode.FINITE:
        return count(CongruenceCode(p.n, p.t, best_index(p.q, p.n, p.t), p.q, Mode.FINITE))
    best = 0
    for j in range(p.t + 1):
        code = CongruenceCode(p.n, p.t, j, p.q, Mode.CYCLIC)
        size = count(code)
        if size > best and is_aed(ExplicitCode.from_congruence(code), p):
            best = size
    return best


def sweep(params_grid: Iterable[ChannelParams], budget: Budget = Budget(), use_bounds: bool = True) -> list[SweepRow]:
    rows = []
    for p in params_grid:
        p = normalize(p)
        res = search(p, budget, use_bounds)
        rows.append(SweepRow(p, res, congruence_size(p), best_size_bound(p)))
        log.info("%s -> [%d, %d] %s", p, res.lower, res.upper, rows[-1].flag)
    return rows


def sweep_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r.as_row())
    return buf.getvalue()
