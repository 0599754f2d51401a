"""Admissible asymmetric error vectors and the output regions Out(x)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .params import CapacityError, ChannelParams, Mode, normalize

Word = tuple[int, ...]

DEFAULT_OUT_CAP = 10**7
EXACT_SAMPLING_THRESHOLD = 10**5


_canon = normalize


def is_admissible(f: Sequence[int], p: ChannelParams) -> bool:
    """Check the amplitude, Hamming-weight and total-weight constraints."""
    p = _canon(p)
    if len(f) != p.n:
        raise ValueError(f"error vector has length {len(f)}, expected n = {p.n}")
    if any(v < 0 for v in f):
        raise ValueError("error vector entries must be nonnegative")
    return (
        max(f, default=0) <= p.a
        and sum(1 for v in f if v) <= p.h
        and sum(f) <= p.t
    )


def iter_errors(p: ChannelParams, nonzero_only: bool = False) -> Iterator[Word]:
    """Yield every admissible error vector in lexicographic order."""
    p = _canon(p)
    n, a = p.n, p.a
    f = [0] * n

    def rec(i: int, weight_left: int, support_left: int) -> Iterator[Word]:
        if i == n:
            yield tuple(f)
            return
        top = min(a, weight_left) if support_left else 0
        for v in range(top + 1):
            f[i] = v
            yield from rec(i + 1, weight_left - v, support_left - (v > 0))
        f[i] = 0

    it = rec(0, p.t, p.h)
    if nonzero_only:
        next(it)  # the zero vector is always first
    yield from it


def count_errors(p: ChannelParams) -> int:
    """Number of admissible error vectors, i.e. |Out(0)| over the integers."""
    p = _canon(p)
    # ways[w][s]: vectors on the coordinates seen so far with support w, sum s
    ways = [[0] * (p.t + 1) for _ in range(p.h + 1)]
    ways[0][0] = 1
    for _ in range(p.n):
        nxt = [row[:] for row in ways]
        for w in range(p.h):
            for s, c in enumerate(ways[w]):
                if c:
                    for v in range(1, min(p.a, p.t - s) + 1):
                        nxt[w + 1][s + v] += c
        ways = nxt
    return sum(map(sum, ways))


def error_matrix(p: ChannelParams, nonzero_only: bool = False, cap: int = DEFAULT_OUT_CAP) -> np.ndarray:
    """All admissible errors as an ``(E, n)`` integer array, lexicographic rows."""
    p = _canon(p)
    total = count_errors(p) - (1 if nonzero_only else 0)
    if total > cap:
        raise CapacityError(f"{total} admissible error vectors exceed the cap {cap}")
    rows = list(iter_errors(p, nonzero_only))
    return np.array(rows, dtype=np.int64).reshape(len(rows), p.n)


def apply_error(x: Sequence[int], f: Sequence[int], p: ChannelParams) -> Word | None:
    """Channel output for input ``x`` and noise ``f``; ``None`` if it leaves [q]^n."""
    p = _canon(p)
    y = [xi + fi for xi, fi in zip(x, f)]
    if p.mode is Mode.CYCLIC:
        return tuple(v % p.q for v in y)
    if p.mode is Mode.FINITE and max(y) >= p.q:
        return None
    return tuple(y)


def _check_word(x: Sequence[int], p: ChannelParams) -> None:
    if len(x) != p.n:
        raise ValueError(f"word has length {len(x)}, expected n = {p.n}")
    if p.bounded and any(not 0 <= v < p.q for v in x):
        raise ValueError(f"word {tuple(x)} has symbols outside [0, {p.q - 1}]")


def in_out(x: Sequence[int], y: Sequence[int], p: ChannelParams) -> bool:
    """Whether ``y`` is a possible channel output for input ``x``."""
    p = _canon(p)
    if p.mode is Mode.CYCLIC:
        # a <= q-1, so the noise producing y from x is unique
        f = [(yi - xi) % p.q for xi, yi in zip(x, y)]
    else:
        f = [yi - xi for xi, yi in zip(x, y)]
        if min(f) < 0:
            return False
    return is_admissible(f, p)


@dataclass(frozen=True)
class OutRegion:
    """Channel outputs reachable from ``base``, in lexicographic order."""

    base: Word
    params: ChannelParams
    members: tuple[Word, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, y) -> bool:
        return tuple(y) in set(self.members)

    def __iter__(self):
        return iter(self.members)


def enumerate_out(x: Sequence[int], p: ChannelParams, cap: int = DEFAULT_OUT_CAP) -> OutRegion:
    p = _canon(p)
    x = tuple(int(v) for v in x)
    _check_word(x, p)
    size = count_errors(p)
    if size > cap:
        raise CapacityError(f"Out(x) may hold {size} members, above the cap {cap}")
    ys = {y for f in iter_errors(p) if (y := apply_error(x, f, p)) is not None}
    return OutRegion(x, p, tuple(sorted(ys)))


def sample_errors(
    p: ChannelParams,
    size: int,
    rng: np.random.Generator,
    nonzero_only: bool = False,
) -> np.ndarray:
    """Draw ``size`` error vectors uniformly from the admissible set.

    Small admissible sets are listed and indexed directly; larger ones use
    rejection from the box [0, a]^n.
    """
    p = _canon(p)
    total = count_errors(p) - (1 if nonzero_only else 0)
    if total < 1:
        raise ValueError("no admissible error vectors to sample from")
    if total <= EXACT_SAMPLING_THRESHOLD:
        table = error_matrix(p, nonzero_only)
        return table[rng.integers(0, len(table), size=size)]
    out = np.empty((0, p.n), dtype=np.int64)
    while len(out) < size:
        batch = rng.integers(0, p.a + 1, size=(max(4 * size, 1024), p.n))
        ok = ((batch > 0).sum(axis=1) <= p.h) & (batch.sum(axis=1) <= p.t)
        if nonzero_only:
            ok &= batch.any(axis=1)
        out = np.concatenate([out, batch[ok]])
    return out[:size]


def sample_error(p: ChannelParams, rng_seed: int, nonzero_only: bool = False) -> Word:
    """One uniformly drawn admissible error vector; deterministic in the seed."""
    rng = np.random.default_rng(rng_seed)
    return tuple(int(v) for v in sample_errors(p, 1, rng, nonzero_only)[0])
