"""Codes defined by a single congruence on the coordinate sum.

Over the integers this is the lattice ``{x : sum(x) = 0 mod (t+1)}``; over
[q] it is the family indexed by the residue ``j``.  Counting goes through a
residue dynamic program, so it is exact for every q, n, t.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .params import CapacityError, Mode

Word = tuple[int, ...]

DEFAULT_ENUM_CAP = 10**7


@dataclass(frozen=True)
class CongruenceCode:
    n: int
    t: int
    j: int = 0
    q: int | None = None
    mode: Mode = Mode.INTEGER

    def __post_init__(self):
        mode = Mode(self.mode)
        object.__setattr__(self, "mode", mode)
        if self.n < 1 or self.t < 1:
            raise ValueError("need n >= 1 and t >= 1")
        if not 0 <= self.j <= self.t:
            raise ValueError(f"residue j must lie in [0, {self.t}], got {self.j}")
        if mode is Mode.INTEGER:
            if self.q is not None:
                raise ValueError("integer-mode codes have no alphabet size")
            if self.j != 0:
                raise ValueError("the integer lattice code uses j = 0; use a finite alphabet for translates")
        elif self.q is None or self.q < 2:
            raise ValueError(f"{mode.value} codes need q >= 2")

    @property
    def modulus(self) -> int:
        return self.t + 1

    def __contains__(self, x) -> bool:
        return membership(self, x)

    def __str__(self) -> str:
        if self.mode is Mode.INTEGER:
            return f"C({self.n};{self.t})"
        return f"C_{self.q}^({self.j})({self.n};{self.t}) [{self.mode.value}]"


def membership(code: CongruenceCode, x: Sequence[int]) -> bool:
    if len(x) != code.n:
        raise ValueError(f"word has length {len(x)}, expected {code.n}")
    if code.q is not None and any(not 0 <= v < code.q for v in x):
        raise ValueError(f"word {tuple(x)} lies outside [0, {code.q - 1}]^{code.n}")
    return sum(x) % code.modulus == code.j


def _residue_counts(values: range, m: int) -> list[int]:
    """How many of ``values`` fall into each residue class mod m."""
    counts = [0] * m
    lo, hi = values.start, values.stop - 1
    full, extra = divmod(hi - lo + 1, m)
    for r in range(m):
        counts[r] = full
    for k in range(extra):
        counts[(lo + k) % m] += 1
    return counts


def _sum_distribution(values: range, n: int, m: int) -> list[int]:
    """Number of words in values^n per coordinate-sum residue mod m."""
    step = _residue_counts(values, m)
    dist = [1] + [0] * (m - 1)
    for _ in range(n):
        nxt = [0] * m
        for r, c in enumerate(dist):
            if c:
                for s, d in enumerate(step):
                    if d:
                        nxt[(r + s) % m] += c * d
        dist = nxt
    return dist


def count(code: CongruenceCode) -> int:
    """Exact number of codewords in [q]^n."""
    if code.mode is Mode.INTEGER:
        raise ValueError("the integer lattice code is infinite; use density()")
    return _sum_distribution(range(code.q), code.n, code.modulus)[code.j]


def max_index(q: int, n: int, t: int) -> int:
    """Residue maximizing the code size: floor((q-1)n/2) mod (t+1)."""
    if q < 2 or n < 1 or t < 1:
        raise ValueError("need q >= 2, n >= 1, t >= 1")
    return ((q - 1) * n // 2) % (t + 1)


def best_index(q: int, n: int, t: int) -> int:
    """Residue of largest size found by counting; lowest residue on ties.

    Unlike :func:`max_index` this is always a true maximizer (the closed form
    misses for some odd n, e.g. q=3, n=1, t=1).
    """
    dist = _sum_distribution(range(q), n, t + 1)
    return dist.index(max(dist))


def enumerate_code(code: CongruenceCode, cap: int = DEFAULT_ENUM_CAP) -> Iterator[Word]:
    """Stream codewords in lexicographic order."""
    if code.mode is Mode.INTEGER:
        raise ValueError("cannot enumerate the infinite lattice code")
    size = count(code)
    if size > cap:
        raise CapacityError(f"code has {size} words, above the cap {cap}")
    m, q = code.modulus, code.q
    for head in itertools.product(range(q), repeat=code.n - 1):
        need = (code.j - sum(head)) % m
        for last in range(need, q, m):
            yield head + (last,)


def codewords(code: CongruenceCode, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
    words = list(enumerate_code(code, cap))
    return np.array(words, dtype=np.int64).reshape(len(words), code.n)


def generator_matrix(n: int, t: int) -> np.ndarray:
    """Lattice basis: first row (t+1, 0, ..., 0), row i is e_i - e_1."""
    if n < 1 or t < 1:
        raise ValueError("need n >= 1 and t >= 1")
    g = np.eye(n, dtype=np.int64)
    g[0, 0] = t + 1
    g[1:, 0] = -1
    return g


@dataclass(frozen=True)
class DensityReport:
    exact: Fraction
    empirical: Fraction
    window_k: int

    @property
    def gap(self) -> Fraction:
        return abs(self.empirical - self.exact)

    def to_dict(self) -> dict:
        return {
            "exact": f"{self.exact.numerator}/{self.exact.denominator}",
            "empirical": f"{self.empirical.numerator}/{self.empirical.denominator}",
            "window_k": self.window_k,
        }


def window_count(code: CongruenceCode, window_k: int) -> int:
    """Codewords of the lattice code inside {-k, ..., k}^n."""
    return _sum_distribution(range(-window_k, window_k + 1), code.n, code.modulus)[0]


def density(code: CongruenceCode, window_k: int) -> DensityReport:
    """Exact density 1/(t+1) and the windowed estimate at radius ``window_k``."""
    if code.mode is not Mode.INTEGER:
        raise ValueError("density is defined for the integer lattice code")
    if window_k < 1:
        raise ValueError("window radius must be >= 1")
    inside = window_count(code, window_k)
    return DensityReport(
        exact=Fraction(1, code.modulus),
        empirical=Fraction(inside, (2 * window_k + 1) ** code.n),
        window_k=window_k,
    )
