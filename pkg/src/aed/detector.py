"""Exhaustive checks: error detection, packings, minimum distance."""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .congruence import CongruenceCode, enumerate_code
from .error_model import error_matrix
from .params import CapacityError, ChannelParams, Mode, normalize

Word = tuple[int, ...]

DEFAULT_PROBE_CAP = 10**9


@dataclass(frozen=True)
class ExplicitCode:
    """A finite set of words, kept sorted lexicographically.

    ``q`` is the alphabet size, or ``None`` for words over the integers.
    """

    words: tuple[Word, ...]
    n: int
    q: int | None = None

    def __post_init__(self):
        if len(set(self.words)) != len(self.words):
            raise ValueError("codewords must be distinct")
        if any(len(w) != self.n for w in self.words):
            raise ValueError(f"all codewords must have length {self.n}")
        if self.q is not None and any(not 0 <= v < self.q for w in self.words for v in w):
            raise ValueError(f"codeword symbols must lie in [0, {self.q - 1}]")

    @classmethod
    def from_words(cls, words: Iterable[Sequence[int]], q: int | None = None, n: int | None = None) -> "ExplicitCode":
        ws = sorted({tuple(int(v) for v in w) for w in words})
        if n is None:
            if not ws:
                raise ValueError("cannot infer block length of an empty code")
            n = len(ws[0])
        return cls(tuple(ws), n, q)

    @classmethod
    def from_congruence(cls, code: CongruenceCode) -> "ExplicitCode":
        return cls(tuple(enumerate_code(code)), code.n, code.q)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.words, dtype=np.int64).reshape(len(self.words), self.n)

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __contains__(self, w) -> bool:
        return tuple(w) in self._index

    @property
    def _index(self) -> frozenset:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = frozenset(self.words)
            object.__setattr__(self, "_idx", idx)
        return idx


def read_code(path: str | Path, q: int | None = None) -> ExplicitCode:
    """Read a codeword file: one word per line, space-separated, '#' comments."""
    words = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            words.append(tuple(int(tok) for tok in line.split()))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: malformed codeword {line!r}") from None
    if len({len(w) for w in words}) > 1:
        raise ValueError(f"{path}: codewords have differing lengths")
    return ExplicitCode.from_words(words, q)


def format_code(words: Iterable[Sequence[int]]) -> str:
    return "".join(" ".join(str(v) for v in w) + "\n" for w in words)


def write_code(path: str | Path, words: Iterable[Sequence[int]]) -> None:
    Path(path).write_text(format_code(words), encoding="utf-8")


@dataclass(frozen=True)
class AedVerdict:
    holds: bool
    witness: tuple[Word, Word] | None = None

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        d = {"holds": self.holds}
        if self.witness is not None:
            d["witness"] = {"sent": list(self.witness[0]), "received": list(self.witness[1])}
        return d


def _first_violation(X: np.ndarray, ranks: np.ndarray, F: np.ndarray, p: ChannelParams,
                     lo: int, radix: np.ndarray, offset: int) -> tuple[int, Word] | None:
    """Lexicographically first (codeword index, output) pair violating detection."""
    best = None
    for f in F:
        Y = X + f
        if p.mode is Mode.CYCLIC:
            Y %= p.q
            valid = np.ones(len(Y), dtype=bool)
        elif p.mode is Mode.FINITE:
            valid = (Y < p.q).all(axis=1)
        else:
            valid = np.ones(len(Y), dtype=bool)
        r = (Y - lo) @ radix
        pos = np.searchsorted(ranks, r)
        pos[pos >= len(ranks)] = 0
        hit = valid & (ranks[pos] == r)
        if hit.any():
            i = int(np.argmax(hit))
            cand = (i + offset, tuple(int(v) for v in Y[i]))
            if best is None or cand < best:
                best = cand
    return best


def is_aed(code: ExplicitCode, p: ChannelParams, probe_cap: int = DEFAULT_PROBE_CAP,
           workers: int = 1) -> AedVerdict:
    """Whether no admissible nonzero error turns one codeword into another.

    On failure the witness ``(x, y)`` is the lexicographically first pair with
    ``x`` sent and ``y`` received.
    """
    p = normalize(p)
    if len(code) == 0:
        raise ValueError("code is empty")
    if code.n != p.n:
        raise ValueError(f"code length {code.n} does not match n = {p.n}")
    if p.bounded and code.q is not None and code.q != p.q:
        raise ValueError(f"code alphabet {code.q} does not match q = {p.q}")
    F = error_matrix(p, nonzero_only=True)
    if len(code) * len(F) > probe_cap:
        raise CapacityError(f"{len(code) * len(F)} membership probes exceed the cap {probe_cap}")
    X = code.array
    if p.bounded:
        if X.min() < 0 or X.max() >= p.q:
            raise ValueError(f"codeword symbols must lie in [0, {p.q - 1}]")
        lo, base = 0, p.q
    else:
        lo, base = int(X.min()), int(X.max() - X.min()) + p.a + 1
    radix = np.array([base ** (p.n - 1 - i) for i in range(p.n)], dtype=object if base ** p.n >= 2**62 else np.int64)
    ranks = (X - lo) @ radix  # sorted, as words are lexicographic

    if workers <= 1 or len(X) < 2 * workers:
        found = _first_violation(X, ranks, F, p, lo, radix, 0)
    else:
        bounds = np.linspace(0, len(X), workers + 1, dtype=int)
        with ThreadPoolExecutor(workers) as pool:
            parts = pool.map(
                lambda ab: _first_violation(X[ab[0]:ab[1]], ranks, F, p, lo, radix, ab[0]),
                zip(bounds[:-1], bounds[1:]),
            )
            hits = [h for h in parts if h is not None]
        found = min(hits) if hits else None
    if found is None:
        return AedVerdict(True)
    return AedVerdict(False, (code.words[found[0]], found[1]))


@dataclass(frozen=True)
class PackingSet:
    vectors: tuple[Word, ...]

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)


def packing_set(p: ChannelParams) -> PackingSet:
    """The chain 0, e_1, ..., a*e_1, a*e_1 + e_2, ... up to total weight t.

    Every later vector minus an earlier one is an admissible error, so the
    chain is a clique of the conflict relation and has t + 1 elements.
    """
    p = normalize(p)
    cur = [0] * p.n
    out = [tuple(cur)]
    i = 0
    for _ in range(p.t):
        if cur[i] == p.a:
            i += 1
        cur[i] += 1
        out.append(tuple(cur))
    return PackingSet(tuple(out))


def _window_words(code, window_k: int) -> list[Word]:
    if isinstance(code, CongruenceCode):
        if code.mode is not Mode.INTEGER:
            raise ValueError("packing checks apply to integer-alphabet codes")
        rng = range(-window_k, window_k + 1)
        m = code.modulus
        out = []
        for head in itertools.product(rng, repeat=code.n - 1):
            need = -sum(head) % m
            first = -window_k + (need + window_k) % m
            out.extend(head + (v,) for v in range(first, window_k + 1, m))
        return out
    return [tuple(w) for w in code if all(-window_k <= v <= window_k for v in w)]


def verify_packing(code, S: PackingSet, window_k: int, cap: int = 10**8) -> bool:
    """Whether the translates x + S over codewords x in {-k..k}^n are disjoint."""
    words = _window_words(code, window_k)
    if len(words) * len(S) > cap:
        raise CapacityError(f"{len(words) * len(S)} translate points exceed the cap {cap}")
    owner: dict[Word, int] = {}
    for idx, x in enumerate(words):
        for s in S:
            pt = tuple(xi + si for xi, si in zip(x, s))
            prev = owner.setdefault(pt, idx)
            if prev != idx:
                return False
    return True


def min_hamming_distance(code: ExplicitCode) -> int:
    if len(code) < 2:
        raise ValueError("minimum distance needs at least two codewords")
    X = code.array
    best = code.n
    for i in range(len(X) - 1):
        d = int((X[i + 1:] != X[i]).sum(axis=1).min())
        if d < best:
            best = d
            if best == 1:
                break
    return best
