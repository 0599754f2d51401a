"""Monte Carlo harness pushing codewords through the asymmetric channel.

Trials are split into fixed-size chunks, each with its own RNG stream spawned
from the seed, so reports do not depend on how many workers run them.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .congruence import CongruenceCode, codewords, count
from .detector import ExplicitCode
from .error_model import sample_errors
from .params import ChannelParams, Mode, normalize

CHUNK = 10_000


@dataclass(frozen=True)
class Adversary:
    """Out-of-model noise of total weight ``weight``.

    With ``coordinate`` set, the whole weight hits that coordinate; otherwise
    the noise is uniform over all nonnegative vectors of that total weight.
    """

    weight: int
    coordinate: int | None = None

    @classmethod
    def parse(cls, text: str) -> "Adversary":
        fields = dict(kv.split("=", 1) for kv in text.split(","))
        unknown = set(fields) - {"weight", "coord"}
        if unknown or "weight" not in fields:
            raise ValueError(f"adversary spec must look like weight=<w>[,coord=<i>], got {text!r}")
        coord = fields.get("coord")
        return cls(int(fields["weight"]), None if coord is None else int(coord))

    def sample(self, n: int, size: int, rng: np.random.Generator) -> np.ndarray:
        if self.coordinate is not None:
            f = np.zeros((size, n), dtype=np.int64)
            f[:, self.coordinate] = self.weight
            return f
        # stars and bars: n - 1 bar positions among weight + n - 1 slots
        slots = self.weight + n - 1
        keys = rng.random((size, slots))
        bars = np.sort(np.argsort(keys, axis=1)[:, : n - 1], axis=1)
        edges = np.concatenate(
            [np.full((size, 1), -1), bars, np.full((size, 1), slots)], axis=1
        )
        return np.diff(edges, axis=1) - 1


@dataclass(frozen=True)
class SimReport:
    trials: int
    detected: int
    silent: int
    in_model_misses: int
    out_of_model_misses: int

    @property
    def misses(self) -> int:
        return self.in_model_misses + self.out_of_model_misses

    @property
    def detection_rate(self) -> Fraction:
        return Fraction(self.detected, self.trials)

    def to_dict(self) -> dict:
        r = self.detection_rate
        return {
            "trials": self.trials,
            "detected": self.detected,
            "silent": self.silent,
            "in_model_misses": self.in_model_misses,
            "out_of_model_misses": self.out_of_model_misses,
            "detection_rate": f"{r.numerator}/{r.denominator}",
        }


class _Membership:
    """Vectorized codeword test and uniform codeword sampling."""

    def __init__(self, code, p: ChannelParams):
        self.p = p
        if isinstance(code, CongruenceCode):
            self.cong = code
            self.size = count(code)
            self.table = codewords(code) if self.size <= 10**6 else None
        else:
            self.cong = None
            self.size = len(code)
            self.table = code.array
            self.radix = np.array([p.q ** (p.n - 1 - i) for i in range(p.n)], dtype=np.int64)
            self.ranks = np.sort(self.table @ self.radix)

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        if self.table is not None:
            return self.table[rng.integers(0, len(self.table), size=size)]
        out = np.empty((0, self.p.n), dtype=np.int64)
        m, j = self.cong.modulus, self.cong.j
        while len(out) < size:
            batch = rng.integers(0, self.p.q, size=(m * size + 64, self.p.n))
            out = np.concatenate([out, batch[batch.sum(axis=1) % m == j]])
        return out[:size]

    def contains(self, Y: np.ndarray) -> np.ndarray:
        valid = ((Y >= 0) & (Y < self.p.q)).all(axis=1)
        if self.cong is not None:
            return valid & (Y.sum(axis=1) % self.cong.modulus == self.cong.j)
        r = np.where(valid[:, None], Y, 0) @ self.radix
        pos = np.searchsorted(self.ranks, r)
        pos[pos >= len(self.ranks)] = 0
        return valid & (self.ranks[pos] == r)


def _run_chunk(members: _Membership, p: ChannelParams, trials: int,
               seed_seq: np.random.SeedSequence, adversary: Adversary | None) -> tuple[int, int, int]:
    rng = np.random.default_rng(seed_seq)
    X = members.sample(trials, rng)
    if adversary is None:
        F = sample_errors(p, trials, rng, nonzero_only=True)
    else:
        F = adversary.sample(p.n, trials, rng)
    Y = X + F
    if p.mode is Mode.CYCLIC:
        Y %= p.q
    silent = (Y == X).all(axis=1)
    hit = members.contains(Y) & ~silent
    return int(trials - silent.sum() - hit.sum()), int(silent.sum()), int(hit.sum())


def run(code, p: ChannelParams, trials: int, seed: int,
        out_of_model: Adversary | None = None, workers: int = 1) -> SimReport:
    """Send random codewords with random nonzero noise and classify each output.

    Outputs are *detected* (not a codeword; in the finite alphabet this
    includes outputs pushed beyond q-1), *silent* (equal to the input) or a
    *miss* (a different codeword).
    """
    p = normalize(p)
    if not p.bounded:
        raise ValueError("simulation needs a finite or cyclic alphabet")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if isinstance(code, ExplicitCode) and len(code) == 0:
        raise ValueError("code is empty")
    members = _Membership(code, p)
    if members.size == 0:
        raise ValueError("code is empty")
    if out_of_model is not None and out_of_model.coordinate is not None and not 0 <= out_of_model.coordinate < p.n:
        raise ValueError(f"adversary coordinate must lie in [0, {p.n - 1}]")

    sizes = [CHUNK] * (trials // CHUNK) + ([trials % CHUNK] if trials % CHUNK else [])
    streams = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = list(zip(sizes, streams))

    def work(job):
        return _run_chunk(members, p, job[0], job[1], out_of_model)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(work, jobs))
    else:
        parts = [work(j) for j in jobs]
    detected = sum(d for d, _, _ in parts)
    silent = sum(s for _, s, _ in parts)
    misses = sum(m for _, _, m in parts)
    return SimReport(
        trials=trials,
        detected=detected,
        silent=silent,
        in_model_misses=misses if out_of_model is None else 0,
        out_of_model_misses=misses if out_of_model is not None else 0,
    )
