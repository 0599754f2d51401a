"""Channel parameters (q, n, a, h, t) and their canonical form.

A wildcard (``None`` here, ``.`` on the command line) marks a constraint that
is not imposed.  :func:`normalize` resolves wildcards and clamps redundant
values so that every downstream routine can assume

    1 <= a <= t <= a*h,   1 <= h <= n,   a <= q - 1 (finite and cyclic alphabets).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace


class Mode(str, enum.Enum):
    INTEGER = "integer"
    FINITE = "finite"
    CYCLIC = "cyclic"


WILDCARD = None
WILDCARD_TOKENS = (".", "·", "*")
INFINITY_TOKENS = ("inf", "infinity", "∞", ".", "·", "*")


class ParameterError(ValueError):
    """Raised for channel parameters that cannot be normalized."""


@dataclass(frozen=True)
class ChannelParams:
    """Alphabet size, block length and the three noise constraints.

    ``q`` is ``None`` for the integer alphabet.  ``a``, ``h`` and ``t`` may be
    ``None`` (wildcard) before normalization.
    """

    q: int | None
    n: int
    a: int | None = WILDCARD
    h: int | None = WILDCARD
    t: int | None = WILDCARD
    mode: Mode = Mode.FINITE

    @property
    def is_normalized(self) -> bool:
        return self == normalize(self)

    @property
    def bounded(self) -> bool:
        """True for the finite and cyclic alphabets [q]."""
        return self.mode is not Mode.INTEGER

    def as_tuple(self) -> tuple:
        return (self.q, self.n, self.a, self.h, self.t)

    def format(self) -> str:
        """Render in the ``q,n,a,h,t`` command-line syntax."""
        def tok(v, wild="."):
            return wild if v is None else str(v)

        return ",".join([tok(self.q, "inf"), tok(self.n), tok(self.a), tok(self.h), tok(self.t)])

    def __str__(self) -> str:
        return f"{self.format()} [{self.mode.value}]"

    @classmethod
    def parse(cls, text: str, mode: Mode | str = Mode.FINITE) -> "ChannelParams":
        """Parse ``q,n,a,h,t`` where a, h, t (and q in integer mode) may be ``.``."""
        mode = Mode(mode)
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 5:
            raise ParameterError(f"expected 5 comma-separated fields q,n,a,h,t, got {text!r}")

        def field(tok: str, name: str) -> int | None:
            if tok in WILDCARD_TOKENS:
                return None
            try:
                return int(tok)
            except ValueError:
                raise ParameterError(f"malformed value {tok!r} for {name}") from None

        q_tok = parts[0]
        if mode is Mode.INTEGER:
            if q_tok.lower() not in INFINITY_TOKENS:
                raise ParameterError("integer mode takes q = inf (or '.')")
            q = None
        else:
            q = field(q_tok, "q")
            if q is None:
                raise ParameterError(f"{mode.value} mode needs an explicit q")
        n = field(parts[1], "n")
        if n is None:
            raise ParameterError("n cannot be a wildcard")
        return cls(q, n, field(parts[2], "a"), field(parts[3], "h"), field(parts[4], "t"), mode)


def normalize(raw: ChannelParams) -> ChannelParams:
    """Resolve wildcards and clamp redundant constraints.

    Wildcards: ``h -> n``; ``a -> min(t, q-1)`` (``t`` in integer mode);
    ``t -> a*h``.  Then ``a`` is clamped to ``min(a, t, q-1)`` and ``t`` to
    ``a*h``.  None of these steps changes the set of admissible error vectors.
    """
    mode = Mode(raw.mode)
    q, n, a, h, t = raw.q, raw.n, raw.a, raw.h, raw.t

    if mode is Mode.INTEGER:
        if q is not None:
            raise ParameterError("integer mode requires q = None (infinite alphabet)")
    else:
        if q is None or q < 2:
            raise ParameterError(f"{mode.value} mode requires q >= 2, got {q}")
    if n is None or n < 1:
        raise ParameterError(f"block length must be >= 1, got {n}")
    for name, v in (("a", a), ("h", h), ("t", t)):
        if v is not None and v < 1:
            raise ParameterError(f"{name} must be >= 1, got {v}")
    if h is not None and h > n:
        raise ParameterError(f"h = {h} exceeds block length n = {n}")

    if h is None:
        h = n
    if a is None:
        if t is not None:
            a = t if q is None else min(t, q - 1)
        elif q is not None:
            a = q - 1
        else:
            raise ParameterError("integer mode needs a bound on a or t")
    if q is not None:
        a = min(a, q - 1)
    if t is None:
        t = a * h
    a = min(a, t)
    t = min(t, a * h)
    return ChannelParams(q, n, a, h, t, mode)


def with_mode(p: ChannelParams, mode: Mode | str) -> ChannelParams:
    return replace(p, mode=Mode(mode))


class CapacityError(RuntimeError):
    """Raised when an enumeration or search would exceed its configured cap."""
