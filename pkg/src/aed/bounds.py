"""Upper bounds on the size (or density) of error-detecting codes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor

from .params import ChannelParams, Mode, normalize

DENSITY_Z = "density_Z"
LINE_Q = "line_q"
CYCLIC_Q = "cyclic_q"


@dataclass(frozen=True)
class BoundReport:
    name: str
    value: Fraction
    applicable: bool
    reason: str

    @property
    def floor(self) -> int:
        return floor(self.value)

    def to_dict(self) -> dict:
        v = self.value
        return {
            "name": self.name,
            "value": f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator),
            "floor": self.floor,
            "applicable": self.applicable,
            "reason": self.reason,
        }


def density_bound(t: int) -> Fraction:
    return Fraction(1, t + 1)


def line_bound(q: int, n: int, t: int) -> int:
    return q ** (n - 1) * ceil(Fraction(q, t + 1))


def cyclic_bound(q: int, n: int, t: int) -> Fraction:
    return Fraction(q**n, t + 1)


def all_bounds(p: ChannelParams) -> list[BoundReport]:
    """Every bound, each flagged applicable or not for the given channel.

    The line bound needs the amplitude constraint to be inactive: its argument
    shifts one coordinate by every amount up to min(t, q-1).
    """
    p = normalize(p)
    q, n, a, t = p.q, p.n, p.a, p.t
    out = [
        BoundReport(
            DENSITY_Z, density_bound(t), p.mode is Mode.INTEGER,
            "upper density of any code over the integers" if p.mode is Mode.INTEGER
            else "only for the integer alphabet",
        )
    ]
    if q is None:
        out.append(BoundReport(LINE_Q, Fraction(0), False, "needs a finite alphabet"))
        out.append(BoundReport(CYCLIC_Q, Fraction(0), False, "needs a finite alphabet"))
        return out

    if p.mode is not Mode.FINITE:
        line_ok, why = False, "only for the non-cyclic finite alphabet"
    elif a >= min(t, q - 1):
        line_ok, why = True, "amplitude constraint inactive"
    else:
        line_ok, why = False, f"amplitude constraint active (a={a} < min(t, q-1)={min(t, q - 1)})"
    out.append(BoundReport(LINE_Q, Fraction(line_bound(q, n, t)), line_ok, why))

    cyc_ok = p.mode is Mode.CYCLIC
    out.append(BoundReport(
        CYCLIC_Q, cyclic_bound(q, n, t), cyc_ok,
        "packing argument on the torus" if cyc_ok else "only for the cyclic alphabet",
    ))
    return out


def best_size_bound(p: ChannelParams) -> int | None:
    """Smallest applicable integer bound on the code size, if any."""
    vals = [b.floor for b in all_bounds(p) if b.applicable and b.name != DENSITY_Z]
    return min(vals) if vals else None
