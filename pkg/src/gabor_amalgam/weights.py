"""Submultiplicative and moderate weights.

Polynomial weights (1+|x|)^t are the workhorse; arbitrary sampled weights
can be supplied as tables over a finite set of offsets.  On the periodic
grid every weight is evaluated at the symmetric representative of a shift,
which keeps weights symmetric and keeps the submultiplicativity and
moderation inequalities valid after wrap-around.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import OutOfTable

ROLE_SUBMULTIPLICATIVE = "submultiplicative"
ROLE_MODERATE = "moderate"

_TABLE_KEY_DECIMALS = 9


def _key(x) -> float:
    return round(float(x), _TABLE_KEY_DECIMALS)


@dataclass(frozen=True, eq=False)
class WeightSpec:
    """A weight w(x), either polynomial (1+|x|)^exponent or tabulated.

    ``role`` records whether the weight is used as the submultiplicative w
    or as a w-moderate v; ``C_v`` is the moderation constant (only
    meaningful for the moderate role).  ``grs`` flags whether the weight is
    admissible in the sense of subexponential growth; it is metadata, not
    enforced.
    """

    kind: str
    exponent: float = 0.0
    table: tuple[tuple[float, float], ...] | None = None
    role: str = ROLE_SUBMULTIPLICATIVE
    C_v: float = 1.0
    grs: bool | None = None

    def __post_init__(self):
        if self.kind not in ("polynomial", "table"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.role not in (ROLE_SUBMULTIPLICATIVE, ROLE_MODERATE):
            raise ValueError(f"unknown weight role {self.role!r}")
        if self.C_v <= 0:
            raise ValueError("C_v must be positive")
        if self.kind == "table":
            if not self.table:
                raise ValueError("table weight needs at least one entry")
            lut = {}
            for x, v in self.table:
                if v <= 0:
                    raise ValueError("weights must be strictly positive")
                lut[_key(x)] = float(v)
            object.__setattr__(self, "_lookup", lut)
            if self.grs is None:
                object.__setattr__(self, "grs", None)
        else:
            if self.grs is None:
                # polynomial growth always satisfies w(kx)^(1/k) -> 1
                object.__setattr__(self, "grs", True)

    @classmethod
    def trivial(cls):
        return cls("polynomial", 0.0)

    @classmethod
    def polynomial(cls, exponent, role=ROLE_SUBMULTIPLICATIVE, C_v=1.0):
        return cls("polynomial", float(exponent), role=role, C_v=C_v)

    @classmethod
    def from_table(cls, entries: Mapping[float, float], role=ROLE_SUBMULTIPLICATIVE, C_v=1.0, grs=None):
        tab = tuple(sorted((float(x), float(v)) for x, v in entries.items()))
        return cls("table", table=tab, role=role, C_v=C_v, grs=grs)

    def reciprocal(self) -> "WeightSpec":
        """The weight 1/v; moderate with the same constant as v."""
        if self.kind == "polynomial":
            return WeightSpec("polynomial", -self.exponent, role=self.role, C_v=self.C_v, grs=self.grs)
        tab = tuple((x, 1.0 / v) for x, v in self.table)
        return WeightSpec("table", table=tab, role=self.role, C_v=self.C_v, grs=self.grs)

    def describe(self) -> str:
        if self.kind == "polynomial":
            return f"poly:{self.exponent:g}"
        return f"table[{len(self.table)}]"


def weight_eval(w: WeightSpec, x) -> float:
    """Evaluate the weight at offset x."""
    if w.kind == "polynomial":
        return float((1.0 + abs(float(x))) ** w.exponent)
    try:
        return w._lookup[_key(x)]
    except KeyError:
        raise OutOfTable(f"offset {x!r} is not tabulated") from None


@dataclass(frozen=True)
class SubmultReport:
    pairs_checked: int
    pairs_skipped: int
    worst_ratio: float
    worst_pair: tuple[float, float] | None
    passed: bool


def check_submultiplicative(w: WeightSpec, offsets: Iterable[float], rtol=1e-12) -> SubmultReport:
    """Check w(x+y) <= w(x)w(y) on all offset pairs whose sum is evaluable."""
    xs = list(offsets)
    if not xs:
        raise ValueError("offsets must be nonempty")
    checked = skipped = 0
    worst = 0.0
    worst_pair = None
    for x in xs:
        for y in xs:
            try:
                num = weight_eval(w, x + y)
            except OutOfTable:
                skipped += 1
                continue
            ratio = num / (weight_eval(w, x) * weight_eval(w, y))
            checked += 1
            if ratio > worst:
                worst, worst_pair = ratio, (x, y)
    return SubmultReport(checked, skipped, worst, worst_pair, worst <= 1.0 + rtol)


def estimate_moderation_constant(v: WeightSpec, w: WeightSpec, offsets: Iterable[float]) -> float:
    """Smallest empirical C with v(x+y) <= C w(x) v(y) on the offset pairs."""
    xs = list(offsets)
    if not xs:
        raise ValueError("offsets must be nonempty")
    best = 0.0
    evaluated = 0
    for x in xs:
        for y in xs:
            try:
                num = weight_eval(v, x + y)
            except OutOfTable:
                continue
            best = max(best, num / (weight_eval(w, x) * weight_eval(v, y)))
            evaluated += 1
    if not evaluated:
        raise OutOfTable("no offset pair was evaluable")
    return best
