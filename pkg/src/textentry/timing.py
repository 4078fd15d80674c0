"""Fitts/Hick cost models and the amortized-cost family built on them.

All costs are abstract, dimensionless units. With the default constants
(fitts_a=0, fitts_b=1, hick_b=1) a cost of 1 is one bit of difficulty, which
is what lets the error ratio INF0/C and the modification cost M be added.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .errors import InconsistentInputError, InvalidChoiceCountError, UndefinedMetricError
from .metrics import TaxonomyCounts

TF_MODES = ("product", "time-only")


@dataclass(frozen=True)
class TimingParams:
    """Constants for the cost models.

    ``tf_mode="product"`` charges fitts_time(d) * d for a cursor trip of d
    characters; ``"time-only"`` charges fitts_time(d) alone.
    """

    fitts_a: float = 0.0
    fitts_b: float = 1.0
    hick_b: float = 1.0
    default_candidates: int = 1
    tf_mode: str = "product"

    def __post_init__(self):
        # zero slopes are allowed: they collapse AAC to the plain error ratio
        if self.fitts_a < 0 or self.fitts_b < 0 or self.hick_b < 0:
            raise ValueError("timing constants must be non-negative")
        if self.default_candidates < 1:
            raise ValueError("default_candidates must be >= 1")
        if self.tf_mode not in TF_MODES:
            raise ValueError(f"tf_mode must be one of {TF_MODES}, got {self.tf_mode!r}")

    def with_(self, **changes) -> "TimingParams":
        return replace(self, **changes)


def fitts_time(distance: float, params: TimingParams) -> float:
    """Movement cost over ``distance`` characters (target width 1)."""
    if distance < 0:
        raise ValueError(f"distance must be non-negative, got {distance}")
    return params.fitts_a + params.fitts_b * math.log2(distance + 1)


def hick_time(n: int, params: TimingParams) -> float:
    if n < 1:
        raise InvalidChoiceCountError(f"number of choices must be >= 1, got {n}")
    return params.hick_b * math.log2(n + 1)


def amortized_cost(counts: TaxonomyCounts) -> float:
    if counts.c == 0:
        raise UndefinedMetricError("amortized cost undefined: C = 0")
    return (counts.inf + counts.if_ + counts.f) / counts.c


def amortized_bounds(inf0: int, f_all: int, c: int) -> tuple[float, float]:
    """Bounds on A between the nothing-fixed and everything-fixed situations.

    Everything fixed turns every uncorrected error into a fixed one
    (IF_all = INF0), which gives the upper bound INF0/C + F_all/C.
    """
    if c == 0:
        raise UndefinedMetricError("amortized bounds undefined: C = 0")
    lower = inf0 / c
    return lower, lower + f_all / c


@dataclass(frozen=True)
class CostBreakdown:
    inf0: int
    c: int
    max_dw: int
    t_h: float
    t_f: float
    p: float
    r: float
    m: float | None = None
    aac: float | None = None


def movement_cost(max_dw: int, params: TimingParams) -> float:
    """Cursor-movement term of the penalty numerator for one buffer."""
    if max_dw == 0:
        return 0.0
    t_f = fitts_time(max_dw, params)
    return t_f * max_dw if params.tf_mode == "product" else t_f


def penalty_numerator(
    inf0: int, max_dw: int, candidate_counts: Sequence[int], params: TimingParams
) -> float:
    """T_H * INF0 + T_F * max(D_w) for one committed buffer.

    ``candidate_counts`` gives the choice count at each wrong position, so
    the selection term is a sum of per-instance Hick costs. Missing entries
    fall back to ``params.default_candidates``.
    """
    if inf0 == 0 and max_dw > 0:
        raise InconsistentInputError("max_dw > 0 with no incorrect characters")
    counts = list(candidate_counts)[:inf0]
    counts += [params.default_candidates] * (inf0 - len(counts))
    selection = sum(hick_time(n, params) for n in counts)
    return selection + movement_cost(max_dw, params)


def correction_penalty(
    c: int, inf0: int, max_dw: int, n_candidates: int, params: TimingParams
) -> CostBreakdown:
    """Average penalty P and correct ratio R for a single buffer.

    ``m`` and ``aac`` are left unset; see :func:`modification_cost` and
    :func:`aac`.
    """
    if c + inf0 == 0:
        raise UndefinedMetricError("correction penalty undefined: C + INF0 = 0")
    if inf0 == 0 and max_dw > 0:
        raise InconsistentInputError("max_dw > 0 with no incorrect characters")
    t_h = hick_time(n_candidates, params)
    t_f = fitts_time(max_dw, params)
    numerator = penalty_numerator(inf0, max_dw, [n_candidates] * inf0, params)
    return CostBreakdown(
        inf0=inf0, c=c, max_dw=max_dw, t_h=t_h, t_f=t_f,
        p=numerator / (c + inf0), r=c / (c + inf0),
    )


def modification_cost(breakdown: CostBreakdown) -> float:
    if breakdown.r == 0:
        raise UndefinedMetricError("modification cost undefined: correct ratio R = 0")
    return breakdown.p / breakdown.r


def aac(c: int, inf0: int, m: float) -> float:
    if c == 0:
        raise UndefinedMetricError("AAC undefined: C = 0")
    return inf0 / c + m


def complete(breakdown: CostBreakdown) -> CostBreakdown:
    """Fill in ``m`` and ``aac`` on a breakdown from :func:`correction_penalty`."""
    m = modification_cost(breakdown)
    return replace(breakdown, m=m, aac=aac(breakdown.c, breakdown.inf0, m))


@dataclass
class CostTotals:
    """Running sums over committed buffers.

    Numerators and denominators are summed before dividing, so one long
    buffer with a distant error does not dominate a corpus of short ones.
    """

    c: int = 0
    inf0: int = 0
    numerator: float = 0.0

    def add(self, c: int, inf0: int, max_dw: int, candidate_counts: Iterable[int],
            params: TimingParams) -> None:
        self.c += c
        self.inf0 += inf0
        self.numerator += penalty_numerator(inf0, max_dw, list(candidate_counts), params)

    @property
    def p(self) -> float:
        if self.c + self.inf0 == 0:
            raise UndefinedMetricError("correction penalty undefined: C + INF0 = 0")
        return self.numerator / (self.c + self.inf0)

    @property
    def r(self) -> float:
        if self.c + self.inf0 == 0:
            raise UndefinedMetricError("correct ratio undefined: C + INF0 = 0")
        return self.c / (self.c + self.inf0)

    @property
    def m(self) -> float:
        r = self.r
        if r == 0:
            raise UndefinedMetricError("modification cost undefined: correct ratio R = 0")
        return self.p / r

    @property
    def aac(self) -> float:
        return aac(self.c, self.inf0, self.m)
