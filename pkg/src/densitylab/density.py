"""Density estimates from finite prefixes.

Lower and upper asymptotic densities are liminf/limsup of ``|A ∩ [1, x]| / x``.
On a finite prefix the best we can do is sample that ratio at a set of
checkpoints and take the min/max over the tail of the schedule. Nothing is
ever extrapolated past ``A.limit``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .intset import PrefixSet

__all__ = [
    "Schedule",
    "DensityReport",
    "density_report",
    "periodic_density_exact",
    "freiman_gap",
    "parse_schedule",
]


@dataclass(frozen=True)
class Schedule:
    """Where to sample counting ratios.

    ``kind="geometric"`` gives the distinct values ``floor(eta**i) <= limit``;
    ``kind="explicit"`` uses ``points`` as given (sorted, deduplicated).
    """

    kind: str = "geometric"
    eta: float = 1.3
    points: tuple[int, ...] = ()

    def checkpoints(self, limit: int) -> list[int]:
        if self.kind == "geometric":
            if self.eta <= 1:
                raise ValueError("geometric schedule needs eta > 1")
            out, i = set(), 0
            while True:
                x = math.floor(self.eta**i)
                if x > limit:
                    break
                out.add(x)
                i += 1
            return sorted(out)
        if self.kind == "explicit":
            pts = sorted({int(p) for p in self.points})
            if pts and (pts[0] < 1 or pts[-1] > limit):
                raise ValueError(f"explicit checkpoints must lie in [1, {limit}]")
            return pts
        raise ValueError(f"unknown schedule kind {self.kind!r}")

    def describe(self) -> str:
        if self.kind == "geometric":
            return f"geometric:{self.eta:g}"
        return "explicit:" + ",".join(str(p) for p in sorted(set(self.points)))


def parse_schedule(spec) -> Schedule:
    """Accept a Schedule, a list of checkpoints, or a string like
    ``"geometric:1.3"`` / ``"explicit:10,100,1000"``."""
    if spec is None:
        return Schedule()
    if isinstance(spec, Schedule):
        return spec
    if isinstance(spec, str):
        kind, _, arg = spec.partition(":")
        if kind == "geometric":
            return Schedule("geometric", float(arg) if arg else 1.3)
        if kind == "explicit":
            return Schedule("explicit", points=tuple(int(t) for t in arg.split(",") if t))
        raise ValueError(f"cannot parse schedule {spec!r}")
    return Schedule("explicit", points=tuple(int(p) for p in spec))


@dataclass
class DensityReport:
    label: str
    limit: int
    schedule: str
    checkpoints: list[int]
    counts: list[int]
    ratios: list[float]
    lower_est: float
    upper_est: float
    tail_fraction: float = 0.5
    meta: dict = field(default_factory=dict)

    @property
    def tail_start(self) -> int:
        return tail_start(len(self.checkpoints), self.tail_fraction)

    @property
    def final_ratio(self) -> float:
        return self.ratios[-1]

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "limit": self.limit,
            "schedule": self.schedule,
            "tail_fraction": self.tail_fraction,
            "checkpoints": list(self.checkpoints),
            "counts": list(self.counts),
            "ratios": list(self.ratios),
            "lower_est": self.lower_est,
            "upper_est": self.upper_est,
            **({"meta": self.meta} if self.meta else {}),
        }

    def to_json(self, **extra) -> str:
        return json.dumps({**self.to_dict(), **extra}, indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["checkpoint", "count", "ratio"])
        for x, c, r in zip(self.checkpoints, self.counts, self.ratios):
            w.writerow([x, c, repr(r)])
        return buf.getvalue()


def tail_start(m: int, tail_fraction: float) -> int:
    return m - max(1, math.ceil(m * tail_fraction))


def density_report(
    A: PrefixSet,
    schedule=None,
    tail_fraction: float = 0.5,
    label: str | None = None,
    min_checkpoints: int = 4,
) -> DensityReport:
    """Counting ratios of ``A`` at the schedule's checkpoints.

    ``lower_est``/``upper_est`` are the min/max ratio over the last
    ``tail_fraction`` of the checkpoints.
    """
    if not 0 < tail_fraction <= 1:
        raise ValueError("tail_fraction must be in (0, 1]")
    sched = parse_schedule(schedule)
    xs = sched.checkpoints(A.limit)
    if len(xs) < max(1, min_checkpoints):
        raise ValueError(f"schedule {sched.describe()} yields {len(xs)} checkpoints, need {min_checkpoints}")
    cum = A.cumulative_counts()
    counts = [int(cum[x]) for x in xs]
    ratios = [c / x for c, x in zip(counts, xs)]
    tail = ratios[tail_start(len(xs), tail_fraction):]
    return DensityReport(
        label=A.label if label is None else label,
        limit=A.limit,
        schedule=sched.describe(),
        checkpoints=xs,
        counts=counts,
        ratios=ratios,
        lower_est=min(tail),
        upper_est=max(tail),
        tail_fraction=tail_fraction,
    )


def periodic_density_exact(residues: Iterable[int], modulus: int) -> Fraction:
    modulus = int(modulus)
    if modulus < 1:
        raise ValueError("modulus must be positive")
    res = {int(r) for r in residues}
    bad = [r for r in res if not 0 <= r < modulus]
    if bad:
        raise ValueError(f"residues {sorted(bad)} not in [0, {modulus})")
    return Fraction(len(res), modulus)


def freiman_gap(alpha_est, gamma_est):
    """``gamma - (alpha/2 + min(alpha, 1/2))``; nonnegative for normalized sets.

    Exact if both arguments are Fractions.
    """
    for v in (alpha_est, gamma_est):
        if not 0 <= v <= 1:
            raise ValueError(f"density estimate {v} not in [0, 1]")
    half = Fraction(1, 2) if isinstance(alpha_est, Fraction) else 0.5
    return gamma_est - (alpha_est / 2 + min(alpha_est, half))
