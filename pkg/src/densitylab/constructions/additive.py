"""Additive constructions: thin-basis padding and the 7-periodic block set."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .._util import as_fraction
from ..intset import PrefixSet

U_RESIDUES = (0, 2, 3)
V_RESIDUES = (0, 1, 2)
PROP3_MODULUS = 7


def is_normalized(A: PrefixSet) -> bool:
    """0 is a member and the positive members have gcd 1."""
    if not A.bits[0]:
        return False
    el = A.elements()[1:]
    return el.size > 0 and int(np.gcd.reduce(el)) == 1


def prop1_set(alpha, limit: int) -> PrefixSet:
    """``{0, 1, ..., floor(1/alpha)} ∪ {floor(n/alpha) : n >= 1}`` up to ``limit``.

    The initial interval is a thin additive basis, so A + A covers every
    integer while A itself has density alpha.
    """
    a = as_fraction(alpha)
    if not 0 < a <= 1:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    limit = int(limit)
    if limit < 1:
        raise ValueError("limit must be positive")
    bits = np.zeros(limit + 1, dtype=bool)
    bits[: min(limit, math.floor(1 / a)) + 1] = True
    # floor(n / alpha) = floor(n * den / num); n ranges while that stays <= limit
    n_max = (limit + 1) * a.numerator // a.denominator + 1
    n = np.arange(1, n_max + 1, dtype=np.int64)
    vals = n * a.denominator // a.numerator
    bits[vals[vals <= limit]] = True
    return PrefixSet(bits, f"prop1(alpha={alpha})")


def dyadic_block_set(limit: int) -> PrefixSet:
    """``{0} ∪ ⋃_n [4^n, 2·4^n]``: lower density 1/3, upper 2/3, A + A = N_0."""
    bits = np.zeros(int(limit) + 1, dtype=bool)
    bits[0] = True
    lo = 1
    while lo <= limit:
        bits[lo : min(2 * lo, limit) + 1] = True
        lo *= 4
    return PrefixSet(bits, "dyadic_blocks")


def dyadic_block_edges(limit: int) -> list[int]:
    """Powers of two up to ``limit``: alternately block starts and ends."""
    return [1 << e for e in range(int(limit).bit_length()) if 1 << e <= limit]


def default_prop3_schedule(limit: int) -> list[int]:
    """``N_0 = 0, N_1 = 1, N_{k+1} = (k + 2) N_k`` until ``7 N_k >= limit``."""
    N = [0, 1]
    k = 1
    while PROP3_MODULUS * N[-1] < limit:
        N.append((k + 2) * N[-1])
        k += 1
    return N


def geometric_prop3_schedule(ratio: int, top: int) -> list[int]:
    """``[0, 1, r, r^2, ..., r^top]`` - fixed-ratio schedule for window checks."""
    return [0] + [ratio**i for i in range(top + 1)]


def _check_schedule(N: Sequence[int]) -> list[int]:
    N = [int(v) for v in N]
    if len(N) < 2 or N[0] != 0 or N[1] != 1:
        raise ValueError("schedule must start N_0 = 0, N_1 = 1")
    if any(b <= a for a, b in zip(N, N[1:])):
        raise ValueError("schedule must be strictly increasing")
    return N


def prop3_set(schedule: Sequence[int], limit: int) -> PrefixSet:
    """The 7-periodic block set whose density exists but A + A oscillates.

    Residues U = {0, 2, 3} fill ``[7N_{2k}, 7N_{2k+1}]`` and residues
    V = {0, 1, 2} fill ``[7N_{2k+1}, 7N_{2k+2}]`` for every k >= 0, plus the
    seed U ∪ V = {0, 1, 2, 3}.
    """
    N = _check_schedule(schedule)
    limit = int(limit)
    if limit > PROP3_MODULUS * N[-1]:
        raise ValueError(f"limit {limit} exceeds 7 * max(schedule) = {PROP3_MODULUS * N[-1]}")
    n = np.arange(limit + 1)
    res = n % PROP3_MODULUS
    in_u = np.isin(res, U_RESIDUES)
    in_v = np.isin(res, V_RESIDUES)
    bits = np.zeros(limit + 1, dtype=bool)
    bits[:4] = True
    for m in range(len(N) - 1):
        lo, hi = PROP3_MODULUS * N[m], min(PROP3_MODULUS * N[m + 1], limit)
        if lo > limit:
            break
        pattern = in_u if m % 2 == 0 else in_v
        bits[lo : hi + 1] |= pattern[lo : hi + 1]
    return PrefixSet(bits[: limit + 1], "prop3")


@dataclass(frozen=True)
class WindowCheck:
    kind: str  # "low" for the {0..5}+7N window, "cover" for a U-block interval
    k: int
    lo: int
    hi: int
    ok: bool


def prop3_window_checks(sums: PrefixSet, schedule: Sequence[int], cover_offset: int = 7) -> list[WindowCheck]:
    """Exact window equalities for A + A of :func:`prop3_set`.

    ``low``: ``(A+A) ∩ [14N_{2k-1}, 7N_{2k}]`` equals residues {0..5} mod 7
    on that window. ``cover``: ``[7N_{2k} + cover_offset, 7N_{2k+1}]`` lies
    in A + A. Only windows fully inside ``sums.limit`` are checked.
    """
    N = _check_schedule(schedule)
    L = sums.limit
    bits = sums.bits
    out = []
    for k in range(1, len(N) // 2 + 1):
        if 2 * k >= len(N):
            break
        lo, hi = 14 * N[2 * k - 1], 7 * N[2 * k]
        if hi > L or lo > hi:
            continue
        seg = np.arange(lo, hi + 1)
        expect = (seg % 7) <= 5
        out.append(WindowCheck("low", k, lo, hi, bool(np.array_equal(bits[lo : hi + 1], expect))))
    for k in range(0, len(N) // 2 + 1):
        if 2 * k + 1 >= len(N):
            break
        lo, hi = 7 * N[2 * k] + cover_offset, 7 * N[2 * k + 1]
        if hi > L or lo > hi:
            continue
        out.append(WindowCheck("cover", k, lo, hi, bool(bits[lo : hi + 1].all())))
    return out


def prop3_edge_counts(A: PrefixSet, schedule: Sequence[int]) -> list[tuple[int, int, Fraction]]:
    """``(edge, count, count/edge)`` at each block edge ``7 N_m <= A.limit``, m >= 1."""
    N = _check_schedule(schedule)
    cum = A.cumulative_counts()
    out = []
    for v in N[1:]:
        e = 7 * v
        if e > A.limit:
            break
        out.append((e, int(cum[e]), Fraction(int(cum[e]), e)))
    return out
