"""Sequences with ``|a_n - s_{n-1}| = theta(s_{n-1})`` and their subset sums.

Here ``s_n = a_1 + ... + a_n``. When theta(k) is at most a constant times
``k / (log k)^2`` the subset-sum set P(A) has an asymptotic density; this
module generates such sequences, tracks ``delta_n = |P(A) ∩ [1, s_n]| / s_n``
and reproduces the greedy decomposition used to pass from the checkpoints
``s_n`` to arbitrary x.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from ..errors import CapacityError, ConstructionError
from ..intset import subset_sums_int

THETA_PRESETS = ("zero", "k_over_log2", "constant_c")


@dataclass(frozen=True)
class ThetaRule:
    """``k -> theta(k)``. Presets:

    * ``zero``: theta = 0
    * ``k_over_log2``: ``floor(c * k / (ln k)^2)`` (0 for k < 2)
    * ``constant_c``: theta = c (c a nonnegative integer)
    """

    name: str
    c: float = 1.0

    def __post_init__(self):
        if self.name not in THETA_PRESETS:
            raise ValueError(f"unknown theta preset {self.name!r}; choose from {THETA_PRESETS}")
        if self.c < 0:
            raise ValueError("theta constant must be nonnegative")
        if self.name == "constant_c" and int(self.c) != self.c:
            raise ValueError("constant_c needs an integer constant")

    def __call__(self, k: int) -> int:
        if self.name == "zero":
            return 0
        if self.name == "constant_c":
            return int(self.c)
        if k < 2:
            return 0
        return math.floor(self.c * k / math.log(k) ** 2)

    def describe(self) -> str:
        return self.name if self.name == "zero" else f"{self.name}(c={self.c:g})"


SignPolicy = Callable[[int], int]


def _sign_fn(policy) -> SignPolicy:
    if callable(policy):
        return policy
    if policy == "minus":
        return lambda n: -1
    if policy == "plus":
        return lambda n: 1
    if policy == "alternate":
        return lambda n: -1 if n % 2 else 1
    raise ValueError(f"unknown sign policy {policy!r}")


@dataclass
class ThetaSequence:
    """Generated terms ``a_1..a_N`` (``terms[i] = a_{i+1}``) and partial sums."""

    terms: list[int]
    partial_sums: list[int]
    theta: ThetaRule
    sign_policy: object
    seed: tuple[int, ...]
    stopped_by: str = "count"

    def __len__(self) -> int:
        return len(self.terms)

    def a(self, n: int) -> int:
        return self.terms[n - 1]

    def s(self, n: int) -> int:
        return 0 if n == 0 else self.partial_sums[n - 1]

    def step(self, n: int) -> int:
        """The term ``a_n`` the rule prescribes after ``s_{n-1}``, without range checks."""
        prev = self.s(n - 1)
        return prev + _sign_fn(self.sign_policy)(n) * self.theta(prev)

    def peek_next(self) -> int:
        return self.step(len(self.terms) + 1)

    def growth_constants(self) -> list[float]:
        """``s_n / 2^n`` for each generated n."""
        return [s / 2.0 ** (i + 1) for i, s in enumerate(self.partial_sums)]


def theta_sequence(spec, sign_policy="minus", seed: Sequence[int] = (2, 3), count: int = 30,
                   cap: int | None = None) -> ThetaSequence:
    """Extend ``seed`` by ``a_n = s_{n-1} ± theta(s_{n-1})``.

    Stops after ``count`` terms or before the first term whose partial sum
    would exceed ``cap``. Raises :class:`ConstructionError` naming the step
    if ``theta(s) >= s / 2`` or if a term fails to exceed its predecessor.
    """
    rule = spec if isinstance(spec, ThetaRule) else ThetaRule(spec) if isinstance(spec, str) else ThetaRule(*spec)
    sign = _sign_fn(sign_policy)
    seed = tuple(int(v) for v in seed)
    if not seed:
        raise ValueError("seed must be nonempty")
    if seed[0] <= 0 or any(b <= a for a, b in zip(seed, seed[1:])):
        raise ValueError("seed must be strictly increasing positive integers")
    terms, sums, total = [], [], 0
    for v in seed[:count]:
        total += v
        if cap is not None and total > cap:
            break
        terms.append(v)
        sums.append(total)
    stopped = "count"
    n = len(terms) + 1
    while len(terms) < count and len(terms) == n - 1 and len(terms) >= len(seed):
        prev = sums[-1]
        th = rule(prev)
        if 2 * th >= prev:
            raise ConstructionError(f"step {n}: theta({prev}) = {th} is not below {prev}/2")
        sg = sign(n)
        if sg not in (-1, 1):
            raise ValueError(f"sign policy returned {sg} at step {n}")
        a = prev + sg * th
        if a <= terms[-1]:
            raise ConstructionError(f"step {n}: a_{n} = {a} does not exceed a_{n-1} = {terms[-1]}")
        if cap is not None and prev + a > cap:
            stopped = "cap"
            break
        terms.append(a)
        sums.append(prev + a)
        n += 1
    if len(terms) < len(seed) and cap is not None:
        stopped = "cap"
    return ThetaSequence(terms, sums, rule, sign_policy, seed, stopped)


@dataclass
class DeltaSeries:
    """``delta_n`` at every index n where it is determined by the generated terms."""

    n: list[int]
    s: list[int]
    counts: list[int]
    delta: list[float]
    theta_s: list[int]
    fitted_C: float = 0.0
    sandwich: list[tuple[int, int, int, int, bool]] = field(default_factory=list)

    def pairs(self) -> list[tuple[int, float]]:
        return list(zip(self.n, self.delta))

    def diffs(self) -> list[tuple[int, float]]:
        return [(self.n[i], self.delta[i] - self.delta[i - 1])
                for i in range(1, len(self.n)) if self.n[i] == self.n[i - 1] + 1]

    def spread(self, last: int) -> float:
        tail = self.delta[-last:]
        return max(tail) - min(tail)


def delta_series(seq: ThetaSequence, max_bits: int | None = None) -> DeltaSeries:
    """``delta_n = |P(A) ∩ [1, s_n]| / s_n`` from one subset-sum bitmap.

    P(A) ∩ [1, s_n] can use terms past a_n when they are <= s_n, so delta_n
    is reported only where every such term is generated, i.e. where the
    next prescribed term a_{N+1} exceeds s_n.

    ``sandwich`` rows are ``(n, lower, count_n, upper, ok)`` for
    ``2 c_{n-1} - 2 theta(s_{n-1}) - 1 <= c_n <= 2 c_{n-1} + theta(s_n) + 1``.
    ``fitted_C`` is the max of ``|delta_n - delta_{n-1}| s_n / max(theta(s_n), 1)``.
    """
    N = len(seq)
    if N == 0:
        raise ValueError("empty sequence")
    top = seq.s(N)
    if max_bits is not None and top + 1 > max_bits:
        raise CapacityError(f"s_N = {top} exceeds subset-sum capacity {max_bits}", estimate=top + 1, budget=max_bits)
    P = subset_sums_int(seq.terms, top)
    total = P.bit_count()
    nxt = seq.peek_next()
    ns, ss, cs, ds, ths = [], [], [], [], []
    for n in range(1, N + 1):
        s_n = seq.s(n)
        if nxt <= s_n:
            break
        c = total - (P >> (s_n + 1)).bit_count() - 1
        ns.append(n)
        ss.append(s_n)
        cs.append(c)
        ds.append(c / s_n)
        ths.append(seq.theta(s_n))
    out = DeltaSeries(ns, ss, cs, ds, ths)
    worst = 0.0
    for i in range(1, len(ns)):
        if ns[i] != ns[i - 1] + 1:
            continue
        worst = max(worst, abs(ds[i] - ds[i - 1]) * ss[i] / max(ths[i], 1))
        lo = 2 * cs[i - 1] - 2 * seq.theta(ss[i - 1]) - 1
        hi = 2 * cs[i - 1] + ths[i] + 1
        out.sandwich.append((ns[i], lo, cs[i], hi, lo <= cs[i] <= hi))
    out.fitted_C = worst
    return out


@dataclass(frozen=True)
class Decomposition:
    """``x = a_{n_1+1} + ... + a_{n_j+1} + z`` with ``n_1 > ... > n_j > k``."""

    x: int
    k: int
    indices: tuple[int, ...]
    remainder: int
    weak_bound: int  # a_{k+2} + theta(s_{k+1})
    stated_bound: int | None  # theta(s_{n_1+1}) + s_k, None when no index was taken

    @property
    def within_weak_bound(self) -> bool:
        return self.remainder < self.weak_bound

    @property
    def within_stated_bound(self) -> bool | None:
        return None if self.stated_bound is None else self.remainder <= self.stated_bound


def greedy_decompose(x: int, seq: ThetaSequence, k: int) -> Decomposition:
    """Greedy split of x into distinct terms with indices above the cutoff k.

    ``n_1`` is the index with ``a_{n_1+1} <= x < a_{n_1+2}``; each later
    index is the largest m below the previous one with ``a_{m+1}`` not
    exceeding the current remainder (which is ``n_i - 1`` whenever the
    remainder is at least ``a_{n_i}``). Stops once that m would be <= k.
    """
    x, k = int(x), int(k)
    N = len(seq)
    if k < 0 or k + 2 > N:
        raise ValueError(f"cutoff k={k} needs a_(k+2) to exist (have {N} terms)")
    if x < 1:
        raise ValueError("x must be positive")
    if x >= seq.terms[-1]:
        raise ValueError(f"x={x} out of range: must be below the last term {seq.terms[-1]}")
    terms = seq.terms
    idx: list[int] = []
    r, hi = x, N
    while True:
        m = bisect.bisect_right(terms, r, 0, hi) - 1
        if m <= k:
            break
        idx.append(m)
        r -= terms[m]
        hi = m
    weak = terms[k + 1] + seq.theta(seq.s(k + 1))
    stated = seq.theta(seq.s(idx[0] + 1)) + seq.s(k) if idx else None
    return Decomposition(x, k, tuple(idx), r, weak, stated)
