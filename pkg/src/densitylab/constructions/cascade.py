"""A zero-density set whose product set oscillates between alpha and beta.

Primes are split into P0 (with prod (1 - 1/p) ~ beta), and the remaining
odd- and even-indexed primes P1, P2. Q = Q1 ∪ Q2, where Qi are the integers
supported on Pi, has Q·Q = integers free of P0 primes. The cascade then
prunes Q stage by stage: odd stages (Case I) drop the longest interval
above n_j that keeps ``|(A·A)(n)| >= alpha n`` for all n >= n0, even stages
(Case II) advance n_j until the product-set ratio climbs back above
``beta - 1/j``. Everything runs on the materialized prefix ``[1, limit]``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .._util import as_fraction
from ..errors import ConstructionError
from ..intset import PrefixSet, product_set
from ..numtheory import ArithTables, build_arith_tables, primes_up_to


@dataclass(frozen=True)
class PrimePartition:
    """P0, P1, P2 over the primes up to ``prime_bound``.

    Primes above the bound are never in P0; they fall into P1 or P2 by the
    parity of their index (p_1 = 2 has index 1).
    """

    P0: tuple[int, ...]
    P1: tuple[int, ...]
    P2: tuple[int, ...]
    beta_target: Fraction
    beta_achieved: Fraction
    prime_bound: int

    def labels(self, limit: int) -> np.ndarray:
        """int8 array over [0, limit]: 0/1/2 for primes by class, -1 elsewhere."""
        lab = np.full(limit + 1, -1, dtype=np.int8)
        if limit < 2:
            return lab
        ps = np.asarray(primes_up_to(limit), dtype=np.int64)
        idx = np.arange(1, ps.size + 1)
        lab[ps] = np.where(idx % 2 == 1, 1, 2)
        p0 = [p for p in self.P0 if p <= limit]
        lab[p0] = 0
        return lab

    def to_dict(self) -> dict:
        return {
            "P0": list(self.P0),
            "beta_target": str(self.beta_target),
            "beta_achieved": str(self.beta_achieved),
            "beta_achieved_float": float(self.beta_achieved),
            "prime_bound": self.prime_bound,
        }


def prime_partition(beta, prime_bound: int = 10**4, tol=0.01) -> PrimePartition:
    """Greedy P0: scan primes upward, keep p while the running product stays >= beta.

    The product is tracked exactly. Raises :class:`ConstructionError` if the
    achieved product is more than ``tol`` above beta.
    """
    b = as_fraction(beta)
    tol = as_fraction(tol)
    if not 0 < b < 1:
        raise ValueError("beta must lie in (0, 1)")
    ps = primes_up_to(max(int(prime_bound), 2))
    prod = Fraction(1)
    P0 = []
    for p in ps:
        nxt = prod * Fraction(p - 1, p)
        if nxt >= b:
            prod = nxt
            P0.append(p)
            if prod == b:
                break
    if prod - b > tol:
        raise ConstructionError(
            f"primes <= {prime_bound} reach only prod = {float(prod):.6f} for beta = {float(b)} (tol {float(tol)})"
        )
    p0 = set(P0)
    P1 = tuple(p for i, p in enumerate(ps, 1) if i % 2 == 1 and p not in p0)
    P2 = tuple(p for i, p in enumerate(ps, 1) if i % 2 == 0 and p not in p0)
    return PrimePartition(tuple(P0), P1, P2, b, prod, int(prime_bound))


def build_q(partition: PrimePartition, limit: int, tables: ArithTables | None = None):
    """``(Q, Q1, Q2)`` over [0, limit]; 1 belongs to both Q1 and Q2."""
    if tables is None:
        tables = build_arith_tables(max(limit, 2))
    lab = partition.labels(tables.limit)
    q1 = tables.prime_support_mask(lab == 1)[: limit + 1]
    q2 = tables.prime_support_mask(lab == 2)[: limit + 1]
    return PrefixSet(q1 | q2, "Q"), PrefixSet(q1, "Q1"), PrefixSet(q2, "Q2")


def p0_free_set(partition: PrimePartition, limit: int, tables: ArithTables | None = None) -> PrefixSet:
    """Integers in [1, limit] with no prime factor in P0."""
    if tables is None:
        tables = build_arith_tables(max(limit, 2))
    lab = partition.labels(tables.limit)
    return PrefixSet(tables.prime_support_mask(lab != 0)[: limit + 1], "P0-free")


@dataclass
class Milestone:
    j: int
    case: str  # "I" or "II"
    n_j: int
    n_next: int
    s: int
    dropped: tuple[int, int] | None
    witness_n: int
    witness_count: int
    search_bound: int | None = None  # floor(n_j^2/alpha) + 1 for Case I


@dataclass
class CascadeTrace:
    alpha: Fraction
    beta: Fraction
    limit: int
    n0: int
    P0: tuple[int, ...]
    milestones: list[Milestone] = field(default_factory=list)
    notices: list[str] = field(default_factory=list)

    @property
    def n_values(self) -> list[int]:
        return [1] + [m.n_next for m in self.milestones]

    def to_dict(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "limit": self.limit,
            "n0": self.n0,
            "P0": list(self.P0),
            "milestones": [asdict(m) for m in self.milestones],
            "notices": list(self.notices),
        }

    def to_json(self, **extra) -> str:
        return json.dumps({**self.to_dict(), **extra}, indent=2, sort_keys=True)


def _square_counts(bits: np.ndarray, limit: int) -> np.ndarray:
    A = PrefixSet(bits)
    return product_set(A, A, limit).cumulative_counts()


def _first_below(cum: np.ndarray, ratio: Fraction, start: int) -> int | None:
    """Least n >= start with ``cum[n] < ratio * n``."""
    n = np.arange(start, cum.size, dtype=np.int64)
    bad = np.flatnonzero(cum[start:] * ratio.denominator < ratio.numerator * n)
    return int(n[bad[0]]) if bad.size else None


def _first_above(cum: np.ndarray, ratio: Fraction, start: int) -> int | None:
    """Least n >= start with ``cum[n] > ratio * n``."""
    n = np.arange(start, cum.size, dtype=np.int64)
    good = np.flatnonzero(cum[start:] * ratio.denominator > ratio.numerator * n)
    return int(n[good[0]]) if good.size else None


def star_threshold(cum: np.ndarray, alpha: Fraction) -> int:
    """Least n0 >= 1 such that ``cum[n] >= alpha n`` on all of [n0, limit]."""
    n = np.arange(cum.size, dtype=np.int64)
    bad = np.flatnonzero(cum[1:] * alpha.denominator < alpha.numerator * n[1:])
    return int(bad[-1]) + 2 if bad.size else 1


def theorem_cascade(alpha, partition: PrimePartition, limit: int, max_stages: int = 6,
                    tables: ArithTables | None = None):
    """Run the pruning cascade on Q over [1, limit]; return ``(A, trace)``.

    Stage j starts from ``(n_j, A_j)`` with ``n_1 = 1``, ``A_1 = Q``.

    * Case I (j odd): least ``s > n_j`` such that dropping ``[n_j+1, s]``
      makes ``|(D·D)(n)| < alpha n`` for some ``n0 <= n <= limit``. Found by
      bisection, since the condition is monotone in s. Then
      ``n_{j+1} = s - 1`` and ``[n_j+1, s-1]`` is dropped.
    * Case II (j even): least ``s > n_j`` with ``|(A_j·A_j)(s)| > (beta - 1/j) s``;
      ``n_{j+1} = s``.

    Stops after ``max_stages`` stages or when a search finds nothing within
    ``limit`` (recorded in ``trace.notices``).
    """
    a = as_fraction(alpha)
    beta = partition.beta_achieved
    if not 0 < a < beta:
        raise ValueError(f"need 0 < alpha < beta_achieved = {float(beta):.6f}")
    limit = int(limit)
    if tables is None:
        tables = build_arith_tables(max(limit, 2))
    Q, _, _ = build_q(partition, limit, tables)
    cum_q = _square_counts(Q.bits, limit)
    n0 = star_threshold(cum_q, a)
    if n0 > limit:
        raise ConstructionError(f"(*) fails for Q·Q at n = {limit}: no threshold n0 within limit")
    trace = CascadeTrace(a, beta, limit, n0, partition.P0)
    bits = Q.bits.copy()
    nj = 1
    for j in range(1, max_stages + 1):
        if j % 2 == 1:
            bound = nj * nj * a.denominator // a.numerator + 1
            hi = min(bound, limit)

            def violation(s):
                trial = bits.copy()
                trial[nj + 1 : s + 1] = False
                cum = _square_counts(trial, limit)
                w = _first_below(cum, a, n0)
                return None if w is None else (w, int(cum[w]))

            if hi <= nj or violation(hi) is None:
                trace.notices.append(
                    f"stage {j} (Case I): no violating s in ({nj}, {hi}]"
                    + (f"; search bound {bound} exceeds limit {limit}" if bound > limit else "")
                )
                break
            lo_s, hi_s = nj + 1, hi
            while lo_s < hi_s:
                mid = (lo_s + hi_s) // 2
                if violation(mid) is None:
                    lo_s = mid + 1
                else:
                    hi_s = mid
            s = lo_s
            wn, wc = violation(s)
            dropped = (nj + 1, s - 1) if s - 1 >= nj + 1 else None
            bits[nj + 1 : s] = False
            trace.milestones.append(Milestone(j, "I", nj, s - 1, s, dropped, wn, wc, bound))
            nj = s - 1
        else:
            target = beta - Fraction(1, j)
            cum = _square_counts(bits, limit)
            s = _first_above(cum, target, nj + 1) if nj + 1 <= limit else None
            if s is None:
                trace.notices.append(f"stage {j} (Case II): ratio never exceeds beta - 1/{j} within {limit}")
                break
            trace.milestones.append(Milestone(j, "II", nj, s, s, None, s, int(cum[s])))
            nj = s
    return PrefixSet(bits, "cascade"), trace


def verify_cascade(A: PrefixSet, trace: CascadeTrace, tables: ArithTables | None = None) -> list[str]:
    """Replay every milestone against freshly materialized sets.

    Returns a list of human-readable failures; empty means every check passed.
    """
    fails: list[str] = []
    limit, a, beta, n0 = trace.limit, trace.alpha, trace.beta, trace.n0
    if tables is None:
        tables = build_arith_tables(max(limit, 2))
    part = PrimePartition(trace.P0, (), (), beta, beta, max(trace.P0, default=2))
    Q, _, _ = build_q(part, limit, tables)
    if not A.issubset(Q):
        fails.append("A is not a subset of Q")
    bits = Q.bits.copy()
    snapshots = []
    prev_n = 1
    for m in trace.milestones:
        if m.n_j != prev_n or m.n_next < m.n_j:
            fails.append(f"stage {m.j}: n sequence broken ({prev_n} -> {m.n_j} -> {m.n_next})")
        if m.case == "I":
            if m.s > m.search_bound:
                fails.append(f"stage {m.j}: s = {m.s} exceeds bound {m.search_bound}")
            trial = bits.copy()
            trial[m.n_j + 1 : m.s + 1] = False
            cum = _square_counts(trial, limit)
            c = int(cum[m.witness_n])
            if not (m.witness_n >= n0 and c == m.witness_count and c * a.denominator < a.numerator * m.witness_n):
                fails.append(f"stage {m.j}: Case I witness n = {m.witness_n} does not violate (*)")
            bits[m.n_j + 1 : m.s] = False
            cum_next = _square_counts(bits, limit)
            w = _first_below(cum_next, a, n0)
            if w is not None:
                fails.append(f"stage {m.j}: A_(j+1) violates (*) at n = {w}, so s was not minimal")
        else:
            target = beta - Fraction(1, m.j)
            cum = _square_counts(bits, limit)
            if not cum[m.s] * target.denominator > target.numerator * m.s:
                fails.append(f"stage {m.j}: Case II condition fails at s = {m.s}")
            first = _first_above(cum, target, m.n_j + 1)
            if first != m.s:
                fails.append(f"stage {m.j}: Case II s = {m.s} is not the least (found {first})")
        snapshots.append((m.n_next, bits.copy()))
        prev_n = m.n_next
    if not np.array_equal(bits, A.bits):
        fails.append("replayed final set differs from A")
    for n_next, snap in snapshots:
        if not np.array_equal(snap[: n_next + 1], A.bits[: n_next + 1]):
            fails.append(f"A(n) != A_j(n) at milestone n = {n_next}")
    w = _first_below(_square_counts(A.bits, limit), a, n0)
    if w is not None:
        fails.append(f"final A violates (*) at n = {w}")
    return fails
