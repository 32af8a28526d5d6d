"""Sieve-backed arithmetic functions.

Everything here hangs off a smallest-prime-factor table, so factoring any
``n <= limit`` costs O(log n). Whole-range variants (``omega_array`` and
friends) are vectorized with numpy and are what the set generators use.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import UndefinedInputError

__all__ = [
    "ArithTables",
    "build_arith_tables",
    "omega",
    "largest_prime_factor",
    "is_kth_power_free",
    "primes_up_to",
    "euler_phi",
    "mertens_product",
    "mertens_product_with_error",
    "factorize",
    "is_prime",
]


@dataclass(frozen=True, eq=False)
class ArithTables:
    """Smallest-prime-factor table over ``[0, limit]``.

    ``spf[n]`` is the smallest prime factor of ``n`` for ``n >= 2``; entries
    0 and 1 are 0. The array is read-only so a table can be shared freely.
    """

    limit: int
    spf: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def _check(self, n: int, low: int = 1) -> int:
        n = int(n)
        if not low <= n <= self.limit:
            raise ValueError(f"n={n} outside table range [{low}, {self.limit}]")
        return n

    def factor_chain(self, n: int) -> list[int]:
        """Prime factors of ``n`` with multiplicity, in nondecreasing order."""
        n = self._check(n)
        out = []
        spf = self.spf
        while n > 1:
            p = int(spf[n])
            out.append(p)
            n //= p
        return out

    @property
    def primes(self) -> np.ndarray:
        if "primes" not in self._cache:
            idx = np.arange(self.limit + 1)
            p = np.flatnonzero((self.spf == idx) & (idx >= 2))
            p.flags.writeable = False
            self._cache["primes"] = p
        return self._cache["primes"]

    def omega_array(self) -> np.ndarray:
        """Omega(n) (with multiplicity) for every n in [0, limit]; entries 0, 1 are 0."""
        if "omega" not in self._cache:
            om = np.zeros(self.limit + 1, dtype=np.int8)
            m = np.arange(self.limit + 1, dtype=np.int64)
            m[0] = 1
            active = m > 1
            while active.any():
                om[active] += 1
                m[active] //= self.spf[m[active]]
                active = m > 1
            om.flags.writeable = False
            self._cache["omega"] = om
        return self._cache["omega"]

    def largest_prime_factor_array(self) -> np.ndarray:
        """P+(n) for every n in [0, limit]; entries 0, 1 are 0."""
        if "lpf" not in self._cache:
            lpf = np.zeros(self.limit + 1, dtype=np.int64)
            m = np.arange(self.limit + 1, dtype=np.int64)
            m[0] = 1
            active = m > 1
            while active.any():
                p = self.spf[m[active]]
                lpf[active] = np.maximum(lpf[active], p)
                m[active] //= p
                active = m > 1
            lpf.flags.writeable = False
            self._cache["lpf"] = lpf
        return self._cache["lpf"]

    def kth_power_free_mask(self, k: int) -> np.ndarray:
        """Boolean mask over [0, limit]: True where no p**k divides n (n >= 1)."""
        if k < 2:
            raise ValueError("k must be >= 2")
        key = ("kfree", k)
        if key not in self._cache:
            mask = np.ones(self.limit + 1, dtype=bool)
            mask[0] = False
            for p in self.primes:
                q = int(p) ** k
                if q > self.limit:
                    break
                mask[q::q] = False
            mask.flags.writeable = False
            self._cache[key] = mask
        return self._cache[key]

    def prime_support_mask(self, allowed: np.ndarray) -> np.ndarray:
        """Mask of n >= 1 all of whose prime factors p satisfy ``allowed[p]``.

        ``allowed`` is a boolean array indexed by integers up to ``limit``.
        ``n = 1`` is always included (empty factorization).
        """
        allowed = np.asarray(allowed, dtype=bool)
        ok = np.ones(self.limit + 1, dtype=bool)
        ok[0] = False
        m = np.arange(self.limit + 1, dtype=np.int64)
        m[0] = 1
        active = m > 1
        while active.any():
            p = self.spf[m[active]]
            ok[active] &= allowed[p]
            m[active] //= p
            active = m > 1
        return ok


def build_arith_tables(limit: int) -> ArithTables:
    """Sieve smallest prime factors for all integers up to ``limit``.

    Eratosthenes over numpy slices: for each prime p <= sqrt(limit), mark
    every still-unmarked multiple from p*p on. Unmarked entries are prime.
    """
    limit = int(limit)
    if limit < 2:
        raise ValueError(f"limit must be >= 2, got {limit}")
    dtype = np.int32 if limit < 2**31 else np.int64
    spf = np.zeros(limit + 1, dtype=dtype)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            seg = spf[p * p :: p]
            seg[seg == 0] = p
    idx = np.arange(limit + 1, dtype=dtype)
    unmarked = spf == 0
    unmarked[:2] = False
    spf[unmarked] = idx[unmarked]
    spf.flags.writeable = False
    return ArithTables(limit=limit, spf=spf)


def omega(n: int, tables: ArithTables) -> int:
    """Number of prime factors of ``n`` counted with multiplicity."""
    return len(tables.factor_chain(n))


def largest_prime_factor(n: int, tables: ArithTables) -> int:
    n = int(n)
    if n == 1:
        raise UndefinedInputError("P+(1) is undefined: 1 has no prime divisor")
    chain = tables.factor_chain(tables._check(n, low=2))
    return chain[-1]


def factorize(n: int, tables: ArithTables) -> list[tuple[int, int]]:
    """Return ``[(p, e), ...]`` with p increasing."""
    out: list[tuple[int, int]] = []
    for p in tables.factor_chain(n):
        if out and out[-1][0] == p:
            out[-1] = (p, out[-1][1] + 1)
        else:
            out.append((p, 1))
    return out


def is_kth_power_free(n: int, k: int, tables: ArithTables) -> bool:
    if k < 2:
        raise ValueError("k must be >= 2")
    return all(e < k for _, e in factorize(n, tables))


def primes_up_to(limit: int) -> list[int]:
    limit = int(limit)
    if limit < 2:
        raise ValueError(f"limit must be >= 2, got {limit}")
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).tolist()


def is_prime(n: int) -> bool:
    """Trial division; only meant for validating small inputs."""
    n = int(n)
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def euler_phi(k: int) -> int:
    k = int(k)
    if k < 1:
        raise ValueError("k must be >= 1")
    result, m, p = k, k, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _validate_primes(primes: Iterable[int]) -> list[int]:
    ps = [int(p) for p in primes]
    if len(set(ps)) != len(ps):
        raise ValueError("repeated prime in mertens_product input")
    for p in ps:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
    return ps


def mertens_product(primes: Sequence[int], exact: bool = True) -> Fraction | float:
    """Product of (1 - 1/p) over the given distinct primes.

    Returns a :class:`Fraction` by default. ``exact=False`` multiplies in
    floating point instead, which is what long prime lists want; use
    :func:`mertens_product_with_error` to get the rounding bound as well.
    """
    ps = _validate_primes(primes)
    if exact:
        num = den = 1
        for p in ps:
            num *= p - 1
            den *= p
        return Fraction(num, den)
    return mertens_product_with_error(ps, _validated=True)[0]


def mertens_product_with_error(primes: Sequence[int], _validated: bool = False) -> tuple[float, float]:
    """Float product of (1 - 1/p) and an absolute rounding-error bound.

    Each factor and each multiplication contribute at most one unit
    roundoff, so the relative error is at most ``2 m u / (1 - 2 m u)``.
    """
    ps = list(primes) if _validated else _validate_primes(primes)
    val = 1.0
    for p in ps:
        val *= 1.0 - 1.0 / p
    u = sys.float_info.epsilon / 2
    gm = 2 * len(ps) * u
    return val, val * gm / (1 - gm)
