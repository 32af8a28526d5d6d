"""Multiplicative set families and the proof diagnostics around product sets."""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .._util import as_fraction
from ..intset import PrefixSet
from ..numtheory import ArithTables, build_arith_tables, euler_phi, primes_up_to

CLASSICAL_KINDS = (
    "squarefree",
    "cubefree",
    "nonsquarefree",
    "nonsquarefree1",
    "coprime",
    "multiples",
    "prime_union",
    "omega_bounded",
)

ZETA3 = 1.2020569031595942  # Apery's constant
OMEGA_SLOPE = 0.75
OMEGA_OFFSET = 1.0

_KIND_RE = re.compile(r"^([a-z_0-9]+?)(?:\((\d+)\))?$")


def _parse_kind(kind: str, k, r):
    m = _KIND_RE.match(kind.strip())
    if not m or m.group(1) not in CLASSICAL_KINDS:
        raise ValueError(f"unknown set kind {kind!r}; choose from {CLASSICAL_KINDS}")
    name, arg = m.group(1), m.group(2)
    if arg is not None:
        if name in ("coprime", "multiples"):
            k = int(arg)
        elif name == "prime_union":
            r = int(arg)
        else:
            raise ValueError(f"kind {name!r} takes no parameter")
    return name, k, r


def first_primes(r: int) -> list[int]:
    if r < 1:
        raise ValueError("r must be >= 1")
    bound = 16
    while True:
        ps = primes_up_to(bound)
        if len(ps) >= r:
            return ps[:r]
        bound *= 2


def omega_bound(n: np.ndarray | int):
    """``0.75 ln ln n + 1``."""
    return OMEGA_SLOPE * np.log(np.log(n)) + OMEGA_OFFSET


def classical_set(kind: str, limit: int, tables: ArithTables | None = None, k: int | None = None,
                  r: int | None = None) -> PrefixSet:
    """Named multiplicative families over ``[1, limit]`` (0 is never a member).

    ``kind`` may carry its parameter inline, e.g. ``"coprime(6)"`` or
    ``"prime_union(3)"``.

    * squarefree / cubefree / nonsquarefree
    * nonsquarefree1: {1} ∪ non-squarefree (closed under multiplication)
    * coprime(k): gcd(n, k) = 1
    * multiples(k): kN
    * prime_union(r): multiples of any of the first r primes
    * omega_bounded: {1, 2} ∪ {n >= 3 : Omega(n) <= 0.75 ln ln n + 1}
    """
    name, k, r = _parse_kind(kind, k, r)
    limit = int(limit)
    if limit < 1:
        raise ValueError("limit must be positive")
    if tables is None:
        tables = build_arith_tables(max(limit, 2))
    if limit > tables.limit:
        raise ValueError(f"limit {limit} exceeds table limit {tables.limit}")
    L = limit + 1
    if name in ("squarefree", "nonsquarefree", "nonsquarefree1"):
        sf = tables.kth_power_free_mask(2)[:L]
        if name == "squarefree":
            bits, label = sf.copy(), "squarefree"
        else:
            bits = ~sf
            bits[0] = False
            if name == "nonsquarefree1":
                bits[1] = True
            label = name
    elif name == "cubefree":
        bits, label = tables.kth_power_free_mask(3)[:L].copy(), "cubefree"
    elif name in ("coprime", "multiples"):
        if k is None or k < 1:
            raise ValueError(f"{name} needs a positive k")
        bits = np.zeros(L, dtype=bool)
        if name == "multiples":
            bits[k::k] = True
        else:
            bits[1:] = True
            for p in {q for q in primes_up_to(max(k, 2)) if k % q == 0}:
                bits[::p] = False
            bits[0] = False
        label = f"{name}({k})"
    elif name == "prime_union":
        if r is None or r < 1:
            raise ValueError("prime_union needs r >= 1")
        ps = tables.primes
        if r > ps.size:
            raise ValueError(f"r={r} exceeds the {ps.size} primes up to {tables.limit}")
        bits = np.zeros(L, dtype=bool)
        for p in ps[:r].tolist():
            bits[p::p] = True
        label = f"prime_union({r})"
    else:  # omega_bounded
        om = tables.omega_array()[:L]
        bits = np.zeros(L, dtype=bool)
        bits[1 : min(3, L)] = True
        if L > 3:
            n = np.arange(3, L)
            bits[3:] = om[3:] <= omega_bound(n)
        label = "omega_bounded"
    return PrefixSet(bits, label)


def closed_form_density(kind: str, k: int | None = None, r: int | None = None):
    """Asymptotic density where a closed form exists; None otherwise.

    Exact Fractions where the value is rational, floats for zeta values.
    """
    name, k, r = _parse_kind(kind, k, r)
    zeta2_inv = 6 / math.pi**2
    if name == "squarefree":
        return zeta2_inv
    if name == "cubefree":
        return 1 / ZETA3
    if name in ("nonsquarefree", "nonsquarefree1"):
        return 1 - zeta2_inv
    if name == "coprime":
        return Fraction(euler_phi(k), k)
    if name == "multiples":
        return Fraction(1, k)
    if name == "prime_union":
        return beta_gamma_closed_form(r)[1]
    return None


def beta_gamma_closed_form(r: int) -> tuple[Fraction, Fraction]:
    """Densities of ``B_r^2`` and ``B_r`` where ``B_r`` = multiples of the first r primes.

    ``gamma_r = 1 - prod(1 - 1/p)``,
    ``beta_r = 1 - (1 + sum 1/p) prod(1 - 1/p)``.
    """
    ps = first_primes(r)
    prod = Fraction(1)
    recip = Fraction(0)
    for p in ps:
        prod *= Fraction(p - 1, p)
        recip += Fraction(1, p)
    return 1 - (1 + recip) * prod, 1 - prod


@dataclass(frozen=True)
class ProductAlphaChoice:
    """A set with density above alpha whose product set has density below it."""

    alpha: Fraction
    kind: str  # "multiples" or "prime_union"
    param: int
    density: Fraction
    square_density: Fraction
    canonical: bool

    @property
    def margin(self) -> Fraction:
        return min(self.density - self.alpha, self.alpha - self.square_density)

    @property
    def set_kind(self) -> str:
        return f"{self.kind}({self.param})"


def select_product_alpha(alpha, margin=0, max_param: int = 200) -> ProductAlphaChoice:
    """Pick kN (alpha < 1/2) or B_r (alpha >= 1/2) for the given alpha.

    The canonical pick is k with ``1/(k+1) <= alpha < 1/k``, respectively the
    least r with ``beta_r < alpha < gamma_r``. If its closed-form margin
    ``min(dA - alpha, alpha - dA^2)`` is below ``margin``, the admissible
    parameter of the same family with the largest margin is returned instead
    (``canonical=False``).
    """
    a = as_fraction(alpha)
    margin = as_fraction(margin)
    if not 0 < a < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if a < Fraction(1, 2):
        cands = [("multiples", k, Fraction(1, k), Fraction(1, k * k)) for k in range(2, max_param + 1)]
        kc = math.ceil(1 / a) - 1
        canon = ("multiples", kc, Fraction(1, kc), Fraction(1, kc * kc))
    else:
        cands = []
        canon = None
        for r in range(1, max_param + 1):
            b, g = beta_gamma_closed_form(r)
            cands.append(("prime_union", r, g, b))
            if canon is None and b < a < g:
                canon = cands[-1]
            if b >= a:
                break
    choice = ProductAlphaChoice(a, *canon, canonical=True)
    if choice.margin >= margin:
        return choice
    best = max((ProductAlphaChoice(a, *c, canonical=False) for c in cands if c[3] < a < c[2]),
               key=lambda ch: (ch.margin, -ch.param))
    return best


@dataclass(frozen=True)
class OmegaSplit:
    """``n = n1 * n2`` with n1 holding the u-1 smallest primes and P+(n)."""

    n: int
    n1: int
    n2: int
    t: int
    u: int
    omega1: int
    omega2: int

    def diagnostics(self) -> dict[str, bool]:
        """Which of the log-log inequalities hold for this split.

        ``member1``/``member2``: ``n_i`` belongs to the Omega-bounded set.
        ``bound1``: ``Omega(n1) <= 0.75 ln ln n1``.
        ``bound2``: ``Omega(n2) <= 0.75 ln ln n2 + 3 ln 2 / 4``.
        These only hold for large n; they are reported, never asserted.
        """
        def member(m, om):
            return m <= 2 or om <= omega_bound(m)

        lln1 = math.log(math.log(self.n1))
        lln2 = math.log(math.log(self.n2))
        return {
            "member1": bool(member(self.n1, self.omega1)),
            "member2": bool(member(self.n2, self.omega2)),
            "bound1": self.omega1 <= OMEGA_SLOPE * lln1,
            "bound2": self.omega2 <= OMEGA_SLOPE * lln2 + 3 * math.log(2) / 4,
        }


def split_by_omega(n: int, tables: ArithTables) -> OmegaSplit | None:
    """Split n as in the Omega-bounded product argument, or None if Omega(n) < 2.

    With ``n = p_1 ... p_{t-1} P+(n)`` (``p_1 <= ... <= p_{t-1}``) and
    ``u = floor((t-1)/2)``: ``n1 = p_1 ... p_{u-1} P+(n)``,
    ``n2 = p_u ... p_{t-1}``. For t = 2 (u = 0) this reads n1 = P+(n),
    n2 = p_1.
    """
    chain = tables.factor_chain(n)
    t = len(chain)
    if t < 2:
        return None
    u = (t - 1) // 2
    small, top = chain[:-1], chain[-1]
    cut = max(u, 1) - 1  # p_1..p_{u-1} are small[:u-1]
    n1 = math.prod(small[:cut]) * top
    n2 = math.prod(small[cut:])
    return OmegaSplit(int(n), n1, n2, t, u, cut + 1, t - cut - 1)


@dataclass(frozen=True)
class CoverResult:
    x: int
    cover_count: int
    ie_count: int
    predicted_uncovered: float

    @property
    def uncovered(self) -> int:
        return self.x - self.cover_count


def inclusion_exclusion_cover(A: PrefixSet, Aprime: Sequence[int], x: int) -> CoverResult:
    """Count ``n <= x`` of the form ``a * m`` with ``a in A'``, ``m in A``.

    ``cover_count`` is computed directly by marking ``a * A(x/a)``;
    ``ie_count`` sums ``(-1)^(|B|-1) |{n <= x : lcm(B) | n, n/b in A for b in B}|``
    over nonempty ``B ⊆ A'``. The two agree exactly. ``predicted_uncovered``
    is ``x * prod(1 - 1/a)``, the main term when A contains almost all of [1, x].
    """
    x = int(x)
    ap = [int(a) for a in Aprime]
    if x < 1 or x > A.limit:
        raise ValueError(f"x={x} outside [1, {A.limit}]")
    if len(set(ap)) != len(ap):
        raise ValueError("A' has repeated elements")
    for a in ap:
        if a <= 1:
            raise ValueError(f"A' elements must exceed 1, got {a}")
        if a > A.limit or not A.bits[a]:
            raise ValueError(f"{a} is not a member of A")
    for a, b in itertools.combinations(ap, 2):
        if math.gcd(a, b) != 1:
            raise ValueError(f"A' not pairwise coprime: gcd({a}, {b}) > 1")
    if len(ap) > 20:
        raise ValueError("inclusion-exclusion over more than 20 elements is not supported")
    bits = A.bits
    covered = np.zeros(x + 1, dtype=bool)
    for a in ap:
        m = A.elements(x // a)
        m = m[m >= 1]
        covered[a * m] = True
    cover = int(np.count_nonzero(covered[1:]))
    ie = 0
    for j in range(1, len(ap) + 1):
        for B in itertools.combinations(ap, j):
            L = math.prod(B)  # pairwise coprime, so lcm = product
            if L > x:
                continue
            m = np.arange(1, x // L + 1, dtype=np.int64)
            ok = np.ones(m.size, dtype=bool)
            for b in B:
                ok &= bits[(L // b) * m]
            ie += (-1) ** (j - 1) * int(np.count_nonzero(ok))
    pred = x * math.prod(1 - 1 / a for a in ap)
    return CoverResult(x, cover, ie, pred)
