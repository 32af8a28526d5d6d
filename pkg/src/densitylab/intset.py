"""Finite-prefix integer sets and the sumset / product-set / subset-sum engines.

A :class:`PrefixSet` records membership of every integer in ``[0, limit]``.
The additive engines work on Python integers used as bit vectors, which
gives word-parallel shift-OR in C without any hand-rolled loops; the product
engine works on numpy index arrays.
"""

from __future__ import annotations

import io
import math
import struct
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import CapacityError

__all__ = [
    "PrefixSet",
    "from_predicate",
    "from_mask",
    "from_elements",
    "sumset",
    "product_set",
    "subset_sums",
    "subset_sums_int",
    "count_prefix",
    "save_prefix_set",
    "load_prefix_set",
]

MAGIC = b"DLPS"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sHQI")  # magic, version, limit, label length

# Above this many bits a subset-sum bitmap is refused rather than built.
SUBSET_SUM_MAX_BITS = 4 * 10**9


class PrefixSet:
    """Membership of the integers ``0..limit`` in some set.

    Instances are immutable: ``bits`` is a read-only boolean array of length
    ``limit + 1``. Querying membership outside ``[0, limit]`` raises instead
    of answering False, because the set is unknown there.
    """

    __slots__ = ("_bits", "label", "_cum")

    def __init__(self, bits: np.ndarray, label: str = ""):
        arr = np.array(bits, dtype=bool, copy=True).ravel()
        if arr.size == 0:
            raise ValueError("a PrefixSet needs limit >= 0")
        arr.flags.writeable = False
        self._bits = arr
        self.label = label
        self._cum = None

    @property
    def limit(self) -> int:
        return self._bits.size - 1

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    def __len__(self) -> int:
        return int(np.count_nonzero(self._bits))

    @property
    def cardinality(self) -> int:
        return len(self)

    def __contains__(self, n) -> bool:
        n = int(n)
        if not 0 <= n <= self.limit:
            raise IndexError(f"{n} outside [0, {self.limit}]")
        return bool(self._bits[n])

    def __iter__(self):
        return iter(self.elements().tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, PrefixSet):
            return NotImplemented
        return self.limit == other.limit and np.array_equal(self._bits, other._bits)

    __hash__ = None

    def __repr__(self) -> str:
        lab = f" {self.label!r}" if self.label else ""
        return f"<PrefixSet{lab} limit={self.limit} size={len(self)}>"

    def elements(self, upto: int | None = None) -> np.ndarray:
        bits = self._bits if upto is None else self._bits[: max(int(upto), -1) + 1]
        return np.flatnonzero(bits)

    def cumulative_counts(self) -> np.ndarray:
        """``c[n] = |A ∩ [1, n]|``; 0 never counts."""
        if self._cum is None:
            c = np.cumsum(self._bits, dtype=np.int64)
            if self._bits[0]:
                c -= 1
            c.flags.writeable = False
            self._cum = c
        return self._cum

    def count_prefix(self, n: int) -> int:
        return count_prefix(self, n)

    def truncate(self, limit: int, label: str | None = None) -> "PrefixSet":
        limit = int(limit)
        if limit > self.limit:
            raise ValueError(f"cannot extend a prefix set from {self.limit} to {limit}")
        return PrefixSet(self._bits[: limit + 1], self.label if label is None else label)

    def with_label(self, label: str) -> "PrefixSet":
        out = PrefixSet.__new__(PrefixSet)
        out._bits, out.label, out._cum = self._bits, label, self._cum
        return out

    def issubset(self, other: "PrefixSet") -> bool:
        n = min(self.limit, other.limit)
        return not np.any(self._bits[: n + 1] & ~other._bits[: n + 1])

    def union(self, other: "PrefixSet") -> "PrefixSet":
        _same_limit(self, other)
        return PrefixSet(self._bits | other._bits)

    def intersection(self, other: "PrefixSet") -> "PrefixSet":
        _same_limit(self, other)
        return PrefixSet(self._bits & other._bits)

    def difference(self, other: "PrefixSet") -> "PrefixSet":
        _same_limit(self, other)
        return PrefixSet(self._bits & ~other._bits)

    __or__, __and__, __sub__ = union, intersection, difference

    def to_int(self) -> int:
        """Bit ``n`` of the returned integer is set iff ``n`` is a member."""
        return int.from_bytes(np.packbits(self._bits, bitorder="little").tobytes(), "little")

    @classmethod
    def from_int(cls, value: int, limit: int, label: str = "") -> "PrefixSet":
        nbits = limit + 1
        value &= (1 << nbits) - 1
        raw = np.frombuffer(value.to_bytes((nbits + 7) // 8, "little"), dtype=np.uint8)
        return cls(np.unpackbits(raw, bitorder="little")[:nbits].astype(bool), label)

    def save(self, path) -> None:
        save_prefix_set(self, path)

    @classmethod
    def load(cls, path) -> "PrefixSet":
        return load_prefix_set(path)


def _same_limit(a: PrefixSet, b: PrefixSet) -> None:
    if a.limit != b.limit:
        raise ValueError(f"limits differ: {a.limit} vs {b.limit}")


def from_predicate(limit: int, pred: Callable[[int], bool], label: str = "") -> PrefixSet:
    if limit < 0:
        raise ValueError("limit must be >= 0")
    return PrefixSet(np.fromiter((bool(pred(n)) for n in range(limit + 1)), dtype=bool, count=limit + 1), label)


def from_mask(mask: np.ndarray, label: str = "") -> PrefixSet:
    return PrefixSet(mask, label)


def from_elements(elements: Iterable[int], limit: int, label: str = "") -> PrefixSet:
    """Members above ``limit`` are dropped; negative members are an error."""
    bits = np.zeros(int(limit) + 1, dtype=bool)
    el = np.fromiter((int(e) for e in elements), dtype=np.int64)
    if el.size and el.min() < 0:
        raise ValueError("negative element")
    bits[el[el <= limit]] = True
    return PrefixSet(bits, label)


def count_prefix(A: PrefixSet, n: int) -> int:
    """``|{a in A : 1 <= a <= n}|``."""
    n = int(n)
    if n < 0 or n > A.limit:
        raise ValueError(f"n={n} outside [0, {A.limit}]")
    return int(A.cumulative_counts()[n])


# --- sumset ----------------------------------------------------------------

def _padded(bits: np.ndarray, limit: int) -> np.ndarray:
    """``bits`` cut or zero-extended to ``[0, limit]``; a set is finite beyond its own limit."""
    if bits.size >= limit + 1:
        return bits[: limit + 1]
    out = np.zeros(limit + 1, dtype=bool)
    out[: bits.size] = bits
    return out


def _fft_work(limit: int) -> float:
    size = 1 << (2 * limit + 1).bit_length()
    return size * math.log2(size)


def sumset(A: PrefixSet, B: PrefixSet, limit: int | None = None, method: str = "auto") -> PrefixSet:
    """``{a + b <= limit : a in A, b in B}``.

    ``method="shift"`` ORs shifted copies of the larger operand, one per
    element of the smaller one, and stops early once ``[0, limit]`` is full.
    ``method="fft"`` thresholds a floating-point convolution of the indicator
    vectors; the result is checked to be within 0.25 of an integer everywhere
    and the shift engine is used instead if it is not. ``"auto"`` picks
    whichever has the smaller cost estimate.
    """
    if limit is None:
        limit = min(A.limit, B.limit)
    limit = int(limit)
    if limit < 0:
        raise ValueError("limit must be >= 0")
    a = _padded(A.bits, limit)
    b = _padded(B.bits, limit)
    small, big = (a, b) if np.count_nonzero(a) <= np.count_nonzero(b) else (b, a)
    n_small = int(np.count_nonzero(small))
    if method == "auto":
        # calibrated so one shifted OR of a limit-bit word ~ limit/64 fft units
        shift_cost = n_small * (limit + 1) / 64
        method = "shift" if shift_cost <= _fft_work(limit) else "fft"
    if method == "fft":
        out = _sumset_fft(small, big, limit)
        if out is not None:
            return PrefixSet(out, "sumset")
        method = "shift"
    if method != "shift":
        raise ValueError(f"unknown sumset method {method!r}")
    return PrefixSet.from_int(_sumset_shift(small, big, limit), limit, "sumset")


def _sumset_shift(small: np.ndarray, big: np.ndarray, limit: int) -> int:
    full = (1 << (limit + 1)) - 1
    big_int = int.from_bytes(np.packbits(big, bitorder="little").tobytes(), "little")
    acc = 0
    for i, s in enumerate(np.flatnonzero(small).tolist()):
        acc |= big_int << s
        if i & 63 == 63 and acc & full == full:
            break
    return acc & full


def _sumset_fft(small: np.ndarray, big: np.ndarray, limit: int) -> np.ndarray | None:
    size = 1 << (2 * limit + 1).bit_length()
    fa = np.fft.rfft(small.astype(np.float64), size)
    fb = np.fft.rfft(big.astype(np.float64), size)
    conv = np.fft.irfft(fa * fb, size)[: limit + 1]
    if np.abs(conv - np.rint(conv)).max() >= 0.25:
        return None
    return conv > 0.5


# --- product set -----------------------------------------------------------

def product_set(A: PrefixSet, B: PrefixSet, limit: int | None = None) -> PrefixSet:
    """``{a * b <= limit : a in A, b in B}`` over the positive integers.

    Every pair with ``ab <= limit`` has ``min(a, b) <= isqrt(limit)``, so it
    suffices to run the outer loop over small elements of each side and mark
    ``a * B(limit / a)`` with one vectorized store. Total work is bounded by
    the sum over a in A of ``|B(limit / a)|``.
    """
    if limit is None:
        limit = min(A.limit, B.limit)
    limit = int(limit)
    if limit < 1:
        raise ValueError("limit must be >= 1")
    if A.bits[0] or B.bits[0]:
        raise ValueError("product_set operands must not contain 0")
    ea = A.elements(min(limit, A.limit)).astype(np.int64)
    eb = B.elements(min(limit, B.limit)).astype(np.int64)
    out = np.zeros(limit + 1, dtype=bool)
    root = math.isqrt(limit)
    for x, other in ((ea, eb), (eb, ea)):
        for s in x[: np.searchsorted(x, root, side="right")].tolist():
            k = np.searchsorted(other, limit // s, side="right")
            out[s * other[:k]] = True
    return PrefixSet(out, "product_set")


# --- subset sums -----------------------------------------------------------

def subset_sums_int(seq: Sequence[int], limit: int) -> int:
    """Subset sums of ``seq`` up to ``limit`` as a bit-vector integer (bit 0 set)."""
    limit = int(limit)
    if limit < 0:
        raise ValueError("limit must be >= 0")
    if limit + 1 > SUBSET_SUM_MAX_BITS:
        raise CapacityError(f"subset-sum bitmap of {limit + 1} bits exceeds capacity",
                            estimate=limit + 1, budget=SUBSET_SUM_MAX_BITS)
    full = (1 << (limit + 1)) - 1
    acc = 1
    for a in seq:
        a = int(a)
        if a <= 0:
            raise ValueError(f"subset_sums needs positive integers, got {a}")
        if a <= limit:
            acc = (acc | (acc << a)) & full
    return acc


def subset_sums(seq: Sequence[int], limit: int) -> PrefixSet:
    """All sums of sub-multisets of ``seq`` that are ``<= limit``, including 0."""
    return PrefixSet.from_int(subset_sums_int(seq, limit), int(limit), "subset_sums")


# --- serialization ---------------------------------------------------------

def save_prefix_set(A: PrefixSet, path) -> None:
    """Raw-bitmap format: little-endian header (magic, version, limit,
    label length), UTF-8 label, then the packed membership bits."""
    label = A.label.encode("utf-8")
    buf = io.BytesIO()
    buf.write(_HEADER.pack(MAGIC, FORMAT_VERSION, A.limit, len(label)))
    buf.write(label)
    buf.write(np.packbits(A.bits, bitorder="little").tobytes())
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(buf.getvalue())
    tmp.replace(path)


def load_prefix_set(path) -> PrefixSet:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise ValueError(f"{path}: truncated header")
    magic, version, limit, nlabel = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported version {version}")
    off = _HEADER.size
    label = data[off : off + nlabel].decode("utf-8")
    off += nlabel
    nbytes = (limit + 1 + 7) // 8
    if len(data) - off != nbytes:
        raise ValueError(f"{path}: expected {nbytes} payload bytes, got {len(data) - off}")
    raw = np.frombuffer(data, dtype=np.uint8, offset=off)
    return PrefixSet(np.unpackbits(raw, bitorder="little")[: limit + 1].astype(bool), label)
