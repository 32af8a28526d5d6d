from fractions import Fraction
from numbers import Rational


def as_fraction(x) -> Fraction:
    """Exact rational for a user-facing ratio.

    Floats go through their shortest repr, so ``0.1`` becomes ``1/10``
    rather than the binary value nearest to it.
    """
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(str(x))
