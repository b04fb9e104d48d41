"""Rational angles: elements of Q/Z standing in for roots of unity.

A character value exp(2*pi*i * k/d) is stored as the reduced fraction
k/d with 0 <= k < d.  No floating point and no fixed cyclotomic embedding
appear anywhere; signs are read off as angle 0 (for +1) or 1/2 (for -1).

In residual characteristic ell the same objects encode roots of unity of
order prime to ell, via a fixed identification of the prime-to-ell roots
of unity with the prime-to-ell part of Q/Z.  Reducing a characteristic-0
value modulo ell strips the ell-part of its order; see ``reduce_mod``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import InputFormatError, InvariantViolation
from .arith import split_prime_part


@dataclass(frozen=True, order=True)
class RationalAngle:
    numerator: int
    denominator: int

    def __post_init__(self) -> None:
        if self.denominator < 1:
            raise InvariantViolation("angle denominator must be positive")
        if not 0 <= self.numerator < self.denominator:
            raise InvariantViolation(
                f"angle {self.numerator}/{self.denominator} is not normalized"
            )
        if gcd(self.numerator, self.denominator) != 1:
            raise InvariantViolation(
                f"angle {self.numerator}/{self.denominator} is not reduced"
            )

    @classmethod
    def of(cls, numerator: int, denominator: int = 1) -> "RationalAngle":
        if denominator == 0:
            raise InvariantViolation("angle denominator must be nonzero")
        f = Fraction(numerator, denominator)
        f -= f.__floor__()
        return cls(f.numerator, f.denominator)

    @classmethod
    def from_sign(cls, sign: int) -> "RationalAngle":
        if sign == 1:
            return cls(0, 1)
        if sign == -1:
            return cls(1, 2)
        raise InvariantViolation(f"not a sign: {sign}")

    @classmethod
    def parse(cls, text: str) -> "RationalAngle":
        try:
            if "/" in text:
                num, den = text.split("/")
                return cls.of(int(num), int(den))
            return cls.of(int(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputFormatError(f"cannot parse angle {text!r}") from exc

    def __add__(self, other: "RationalAngle") -> "RationalAngle":
        return RationalAngle.of(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    def __neg__(self) -> "RationalAngle":
        return RationalAngle.of(-self.numerator, self.denominator)

    def __sub__(self, other: "RationalAngle") -> "RationalAngle":
        return self + (-other)

    def times(self, k: int) -> "RationalAngle":
        """The angle of the k-th power of the underlying root of unity."""
        return RationalAngle.of(self.numerator * k, self.denominator)

    @property
    def is_zero(self) -> bool:
        return self.numerator == 0

    @property
    def order(self) -> int:
        """Multiplicative order of the root of unity this angle encodes."""
        return self.denominator

    def as_sign(self) -> int:
        if self == RationalAngle(0, 1):
            return 1
        if self == RationalAngle(1, 2):
            return -1
        raise InvariantViolation(f"angle {self} is not a sign")

    def reduce_mod(self, ell: int) -> "RationalAngle":
        """Image of the value in residual characteristic ell.

        Roots of unity of ell-power order reduce to 1, so the reduced value
        is the prime-to-ell component: for k/d with d = ell**a * d' the
        result is k * (ell**a)^{-1} mod d', over d'.
        """
        a, dprime = split_prime_part(self.denominator, ell)
        if a == 0:
            return self
        inv = pow(ell**a, -1, dprime)
        return RationalAngle.of(self.numerator * inv, dprime)

    def coprime_to(self, ell: int) -> bool:
        return self.denominator % ell != 0

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


ZERO_ANGLE = RationalAngle(0, 1)
HALF_ANGLE = RationalAngle(1, 2)
