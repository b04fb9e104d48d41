"""Exact modular arithmetic primitives.

Everything downstream (character orbits, distinction criteria, the
finite-group oracle) reduces to integer arithmetic in cyclic groups of
order q^n - 1.  These moduli are bounded by a configurable width limit;
operations reject larger inputs instead of ever falling back to floating
point.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import sympy

from .errors import InvariantViolation, WidthLimitExceeded

# Default bound on any modulus handled exactly.  Desk-scale grids
# (q <= 16, n <= 12) stay far below it.
WIDTH_LIMIT = 2**127 - 1


def check_width(value: int, limit: int = WIDTH_LIMIT) -> int:
    if abs(value) > limit:
        raise WidthLimitExceeded(
            f"integer {value} exceeds the configured width limit {limit}"
        )
    return value


@lru_cache(maxsize=None)
def mult_order(b: int, modulus: int) -> int:
    """Least d >= 1 with b**d == 1 (mod modulus).

    Requires gcd(b, modulus) == 1; the non-coprime case is rejected with a
    diagnostic rather than looping forever.
    """
    if modulus < 2:
        raise InvariantViolation(f"modulus must be >= 2, got {modulus}")
    check_width(modulus)
    b %= modulus
    if sympy.gcd(b, modulus) != 1:
        raise InvariantViolation(
            f"mult_order requires coprime inputs: gcd({b}, {modulus}) != 1"
        )
    return int(sympy.n_order(b, modulus))


def split_prime_part(n: int, ell: int) -> tuple[int, int]:
    """Write n = ell**a * n' with n' coprime to ell; return (a, n')."""
    if n < 1:
        raise InvariantViolation(f"expected a positive integer, got {n}")
    if not sympy.isprime(ell):
        raise InvariantViolation(f"{ell} is not prime")
    a = 0
    while n % ell == 0:
        n //= ell
        a += 1
    return a, n


def prime_free_part(n: int, ell: int | None) -> int:
    """The largest divisor of n coprime to ell (n itself when ell is None)."""
    if ell is None:
        return n
    return split_prime_part(n, ell)[1]


@lru_cache(maxsize=None)
def regular_orbit_count(q: int, n: int) -> int:
    """Number of full-size Galois orbits of characters of a cyclic group
    of order q^n - 1 under multiplication by q.

    Equals (1/n) * sum over d | n of mu(d) * (q^(n/d) - 1), which counts
    the cuspidal representations of rank n over a field with q elements in
    characteristic zero.  Cross-checked elsewhere against exhaustive orbit
    enumeration.
    """
    p, _ = prime_power_parts(q)
    if p == 2:
        raise InvariantViolation(f"q = {q} must be odd")
    if n < 1:
        raise InvariantViolation(f"degree must be positive, got {n}")
    check_width(q**n - 1)
    total = 0
    for d in sympy.divisors(n):
        total += int(sympy.mobius(d)) * (q ** (n // d) - 1)
    assert total % n == 0
    return total // n


@lru_cache(maxsize=None)
def prime_power_parts(q: int) -> tuple[int, int]:
    """Return (p, k) with q = p**k, p prime; reject everything else."""
    if q < 2:
        raise InvariantViolation(f"{q} is not a prime power")
    factorization = sympy.factorint(q)
    if len(factorization) != 1:
        raise InvariantViolation(f"{q} is not a prime power")
    ((p, k),) = factorization.items()
    return int(p), int(k)


@dataclass(frozen=True)
class PrimePower:
    """An odd prime power q = p**k; carries residue-field cardinalities."""

    p: int
    k: int

    def __post_init__(self) -> None:
        if not sympy.isprime(self.p) or self.p < 3:
            raise InvariantViolation(f"p must be an odd prime, got {self.p}")
        if self.k < 1:
            raise InvariantViolation(f"exponent must be positive, got {self.k}")
        check_width(self.value)

    @classmethod
    def of(cls, q: int) -> "PrimePower":
        p, k = prime_power_parts(q)
        return cls(p, k)

    @property
    def value(self) -> int:
        return self.p**self.k


@dataclass(frozen=True)
class QuadExtension:
    """Residue data of a quadratic extension of local fields.

    q0 is the residue cardinality of the base field; the top field has
    residue cardinality q0 when the extension is ramified and q0**2 when
    unramified.  Residual characteristic 2 is excluded throughout.
    """

    q0: int
    ramified: bool

    def __post_init__(self) -> None:
        PrimePower.of(self.q0)  # validates oddness and width

    @property
    def q(self) -> int:
        return self.q0 if self.ramified else self.q0**2

    @property
    def p(self) -> int:
        return prime_power_parts(self.q0)[0]

    def to_json(self) -> dict:
        return {"q0": self.q0, "ramified": self.ramified}

    @classmethod
    def from_json(cls, doc: dict) -> "QuadExtension":
        return cls(q0=int(doc["q0"]), ramified=bool(doc["ramified"]))
