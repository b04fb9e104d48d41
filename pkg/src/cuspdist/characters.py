"""Characters of the multiplicative groups of finite extensions, as exponents.

Conventions (used consistently across the package):

* For each pair (q, n), write M = q^n - 1 and fix an abstract generator
  z of the cyclic group of order M (the multiplicative group of the
  degree-n extension of the field with q elements).  A characteristic-0
  character with exponent e sends z**t to the angle e*t/M in Q/Z.

* Subfields sit compatibly in this coordinate system: the degree-d
  subextension (d | n) has multiplicative group generated by
  z**((q^n-1)/(q^d-1)), and that power is also the image of z under the
  norm map down to degree d.  Norm inflation and subfield restriction are
  therefore both pure exponent arithmetic.

* A character with values in residual characteristic ell has order prime
  to ell, hence is determined by its value at z, an N'-th root of unity
  where N' is the ell-free part of M.  We index it by the exponent of that
  value: reducing a characteristic-0 character with exponent e modulo ell
  yields the exponent e * (ell**a)^{-1} mod N', with a the ell-valuation
  of M.  This makes reduction canonical and equality decidable by integer
  comparison; value-angle tests below pin the convention down.

* Galois (Frobenius) conjugation multiplies exponents by q; the canonical
  representative of an orbit is its least member.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .angles import RationalAngle
from .arith import (
    check_width,
    prime_free_part,
    prime_power_parts,
    split_prime_part,
)
from .errors import InvariantViolation


@lru_cache(maxsize=None)
def character_modulus(q: int, n: int, ell: int | None) -> int:
    """q^n - 1 in characteristic zero, its ell-free part otherwise."""
    check_width(q**n - 1)
    return prime_free_part(q**n - 1, ell)


@dataclass(frozen=True)
class CyclicCharacter:
    """A character of the degree-n extension's multiplicative group.

    ``ell`` is None for characteristic-0 coefficients, or an odd-or-2 prime
    different from the residual characteristic for modular coefficients.
    """

    q: int
    n: int
    exponent: int
    ell: int | None = None

    def __post_init__(self) -> None:
        p, _ = prime_power_parts(self.q)
        if p == 2:
            raise InvariantViolation(f"q = {self.q} must be odd")
        if self.n < 1:
            raise InvariantViolation(f"degree must be >= 1, got {self.n}")
        if self.ell is not None:
            if self.ell == p:
                raise InvariantViolation(
                    f"coefficient characteristic {self.ell} equals the residual "
                    f"characteristic"
                )
            if prime_power_parts(self.ell) != (self.ell, 1):
                raise InvariantViolation(f"{self.ell} is not prime")
        m = self.modulus
        if not 0 <= self.exponent < m:
            raise InvariantViolation(
                f"exponent {self.exponent} out of range for modulus {m}"
            )

    @property
    def modulus(self) -> int:
        return character_modulus(self.q, self.n, self.ell)

    @property
    def is_trivial(self) -> bool:
        return self.exponent == 0

    @property
    def order(self) -> int:
        m = self.modulus
        return m // gcd(m, self.exponent)

    def angle_at(self, t: int) -> RationalAngle:
        """Value-angle at the t-th power of the fixed generator."""
        return RationalAngle.of(self.exponent * t, self.modulus)

    def angle_at_minus_one(self) -> RationalAngle:
        """Value at the order-2 element (trivial when the modulus is odd)."""
        m = self.modulus
        if m % 2 == 1:
            return RationalAngle.of(0)
        return self.angle_at(m // 2)

    def with_exponent(self, e: int) -> "CyclicCharacter":
        return CyclicCharacter(self.q, self.n, e % self.modulus, self.ell)

    def mul(self, other: "CyclicCharacter") -> "CyclicCharacter":
        if (self.q, self.n, self.ell) != (other.q, other.n, other.ell):
            raise InvariantViolation("cannot multiply characters of different groups")
        return self.with_exponent(self.exponent + other.exponent)

    def inverse(self) -> "CyclicCharacter":
        return self.with_exponent(-self.exponent)

    def to_json(self) -> dict:
        coeff = "zero" if self.ell is None else {"l": self.ell}
        return {"q": self.q, "n": self.n, "coeff": coeff, "exponent": self.exponent}

    @classmethod
    def from_json(cls, doc: dict) -> "CyclicCharacter":
        coeff = doc["coeff"]
        ell = None if coeff == "zero" else int(coeff["l"])
        return cls(q=int(doc["q"]), n=int(doc["n"]), exponent=int(doc["exponent"]), ell=ell)


def frobenius_orbit(chi: CyclicCharacter) -> tuple[int, ...]:
    """Exponents {e * q^j mod modulus}, duplicates removed, sorted ascending."""
    m = chi.modulus
    orbit = set()
    e = chi.exponent
    for _ in range(chi.n):
        orbit.add(e)
        e = e * chi.q % m
    return tuple(sorted(orbit))


def orbit_size(chi: CyclicCharacter) -> int:
    return len(frobenius_orbit(chi))


def canonical_orbit_exponent(chi: CyclicCharacter) -> int:
    return frobenius_orbit(chi)[0]


def is_regular(chi: CyclicCharacter) -> bool:
    """True when the Frobenius orbit has full size n."""
    return orbit_size(chi) == chi.n


def reduce_mod(chi: CyclicCharacter, ell: int) -> CyclicCharacter:
    """Restriction of a characteristic-0 character to the ell-regular part.

    Two characteristic-0 characters reduce to the same modular character
    exactly when they agree on all elements of order prime to ell.
    """
    if chi.ell is not None:
        raise InvariantViolation("reduce_mod expects a characteristic-0 character")
    p, _ = prime_power_parts(chi.q)
    if ell == p:
        raise InvariantViolation("cannot reduce modulo the residual characteristic")
    a, nprime = split_prime_part(chi.modulus, ell)
    if nprime == 1:
        return CyclicCharacter(chi.q, chi.n, 0, ell)
    inv = pow(ell**a, -1, nprime)
    return CyclicCharacter(chi.q, chi.n, chi.exponent * inv % nprime, ell)


def lifts(chibar: CyclicCharacter) -> list[CyclicCharacter]:
    """All characteristic-0 characters reducing to ``chibar``.

    There are exactly ell**a of them, a = ell-valuation of q^n - 1.
    """
    if chibar.ell is None:
        raise InvariantViolation("lifts expects a modular character")
    ell = chibar.ell
    m = chibar.q**chibar.n - 1
    a, nprime = split_prime_part(m, ell)
    base = chibar.exponent * ell**a % nprime
    return [
        CyclicCharacter(chibar.q, chibar.n, base + t * nprime)
        for t in range(ell**a)
    ]


def _subfield_modulus(chi: CyclicCharacter, d: int) -> int:
    if chi.n % d != 0:
        raise InvariantViolation(f"{d} does not divide the degree {chi.n}")
    return character_modulus(chi.q, d, chi.ell)


def restrict_to_subfield(chi: CyclicCharacter, d: int) -> CyclicCharacter:
    """Restriction to the degree-d subextension (d | n)."""
    md = _subfield_modulus(chi, d)
    if chi.ell is None:
        e = chi.exponent % md
    else:
        a_n = split_prime_part(chi.q**chi.n - 1, chi.ell)[0]
        a_d = split_prime_part(chi.q**d - 1, chi.ell)[0]
        e = chi.exponent * chi.ell ** (a_n - a_d) % md
    return CyclicCharacter(chi.q, d, e, chi.ell)


def is_trivial_on_subfield(chi: CyclicCharacter, d: int) -> bool:
    return restrict_to_subfield(chi, d).is_trivial


def factor_through_norm(chi: CyclicCharacter, d: int) -> CyclicCharacter | None:
    """Write chi as (character of the degree-d subextension) composed with
    the norm, if possible.

    Succeeds exactly when the order of chi divides q^d - 1; the round trip
    through ``inflate_along_norm`` is the identity.
    """
    md = _subfield_modulus(chi, d)
    ratio = chi.modulus // md
    if chi.exponent % ratio != 0:
        return None
    return CyclicCharacter(chi.q, d, chi.exponent // ratio, chi.ell)


def inflate_along_norm(theta: CyclicCharacter, n: int) -> CyclicCharacter:
    """Pull a character of the degree-d subextension back along the norm."""
    if n % theta.n != 0:
        raise InvariantViolation(f"{theta.n} does not divide {n}")
    mn = character_modulus(theta.q, n, theta.ell)
    ratio = mn // theta.modulus
    return CyclicCharacter(theta.q, n, theta.exponent * ratio % mn, theta.ell)


def sigma_dual(chi: CyclicCharacter, ramified: bool, q0: int) -> CyclicCharacter:
    """Parameter of the conjugate-dual character.

    In the unramified case sigma acts on residue fields as the q0-power
    Frobenius (requires q = q0**2), so the dual-conjugate has exponent
    -q0 * e; in the ramified case sigma is trivial on residue fields and
    the exponent is -e.
    """
    if ramified:
        if chi.q != q0:
            raise InvariantViolation(
                f"ramified case requires q = q0, got q={chi.q}, q0={q0}"
            )
        return chi.with_exponent(-chi.exponent)
    if chi.q != q0 * q0:
        raise InvariantViolation(
            f"unramified case requires q = q0^2, got q={chi.q}, q0={q0}"
        )
    return chi.with_exponent(-q0 * chi.exponent)
