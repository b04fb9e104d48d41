"""Cuspidal representations of finite general linear groups, at parameter level.

A cuspidal representation of rank n over the field with q elements is
encoded by the Frobenius orbit of a character of the degree-n extension
(its parameter): in characteristic 0 the parameter must be regular, in
characteristic ell it must admit a regular characteristic-0 lift.

Everything here is decided by exact exponent arithmetic, and the decision
procedures that rest on one-directional statements are paired with a
brute-force counterpart (``enumerate_distinguished_lifts``) so the two can
be cross-validated on full grids.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import sympy

from .angles import HALF_ANGLE, ZERO_ANGLE, RationalAngle
from .arith import QuadExtension, mult_order, prime_power_parts, split_prime_part
from .characters import (
    CyclicCharacter,
    canonical_orbit_exponent,
    character_modulus,
    factor_through_norm,
    frobenius_orbit,
    inflate_along_norm,
    is_regular,
    is_trivial_on_subfield,
    lifts,
    reduce_mod,
    sigma_dual,
)
from .errors import InvariantViolation
from .verdicts import Verdict, no, unknown, yes


@lru_cache(maxsize=None)
def has_regular_lift(chibar: CyclicCharacter) -> bool:
    return any(is_regular(lift) for lift in lifts(chibar))


@dataclass(frozen=True)
class CuspidalRep:
    """A cuspidal representation, stored by its canonical parameter.

    The canonical representative of the parameter orbit is its least
    exponent; equality of representations is equality of these.
    """

    parameter: CyclicCharacter

    def __post_init__(self) -> None:
        chi = self.parameter
        if chi.exponent != canonical_orbit_exponent(chi):
            raise InvariantViolation(
                f"parameter exponent {chi.exponent} is not the canonical orbit "
                f"representative {canonical_orbit_exponent(chi)}"
            )
        if chi.ell is None:
            if not is_regular(chi):
                raise InvariantViolation(
                    "a characteristic-0 cuspidal parameter must be regular"
                )
        elif not has_regular_lift(chi):
            raise InvariantViolation(
                "a modular cuspidal parameter must admit a regular lift"
            )

    @classmethod
    def from_parameter(cls, chi: CyclicCharacter) -> "CuspidalRep":
        return cls(chi.with_exponent(canonical_orbit_exponent(chi)))

    @property
    def q(self) -> int:
        return self.parameter.q

    @property
    def n(self) -> int:
        return self.parameter.n

    @property
    def ell(self) -> int | None:
        return self.parameter.ell

    @property
    def is_supercuspidal(self) -> bool:
        return support_multiplicity(self) == 1

    def central_character(self) -> CyclicCharacter:
        """Restriction of the parameter to the base field's units."""
        from .characters import restrict_to_subfield

        return restrict_to_subfield(self.parameter, 1)

    def to_json(self) -> dict:
        return self.parameter.to_json()

    @classmethod
    def from_json(cls, doc: dict) -> "CuspidalRep":
        return cls.from_parameter(CyclicCharacter.from_json(doc))


@dataclass(frozen=True)
class SupercuspidalSupport:
    """Multiplicity u and supercuspidal factor of a cuspidal representation."""

    u: int
    f: int
    scusp: CuspidalRep

    def __post_init__(self) -> None:
        if self.scusp.n != self.f:
            raise InvariantViolation("support rank does not match f")


@lru_cache(maxsize=None)
def support_multiplicity(rep: CuspidalRep) -> int:
    """The number u of supercuspidal factors: 1 in characteristic 0, and
    the greatest divisor u of n whose norm the parameter factors through
    in characteristic ell."""
    if rep.ell is None:
        return 1
    n = rep.n
    for r in sorted((int(d) for d in sympy.divisors(n)), reverse=True):
        if factor_through_norm(rep.parameter, n // r) is not None:
            return r
    raise AssertionError("r = 1 always factors")  # pragma: no cover


@lru_cache(maxsize=None)
def supercuspidal_support(rep: CuspidalRep) -> SupercuspidalSupport:
    u = support_multiplicity(rep)
    f = rep.n // u
    theta = factor_through_norm(rep.parameter, f)
    if theta is None:  # pragma: no cover
        raise InvariantViolation("support factorization unexpectedly missing")
    scusp = CuspidalRep.from_parameter(theta)
    if support_multiplicity(scusp) != 1:  # pragma: no cover
        raise InvariantViolation("supercuspidal support is not supercuspidal")
    return SupercuspidalSupport(u=u, f=f, scusp=scusp)


def steinberg_is_cuspidal(scusp: CuspidalRep, u: int, ell: int) -> bool:
    """Whether the generalized Steinberg built from u copies of a
    supercuspidal of rank f stays cuspidal in characteristic ell: true
    exactly for u = 1 and u = e * ell^v, e the order of q^f mod ell."""
    p, _ = prime_power_parts(scusp.q)
    if ell == p:
        raise InvariantViolation("coefficient characteristic equals p")
    if support_multiplicity(scusp) != 1:
        raise InvariantViolation("expected a supercuspidal representation")
    if u == 1:
        return True
    e = mult_order(scusp.q**scusp.n, ell)
    while u % ell == 0:
        u //= ell
    return u == e


def st_cuspidal(scusp: CuspidalRep, u: int) -> CuspidalRep:
    """The cuspidal generalized Steinberg with support u copies of scusp."""
    if u == 1:
        return scusp
    if scusp.ell is None:
        raise InvariantViolation(
            "non-trivial Steinberg cuspidals exist only in positive characteristic"
        )
    if not steinberg_is_cuspidal(scusp, u, scusp.ell):
        raise InvariantViolation(
            f"multiplicity {u} does not give a cuspidal representation"
        )
    return CuspidalRep.from_parameter(
        inflate_along_norm(scusp.parameter, u * scusp.n)
    )


@lru_cache(maxsize=None)
def is_sigma_selfdual(rep: CuspidalRep, ext: QuadExtension) -> bool:
    """Whether the conjugate-dual parameter lies in the parameter orbit."""
    if ext.q != rep.q:
        raise InvariantViolation(
            f"extension residue cardinality {ext.q} does not match q={rep.q}"
        )
    dual = sigma_dual(rep.parameter, ext.ramified, ext.q0)
    return dual.exponent in frobenius_orbit(rep.parameter)


def char0_distinction_criterion(chi: CyclicCharacter, ext: QuadExtension) -> bool:
    """Distinction of the characteristic-0 cuspidal with parameter chi.

    Unramified: distinction is equivalent to sigma-selfduality.  Ramified:
    the rank must be even and the parameter trivial on the half-degree
    subextension (rank 1 degenerates to the character case).
    """
    if chi.ell is not None:
        raise InvariantViolation("criterion applies to characteristic-0 parameters")
    if not ext.ramified:
        return sigma_dual(chi, False, ext.q0).exponent in frobenius_orbit(chi)
    if chi.n == 1:
        return chi.is_trivial
    if chi.n % 2 != 0:
        return False
    return is_trivial_on_subfield(chi, chi.n // 2)


@lru_cache(maxsize=None)
def is_distinguished(rep: CuspidalRep, ext: QuadExtension) -> Verdict:
    """Distinction of a finite cuspidal by the relevant fixed-point group.

    Unramified means distinction by the rational form over the subfield of
    index 2; ramified means distinction by the half-by-half Levi subgroup.
    Positive-characteristic cases that no exact criterion settles return
    ``unknown`` with the attempted rules in the certificate.
    """
    if ext.q != rep.q:
        raise InvariantViolation(
            f"extension residue cardinality {ext.q} does not match q={rep.q}"
        )
    chi = rep.parameter
    if not ext.ramified:
        selfdual = is_sigma_selfdual(rep, ext)
        if rep.ell is None:
            if selfdual:
                return yes("char0-unramified-selfdual-iff-distinguished")
            return no("char0-unramified-selfdual-iff-distinguished")
        if not selfdual:
            return no("distinction-implies-sigma-selfdual")
        if rep.is_supercuspidal:
            return yes("modular-selfdual-supercuspidal-distinguished")
        if enumerate_distinguished_lifts(rep, ext):
            return yes("modular-unramified-transfer-from-distinguished-lift")
        return unknown("modular-unramified-no-deciding-rule")

    # ramified
    if rep.n == 1:
        if chi.is_trivial:
            return yes("rank-one-character-case")
        return no("rank-one-character-case")
    if rep.n % 2 != 0:
        return no("ramified-rank-must-be-even")
    u = rep.n // 2
    if rep.ell is None:
        if is_trivial_on_subfield(chi, u):
            return yes("char0-ramified-trivial-on-half-subfield")
        return no("char0-ramified-trivial-on-half-subfield")
    dual = sigma_dual(chi, True, ext.q0)
    if dual.exponent not in frobenius_orbit(chi):
        return no("distinction-implies-selfdual")
    if not is_trivial_on_subfield(chi, u):
        return no("modular-ramified-nontrivial-on-half-subfield")
    if enumerate_distinguished_lifts(rep, ext):
        return yes("modular-ramified-transfer-from-distinguished-lift")
    return unknown("modular-ramified-no-deciding-rule")


@lru_cache(maxsize=None)
def block_swap_sign(rep: CuspidalRep, ext: QuadExtension) -> RationalAngle:
    """Sign by which the block-swap involution acts on the line of
    Levi-invariant forms of a distinguished cuspidal (ramified case).

    For a characteristic-0 parameter trivial on the half-degree
    subextension, write e = e' * (q^u - 1); the sign is -(-1)^e'.  In
    characteristic ell the sign is the image of the sign of a distinguished
    lift (the unit when ell = 2).
    """
    if not ext.ramified:
        raise InvariantViolation("the swap sign lives in the ramified case")
    if rep.n % 2 != 0:
        raise InvariantViolation("the swap sign needs even rank")
    u = rep.n // 2
    if rep.ell is None:
        if not is_trivial_on_subfield(rep.parameter, u):
            raise InvariantViolation("parameter is not trivial on the half subfield")
        eprime = rep.parameter.exponent // (rep.q**u - 1)
        return ZERO_ANGLE if eprime % 2 == 1 else HALF_ANGLE
    if rep.ell == 2:
        return ZERO_ANGLE  # the only sign in characteristic 2
    signs = {
        block_swap_sign(lift, ext)
        for lift in enumerate_distinguished_lifts(rep, ext)
    }
    if not signs:
        raise InvariantViolation(
            "no distinguished lift certifies the modular swap sign"
        )
    if len(signs) != 1:  # pragma: no cover
        raise InvariantViolation("distinguished lifts disagree on the swap sign")
    return signs.pop()


def quadratic_steinberg_swap_sign(
    rep: CuspidalRep, ext: QuadExtension
) -> RationalAngle:
    """Swap sign of a full-multiplicity Steinberg cuspidal over a quadratic
    character: -1 for the trivial character, (-1)^(u(q-1)/2) for the
    Legendre character (rank n = 2u); the unit in characteristic 2."""
    if not ext.ramified:
        raise InvariantViolation("applies to the ramified case")
    if rep.ell is None:
        raise InvariantViolation("applies to positive characteristic")
    if rep.n % 2 != 0:
        raise InvariantViolation("rank must be even")
    support = supercuspidal_support(rep)
    if support.f != 1:
        raise InvariantViolation("support must be a character (f = 1)")
    varrho = support.scusp.parameter
    if varrho.mul(varrho).exponent != 0:
        raise InvariantViolation("support character must be quadratic")
    if rep.ell == 2:
        return ZERO_ANGLE
    if varrho.is_trivial:
        return HALF_ANGLE
    u = rep.n // 2
    exponent = u * (rep.q - 1) // 2
    return ZERO_ANGLE if exponent % 2 == 0 else HALF_ANGLE


def lift_decision_unramified(rep: CuspidalRep, ext: QuadExtension) -> bool:
    """Existence of a distinguished characteristic-0 lift, unramified case:
    the rank must be odd, the representation sigma-selfdual, and either
    supercuspidal or with the order of q0 mod ell even."""
    if ext.ramified or ext.q != rep.q:
        raise InvariantViolation("expected the unramified extension of matching q")
    if rep.ell is None:
        raise InvariantViolation("lift decisions apply to modular representations")
    if rep.n % 2 == 0:
        return False
    if not is_sigma_selfdual(rep, ext):
        return False
    if rep.is_supercuspidal:
        return True
    return mult_order(ext.q0, rep.ell) % 2 == 0


def lift_decision_ramified(rep: CuspidalRep, ext: QuadExtension) -> bool:
    """Existence of a lift distinguished by the half-by-half Levi, ramified
    case, for a selfdual cuspidal st_r(varrho): true for supercuspidals,
    and otherwise exactly when n is even and either (ell odd, r odd, n/e
    odd), or (ell odd, r = n), or (ell = 2, n = r = 2, q = -1 mod 4,
    varrho trivial)."""
    if not ext.ramified or ext.q != rep.q:
        raise InvariantViolation("expected the ramified extension of matching q")
    if rep.ell is None:
        raise InvariantViolation("lift decisions apply to modular representations")
    dual = sigma_dual(rep.parameter, True, ext.q0)
    if dual.exponent not in frobenius_orbit(rep.parameter):
        raise InvariantViolation("the ramified lift criterion expects selfdual input")
    if rep.n == 1:
        # the half-by-half subgroup degenerates to the full group, so a
        # rank-1 lift is distinguished exactly when it is trivial
        return rep.parameter.is_trivial
    if rep.is_supercuspidal:
        return True
    if rep.n % 2 != 0:
        return False
    r = support_multiplicity(rep)
    ell = rep.ell
    if ell != 2:
        e = mult_order(rep.q, ell)
        if rep.n % e != 0:  # pragma: no cover
            raise InvariantViolation("e divides n for cuspidal non-supercuspidals")
        if r % 2 == 1 and (rep.n // e) % 2 == 1:
            return True
        return r == rep.n
    support = supercuspidal_support(rep)
    return (
        rep.n == 2
        and r == 2
        and rep.q % 4 == 3
        and support.scusp.parameter.is_trivial
    )


def lift_decision(rep: CuspidalRep, ext: QuadExtension) -> bool:
    if ext.ramified:
        return lift_decision_ramified(rep, ext)
    return lift_decision_unramified(rep, ext)


@lru_cache(maxsize=None)
def enumerate_distinguished_lifts(
    rep: CuspidalRep, ext: QuadExtension
) -> tuple[CuspidalRep, ...]:
    """Brute-force oracle: all characteristic-0 cuspidal orbits lifting the
    modular parameter and satisfying the characteristic-0 distinction
    criterion for ext.  Exhaustive over every lift of every orbit member;
    results are sorted by canonical exponent."""
    if rep.ell is None:
        raise InvariantViolation("expected a modular cuspidal")
    if ext.q != rep.q:
        raise InvariantViolation("extension does not match the representation")
    found: dict[int, CuspidalRep] = {}
    for exponent in frobenius_orbit(rep.parameter):
        member = rep.parameter.with_exponent(exponent)
        for lift in lifts(member):
            if not is_regular(lift):
                continue
            if not char0_distinction_criterion(lift, ext):
                continue
            canon = canonical_orbit_exponent(lift)
            if canon not in found:
                found[canon] = CuspidalRep.from_parameter(lift)
    return tuple(found[k] for k in sorted(found))
