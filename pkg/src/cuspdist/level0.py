"""Decision layer for cuspidal representations of p-adic general linear groups.

A level-0 cuspidal representation of rank n over the quadratic extension
F/F_0 is recorded by its finite parameter (a cuspidal representation of
the residue general linear group) together with the value of its central
character at a normalized uniformizer, stored as a rational angle.

Positive-level representations enter only through their numerical
invariants (endo-class degree, tame residue data, relative degree m) plus
a level-0 avatar over the tame parameter field; the reduction map simply
hands back the avatar, and every verdict is computed there.

Uniformizer conventions, fixed once and for all:

* unramified F/F_0: the uniformizer lies in F_0 and is sigma-fixed;
* ramified F/F_0: sigma(w) = -w and w0 = w^2 is the chosen uniformizer of
  the base field.  The norm of w is then -w0.

In residual characteristic ell, angles of modular data have denominator
prime to ell; the identification of prime-to-ell roots of unity with
angles is pinned by sending q mod ell to 1/(order of q mod ell).  This is
the normalization under which the unramified-twist tests below read off
their answers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .angles import HALF_ANGLE, ZERO_ANGLE, RationalAngle
from .arith import QuadExtension, mult_order, prime_free_part, prime_power_parts
from .characters import CyclicCharacter, inflate_along_norm, reduce_mod, restrict_to_subfield
from .cuspidal import (
    CuspidalRep,
    block_swap_sign,
    is_distinguished as finite_is_distinguished,
    is_sigma_selfdual as finite_is_sigma_selfdual,
    support_multiplicity,
    supercuspidal_support,
)
from .errors import InvariantViolation
from .verdicts import Verdict, no, unknown, yes


@dataclass(frozen=True)
class TameCharacter:
    """A tamely ramified character: unit action plus value at the uniformizer."""

    unit_part: CyclicCharacter  # a character of the residue field's units
    uniformizer_angle: RationalAngle

    def __post_init__(self) -> None:
        if self.unit_part.n != 1:
            raise InvariantViolation("the unit part must be a rank-1 character")
        ell = self.unit_part.ell
        if ell is not None and not self.uniformizer_angle.coprime_to(ell):
            raise InvariantViolation(
                f"angle {self.uniformizer_angle} has denominator divisible by {ell}"
            )

    @property
    def ell(self) -> int | None:
        return self.unit_part.ell

    def inverse(self) -> "TameCharacter":
        return TameCharacter(self.unit_part.inverse(), -self.uniformizer_angle)

    def to_json(self) -> dict:
        return {
            "unit": self.unit_part.to_json(),
            "uniformizer_angle": str(self.uniformizer_angle),
        }


@dataclass(frozen=True)
class LevelZeroCuspidalDatum:
    """A level-0 cuspidal representation of rank n over the top field."""

    ext: QuadExtension
    finite_param: CuspidalRep
    central_angle: RationalAngle

    def __post_init__(self) -> None:
        if self.finite_param.q != self.ext.q:
            raise InvariantViolation(
                f"finite parameter lives over q={self.finite_param.q}, "
                f"extension has q={self.ext.q}"
            )
        ell = self.finite_param.ell
        if ell is not None and not self.central_angle.coprime_to(ell):
            raise InvariantViolation(
                f"central angle {self.central_angle} must have denominator "
                f"prime to {ell}"
            )

    @property
    def n(self) -> int:
        return self.finite_param.n

    @property
    def ell(self) -> int | None:
        return self.finite_param.ell

    def to_json(self) -> dict:
        doc = self.finite_param.to_json()
        return {
            "ext": self.ext.to_json(),
            "n": doc["n"],
            "coeff": doc["coeff"],
            "exponent": doc["exponent"],
            "central_angle": str(self.central_angle),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "LevelZeroCuspidalDatum":
        ext = QuadExtension.from_json(doc["ext"])
        param = CuspidalRep.from_json(
            {"q": ext.q, "n": doc["n"], "coeff": doc["coeff"], "exponent": doc["exponent"]}
        )
        return cls(ext, param, RationalAngle.parse(str(doc["central_angle"])))


@dataclass(frozen=True)
class EndoClassData:
    """Numerical invariants of the wild part of a positive-level datum."""

    degree: int
    residue_degree: int  # of the tame parameter field over the top field
    ramification_index: int
    t_ramified: bool  # whether the tame quadratic extension is ramified

    def __post_init__(self) -> None:
        if self.degree < 1 or self.residue_degree < 1 or self.ramification_index < 1:
            raise InvariantViolation("endo-class invariants must be positive")
        if self.degree % (self.residue_degree * self.ramification_index) != 0:
            raise InvariantViolation("tame degree must divide the endo-class degree")

    def wild_part(self, p: int) -> int:
        wild = self.degree // (self.residue_degree * self.ramification_index)
        w = wild
        while w % p == 0:
            w //= p
        if w != 1:
            raise InvariantViolation(
                f"degree / (tame degree) = {wild} is not a power of p={p}"
            )
        return wild

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "residue_degree": self.residue_degree,
            "ramification_index": self.ramification_index,
            "t_ramified": self.t_ramified,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "EndoClassData":
        return cls(
            degree=int(doc["degree"]),
            residue_degree=int(doc["residue_degree"]),
            ramification_index=int(doc["ramification_index"]),
            t_ramified=bool(doc["t_ramified"]),
        )


@dataclass(frozen=True)
class GeneralCuspidalDatum:
    """A cuspidal representation of arbitrary level, by invariants + avatar."""

    ext: QuadExtension
    endo: EndoClassData
    m: int
    avatar: LevelZeroCuspidalDatum

    def __post_init__(self) -> None:
        self.endo.wild_part(self.ext.p)  # validates the wild-part shape
        if self.avatar.n != self.m:
            raise InvariantViolation(
                f"avatar has rank {self.avatar.n}, relative degree is {self.m}"
            )
        expected_q = self.ext.q**self.endo.residue_degree
        if self.avatar.ext.q != expected_q:
            raise InvariantViolation(
                f"avatar residue cardinality {self.avatar.ext.q} does not equal "
                f"q^residue_degree = {expected_q}"
            )
        if self.avatar.ext.ramified != self.endo.t_ramified:
            raise InvariantViolation("avatar ramification does not match endo data")

    @property
    def n(self) -> int:
        return self.m * self.endo.degree

    def to_json(self) -> dict:
        return {
            "ext": self.ext.to_json(),
            "endo": self.endo.to_json(),
            "m": self.m,
            "avatar": self.avatar.to_json(),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "GeneralCuspidalDatum":
        return cls(
            ext=QuadExtension.from_json(doc["ext"]),
            endo=EndoClassData.from_json(doc["endo"]),
            m=int(doc["m"]),
            avatar=LevelZeroCuspidalDatum.from_json(doc["avatar"]),
        )


Datum = LevelZeroCuspidalDatum | GeneralCuspidalDatum


def level_zero_avatar(g: GeneralCuspidalDatum) -> LevelZeroCuspidalDatum:
    """The level-0 reduction; preserves m, r, selfduality and distinction."""
    return g.avatar


def transport_twist(g: GeneralCuspidalDatum, chi: TameCharacter) -> TameCharacter:
    """The tame character of the tame parameter field induced by a tame
    character of the top field, via the norm: the unit part inflates along
    the residue norm and the uniformizer angle is multiplied by the residue
    degree."""
    f = g.endo.residue_degree
    inflated = inflate_along_norm(chi.unit_part, f)
    unit = CyclicCharacter(g.avatar.ext.q, 1, inflated.exponent, inflated.ell)
    return TameCharacter(unit, chi.uniformizer_angle.times(f))


def twist_by_tame(
    dat: LevelZeroCuspidalDatum, chi: TameCharacter
) -> LevelZeroCuspidalDatum:
    """Twist by a tame character of the top field: the finite parameter is
    multiplied by the inflation of the unit part along the determinant
    norm, and the central angle shifts by n times the uniformizer angle."""
    if chi.unit_part.q != dat.ext.q or chi.ell != dat.ell:
        raise InvariantViolation("tame character does not match the datum")
    shifted = dat.finite_param.parameter.mul(
        inflate_along_norm(chi.unit_part, dat.n)
    )
    return LevelZeroCuspidalDatum(
        ext=dat.ext,
        finite_param=CuspidalRep.from_parameter(shifted),
        central_angle=dat.central_angle + chi.uniformizer_angle.times(dat.n),
    )


def twist_general(
    g: GeneralCuspidalDatum, chi: TameCharacter
) -> GeneralCuspidalDatum:
    return GeneralCuspidalDatum(
        ext=g.ext,
        endo=g.endo,
        m=g.m,
        avatar=twist_by_tame(g.avatar, transport_twist(g, chi)),
    )


@dataclass(frozen=True)
class SupportDatum:
    """Supercuspidal support of a level-0 datum, with its twist ambiguity."""

    r: int
    k: int
    rho: LevelZeroCuspidalDatum
    ambiguity: tuple[RationalAngle, ...]

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "k": self.k,
            "rho": self.rho.to_json(),
            "ambiguity": [str(a) for a in self.ambiguity],
        }


def _angle_solutions(c: RationalAngle, r: int) -> list[RationalAngle]:
    """All angles a with r*a = c in Q/Z, ordered by the shift index."""
    return [
        RationalAngle.of(c.numerator + j * c.denominator, r * c.denominator)
        for j in range(r)
    ]


@lru_cache(maxsize=None)
def support_datum(dat: LevelZeroCuspidalDatum) -> SupportDatum:
    """Multiplicity r, rank k = n/r and a supercuspidal support datum.

    The support central angle solves r*a = central angle; the canonical
    choice is the least admissible solution, replaced by the selfdual one
    when the datum is sigma-selfdual and the selection is well posed
    (r odd, or coefficient characteristic 2).
    """
    fin = dat.finite_param
    r = support_multiplicity(fin)
    support = supercuspidal_support(fin)
    sols = _angle_solutions(dat.central_angle, r)
    ell = dat.ell
    valid = [a for a in sols if ell is None or a.coprime_to(ell)]
    if not valid:
        raise InvariantViolation(
            "no support angle with coefficient-admissible denominator"
        )
    chosen = valid[0]
    if (r % 2 == 1 or ell == 2) and is_sigma_selfdual(dat):
        selfdual = [
            a
            for a in valid
            if is_sigma_selfdual(LevelZeroCuspidalDatum(dat.ext, support.scusp, a))
        ]
        if len(selfdual) != 1:  # pragma: no cover
            raise InvariantViolation(
                f"selfdual support selection is not unique: {selfdual}"
            )
        chosen = selfdual[0]
    rho = LevelZeroCuspidalDatum(dat.ext, support.scusp, chosen)
    return SupportDatum(r=r, k=dat.n // r, rho=rho, ambiguity=tuple(sols))


@lru_cache(maxsize=None)
def is_sigma_selfdual(dat: LevelZeroCuspidalDatum) -> bool:
    """Selfduality twisted by the Galois involution: the finite parameter
    must be sigma-selfdual and the central character must satisfy the
    matching condition at the uniformizer (c(w)^2 = 1 unramified;
    c(-1) c(w)^2 = 1 ramified, since sigma(w) = -w)."""
    if not finite_is_sigma_selfdual(dat.finite_param, dat.ext):
        return False
    doubled = dat.central_angle.times(2)
    if not dat.ext.ramified:
        return doubled.is_zero
    at_minus_one = dat.finite_param.parameter.angle_at_minus_one()
    return (doubled + at_minus_one).is_zero


def _central_char_trivial_on_base(dat: LevelZeroCuspidalDatum) -> bool:
    central = restrict_to_subfield(dat.finite_param.parameter, 1)
    if dat.ext.ramified:
        # base units surject onto the full residue field; w0 = w^2
        return central.is_trivial and dat.central_angle.times(2).is_zero
    # base units hit the subgroup of order q0 - 1; w lies in the base
    d = prime_free_part(dat.ext.q0 - 1, dat.ell)
    return central.exponent % d == 0 and dat.central_angle.is_zero


@lru_cache(maxsize=None)
def is_distinguished(dat: LevelZeroCuspidalDatum) -> Verdict:
    """Distinction by the rank-n general linear group over the base field.

    The central character must be trivial on the base; the finite parameter
    must be distinguished at the residue level; and in the ramified case
    the block-swap sign of the finite parameter must equal the central
    character's value at the uniformizer.
    """
    if not _central_char_trivial_on_base(dat):
        return no("central-character-not-trivial-on-base")
    if dat.n == 1:
        return yes("rank-one-character-case")
    finite = finite_is_distinguished(dat.finite_param, dat.ext)
    if not dat.ext.ramified:
        return Verdict(finite.value, ("unramified-residue-criterion",) + finite.certificate)
    if not finite.is_yes:
        return Verdict(finite.value, ("ramified-residue-criterion",) + finite.certificate)
    # central_angle is 0 or 1/2 once the base-triviality check passed, and
    # it is exactly the sign by which the central character acts at w
    sign = block_swap_sign(dat.finite_param, dat.ext)
    if sign == dat.central_angle:
        return yes("swap-sign-matches-central-value", *finite.certificate)
    return no("swap-sign-mismatch", *finite.certificate)


@dataclass(frozen=True)
class OddCaseReport:
    parity_ok: bool
    support_distinguished: Verdict

    def to_json(self) -> dict:
        return {
            "parity_ok": self.parity_ok,
            "support_distinguished": self.support_distinguished.to_json(),
        }


def odd_case_necessary(dat: Datum) -> OddCaseReport:
    """Necessary conditions for distinction when the support multiplicity
    is odd and > 1: the relative degree must have the parity of the tame
    quadratic extension's ramification index, and the selfdual support must
    itself be distinguished."""
    if isinstance(dat, GeneralCuspidalDatum):
        m, ramified, level0 = dat.m, dat.endo.t_ramified, dat.avatar
    else:
        m, ramified, level0 = dat.n, dat.ext.ramified, dat
    r = support_multiplicity(level0.finite_param)
    if r % 2 == 0 or r == 1:
        raise InvariantViolation(f"the odd case needs odd multiplicity > 1, got {r}")
    parity_ok = (m % 2 == 0) if ramified else (m % 2 == 1)
    rho = support_datum(level0).rho
    return OddCaseReport(
        parity_ok=parity_ok, support_distinguished=is_distinguished(rho)
    )


@dataclass(frozen=True)
class LiftDecision:
    value: bool
    certificate: tuple[str, ...]

    def to_json(self) -> dict:
        return {"value": self.value, "certificate": list(self.certificate)}


def _angle_of_q_mod_ell(q: int, ell: int) -> RationalAngle:
    """Angle of the residue q mod ell under the fixed identification."""
    return RationalAngle.of(1, mult_order(q, ell))


def _legendre_mod_ell(q: int, ell: int) -> CyclicCharacter:
    return reduce_mod(CyclicCharacter(q, 1, (q - 1) // 2), ell)


def _support_restriction_label(
    dat: LevelZeroCuspidalDatum, sup: SupportDatum
) -> str | None:
    """For full-multiplicity even support over a tame character, test the
    restriction of each admissible support character to the base field
    against the two target characters: the class character of the
    quadratic extension (Legendre on units, value at w0 = w^2 equal to its
    value at -1) and the inverse normalized absolute value (trivial on
    units, value q at w0)."""
    q, ell = dat.ext.q, dat.ell
    assert ell is not None and ell != 2
    theta = sup.rho.finite_param.parameter  # character of the residue units
    legendre = _legendre_mod_ell(q, ell)
    kappa_at_w0 = (
        ZERO_ANGLE if (q - 1) // 2 % 2 == 0 else HALF_ANGLE
    )  # value at -1
    nu_at_w0 = _angle_of_q_mod_ell(q, ell)
    candidates = [a for a in sup.ambiguity if a.coprime_to(ell)]
    for a in candidates:
        at_w0 = a.times(2)
        if theta.is_trivial and at_w0 == nu_at_w0:
            return "nu0-inverse"
        if theta == legendre and at_w0 == kappa_at_w0:
            return "kappa"
    return None


@lru_cache(maxsize=None)
def has_distinguished_lift(dat: LevelZeroCuspidalDatum) -> LiftDecision:
    """Whether a sigma-selfdual modular cuspidal datum admits a cuspidal
    characteristic-0 lift that is distinguished.

    Multiplicity 1 reduces to distinction itself; odd multiplicity > 1
    needs a distinguished support together with an order condition on the
    residue cardinality; even multiplicity needs a ramified extension,
    full multiplicity, and a support restriction equal to one of the two
    admissible base characters (with a special shape in characteristic 2).
    """
    ell = dat.ell
    if ell is None:
        raise InvariantViolation("lift decisions apply to modular data")
    if not is_sigma_selfdual(dat):
        raise InvariantViolation("lift decisions expect sigma-selfdual data")
    r = support_multiplicity(dat.finite_param)
    m = dat.n  # relative degree of a level-0 representation
    if r == 1:
        verdict = is_distinguished(dat)
        if verdict.is_unknown:  # pragma: no cover
            raise InvariantViolation("supercuspidal distinction is always decided")
        return LiftDecision(
            verdict.is_yes,
            ("supercuspidal-lift-iff-distinguished",) + verdict.certificate,
        )
    if r % 2 == 1:
        # a distinguished characteristic-0 cuspidal has even rank over a
        # ramified extension and odd rank over an unramified one, so the
        # parity rule is an obstruction before any support condition
        parity_ok = (m % 2 == 0) if dat.ext.ramified else (m % 2 == 1)
        if not parity_ok:
            return LiftDecision(False, ("odd-multiplicity-parity-obstruction",))
        sup = support_datum(dat)
        rho_verdict = is_distinguished(sup.rho)
        if not rho_verdict.is_yes:
            return LiftDecision(
                False, ("odd-multiplicity-support-not-distinguished",)
            )
        if not dat.ext.ramified:
            e0 = mult_order(dat.ext.q0, ell)
            if e0 % 2 == 0:
                return LiftDecision(
                    True,
                    ("odd-multiplicity-unramified", "base-residue-order-even"),
                )
            return LiftDecision(
                False,
                ("odd-multiplicity-unramified", "base-residue-order-odd"),
            )
        e = mult_order(dat.ext.q, ell)
        if (m // e) % 2 == 1:
            return LiftDecision(
                True, ("odd-multiplicity-ramified", "m-over-e-odd")
            )
        return LiftDecision(False, ("odd-multiplicity-ramified", "m-over-e-even"))
    # r even
    if not dat.ext.ramified:
        return LiftDecision(False, ("even-multiplicity-needs-ramified",))
    if m != r:
        return LiftDecision(False, ("even-multiplicity-needs-full-multiplicity",))
    sup = support_datum(dat)
    if ell != 2:
        label = _support_restriction_label(dat, sup)
        if label is None:
            return LiftDecision(
                False, ("even-multiplicity-support-restriction-fails",)
            )
        return LiftDecision(
            True, ("even-multiplicity-ramified", f"support-restriction={label}")
        )
    if m == 2 and dat.ext.q0 % 4 == 3 and is_distinguished(sup.rho).is_yes:
        return LiftDecision(
            True,
            (
                "even-multiplicity-characteristic-2",
                "base-cardinality-minus-one-mod-4",
                "support-distinguished",
            ),
        )
    return LiftDecision(False, ("even-multiplicity-characteristic-2-fails",))


def _extend_inverse_to_top(
    dat: LevelZeroCuspidalDatum, mu: TameCharacter
) -> TameCharacter:
    """A tame character of the top field extending the inverse of a tame
    character of the base field (the canonical choice among the finitely
    many extensions; distinction verdicts do not depend on it)."""
    ext, ell = dat.ext, dat.ell
    if mu.ell != ell:
        raise InvariantViolation("coefficient characteristics do not match")
    if ext.ramified:
        if mu.unit_part.q != ext.q:
            raise InvariantViolation("ramified base has the same residue field")
        unit = mu.unit_part.inverse()
        # value at w must square to the inverse value at w0 = w^2
        target = -mu.uniformizer_angle
        for a in (
            RationalAngle.of(target.numerator, 2 * target.denominator),
            RationalAngle.of(
                target.numerator + target.denominator, 2 * target.denominator
            ),
        ):
            if ell is None or a.coprime_to(ell):
                return TameCharacter(unit, a)
        raise InvariantViolation("no admissible extension angle")  # pragma: no cover
    if mu.unit_part.q != ext.q0:
        raise InvariantViolation("unit part must live over the base residue field")
    d = prime_free_part(ext.q0 - 1, ell)
    exponent = (-mu.unit_part.exponent) % d
    unit = CyclicCharacter(ext.q, 1, exponent, ell)
    return TameCharacter(unit, -mu.uniformizer_angle)


@lru_cache(maxsize=None)
def mu_distinguished(dat: LevelZeroCuspidalDatum, mu: TameCharacter) -> Verdict:
    """Distinction twisted by a tame character of the base field, computed
    as plain distinction of the datum twisted by an extension of 1/mu."""
    chi = _extend_inverse_to_top(dat, mu)
    return is_distinguished(twist_by_tame(dat, chi))


def kappa_character(ext: QuadExtension, ell: int | None) -> TameCharacter:
    """The quadratic character of the base field cutting out the norms.

    Unramified: unramified of order 2 (value -1 at the base uniformizer).
    Ramified: Legendre on units; its value at w0 = w^2 equals its value at
    -1, because -w0 is a norm.  In characteristic 2 both reduce to the
    trivial character.
    """
    if not ext.ramified:
        unit = CyclicCharacter(ext.q0, 1, 0, ell)
        angle = HALF_ANGLE if ell != 2 else ZERO_ANGLE
        return TameCharacter(unit, angle)
    q0 = ext.q0
    legendre = CyclicCharacter(q0, 1, (q0 - 1) // 2)
    unit = legendre if ell is None else reduce_mod(legendre, ell)
    at_minus_one = ZERO_ANGLE if (q0 - 1) // 2 % 2 == 0 else HALF_ANGLE
    angle = at_minus_one if ell != 2 else ZERO_ANGLE
    return TameCharacter(unit, angle)


def kappa_distinguished(dat: LevelZeroCuspidalDatum) -> Verdict:
    return mu_distinguished(dat, kappa_character(dat.ext, dat.ell))


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # pass | fail | skipped
    detail: str = ""

    def to_json(self) -> dict:
        doc = {"name": self.name, "status": self.status}
        if self.detail:
            doc["detail"] = self.detail
        return doc


def consistency_checks(dat: LevelZeroCuspidalDatum) -> list[CheckResult]:
    """Arithmetic sanity conditions every valid datum must satisfy:
    even multiplicity in odd characteristic forces q^(n/2) = -1 mod ell,
    and selfdual data obey the parity rule for n/r."""
    out: list[CheckResult] = []
    r = support_multiplicity(dat.finite_param)
    ell = dat.ell

    if ell is not None and ell != 2 and r >= 2 and r % 2 == 0:
        ok = pow(dat.ext.q, dat.n // 2, ell) == ell - 1
        out.append(
            CheckResult(
                "even-multiplicity-forces-q-half-eq-minus-one",
                "pass" if ok else "fail",
                f"q^(n/2) mod {ell} = {pow(dat.ext.q, dat.n // 2, ell)}",
            )
        )
    else:
        out.append(
            CheckResult(
                "even-multiplicity-forces-q-half-eq-minus-one",
                "skipped",
                "needs even multiplicity and odd positive characteristic",
            )
        )

    if is_sigma_selfdual(dat):
        ratio = dat.n // r
        if dat.ext.ramified:
            ok = ratio == 1 or ratio % 2 == 0
            rule = "n/r even or 1 (ramified)"
        else:
            ok = ratio % 2 == 1
            rule = "n/r odd (unramified)"
        out.append(
            CheckResult(
                "selfdual-degree-multiplicity-parity",
                "pass" if ok else "fail",
                f"n/r = {ratio}; rule: {rule}",
            )
        )
    else:
        out.append(
            CheckResult(
                "selfdual-degree-multiplicity-parity",
                "skipped",
                "datum is not sigma-selfdual",
            )
        )
    return out


def classify(dat: Datum) -> dict:
    """Full verdict bundle for one datum (the CLI's classify payload)."""
    level0 = dat.avatar if isinstance(dat, GeneralCuspidalDatum) else dat
    sup = support_datum(level0)
    bundle: dict = {
        "datum": dat.to_json(),
        "r": sup.r,
        "support": sup.to_json(),
        "sigma_selfdual": is_sigma_selfdual(level0),
        "distinguished": is_distinguished(level0).to_json(),
    }
    if sup.r > 1 and sup.r % 2 == 1:
        bundle["odd_case"] = odd_case_necessary(dat).to_json()
    else:
        bundle["odd_case"] = None
    if level0.ell is not None and bundle["sigma_selfdual"]:
        bundle["has_distinguished_lift"] = has_distinguished_lift(level0).to_json()
    else:
        bundle["has_distinguished_lift"] = None
    bundle["consistency"] = [c.to_json() for c in consistency_checks(level0)]
    return bundle


def datum_from_json(doc: dict) -> Datum:
    if "endo" in doc:
        return GeneralCuspidalDatum.from_json(doc)
    return LevelZeroCuspidalDatum.from_json(doc)
