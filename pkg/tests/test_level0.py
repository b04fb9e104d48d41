import json

import pytest

from cuspdist.angles import HALF_ANGLE, ZERO_ANGLE, RationalAngle
from cuspdist.arith import QuadExtension
from cuspdist.characters import CyclicCharacter, inflate_along_norm
from cuspdist.cuspidal import CuspidalRep, st_cuspidal
from cuspdist.errors import InvariantViolation
from cuspdist.level0 import (
    EndoClassData,
    GeneralCuspidalDatum,
    LevelZeroCuspidalDatum,
    TameCharacter,
    classify,
    consistency_checks,
    datum_from_json,
    has_distinguished_lift,
    is_distinguished,
    is_sigma_selfdual,
    kappa_character,
    kappa_distinguished,
    level_zero_avatar,
    mu_distinguished,
    odd_case_necessary,
    support_datum,
    transport_twist,
    twist_by_tame,
    twist_general,
)

A = RationalAngle.of
RAM3 = QuadExtension(3, True)
RAM5 = QuadExtension(5, True)
UNRAM3 = QuadExtension(3, False)


def rep(q, n, e, ell=None):
    return CuspidalRep.from_parameter(CyclicCharacter(q, n, e, ell))


def worked_instance():
    """Ramified, q=3, ell=5, rank 4, full-multiplicity Steinberg over the
    trivial character, central value -1 at the uniformizer."""
    return LevelZeroCuspidalDatum(RAM3, st_cuspidal(rep(3, 1, 0, ell=5), 4), A(1, 2))


class TestDatumValidation:
    def test_angle_denominator_must_avoid_ell(self):
        with pytest.raises(InvariantViolation, match="prime to"):
            LevelZeroCuspidalDatum(RAM3, st_cuspidal(rep(3, 1, 0, ell=5), 4), A(1, 5))

    def test_residue_cardinality_must_match(self):
        with pytest.raises(InvariantViolation):
            LevelZeroCuspidalDatum(UNRAM3, rep(3, 2, 1), A(0))

    def test_json_round_trip(self):
        dat = worked_instance()
        assert datum_from_json(dat.to_json()) == dat


class TestGeneralDatum:
    def g(self):
        endo = EndoClassData(degree=2, residue_degree=2, ramification_index=1,
                             t_ramified=False)
        avatar = LevelZeroCuspidalDatum(QuadExtension(3, False), rep(9, 3, 1), A(0))
        return GeneralCuspidalDatum(RAM3, endo, 3, avatar)

    def test_level_zero_input_is_identity(self):
        endo = EndoClassData(1, 1, 1, True)
        avatar = LevelZeroCuspidalDatum(RAM3, rep(3, 2, 1), A(0))
        g = GeneralCuspidalDatum(RAM3, endo, 2, avatar)
        assert level_zero_avatar(g) == avatar

    def test_unramified_tame_bookkeeping(self):
        g = self.g()
        assert g.n == 6
        assert level_zero_avatar(g).ext.q == 9  # residue cardinality q^2

    def test_ramified_tame_bookkeeping(self):
        endo = EndoClassData(degree=2, residue_degree=1, ramification_index=2,
                             t_ramified=True)
        avatar = LevelZeroCuspidalDatum(RAM3, rep(3, 2, 1), A(0))
        g = GeneralCuspidalDatum(RAM3, endo, 2, avatar)
        assert g.n == 4
        assert level_zero_avatar(g).ext.q == 3

    def test_wild_part_validation(self):
        with pytest.raises(InvariantViolation, match="power of p"):
            EndoClassData(10, 1, 2, True).wild_part(3)
        assert EndoClassData(18, 2, 3, True).wild_part(3) == 3

    def test_rank_mismatch_rejected(self):
        endo = EndoClassData(1, 1, 1, True)
        avatar = LevelZeroCuspidalDatum(RAM3, rep(3, 2, 1), A(0))
        with pytest.raises(InvariantViolation, match="rank"):
            GeneralCuspidalDatum(RAM3, endo, 3, avatar)

    def test_json_round_trip(self):
        g = self.g()
        assert datum_from_json(g.to_json()) == g


class TestTwist:
    def test_trivial_twist_is_identity(self):
        dat = LevelZeroCuspidalDatum(RAM3, rep(3, 2, 2), A(0))
        chi = TameCharacter(CyclicCharacter(3, 1, 0), ZERO_ANGLE)
        assert twist_by_tame(dat, chi) == dat

    def test_double_twist_is_identity(self):
        dat = LevelZeroCuspidalDatum(RAM3, rep(3, 2, 2), A(0))
        chi = TameCharacter(CyclicCharacter(3, 1, 1), A(1, 4))
        assert twist_by_tame(twist_by_tame(dat, chi), chi.inverse()) == dat

    def test_exponent_shift_rule(self):
        # unit exponent 1 inflates along the determinant norm by
        # (q^n-1)/(q-1) = 4; the central angle shifts by n times 1/4
        assert inflate_along_norm(CyclicCharacter(3, 1, 1), 2).exponent == 4
        dat = LevelZeroCuspidalDatum(RAM3, rep(3, 2, 1), A(0))
        out = twist_by_tame(dat, TameCharacter(CyclicCharacter(3, 1, 1), A(1, 4)))
        assert out.central_angle == A(1, 2)
        assert out.finite_param.parameter.exponent == (1 + 4) % 8

    def test_general_twist_equivariance(self):
        endo = EndoClassData(2, 2, 1, False)
        avatar = LevelZeroCuspidalDatum(QuadExtension(3, False), rep(9, 3, 1), A(0))
        g = GeneralCuspidalDatum(RAM3, endo, 3, avatar)
        chi = TameCharacter(CyclicCharacter(3, 1, 1), A(1, 8))
        left = level_zero_avatar(twist_general(g, chi))
        right = twist_by_tame(level_zero_avatar(g), transport_twist(g, chi))
        assert left == right


class TestSupportDatum:
    def test_supercuspidal_is_itself(self):
        dat = LevelZeroCuspidalDatum(RAM3, rep(3, 2, 2), A(0))
        sup = support_datum(dat)
        assert sup.r == 1 and sup.rho == dat

    def test_ell2_selection(self):
        dat = LevelZeroCuspidalDatum(RAM3, st_cuspidal(rep(3, 1, 0, ell=2), 2), A(0))
        sup = support_datum(dat)
        assert sup.r == 2
        assert sup.rho.central_angle == A(0)  # 1/2 has an inadmissible denominator
        assert set(map(str, sup.ambiguity)) == {"0/1", "1/2"}
        assert is_sigma_selfdual(sup.rho)

    def test_worked_instance_support(self):
        sup = support_datum(worked_instance())
        assert sup.r == 4 and sup.k == 1
        assert sup.rho.central_angle == A(1, 8)  # canonical solution of 4a = 1/2
        assert len(sup.ambiguity) == 4

    def test_reinflation_round_trip(self):
        from cuspdist.characters import frobenius_orbit

        for dat in (
            worked_instance(),
            LevelZeroCuspidalDatum(RAM3, st_cuspidal(rep(3, 1, 0, ell=2), 2), A(0)),
            LevelZeroCuspidalDatum(RAM5, st_cuspidal(rep(5, 1, 2, ell=3), 2), A(0)),
        ):
            sup = support_datum(dat)
            back = inflate_along_norm(sup.rho.finite_param.parameter, dat.n)
            assert back.exponent in frobenius_orbit(dat.finite_param.parameter)
            # angle law: r * support angle = central angle
            assert sup.rho.central_angle.times(sup.r) == dat.central_angle


class TestSigmaSelfdual:
    def test_contract_examples(self):
        assert is_sigma_selfdual(LevelZeroCuspidalDatum(RAM3, rep(3, 2, 2), A(1, 2)))
        assert not is_sigma_selfdual(LevelZeroCuspidalDatum(RAM3, rep(3, 2, 1), A(0)))
        dat = LevelZeroCuspidalDatum(UNRAM3, rep(9, 1, 0), A(1, 4))
        assert not is_sigma_selfdual(dat)  # 2 * (1/4) is not 0

    def test_central_condition_at_minus_one(self):
        # parameter at -1 has angle 0 here, so both 0 and 1/2 work
        for angle in (A(0), A(1, 2)):
            assert is_sigma_selfdual(LevelZeroCuspidalDatum(RAM3, rep(3, 2, 2), angle))
        # quarter-angles never satisfy the doubled condition
        assert not is_sigma_selfdual(LevelZeroCuspidalDatum(RAM3, rep(3, 2, 2), A(1, 4)))

    def test_selfdual_rank2_parameters_have_even_exponent(self):
        # so the -1 term of the central condition vanishes in rank 2
        from cuspdist.battery import selfdual_cuspidal_reps

        for q in (3, 5, 7):
            for W in selfdual_cuspidal_reps(QuadExtension(q, True), 2, None):
                assert W.parameter.angle_at_minus_one() == ZERO_ANGLE


class TestDistinction:
    def test_char0_sign_comparison_both_ways(self):
        W = rep(3, 2, 2)
        assert is_distinguished(LevelZeroCuspidalDatum(RAM3, W, A(0))).is_yes
        v = is_distinguished(LevelZeroCuspidalDatum(RAM3, W, A(1, 2)))
        assert v.is_no and "swap-sign-mismatch" in v.certificate

    def test_worked_instance_yes(self):
        assert is_distinguished(worked_instance()).is_yes
        dat0 = LevelZeroCuspidalDatum(RAM3, worked_instance().finite_param, A(0))
        assert is_distinguished(dat0).is_no  # sign +1 but swap sign is -1

    def test_central_triviality_gate(self):
        v = is_distinguished(LevelZeroCuspidalDatum(RAM3, rep(3, 2, 2), A(1, 4)))
        assert v.is_no and v.certificate == ("central-character-not-trivial-on-base",)

    def test_unramified_even_rank_no(self):
        for e in (1, 2):
            dat = LevelZeroCuspidalDatum(UNRAM3, rep(9, 2, e), A(0))
            assert is_distinguished(dat).is_no

    def test_rank_one_character_case(self):
        assert is_distinguished(LevelZeroCuspidalDatum(RAM3, rep(3, 1, 0), A(0))).is_yes
        assert is_distinguished(LevelZeroCuspidalDatum(RAM3, rep(3, 1, 0), A(1, 2))).is_yes
        assert is_distinguished(LevelZeroCuspidalDatum(RAM3, rep(3, 1, 1), A(0))).is_no

    def test_verdict_stable_under_orbit_representative(self):
        # constructing from any orbit member gives the same canonical datum
        a = CuspidalRep.from_parameter(CyclicCharacter(3, 2, 2))
        b = CuspidalRep.from_parameter(CyclicCharacter(3, 2, 6))
        assert a == b


class TestOddCase:
    def test_parity_examples(self):
        # ramified, q=3, ell=13, m=6, r=3: m even in the ramified case
        theta = CyclicCharacter(3, 2, 1, ell=13)
        st3 = st_cuspidal(CuspidalRep.from_parameter(theta), 3)
        dat = LevelZeroCuspidalDatum(RAM3, st3, A(0))
        assert odd_case_necessary(dat).parity_ok is True

    def test_unramified_m3(self):
        # (q0=3, ell=7, m=3, r=3): m odd in the unramified case
        from cuspdist.battery import selfdual_cuspidal_reps
        from cuspdist.cuspidal import support_multiplicity

        reps3 = [
            W for W in selfdual_cuspidal_reps(UNRAM3, 3, 7)
            if support_multiplicity(W) == 3
        ]
        assert reps3
        dat = LevelZeroCuspidalDatum(UNRAM3, reps3[0], A(0))
        assert odd_case_necessary(dat).parity_ok is True

    def test_even_multiplicity_rejected(self):
        dat = LevelZeroCuspidalDatum(RAM3, st_cuspidal(rep(3, 1, 0, ell=2), 2), A(0))
        with pytest.raises(InvariantViolation):
            odd_case_necessary(dat)

    def test_distinguished_implies_both_conditions(self):
        # soundness on a cell: distinguished with odd multiplicity > 1
        # forces parity and a distinguished support
        from cuspdist.battery import selfdual_level0_data
        from cuspdist.cuspidal import support_multiplicity

        for ext, n, ell in ((RAM3, 6, 13), (UNRAM3, 3, 7)):
            for dat in selfdual_level0_data(ext, n, ell):
                r = support_multiplicity(dat.finite_param)
                if r % 2 == 0 or r == 1:
                    continue
                if is_distinguished(dat).is_yes:
                    report = odd_case_necessary(dat)
                    assert report.parity_ok
                    assert report.support_distinguished.is_yes


class TestHasDistinguishedLift:
    def test_worked_instance(self):
        decision = has_distinguished_lift(worked_instance())
        assert decision.value is True
        assert "support-restriction=nu0-inverse" in decision.certificate

    def test_characteristic_two_case(self):
        dat = LevelZeroCuspidalDatum(RAM3, st_cuspidal(rep(3, 1, 0, ell=2), 2), A(0))
        decision = has_distinguished_lift(dat)
        assert decision.value is True
        assert "base-cardinality-minus-one-mod-4" in decision.certificate

    def test_m_over_e_even_is_false(self):
        # ramified, q=3, ell=13, m=6, r=3: e = ord(3 mod 13) = 3, so m/e = 2
        # is even, defeating every such datum regardless of its support
        theta = CyclicCharacter(3, 2, 2, ell=13)  # selfdual supercuspidal
        st3 = st_cuspidal(CuspidalRep.from_parameter(theta), 3)
        angles = [
            a for a in (A(0), A(1, 2))
            if is_sigma_selfdual(LevelZeroCuspidalDatum(RAM3, st3, a))
        ]
        assert angles
        for a in angles:
            decision = has_distinguished_lift(LevelZeroCuspidalDatum(RAM3, st3, a))
            assert decision.value is False

    def test_kappa_restriction_route(self):
        # q=5, ell=3, st_2(Legendre) with central angle 0: the support
        # restriction equals the norm-class character
        dat = LevelZeroCuspidalDatum(RAM5, st_cuspidal(rep(5, 1, 2, ell=3), 2), A(0))
        decision = has_distinguished_lift(dat)
        assert decision.value is True
        assert "support-restriction=kappa" in decision.certificate

    def test_requires_selfdual_modular(self):
        with pytest.raises(InvariantViolation):
            has_distinguished_lift(LevelZeroCuspidalDatum(RAM3, rep(3, 2, 2), A(0)))
        with pytest.raises(InvariantViolation):
            has_distinguished_lift(LevelZeroCuspidalDatum(RAM3, rep(3, 2, 1), A(0)))


class TestMuDistinction:
    def test_trivial_mu_equals_plain(self):
        mu = TameCharacter(CyclicCharacter(3, 1, 0), ZERO_ANGLE)
        for angle in (A(0), A(1, 2)):
            dat = LevelZeroCuspidalDatum(RAM3, rep(3, 2, 2), angle)
            assert mu_distinguished(dat, mu).value == is_distinguished(dat).value

    def test_dichotomy_supercuspidal(self):
        # exactly one of plain / kappa for a sigma-selfdual supercuspidal
        for angle in (A(0), A(1, 2)):
            dat = LevelZeroCuspidalDatum(RAM3, rep(3, 2, 2), angle)
            plain = is_distinguished(dat).is_yes
            kappa = kappa_distinguished(dat).is_yes
            assert plain != kappa

    def test_disjunction_odd_multiplicity(self):
        from cuspdist.battery import selfdual_level0_data
        from cuspdist.cuspidal import support_multiplicity

        for dat in selfdual_level0_data(RAM3, 6, 13):
            if support_multiplicity(dat.finite_param) % 2 == 0:
                continue
            assert not (
                is_distinguished(dat).is_yes and kappa_distinguished(dat).is_yes
            )

    def test_kappa_character_shapes(self):
        k_ram = kappa_character(RAM3, None)
        assert k_ram.unit_part.order == 2
        assert k_ram.uniformizer_angle == HALF_ANGLE  # 3 = -1 mod 4
        k_unram = kappa_character(UNRAM3, None)
        assert k_unram.unit_part.is_trivial
        assert k_unram.uniformizer_angle == HALF_ANGLE
        assert kappa_character(RAM3, 2).unit_part.is_trivial  # quadratic = trivial mod 2


class TestConsistency:
    def test_even_multiplicity_check(self):
        checks = {c.name: c for c in consistency_checks(worked_instance())}
        assert checks["even-multiplicity-forces-q-half-eq-minus-one"].status == "pass"

    def test_parity_check_examples(self):
        dat = worked_instance()
        checks = {c.name: c for c in consistency_checks(dat)}
        assert checks["selfdual-degree-multiplicity-parity"].status == "pass"
        plain = LevelZeroCuspidalDatum(RAM3, rep(3, 2, 1), A(0))
        checks = {c.name: c for c in consistency_checks(plain)}
        assert checks["selfdual-degree-multiplicity-parity"].status == "skipped"


class TestClassifyBundle:
    def test_worked_instance_bundle(self):
        bundle = classify(worked_instance())
        assert bundle["r"] == 4
        assert bundle["distinguished"]["verdict"] == "yes"
        assert bundle["has_distinguished_lift"]["value"] is True
        assert bundle["sigma_selfdual"] is True

    def test_bundle_round_trips_through_json(self):
        bundle = classify(worked_instance())
        text = json.dumps(bundle)
        again = classify(datum_from_json(bundle["datum"]))
        assert json.dumps(again) == text
