import pytest

from cuspdist.arith import QuadExtension, regular_orbit_count
from cuspdist.characters import (
    CyclicCharacter,
    frobenius_orbit,
    is_regular,
    reduce_mod,
    sigma_dual,
)
from cuspdist.cuspidal import (
    CuspidalRep,
    block_swap_sign,
    enumerate_distinguished_lifts,
    is_distinguished,
    is_sigma_selfdual,
    lift_decision_ramified,
    lift_decision_unramified,
    quadratic_steinberg_swap_sign,
    st_cuspidal,
    steinberg_is_cuspidal,
    supercuspidal_support,
    support_multiplicity,
)
from cuspdist.errors import InvariantViolation

RAM3 = QuadExtension(3, True)
RAM5 = QuadExtension(5, True)
RAM7 = QuadExtension(7, True)
UNRAM3 = QuadExtension(3, False)


def rep(q, n, e, ell=None):
    return CuspidalRep.from_parameter(CyclicCharacter(q, n, e, ell))


def brute_lift_orbits(modular_rep, ext):
    """Independent oracle: scan every exponent in [0, q^n-1), keep those
    that are regular, reduce onto the given modular parameter's orbit, and
    satisfy the characteristic-0 distinction rule; collect orbits."""
    q, n, ell = modular_rep.q, modular_rep.n, modular_rep.ell
    m = q**n - 1
    target = set(frobenius_orbit(modular_rep.parameter))
    found = set()
    for e in range(m):
        chi = CyclicCharacter(q, n, e)
        if not is_regular(chi):
            continue
        if reduce_mod(chi, ell).exponent not in target:
            continue
        if ext.ramified:
            if n == 1:
                ok = chi.is_trivial
            else:
                ok = n % 2 == 0 and chi.exponent % (q ** (n // 2) - 1) == 0
        else:
            ok = sigma_dual(chi, False, ext.q0).exponent in frobenius_orbit(chi)
        if ok:
            found.add(frobenius_orbit(chi))
    return found


class TestValidation:
    def test_char0_must_be_regular(self):
        with pytest.raises(InvariantViolation, match="regular"):
            CuspidalRep(CyclicCharacter(3, 2, 0))

    def test_modular_needs_regular_lift(self):
        # (q=3, n=3, ell=5): trivial mod 26 has the single lift 0, which is
        # not regular
        with pytest.raises(InvariantViolation, match="regular lift"):
            CuspidalRep(CyclicCharacter(3, 3, 0, ell=5))

    def test_canonical_representative_enforced(self):
        with pytest.raises(InvariantViolation, match="canonical"):
            CuspidalRep(CyclicCharacter(3, 2, 3))
        assert CuspidalRep.from_parameter(CyclicCharacter(3, 2, 3)).parameter.exponent == 1

    def test_bijection_count_char0(self):
        # number of characteristic-0 cuspidals equals the orbit count
        for q, n in ((3, 2), (5, 2), (3, 3), (7, 2), (9, 2)):
            m = q**n - 1
            reps = {
                CuspidalRep.from_parameter(CyclicCharacter(q, n, e))
                for e in range(m)
                if is_regular(CyclicCharacter(q, n, e))
            }
            assert len(reps) == regular_orbit_count(q, n)


class TestSupport:
    def test_multiplicity_examples(self):
        assert support_multiplicity(rep(3, 2, 0, ell=2)) == 2
        assert support_multiplicity(rep(3, 2, 1)) == 1  # characteristic 0
        W = CuspidalRep.from_parameter(reduce_mod(CyclicCharacter(5, 2, 12), 3))
        assert support_multiplicity(W) == 2

    def test_support_examples(self):
        sup = supercuspidal_support(rep(3, 2, 0, ell=2))
        assert (sup.u, sup.f) == (2, 1) and sup.scusp.parameter.is_trivial
        W = CuspidalRep.from_parameter(reduce_mod(CyclicCharacter(5, 2, 12), 3))
        sup = supercuspidal_support(W)
        assert (sup.u, sup.f) == (2, 1)
        # the support is the Legendre character: order exactly 2
        assert sup.scusp.parameter.order == 2
        scusp = rep(3, 2, 1)
        sup = supercuspidal_support(scusp)
        assert (sup.u, sup.f, sup.scusp) == (1, 2, scusp)

    def test_steinberg_cuspidality_examples(self):
        triv = lambda ell: rep(3, 1, 0, ell=ell)
        assert steinberg_is_cuspidal(triv(2), 2, 2)  # e = ord(3 mod 2) = 1
        assert steinberg_is_cuspidal(triv(5), 4, 5)  # e = ord(3 mod 5) = 4
        assert not steinberg_is_cuspidal(triv(5), 3, 5)

    def test_steinberg_constructor_consistency(self):
        # classifJames/Coupurefinie consistency on a whole cell
        for ell in (2, 5, 7, 13):
            for e in range(CyclicCharacter(3, 4, 0, ell=ell).modulus):
                chi = CyclicCharacter(3, 4, e, ell=ell)
                try:
                    W = CuspidalRep.from_parameter(chi)
                except InvariantViolation:
                    continue
                r = support_multiplicity(W)
                sup = supercuspidal_support(W)
                assert steinberg_is_cuspidal(sup.scusp, r, ell)


class TestSigmaSelfdual:
    def test_contract_examples(self):
        assert is_sigma_selfdual(rep(3, 2, 2), RAM3)  # -2 = 6 in {2, 6}
        assert not is_sigma_selfdual(rep(3, 2, 1), RAM3)

    def test_unramified_rank2_nonexistence(self):
        # sigma-selfduality forces exponents that are Frobenius-fixed
        found = [
            e
            for e in range(80)
            if is_regular(CyclicCharacter(9, 2, e))
            and is_sigma_selfdual(rep(9, 2, min(frobenius_orbit(CyclicCharacter(9, 2, e)))), UNRAM3)
        ]
        assert found == []


class TestDistinction:
    def test_ramified_char0_examples(self):
        v = is_distinguished(rep(3, 2, 2), RAM3)
        assert v.is_yes and "half-subfield" in v.certificate[0]
        assert is_distinguished(rep(3, 2, 1), RAM3).is_no

    def test_unramified_char0_no_selfduals(self):
        for e in range(80):
            chi = CyclicCharacter(9, 2, e)
            if is_regular(chi):
                assert is_distinguished(rep(9, 2, min(frobenius_orbit(chi))), UNRAM3).is_no

    def test_distinction_implies_selfdual_everywhere(self):
        for ext, n in ((RAM3, 2), (RAM5, 2), (UNRAM3, 1), (UNRAM3, 2)):
            m = ext.q**n - 1
            for e in range(m):
                chi = CyclicCharacter(ext.q, n, e)
                if not is_regular(chi):
                    continue
                W = CuspidalRep.from_parameter(chi)
                if is_distinguished(W, ext).is_yes:
                    assert is_sigma_selfdual(W, ext)

    def test_modular_certificates(self):
        st2 = st_cuspidal(rep(3, 1, 0, ell=2), 2)
        v = is_distinguished(st2, RAM3)
        assert v.is_yes
        assert v.certificate == ("modular-ramified-transfer-from-distinguished-lift",)

    def test_rank_one_cases(self):
        assert is_distinguished(rep(3, 1, 0), RAM3).is_yes
        assert is_distinguished(rep(3, 1, 1), RAM3).is_no
        # unramified rank 1: distinction = sigma-selfduality (Gow)
        assert is_distinguished(rep(9, 1, 0), UNRAM3).is_yes
        assert is_distinguished(rep(9, 1, 4), UNRAM3).is_yes  # order-2 character
        assert is_distinguished(rep(9, 1, 1), UNRAM3).is_no

    def test_odd_rank_ramified_is_no(self):
        W = st_cuspidal(rep(7, 1, 0, ell=3), 3)  # rank 3 over q = 7
        assert is_distinguished(W, RAM7).is_no


class TestSwapSign:
    def test_char0_examples(self):
        assert block_swap_sign(rep(3, 2, 2), RAM3).as_sign() == 1  # e' = 1
        assert block_swap_sign(rep(5, 2, 8), RAM5).as_sign() == -1  # e' = 2
        assert block_swap_sign(rep(5, 2, 4), RAM5).as_sign() == 1  # e' = 1

    def test_constant_on_orbit(self):
        for q, ext in ((3, RAM3), (5, RAM5)):
            for e in range(q * q - 1):
                chi = CyclicCharacter(q, 2, e)
                if not is_regular(chi) or e % (q - 1) != 0:
                    continue
                W = CuspidalRep.from_parameter(chi)
                signs = set()
                for member in frobenius_orbit(chi):
                    eprime = member // (q - 1)
                    signs.add(1 if eprime % 2 == 1 else -1)
                assert signs == {block_swap_sign(W, ext).as_sign()}

    def test_precondition_rejected(self):
        with pytest.raises(InvariantViolation):
            block_swap_sign(rep(3, 2, 1), RAM3)  # not trivial on half
        with pytest.raises(InvariantViolation):
            block_swap_sign(rep(3, 2, 2), UNRAM3)  # wrong extension type


class TestQuadraticSteinbergSign:
    def test_contract_examples(self):
        stt = st_cuspidal(rep(5, 1, 0, ell=3), 2)
        stl = st_cuspidal(rep(5, 1, 2, ell=3), 2)
        assert quadratic_steinberg_swap_sign(stt, RAM5).as_sign() == -1
        assert quadratic_steinberg_swap_sign(stl, RAM5).as_sign() == 1
        # matches the sign of the unique distinguished lift orbit
        assert block_swap_sign(stt, RAM5) == quadratic_steinberg_swap_sign(stt, RAM5)
        assert block_swap_sign(stl, RAM5) == quadratic_steinberg_swap_sign(stl, RAM5)

    def test_characteristic_two_unit(self):
        st2 = st_cuspidal(rep(3, 1, 0, ell=2), 2)
        assert quadratic_steinberg_swap_sign(st2, RAM3).as_sign() == 1

    def test_shape_violations_rejected(self):
        with pytest.raises(InvariantViolation):
            quadratic_steinberg_swap_sign(rep(3, 2, 2), RAM3)  # characteristic 0


class TestLiftEnumeration:
    def test_st4_trivial_q3_ell5(self):
        st4 = st_cuspidal(rep(3, 1, 0, ell=5), 4)
        lifts = enumerate_distinguished_lifts(st4, RAM3)
        assert len(lifts) == 1
        assert frobenius_orbit(lifts[0].parameter) == (16, 32, 48, 64)
        assert brute_lift_orbits(st4, RAM3) == {(16, 32, 48, 64)}

    def test_st2_q5_ell3(self):
        stt = st_cuspidal(rep(5, 1, 0, ell=3), 2)
        stl = st_cuspidal(rep(5, 1, 2, ell=3), 2)
        assert [frobenius_orbit(w.parameter) for w in enumerate_distinguished_lifts(stt, RAM5)] == [(8, 16)]
        assert [frobenius_orbit(w.parameter) for w in enumerate_distinguished_lifts(stl, RAM5)] == [(4, 20)]
        assert brute_lift_orbits(stt, RAM5) == {(8, 16)}
        assert brute_lift_orbits(stl, RAM5) == {(4, 20)}

    def test_unramified_rank2_empty(self):
        for e in (0, 1):
            try:
                W = CuspidalRep.from_parameter(CyclicCharacter(9, 2, e, ell=2))
            except InvariantViolation:
                continue
            assert enumerate_distinguished_lifts(W, UNRAM3) == ()

    @pytest.mark.parametrize("q,n,ell,ram", [
        (3, 2, 2, True), (3, 4, 5, True), (5, 2, 3, True),
        (3, 2, 5, True), (9, 2, 2, False), (9, 1, 2, False),
    ])
    def test_matches_bruteforce(self, q, n, ell, ram):
        ext = QuadExtension(q if ram else 3, ram)
        modulus = CyclicCharacter(q, n, 0, ell=ell).modulus
        for e in range(modulus):
            try:
                W = CuspidalRep.from_parameter(CyclicCharacter(q, n, e, ell=ell))
            except InvariantViolation:
                continue
            got = {frobenius_orbit(w.parameter) for w in enumerate_distinguished_lifts(W, ext)}
            assert got == brute_lift_orbits(W, ext)


class TestLiftDecisions:
    def test_poulain_examples(self):
        # (q0=3, ell=7, n=3): order of 3 mod 7 is 6, even; a sigma-selfdual
        # non-supercuspidal exists: st_3 over a degree-1 character
        from cuspdist.battery import selfdual_cuspidal_reps

        ext = QuadExtension(3, False)
        found = [
            W
            for W in selfdual_cuspidal_reps(ext, 3, 7)
            if support_multiplicity(W) == 3
        ]
        assert found, "expected a selfdual st_3 over GL_3(F_9) mod 7"
        for W in found:
            assert lift_decision_unramified(W, ext) is True
            assert enumerate_distinguished_lifts(W, ext) != ()

    def test_poulain_even_rank_false(self):
        for e in range(5):
            try:
                W = CuspidalRep.from_parameter(CyclicCharacter(9, 2, e, ell=2))
            except InvariantViolation:
                continue
            assert lift_decision_unramified(W, UNRAM3) is False

    def test_poupin_examples(self):
        st4 = st_cuspidal(rep(3, 1, 0, ell=5), 4)
        assert lift_decision_ramified(st4, RAM3) is True
        st2 = st_cuspidal(rep(3, 1, 0, ell=2), 2)
        assert lift_decision_ramified(st2, RAM3) is True  # 3 = -1 mod 4
        st2_q5 = st_cuspidal(rep(5, 1, 0, ell=2), 2)
        assert lift_decision_ramified(st2_q5, RAM5) is False  # 5 = 1 mod 4
        assert enumerate_distinguished_lifts(st2_q5, RAM5) == ()

    def test_poupin_needs_selfdual(self):
        with pytest.raises(InvariantViolation, match="selfdual"):
            lift_decision_ramified(
                CuspidalRep.from_parameter(CyclicCharacter(7, 2, 1, ell=5)), RAM7
            )


class TestSerialization:
    def test_round_trip(self):
        W = st_cuspidal(rep(3, 1, 0, ell=5), 4)
        assert CuspidalRep.from_json(W.to_json()) == W
        assert W.to_json() == {"q": 3, "n": 4, "coeff": {"l": 5}, "exponent": 0}
