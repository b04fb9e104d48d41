import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuspdist.arith import (
    PrimePower,
    QuadExtension,
    WIDTH_LIMIT,
    check_width,
    mult_order,
    prime_power_parts,
    regular_orbit_count,
    split_prime_part,
)
from cuspdist.errors import InvariantViolation, WidthLimitExceeded


def order_by_iteration(b, modulus):
    # independent oracle: direct exponentiation loop
    x = b % modulus
    d = 1
    while x != 1:
        x = x * b % modulus
        d += 1
    return d


def count_orbits_by_enumeration(q, n):
    # independent oracle: walk every exponent mod q^n - 1 and count the
    # orbits of full size n under multiplication by q
    m = q**n - 1
    seen = [False] * m
    count = 0
    for e in range(m):
        if seen[e]:
            continue
        orbit = set()
        x = e
        while x not in orbit:
            orbit.add(x)
            seen[x] = True
            x = x * q % m
        if len(orbit) == n:
            count += 1
    return count


class TestMultOrder:
    def test_contract_examples(self):
        assert mult_order(3, 8) == 2  # 3^2 = 9 = 1 mod 8
        assert mult_order(3, 13) == 3 == order_by_iteration(3, 13)
        assert mult_order(9, 5) == 2 == order_by_iteration(9, 5)

    def test_non_coprime_rejected(self):
        with pytest.raises(InvariantViolation, match="coprime"):
            mult_order(6, 8)

    def test_bad_modulus_rejected(self):
        with pytest.raises(InvariantViolation):
            mult_order(3, 1)

    @given(st.integers(2, 400), st.integers(2, 400))
    @settings(max_examples=150, deadline=None)
    def test_matches_iteration_and_divides_group_order(self, b, modulus):
        import sympy

        if sympy.gcd(b, modulus) != 1:
            return
        d = mult_order(b, modulus)
        assert d == order_by_iteration(b, modulus)
        assert sympy.totient(modulus) % d == 0


class TestSplitPrimePart:
    def test_contract_examples(self):
        assert split_prime_part(80, 5) == (1, 16)
        assert split_prime_part(24, 3) == (1, 8)
        assert split_prime_part(8, 2) == (3, 1)

    @given(st.integers(1, 10**6), st.sampled_from([2, 3, 5, 7, 11, 13]))
    @settings(max_examples=150, deadline=None)
    def test_split_is_exact_and_idempotent(self, n, ell):
        a, rest = split_prime_part(n, ell)
        assert ell**a * rest == n
        assert rest % ell != 0
        assert split_prime_part(rest, ell) == (0, rest)

    def test_rejects_composite_ell(self):
        with pytest.raises(InvariantViolation):
            split_prime_part(10, 4)


class TestRegularOrbitCount:
    def test_contract_examples_against_enumeration(self):
        # expected values frozen from the enumeration oracle
        assert count_orbits_by_enumeration(3, 2) == 3
        assert count_orbits_by_enumeration(5, 2) == 10
        assert count_orbits_by_enumeration(9, 2) == 36
        assert regular_orbit_count(3, 2) == 3
        assert regular_orbit_count(5, 2) == 10
        assert regular_orbit_count(9, 2) == 36

    @pytest.mark.parametrize("q", [3, 5, 7, 9])
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_matches_enumeration_on_small_grid(self, q, n):
        if q**n - 1 > 10**5:
            pytest.skip("keep the pure-python oracle fast")
        assert regular_orbit_count(q, n) == count_orbits_by_enumeration(q, n)

    def test_even_q_rejected(self):
        with pytest.raises(InvariantViolation):
            regular_orbit_count(4, 2)


class TestWidthGuard:
    def test_pass_through(self):
        assert check_width(WIDTH_LIMIT) == WIDTH_LIMIT

    def test_rejects_oversize(self):
        with pytest.raises(WidthLimitExceeded):
            check_width(WIDTH_LIMIT + 1)

    def test_guard_applies_to_orbit_count(self):
        with pytest.raises(WidthLimitExceeded):
            regular_orbit_count(3, 131)


class TestDomainTypes:
    def test_prime_power(self):
        assert PrimePower.of(9) == PrimePower(3, 2)
        assert PrimePower.of(13).value == 13
        with pytest.raises(InvariantViolation):
            PrimePower.of(12)
        with pytest.raises(InvariantViolation):
            PrimePower.of(8)  # residual characteristic 2 excluded

    def test_prime_power_parts(self):
        assert prime_power_parts(49) == (7, 2)
        with pytest.raises(InvariantViolation):
            prime_power_parts(1)

    def test_quad_extension(self):
        assert QuadExtension(3, True).q == 3
        assert QuadExtension(3, False).q == 9
        assert QuadExtension(9, False).p == 3
        with pytest.raises(InvariantViolation):
            QuadExtension(6, True)
        roundtrip = QuadExtension.from_json(QuadExtension(5, False).to_json())
        assert roundtrip == QuadExtension(5, False)
