"""The polynomial-to-rank-realizability reduction, both directions."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hblpoly import (
    PolySystem,
    Subspace,
    bounded_witness_search,
    encode,
    extract_solution,
    to_basic_set,
    verify_witness,
    witness_from_solution,
)
from hblpoly.diophantine import InvalidSolutionError, InvalidWitnessError


def system_x_minus_2():
    return PolySystem.from_term_lists(1, [[((1,), 1), ((0,), -2)]])


def system_x_squared_minus_x():
    return PolySystem.from_term_lists(1, [[((2,), 1), ((1,), -1)]])


class TestToBasicSet:
    def test_linear_system(self):
        basic = to_basic_set(system_x_minus_2())
        assert basic.num_vars == 2
        assert basic.monomials == ((0,), (1,))
        assert basic.mults == ()
        # the pin and the lifted equation
        assert basic.affine == ((-1, ((0, 1),)), (0, ((0, -2), (1, 1))))
        assert basic.projection == (1,)

    def test_quadratic_system(self):
        basic = to_basic_set(system_x_squared_minus_x())
        assert basic.num_vars == 3
        assert basic.mults == ((1, 1, 2),)
        assert (0, ((1, -1), (2, 1))) in basic.affine

    def test_empty_system_rejected(self):
        with pytest.raises(ValueError):
            to_basic_set(PolySystem(1, ()))

    def test_rational_coefficients_scaled(self):
        system = PolySystem.from_term_lists(1, [[((1,), Fraction(1, 2)), ((0,), Fraction(-1, 3))]])
        basic = to_basic_set(system)
        # lcm(2,3) = 6: the lifted equation is 3 u_x - 2 u_0
        assert (0, ((0, -2), (1, 3))) in basic.affine

    def test_lift_and_projection_property(self):
        system = system_x_squared_minus_x()
        basic = to_basic_set(system)
        for x, solves in [((Fraction(0),), True), ((Fraction(1),), True), ((Fraction(2),), False)]:
            lifted = basic.lift_point(x)
            assert basic.check_solution(lifted) == solves == system.is_solution(x)


class TestEncodingShapes:
    def test_linear_example(self):
        basic = to_basic_set(system_x_minus_2())
        enc = encode(basic, 1, (Fraction(2),))
        assert (enc.mu, enc.nu, enc.rho) == (9, 6, 2)
        assert enc.rho_list == (1,) * 6 + (0,) * 3
        assert all(m.rows == 6 and m.cols == 6 for m in enc.maps)

    def test_quadratic_example(self):
        basic = to_basic_set(system_x_squared_minus_x())
        enc = encode(basic, 1, (Fraction(1),))
        q, k, ell = 3, 1, 2
        assert enc.nu == 2 * q + 2 == 8
        assert enc.mu == 4 + q + 1 + k + ell == 11
        assert enc.rho_list == (1,) * (4 + q + k) + (0,) * (1 + ell)

    def test_zero_query(self):
        basic = to_basic_set(system_x_minus_2())
        enc = encode(basic, 0, ())
        assert enc.mu == 4 + 2 + 0 + 2 and enc.a == ()

    def test_query_too_long(self):
        basic = to_basic_set(system_x_minus_2())
        with pytest.raises(ValueError):
            encode(basic, 2, (Fraction(1), Fraction(2)))

    @given(st.integers(0, 10_000))
    @settings(max_examples=25)
    def test_shape_formulas(self, seed):
        rng = random.Random(seed)
        system, _ = _random_planted_system(rng)
        basic = to_basic_set(system)
        t = rng.randint(0, len(basic.projection))
        enc = encode(basic, t, tuple(Fraction(rng.randint(-3, 3)) for _ in range(t)))
        q, k, ell = basic.num_vars, len(basic.mults), len(basic.affine)
        assert enc.mu == 4 + q + t + k + ell
        assert enc.nu == 2 * q + 2
        assert enc.rho == 2
        assert enc.rho_list == (1,) * (4 + q + k) + (0,) * (t + ell)
        for m in enc.maps:
            assert m.is_integral()


class TestWitnesses:
    def test_canonical_witness(self):
        basic = to_basic_set(system_x_minus_2())
        w = witness_from_solution(basic, (Fraction(1), Fraction(2)))
        assert w.dim == 2
        assert w.basis.entries[0] == tuple(map(Fraction, (1, 1, 2, 0, 0, 0)))
        assert w.basis.entries[1] == tuple(map(Fraction, (0, 0, 0, 1, 1, 2)))

    def test_invalid_solution_rejected(self):
        basic = to_basic_set(system_x_minus_2())
        with pytest.raises(InvalidSolutionError):
            witness_from_solution(basic, (Fraction(1), Fraction(3)))

    def test_verify_and_mismatch(self):
        basic = to_basic_set(system_x_minus_2())
        w = witness_from_solution(basic, (Fraction(1), Fraction(2)))
        enc2 = encode(basic, 1, (Fraction(2),))
        enc3 = encode(basic, 1, (Fraction(3),))
        assert verify_witness(enc2, w)
        assert not verify_witness(enc3, w)

    def test_zero_subspace_fails(self):
        basic = to_basic_set(system_x_minus_2())
        enc = encode(basic, 1, (Fraction(2),))
        assert not verify_witness(enc, Subspace.zero(6))

    def test_extract_round_trip(self):
        basic = to_basic_set(system_x_squared_minus_x())
        enc = encode(basic, 1, (Fraction(1),))
        w = witness_from_solution(basic, basic.lift_point((Fraction(1),)))
        prefix, full = extract_solution(enc, w)
        assert prefix == (Fraction(1),)
        assert basic.check_solution(full)

    def test_extract_rejects_bad_witness(self):
        basic = to_basic_set(system_x_minus_2())
        enc = encode(basic, 1, (Fraction(2),))
        with pytest.raises(InvalidWitnessError):
            extract_solution(enc, Subspace.full(6))


class TestBoundedSearch:
    def test_finds_small_witness(self):
        basic = to_basic_set(system_x_minus_2())
        enc = encode(basic, 1, (Fraction(2),))
        w = bounded_witness_search(enc, 2)
        assert w is not None and verify_witness(enc, w)

    def test_absent_for_unsolvable_query(self):
        basic = to_basic_set(system_x_minus_2())
        enc = encode(basic, 1, (Fraction(3),))
        assert bounded_witness_search(enc, 4) is None

    def test_zero_height_rejected(self):
        basic = to_basic_set(system_x_minus_2())
        enc = encode(basic, 1, (Fraction(2),))
        with pytest.raises(ValueError):
            bounded_witness_search(enc, 0)


def _random_planted_system(rng: random.Random):
    """A small polynomial system with a planted rational solution."""
    q = rng.randint(1, 3)
    planted = tuple(Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(q))
    polys = []
    for _ in range(rng.randint(1, 3)):
        terms = {}
        for _ in range(rng.randint(1, 3)):
            exps = tuple(rng.randint(0, 2) for _ in range(q))
            terms[exps] = terms.get(exps, Fraction(0)) + Fraction(
                rng.randint(-3, 3), rng.randint(1, 2)
            )
        value = Fraction(0)
        for exps, coeff in terms.items():
            term = coeff
            for x, e in zip(planted, exps):
                term *= x**e
            value += term
        zero_exps = (0,) * q
        terms[zero_exps] = terms.get(zero_exps, Fraction(0)) - value
        cleaned = [(e, c) for e, c in terms.items() if c != 0]
        if not cleaned:
            cleaned = [((0,) * q, Fraction(0))]  # replaced below
            continue
        polys.append(cleaned)
    if not polys:
        polys = [[((1,) + (0,) * (q - 1), Fraction(1)), ((0,) * q, -planted[0])]]
    return PolySystem.from_term_lists(q, polys), planted


class TestPlantedRoundTrips:
    @given(st.integers(0, 10_000))
    @settings(max_examples=25)
    def test_full_round_trip(self, seed):
        rng = random.Random(seed)
        system, planted = _random_planted_system(rng)
        assert system.is_solution(planted)
        basic = to_basic_set(system)
        lifted = basic.lift_point(planted)
        assert basic.check_solution(lifted)
        t = rng.randint(0, len(basic.projection))
        prefix = planted[:t]
        enc = encode(basic, t, prefix)
        w = witness_from_solution(basic, lifted)
        assert verify_witness(enc, w)
        got_prefix, got_full = extract_solution(enc, w)
        assert got_prefix == prefix
        assert basic.check_solution(got_full)

    def test_search_bridges_realizability(self):
        # a tiny planted instance is found by the bounded search itself
        system = PolySystem.from_term_lists(1, [[((1,), 2), ((0,), -2)]])  # 2x = 2
        basic = to_basic_set(system)
        enc = encode(basic, 1, (Fraction(1),))
        w = bounded_witness_search(enc, 2)
        assert w is not None
        prefix, full = extract_solution(enc, w)
        assert prefix == (Fraction(1),)


class TestJson:
    def test_system_round_trip(self):
        system = system_x_squared_minus_x()
        assert PolySystem.from_json(system.to_json()) == system

    def test_encoding_round_trip(self):
        basic = to_basic_set(system_x_minus_2())
        enc = encode(basic, 1, (Fraction(2),))
        from hblpoly import DiophEncoding

        assert DiophEncoding.from_json(enc.to_json()) == enc
