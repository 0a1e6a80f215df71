"""Ergodic probability measures, convex combinations, sigma-finite tails."""

import math
from fractions import Fraction

import pytest

from bratteli import (
    InvariantMeasure,
    NotAperiodicError,
    NotInDomainError,
    PathWord,
    StationaryDiagram,
    ZeroBlockError,
    borel_invariant,
    decompose,
    enumerate_ergodic,
    enumerate_infinite,
    heights,
    mass_proxy,
    measure_from_point,
    measure_of_cylinder,
    minimal_components,
    support_classes,
    tail_measure_of_cylinder,
    tail_valuation,
    truncated_extension,
)


class TestErgodicEnumeration:
    def test_triangular_chain_has_one_measure(self, b1):
        (mu,) = enumerate_ergodic(b1)
        assert mu.class_id == 0
        assert mu.lam.value == 2
        assert mu.xi == (1, 0)
        assert mu.support == frozenset({0})
        assert not mu.full_support

    def test_cylinder_values_scale_with_level(self, b1):
        (mu,) = enumerate_ergodic(b1)
        for n in range(1, 8):
            assert mu.value(n, 0) == Fraction(1, 2 ** (n - 1))
            assert mu.value(n, 1) == 0

    def test_measure_of_cylinder_checks_the_path(self, b1):
        (mu,) = enumerate_ergodic(b1)
        assert measure_of_cylinder(mu, PathWord((0, 0), (1,))) == Fraction(1, 2)
        with pytest.raises(ValueError):
            measure_of_cylinder(mu, PathWord((1, 0), (0,)))

    def test_source_class_measure_ignores_the_funnels(self, b2):
        (mu,) = enumerate_ergodic(b2)
        assert mu.class_id == 1
        assert mu.xi == (0, 1, 0)

    def test_three_measures_in_class_order(self, double_morse):
        mus = enumerate_ergodic(double_morse)
        assert [m.class_id for m in mus] == [0, 1, 2]
        assert [m.xi for m in mus] == [
            (Fraction(1, 2), Fraction(1, 2), 0, 0, 0),
            (0, 0, Fraction(1, 2), Fraction(1, 2), 0),
            (Fraction(2, 9), Fraction(1, 9), Fraction(2, 9), Fraction(1, 9), Fraction(1, 3)),
        ]
        assert [m.lam.value for m in mus] == [2, 2, 3]
        assert support_classes(mus[0]) == ((0,), False)
        assert support_classes(mus[2]) == ((0, 1, 2), True)

    def test_dominated_class_carries_no_probability_measure(self, mixed_chain):
        mus = enumerate_ergodic(mixed_chain)
        assert [m.class_id for m in mus] == [0, 1, 3]
        assert mus[1].xi == (Fraction(4, 9), Fraction(2, 9), Fraction(1, 3), 0, 0)
        assert mus[2].xi == (Fraction(1, 4), Fraction(1, 8), Fraction(1, 4),
                             Fraction(1, 8), Fraction(1, 4))

    def test_level_totals_are_one(self, double_morse, mixed_chain):
        for d in (double_morse, mixed_chain):
            for mu in enumerate_ergodic(d):
                for n in range(1, 7):
                    h = heights(d, n).values
                    assert sum(h[v] * mu.value(n, v) for v in range(5)) == 1

    def test_periodic_diagram_is_refused(self):
        with pytest.raises(NotAperiodicError) as exc:
            enumerate_ergodic(StationaryDiagram(((1,),)))
        assert exc.value.witness_class == 0


class TestInvariantCombinations:
    def test_point_on_an_extreme_ray(self, double_morse):
        mu = measure_from_point(double_morse, (Fraction(2, 9), Fraction(1, 9),
                                               Fraction(2, 9), Fraction(1, 9),
                                               Fraction(1, 3)))
        assert mu.coefficients == (0, 0, 1)
        assert mu.is_exact

    def test_mixture_recovers_its_coefficients(self, double_morse):
        p = (Fraction(1, 4), Fraction(1, 4), Fraction(1, 4), Fraction(1, 4), 0)
        mu = measure_from_point(double_morse, p)
        assert mu.coefficients == (Fraction(1, 2), Fraction(1, 2), 0)
        assert mu.p_vector(1) == p

    def test_p_vectors_chain_down_through_the_incidence(self, double_morse):
        p = (Fraction(1, 4), Fraction(1, 4), Fraction(1, 4), Fraction(1, 4), 0)
        mu = measure_from_point(double_morse, p)
        a = decompose(double_morse).a_matrix
        for n in range(1, 6):
            nxt = mu.p_vector(n + 1)
            cur = mu.p_vector(n)
            assert tuple(sum(a[v][w] * nxt[w] for w in range(5))
                         for v in range(5)) == cur

    def test_rejects_vectors_off_the_simplex(self, double_morse):
        with pytest.raises(NotInDomainError):
            measure_from_point(double_morse, (1, 1, 0, 0, 0))  # mass 2
        with pytest.raises(NotInDomainError):
            measure_from_point(double_morse, (1, 0, 0, 0, 0))  # outside the cone

    def test_combination_validation(self, b1):
        (mu,) = enumerate_ergodic(b1)
        with pytest.raises(ValueError):
            InvariantMeasure((mu,), (Fraction(1, 2),))
        with pytest.raises(ValueError):
            InvariantMeasure((mu,), (1, 1))


class TestSigmaFinite:
    def test_divergent_funnel_above_the_carrying_class(self, b1):
        (nu,) = enumerate_infinite(b1)
        assert nu.class_id == 1
        assert nu.lam.value == 2
        assert nu.base == (math.inf, 1)
        assert not nu.atomic
        assert nu.kind == "sigma-finite"
        for n in range(1, 8):
            assert nu.value(n, 1) == Fraction(1, 2 ** (n - 1))
            assert nu.value(n, 0) == math.inf

    def test_two_tails_around_a_central_source(self, b2):
        tails = enumerate_infinite(b2)
        assert [(nu.class_id, nu.base) for nu in tails] == [
            (0, (1, math.inf, 0)),
            (2, (0, math.inf, 1)),
        ]

    def test_fully_distinguished_diagram_has_no_tails(self, double_morse):
        assert enumerate_infinite(double_morse) == []

    def test_dominated_middle_class(self, mixed_chain):
        (nu,) = enumerate_infinite(mixed_chain)
        assert nu.class_id == 2
        assert nu.base == (math.inf, math.inf, 0, 1, 0)
        assert tail_measure_of_cylinder(nu, PathWord((3,))) == 1

    def test_single_loop_class_gives_an_atomic_tail(self, atomic_tail):
        (nu,) = enumerate_infinite(atomic_tail)
        assert nu.atomic
        assert nu.kind == "sigma-finite-atomic"
        assert nu.base == (math.inf, 1)
        assert nu.lam.value == 1
        assert [nu.value(n, 1) for n in (1, 3, 9)] == [1, 1, 1]
        assert enumerate_infinite(atomic_tail, include_atomic=False) == []

    def test_zero_block_classes_are_skipped_but_passed_through(self):
        # vertex 1 lies on no cycle: its class has the zero block
        d = StationaryDiagram(((2, 1, 0), (0, 0, 1), (0, 0, 2)))
        dec = decompose(d)
        assert [c.is_zero for c in dec.classes] == [False, True, False]
        (nu,) = enumerate_infinite(d)
        assert nu.class_id == 0
        assert nu.base == (1, Fraction(1, 2), math.inf)
        with pytest.raises(ZeroBlockError):
            tail_valuation(dec, 1)

    def test_valuation_on_a_distinguished_class_matches_its_ray(self, b1):
        dec = decompose(b1)
        lam, y, base = tail_valuation(dec, 0)
        assert lam.value == 2 and y == (1,) and base == (1, 0)


class TestMassAndTruncation:
    def test_distinguished_mass_stays_bounded(self, b1):
        dec = decompose(b1)
        assert [mass_proxy(dec, 0, n) for n in range(1, 9)] == [1] * 8

    def test_non_distinguished_mass_diverges(self, b1):
        dec = decompose(b1)
        values = [mass_proxy(dec, 1, n) for n in range(1, 12)]
        assert all(b > a for a, b in zip(values, values[1:]))
        assert values == [Fraction(n + 1, 2) for n in range(1, 12)]

    def test_truncated_extension_climbs_to_the_limit(self, b1):
        dec = decompose(b1)
        series = [truncated_extension(dec, 1, m) for m in range(1, 12)]
        # on the carrying class the series is already exact
        assert all(abs(s[1] - 1.0) < 1e-12 for s in series)
        # where the limit is infinite it grows without bound
        firsts = [s[0] for s in series]
        assert all(b > a for a, b in zip(firsts, firsts[1:]))
        assert firsts[-1] > 5

    def test_zero_block_is_rejected(self):
        dec = decompose(StationaryDiagram(((2, 1, 0), (0, 0, 1), (0, 0, 2))))
        with pytest.raises(ZeroBlockError):
            mass_proxy(dec, 1, 3)
        with pytest.raises(ZeroBlockError):
            truncated_extension(dec, 1, 3)


class TestInvariants:
    def test_minimal_components_are_the_unreached_classes(self, b1, b2, double_morse):
        assert minimal_components(b1) == (0,)
        assert minimal_components(b2) == (1,)
        assert minimal_components(double_morse) == (0, 1)

    def test_borel_invariant_counts_distinguished_classes(
            self, b1, b2, double_morse, mixed_chain):
        assert borel_invariant(b1) == 1
        assert borel_invariant(b2) == 1
        assert borel_invariant(double_morse) == 3
        assert borel_invariant(mixed_chain) == 3

    def test_borel_invariant_requires_aperiodicity(self):
        with pytest.raises(NotAperiodicError):
            borel_invariant(StationaryDiagram(((1,),)))
