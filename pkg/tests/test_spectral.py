"""Class decomposition, Perron data, distinguished classes, cone membership."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bratteli import (
    AmbiguousComparison,
    NotDistinguishedError,
    NumericValue,
    PrimitivityError,
    StationaryDiagram,
    ZeroBlockError,
    aperiodicity_check,
    check_primitive,
    core_membership,
    decompose,
    distinguished_classes,
    distinguished_eigenvector,
    imprimitivity_index,
    perron_pair,
    positivity_power,
    spectral_radius,
    telescope_to_primitive,
)
from bratteli.spectral import nv_compare

from conftest import random_diagram


class TestNumericValue:
    def test_exact_vs_approx_flags(self):
        assert NumericValue.exact(5).is_exact
        assert not NumericValue.approx(2.5, 1e-12).is_exact

    def test_render_integers_fractions_floats(self):
        assert NumericValue.exact(5).render() == "5"
        assert NumericValue.exact(Fraction(3, 2)).render() == "3/2"
        assert "±" in NumericValue.approx(2.414, 1e-13).render()

    def test_as_float(self):
        assert NumericValue.exact(Fraction(1, 4)).as_float == 0.25

    def test_compare_exact_is_a_total_order(self):
        two, three = NumericValue.exact(2), NumericValue.exact(3)
        assert nv_compare(two, three) == -1
        assert nv_compare(three, two) == 1
        assert nv_compare(two, NumericValue.exact(2)) == 0

    def test_compare_refuses_ambiguous_approximations(self):
        close = NumericValue.approx(2.0 + 1e-12, 1e-13)
        with pytest.raises(AmbiguousComparison):
            nv_compare(close, NumericValue.exact(2))
        assert nv_compare(NumericValue.approx(2.5, 1e-13), NumericValue.exact(2)) == 1


class TestPerronData:
    def test_rational_dominant_root_is_exact(self):
        lam, vec = perron_pair([[1, 2], [3, 2]])
        assert lam.is_exact and lam.value == 4
        assert vec[0] * 3 == vec[1] * 2  # eigenvector direction (2, 3)
        assert all(x > 0 for x in vec)

    def test_symmetric_block(self):
        lam, vec = perron_pair([[1, 1], [1, 1]])
        assert lam.value == 2 and vec[0] == vec[1]

    def test_irrational_root_reports_certified_float(self):
        lam, vec = perron_pair([[1, 1], [2, 1]])
        assert not lam.is_exact
        assert abs(lam.as_float - (1 + math.sqrt(2))) < 1e-10
        assert lam.residual_bound < 1e-10
        assert all(x > 0 for x in vec)

    def test_zero_block_has_radius_zero(self):
        assert spectral_radius([[0]]).value == 0

    def test_imprimitivity_index(self):
        assert imprimitivity_index([[1, 1], [1, 1]]) == 1
        assert imprimitivity_index([[0, 1], [1, 0]]) == 2
        assert imprimitivity_index([[0, 1, 0], [0, 0, 1], [1, 0, 0]]) == 3
        with pytest.raises(ZeroBlockError):
            imprimitivity_index([[0]])


class TestDecomposition:
    def test_triangular_two_class_chain(self, b1):
        dec = decompose(b1)
        assert [(c.vertices, c.rho.value, c.distinguished) for c in dec.classes] == [
            ((0,), 2, True),
            ((1,), 2, False),
        ]
        assert dec.access == ((True, True), (False, True))
        assert dec.initial_classes == (0,)
        assert dec.final_classes == (1,)
        assert dec.accessors_of(1) == (0,)
        assert dec.accessors_of(0) == ()

    def test_central_source_class(self, b2):
        dec = decompose(b2)
        assert [c.vertices for c in dec.classes] == [(0,), (1,), (2,)]
        assert [c.distinguished for c in dec.classes] == [False, True, False]
        assert dec.initial_classes == (1,)
        assert sorted(dec.final_classes) == [0, 2]
        assert dec.fnf_permutation[0] == 1  # source class leads the triangular order

    def test_block_lower_triangular_permutation(self, b1):
        dec = decompose(b1)
        perm = dec.fnf_permutation
        f = b1.incidence
        for i in range(2):
            for j in range(2):
                if dec.class_of[perm[i]] != dec.class_of[perm[j]] and i < j:
                    assert f[perm[i]][perm[j]] == 0

    def test_two_dominant_sources_and_a_funnel(self, double_morse):
        dec = decompose(double_morse)
        assert [c.vertices for c in dec.classes] == [(0, 1), (2, 3), (4,)]
        assert [c.rho.value for c in dec.classes] == [2, 2, 3]
        assert distinguished_classes(dec) == (0, 1, 2)
        assert dec.initial_classes == (0, 1)

    def test_middle_class_dominated_on_one_side(self, mixed_chain):
        dec = decompose(mixed_chain)
        assert [c.vertices for c in dec.classes] == [(0, 1), (2,), (3,), (4,)]
        assert [c.rho.value for c in dec.classes] == [2, 3, 2, 4]
        # the rho=2 singleton sits under the rho=2 pair, so it is not distinguished
        assert distinguished_classes(dec) == (0, 1, 3)


class TestDistinguishedEigenvector:
    def test_minimal_class_vector_is_supported_on_itself(self, double_morse):
        dec = decompose(double_morse)
        eig = distinguished_eigenvector(dec, 0)
        assert eig.xi == (Fraction(1, 2), Fraction(1, 2), 0, 0, 0)
        assert eig.support_classes == frozenset({0})
        assert eig.is_exact

    def test_funnel_class_vector_spans_everything(self, double_morse):
        dec = decompose(double_morse)
        eig = distinguished_eigenvector(dec, 2)
        assert eig.xi == (Fraction(2, 9), Fraction(1, 9), Fraction(2, 9),
                          Fraction(1, 9), Fraction(1, 3))
        assert eig.support_classes == frozenset({0, 1, 2})

    def test_eigen_equation_holds(self, mixed_chain):
        dec = decompose(mixed_chain)
        for alpha in distinguished_classes(dec):
            eig = distinguished_eigenvector(dec, alpha)
            lam = eig.lam.value
            a = dec.a_matrix
            for v in range(5):
                assert sum(a[v][w] * eig.xi[w] for w in range(5)) == lam * eig.xi[v]
            assert sum(eig.xi) == 1

    def test_irrational_case_comes_back_as_floats(self, intro_sigma):
        from bratteli import diagram_from_substitution

        dec = decompose(diagram_from_substitution(intro_sigma).base)
        (alpha,) = distinguished_classes(dec)
        eig = distinguished_eigenvector(dec, alpha)
        assert not eig.is_exact
        assert abs(eig.lam.as_float - (1 + math.sqrt(2))) < 1e-9
        assert abs(sum(eig.xi) - 1) < 1e-9

    def test_rejects_non_distinguished_class(self, b1):
        dec = decompose(b1)
        with pytest.raises(NotDistinguishedError):
            distinguished_eigenvector(dec, 1)


class TestPrimitivity:
    def test_check_primitive_raises_with_the_needed_power(self):
        dec = decompose(StationaryDiagram(((0, 1), (1, 0))))
        with pytest.raises(PrimitivityError) as exc:
            check_primitive(dec)
        assert exc.value.power == 2

    def test_telescope_to_primitive(self):
        d = StationaryDiagram(((0, 1), (1, 0)))
        base, q = telescope_to_primitive(d)
        assert q == 2
        assert base.incidence == ((1, 0), (0, 1))
        already, q1 = telescope_to_primitive(StationaryDiagram(((1, 1), (1, 1))))
        assert q1 == 1 and already.incidence == ((1, 1), (1, 1))

    def test_positivity_power(self, b1):
        assert positivity_power(b1) == 1
        assert positivity_power(StationaryDiagram(((1, 1), (1, 0)))) == 2


class TestCoreMembership:
    def test_extreme_ray_is_in_core(self, b1):
        dec = decompose(b1)
        verdict = core_membership(dec, (Fraction(2), Fraction(0)))
        assert verdict.kind == "in-core"
        assert verdict.coefficients == (2,)

    def test_vector_leaving_the_cone_is_rejected_with_a_level(self, b1):
        dec = decompose(b1)
        assert core_membership(dec, (0, 1)).kind == "not-in-core"
        assert core_membership(dec, (0, 1)).k == 1
        # feasible for two preimage steps, impossible from the third on
        verdict = core_membership(dec, (1, 1))
        assert verdict.kind == "not-in-core" and verdict.k == 3

    def test_rejects_floats_and_bad_lengths(self, b1):
        dec = decompose(b1)
        with pytest.raises(TypeError):
            core_membership(dec, (1.0, 0.0))
        with pytest.raises(ValueError):
            core_membership(dec, (1, 0, 0))

    def test_large_diagrams_answer_unknown_instead_of_guessing(self):
        n = 13
        rows = [[2 if i == j else (1 if j == i - 1 else 0) for j in range(n)]
                for i in range(n)]
        dec = decompose(StationaryDiagram(tuple(tuple(r) for r in rows)))
        x = tuple(Fraction(0) if i < n - 1 else Fraction(1) for i in range(n))
        assert core_membership(dec, x).kind == "unknown"


class TestAperiodicity:
    def test_expanding_diagrams_pass(self, b1, b2, double_morse):
        for d in (b1, b2, double_morse):
            assert aperiodicity_check(decompose(d))

    def test_single_loop_source_fails(self):
        result = aperiodicity_check(decompose(StationaryDiagram(((1,),))))
        assert result.kind == "not-aperiodic"
        assert result.witness_class == 0

    def test_fed_single_loop_is_fine(self, atomic_tail):
        assert aperiodicity_check(decompose(atomic_tail)).kind == "aperiodic"

    def test_defective_diagram_is_invalid(self):
        result = aperiodicity_check(decompose(StationaryDiagram(((0, 0), (1, 1)))))
        assert result.kind == "invalid"
        assert not result


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_decomposition_partitions_and_orders(seed):
    import random

    d = random_diagram(random.Random(seed))
    dec = decompose(d)
    seen = sorted(v for c in dec.classes for v in c.vertices)
    assert seen == list(range(d.n_vertices))
    assert sorted(dec.fnf_permutation) == list(range(d.n_vertices))
    k = len(dec.classes)
    for b in range(k):
        assert dec.access[b][b]
        for c in range(k):
            if not dec.access[b][c]:
                continue
            for e in range(k):
                if dec.access[c][e]:
                    assert dec.access[b][e]
    perm = dec.fnf_permutation
    for i in range(d.n_vertices):
        for j in range(i + 1, d.n_vertices):
            if dec.class_of[perm[i]] != dec.class_of[perm[j]]:
                assert d.incidence[perm[i]][perm[j]] == 0
