"""Tests for the construction routes: primitive family, canonical quartics,
normal-form data, assembly, serialization, and the pencil search."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import _data as data
import _oracles as oracles
from eikq.analysis import check_eikonal, check_structure_identities
from eikq.constructors import (
    InfeasibleParameters,
    NormalFormData,
    assemble_from_normal_form,
    make_canonical_quartic,
    make_primitive,
    normal_form_data_from_text,
    normal_form_data_to_text,
    search_isoparametric_pencil,
)
from eikq.matrices import RationalMatrix
from eikq.polyring import (
    PolyTextError,
    Polynomial,
    laplacian,
    radial_power,
    rational,
    substitute_linear,
)


class TestMakePrimitive:
    # Frozen from the sympy complex-expansion oracle: re((|xi| + i|eta|)^6)
    # with dim H = 1 in R^4 has 20 terms; these six pin the alternating
    # binomial pattern and the cross-block coefficients.
    FROZEN_G6_N4_D1 = {
        (6, 0, 0, 0): Fraction(1),
        (4, 2, 0, 0): Fraction(-15),
        (2, 2, 2, 0): Fraction(30),
        (0, 2, 2, 2): Fraction(-6),
        (2, 4, 0, 0): Fraction(15),
        (0, 6, 0, 0): Fraction(-1),
    }

    def test_frozen_g6_coefficients(self):
        h = make_primitive(6, 4, 1)
        assert len(h.terms) == 20
        for mono, expected in self.FROZEN_G6_N4_D1.items():
            assert h.coefficient(mono) == expected

    def test_degenerate_subspaces(self):
        # dim H = 0 leaves only the |eta|^(2k) block with the top sign
        assert make_primitive(4, 2, 0) == radial_power(2, 2)
        assert make_primitive(2, 2, 0) == -radial_power(2, 1)
        assert make_primitive(6, 2, 0) == -radial_power(2, 3)
        # dim H = n is the pure |xi|^g power
        assert make_primitive(4, 3, 3) == radial_power(3, 2)

    def test_quartic_is_canonical_split(self):
        # |xi|^4 - 6 |xi|^2 |eta|^2 + |eta|^4 = |x|^4 - 8 |xi|^2 |eta|^2
        for n in range(2, 6):
            for d in range(n // 2 + 1):
                assert make_primitive(4, n, d) == make_canonical_quartic(n, d)

    @pytest.mark.parametrize(
        "g,n,d",
        [(1, 3, 1), (2, 4, 2), (3, 3, 1), (4, 5, 3), (6, 3, 2), (6, 4, 1)],
    )
    def test_matches_complex_expansion_oracle(self, g, n, d):
        h = make_primitive(g, n, d)
        expected = oracles.primitive_expected(g, n, d)
        got = {m: Fraction(int(c.numerator), int(c.denominator))
               for m, c in h.terms.items()}
        assert got == expected

    @pytest.mark.parametrize("g", [1, 2, 3, 4, 6])
    def test_eikonal_small_grid(self, g):
        for n in (2, 3, 4):
            dims = [1] if g % 2 else range(n + 1)
            for d in dims:
                assert check_eikonal(make_primitive(g, n, d), g).is_zero

    def test_block_swap_symmetry(self):
        # exchanging the xi and eta blocks sends h_d to (-1)^(g/2) h_(n-d)
        for g, n, d in ((4, 5, 2), (2, 4, 1), (6, 4, 1)):
            perm = [[0] * n for _ in range(n)]
            for i in range(n):
                perm[i][(i + n - d) % n] = 1
            swapped = substitute_linear(make_primitive(g, n, d), RationalMatrix(perm))
            sign = -1 if (g // 2) % 2 else 1
            assert swapped == sign * make_primitive(g, n, n - d)

    def test_cubic_laplacian_constant(self):
        # laplacian of x^3 - 3 x |eta|^2 is 6 (2 - n) x, zero exactly at n = 2
        for n in (2, 3, 5, 10):
            h = make_primitive(3, n, 1)
            assert laplacian(h) == 6 * (2 - n) * Polynomial.variable(n, 0)
            expected = oracles.laplacian_sympy(h)
            assert oracles.to_sympy(laplacian(h)) == expected

    def test_validation(self):
        with pytest.raises(ValueError):
            make_primitive(0, 3, 1)
        with pytest.raises(ValueError):
            make_primitive(4, 0, 0)
        with pytest.raises(ValueError):
            make_primitive(4, 3, 4)
        with pytest.raises(ValueError):
            make_primitive(4, 3, -1)
        with pytest.raises(ValueError):
            make_primitive(3, 4, 2)  # odd degree needs dim H = 1

    @settings(max_examples=30, deadline=None)
    @given(
        g=st.sampled_from([2, 4, 6]),
        n=st.integers(min_value=2, max_value=5),
        d=st.integers(min_value=0, max_value=5),
    )
    def test_eikonal_property(self, g, n, d):
        if d > n:
            d = n
        assert check_eikonal(make_primitive(g, n, d), g).is_zero


class TestMakeCanonicalQuartic:
    def test_explicit_form(self):
        f = make_canonical_quartic(3, 1)
        head = Polynomial.variable(3, 0) ** 2
        tail = Polynomial.variable(3, 1) ** 2 + Polynomial.variable(3, 2) ** 2
        assert f == radial_power(3, 2) - 8 * head * tail

    def test_k_zero_is_radial(self):
        assert make_canonical_quartic(5, 0) == radial_power(5, 2)

    def test_eikonal(self):
        for n in range(2, 7):
            for k in range(n // 2 + 1):
                assert check_eikonal(make_canonical_quartic(n, k), 4).is_zero

    def test_validation(self):
        with pytest.raises(ValueError):
            make_canonical_quartic(0, 0)
        with pytest.raises(ValueError):
            make_canonical_quartic(4, 3)  # k must stay below n // 2
        with pytest.raises(ValueError):
            make_canonical_quartic(4, -1)


class TestNormalFormData:
    def test_valid(self):
        d = data.involution_data()
        assert (d.p, d.q) == (2, 1)
        assert d.dimension == 3
        assert d.ambient_dimension == 4

    def test_pencil_count_mismatch(self):
        with pytest.raises(ValueError, match="pencil matrices"):
            NormalFormData(2, 2, (RationalMatrix.zeros(2, 2),), Polynomial.zero(4))

    def test_pencil_must_be_symmetric(self):
        bad = RationalMatrix([[0, 1], [0, 0]])
        with pytest.raises(ValueError):
            NormalFormData(2, 1, (bad,), Polynomial.zero(3))

    def test_pencil_shape(self):
        with pytest.raises(ValueError):
            NormalFormData(3, 1, (RationalMatrix.zeros(2, 2),), Polynomial.zero(4))

    def test_theta3_ring(self):
        with pytest.raises(ValueError, match="p \\+ q variables"):
            NormalFormData(
                2, 1, (RationalMatrix.zeros(2, 2),), Polynomial.zero(4)
            )

    def test_theta3_block_degrees(self):
        # xi-degree 2, eta-degree 2 is homogeneous quartic but wrong blocks
        bad = Polynomial(3, {(2, 0, 2): 1})
        with pytest.raises(ValueError, match="xi-degree 3"):
            NormalFormData(2, 1, (RationalMatrix.zeros(2, 2),), bad)

    def test_theta3_inhomogeneous(self):
        bad = Polynomial(3, {(2, 1, 1): 1, (1, 0, 1): 1})
        with pytest.raises(ValueError):
            NormalFormData(2, 1, (RationalMatrix.zeros(2, 2),), bad)

    def test_negative_parameters(self):
        with pytest.raises(ValueError):
            NormalFormData(-1, 1, (), Polynomial.zero(0))


class TestAssemble:
    def test_involution_closed_form(self):
        assembled = assemble_from_normal_form(data.involution_data())
        assert assembled == data.closed_form_involution_quartic()

    def test_assembled_forms_are_eikonal(self):
        for d in (data.involution_data(), data.zero_pencil_data(),
                  data.isoparametric_data()):
            f = assemble_from_normal_form(d)
            assert f.dimension == d.ambient_dimension
            assert f.is_homogeneous(4)
            assert check_eikonal(f, 4).is_zero

    def test_isoparametric_is_harmonic(self):
        f = assemble_from_normal_form(data.isoparametric_data())
        assert laplacian(f).is_zero
        assert oracles.laplacian_sympy(f) == 0

    def test_eikonal_residual_matches_sympy(self):
        # same residual through an independent symbolic route
        f = assemble_from_normal_form(data.involution_data())
        assert oracles.eikonal_residual(f, 4) == 0
        g = assemble_from_normal_form(
            NormalFormData(2, 1, (RationalMatrix.identity(2).scale(2),),
                           Polynomial.zero(3))
        )
        ours = check_eikonal(g, 4).value
        assert oracles.to_sympy(ours) == oracles.eikonal_residual(g, 4)


class TestSerialization:
    def test_round_trip(self):
        for d in (data.involution_data(), data.isoparametric_data(),
                  data.zero_pencil_data()):
            text = normal_form_data_to_text(d)
            back = normal_form_data_from_text(text)
            assert back == d

    def test_header_layout(self):
        text = normal_form_data_to_text(data.involution_data())
        lines = text.splitlines()
        assert lines[0] == "2 1"
        assert lines[2] == "1 0"
        assert lines[3] == "0 -1"

    def test_comments_and_blanks_ignored(self):
        text = normal_form_data_to_text(data.involution_data())
        noisy = "# leading comment\n\n" + text.replace("2 1", "2 1  # header")
        assert normal_form_data_from_text(noisy) == data.involution_data()

    def test_empty_input(self):
        with pytest.raises(PolyTextError, match="empty"):
            normal_form_data_from_text("# only a comment\n")

    def test_bad_header_line_number(self):
        with pytest.raises(PolyTextError, match="line 2") as err:
            normal_form_data_from_text("# title\n2\n")
        assert err.value.line_number == 2

    def test_bad_matrix_row_line_number(self):
        with pytest.raises(PolyTextError, match="line 3"):
            normal_form_data_from_text("2 1\n1 0\n0 -1 5\nn 3\n")

    def test_non_rational_entry(self):
        with pytest.raises(PolyTextError, match="rationals"):
            normal_form_data_from_text("2 1\n1 zero\n0 -1\nn 3\n")

    def test_truncated_input(self):
        with pytest.raises(PolyTextError, match="unexpected end"):
            normal_form_data_from_text("2 1\n1 0\n")

    def test_missing_theta3(self):
        with pytest.raises(PolyTextError, match="theta_3"):
            normal_form_data_from_text("2 1\n1 0\n0 -1\n")

    def test_theta3_wrong_ring(self):
        with pytest.raises(PolyTextError, match="3 variables"):
            normal_form_data_from_text("2 1\n1 0\n0 -1\nn 4\n")


class TestSearch:
    def test_infeasible_rank(self):
        with pytest.raises(InfeasibleParameters, match="rank"):
            search_isoparametric_pencil(1, 1, 1)

    def test_infeasible_trace_relation(self):
        with pytest.raises(InfeasibleParameters, match="p \\+ 1 - q"):
            search_isoparametric_pencil(4, 1, 1)

    def test_validation(self):
        with pytest.raises(ValueError):
            search_isoparametric_pencil(-1, 1, 0)
        with pytest.raises(ValueError):
            search_isoparametric_pencil(2, 1, 0, budget=0)

    def test_zero_pencil_family_found(self):
        hits = search_isoparametric_pencil(1, 1, 0)
        assert len(hits) >= 1
        for hit in hits:
            assert hit.pencil[0].is_zero()
            assert check_eikonal(assemble_from_normal_form(hit), 4).is_zero

    def test_involution_family_found(self):
        hits = search_isoparametric_pencil(2, 1, 1)
        assert len(hits) >= 1
        assert any(not h.pencil[0].is_zero() for h in hits)
        for hit in hits:
            assert check_eikonal(assemble_from_normal_form(hit), 4).is_zero
            assert check_structure_identities(hit).all_zero

    def test_budget_cuts_off_deterministically(self):
        assert search_isoparametric_pencil(3, 2, 1, budget=1) == []

    def test_results_deterministic(self):
        first = search_isoparametric_pencil(2, 1, 1)
        second = search_isoparametric_pencil(2, 1, 1)
        assert first == second
