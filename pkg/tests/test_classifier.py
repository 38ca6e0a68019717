"""Tests for the quartic classifier: branch coverage, congruence helpers,
Laplacian signatures, numeric verdicts, and report determinism."""

from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import _data as data
import _oracles as oracles
from eikq.classifier import (
    SCHEMA_VERSION,
    VERDICT_INCONCLUSIVE,
    VERDICT_ISOPARAMETRIC,
    VERDICT_NOT_EIKONAL,
    VERDICT_PRIMITIVE,
    ClassificationReport,
    classify,
    compute_tau,
    congruent_primitive,
    laplacian_signature,
)
from eikq.constructors import (
    NormalFormData,
    assemble_from_normal_form,
    make_canonical_quartic,
    make_primitive,
)
from eikq.matrices import RationalMatrix, random_rational_orthogonal
from eikq.polyring import Polynomial, rational, substitute_linear


class TestClassifyExact:
    def test_corpus(self):
        for f, (verdict, fields) in zip(data.corpus(), data.CORPUS_EXPECTED):
            report = classify(f)
            assert report.verdict == verdict
            assert report.arithmetic == "exact"
            assert report.residual == 0.0
            for key, value in fields.items():
                assert getattr(report, key) == value, (key, report)

    def test_canonical_grid(self):
        for n in range(2, 7):
            for k in range(n // 2 + 1):
                report = classify(make_canonical_quartic(n, k))
                assert report.verdict == VERDICT_PRIMITIVE
                assert report.dim_h == k

    def test_folding_above_half(self):
        # dim H = 4 in R^5 is congruent to dim H = 1
        report = classify(make_primitive(4, 5, 4))
        assert report.dim_h == 1

    def test_negated_input(self):
        report = classify(-make_canonical_quartic(4, 1))
        assert report.verdict == VERDICT_PRIMITIVE
        assert report.dim_h == 1
        assert report.arithmetic == "exact"

    def test_single_variable(self):
        report = classify(Polynomial.monomial(1, (4,)))
        assert report.verdict == VERDICT_PRIMITIVE
        assert report.dim_h == 0

    def test_isoparametric_report(self):
        report = classify(assemble_from_normal_form(data.isoparametric_data()))
        assert report.verdict == VERDICT_ISOPARAMETRIC
        assert (report.p, report.q) == (3, 2)
        assert (report.m1, report.m2) == (1, 1)
        assert (report.nu, report.mu) == (1, 1)
        assert report.laplacian_constant == "0"

    def test_q1_identity_pencil(self):
        # A = I is an involution: raw dim H = (p + trace)/2 + 1 = 3, folds to 1
        d = NormalFormData(2, 1, (RationalMatrix.identity(2),), Polynomial.zero(3))
        f = assemble_from_normal_form(d)
        report = classify(f)
        assert report.verdict == VERDICT_PRIMITIVE
        assert report.dim_h == 1

    def test_q1_negated_identity_pencil(self):
        d = NormalFormData(
            2, 1, (RationalMatrix.identity(2).scale(-1),), Polynomial.zero(3)
        )
        report = classify(assemble_from_normal_form(d))
        assert report.verdict == VERDICT_PRIMITIVE
        assert report.dim_h == 1  # raw (p - 2)/2 + 1 = 1

    def test_rotation_argument(self):
        f = assemble_from_normal_form(data.involution_data())
        u = random_rational_orthogonal(4, 5)
        rotated = classify(substitute_linear(f, u), rotation=u.transpose())
        assert rotated.to_json_dict() == classify(f).to_json_dict()

    def test_exact_only_needs_position_or_rotation(self):
        f = make_canonical_quartic(4, 1)
        g = substitute_linear(f, random_rational_orthogonal(4, 7))
        with pytest.raises(ValueError, match="rotation"):
            classify(g, allow_float=False)

    def test_non_quartic_rejected(self):
        with pytest.raises(ValueError):
            classify(Polynomial.monomial(2, (2, 0)))
        with pytest.raises(ValueError):
            classify(Polynomial.zero(3))

    @settings(max_examples=8, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=10 ** 6))
    def test_congruence_invariance_property(self, seed):
        f = make_canonical_quartic(4, 2)
        u = random_rational_orthogonal(4, seed)
        rotated = classify(substitute_linear(f, u), rotation=u.transpose())
        assert rotated.verdict == VERDICT_PRIMITIVE
        assert rotated.dim_h == 2
        assert rotated.arithmetic == "exact"


class TestClassifyNumeric:
    def test_blunt_rejection(self):
        report = classify(Polynomial.monomial(2, (4, 0)))
        assert report.verdict == VERDICT_NOT_EIKONAL
        assert report.arithmetic == "exact"
        assert report.residual == 48.0

    def test_inconclusive_band(self):
        f = make_canonical_quartic(3, 1) + rational(1, 10 ** 8) * Polynomial.monomial(
            3, (4, 0, 0)
        )
        report = classify(f)
        assert report.verdict == VERDICT_INCONCLUSIVE
        assert report.arithmetic == "float"
        assert 1e-9 < report.residual < 1e-6

    def test_float_path_on_rationalized_rotation(self):
        import numpy as np

        f = make_canonical_quartic(4, 1)
        angle = 0.9
        rot = np.eye(4)
        rot[0, 0] = rot[3, 3] = np.cos(angle)
        rot[0, 3] = -np.sin(angle)
        rot[3, 0] = np.sin(angle)
        g = substitute_linear(f, RationalMatrix.from_float(rot))
        report = classify(g)
        assert report.verdict == VERDICT_PRIMITIVE
        assert report.arithmetic == "float"
        assert report.residual < 1e-9
        assert report.dim_h == 1

    def test_near_exact_perturbation_accepted_as_float(self):
        f = make_canonical_quartic(3, 1) + rational(1, 10 ** 12) * Polynomial.monomial(
            3, (4, 0, 0)
        )
        report = classify(f)
        assert report.verdict == VERDICT_PRIMITIVE
        assert report.arithmetic == "float"
        assert 0 < report.residual < 1e-9


class TestCongruentPrimitive:
    @pytest.mark.parametrize(
        "n,d1,d2,expected",
        [
            (4, 1, 3, True),
            (4, 1, 1, True),
            (4, 1, 2, False),
            (4, 0, 4, True),
            (2, 0, 1, False),
            (6, 2, 4, True),
            (6, 2, 3, False),
        ],
    )
    def test_table(self, n, d1, d2, expected):
        assert congruent_primitive(n, d1, d2) is expected

    def test_validation(self):
        with pytest.raises(ValueError):
            congruent_primitive(0, 0, 0)
        with pytest.raises(ValueError):
            congruent_primitive(3, 4, 1)
        with pytest.raises(ValueError):
            congruent_primitive(3, 1, -1)


class TestLaplacianSignature:
    def test_diagonal_exact_values(self):
        # laplacian of the n = 6, k = 2 canonical quartic is -32 |x_K|^2
        sig = laplacian_signature(make_canonical_quartic(6, 2))
        assert sig == ((-32, 2), (0, 4))

    def test_congruent_forms_share_signature(self):
        assert laplacian_signature(make_primitive(4, 6, 2)) == laplacian_signature(
            make_primitive(4, 6, 4)
        )
        assert laplacian_signature(make_primitive(4, 6, 2)) != laplacian_signature(
            make_primitive(4, 6, 3)
        )

    def test_harmonic_quartic(self):
        f = assemble_from_normal_form(data.isoparametric_data())
        assert laplacian_signature(f) == ((0, 6),)

    def test_agreement_with_congruence_predicate(self):
        for n in range(2, 7):
            sigs = {d: laplacian_signature(make_primitive(4, n, d))
                    for d in range(n + 1)}
            for d1 in range(n + 1):
                for d2 in range(n + 1):
                    same = sigs[d1] == sigs[d2]
                    assert same == congruent_primitive(n, d1, d2)

    def test_closed_form_spectrum(self):
        # eigenvalue 16d + 8 - 12n on H, 4n - 16d + 8 on the complement
        n, d = 7, 2
        sig = laplacian_signature(make_primitive(4, n, d))
        assert sig == ((16 * d + 8 - 12 * n, d), (4 * n - 16 * d + 8, n - d))

    def test_float_grouping_under_rotation(self):
        f = make_canonical_quartic(5, 1)
        u = random_rational_orthogonal(5, 13)
        exact = laplacian_signature(f)
        rotated = laplacian_signature(f, rotation=u)
        assert [m for _, m in rotated] == [m for _, m in exact]
        for (got, _), (want, _) in zip(rotated, exact):
            assert abs(float(got) - float(want)) < 1e-6

    def test_matches_sympy_laplacian(self):
        f = make_canonical_quartic(4, 1)
        lap = oracles.laplacian_sympy(f)
        import sympy

        xs = oracles.symbols(4)
        ours = laplacian_signature(f)
        expected = sorted(
            (sympy.Rational(lap.coeff(x ** 2)) for x in xs), key=float
        )
        flattened = [v for v, m in ours for _ in range(m)]
        assert [float(e) for e in expected] == [float(v) for v in flattened]

    def test_non_quartic_rejected(self):
        with pytest.raises(ValueError):
            laplacian_signature(Polynomial.monomial(2, (2, 0)))


class TestTau:
    def test_zero_pencil(self):
        tau = compute_tau(data.zero_pencil_data().pencil, 2)
        assert tau.is_zero
        assert tau.max_abs == 0.0

    def test_nonzero_pencil(self):
        tau = compute_tau(data.isoparametric_data().pencil, 3)
        assert not tau.is_zero
        assert tau.max_abs == 2.0  # the off-diagonal form 2 xi1 xi2
        assert tau.components[0] == Polynomial(3, {(2, 0, 0): 1, (0, 2, 0): -1})


class TestReports:
    def test_json_key_order(self):
        report = classify(make_canonical_quartic(3, 1))
        payload = report.to_json_dict()
        assert list(payload)[0] == "schema_version"
        assert payload["schema_version"] == SCHEMA_VERSION

    def test_json_deterministic(self):
        a = json.dumps(classify(make_canonical_quartic(4, 2)).to_json_dict())
        b = json.dumps(classify(make_canonical_quartic(4, 2)).to_json_dict())
        assert a == b

    def test_summary_lines(self):
        report = classify(assemble_from_normal_form(data.isoparametric_data()))
        lines = report.summary_lines()
        assert lines[0] == "verdict: isoparametric"
        assert any("(m1, m2) = (1, 1)" in line for line in lines)

    def test_report_is_frozen(self):
        report = ClassificationReport(VERDICT_PRIMITIVE, 3, "exact", 0.0)
        with pytest.raises(Exception):
            report.verdict = "other"
