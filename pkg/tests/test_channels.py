import math
import re

import numpy as np
import pytest

from absep import channels as ch
from absep.linalg import (
    ContractError,
    haar_unitary,
    maximally_entangled,
    partial_trace,
    projector,
    purity,
    random_density_matrix,
    random_pure_state,
)
from absep.mub import UnsupportedDimension, mub_basis, weyl_operator, weyl_operators
from absep.states import Status

RNG = np.random.default_rng(0)

SAMPLES = [
    ch.Depolarizing(3, 0.3),
    ch.Depolarizing(2, -0.9),
    ch.TracingMap(3),
    ch.UnitalQubit(0.3, -0.9, 0.5),
    ch.GeneralizedPauli(3, 0.1, (0.5, 0.2, 0.1, 0.1)),
    ch.GeneralizedPauli(2, -0.5, (0.5, 0.5, 0.5)),
    ch.TraceIdTranspose(3, 0.5, -0.8),
    ch.BipartiteDepolarizing(2, 3, 0.5, 1.0, -0.7),
    ch.LocalProduct((ch.UnitalQubit(0.9, -0.2, 0.1), ch.Depolarizing(2, -0.8))),
    ch.OneSided(ch.Depolarizing(2, 0.3), 2),
]


class TestMub:
    @pytest.mark.parametrize("d", [2, 3, 5, 7])
    def test_unbiased_and_orthonormal(self, d):
        b = mub_basis(d)
        assert len(b.bases) == d + 1
        for J, B in enumerate(b.bases):
            assert np.allclose(B.conj().T @ B, np.eye(d), atol=1e-12)
            for K in range(J):
                assert np.allclose(np.abs(b.bases[K].conj().T @ B) ** 2, 1 / d, atol=1e-9)

    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_weyl_orthogonality(self, d):
        ops = weyl_operators(mub_basis(d))
        assert len(ops) == d * d - 1
        G = np.array([[np.trace(A.conj().T @ B) for B in ops] for A in ops])
        assert np.allclose(G, d * np.eye(len(ops)), atol=1e-8)

    def test_qubit_weyl_are_paulis(self):
        b = mub_basis(2)
        for J in range(1, 4):
            W = weyl_operator(b, J)
            assert np.allclose(W @ W, np.eye(2))
            assert abs(np.trace(W)) < 1e-12

    def test_prime_power_rejected(self):
        with pytest.raises(UnsupportedDimension):
            mub_basis(4)

    def test_index_range(self):
        with pytest.raises(ContractError):
            weyl_operator(mub_basis(3), 5)


class TestApply:
    @pytest.mark.parametrize("c", SAMPLES, ids=lambda c: c.family)
    def test_trace_and_hermiticity(self, c):
        for _ in range(20):
            out = ch.apply(c, random_density_matrix(c.dim, RNG))
            assert abs(np.trace(out) - 1) < 1e-12
            assert np.allclose(out, out.conj().T, atol=1e-12)
            assert np.linalg.eigvalsh(out)[0] >= -1e-9

    @pytest.mark.parametrize("c", SAMPLES, ids=lambda c: c.family)
    def test_superoperator_consistency(self, c):
        S = ch.superoperator_matrix(c)
        for _ in range(10):
            rho = random_density_matrix(c.dim, RNG)
            assert np.allclose(ch.unvec(S @ ch.vec(rho), c.dim), ch.apply(c, rho), atol=1e-10)

    def test_depolarizing_extremes(self):
        rho = random_density_matrix(3, RNG)
        assert np.allclose(ch.apply(ch.Depolarizing(3, 1.0), rho), rho)
        assert np.allclose(ch.apply(ch.Depolarizing(3, 0.0), rho), np.eye(3) / 3)

    def test_identity_superoperator(self):
        assert np.allclose(ch.superoperator_matrix(ch.identity_channel(3)), np.eye(9))

    def test_tracing_superoperator(self):
        S = ch.superoperator_matrix(ch.TracingMap(2))
        assert np.allclose(S @ ch.vec(np.diag([1.0, 0.0])), ch.vec(np.eye(2) / 2))

    def test_werner_holevo_pure_real(self):
        psi = RNG.standard_normal(4)
        psi /= np.linalg.norm(psi)
        P = np.outer(psi, psi)
        assert np.allclose(ch.apply(ch.TraceIdTranspose(4, 0, -1), P), (np.eye(4) - P) / 3)

    def test_dimension_mismatch(self):
        with pytest.raises(ContractError):
            ch.apply(ch.Depolarizing(2, 0.5), np.eye(3) / 3)

    @pytest.mark.parametrize(
        "c, word",
        [
            (ch.Depolarizing(3, -0.6), "1/(d-1)"),
            (ch.UnitalQubit(1.2, 0, 0), "|l1|"),
            (ch.TraceIdTranspose(3, -1.5, 0), "1 + alpha"),
            (ch.GeneralizedPauli(3, 0.5, (0.1, 0.1, 0.1, 0.1)), "trace preservation"),
            (ch.GeneralizedPauli(3, 0.5, (0.6, -0.1, 0.0, 0.0)), "t_J >= 0"),
            (ch.BipartiteDepolarizing(2, 2, 0, 0, -2.0), "positivity"),
        ],
    )
    def test_validation_names_bound(self, c, word):
        with pytest.raises(ContractError, match=re.escape(word)):
            c.validate()

    def test_unitality(self):
        for c in (ch.UnitalQubit(0.2, 0.3, -0.4), ch.GeneralizedPauli(3, 0.1, (0.5, 0.2, 0.1, 0.1))):
            assert np.allclose(ch.apply(c, np.eye(c.dim) / c.dim), np.eye(c.dim) / c.dim, atol=1e-14)

    def test_depolarizing_covariance(self):
        c = ch.Depolarizing(4, 0.37)
        for s in range(20):
            U = haar_unitary(4, s)
            rho = random_density_matrix(4, RNG)
            lhs = ch.apply(c, U @ rho @ U.conj().T)
            assert np.allclose(lhs, U @ ch.apply(c, rho) @ U.conj().T, atol=1e-9)

    def test_local_product_matches_kron(self):
        a, b = ch.UnitalQubit(0.5, -0.2, 0.9), ch.Depolarizing(3, 0.4)
        c = ch.LocalProduct((a, b))
        x, y = random_density_matrix(2, RNG), random_density_matrix(3, RNG)
        assert np.allclose(ch.apply(c, np.kron(x, y)), np.kron(ch.apply(a, x), ch.apply(b, y)))


class TestSerialisation:
    @pytest.mark.parametrize("c", SAMPLES, ids=lambda c: c.family)
    def test_roundtrip(self, c):
        assert ch.channel_from_dict(c.to_dict()) == c

    def test_unknown(self):
        with pytest.raises(ch.UnknownFamily):
            ch.channel_from_dict({"family": "nope"})
        with pytest.raises(ch.UnknownFamily):
            ch.channel_from_dict({"family": "depolarizing", "d": 2})
        with pytest.raises(ch.UnknownFamily):
            ch.channel_from_dict([1, 2])


class TestChoi:
    @pytest.mark.parametrize("d", [2, 3])
    def test_depolarizing(self, d):
        lo = -1 / (d * d - 1)
        assert ch.is_completely_positive(ch.Depolarizing(d, lo)).status is Status.HOLDS
        assert ch.is_completely_positive(ch.Depolarizing(d, 1.0)).status is Status.HOLDS
        assert ch.is_completely_positive(ch.Depolarizing(d, lo - 0.01)).status is Status.FAILS

    def test_identity_unital(self):
        assert ch.is_completely_positive(ch.UnitalQubit(1, 1, 1)).status is Status.HOLDS
        assert ch.is_completely_positive(ch.UnitalQubit(1, 1, -1)).status is Status.FAILS

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_ctit_region(self, d):
        grid = np.linspace(-1, 2, 31)
        for a in grid:
            for b in grid:
                c = ch.TraceIdTranspose(d, a, b)
                try:
                    c.validate()
                except ContractError:
                    continue
                expect = b <= 1 + 1e-12 and 1 + b >= -1e-12 and 1 + b + d * a >= -1e-12
                got = ch.is_completely_positive(c).status is Status.HOLDS
                assert got == expect, (a, b)

    def test_ctit_stated_region_inside(self):
        # alpha >= -1/d and -(1 + d alpha) <= beta <= 1 (with 1 + beta >= 0) is CP
        d = 3
        for a in np.linspace(-1 / d, 2, 9):
            for b in np.linspace(max(-(1 + d * a), -1), 1, 9):
                assert ch.is_completely_positive(ch.TraceIdTranspose(d, a, b)).status is Status.HOLDS


class TestPurity:
    def test_depolarizing_qubit(self):
        for q in (-1, -0.3, 0, 0.5, 1):
            assert math.isclose(ch.max_output_purity(ch.Depolarizing(2, q)).value, (1 + q * q) / 2)

    def test_product_of_qubit_depolarizers(self):
        qs = (0.2, -0.1, 0.6)
        c = ch.LocalProduct(tuple(ch.Depolarizing(2, q) for q in qs))
        v = ch.max_output_purity(c)
        assert v.method == "closed_form"
        assert math.isclose(v.value, 2**-3 * math.prod(1 + q * q for q in qs))

    def test_generalized_pauli_axis(self):
        c = ch.GeneralizedPauli(3, 0.1, (0.5, 0.2, 0.1, 0.1))
        w = c.axis_weights
        assert math.isclose(ch.max_output_purity(c).value, max((1 + 2 * x * x) / 3 for x in w))

    def test_generalized_pauli_axis_output(self):
        c = ch.GeneralizedPauli(3, 0.1, (0.5, 0.2, 0.1, 0.1))
        b = mub_basis(3)
        for J in range(1, 5):
            for k in range(1, 4):
                psi = b.bases[J - 1][:, k - 1]
                assert np.allclose(ch.axis_output(c, J, k), ch.apply(c, projector(psi)), atol=1e-9)
        with pytest.raises(ContractError):
            ch.axis_output(c, 0, 1)

    def test_axis_output_extremes(self):
        c0 = ch.GeneralizedPauli(2, 0.0, (0.0, 0.5, 0.5))
        assert np.allclose(ch.axis_output(c0, 1, 1), np.eye(2) / 2)
        c1 = ch.GeneralizedPauli(2, 0.0, (1.0, 0.0, 0.0))
        assert np.allclose(ch.axis_output(c1, 1, 1), np.diag([1.0, 0.0]))

    def test_bipartite_formula(self):
        c = ch.BipartiteDepolarizing(2, 3, 0.7, -0.3, 1.1)
        for _ in range(30):
            psi = random_pure_state(6, RNG)
            mu = purity(partial_trace(projector(psi), 2, 3, "B"))
            out = ch.apply(c, projector(psi))
            assert abs(purity(out) - ch.bipartite_output_purity(c, mu)) < 1e-9

    @pytest.mark.parametrize("m, n", [(2, 2), (2, 3), (3, 2), (3, 3)])
    def test_entangled_spectrum(self, m, n):
        c = ch.BipartiteDepolarizing(m, n, 0.4, 1.3, -0.6)
        out = ch.apply(c, projector(maximally_entangled(m, n)))
        assert np.allclose(np.linalg.eigvalsh(out)[::-1], ch.entangled_spectrum(c))
        prod = np.zeros(m * n)
        prod[0] = 1
        out = ch.apply(c, projector(prod))
        assert np.allclose(np.linalg.eigvalsh(out)[::-1], ch.factorized_spectrum(c))

    def test_numeric_bounds(self):
        for c in SAMPLES:
            v = ch.numeric_max_purity(c, starts=8)
            assert 1 / c.dim - 1e-12 <= v.value <= 1 + 1e-12
            assert v.lower_bound_only

    def test_one_sided_numeric(self):
        c = ch.OneSided(ch.Depolarizing(2, 0.3), 2)
        v = ch.max_output_purity(c)
        assert v.method == "numeric"
        assert math.isclose(v.value, (1 + 0.09) / 2, abs_tol=1e-8)

    def test_ctit_closed_form_matches_numeric(self):
        for a, b in ((0.5, -0.8), (2.0, 1.0), (-0.5, 1.5), (0.0, -1.0)):
            c = ch.TraceIdTranspose(3, a, b)
            assert abs(ch.max_output_purity(c).value - ch.numeric_max_purity(c).value) < 1e-7

    def test_argmax_achieves_value(self):
        for c in SAMPLES[:-1]:
            v = ch.max_output_purity(c)
            if v.argmax is not None:
                assert math.isclose(purity(ch.apply(c, projector(v.argmax))), v.value, abs_tol=1e-9)

    def test_deterministic(self):
        c = ch.OneSided(ch.UnitalQubit(0.1, 0.5, -0.7), 2)
        assert ch.numeric_max_purity(c, seed=3).value == ch.numeric_max_purity(c, seed=3).value


class TestEntropy:
    def test_identity_and_tracing(self):
        assert ch.min_output_entropy(ch.identity_channel(3)).value == pytest.approx(0, abs=1e-12)
        assert ch.min_output_entropy(ch.TracingMap(4)).value == math.log(4)

    def test_depolarizing_half(self):
        v = ch.min_output_entropy(ch.Depolarizing(2, 0.5)).value
        assert v == pytest.approx(-(0.75 * math.log(0.75) + 0.25 * math.log(0.25)), abs=1e-12)
        assert v == pytest.approx(0.5623, abs=1e-4)

    def test_numeric_matches_closed_form(self):
        c = ch.Depolarizing(3, 0.4)
        assert ch.numeric_min_entropy(c).value == pytest.approx(ch.min_output_entropy(c).value, abs=1e-8)

    def test_unital_qubit(self):
        c = ch.UnitalQubit(0.2, -0.7, 0.4)
        h = ch.min_output_entropy(c).value
        p = (1 + 0.7) / 2
        assert h == pytest.approx(-(p * math.log(p) + (1 - p) * math.log(1 - p)), abs=1e-7)
        assert 0 <= h <= math.log(2)
