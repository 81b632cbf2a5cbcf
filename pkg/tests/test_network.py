import numpy as np
import pytest

from netforms import (
    AtomicMeasure,
    FormMatrix,
    Network,
    ValidationError,
    assemble,
    evaluate,
    is_markov,
    truncate_one,
    unit_contraction,
)
from netforms.random_networks import random_connected_network, random_markov_form

from conftest import edge_sum_energy


def quadratic_to_matrix(q, n):
    """Oracle: recover the matrix of a quadratic form by polarization."""
    A = np.zeros((n, n))
    basis = np.eye(n)
    for i in range(n):
        A[i, i] = q(basis[i])
    for i in range(n):
        for j in range(i + 1, n):
            A[i, j] = A[j, i] = (q(basis[i] + basis[j]) - q(basis[i]) - q(basis[j])) / 2.0
    return A


class TestAssemble:
    def test_single_edge_laplacian(self):
        A = assemble(Network(2, [(0, 1, 1.0)]))
        assert np.array_equal(A.matrix, [[1.0, -1.0], [-1.0, 1.0]])

    def test_killing_matches_quadratic_expansion(self):
        # E(f) = (f0 - f1)^2 + f0^2 + 2 f1^2, coefficients recovered by polarization
        expected = quadratic_to_matrix(
            lambda f: (f[0] - f[1]) ** 2 + f[0] ** 2 + 2.0 * f[1] ** 2, 2
        )
        A = assemble(Network(2, [(0, 1, 1.0)], killing=[1.0, 2.0]))
        assert np.array_equal(A.matrix, expected)
        assert np.array_equal(A.matrix, [[2.0, -1.0], [-1.0, 3.0]])

    def test_empty_edges_zero_form(self):
        A = assemble(Network(3))
        assert np.array_equal(A.matrix, np.zeros((3, 3)))

    def test_diagonal_reconstruction(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            net = random_connected_network(rng, n_max=12, with_killing=True)
            A = assemble(net)
            C = net.conductance_matrix()
            assert np.array_equal(np.diag(A.matrix), np.sum(C, axis=1) + net.killing)

    def test_duplicate_edge_named(self):
        with pytest.raises(ValidationError, match=r"edge #1: duplicate edge \(0, 1\)"):
            Network(2, [(0, 1, 1.0), (1, 0, 2.0)])

    def test_negative_conductance_named(self):
        with pytest.raises(ValidationError, match="edge #0.*must be finite and > 0"):
            Network(2, [(0, 1, -1.0)])

    def test_self_loop_rejected(self):
        with pytest.raises(ValidationError, match="self-loop"):
            Network(2, [(1, 1, 1.0)])

    def test_negative_killing_named(self):
        with pytest.raises(ValidationError, match=r"killing\[1\] = -0.5"):
            Network(2, [(0, 1, 1.0)], killing=[0.0, -0.5])

    def test_out_of_range_endpoint(self):
        with pytest.raises(ValidationError, match="out of range"):
            Network(2, [(0, 5, 1.0)])


class TestEvaluate:
    def test_single_edge_indicator(self, unit_edge):
        assert evaluate(unit_edge, [1.0, 0.0]) == 1.0

    def test_constant_is_null_without_killing(self, path3):
        assert abs(evaluate(path3, [3.0, 3.0, 3.0])) <= 1e-14

    def test_killing_constant(self):
        A = assemble(Network(2, [(0, 1, 1.0)], killing=[1.0, 2.0]))
        assert evaluate(A, [1.0, 1.0]) == 3.0

    def test_dimension_mismatch(self, unit_edge):
        with pytest.raises(ValidationError, match="length 2"):
            evaluate(unit_edge, [1.0, 0.0, 2.0])

    def test_matches_edge_sum_oracle(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            net = random_connected_network(rng, n_max=15, with_killing=True)
            A = assemble(net)
            f = rng.uniform(-2, 2, A.n)
            g = rng.uniform(-2, 2, A.n)
            scale = max(1.0, np.max(np.abs(A.matrix))) * 4.0 * A.n
            assert abs(evaluate(A, f, g) - edge_sum_energy(net, f, g)) <= 1e-12 * scale

    def test_bilinear_and_symmetric(self):
        rng = np.random.default_rng(3)
        A = random_markov_form(rng, n_max=10)
        f, g, h = rng.uniform(-1, 1, (3, A.n))
        s = max(1.0, np.max(np.abs(A.matrix))) * A.n
        assert abs(evaluate(A, f, g) - evaluate(A, g, f)) <= 1e-12 * s
        assert abs(evaluate(A, f + 2.0 * h, g) - evaluate(A, f, g) - 2.0 * evaluate(A, h, g)) <= 1e-12 * s


class TestContractions:
    def test_clamp(self):
        assert np.array_equal(unit_contraction([-0.5, 0.3, 1.7]), [0.0, 0.3, 1.0])

    def test_fixed_point(self):
        u = np.array([0.0, 0.4, 1.0])
        assert np.array_equal(unit_contraction(u), u)

    def test_constant_two(self):
        assert np.array_equal(unit_contraction([2.0, 2.0]), [1.0, 1.0])

    def test_truncate(self):
        assert np.array_equal(truncate_one([0.5, 2.0]), [0.5, 1.0])

    def test_truncate_nonpositive_fixed(self):
        u = np.array([-1.0, 0.0, -3.5])
        assert np.array_equal(truncate_one(u), u)

    def test_truncate_constant_one(self):
        assert np.array_equal(truncate_one([1.0, 1.0]), [1.0, 1.0])

    def test_energy_never_increases(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            A = random_markov_form(rng, n_max=20)
            u = rng.uniform(-2, 3, A.n)
            e_u = evaluate(A, u)
            assert evaluate(A, unit_contraction(u)) <= e_u + 1e-12 * max(1.0, abs(e_u))


class TestIsMarkov:
    def test_laplacian_is_markov(self, unit_edge):
        assert bool(is_markov(unit_edge))

    def test_positive_offdiagonal(self):
        rep = is_markov(FormMatrix(np.array([[1.0, 0.5], [0.5, 1.0]])))
        assert not rep
        assert any("off-diagonal" in v for v in rep.violations)

    def test_negative_row_sum(self):
        A = FormMatrix(np.array([[1.0, -2.0], [-2.0, 1.0]]))
        rep = is_markov(A)
        assert not rep
        assert any("row" in v for v in rep.violations)
        # brute-force confirmation: some u has E(u clamped) > E(u)
        rng = np.random.default_rng(5)
        found = False
        for _ in range(500):
            u = rng.uniform(-1, 2, 2)
            if evaluate(A, unit_contraction(u)) > evaluate(A, u) + 1e-12:
                found = True
                break
        assert found

    def test_assembled_forms_are_markov(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            assert bool(is_markov(random_markov_form(rng, n_max=15)))


class TestZeroEnergy:
    def test_rank_deficiency_is_one_when_connected(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            net = random_connected_network(rng, n_max=12, with_killing=False)
            A = assemble(net)
            eig = np.linalg.eigvalsh(A.matrix)
            assert eig[0] >= -1e-10 * max(1.0, np.max(np.abs(A.matrix)))
            assert abs(eig[0]) <= 1e-9 * max(1.0, np.max(np.abs(A.matrix)))
            if A.n > 1:
                assert eig[1] > 1e-8  # nonconstant functions carry energy


class TestTypes:
    def test_form_matrix_rejects_asymmetry(self):
        with pytest.raises(ValidationError, match="not symmetric"):
            FormMatrix(np.array([[1.0, 2.0], [1.0, 1.0]]))

    def test_form_matrix_rejects_nonsquare(self):
        with pytest.raises(ValidationError, match="square"):
            FormMatrix(np.zeros((2, 3)))

    def test_atomic_measure_total_and_flag(self):
        mu = AtomicMeasure([0.25, 0.75])
        assert mu.total == 1.0
        assert mu.everywhere_positive
        assert not AtomicMeasure([0.0, 1.0]).everywhere_positive

    def test_atomic_measure_rejects_negative(self):
        with pytest.raises(ValidationError, match=r"weight\[1\]"):
            AtomicMeasure([0.5, -0.1])

    def test_immutability(self, unit_edge):
        with pytest.raises(ValueError):
            unit_edge.matrix[0, 0] = 5.0
        net = Network(2, [(0, 1, 1.0)])
        with pytest.raises(AttributeError):
            net.vertices = ()
        with pytest.raises(ValueError):
            net.killing[0] = 1.0
