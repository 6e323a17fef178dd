"""Tests of the dense operator/superoperator layer."""

import numpy as np
import pytest
import scipy.linalg

from shelvesim.operators import (
    DegenerateSteadyStateError,
    DensityMatrix,
    DimensionMismatchError,
    OperatorMatrix,
    SuperOperator,
    build_liouvillian,
    dissipator,
    expectation,
    kron,
    propagate,
    propagator_matrix,
    steady_state,
    unvectorize,
    vectorize,
)

RNG = np.random.default_rng(20240611)


def sigma(i, j, dim=3):
    m = np.zeros((dim, dim), dtype=complex)
    m[i, j] = 1.0
    return OperatorMatrix(m)


def two_level_decay(gamma=1.0):
    """H = 0, single collapse |g><e| at rate gamma; basis (g, e)."""
    h = OperatorMatrix(np.zeros((2, 2)))
    return build_liouvillian(h, [(sigma(0, 1, 2), gamma)])


def random_liouvillian(dim, rng):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h = OperatorMatrix((a + a.conj().T) / 2)
    collapses = []
    for _ in range(2):
        c = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        collapses.append((OperatorMatrix(c), rng.uniform(0.1, 2.0)))
    return build_liouvillian(h, collapses)


class TestKron:
    def test_identity_case(self):
        out = kron(OperatorMatrix.identity(2), OperatorMatrix.identity(3))
        assert out.dim == 6
        np.testing.assert_array_equal(out.entries, np.eye(6))

    def test_diagonal_case(self):
        out = kron(OperatorMatrix(np.diag([1.0, 2.0])), OperatorMatrix.identity(2))
        np.testing.assert_array_equal(out.entries, np.diag([1.0, 1.0, 2.0, 2.0]))

    def test_cascade_coupling_nonzeros(self):
        # |e><g| on the emitter times the two-quantum lowering operator,
        # expanded index by index: combined index = 3*atom + fock.
        out = kron(sigma(2, 0), OperatorMatrix(np.diag(np.sqrt([1.0, 2.0]), 1)))
        assert out.dim == 9
        expected = np.zeros((9, 9), dtype=complex)
        # atom e=2, g=0; fock pairs (0<-1), (1<-2) with weights 1, sqrt(2)
        expected[2 * 3 + 0, 0 * 3 + 1] = 1.0
        expected[2 * 3 + 1, 0 * 3 + 2] = np.sqrt(2.0)
        np.testing.assert_allclose(out.entries, expected, atol=0)

    def test_rejects_nonsquare(self):
        with pytest.raises(ValueError):
            OperatorMatrix(np.zeros((2, 3)))


class TestDissipator:
    def test_decay_of_excited_state(self):
        d = dissipator(sigma(0, 1, 2), 0.7)
        rho_e = np.zeros((2, 2), dtype=complex)
        rho_e[1, 1] = 1.0
        out = unvectorize(d.entries @ vectorize(rho_e), 2)
        expected = 0.7 * np.diag([1.0, -1.0]).astype(complex)
        np.testing.assert_allclose(out, expected, atol=1e-15)

    def test_zero_rate_is_zero(self):
        d = dissipator(sigma(1, 2), 0.0)
        assert np.max(np.abs(d.entries)) == 0.0

    def test_photon_decay(self):
        b = OperatorMatrix(np.diag(np.sqrt([1.0, 2.0]), 1))
        d = dissipator(b, 2.0)
        rho1 = np.zeros((3, 3), dtype=complex)
        rho1[1, 1] = 1.0
        out = unvectorize(d.entries @ vectorize(rho1), 3)
        expected = 2.0 * np.diag([1.0, -1.0, 0.0]).astype(complex)
        np.testing.assert_allclose(out, expected, atol=1e-15)

    def test_negative_rate_rejected(self):
        with pytest.raises(ValueError):
            dissipator(sigma(0, 1, 2), -1.0)


class TestBuildLiouvillian:
    def test_pure_exponential_decay(self):
        l = two_level_decay(gamma=1.3)
        rho0 = DensityMatrix.pure(2, 1)
        for tau in (0.3, 1.0, 2.7):
            rho = propagate(l, rho0, tau)
            assert rho.entries[1, 1].real == pytest.approx(np.exp(-1.3 * tau), abs=1e-12)

    def test_trace_preservation_left_null_vector(self):
        for dim in (2, 3, 4):
            l = random_liouvillian(dim, RNG)
            tr = vectorize(np.eye(dim))
            assert np.max(np.abs(tr.conj() @ l.entries)) <= 1e-10

    def test_hermiticity_preservation_on_random_matrices(self):
        l = random_liouvillian(3, RNG)
        for _ in range(5):
            x = RNG.normal(size=(3, 3)) + 1j * RNG.normal(size=(3, 3))
            lx = unvectorize(l.entries @ vectorize(x), 3)
            lx_dag_of_xdag = unvectorize(l.entries @ vectorize(x.conj().T), 3)
            assert np.max(np.abs(lx.conj().T - lx_dag_of_xdag)) <= 1e-12

    def test_closed_system_conserves_trace_and_purity(self):
        h = OperatorMatrix(np.array([[0.0, 0.4], [0.4, 1.0]], dtype=complex))
        l = build_liouvillian(h, [])
        rho0 = DensityMatrix(np.array([[0.75, 0.25], [0.25, 0.25]], dtype=complex))
        rho = propagate(l, rho0, 10.0)
        assert abs(np.trace(rho.entries) - 1) <= 1e-10
        purity0 = np.trace(rho0.entries @ rho0.entries).real
        purity = np.trace(rho.entries @ rho.entries).real
        assert purity == pytest.approx(purity0, abs=1e-10)

    def test_rejects_non_hermitian_hamiltonian(self):
        h = OperatorMatrix(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))
        with pytest.raises(ValueError, match="Hermitian"):
            build_liouvillian(h, [])

    def test_rejects_dimension_mismatch(self):
        h = OperatorMatrix(np.zeros((2, 2)))
        with pytest.raises(DimensionMismatchError):
            build_liouvillian(h, [(sigma(0, 1, 3), 1.0)])


class TestSteadyState:
    def test_pure_decay_dark_state(self):
        rho = steady_state(two_level_decay())
        np.testing.assert_allclose(rho.entries, np.diag([1.0, 0.0]), atol=1e-12)

    def test_residual_bound(self):
        for dim in (2, 3, 4):
            l = random_liouvillian(dim, RNG)
            rho = steady_state(l)
            resid = np.max(np.abs(l.entries @ vectorize(rho.entries)))
            norm = np.max(np.abs(l.entries).sum(axis=1))
            assert resid <= 1e-9 * norm

    def test_degenerate_manifold_raises(self):
        # two decoupled decay channels: the dark manifold is two-dimensional
        h = OperatorMatrix(np.zeros((4, 4)))
        c1 = sigma(0, 1, 4)
        c2 = sigma(2, 3, 4)
        l = build_liouvillian(h, [(c1, 1.0), (c2, 1.0)])
        with pytest.raises(DegenerateSteadyStateError):
            steady_state(l)

    def test_matches_long_time_propagation(self):
        l = random_liouvillian(3, RNG)
        rho_ss = steady_state(l)
        w = np.linalg.eigvals(l.entries)
        gap = np.min(-w.real[np.abs(w) > 1e-10])
        t_relax = 50.0 / gap
        mixed = np.diag([0.2, 0.5, 0.3]).astype(complex)
        mixed[0, 1] = mixed[1, 0] = 0.1
        for rho0 in (DensityMatrix.pure(3, 0), DensityMatrix.pure(3, 2), DensityMatrix(mixed)):
            rho_t = propagate(l, rho0, t_relax)
            assert np.max(np.abs(rho_t.entries - rho_ss.entries)) <= 1e-6


class TestPropagate:
    def test_exponential_decay_point(self):
        l = two_level_decay(gamma=1.0)
        rho = propagate(l, DensityMatrix.pure(2, 1), 1.0)
        assert rho.entries[1, 1].real == pytest.approx(np.exp(-1.0), abs=1e-12)

    def test_semigroup_property(self):
        l = random_liouvillian(3, RNG)
        rho0 = DensityMatrix.pure(3, 1)
        one = propagate(l, rho0, 0.7 + 1.9)
        two = propagate(l, propagate(l, rho0, 0.7), 1.9)
        assert np.max(np.abs(one.entries - two.entries)) <= 1e-9

    def test_closed_rabi_oscillation(self):
        om = 1.7
        h = OperatorMatrix(om * np.array([[0, 1], [1, 0]], dtype=complex))
        l = build_liouvillian(h, [])
        rho0 = DensityMatrix.pure(2, 0)
        for tau in np.linspace(0.0, 3.0, 7):
            rho = propagate(l, rho0, tau)
            assert rho.entries[1, 1].real == pytest.approx(np.sin(om * tau) ** 2, abs=1e-9)

    def test_trace_and_hermiticity_preserved_long_times(self):
        l = random_liouvillian(3, RNG)
        rho0 = DensityMatrix.pure(3, 2)
        for tau in (0.0, 1.0, 100.0, 1000.0):
            rho = propagate(l, rho0, tau)
            assert abs(np.trace(rho.entries) - 1) <= 1e-9
            assert np.max(np.abs(rho.entries - rho.entries.conj().T)) <= 1e-9

    def test_negative_tau_rejected(self):
        with pytest.raises(ValueError):
            propagate(two_level_decay(), DensityMatrix.pure(2, 0), -0.1)

    def test_eig_and_expm_paths_agree(self):
        for _ in range(4):
            l = random_liouvillian(3, RNG)
            tau = 1.3
            via_eig = propagator_matrix(l, tau)
            via_expm = scipy.linalg.expm(l.entries * tau)
            assert np.max(np.abs(via_eig - via_expm)) <= 1e-8

    def test_defective_generator_falls_back_to_expm(self):
        # An exact Jordan block has an unusable eigenbasis; the propagator
        # must route through the matrix exponential and stay correct.
        jordan = np.array([[-1.0, 1.0], [0.0, -1.0]], dtype=complex)
        sup = SuperOperator(dim=2, entries=np.kron(np.eye(2), jordan))
        out = propagator_matrix(sup, 0.5)
        expected = scipy.linalg.expm(sup.entries * 0.5)
        assert np.max(np.abs(out - expected)) <= 1e-12
        assert sup._cache["eig"] is None  # fallback path was taken


class TestExpectation:
    def test_identity_trace(self):
        rho = DensityMatrix(np.diag([0.25, 0.25, 0.5]).astype(complex))
        assert expectation(OperatorMatrix.identity(3), rho) == pytest.approx(1.0)

    def test_projector_on_eigenstate(self):
        rho = DensityMatrix.pure(3, 2)
        assert expectation(sigma(2, 2), rho) == pytest.approx(1.0)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            expectation(OperatorMatrix.identity(2), DensityMatrix.pure(3, 0))

    def test_hermitian_observable_has_tiny_imaginary_part(self):
        l = random_liouvillian(3, RNG)
        rho = steady_state(l)
        a = RNG.normal(size=(3, 3)) + 1j * RNG.normal(size=(3, 3))
        herm = OperatorMatrix((a + a.conj().T) / 2)
        assert abs(expectation(herm, rho).imag) <= 1e-10


class TestDensityMatrixInvariants:
    def test_rejects_bad_trace(self):
        with pytest.raises(ValueError, match="trace"):
            DensityMatrix(np.diag([0.5, 0.6]).astype(complex))

    def test_rejects_non_hermitian(self):
        m = np.array([[0.5, 0.3], [0.0, 0.5]], dtype=complex)
        with pytest.raises(ValueError, match="Hermitian"):
            DensityMatrix(m)

    def test_rejects_negative_eigenvalues(self):
        with pytest.raises(ValueError, match="eigenvalue"):
            DensityMatrix(np.diag([1.5, -0.5]).astype(complex))

    def test_entries_immutable(self):
        rho = DensityMatrix.pure(2, 0)
        with pytest.raises(ValueError):
            rho.entries[0, 0] = 0.5
