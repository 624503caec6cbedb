import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinqec.errors import (DuplicateLabel, InvalidChannel, LabelMismatch, TooLarge,
                            UnknownLabel)
from spinqec.quantum import (HADAMARD, KET0, KET1, KET_H, KET_MINUS, KET_PLUS, KET_V,
                             MAX_QUBITS, PAULI_X, PAULI_Y, PAULI_Z, DensityOperator,
                             PauliChannel, PureState, apply_diagonal,
                             apply_pauli_channel, apply_single_qubit,
                             apply_two_qubit_diagonal, measure_in_basis,
                             partial_trace, permute, photon, project_qubit, spin,
                             state_fidelity, tensor_product)

I2 = np.eye(2)
rng = np.random.default_rng(1234)


def kron(*ms):
    out = np.array([[1.0]])
    for m in ms:
        out = np.kron(out, m)
    return out


def embed(gate, k, n):
    return kron(*[gate if i == k else I2 for i in range(n)])


def random_state(n, seed):
    r = np.random.default_rng(seed)
    v = r.normal(size=2 ** n) + 1j * r.normal(size=2 ** n)
    return v / np.linalg.norm(v)


def random_density(n, seed):
    r = np.random.default_rng(seed)
    a = r.normal(size=(2 ** n, 2 ** n)) + 1j * r.normal(size=(2 ** n, 2 ** n))
    m = a @ a.conj().T
    return m / np.trace(m).real


LABELS3 = (photon(0), photon(1), spin(0))


class TestStates:
    def test_labels_and_order(self):
        s = PureState.basis(LABELS3, (1, 0, 1))
        assert s.amplitudes[0b101] == 1
        assert s.index(spin(0)) == 2
        with pytest.raises(UnknownLabel):
            s.index(spin(3))

    def test_duplicate_label_rejected(self):
        with pytest.raises(DuplicateLabel):
            PureState((photon(0), photon(0)), np.eye(4)[0])

    def test_too_large(self):
        labels = tuple(photon(i) for i in range(MAX_QUBITS + 1))
        with pytest.raises(TooLarge):
            PureState(labels, np.zeros(2 ** len(labels)))

    def test_product_matches_kron(self):
        s = PureState.product(LABELS3, (KET_PLUS, KET1, KET_MINUS))
        np.testing.assert_allclose(s.amplitudes, kron(KET_PLUS[:, None], KET1[:, None],
                                                      KET_MINUS[:, None])[:, 0])

    def test_norm_above_one_rejected(self):
        with pytest.raises(ValueError):
            PureState((photon(0),), np.array([1.0, 0.1]))

    def test_density_requires_hermitian(self):
        with pytest.raises(ValueError):
            DensityOperator((photon(0),), np.array([[0.5, 0.1], [0.2, 0.5]]))

    def test_immutable_amplitudes(self):
        s = PureState.basis((photon(0),), (0,))
        with pytest.raises(ValueError):
            s.amplitudes[0] = 0


class TestGates:
    @pytest.mark.parametrize("k", [0, 1, 2])
    @pytest.mark.parametrize("gate", [HADAMARD, PAULI_Y, np.diag([0.3, 0.9j])])
    def test_single_qubit_matches_kron(self, k, gate):
        psi = random_state(3, k)
        out = apply_single_qubit(PureState(LABELS3, psi), LABELS3[k], gate)
        np.testing.assert_allclose(out.amplitudes, embed(gate, k, 3) @ psi, atol=1e-14)
        rho = random_density(3, 10 + k)
        dm = apply_single_qubit(DensityOperator(LABELS3, rho), LABELS3[k], gate)
        U = embed(gate, k, 3)
        np.testing.assert_allclose(dm.matrix, U @ rho @ U.conj().T, atol=1e-14)

    def test_non_unitary_sets_flag(self):
        s = PureState.basis(LABELS3, (0, 0, 0))
        assert not apply_single_qubit(s, photon(0), HADAMARD).subnormalized
        assert apply_single_qubit(s, photon(0), np.diag([0.5, 1])).subnormalized

    def test_two_qubit_diagonal_order(self):
        # the first label is the most significant bit of the coefficient index
        coeffs = np.array([1, 2, 3, 4]) / 5
        psi = random_state(3, 7)
        out = apply_two_qubit_diagonal(PureState(LABELS3, psi), spin(0), photon(0), coeffs)
        diag = np.array([coeffs[2 * (b >> 0 & 1) + (b >> 2 & 1)] for b in range(8)])
        np.testing.assert_allclose(out.amplitudes, diag * psi, atol=1e-15)
        with pytest.raises(DuplicateLabel):
            apply_two_qubit_diagonal(PureState(LABELS3, psi), spin(0), spin(0), coeffs)

    def test_diagonal_on_density(self):
        coeffs = np.exp(1j * np.array([0.1, 0.7, -0.4, 2.0]))
        rho = random_density(3, 3)
        out = apply_diagonal(DensityOperator(LABELS3, rho), (photon(1), spin(0)), coeffs)
        D = np.diag(kron(np.eye(2), np.diag(coeffs)).diagonal())
        np.testing.assert_allclose(out.matrix, D @ rho @ D.conj().T, atol=1e-14)


class TestChannel:
    def test_matches_kraus_sum(self):
        ch = PauliChannel(0.05, 0.02, 0.1)
        rho = random_density(3, 5)
        out = apply_pauli_channel(DensityOperator(LABELS3, rho), photon(1), ch)
        ref = (1 - ch.p) * rho
        for w, P in ((ch.x, PAULI_X), (ch.y, PAULI_Y), (ch.z, PAULI_Z)):
            E = embed(P, 1, 3)
            ref = ref + w * E @ rho @ E.conj().T
        np.testing.assert_allclose(out.matrix, ref, atol=1e-14)
        assert out.trace == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("bad", [(-0.1, 0, 0), (0.6, 0.3, 0.2), (np.nan, 0, 0)])
    def test_invalid(self, bad):
        with pytest.raises(InvalidChannel):
            PauliChannel(*bad)

    def test_swap(self):
        assert PauliChannel(0.1, 0.2, 0.3).swapped_xz() == PauliChannel(0.3, 0.2, 0.1)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(0, 0.3), st.floats(0, 0.3), st.floats(0, 0.3), st.integers(0, 1000))
    def test_preserves_trace_and_positivity(self, x, y, z, seed):
        rho = DensityOperator(LABELS3, random_density(3, seed))
        out = apply_pauli_channel(rho, spin(0), PauliChannel(x, y, z))
        assert out.trace == pytest.approx(1.0, abs=1e-12)
        assert out.is_psd()


class TestReduction:
    def test_partial_trace_pure_vs_density(self):
        psi = PureState(LABELS3, random_state(3, 11))
        keep = (photon(0), spin(0))
        a = partial_trace(psi, keep)
        b = partial_trace(psi.to_density(), keep)
        np.testing.assert_allclose(a.matrix, b.matrix, atol=1e-14)
        # explicit index-sum oracle
        t = psi.amplitudes.reshape(2, 2, 2)
        ref = np.einsum("ajc,bjd->acbd", t, t.conj()).reshape(4, 4)
        np.testing.assert_allclose(a.matrix, ref, atol=1e-14)

    def test_partial_trace_of_product(self):
        r1, r2 = random_density(1, 1), random_density(2, 2)
        rho = DensityOperator(LABELS3, np.kron(r1, r2))
        np.testing.assert_allclose(partial_trace(rho, [photon(0)]).matrix, r1, atol=1e-14)
        np.testing.assert_allclose(partial_trace(rho, [photon(1), spin(0)]).matrix, r2,
                                   atol=1e-14)

    def test_permute_round_trip(self):
        psi = PureState(LABELS3, random_state(3, 2))
        p = permute(psi, (spin(0), photon(0), photon(1)))
        assert p.amplitudes[0b100] == psi.amplitudes[0b001]
        back = permute(p, LABELS3)
        np.testing.assert_array_equal(back.amplitudes, psi.amplitudes)
        with pytest.raises(LabelMismatch):
            permute(psi, LABELS3[:2])

    def test_tensor_product_labels(self):
        a = PureState((photon(0),), KET_H)
        b = PureState((spin(0),), KET0)
        ab = tensor_product(a, b)
        assert ab.labels == (photon(0), spin(0))
        mixed = tensor_product(a.to_density(), b)
        np.testing.assert_allclose(mixed.matrix, ab.to_density().matrix)


class TestMeasurement:
    def test_probabilities_and_post_states(self):
        psi = PureState(LABELS3, random_state(3, 9))
        for basis in "XYZ":
            res = measure_in_basis(psi, photon(1), basis)
            assert res[0].probability + res[1].probability == pytest.approx(1, abs=1e-13)
            for m in res:
                assert m.state.norm_squared == pytest.approx(1, abs=1e-13)

    def test_deterministic_outcome(self):
        s = PureState.product((photon(0),), (KET_MINUS,))
        plus, minus = measure_in_basis(s, photon(0), "X")
        assert plus.probability == 0 and plus.state is None
        assert minus.probability == pytest.approx(1)

    def test_loss_shows_as_deficit(self):
        s = apply_single_qubit(PureState.product((photon(0),), (KET0,)), photon(0),
                               np.diag([0.8, 1]))
        res = measure_in_basis(s, photon(0), "Z")
        assert res[0].probability == pytest.approx(0.64)

    def test_project_drops_qubit(self):
        s = PureState.product((photon(0), spin(0)), (KET_H, KET1))
        out = project_qubit(s, photon(0), KET_V)
        assert out.labels == (spin(0),)
        assert out.norm_squared == pytest.approx(0.0, abs=1e-30)


class TestFidelity:
    def test_pure_pure(self):
        a, b = random_state(2, 1), random_state(2, 2)
        la = (photon(0), spin(0))
        f = state_fidelity(PureState(la, a), PureState(la, b))
        assert f == pytest.approx(abs(np.vdot(a, b)) ** 2)

    def test_mixed_forms_agree(self):
        la = (photon(0), spin(0))
        psi = PureState(la, random_state(2, 3))
        rho = DensityOperator(la, random_density(2, 4))
        f1 = state_fidelity(psi, rho)
        f2 = state_fidelity(psi.to_density(), rho)
        assert f1 == pytest.approx(f2, abs=1e-8)

    def test_label_order_irrelevant(self):
        la = (photon(0), spin(0))
        psi = PureState(la, random_state(2, 5))
        assert state_fidelity(psi, permute(psi, la[::-1])) == pytest.approx(1.0)

    def test_mismatch(self):
        with pytest.raises(LabelMismatch):
            state_fidelity(PureState((photon(0),), KET0), PureState((spin(0),), KET0))
