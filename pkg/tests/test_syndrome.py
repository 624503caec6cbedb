import itertools

import numpy as np
import pytest

from spinqec.cavity import CavitySystem
from spinqec.errors import (BadRegisterSize, UnknownSupport, WeightMismatch,
                            ZeroProbabilityReadout)
from spinqec.lattice import StabilizerKind, StabilizerRecord, build_planar, quiescent_state
from spinqec.quantum import (KET_MINUS, KET_PLUS, PauliChannel, PureState, photon, spin,
                             state_fidelity)
from spinqec.sweeps import confidence_sweep, kind_matched_channel
from spinqec.syndrome import (InteractionMode, InteractionModel, confidence,
                              correct_swapped_phases, distribution,
                              interaction_coefficients, measure_boundary,
                              measure_plaquette, measure_star, measure_stabilizer,
                              measure_swapped, outcome_probabilities, readout_kets,
                              sample_syndromes)

from oracles import dense_confidence

IDEAL = InteractionModel.ideal()
G24 = CavitySystem.resonant(g=2.4)
PHYS = InteractionModel.physical(G24)


def record(kind, w):
    return StabilizerRecord(StabilizerKind(kind), tuple(photon(i) for i in range(w)),
                            (0, 0), 0)


class TestModel:
    def test_ideal_coefficients(self):
        np.testing.assert_allclose(interaction_coefficients(IDEAL), [1j, 1, 1, 1j])
        np.testing.assert_allclose(interaction_coefficients(InteractionModel.ideal(-1)),
                                   [-1j, 1, 1, -1j])

    def test_physical_defaults(self):
        assert PHYS.mode is InteractionMode.PHYSICAL
        assert PHYS.delta == pytest.approx(0.5534, abs=1e-4)
        assert PHYS.conditional_phase == pytest.approx(-np.pi / 2, abs=1e-12)
        assert PHYS.phase_sign == -1
        rh, r0 = PHYS.reflections
        np.testing.assert_allclose(interaction_coefficients(PHYS), [rh, r0, r0, rh])

    def test_at_keeps_labelling(self):
        m = PHYS.at(2.9)
        assert m.delta == 2.9 and m.phase_sign == PHYS.phase_sign

    def test_validation(self):
        with pytest.raises(ValueError):
            InteractionModel(InteractionMode.PHYSICAL)
        with pytest.raises(ValueError):
            InteractionModel.ideal(phase_sign=2)


def test_readout_kets_rule():
    # weight 4 reads out in X, weight 3 in Y with labels that follow the phase sign
    assert readout_kets(4, 1)[0] == "X" and readout_kets(4, 1)[1] is KET_PLUS
    assert readout_kets(4, 1, "-")[1] is KET_MINUS
    b_pos, b_neg = readout_kets(3, 1), readout_kets(3, -1)
    assert b_pos[0] == b_neg[0] == "Y"
    np.testing.assert_array_equal(b_pos[1], b_neg[2])


class TestParity:
    @pytest.mark.parametrize("w", [3, 4])
    @pytest.mark.parametrize("sign", [1, -1])
    @pytest.mark.parametrize("init", ["+", "-"])
    def test_computational_inputs(self, w, sign, init):
        stab = record("plaquette", w)
        model = InteractionModel.ideal(sign)
        for bits in itertools.product((0, 1), repeat=w):
            st = PureState.basis(stab.support, bits)
            outs = measure_stabilizer(st, None, stab, model, init)
            dist = distribution(outs)
            expected = 1 if sum(bits) % 2 == 0 else -1
            assert dist[expected] == pytest.approx(1.0, abs=1e-12)
            assert dist[-expected] == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("w", [3, 4])
    def test_star_on_hadamard_inputs(self, w):
        stab = record("star", w)
        for bits in itertools.product((0, 1), repeat=w):
            st = PureState.product(stab.support,
                                   [KET_MINUS if b else KET_PLUS for b in bits])
            dist = distribution(measure_stabilizer(st, None, stab, IDEAL))
            assert dist[1 if sum(bits) % 2 == 0 else -1] == pytest.approx(1.0, abs=1e-12)

    def test_superposition_is_projected(self):
        stab = record("plaquette", 4)
        amps = np.zeros(16, dtype=complex)
        amps[0b0000] = amps[0b0011] = amps[0b0001] = amps[0b0111] = 0.5
        outs = measure_plaquette(PureState(stab.support, amps), None, stab, IDEAL)
        assert outs[0].probability == pytest.approx(0.5)
        even = PureState(stab.support, np.where(np.isin(np.arange(16), [0, 3]),
                                                amps, 0) * np.sqrt(2))
        assert state_fidelity(outs[0].state, even) == pytest.approx(1.0, abs=1e-12)

    def test_weight_dispatch_errors(self):
        st = PureState.basis(record("plaquette", 3).support, (0, 0, 0))
        with pytest.raises(WeightMismatch):
            measure_plaquette(st, None, record("plaquette", 3), IDEAL)
        with pytest.raises(WeightMismatch):
            measure_boundary(PureState.basis(record("star", 4).support, (0,) * 4), None,
                             record("star", 4), IDEAL)
        with pytest.raises(UnknownSupport):
            measure_star(st, None, StabilizerRecord(StabilizerKind.STAR,
                         tuple(photon(i) for i in range(1, 5)), (0, 0), 0), IDEAL)


class TestQuiescent:
    @pytest.mark.parametrize("d", [2, 3])
    def test_ideal_measurement_preserves_state(self, d):
        lat = build_planar(d)
        psi = quiescent_state(lat)
        for stab in lat.stabilizers:
            outs = measure_stabilizer(psi, lat, stab, IDEAL)
            assert outs[0].probability == pytest.approx(1.0, abs=1e-12)
            assert state_fidelity(outs[0].state, psi) >= 1 - 1e-10

    def test_physical_loss_outcome(self):
        lat = build_planar(2)
        lossy = InteractionModel.physical(CavitySystem.resonant(2.4, kappa_s=0.2))
        outs = measure_stabilizer(quiescent_state(lat), lat, lat.stars[0], lossy)
        assert outs[-1].heralded_loss
        assert sum(o.probability for o in outs) == pytest.approx(1.0, abs=1e-12)
        assert outs[-1].probability > 1e-3


class TestSwapped:
    @pytest.mark.parametrize("w", [3, 4])
    @pytest.mark.parametrize("sign", [1, -1])
    def test_matches_spin_ancilla(self, w, sign):
        model = InteractionModel.ideal(sign)
        stab = record("plaquette", w)
        spins = tuple(spin(i) for i in range(w))
        for bits in itertools.product((0, 1), repeat=w):
            a = distribution(measure_stabilizer(PureState.basis(stab.support, bits),
                                                None, stab, model))
            b = distribution(measure_swapped(PureState.basis(spins, bits), model))
            for k in (1, -1):
                assert a[k] == pytest.approx(b[k], abs=1e-12)

    def test_register_size(self):
        with pytest.raises(BadRegisterSize):
            measure_swapped(PureState.basis((spin(0), spin(1)), (0, 0)), IDEAL)

    def test_phase_correction_restores_superposition(self):
        spins = tuple(spin(i) for i in range(4))
        amps = np.zeros(16, dtype=complex)
        amps[0b0000] = amps[0b1111] = 1 / np.sqrt(2)
        ghz = PureState(spins, amps)
        out = measure_swapped(ghz, IDEAL)[0]
        fixed = correct_swapped_phases(out.state, IDEAL)
        assert out.probability == pytest.approx(1.0)
        assert state_fidelity(fixed.normalized(), ghz) == pytest.approx(1.0, abs=1e-12)


class TestConfidence:
    def test_ideal_noiseless_is_certain(self):
        lat = build_planar(2)
        assert confidence(lat, PauliChannel(), IDEAL) == pytest.approx(1.0, abs=1e-12)
        with pytest.raises(ZeroProbabilityReadout):
            confidence(lat, PauliChannel(), IDEAL, readout=-1)

    @pytest.mark.parametrize("kind", ["plaquette", "star"])
    @pytest.mark.parametrize("delta", [0.2, 0.5534, 1.3, 2.6])
    @pytest.mark.parametrize("readout", [1, -1])
    def test_matches_dense_oracle(self, kind, delta, readout):
        lat = build_planar(2)
        model = PHYS.at(delta)
        ch = PauliChannel(0.03, 0.01, 0.04)
        rh, r0 = model.reflections
        ref = dense_confidence(lat, lat.find(kind), ch, rh, r0, model.phase_sign, readout)
        assert confidence(lat, ch, model, kind, readout) == pytest.approx(ref, abs=1e-12)

    def test_ideal_closed_form(self):
        # ideal read-out never errs; only odd parity can fake the + result
        lat = build_planar(2)
        p = 0.1
        c = confidence(lat, PauliChannel(x=p), IDEAL, "plaquette", 1)
        # weight-3 support: P(even) = (1-p)^3 + 3 p^2 (1-p)
        assert c == pytest.approx(1.0)
        probs = outcome_probabilities(lat, PauliChannel(x=p), IDEAL)
        assert probs[1] == pytest.approx((1 - p) ** 3 + 3 * p ** 2 * (1 - p))
        assert probs["loss"] == pytest.approx(0.0, abs=1e-12)

    def test_sweep_flags_zero_probability(self):
        lat = build_planar(2)
        res = confidence_sweep(lat, PHYS, [0.5534], [0.0], (1,))
        assert res["confidence"][0] == pytest.approx(1.0, abs=1e-12)
        assert len(res) == 1 and not res["zero_probability"][0]
        assert kind_matched_channel(0.05, "star") == PauliChannel(z=0.05)


class TestMonteCarlo:
    def test_reproducible(self):
        lat = build_planar(2)
        ch = PauliChannel(0.05, 0.0, 0.05)
        a = sample_syndromes(lat, ch, PHYS, 3000, seed=11)
        b = sample_syndromes(lat, ch, PHYS, 3000, seed=11)
        assert a.records() == b.records()
        c = sample_syndromes(lat, ch, PHYS, 3000, seed=12)
        assert a.records() != c.records()

    def test_counts_add_up(self):
        lat = build_planar(3)
        t = sample_syndromes(lat, PauliChannel(x=0.02), IDEAL, 500, seed=0)
        for rec in t.records():
            assert rec["plus"] + rec["minus"] + rec["heralded_loss"] == 500
            assert rec["heralded_loss"] == 0

    def test_noiseless_ideal_never_flags(self):
        t = sample_syndromes(build_planar(2), PauliChannel(), IDEAL, 200, seed=3)
        assert t.minus.sum() == 0
