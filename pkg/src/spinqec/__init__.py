"""Spin-photon cavity simulations of surface-code syndrome extraction."""

from .cavity import (CavitySystem, ReflectionPair, is_strong_coupling,
                     optimal_detuning, phase_difference, reflection_cold,
                     reflection_coupled, reflection_pair, solve_detuning)
from .entanglement import (ETA_MAX, EntanglementMode, EntanglementResult,
                           FourSpinResult, QDPair, decoherence_factor,
                           efficiency_sweep, entangle_four, entangle_pair,
                           fidelity_formula, herald_pair, solve_probe_frequency)
from .errors import *  # noqa: F401,F403
from .lattice import (Geometry, StabilizerKind, StabilizerRecord,
                      SurfaceCodeLattice, build_planar, build_toric,
                      quiescent_state, stabilizer_expectation)
from .quantum import (DensityOperator, PauliChannel, PureState, QubitKind,
                      QubitLabel, apply_pauli_channel, apply_single_qubit,
                      apply_two_qubit_diagonal, measure_in_basis,
                      partial_trace, photon, spin, state_fidelity)
from .sweeps import SweepResult, confidence_sweep, kind_matched_channel
from .syndrome import (InteractionMode, InteractionModel, SyndromeOutcome,
                       SyndromeTally, confidence, correct_swapped_phases,
                       interaction_coefficients, measure_boundary,
                       measure_plaquette, measure_stabilizer, measure_star,
                       measure_swapped, outcome_probabilities,
                       sample_syndromes)

__version__ = "0.1.0"
