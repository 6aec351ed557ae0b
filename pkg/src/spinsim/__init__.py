"""spinsim: statevector simulation of spin-lattice quantum circuits.

Covers Pauli-string Hamiltonians, first-order product-formula circuit
synthesis, a quantum-quench driver with staggered-magnetization readout,
a self-consistent BCS pseudospin gap solver, and ancilla-based two-point
correlation measurements, plus a config-driven CLI.
"""

__version__ = "0.1.0"

from .bcs import (BCSProblem, GapSolveResult, cost, dispersion, fermi_guess,
                  gap_update, minimize_angles, pseudospin_expectations, solve_gap)
from .circuits import (Circuit, Gate, circuit_from_text, circuit_to_text,
                       cnot, gate_matrix, hadamard, rx, rxx, ry, ryy, rz, rzz,
                       state_preparation, unitary, x, y, z)
from .dynamics import QuenchConfig, TimeSeries, neel_circuit, run_quench
from .errors import CapabilityError, ConfigError, ConvergenceError
from .hamiltonians import (FieldSchedule, SpinHamiltonian, heisenberg_chain,
                           quench_hamiltonian)
from .observables import (CorrelationSpec, correlation_circuit, energy,
                          measure_correlation, site_magnetization,
                          staggered_magnetization)
from .pauli import PauliTerm, term_matrix
from .statevector import (StateVector, apply_circuit, apply_gate, exact_evolve,
                          expectation, run_circuit, sample_counts, zero_state)
from .trotter import TrotterPlan, evolution_circuit, trotter_step_circuit

__all__ = [
    "BCSProblem", "CapabilityError", "Circuit", "ConfigError",
    "ConvergenceError", "CorrelationSpec", "FieldSchedule", "Gate",
    "GapSolveResult", "PauliTerm", "QuenchConfig", "SpinHamiltonian",
    "StateVector", "TimeSeries", "TrotterPlan",
    "apply_circuit", "apply_gate", "circuit_from_text", "circuit_to_text",
    "cnot", "correlation_circuit", "cost", "dispersion", "energy",
    "evolution_circuit", "exact_evolve", "expectation", "fermi_guess",
    "gap_update", "gate_matrix", "hadamard", "heisenberg_chain",
    "measure_correlation", "minimize_angles", "neel_circuit",
    "pseudospin_expectations", "quench_hamiltonian", "run_circuit",
    "run_quench", "rx", "rxx", "ry", "ryy", "rz", "rzz", "sample_counts",
    "site_magnetization", "solve_gap", "staggered_magnetization",
    "state_preparation", "term_matrix", "trotter_step_circuit", "unitary",
    "x", "y", "z", "zero_state",
]
