"""Measured quantities: magnetizations, energy, two-point correlations.

The staggered magnetization uses the convention that site 0 contributes
with a plus sign, so the alternating product state |up down up ...> scores
exactly +1.

Two-point functions <A(t) B(0)> are measured with an ancilla interference
circuit: the ancilla is put in superposition, B is applied controlled on
it, the system evolves unconditionally to time t, A is applied controlled
on it, and the correlation is read off the ancilla coherences
(Re from <sigma^x>, Im from <sigma^y>).  The ancilla is appended as the
highest-index qubit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import circuits as cg
from .errors import CapabilityError
from .hamiltonians import SpinHamiltonian
from .pauli import PAULI_MATRICES, PauliTerm
from .statevector import (ORACLE_MAX_QUBITS, StateVector, apply_circuit,
                          expectation, run_circuit, sample_counts)
from .trotter import TrotterPlan, evolution_circuit


def site_magnetization(state: StateVector, axis: str = "z") -> np.ndarray:
    """Per-site <sigma_i^axis>, each in [-1, 1]."""
    if axis not in PAULI_MATRICES:
        raise ValueError(f"unknown axis {axis!r}")
    return np.array([
        expectation(state, PauliTerm(1.0, {i: axis})) for i in range(state.num_qubits)
    ])


def staggered_magnetization(state: StateVector) -> float:
    """Alternating-sign average of <sigma_i^z>; the square is the AF order parameter."""
    signs = (-1.0) ** np.arange(state.num_qubits)
    return float(np.dot(signs, site_magnetization(state, "z")) / state.num_qubits)


def energy(state: StateVector, h: SpinHamiltonian) -> float:
    """Sum of expectations over all Hamiltonian terms."""
    return sum(expectation(state, term) for term in h.terms)


# --- shot-based estimators (counts keyed by bitstring, highest qubit leftmost) ---

def z_parity_from_counts(counts: dict[str, int], sites: tuple[int, ...]) -> float:
    """Estimate <prod_{q in sites} sigma_q^z> from z-basis counts."""
    total = sum(counts.values())
    acc = 0
    for key, c in counts.items():
        index = int(key, 2)
        bits = sum((index >> q) & 1 for q in sites)
        acc += c * (1 - 2 * (bits % 2))
    return acc / total


def site_magnetization_from_counts(counts: dict[str, int], num_qubits: int) -> np.ndarray:
    return np.array([z_parity_from_counts(counts, (q,)) for q in range(num_qubits)])


def staggered_magnetization_from_counts(counts: dict[str, int], num_qubits: int) -> float:
    signs = (-1.0) ** np.arange(num_qubits)
    return float(np.dot(signs, site_magnetization_from_counts(counts, num_qubits)) / num_qubits)


_BASIS_CHANGE = {
    "z": lambda q: [],
    "x": lambda q: [cg.hadamard(q)],
    # measure sigma^y: rotate it onto sigma^z with Rz(-pi/2) then H
    "y": lambda q: [cg.rz(-np.pi / 2, q), cg.hadamard(q)],
}


def estimate_energy_from_shots(state: StateVector, h: SpinHamiltonian, shots: int, seed) -> float:
    """Energy estimate from one basis-rotated sampling per term group.

    Every group is single-axis by construction, so rotating all qubits of
    that axis onto z and sampling once serves all of the group's terms.
    """
    rng = np.random.default_rng(seed)
    total = 0.0
    counts_by_axis: dict[str, dict[str, int]] = {}
    for name, terms in h.groups.items():
        axes = {a for t in terms for _, a in t.operators}
        if len(axes) != 1:
            raise ValueError(f"group {name!r} mixes axes {axes}; cannot measure in one basis")
        axis = axes.pop()
        if axis not in counts_by_axis:
            rotation = cg.Circuit(state.num_qubits)
            for q in range(state.num_qubits):
                rotation.extend(_BASIS_CHANGE[axis](q))
            rotated = apply_circuit(state, rotation)
            counts_by_axis[axis] = sample_counts(rotated, shots, rng)
        for term in terms:
            total += term.coefficient * z_parity_from_counts(counts_by_axis[axis], term.sites)
    return total


# --- two-point dynamical correlation functions ---

@dataclass(frozen=True)
class CorrelationSpec:
    """What to correlate: single-site Paulis A and B, the evolution time,
    the Hamiltonian driving it, and the system state-preparation circuit."""

    op_a: PauliTerm
    op_b: PauliTerm
    time: float
    hamiltonian: SpinHamiltonian
    state_prep: cg.Circuit

    def __post_init__(self):
        for label, op in (("op_a", self.op_a), ("op_b", self.op_b)):
            if len(op.operators) != 1 or abs(op.coefficient) != 1.0:
                raise ValueError(
                    f"{label} must be a single Pauli factor with coefficient +-1 "
                    "(unitary and Hermitian)"
                )
        if self.state_prep.num_qubits != self.hamiltonian.num_qubits:
            raise ValueError("state_prep and hamiltonian disagree on qubit count")


def _controlled_pauli(op: PauliTerm, ancilla: int) -> cg.Gate:
    (site, axis), = op.operators
    return cg.unitary(op.coefficient * PAULI_MATRICES[axis], (site,), control=ancilla)


def _trotter_steps_for(time: float, dt: float) -> int:
    steps = int(round(time / dt))
    if abs(steps * dt - time) > 1e-9 * max(1.0, abs(time)):
        raise ValueError(f"time {time} is not an integer multiple of dt {dt}")
    return steps


def correlation_circuit(spec: CorrelationSpec, plan: TrotterPlan | None = None,
                        exact_block: bool = False) -> cg.Circuit:
    """Ancilla interference circuit on n+1 qubits (ancilla = index n).

    The evolution block is Trotterized per ``plan``; with ``exact_block``
    it is replaced by the dense propagator (oracle-capped), which the tests
    use to separate protocol error from Trotter error.
    """
    n = spec.hamiltonian.num_qubits
    ancilla = n
    circuit = cg.Circuit(n + 1)
    circuit.extend(spec.state_prep)
    circuit.append(cg.hadamard(ancilla))
    circuit.append(_controlled_pauli(spec.op_b, ancilla))
    if spec.time != 0.0:
        if exact_block:
            if n > ORACLE_MAX_QUBITS:
                raise CapabilityError(f"dense evolution block caps at {ORACLE_MAX_QUBITS} qubits")
            w, v = spec.hamiltonian.eigensystem()
            propagator = (v * np.exp(-1j * w * spec.time)) @ v.conj().T
            circuit.append(cg.unitary(propagator, range(n)))
        else:
            if plan is None:
                raise ValueError("a TrotterPlan is required unless exact_block is set")
            steps = _trotter_steps_for(spec.time, plan.dt)
            circuit.extend(evolution_circuit(
                spec.hamiltonian, TrotterPlan(plan.dt, steps, plan.order, plan.group_order)
            ))
    circuit.append(_controlled_pauli(spec.op_a, ancilla))
    return circuit


def measure_correlation(spec: CorrelationSpec, plan: TrotterPlan | None = None,
                        exact_block: bool = False) -> complex:
    """<A(t) B(0)> via the ancilla circuit: Re from <sigma^x_anc>, Im from <sigma^y_anc>."""
    state = run_circuit(correlation_circuit(spec, plan, exact_block))
    ancilla = spec.hamiltonian.num_qubits
    re = expectation(state, PauliTerm(1.0, {ancilla: "x"}))
    im = expectation(state, PauliTerm(1.0, {ancilla: "y"}))
    return complex(re, im)
