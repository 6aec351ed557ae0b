"""Dense complex statevector engine.

Layout is little-endian: qubit 0 is the least-significant bit of the basis
index, so basis state ``|b_{n-1} ... b_1 b_0>`` sits at index
``sum_q b_q 2^q``.  Gate kernels update amplitude groups selected by bit
masks in place on a private copy; callers always receive a fresh
``StateVector``.

Thread contract: a ``StateVector`` must not be mutated concurrently, but
distinct states may be processed in parallel and completed states may be
read from any thread.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .circuits import Circuit, Gate, gate_matrix
from .errors import CapabilityError, ConfigError
from .pauli import PauliTerm

DEFAULT_MAX_QUBITS = 24
ORACLE_MAX_QUBITS = 10

# Expectation values of Hermitian strings must be real; imaginary residue
# beyond this is an internal inconsistency, not rounding noise.
_IMAG_FAIL = 1e-8


class StateVector:
    """2^n complex amplitudes of an n-qubit pure state."""

    __slots__ = ("num_qubits", "amplitudes")

    def __init__(self, num_qubits: int, amplitudes: np.ndarray):
        amplitudes = np.asarray(amplitudes, dtype=complex)
        if amplitudes.shape != (2 ** num_qubits,):
            raise ValueError(
                f"need exactly 2^{num_qubits} amplitudes, got shape {amplitudes.shape}"
            )
        self.num_qubits = num_qubits
        self.amplitudes = amplitudes

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amplitudes.copy())

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def __repr__(self) -> str:
        return f"StateVector(num_qubits={self.num_qubits})"


def zero_state(num_qubits: int, max_qubits: int = DEFAULT_MAX_QUBITS) -> StateVector:
    """The all-zeros product state |00...0> ("all spins up")."""
    if not 1 <= num_qubits <= max_qubits:
        raise ConfigError(f"qubit count {num_qubits} outside supported range [1, {max_qubits}]")
    amps = np.zeros(2 ** num_qubits, dtype=complex)
    amps[0] = 1.0
    return StateVector(num_qubits, amps)


def _build_pattern_indices(n: int, targets: tuple[int, ...], control: int | None) -> np.ndarray:
    fixed = set(targets)
    if control is not None:
        fixed.add(control)
    free = [q for q in range(n) if q not in fixed]
    j = np.arange(1 << len(free), dtype=np.intp)
    base = np.zeros_like(j)
    for pos, q in enumerate(free):
        base |= ((j >> pos) & 1) << q
    if control is not None:
        base |= np.intp(1 << control)
    patterns = np.zeros(1 << len(targets), dtype=np.intp)
    for p in range(patterns.size):
        patterns[p] = sum(((p >> k) & 1) << q for k, q in enumerate(targets))
    return base[np.newaxis, :] | patterns[:, np.newaxis]


_cached_pattern_indices = lru_cache(maxsize=512)(_build_pattern_indices)


def _pattern_indices(n: int, targets: tuple[int, ...], control: int | None) -> np.ndarray:
    """Basis-index matrix ``idx[p, j]``.

    Row ``p`` enumerates the target-bit patterns (bit k of ``p`` is the bit
    of ``targets[k]``); column ``j`` runs over the remaining free bits.  When
    ``control`` is given, only indices with the control bit set are included.
    Cached for small systems (gate loops hit the same masks repeatedly);
    treat the result as read-only.
    """
    if n <= 14:
        return _cached_pattern_indices(n, targets, control)
    return _build_pattern_indices(n, targets, control)


def _validate_targets(gate: Gate, num_qubits: int) -> None:
    seen = set(gate.qubits)
    if gate.control is not None:
        seen.add(gate.control)
    if len(seen) != len(gate.qubits) + (gate.control is not None):
        raise ValueError(f"duplicate target qubits in {gate!r}")
    out_of_range = [q for q in seen if not 0 <= q < num_qubits]
    if out_of_range:
        raise ValueError(f"qubit index {out_of_range[0]} out of range for {num_qubits} qubits")


def _apply_gate_in_place(amps: np.ndarray, gate: Gate, num_qubits: int) -> None:
    idx = _pattern_indices(num_qubits, gate.qubits, gate.control)
    amps[idx] = gate_matrix(gate) @ amps[idx]


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Apply one gate; returns a new state, norm preserved."""
    _validate_targets(gate, state.num_qubits)
    out = state.copy()
    _apply_gate_in_place(out.amplitudes, gate, out.num_qubits)
    return out


def apply_circuit(state: StateVector, circuit: Circuit) -> StateVector:
    """Apply every gate of ``circuit`` in order (single amplitude copy)."""
    if circuit.num_qubits > state.num_qubits:
        raise ValueError(
            f"circuit spans {circuit.num_qubits} qubits but state has {state.num_qubits}"
        )
    out = state.copy()
    for gate in circuit:
        _validate_targets(gate, out.num_qubits)
        _apply_gate_in_place(out.amplitudes, gate, out.num_qubits)
    return out


def run_circuit(circuit: Circuit, max_qubits: int = DEFAULT_MAX_QUBITS) -> StateVector:
    """Execute ``circuit`` from |00...0>."""
    return apply_circuit(zero_state(circuit.num_qubits, max_qubits), circuit)


_PAULI_GATE = {"x": "x", "y": "y", "z": "z"}


def expectation(state: StateVector, term: PauliTerm) -> float:
    """<psi| P |psi> times the term coefficient.

    The raw inner product of a Hermitian string is real up to rounding; an
    imaginary residue above the failure threshold signals an internal
    inconsistency rather than a rounding artifact.
    """
    if term.max_site() >= state.num_qubits:
        raise ValueError(
            f"term acts on qubit {term.max_site()} but state has {state.num_qubits} qubits"
        )
    applied = state.amplitudes.copy()
    for site, axis in term.operators:
        _apply_gate_in_place(applied, Gate(_PAULI_GATE[axis], (site,)), state.num_qubits)
    raw = np.vdot(state.amplitudes, applied)
    if abs(raw.imag) > _IMAG_FAIL:
        raise RuntimeError(
            f"expectation of Hermitian string has imaginary residue {raw.imag:.3e}"
        )
    return float(raw.real) * term.coefficient


def exact_evolve(state: StateVector, hamiltonian, time: float,
                 oracle_cap: int = ORACLE_MAX_QUBITS) -> StateVector:
    """Evolve by exp(-i H t) via dense Hermitian eigendecomposition.

    Ground-truth oracle for Trotterized evolution; the eigendecomposition is
    cached on the Hamiltonian so many time points reuse one factorization.
    The Hamiltonian may act on fewer qubits than the state (remaining qubits,
    e.g. an ancilla, are left untouched).
    """
    m = hamiltonian.num_qubits
    if m > oracle_cap:
        raise CapabilityError(
            f"exact evolution caps at {oracle_cap} qubits (dense 2^n exponentiation), got {m}"
        )
    if m > state.num_qubits:
        raise ValueError("Hamiltonian spans more qubits than the state")
    eigenvalues, eigenvectors = hamiltonian.eigensystem()
    propagator = (eigenvectors * np.exp(-1j * eigenvalues * time)) @ eigenvectors.conj().T
    out = state.copy()
    idx = _pattern_indices(state.num_qubits, tuple(range(m)), None)
    out.amplitudes[idx] = propagator @ out.amplitudes[idx]
    return out


def sample_counts(state: StateVector, shots: int, seed) -> dict[str, int]:
    """Sample basis-state outcomes from |amplitude|^2.

    Returns bitstring -> count with the highest-index qubit leftmost
    (``format(index, "0nb")``).  Counts sum to ``shots``; the draw is fully
    determined by ``seed`` (an int or a ``numpy.random.Generator``).
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    rng = np.random.default_rng(seed)
    probs = state.probabilities()
    counts = rng.multinomial(shots, probs / probs.sum())
    n = state.num_qubits
    return {format(i, f"0{n}b"): int(c) for i, c in enumerate(counts) if c}
