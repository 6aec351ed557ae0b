"""Gates and circuits.

A ``Circuit`` is an ordered gate list over a fixed qubit count; gates are
applied to a state in list order.  The gate set covers the fixed Paulis,
Hadamard, single- and two-qubit Pauli rotations, CNOT, and an arbitrary
(optionally controlled) unitary block used for controlled correlation
operators and dense evolution oracles.

Rotation convention: ``r{a}(theta) = exp(-i * theta/2 * sigma^a)`` and
``r{aa}(theta) = exp(-i * theta/2 * sigma^a x sigma^a)``.

For multi-qubit matrices, ``qubits[0]`` indexes the least-significant bit
of the local matrix, consistent with the global little-endian layout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .pauli import PAULI_MATRICES

_ROTATION_NAMES = ("rx", "ry", "rz", "rxx", "ryy", "rzz")
_FIXED_NAMES = ("x", "y", "z", "h", "cnot")


@dataclass(frozen=True, eq=False)
class Gate:
    name: str
    qubits: tuple[int, ...]
    angle: float | None = None
    matrix: np.ndarray | None = None
    control: int | None = None

    def inverse(self) -> "Gate":
        if self.name in _ROTATION_NAMES:
            return Gate(self.name, self.qubits, -self.angle)
        if self.name == "unitary":
            return Gate("unitary", self.qubits, matrix=self.matrix.conj().T, control=self.control)
        return self  # x, y, z, h, cnot are involutions

    def __repr__(self) -> str:
        extra = f", angle={self.angle:.6g}" if self.angle is not None else ""
        ctrl = f", control={self.control}" if self.control is not None else ""
        return f"Gate({self.name!r}, {self.qubits}{extra}{ctrl})"


def x(qubit: int) -> Gate:
    return Gate("x", (qubit,))


def y(qubit: int) -> Gate:
    return Gate("y", (qubit,))


def z(qubit: int) -> Gate:
    return Gate("z", (qubit,))


def hadamard(qubit: int) -> Gate:
    return Gate("h", (qubit,))


def rx(angle: float, qubit: int) -> Gate:
    return Gate("rx", (qubit,), float(angle))


def ry(angle: float, qubit: int) -> Gate:
    return Gate("ry", (qubit,), float(angle))


def rz(angle: float, qubit: int) -> Gate:
    return Gate("rz", (qubit,), float(angle))


def rxx(angle: float, qubit_a: int, qubit_b: int) -> Gate:
    return Gate("rxx", (qubit_a, qubit_b), float(angle))


def ryy(angle: float, qubit_a: int, qubit_b: int) -> Gate:
    return Gate("ryy", (qubit_a, qubit_b), float(angle))


def rzz(angle: float, qubit_a: int, qubit_b: int) -> Gate:
    return Gate("rzz", (qubit_a, qubit_b), float(angle))


def cnot(control: int, target: int) -> Gate:
    # qubits[0] is the control, qubits[1] the target
    return Gate("cnot", (control, target))


def unitary(matrix: np.ndarray, qubits: Iterable[int], control: int | None = None) -> Gate:
    """Arbitrary unitary block on ``qubits``; applied only on ``control``=1 when given."""
    qubits = tuple(qubits)
    matrix = np.asarray(matrix, dtype=complex)
    dim = 2 ** len(qubits)
    if matrix.shape != (dim, dim):
        raise ValueError(f"matrix shape {matrix.shape} does not match {len(qubits)} target qubit(s)")
    deviation = np.abs(matrix.conj().T @ matrix - np.eye(dim)).max()
    if deviation > 1e-12:
        raise ValueError(f"matrix is not unitary (U^dag U deviates from identity by {deviation:.2e})")
    return Gate("unitary", qubits, matrix=matrix, control=control)


_EYE = {2: np.eye(2, dtype=complex), 4: np.eye(4, dtype=complex)}


def _rotation_matrix(pauli: np.ndarray, angle: float) -> np.ndarray:
    return math.cos(angle / 2) * _EYE[pauli.shape[0]] - 1j * math.sin(angle / 2) * pauli


def gate_matrix(gate: Gate) -> np.ndarray:
    """Local matrix of the gate on its target qubits (control excluded).

    Index convention: bit k of the local basis index is the bit of
    ``gate.qubits[k]``.
    """
    name = gate.name
    if name in ("x", "y", "z"):
        return PAULI_MATRICES[name].copy()
    if name == "h":
        return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    if name in ("rx", "ry", "rz"):
        return _rotation_matrix(PAULI_MATRICES[name[1]], gate.angle)
    if name in ("rxx", "ryy", "rzz"):
        p = PAULI_MATRICES[name[1]]
        return _rotation_matrix(np.kron(p, p), gate.angle)
    if name == "cnot":
        # local index p = control_bit + 2 * target_bit
        m = np.zeros((4, 4), dtype=complex)
        m[0, 0] = m[2, 2] = 1.0  # control 0: pass through
        m[3, 1] = m[1, 3] = 1.0  # control 1: flip target
        return m
    if name == "unitary":
        return gate.matrix
    raise ValueError(f"unknown gate {name!r}")


@dataclass
class Circuit:
    """Ordered gate sequence over a fixed number of qubits."""

    num_qubits: int
    gates: list[Gate] = field(default_factory=list)

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError("a circuit needs at least one qubit")

    def append(self, gate: Gate) -> "Circuit":
        self.gates.append(gate)
        return self

    def extend(self, gates: "Iterable[Gate] | Circuit") -> "Circuit":
        if isinstance(gates, Circuit):
            gates = gates.gates
        self.gates.extend(gates)
        return self

    def inverse(self) -> "Circuit":
        return Circuit(self.num_qubits, [g.inverse() for g in reversed(self.gates)])

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)


def circuit_to_text(circuit: Circuit) -> str:
    """Line-oriented serialization: one gate per line (name, targets, angle).

    Matrix-valued gates have no text form and raise ``ValueError``.
    """
    lines = []
    for gate in circuit:
        if gate.name == "unitary":
            raise ValueError("unitary-matrix gates are not text-serializable")
        parts = [gate.name, *map(str, gate.qubits)]
        if gate.angle is not None:
            parts.append(f"{gate.angle:.17g}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + ("\n" if lines else "")


def circuit_from_text(text: str, num_qubits: int) -> Circuit:
    circuit = Circuit(num_qubits)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        name = parts[0]
        try:
            if name in _ROTATION_NAMES:
                *targets, angle = parts[1:]
                circuit.append(Gate(name, tuple(int(t) for t in targets), float(angle)))
            elif name in _FIXED_NAMES:
                circuit.append(Gate(name, tuple(int(t) for t in parts[1:])))
            else:
                raise ValueError(f"unknown gate {name!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return circuit


def state_preparation(amplitudes: np.ndarray) -> Circuit:
    """Single-block circuit preparing an explicit normalized state from |0...0>.

    Used to inject classically computed states (e.g. exact ground states)
    as the state-preparation stage of a larger circuit.
    """
    amps = np.asarray(amplitudes, dtype=complex).ravel()
    n = int(math.log2(amps.size))
    if 2 ** n != amps.size:
        raise ValueError(f"amplitude vector length {amps.size} is not a power of two")
    norm = np.linalg.norm(amps)
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"state is not normalized (norm {norm:.12f})")
    # Complete amps to a unitary whose first column is the state.
    basis = np.eye(amps.size, dtype=complex)
    pivot = int(np.argmax(np.abs(amps)))
    columns = np.column_stack([amps] + [basis[:, j] for j in range(amps.size) if j != pivot])
    q, _ = np.linalg.qr(columns)
    q[:, 0] *= np.vdot(q[:, 0], amps)  # undo QR's phase choice on column 0
    return Circuit(n, [unitary(q, range(n))])
