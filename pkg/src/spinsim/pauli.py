"""Pauli strings with real coefficients, the building block of spin Hamiltonians."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

PAULI_MATRICES = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}
_IDENTITY = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class PauliTerm:
    """A real coefficient times a tensor product of single-site Paulis.

    ``operators`` maps qubit index -> axis ("x", "y" or "z"); identity on
    every site not listed.  Hermitian by construction.
    """

    coefficient: float
    operators: tuple[tuple[int, str], ...]

    def __init__(self, coefficient: float, operators: Mapping[int, str] | Iterable[tuple[int, str]]):
        items = sorted(dict(operators).items())
        for site, axis in items:
            if not isinstance(site, (int, np.integer)) or site < 0:
                raise ValueError(f"qubit index must be a non-negative integer, got {site!r}")
            if axis not in PAULI_MATRICES:
                raise ValueError(f"unknown Pauli axis {axis!r} on qubit {site}")
        if coefficient != 0.0 and not items:
            raise ValueError("a term with nonzero coefficient must act on at least one qubit")
        object.__setattr__(self, "coefficient", float(coefficient))
        object.__setattr__(self, "operators", tuple((int(s), a) for s, a in items))

    @property
    def factors(self) -> dict[int, str]:
        return dict(self.operators)

    @property
    def sites(self) -> tuple[int, ...]:
        return tuple(s for s, _ in self.operators)

    def max_site(self) -> int:
        return max((s for s, _ in self.operators), default=-1)

    def scaled(self, factor: float) -> "PauliTerm":
        return PauliTerm(self.coefficient * factor, self.operators)

    def __repr__(self) -> str:
        body = " ".join(f"{a}{s}" for s, a in self.operators) or "I"
        return f"{self.coefficient:+g}*{body}"


def term_matrix(term: PauliTerm, num_qubits: int) -> np.ndarray:
    """Dense 2^n x 2^n matrix of ``term`` (coefficient included).

    Little-endian: qubit 0 is the least-significant bit of the basis index,
    so qubit n-1 is the leftmost Kronecker factor.
    """
    if term.max_site() >= num_qubits:
        raise ValueError(f"term acts on qubit {term.max_site()} but only {num_qubits} available")
    factors = term.factors
    out = np.array([[term.coefficient]], dtype=complex)
    for q in range(num_qubits - 1, -1, -1):
        out = np.kron(out, PAULI_MATRICES[factors[q]] if q in factors else _IDENTITY)
    return out


def terms_commute(a: PauliTerm, b: PauliTerm) -> bool:
    """Symplectic rule: two Pauli strings commute iff they anticommute on an
    even number of shared sites."""
    fa, fb = a.factors, b.factors
    clashes = sum(1 for q in fa.keys() & fb.keys() if fa[q] != fb[q])
    return clashes % 2 == 0
