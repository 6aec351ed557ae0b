"""First-order product-formula synthesis of time-evolution circuits.

One step of size ``dt`` applies ``exp(-i G dt)`` for each commuting term
group G in turn; a single-axis term ``c * P`` compiles to the rotation
``r{P}(2 c dt)`` because the rotation convention carries a half-angle.
That factor of two is pinned by a dense-oracle test.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import circuits as cg
from .errors import CapabilityError
from .hamiltonians import SpinHamiltonian

_SINGLE_ROT = {"x": cg.rx, "y": cg.ry, "z": cg.rz}
_DOUBLE_ROT = {"x": cg.rxx, "y": cg.ryy, "z": cg.rzz}


@dataclass(frozen=True)
class TrotterPlan:
    """How to discretize an evolution: step size, step count, group order.

    ``group_order`` of ``None`` uses the Hamiltonian's own order
    (x, y, z, field).  Only the first-order formula is implemented; the
    order field is an extension point.
    """

    dt: float
    steps: int
    order: str = "first"
    group_order: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.steps < 0:
            raise ValueError(f"steps must be >= 0, got {self.steps}")
        if self.order != "first":
            raise CapabilityError(f"only the first-order formula is implemented, got {self.order!r}")

    @property
    def total_time(self) -> float:
        return self.dt * self.steps


def _resolve_group_order(h: SpinHamiltonian, group_order) -> tuple[str, ...]:
    if group_order is None:
        return h.group_names
    order = tuple(group_order)
    if sorted(order) != sorted(h.group_names):
        raise ValueError(
            f"group order {order} is not a permutation of the Hamiltonian groups {h.group_names}"
        )
    return order


def trotter_step_circuit(h: SpinHamiltonian, dt: float,
                         group_order: tuple[str, ...] | None = None) -> cg.Circuit:
    """One step: exp(-i G dt) for each group G, groups applied in order."""
    if dt < 0:
        raise ValueError(f"dt must be non-negative, got {dt}")
    circuit = cg.Circuit(h.num_qubits)
    for name in _resolve_group_order(h, group_order):
        for term in h.groups[name]:
            angle = 2.0 * term.coefficient * dt
            sites = term.sites
            axes = [a for _, a in term.operators]
            if len(sites) == 0:
                continue  # identity term: a global phase only
            if len(sites) == 1:
                circuit.append(_SINGLE_ROT[axes[0]](angle, sites[0]))
            elif len(sites) == 2 and axes[0] == axes[1]:
                circuit.append(_DOUBLE_ROT[axes[0]](angle, sites[0], sites[1]))
            else:
                raise CapabilityError(
                    f"cannot compile term {term!r}: only single-axis terms on "
                    "at most two sites map onto the native rotation set"
                )
    return circuit


def evolution_circuit(h: SpinHamiltonian, plan: TrotterPlan) -> cg.Circuit:
    """Concatenate ``plan.steps`` step circuits (earliest step first).

    A time-dependent field is sampled at the left endpoint of each step:
    step k uses the schedule value at k*dt.
    """
    if h.is_time_dependent:
        schedule = h.field_schedule
        if schedule.end is not None and schedule.end < plan.total_time:
            raise ValueError(
                f"schedule ends at t={schedule.end} but the evolution runs to t={plan.total_time}"
            )
    circuit = cg.Circuit(h.num_qubits)
    order = _resolve_group_order(h, plan.group_order)
    for k in range(plan.steps):
        step_h = h.at_time(k * plan.dt)
        circuit.extend(trotter_step_circuit(step_h, plan.dt, order))
    return circuit
