"""Self-consistent BCS gap solve on pseudospin qubits.

One qubit per momentum point: the pseudospin direction in the x-z plane is
parameterized by a single Ry(2*theta) rotation, and the x / z projections
give the local pairing and occupation contributions.  The energy cost

    C{theta_k} = sum_k ( 2 eps_k <S^z_k> - Delta <S^x_k> )

separates over momenta, so each angle is optimized independently
(golden-section line search); the gap is then updated from

    Delta = (U / N_k) sum_k <S^x_k>

and the two stages alternate until the self-consistency residual drops
below tolerance.

Conventions (recorded in run metadata): the band is the 1D nearest-
neighbour form eps_k = -2 t cos k, measured from the non-interacting Fermi
level; occupied states map to theta = 0 (<sigma^z> = +1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import circuits as cg
from .errors import ConvergenceError
from .statevector import StateVector, _apply_gate_in_place, sample_counts
from .observables import z_parity_from_counts

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_COARSE_POINTS = 16          # pre-bracketing grid over [0, pi)
_ANGLE_TOL = 1e-10
_MAX_COST_EVALS = 500


@dataclass(frozen=True)
class BCSProblem:
    """Momentum grid, band and interaction for the gap solve.

    ``nk`` momentum points uniform over [-pi, pi); ``hopping`` sets the
    energy unit t, ``interaction`` the attractive U >= 0, and ``filling``
    the band filling (0.5 = half filling, where the Fermi level is exactly
    zero for the symmetric cosine band).
    """

    nk: int
    hopping: float = 1.0
    interaction: float = 0.0
    filling: float = 0.5

    def __post_init__(self):
        if self.nk < 2:
            raise ValueError(f"need at least 2 momentum points, got {self.nk}")
        if self.interaction < 0:
            raise ValueError(f"interaction must be >= 0, got {self.interaction}")
        if not 0.0 < self.filling < 1.0:
            raise ValueError(f"filling must lie in (0, 1), got {self.filling}")

    @property
    def kgrid(self) -> np.ndarray:
        return -np.pi + 2.0 * np.pi * np.arange(self.nk) / self.nk

    @property
    def fermi_momentum(self) -> float:
        return np.pi * self.filling

    @property
    def chemical_potential(self) -> float:
        # exact zero at half filling for the symmetric band
        return 0.0 if self.filling == 0.5 else dispersion(self.fermi_momentum, self.hopping)

    def band_energies(self) -> np.ndarray:
        """eps_k measured from the Fermi level."""
        return dispersion(self.kgrid, self.hopping) - self.chemical_potential


def dispersion(k, hopping: float):
    """1D nearest-neighbour tight-binding band, eps_k = -2 t cos k."""
    return -2.0 * hopping * np.cos(k)


@dataclass
class GapSolveResult:
    delta: float
    angles: np.ndarray
    iterations: int
    history: list[float]
    converged: bool
    cost_history: list[float] = field(default_factory=list)


_HADAMARD_0 = cg.hadamard(0)


def pseudospin_expectations(theta: float, shots: int | None = None, seed=None) -> tuple[float, float]:
    """(<S^x>, <S^z>) of the one-qubit pseudospin prepared by Ry(2 theta).

    Exact statevector expectations by default; with ``shots`` the two
    projections are estimated from basis-rotated samples.  Closed forms are
    sin(2 theta)/2 and cos(2 theta)/2, cross-checked against this circuit
    in the tests.

    This sits in the innermost loop of the gap solve, so the kernel is
    driven directly on a private two-amplitude buffer: one rotation, a z
    read-out, then a Hadamard in place for the x read-out.
    """
    amps = np.zeros(2, dtype=complex)
    amps[0] = 1.0
    _apply_gate_in_place(amps, cg.ry(2.0 * theta, 0), 1)
    if shots is None:
        probs = amps.real ** 2 + amps.imag ** 2
        sz = float(probs[0] - probs[1])
        _apply_gate_in_place(amps, _HADAMARD_0, 1)
        probs = amps.real ** 2 + amps.imag ** 2
        sx = float(probs[0] - probs[1])
    else:
        rng = np.random.default_rng(seed)
        sz = z_parity_from_counts(sample_counts(StateVector(1, amps.copy()), shots, rng), (0,))
        _apply_gate_in_place(amps, _HADAMARD_0, 1)
        sx = z_parity_from_counts(sample_counts(StateVector(1, amps), shots, rng), (0,))
    return sx / 2.0, sz / 2.0


def fermi_guess(problem: BCSProblem) -> np.ndarray:
    """Step-function initial angles: occupied (|k| < k_F) -> 0, empty -> pi/2."""
    return np.where(np.abs(problem.kgrid) < problem.fermi_momentum, 0.0, np.pi / 2.0)


def _per_k_cost(eps: float, delta: float, shots=None, rng=None):
    def f(theta: float) -> float:
        sx, sz = pseudospin_expectations(theta, shots, rng)
        return 2.0 * eps * sz - delta * sx
    return f


def cost(problem: BCSProblem, angles: np.ndarray, delta: float,
         shots: int | None = None, seed=None) -> float:
    """Total energy cost of the given pseudospin angles at gap ``delta``."""
    angles = np.asarray(angles, dtype=float)
    if angles.shape != (problem.nk,):
        raise ValueError(f"expected {problem.nk} angles, got shape {angles.shape}")
    rng = np.random.default_rng(seed) if shots is not None else None
    eps = problem.band_energies()
    return sum(_per_k_cost(eps[i], delta, shots, rng)(angles[i]) for i in range(problem.nk))


def _golden_section(f, lo: float, hi: float, tol: float, budget: list[int]) -> float:
    def feval(t):
        budget[0] -= 1
        if budget[0] < 0:
            raise ConvergenceError("angle search exceeded its evaluation budget")
        return f(t)

    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = feval(c), feval(d)
    while hi - lo > tol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = feval(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = feval(d)
    return 0.5 * (lo + hi)


def _minimize_angle(f, initial: float | None, polish: bool) -> float:
    """Golden-section minimum of a pi-periodic cost over [0, pi).

    A coarse scan brackets the minimum first (the cost is sinusoidal in
    2*theta, so a 16-point grid always isolates it); a short Newton polish
    using central differences then tightens stationarity well below the
    golden-section plateau.
    """
    budget = [_MAX_COST_EVALS]
    grid = np.linspace(0.0, np.pi, _COARSE_POINTS, endpoint=False)
    candidates = list(grid) + ([initial % np.pi] if initial is not None else [])
    values = [f(t) for t in candidates]
    budget[0] -= len(candidates)
    best = candidates[int(np.argmin(values))]
    half_window = np.pi / _COARSE_POINTS
    theta = _golden_section(f, best - half_window, best + half_window, _ANGLE_TOL, budget)
    if polish:
        h = 1e-6
        for _ in range(2):
            f0, fp, fm = f(theta), f(theta + h), f(theta - h)
            curvature = (fp - 2.0 * f0 + fm) / (h * h)
            if curvature <= 0.0:
                break
            step = -(fp - fm) / (2.0 * h) / curvature
            if abs(step) > half_window:
                break
            if f(theta + step) <= f0:
                theta += step
    return theta % np.pi


def minimize_angles(problem: BCSProblem, delta: float,
                    initial: np.ndarray | None = None,
                    shots: int | None = None, seed=None) -> np.ndarray:
    """Optimal pseudospin angle for every momentum point.

    The cost separates over k, so this is ``nk`` independent 1-D
    minimizations over theta in [0, pi).
    """
    eps = problem.band_energies()
    if initial is not None:
        initial = np.asarray(initial, dtype=float)
        if initial.shape != (problem.nk,):
            raise ValueError(f"expected {problem.nk} initial angles, got shape {initial.shape}")
    rng = np.random.default_rng(seed) if shots is not None else None
    angles = np.empty(problem.nk)
    for i in range(problem.nk):
        f = _per_k_cost(eps[i], delta, shots, rng)
        start = None if initial is None else float(initial[i])
        try:
            angles[i] = _minimize_angle(f, start, polish=shots is None)
        except ConvergenceError as exc:
            raise ConvergenceError(
                f"angle search for k index {i} did not converge: {exc}",
                best=angles[:i].copy(),
            ) from None
    return angles


def gap_update(problem: BCSProblem, angles: np.ndarray,
               shots: int | None = None, seed=None) -> float:
    """Gap from the measured pairing projections: (U / N_k) sum_k <S^x_k>."""
    rng = np.random.default_rng(seed) if shots is not None else None
    sx = np.array([pseudospin_expectations(t, shots, rng)[0] for t in angles])
    return problem.interaction / problem.nk * float(sx.sum())


def solve_gap(problem: BCSProblem, tol: float = 1e-8, max_iter: int = 200,
              mixing: float = 0.5, seed_delta: float | None = None,
              shots: int | None = None, seed=None) -> GapSolveResult:
    """Alternate angle optimization and gap update until self-consistent.

    Stops when the residual |Delta - (U/N_k) sum <S^x>| drops below ``tol``
    (which also bounds the step |Delta_new - Delta| = mixing * residual);
    otherwise mixes: Delta <- (1 - mixing) Delta + mixing * update.  Delta=0
    is always a fixed point, so a nonzero ``seed_delta`` (default 0.1 t) is
    needed to reach the superconducting branch.  Returns converged=False
    with the full history if ``max_iter`` is exhausted.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not 0.0 < mixing <= 1.0:
        raise ValueError(f"mixing must lie in (0, 1], got {mixing}")
    if seed_delta is None:
        seed_delta = 0.1 * problem.hopping
    if seed_delta <= 0:
        raise ValueError("seed_delta must be positive")

    rng = np.random.default_rng(seed) if shots is not None else None
    if problem.interaction == 0.0:
        # the update map is identically zero regardless of the angles, so
        # the fixed point Delta = 0 is exact and is taken directly
        angles = minimize_angles(problem, 0.0, fermi_guess(problem), shots, rng)
        return GapSolveResult(
            delta=0.0, angles=angles, iterations=1, history=[0.0],
            converged=True, cost_history=[cost(problem, angles, 0.0)],
        )

    delta = float(seed_delta)
    angles = fermi_guess(problem)
    history = [delta]
    cost_history = []
    for iteration in range(1, max_iter + 1):
        angles = minimize_angles(problem, delta, angles, shots, rng)
        update = gap_update(problem, angles, shots, rng)
        cost_history.append(cost(problem, angles, delta) if shots is None
                            else cost(problem, angles, delta, shots, rng))
        if abs(update - delta) < tol:
            return GapSolveResult(delta, angles, iteration, history, True, cost_history)
        delta = (1.0 - mixing) * delta + mixing * update
        history.append(delta)
    return GapSolveResult(delta, angles, max_iter, history, False, cost_history)


def ktable(problem: BCSProblem, result: GapSolveResult) -> list[tuple[float, float, float, float, float]]:
    """Per-momentum rows (k, eps_k, theta_k, <S^x>, <S^z>) at the solution."""
    eps = problem.band_energies()
    rows = []
    for k, e, theta in zip(problem.kgrid, eps, result.angles):
        sx, sz = pseudospin_expectations(theta)
        rows.append((float(k), float(e), float(theta), sx, sz))
    return rows
