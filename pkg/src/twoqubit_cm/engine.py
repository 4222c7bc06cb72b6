"""Collision recursions for schemes A and B.

Each step attaches fresh thermal ancillae, applies the system-ancilla unitary
``exp(-i H dt)`` followed by the partial swap(s) between the old and fresh
ancilla of each stream, and traces the old ancillae out.  The fresh ancillae,
now correlated with the system, are carried into the next step under the old
ancilla labels (``aL_n`` / ``aR_n``).

Working layouts follow the global factor ordering:

* scheme A: ``s1, s2, aR_n, aR_next`` (carried: ``s1, s2, aR_n``)
* scheme B: ``s1, s2, aL_n, aL_next, aR_n, aR_next`` (carried: ``s1, s2, aL_n, aR_n``)
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, NamedTuple

import numpy as np

from .linalg import (
    TOL,
    SubsystemLayout,
    dag,
    embed,
    kron_all,
    partial_trace,
    permute_subsystems,
    trace_norm,
    unitarity_defect,
    unitary_from_hamiltonian,
)
from .model import SchemeConfig, build_hamiltonian, partial_swap_unitary, thermal_ancilla

SYSTEM = ("s1", "s2")

CARRIED = {
    "A": SubsystemLayout(["s1", "s2", "aR_n"]),
    "B": SubsystemLayout(["s1", "s2", "aL_n", "aR_n"]),
}
WORKING = {
    "A": SubsystemLayout(["s1", "s2", "aR_n", "aR_next"]),
    "B": SubsystemLayout(["s1", "s2", "aL_n", "aL_next", "aR_n", "aR_next"]),
}
_FRESH = {"A": ("aR_next",), "B": ("aL_next", "aR_next")}
_SIDES = {"A": ("R",), "B": ("L", "R")}


class InvariantViolation(RuntimeError):
    """A carried state stopped being a density matrix."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message if step is None else f"step {step}: {message}")
        self.step = step


def check_density(rho: np.ndarray, tol_trace=TOL.trace, tol_herm=TOL.hermitian, tol_psd=TOL.psd) -> None:
    """Raise :class:`InvariantViolation` unless ``rho`` is a valid density matrix."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvariantViolation(f"not a square matrix: shape {rho.shape}")
    tr = np.trace(rho)
    if abs(tr - 1) > tol_trace:
        raise InvariantViolation(f"trace {tr:.15g} deviates from 1")
    herm = float(np.max(np.abs(rho - dag(rho))))
    if herm > tol_herm:
        raise InvariantViolation(f"Hermiticity residual {herm:.3e}")
    lo = float(np.linalg.eigvalsh(0.5 * (rho + dag(rho)))[0])
    if lo < -tol_psd:
        raise InvariantViolation(f"negative eigenvalue {lo:.3e}")


@dataclass(frozen=True)
class CollisionState:
    """Joint state of the system and the ancilla(e) carried between collisions."""

    joint: np.ndarray
    layout: SubsystemLayout
    step_index: int = 0

    @property
    def system(self) -> np.ndarray:
        return partial_trace(self.joint, self.layout, SYSTEM)


@dataclass
class TrajectoryRecord:
    """Reduced system states after each collision.

    ``states[n]`` is the system state after collision ``n + 1``; the state
    before any collision is kept separately in ``initial``.
    """

    config: SchemeConfig
    initial: np.ndarray
    states: np.ndarray
    measures: dict[str, np.ndarray] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.states)

    def with_initial(self) -> np.ndarray:
        """Stack of ``n_collisions + 1`` states, step 0 first."""
        return np.concatenate([self.initial[None], self.states])


class Propagator:
    """Step unitaries of one configuration, built once and reused every collision."""

    def __init__(self, config: SchemeConfig, include_swap: bool = True):
        self.config = config
        self.scheme = config.scheme
        self.carried = CARRIED[self.scheme]
        self.working = WORKING[self.scheme]
        h = build_hamiltonian(config, self.working)
        self.u_interaction = unitary_from_hamiltonian(h, config.dt)
        self.u_swaps = []
        if include_swap:
            swap = partial_swap_unitary(config.theta)
            for side in _SIDES[self.scheme]:
                self.u_swaps.append(embed(swap, self.working, [f"a{side}_n", f"a{side}_next"]))
        u = self.u_interaction
        for s in self.u_swaps:
            u = s @ u
        self.u_step = u
        self.fresh = self._fresh_ancillae()
        # order in which kron(joint, fresh...) lays out the factors
        self._stacked = SubsystemLayout(self.carried.labels + _FRESH[self.scheme])
        self._relabel = {f"a{s}_next": f"a{s}_n" for s in _SIDES[self.scheme]}
        self._keep = SYSTEM + _FRESH[self.scheme]

    def _fresh_ancillae(self) -> list[np.ndarray]:
        c = self.config
        if self.scheme == "A":
            return [thermal_ancilla(c.omega_aR, c.beta_aR)]
        return [thermal_ancilla(c.omega_aL, c.beta_aL), thermal_ancilla(c.omega_aR, c.beta_aR)]

    def unitaries(self) -> list[np.ndarray]:
        return [self.u_interaction, *self.u_swaps, self.u_step]

    def initial_state(self, system: np.ndarray) -> CollisionState:
        system = np.asarray(system, dtype=complex)
        if system.shape != (4, 4):
            raise ValueError(f"system state must be 4x4, got {system.shape}")
        try:
            check_density(system)
        except InvariantViolation as exc:
            raise ValueError(f"invalid initial system state: {exc}") from None
        return CollisionState(kron_all(system, *self.fresh), self.carried, 0)

    def expand(self, state: CollisionState) -> np.ndarray:
        """Joint state with fresh ancillae attached, in the working layout."""
        stacked = kron_all(state.joint, *self.fresh)
        return permute_subsystems(stacked, self._stacked, self.working.labels)

    def step(self, state: CollisionState, check: bool = True) -> CollisionState:
        rho = self.expand(state)
        rho = self.u_step @ rho @ dag(self.u_step)
        out = partial_trace(rho, self.working, self._keep)
        # the kept labels are ordered as in the working layout, which after
        # relabelling is exactly the carried layout
        out = 0.5 * (out + dag(out))
        n = state.step_index + 1
        if check:
            try:
                check_density(out)
            except InvariantViolation as exc:
                raise InvariantViolation(str(exc), n) from None
        return CollisionState(out, self.carried, n)


def init_scheme_a(system: np.ndarray, config: SchemeConfig) -> CollisionState:
    _require_scheme(config, "A")
    return Propagator(config).initial_state(system)


def init_scheme_b(system: np.ndarray, config: SchemeConfig) -> CollisionState:
    _require_scheme(config, "B")
    return Propagator(config).initial_state(system)


def step_scheme_a(state: CollisionState, config: SchemeConfig) -> CollisionState:
    _require_scheme(config, "A")
    return Propagator(config).step(state)


def step_scheme_b(state: CollisionState, config: SchemeConfig) -> CollisionState:
    _require_scheme(config, "B")
    return Propagator(config).step(state)


def _require_scheme(config: SchemeConfig, scheme: str) -> None:
    if config.scheme != scheme:
        raise ValueError(f"config is for scheme {config.scheme}, expected {scheme}")


def run(
    system: np.ndarray,
    config: SchemeConfig,
    measures: Mapping[str, Callable[[np.ndarray], float]] | None = None,
    propagator: Propagator | None = None,
) -> TrajectoryRecord:
    """Apply ``config.n_collisions`` collisions and record the system state after each.

    ``measures`` maps names to scalar functions of the 4x4 system state; they
    are evaluated on every stored state (step 0 included) and stored in
    ``record.measures`` with ``n_collisions + 1`` entries each.
    """
    prop = propagator or Propagator(config)
    state = prop.initial_state(system)
    initial = state.system
    states = np.empty((config.n_collisions, 4, 4), dtype=complex)
    for n in range(config.n_collisions):
        state = prop.step(state)
        states[n] = state.system
    rec = TrajectoryRecord(config, initial, states)
    for name, fn in (measures or {}).items():
        rec.measures[name] = np.array([fn(r) for r in rec.with_initial()])
    return rec


class SteadyState(NamedTuple):
    state: np.ndarray
    steps: int
    converged: bool
    residual: float


def find_steady_state(
    system: np.ndarray,
    config: SchemeConfig,
    tol: float = 1e-8,
    max_steps: int = 200_000,
) -> SteadyState:
    """Iterate collisions until successive system states differ by less than ``tol``.

    The difference is measured in trace norm.  Non-convergence within
    ``max_steps`` is reported through ``converged=False`` rather than raised,
    since memory effects can keep the system oscillating.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    prop = Propagator(config)
    state = prop.initial_state(system)
    prev = state.system
    residual = float("inf")
    for n in range(1, max_steps + 1):
        state = prop.step(state)
        cur = state.system
        residual = trace_norm(cur - prev)
        if residual < tol:
            return SteadyState(cur, n, True, residual)
        prev = cur
    return SteadyState(prev, max_steps, False, residual)


def check_unitaries(prop: Propagator, tol: float = TOL.unitary) -> float:
    worst = max(unitarity_defect(u) for u in prop.unitaries())
    if worst > tol:
        raise InvariantViolation(f"unitarity defect {worst:.3e}")
    return worst
