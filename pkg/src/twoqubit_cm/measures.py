"""Scalar measures on reduced system states."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import as_matrix, hermitian_eig, psd_sqrt, trace_norm
from .model import SY, thermal_ancilla

_SYSY = np.kron(SY, SY)

REVIVAL_EPS = 1e-10


@dataclass
class MeasureSeries:
    """Per-collision values of one named measure."""

    name: str
    steps: np.ndarray
    values: np.ndarray
    config: object = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.steps = np.asarray(self.steps, dtype=int)
        self.values = np.asarray(self.values, dtype=float)
        if self.steps.shape != self.values.shape:
            raise ValueError("steps and values differ in length")
        if np.any(np.diff(self.steps) <= 0):
            raise ValueError("steps must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValueError(f"series {self.name!r} contains non-finite values")

    @classmethod
    def from_values(cls, name: str, values, config=None) -> "MeasureSeries":
        values = np.asarray(values, dtype=float)
        return cls(name, np.arange(len(values)), values, config)


def _same_shape(rho, sigma):
    rho, sigma = as_matrix(rho), as_matrix(sigma)
    if rho.shape != sigma.shape:
        raise ValueError(f"dimension mismatch: {rho.shape} vs {sigma.shape}")
    return rho, sigma


def trace_distance(rho, sigma) -> float:
    """Half the trace norm of ``rho - sigma``, clipped to its range [0, 1]."""
    rho, sigma = _same_shape(rho, sigma)
    return min(1.0, 0.5 * trace_norm(rho - sigma))


def revivals(series: MeasureSeries | np.ndarray, eps: float = REVIVAL_EPS) -> np.ndarray:
    """Single-step increases ``T(n+1) - T(n)`` exceeding ``eps``."""
    values = series.values if isinstance(series, MeasureSeries) else np.asarray(series, dtype=float)
    d = np.diff(values)
    return d[d > eps]


def blp_revival_count(series: MeasureSeries | np.ndarray, eps: float = REVIVAL_EPS) -> int:
    """Number of collisions across which the trace distance grows by more than ``eps``.

    Zero certifies monotone loss of distinguishability at resolution ``eps``;
    any positive count witnesses information backflow.
    """
    return int(revivals(series, eps).size)


def trace_distance_series(rec_a, rec_b, name: str = "trace_distance") -> MeasureSeries:
    """Trace distance between two trajectories run with one configuration."""
    if rec_a.config != rec_b.config:
        raise ValueError("trajectories were produced with different configurations")
    a, b = rec_a.with_initial(), rec_b.with_initial()
    return MeasureSeries.from_values(name, [trace_distance(x, y) for x, y in zip(a, b)], rec_a.config)


def spin_flip(rho) -> np.ndarray:
    """(sigma_y x sigma_y) rho* (sigma_y x sigma_y)."""
    return _SYSY @ np.conj(rho) @ _SYSY


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit state.

    The lambdas, square roots of the eigenvalues of ``sqrt(rho) rho~ sqrt(rho)``,
    are taken as the singular values of ``sqrt(rho) (Y x Y) conj(sqrt(rho))``,
    whose Gram matrix is that same operator.  Square roots of round-off-level
    eigenvalues would otherwise cost ~1e-8 accuracy on pure states.
    """
    rho = as_matrix(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"concurrence needs a 4x4 state, got {rho.shape}")
    s = psd_sqrt(rho)
    lam = np.linalg.svd(s @ _SYSY @ s.conj(), compute_uv=False)  # descending
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)), not squared.

    F is symmetric, so the argument with the smaller least eigenvalue goes in
    the outer square roots: a near-rank-deficient state in the middle would
    have its round-off eigenvalues square-rooted, costing ~1e-8.
    """
    rho, sigma = _same_shape(rho, sigma)
    w_rho, w_sigma = hermitian_eig(rho)[0], hermitian_eig(sigma)[0]
    if w_sigma[0] < w_rho[0]:
        rho, sigma = sigma, rho
    s = psd_sqrt(rho)
    inner = s @ sigma @ s
    w = hermitian_eig(0.5 * (inner + inner.conj().T))[0]
    return float(min(1.0, np.sum(np.sqrt(np.clip(w, 0.0, None)))))


def gibbs_state(omega: float, beta: float) -> np.ndarray:
    """Thermal state of a system qubit's bare Hamiltonian ``omega * sigma_z``."""
    return thermal_ancilla(omega, beta)
