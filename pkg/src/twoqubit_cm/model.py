"""Physical ingredients of the two-qubit collision model.

Conventions: hbar = k_B = 1, the single-qubit basis is ``|0>, |1>`` with
``sigma_z = diag(1, -1)``, so ``|0>`` is the excited state at energy ``+omega``
and ``|1>`` the ground state at ``-omega``.  Free terms are ``omega * sigma_z``
(not ``omega * sigma_z / 2``) and couplings are of Heisenberg XY type,
``g (sigma_x sigma_x + sigma_y sigma_y)``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from .linalg import SubsystemLayout, embed, kron

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

#: 1/2 (sigma . sigma + I4), which is exactly the two-qubit SWAP matrix
SWAP = 0.5 * (kron(SX, SX) + kron(SY, SY) + kron(SZ, SZ) + np.eye(4))

THETA_MAX = math.pi / 2
_ANGLE_SLACK = 1e-12


class ConfigError(ValueError):
    """Invalid physical parameters; ``field`` names the offending entry."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


@dataclass(frozen=True)
class SchemeConfig:
    """All parameters of one collision-model run.

    Defaults reproduce the resonant scheme-A setup of the trace-distance
    figure (``g_s2aR = 0.85``, ``g_s1s2 = 0.95``, ``dt = 0.08``, ``beta = 1``).
    Scheme A has no left ancilla stream; its ``*_aL`` fields must keep their
    defaults unless ``allow_unused`` is set.
    """

    scheme: str = "A"
    omega_s1: float = 1.0
    omega_s2: float = 1.0
    omega_aL: float = 1.0
    omega_aR: float = 1.0
    g_s1s2: float = 0.95
    g_s1aL: float = 0.0
    g_s2aR: float = 0.85
    theta: float = 0.0
    dt: float = 0.08
    beta_aL: float = 1.0
    beta_aR: float = 1.0
    n_collisions: int = 500
    allow_unused: bool = False

    def __post_init__(self):
        scheme = str(self.scheme).upper()
        if scheme not in ("A", "B"):
            raise ConfigError(f"scheme must be 'A' or 'B', got {self.scheme!r}", "scheme")
        object.__setattr__(self, "scheme", scheme)
        for f in fields(self):
            if f.name in ("scheme", "n_collisions", "allow_unused"):
                continue
            v = getattr(self, f.name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigError(f"{f.name} must be a finite number, got {v!r}", f.name)
            object.__setattr__(self, f.name, float(v))
        if not (-_ANGLE_SLACK <= self.theta <= THETA_MAX + _ANGLE_SLACK):
            raise ConfigError(f"theta={self.theta} outside [0, pi/2]", "theta")
        if self.dt <= 0:
            raise ConfigError(f"dt must be positive, got {self.dt}", "dt")
        for name in ("beta_aL", "beta_aR"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive", name)
        n = self.n_collisions
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
            raise ConfigError(f"n_collisions must be a positive integer, got {n!r}", "n_collisions")
        object.__setattr__(self, "n_collisions", int(n))
        if scheme == "A" and not self.allow_unused:
            for name, default in _SCHEME_A_UNUSED.items():
                if getattr(self, name) != default:
                    raise ConfigError(
                        f"{name} has no effect in scheme A; pass allow_unused=True to keep it",
                        name,
                    )

    def replace(self, **changes) -> "SchemeConfig":
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return asdict(self)


_SCHEME_A_UNUSED = {"omega_aL": 1.0, "g_s1aL": 0.0, "beta_aL": 1.0}


def thermal_ancilla(omega: float, beta: float) -> np.ndarray:
    """Gibbs state of ``omega * sigma_z`` at inverse temperature ``beta``.

    Returns ``diag(exp(-beta*omega), exp(beta*omega)) / Z``.
    """
    if not math.isfinite(beta) or beta <= 0:
        raise ConfigError(f"beta must be positive and finite, got {beta}", "beta")
    x = 2.0 * beta * omega
    # p_excited = 1 / (1 + e^x), evaluated without overflow
    if x >= 0:
        e = math.exp(-x)
        p_exc = e / (1.0 + e)
    else:
        p_exc = 1.0 / (1.0 + math.exp(x))
    return np.diag([p_exc, 1.0 - p_exc]).astype(complex)


def xy_coupling(g: float) -> np.ndarray:
    return g * (kron(SX, SX) + kron(SY, SY))


def scheme_labels(scheme: str) -> tuple[str, ...]:
    """Subsystems touched by the system-ancilla unitary of ``scheme``."""
    return ("s1", "s2", "aR_n") if scheme == "A" else ("s1", "s2", "aL_n", "aR_n")


def build_hamiltonian(config: SchemeConfig, layout: SubsystemLayout) -> np.ndarray:
    """Interaction-step Hamiltonian of ``config.scheme`` embedded in ``layout``.

    ``layout`` must contain the labels ``s1``, ``s2``, ``aR_n`` and, for
    scheme B, ``aL_n``; any further factors receive the identity.
    """
    missing = [l for l in scheme_labels(config.scheme) if l not in layout.labels]
    if missing:
        raise ValueError(f"layout {layout.labels} lacks {missing} needed by scheme {config.scheme}")
    c = config
    h = (
        embed(c.omega_s1 * SZ, layout, ["s1"])
        + embed(c.omega_s2 * SZ, layout, ["s2"])
        + embed(c.omega_aR * SZ, layout, ["aR_n"])
        + embed(xy_coupling(c.g_s1s2), layout, ["s1", "s2"])
        + embed(xy_coupling(c.g_s2aR), layout, ["s2", "aR_n"])
    )
    if c.scheme == "B":
        h = h + embed(c.omega_aL * SZ, layout, ["aL_n"])
        h = h + embed(xy_coupling(c.g_s1aL), layout, ["s1", "aL_n"])
    return h


def partial_swap_unitary(theta: float) -> np.ndarray:
    """cos(theta) I4 - i sin(theta) SWAP between consecutive ancillae."""
    if not (-_ANGLE_SLACK <= theta <= THETA_MAX + _ANGLE_SLACK):
        raise ConfigError(f"theta={theta} outside [0, pi/2]", "theta")
    return math.cos(theta) * np.eye(4, dtype=complex) - 1j * math.sin(theta) * SWAP


_R2 = 1 / math.sqrt(2)

# Negative quantum states are stored at their printed three-digit precision.
_VECTORS = {
    "basis_00": [1, 0, 0, 0],
    "basis_01": [0, 1, 0, 0],
    "basis_10": [0, 0, 1, 0],
    "basis_11": [0, 0, 0, 1],
    "bell_phi_plus": [_R2, 0, 0, _R2],
    "bell_phi_minus": [_R2, 0, 0, -_R2],
    "bell_psi_plus": [0, _R2, _R2, 0],
    "bell_psi_minus": [0, _R2, -_R2, 0],
    "ns1": [-0.743, -0.357 + 0.357j, 0.102 + 0.102j, -0.414],
    "ns2": [0.788, -0.288 + 0.288j, -0.288 - 0.288j, -0.211],
    "ns3": [-0.0508, 0.631 - 0.228j, -0.279 - 0.682j, 0.0508],
    "ns3_prime": [-0.575, -0.346 + 0.310j, -0.265 - 0.229j, 0.575],
    "ns3_double_prime": [0, 1j * _R2, _R2, 0],
}

STATE_NAMES = tuple(_VECTORS)


def raw_vector(name: str) -> np.ndarray:
    """Amplitudes as printed, before renormalization."""
    try:
        return np.array(_VECTORS[name], dtype=complex)
    except KeyError:
        raise KeyError(f"unknown state {name!r}; choose from {', '.join(STATE_NAMES)}") from None


def named_vector(name: str) -> np.ndarray:
    v = raw_vector(name)
    return v / np.linalg.norm(v)


def named_state(name: str) -> np.ndarray:
    """Pure-state density matrix of a named two-qubit state."""
    v = named_vector(name)
    return np.outer(v, v.conj())


def maximally_mixed(dim: int = 4) -> np.ndarray:
    return np.eye(dim, dtype=complex) / dim
