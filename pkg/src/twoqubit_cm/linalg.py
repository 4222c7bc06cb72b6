"""Dense complex linear algebra on small operator spaces.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Multi-qubit
operators carry their tensor-factor ordering in a :class:`SubsystemLayout`;
the global ordering convention is ``s1, s2``, then left-ancilla labels, then
right-ancilla labels.  Every embedding and partial trace goes through a layout
so no caller computes Kronecker positions by hand.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by every module."""

    hermitian: float = 1e-10
    unitary: float = 1e-12
    trace: float = 1e-10
    psd: float = 1e-9


TOL = Tolerances()


class LayoutError(ValueError):
    """Matrix dimension and subsystem layout disagree, or a label is unknown."""


class NotHermitianError(ValueError):
    pass


class NotPositiveError(ValueError):
    """A matrix expected to be positive semidefinite has a clearly negative eigenvalue."""


@dataclass(frozen=True)
class SubsystemLayout:
    """Ordered tensor factors of a composite Hilbert space."""

    labels: tuple[str, ...]
    dims: tuple[int, ...]

    def __init__(self, labels: Sequence[str], dims: Sequence[int] | None = None):
        labels = tuple(labels)
        dims = tuple(int(d) for d in dims) if dims is not None else (2,) * len(labels)
        if len(labels) != len(dims):
            raise LayoutError("labels and dims differ in length")
        if len(set(labels)) != len(labels):
            raise LayoutError(f"duplicate labels in {labels}")
        if any(d < 1 for d in dims):
            raise LayoutError("subsystem dimensions must be positive")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LayoutError(f"unknown subsystem label {label!r}") from None

    def sublayout(self, keep: Iterable[str]) -> "SubsystemLayout":
        idx = sorted(self.index(k) for k in keep)
        return SubsystemLayout([self.labels[i] for i in idx], [self.dims[i] for i in idx])

    def relabel(self, mapping: dict[str, str]) -> "SubsystemLayout":
        return SubsystemLayout([mapping.get(l, l) for l in self.labels], self.dims)

    def check(self, m: np.ndarray) -> None:
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise LayoutError(f"expected a square matrix, got shape {m.shape}")
        if m.shape[0] != self.dim:
            raise LayoutError(f"matrix dimension {m.shape[0]} does not match layout {self}")


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d array, got {m.ndim}-d")
    return m


def dag(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def allclose(a, b, atol: float) -> bool:
    """Entrywise equality with an explicit absolute tolerance."""
    a, b = np.asarray(a), np.asarray(b)
    return a.shape == b.shape and bool(np.max(np.abs(a - b), initial=0.0) <= atol)


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(*ops) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(out, as_matrix(op))
    return out


def partial_trace(m, layout: SubsystemLayout, keep: Iterable[str]) -> np.ndarray:
    """Reduce ``m`` onto the subsystems in ``keep``.

    The result is ordered as in ``layout`` regardless of the order of ``keep``.
    Keeping nothing returns the 1x1 matrix ``[[trace(m)]]``.
    """
    m = as_matrix(m)
    layout.check(m)
    keep_idx = sorted({layout.index(k) for k in keep})
    n = len(layout)
    t = m.reshape(layout.dims + layout.dims)
    traced = [i for i in range(n) if i not in keep_idx]
    # contract from the highest axis so remaining axis numbers stay valid
    for k, i in enumerate(sorted(traced, reverse=True)):
        remaining = n - k
        t = np.trace(t, axis1=i, axis2=i + remaining)
    d = int(np.prod([layout.dims[i] for i in keep_idx]))
    return t.reshape(d, d)


def permute_subsystems(m, layout: SubsystemLayout, order: Sequence[str]) -> np.ndarray:
    """Reorder the tensor factors of ``m`` so they follow ``order``."""
    m = as_matrix(m)
    layout.check(m)
    if sorted(order) != sorted(layout.labels):
        raise LayoutError(f"{order} is not a permutation of {layout.labels}")
    perm = [layout.index(l) for l in order]
    n = len(layout)
    t = m.reshape(layout.dims + layout.dims)
    t = t.transpose(perm + [p + n for p in perm])
    return t.reshape(m.shape)


def embed(op, layout: SubsystemLayout, targets: Sequence[str]) -> np.ndarray:
    """Lift ``op`` acting on ``targets`` (in that factor order) to the full layout."""
    op = as_matrix(op)
    targets = list(targets)
    if len(set(targets)) != len(targets):
        raise LayoutError(f"repeated target labels {targets}")
    tdims = [layout.dims[layout.index(t)] for t in targets]
    if op.shape != (int(np.prod(tdims)),) * 2:
        raise LayoutError(f"operator shape {op.shape} does not act on {targets}")
    rest = [l for l in layout.labels if l not in targets]
    rest_dim = int(np.prod([layout.dims[layout.index(l)] for l in rest]))
    full = np.kron(op, np.eye(rest_dim, dtype=complex))
    staged = SubsystemLayout(targets + rest, tdims + [layout.dims[layout.index(l)] for l in rest])
    return permute_subsystems(full, staged, layout.labels)


def is_hermitian(m, atol: float = TOL.hermitian) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= atol)


def hermitian_eig(m, atol: float = TOL.hermitian) -> tuple[np.ndarray, np.ndarray]:
    """Ascending real eigenvalues and orthonormal eigenvector columns.

    Raises
    ------
    NotHermitianError
        If ``m`` deviates from its adjoint by more than ``atol`` in max-norm.
    """
    m = as_matrix(m)
    if not is_hermitian(m, atol):
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    return np.linalg.eigh(0.5 * (m + dag(m)))


def unitary_from_hamiltonian(h, t: float) -> np.ndarray:
    """exp(-i h t) through the spectral decomposition of ``h``."""
    w, v = hermitian_eig(h)
    return (v * np.exp(-1j * w * t)) @ dag(v)


def psd_sqrt(m, atol: float = TOL.psd) -> np.ndarray:
    """Positive square root; eigenvalues in [-atol, 0) are clamped to zero."""
    w, v = hermitian_eig(m)
    if w.size and w[0] < -atol:
        raise NotPositiveError(f"eigenvalue {w[0]:.3e} below -{atol:g}")
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ dag(v)


def trace_norm(m) -> float:
    """Sum of singular values."""
    m = as_matrix(m)
    if is_hermitian(m, 1e-12):
        return float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (m + dag(m))))))
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def unitarity_defect(u) -> float:
    u = as_matrix(u)
    return float(np.max(np.abs(u @ dag(u) - np.eye(u.shape[0]))))
