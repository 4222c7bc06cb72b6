import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twoqubit_cm.linalg import SubsystemLayout, partial_trace, unitarity_defect
from twoqubit_cm.model import (
    STATE_NAMES,
    SWAP,
    SX,
    SY,
    SZ,
    ConfigError,
    SchemeConfig,
    build_hamiltonian,
    named_state,
    named_vector,
    partial_swap_unitary,
    raw_vector,
    thermal_ancilla,
)

AB = SubsystemLayout(["A", "B"])


def test_thermal_ancilla_values():
    assert np.allclose(np.diag(thermal_ancilla(1.0, 1.0)).real, [0.11920, 0.88080], atol=1e-5)
    z = math.exp(-4) + math.exp(4)
    assert np.allclose(np.diag(thermal_ancilla(1.0, 4.0)).real, [math.exp(-4) / z, math.exp(4) / z], atol=1e-15)
    assert np.allclose(thermal_ancilla(1.0, 1e3), np.diag([0, 1]), atol=1e-300)


@settings(max_examples=100, deadline=None)
@given(omega=st.floats(0.01, 10), b1=st.floats(1e-3, 100), b2=st.floats(1e-3, 100))
def test_thermal_ancilla_properties(omega, b1, b2):
    r1, r2 = thermal_ancilla(omega, b1), thermal_ancilla(omega, b2)
    assert abs(np.trace(r1) - 1) < 1e-14
    assert np.all(np.diag(r1).real >= 0)
    assert np.count_nonzero(r1 - np.diag(np.diag(r1))) == 0
    lo, hi = sorted((b1, b2))
    rlo, rhi = thermal_ancilla(omega, lo), thermal_ancilla(omega, hi)
    assert rhi[0, 0].real <= rlo[0, 0].real


@pytest.mark.parametrize("beta", [0.0, -1.0, math.inf, math.nan])
def test_thermal_ancilla_rejects_bad_beta(beta):
    with pytest.raises(ConfigError):
        thermal_ancilla(1.0, beta)


def test_hamiltonian_uncoupled_is_diagonal():
    cfg = SchemeConfig(g_s1s2=0.0, g_s2aR=0.0, omega_s1=1.0, omega_s2=2.0, omega_aR=3.0)
    lay = SubsystemLayout(["s1", "s2", "aR_n", "aR_next"])
    h = build_hamiltonian(cfg, lay)
    assert np.count_nonzero(h - np.diag(np.diag(h))) == 0
    # basis |0000> has all three +omega
    assert h[0, 0] == 6.0
    assert h[15, 15] == -6.0


@pytest.mark.parametrize("scheme", ["A", "B"])
def test_hamiltonian_hermitian(scheme):
    cfg = SchemeConfig(scheme=scheme, g_s1aL=0.85 if scheme == "B" else 0.0)
    labels = ["s1", "s2", "aR_n", "aR_next"] if scheme == "A" else ["s1", "s2", "aL_n", "aL_next", "aR_n", "aR_next"]
    h = build_hamiltonian(cfg, SubsystemLayout(labels))
    assert np.abs(h - h.conj().T).max() < 1e-14


def test_hamiltonian_xy_two_qubit_spectrum():
    g = 0.95
    cfg = SchemeConfig(omega_s1=0, omega_s2=0, omega_aR=0, g_s1s2=g, g_s2aR=0)
    h = build_hamiltonian(cfg, SubsystemLayout(["s1", "s2", "aR_n"]))
    h12 = partial_trace(h, SubsystemLayout(["s1", "s2", "aR_n"]), ["s1", "s2"]) / 2
    assert np.allclose(np.linalg.eigvalsh(h12), [-2 * g, 0, 0, 2 * g], atol=1e-14)


def test_hamiltonian_layout_mismatch():
    with pytest.raises(ValueError):
        build_hamiltonian(SchemeConfig(scheme="B", g_s1aL=0.5), SubsystemLayout(["s1", "s2", "aR_n"]))


def test_swap_matrix_is_permutation():
    expect = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    assert np.abs(SWAP - expect).max() < 1e-15


def test_partial_swap_limits():
    assert np.allclose(partial_swap_unitary(0.0), np.eye(4), atol=1e-15)
    assert np.allclose(partial_swap_unitary(math.pi / 2), -1j * SWAP, atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(theta=st.floats(0, math.pi / 2))
def test_partial_swap_unitary(theta):
    u = partial_swap_unitary(theta)
    assert unitarity_defect(u) < 1e-14
    # inverse is the same form with -theta
    inv = math.cos(theta) * np.eye(4) + 1j * math.sin(theta) * SWAP
    assert np.abs(u @ inv - np.eye(4)).max() < 1e-14


def test_full_swap_exchanges_states(rand_rho):
    ra, rb = rand_rho(2), rand_rho(2)
    u = partial_swap_unitary(math.pi / 2)
    out = u @ np.kron(ra, rb) @ u.conj().T
    assert np.allclose(partial_trace(out, AB, ["A"]), rb, atol=1e-14)
    assert np.allclose(partial_trace(out, AB, ["B"]), ra, atol=1e-14)


def test_partial_swap_range():
    with pytest.raises(ConfigError):
        partial_swap_unitary(2.0)


def test_named_states():
    phi = named_state("bell_phi_plus")
    expect = np.zeros((4, 4))
    expect[np.ix_([0, 3], [0, 3])] = 0.5
    assert np.allclose(phi, expect, atol=1e-15)
    v = named_vector("ns3_prime")
    raw = np.array([-0.575, -0.346 + 0.310j, -0.265 - 0.229j, 0.575])
    assert abs(np.linalg.norm(raw) - 0.9999) < 1e-4
    assert np.allclose(v, raw / np.linalg.norm(raw))
    assert np.allclose(named_vector("ns3_double_prime"), [0, 1j / math.sqrt(2), 1 / math.sqrt(2), 0])
    # grouped printed factors expanded literally
    assert np.allclose(raw_vector("ns1")[1], -0.357 + 0.357j)
    for name in STATE_NAMES:
        assert abs(np.linalg.norm(named_vector(name)) - 1) < 1e-12
    with pytest.raises(KeyError):
        named_state("nope")


def test_config_defaults_match_trace_distance_caption():
    c = SchemeConfig()
    assert (c.g_s2aR, c.g_s1s2, c.dt, c.beta_aR, c.theta) == (0.85, 0.95, 0.08, 1.0, 0.0)


@pytest.mark.parametrize(
    "kw, field",
    [
        (dict(theta=2.0), "theta"),
        (dict(theta=-0.1), "theta"),
        (dict(dt=0.0), "dt"),
        (dict(beta_aR=0.0), "beta_aR"),
        (dict(beta_aR=math.inf), "beta_aR"),
        (dict(n_collisions=0), "n_collisions"),
        (dict(scheme="C"), "scheme"),
        (dict(g_s1aL=0.5), "g_s1aL"),
        (dict(beta_aL=2.0), "beta_aL"),
    ],
)
def test_config_rejections(kw, field):
    with pytest.raises(ConfigError) as info:
        SchemeConfig(**kw)
    assert info.value.field == field


def test_scheme_a_override_flag():
    c = SchemeConfig(g_s1aL=0.5, allow_unused=True)
    assert c.g_s1aL == 0.5
    assert SchemeConfig(scheme="b", g_s1aL=0.5).scheme == "B"


def test_pauli_algebra():
    assert np.allclose(SX @ SY, 1j * SZ)
