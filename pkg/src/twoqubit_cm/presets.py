"""Figure presets, parameter sweeps and the measure registry behind the CLI."""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .configio import csv_text, atomic_write, write_series_csv, write_sidecar
from .engine import find_steady_state, run
from .linalg import SubsystemLayout, partial_trace
from .measures import concurrence, fidelity, gibbs_state, trace_distance
from .model import STATE_NAMES, SchemeConfig, named_state
from .phasespace import nonclassical_volume, wigner_two_qubit

NON_MARKOVIAN_THETA = 0.95 * math.pi / 2

#: phase-space point at which the Wigner-function figures are sampled
WIGNER_ANGLES = (math.pi / 2, math.pi / 6, math.pi / 2, math.pi / 6)

#: default temperature grid of the steady-state fidelity presets
FIG9_TEMPERATURES = tuple(round(0.2 * k, 10) for k in range(1, 51))

_PAIR = SubsystemLayout(["s1", "s2"])


def wigner_at_figure_point(rho) -> float:
    return wigner_two_qubit(rho, *WIGNER_ANGLES)


STATE_MEASURES: dict[str, Callable[[np.ndarray], float]] = {
    "concurrence": concurrence,
    "wigner": wigner_at_figure_point,
    "nonclassical_volume": nonclassical_volume,
}
PAIR_MEASURES = {"trace_distance": trace_distance}
MEASURE_NAMES = tuple(STATE_MEASURES) + tuple(PAIR_MEASURES) + ("gibbs_fidelity",)


def short_name(state: str) -> str:
    for prefix in ("bell_", "basis_"):
        if state.startswith(prefix):
            return state[len(prefix):]
    return state


def qubit_marginals(rho) -> tuple[np.ndarray, np.ndarray]:
    return partial_trace(rho, _PAIR, ["s1"]), partial_trace(rho, _PAIR, ["s2"])


def gibbs_fidelities(rho, config: SchemeConfig) -> tuple[float, float]:
    """Fidelity of each system qubit's marginal with the Gibbs state of its bare Hamiltonian.

    The temperature of qubit ``s1`` is that of the left ancillae (scheme B) and
    of ``s2`` that of the right ancillae; scheme A uses the right stream for both.
    """
    r1, r2 = qubit_marginals(rho)
    beta1 = config.beta_aL if config.scheme == "B" else config.beta_aR
    return (
        fidelity(r1, gibbs_state(config.omega_s1, beta1)),
        fidelity(r2, gibbs_state(config.omega_s2, config.beta_aR)),
    )


@dataclass(frozen=True)
class ExperimentPreset:
    """Data behind one figure: configurations per panel, initial states, measures."""

    id: str
    description: str
    variants: dict[str, SchemeConfig]
    initial_states: tuple[str, ...]
    measures: tuple[str, ...]
    temperatures: tuple[float, ...] = field(default=())

    def columns(self, measure: str) -> list[str]:
        if measure == "trace_distance":
            a, b = self.initial_states
            return [f"T_{short_name(a)}_{short_name(b)}"]
        if measure == "gibbs_fidelity":
            return ["F_s1", "F_s2"]
        return [short_name(s) for s in self.initial_states]


def _scheme_a(theta, n=500):
    return SchemeConfig(scheme="A", theta=theta, n_collisions=n)


def _scheme_b(theta, beta_aR=1.0, n=500):
    return SchemeConfig(scheme="B", g_s1aL=0.85, theta=theta, beta_aL=1.0, beta_aR=beta_aR, n_collisions=n)


def _steady(**kw):
    base = dict(scheme="B", g_s1aL=0.5, g_s2aR=0.5, g_s1s2=0.95, dt=0.1, theta=NON_MARKOVIAN_THETA,
                n_collisions=200_000)
    base.update(kw)
    return SchemeConfig(**base)


def _ab(make, **kw):
    return {"markovian": make(0.0, **kw), "non_markovian": make(NON_MARKOVIAN_THETA, **kw)}


def _scheme_b_panels(n=500):
    out = {}
    for temps, beta_aR in (("equal_T", 1.0), ("unequal_T", 4.0)):
        for regime, theta in (("markovian", 0.0), ("non_markovian", NON_MARKOVIAN_THETA)):
            out[f"{temps}_{regime}"] = _scheme_b(theta, beta_aR, n)
    return out


_WIGNER_STATES = ("ns3_prime", "bell_phi_plus")
_BASIS = ("basis_00", "basis_01", "basis_10", "basis_11")

PRESETS: dict[str, ExperimentPreset] = {
    p.id: p
    for p in [
        ExperimentPreset("fig3", "trace distance of |phi+>, |phi->, scheme A",
                         _ab(_scheme_a), ("bell_phi_plus", "bell_phi_minus"), ("trace_distance",)),
        ExperimentPreset("fig4a", "trace distance of |phi+>, |phi->, scheme B, equal ancilla temperatures",
                         _ab(_scheme_b, beta_aR=1.0), ("bell_phi_plus", "bell_phi_minus"), ("trace_distance",)),
        ExperimentPreset("fig4b", "trace distance of |phi+>, |phi->, scheme B, beta_aL=1, beta_aR=4",
                         _ab(_scheme_b, beta_aR=4.0), ("bell_phi_plus", "bell_phi_minus"), ("trace_distance",)),
        ExperimentPreset("fig5a", "Wigner function and non-classical volume, scheme A, Markovian",
                         {"markovian": _scheme_a(0.0)}, _WIGNER_STATES, ("wigner", "nonclassical_volume")),
        ExperimentPreset("fig5b", "Wigner function and non-classical volume, scheme A, non-Markovian",
                         {"non_markovian": _scheme_a(NON_MARKOVIAN_THETA)}, _WIGNER_STATES,
                         ("wigner", "nonclassical_volume")),
        ExperimentPreset("fig6", "Wigner function and non-classical volume, scheme B",
                         _scheme_b_panels(), _WIGNER_STATES, ("wigner", "nonclassical_volume")),
        ExperimentPreset("fig7ab", "concurrence from product states, scheme A",
                         _ab(_scheme_a, n=1000), _BASIS, ("concurrence",)),
        ExperimentPreset("fig8", "concurrence from product states, scheme B",
                         _scheme_b_panels(1000), _BASIS, ("concurrence",)),
        ExperimentPreset("fig9a", "steady-state Gibbs fidelity vs ancilla temperature, resonant qubits",
                         {"resonant": _steady()}, ("basis_00",), ("gibbs_fidelity",), FIG9_TEMPERATURES),
        ExperimentPreset("fig9b", "steady-state Gibbs fidelity vs ancilla temperature, omega_s1 = omega_aL = 0.5",
                         {"detuned": _steady(omega_s1=0.5, omega_aL=0.5)}, ("basis_00",), ("gibbs_fidelity",),
                         FIG9_TEMPERATURES),
    ]
}


def get_preset(preset_id: str) -> ExperimentPreset:
    try:
        return PRESETS[preset_id]
    except KeyError:
        raise KeyError(f"unknown preset {preset_id!r}; available: {', '.join(PRESETS)}") from None


def _trajectory_job(args):
    state, config, measures = args
    rec = run(named_state(state), config, {m: STATE_MEASURES[m] for m in measures})
    return rec.with_initial(), rec.measures


def _steady_job(args):
    config, state, temperature, tol = args
    beta = 1.0 / temperature
    cfg = config.replace(beta_aL=beta, beta_aR=beta)
    res = find_steady_state(named_state(state), cfg, tol=tol, max_steps=config.n_collisions)
    f1, f2 = gibbs_fidelities(res.state, cfg)
    return temperature, beta, f1, f2, res.steps, res.converged, res.residual


def _map(fn, jobs, threads: int):
    if threads <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(threads, len(jobs))) as pool:
        return list(pool.map(fn, jobs))


def default_threads() -> int:
    return max(1, min(os.cpu_count() or 1, 8))


def run_preset(
    preset_id: str,
    output_dir,
    threads: int = 1,
    n_collisions: int | None = None,
    temperatures=None,
    tol: float = 1e-8,
) -> list[Path]:
    """Compute a preset's data and write CSVs plus one metadata sidecar per panel.

    Returns the written paths.  Trajectory CSVs have ``n_collisions + 1`` rows,
    step 0 being the initial state.
    """
    preset = get_preset(preset_id)
    out = Path(output_dir)
    written: list[Path] = []
    if preset.temperatures:
        temps = tuple(temperatures) if temperatures is not None else preset.temperatures
        for label, config in preset.variants.items():
            jobs = [(config, preset.initial_states[0], t, tol) for t in temps]
            rows = _map(_steady_job, jobs, threads)
            header = ["T_a", "beta", "F_s1", "F_s2", "steps", "converged", "residual"]
            body = [[float(t), float(b), f1, f2, int(n), int(c), float(r)] for t, b, f1, f2, n, c, r in rows]
            path = out / f"{preset.id}_{label}_gibbs_fidelity.csv"
            atomic_write(path, csv_text(header, body))
            meta = out / f"{preset.id}_{label}.meta.txt"
            write_sidecar(meta, config, _run_info(preset, label, temperatures=temps, tol=tol))
            written += [path, meta]
        return written
    for label, config in preset.variants.items():
        if n_collisions is not None:
            config = config.replace(n_collisions=n_collisions)
        state_measures = tuple(m for m in preset.measures if m in STATE_MEASURES)
        jobs = [(s, config, state_measures) for s in preset.initial_states]
        results = _map(_trajectory_job, jobs, threads)
        for m in preset.measures:
            if m == "trace_distance":
                (sa, _), (sb, _) = results
                cols = {preset.columns(m)[0]: np.array([trace_distance(x, y) for x, y in zip(sa, sb)])}
            else:
                cols = {c: res[1][m] for c, res in zip(preset.columns(m), results)}
            path = out / f"{preset.id}_{label}_{m}.csv"
            write_series_csv(path, cols)
            written.append(path)
        meta = out / f"{preset.id}_{label}.meta.txt"
        write_sidecar(meta, config, _run_info(preset, label))
        written.append(meta)
    return written


def _run_info(preset: ExperimentPreset, label: str, **extra) -> dict:
    info = {
        "library": "twoqubit_cm",
        "library_version": __version__,
        "preset": preset.id,
        "variant": label,
        "description": preset.description,
        "initial_states": preset.initial_states,
        "measures": preset.measures,
    }
    if "wigner" in preset.measures:
        info["wigner_angles"] = "theta1=pi/2, phi1=pi/6, theta2=pi/2, phi2=pi/6"
    info.update(extra)
    return info


def measure_trajectory(measure: str, config: SchemeConfig, states) -> dict[str, np.ndarray]:
    """Columns of one measure along trajectories from the named initial states."""
    states = list(states)
    if measure == "trace_distance":
        if len(states) != 2:
            raise ValueError("trace_distance needs exactly two initial states")
        a, b = (run(named_state(s), config).with_initial() for s in states)
        return {f"T_{short_name(states[0])}_{short_name(states[1])}": np.array(
            [trace_distance(x, y) for x, y in zip(a, b)])}
    if measure == "gibbs_fidelity":
        if len(states) != 1:
            raise ValueError("gibbs_fidelity needs exactly one initial state")
        f = np.array([gibbs_fidelities(r, config) for r in run(named_state(states[0]), config).with_initial()])
        return {"F_s1": f[:, 0], "F_s2": f[:, 1]}
    if measure not in STATE_MEASURES:
        raise KeyError(f"unknown measure {measure!r}; available: {', '.join(MEASURE_NAMES)}")
    fn = STATE_MEASURES[measure]
    return {short_name(s): run(named_state(s), config, {measure: fn}).measures[measure] for s in states}


def _sweep_job(args):
    i, config, measure, states = args
    try:
        return i, measure_trajectory(measure, config, states), None
    except Exception as exc:  # recorded in the index, the sweep goes on
        return i, None, f"{type(exc).__name__}: {exc}"


SWEEPABLE = tuple(f.name for f in fields(SchemeConfig) if f.name != "allow_unused")


def sweep(
    template: SchemeConfig,
    param: str,
    values,
    output_dir,
    measure: str = "trace_distance",
    states=("bell_phi_plus", "bell_phi_minus"),
    threads: int = 1,
) -> Path:
    """One trajectory per parameter value; writes per-value CSVs and an index file.

    Returns the index path.  Invalid values and failed runs are listed in the
    index with status ``error`` instead of aborting the sweep.
    """
    if param not in SWEEPABLE:
        raise ValueError(f"{param!r} is not a configuration field; choose from {', '.join(SWEEPABLE)}")
    if measure not in MEASURE_NAMES:
        raise KeyError(f"unknown measure {measure!r}")
    for s in states:
        if s not in STATE_NAMES:
            raise KeyError(f"unknown state {s!r}")
    out = Path(output_dir)
    values = list(values)
    rows: list[list] = [None] * len(values)
    jobs = []
    for i, v in enumerate(values):
        try:
            cfg = template.replace(**{param: v})
        except Exception as exc:
            rows[i] = [i, str(v), "error", "", f"{type(exc).__name__}: {exc}"]
            continue
        jobs.append((i, cfg, measure, tuple(states)))
    configs = {j[0]: j[1] for j in jobs}
    for i, cols, err in _map(_sweep_job, jobs, threads):
        if err is not None:
            rows[i] = [i, str(values[i]), "error", "", err]
            continue
        name = f"sweep_{param}_{i:03d}_{measure}.csv"
        write_series_csv(out / name, cols)
        write_sidecar(out / f"sweep_{param}_{i:03d}.meta.txt", configs[i], {
            "library": "twoqubit_cm", "library_version": __version__, "sweep_param": param,
            "value": repr(values[i]), "measure": measure, "initial_states": tuple(states)})
        rows[i] = [i, repr(values[i]), "ok", name, ""]
    index = out / f"sweep_{param}_index.csv"
    atomic_write(index, csv_text(["index", "value", "status", "file", "message"], rows))
    return index
