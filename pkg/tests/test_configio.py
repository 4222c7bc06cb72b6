import math

import numpy as np
import pytest

from twoqubit_cm.configio import (
    ConfigSyntaxError,
    atomic_write,
    eval_number,
    format_config,
    parse_config,
    read_csv,
    read_sidecar,
    write_series_csv,
    write_sidecar,
)
from twoqubit_cm.model import ConfigError, SchemeConfig

MINIMAL_A = """\
# trace-distance run, Markovian
scheme = A
theta = 0
"""


def test_minimal_document_gives_caption_values():
    cfg = parse_config(MINIMAL_A)
    assert cfg == SchemeConfig(scheme="A", theta=0.0)
    assert (cfg.g_s2aR, cfg.g_s1s2, cfg.dt, cfg.beta_aR) == (0.85, 0.95, 0.08, 1.0)


def test_expressions_and_comments():
    cfg = parse_config("format = 1\nscheme = B  # two streams\ntheta = 0.95*pi/2\ng_s1aL = 0.85\nbeta_aR = 2**2\n")
    assert cfg.theta == 0.95 * math.pi / 2
    assert cfg.beta_aR == 4.0
    assert cfg.scheme == "B"


def test_range_error_names_field():
    with pytest.raises(ConfigError) as info:
        parse_config("scheme = A\ntheta = 2.0\n")
    assert info.value.field == "theta"


def test_empty_document_lists_required_fields():
    with pytest.raises(ConfigError) as info:
        parse_config("")
    assert "scheme" in str(info.value) and "theta" in str(info.value)


def test_scheme_field_inconsistency():
    with pytest.raises(ConfigError) as info:
        parse_config("scheme = A\ntheta = 0\ng_s1aL = 0.5\n")
    assert info.value.field == "g_s1aL"
    assert parse_config("scheme = A\ntheta = 0\ng_s1aL = 0.5\nallow_unused = true\n").g_s1aL == 0.5


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("scheme = A\ntheta = 0\nbogus = 1\n", 3, 1),
        ("scheme = A\ntheta\n", 2, 1),
        ("scheme = A\ntheta = 0\ntheta = 1\n", 3, 1),
        ("scheme = A\ntheta = __import__('os')\n", 2, 9),
        ("scheme = A\ntheta = 0\nn_collisions = 2.5\n", 3, 16),
        ("format = 2\nscheme = A\ntheta = 0\n", 1, 10),
        ("scheme = A\n  theta =   \n", 2, 13),
    ],
)
def test_syntax_errors_carry_position(text, line, column):
    with pytest.raises(ConfigSyntaxError) as info:
        parse_config(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_eval_number_is_restricted():
    assert eval_number("-pi/4") == -math.pi / 4
    for bad in ("x", "pi()", "1 if 1 else 2", "True", "'1'"):
        with pytest.raises(ValueError):
            eval_number(bad)


def test_format_parse_round_trip():
    cfg = SchemeConfig(scheme="B", g_s1aL=0.5, theta=0.95 * math.pi / 2, beta_aR=1 / 3, n_collisions=17)
    assert parse_config(format_config(cfg)) == cfg


def test_parse_from_path(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text(MINIMAL_A)
    assert parse_config(p) == parse_config(str(p)) == parse_config(MINIMAL_A)


def test_csv_round_trip_is_lossless(tmp_path):
    vals = np.array([1.0, 1 / 3, math.pi * 1e-12, 0.1 + 0.2])
    p = tmp_path / "x.csv"
    write_series_csv(p, {"a": vals, "b": -vals})
    header, data = read_csv(p)
    assert header == ["step", "a", "b"]
    assert np.array_equal(data[:, 0], np.arange(4))
    assert np.array_equal(data[:, 1], vals) and np.array_equal(data[:, 2], -vals)


def test_sidecar_round_trip(tmp_path):
    cfg = SchemeConfig(scheme="B", g_s1aL=0.85, theta=0.95 * math.pi / 2, beta_aR=4.0)
    p = tmp_path / "run.meta.txt"
    write_sidecar(p, cfg, {"preset": "fig4b", "states": ("a", "b")})
    info, back = read_sidecar(p)
    assert back == cfg
    assert info["preset"] == "fig4b" and info["states"] == "a, b"


def test_atomic_write_leaves_no_partial_file(tmp_path, monkeypatch):
    target = tmp_path / "out.csv"
    target.write_text("old")

    class Boom(Exception):
        pass

    def fail(*_a, **_k):
        raise Boom

    monkeypatch.setattr("os.replace", fail)
    with pytest.raises(Boom):
        atomic_write(target, "new")
    assert target.read_text() == "old"
    assert [p.name for p in tmp_path.iterdir()] == ["out.csv"]
