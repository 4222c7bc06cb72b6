"""Text formats: run configurations, CSV series and metadata sidecars.

Configuration format, version 1
-------------------------------
One ``key = value`` pair per line; ``#`` starts a comment; blank lines are
ignored.  Keys are the :class:`~twoqubit_cm.model.SchemeConfig` field names
plus an optional ``format = 1`` line.  Numeric values may be arithmetic
expressions in ``pi`` (``theta = 0.95*pi/2``).  ``scheme`` and ``theta`` are
required; every other field defaults to the resonant scheme-A values.  Unknown
keys, repeated keys and out-of-range values are errors.

Sidecar format
--------------
A ``[run]`` section of free ``key = value`` metadata followed by a ``[config]``
section in the configuration format above, written with ``repr`` floats so
:func:`parse_config` reproduces the run's configuration exactly.
"""
from __future__ import annotations

import ast
import csv
import io
import math
import operator
import os
import tempfile
from dataclasses import fields
from pathlib import Path

import numpy as np

from .model import ConfigError, SchemeConfig

FORMAT_VERSION = 1
REQUIRED = ("scheme", "theta")
_FIELDS = {f.name: f for f in fields(SchemeConfig)}
_INT_FIELDS = {"n_collisions"}
_BOOL_FIELDS = {"allow_unused"}


class ConfigSyntaxError(ConfigError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNOPS = {ast.UAdd: operator.pos, ast.USub: operator.neg}


def eval_number(text: str) -> float:
    """Evaluate a numeric literal or an arithmetic expression in ``pi``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return node.value
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
            return _UNOPS[type(node.op)](ev(node.operand))
        raise ValueError(f"unsupported expression {text!r}")

    return ev(ast.parse(text, mode="eval"))


def _convert(key: str, raw: str):
    if key == "scheme":
        return raw.strip().strip("'\"")
    if key in _BOOL_FIELDS:
        low = raw.lower()
        if low in ("true", "yes", "1"):
            return True
        if low in ("false", "no", "0"):
            return False
        raise ValueError(f"expected a boolean, got {raw!r}")
    value = eval_number(raw)
    if key in _INT_FIELDS:
        if float(value) != int(value):
            raise ValueError(f"expected an integer, got {raw!r}")
        return int(value)
    return float(value)


def parse_config(source) -> SchemeConfig:
    """Parse a configuration from text or from a path.

    ``source`` is treated as a path when it is a :class:`~pathlib.Path` or a
    string without newlines naming an existing file.
    """
    if isinstance(source, Path) or ("\n" not in str(source) and os.path.isfile(str(source))):
        text = Path(source).read_text()
    else:
        text = str(source)
    values: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        if "=" not in body:
            col = len(body) - len(body.lstrip()) + 1
            raise ConfigSyntaxError("expected 'key = value'", lineno, col)
        key_part, raw = body.split("=", 1)
        key = key_part.strip()
        val_col = len(key_part) + 2 + (len(raw) - len(raw.lstrip()))
        if key == "format":
            if raw.strip() != str(FORMAT_VERSION):
                raise ConfigSyntaxError(f"unsupported format version {raw.strip()!r}", lineno, val_col)
            continue
        if key not in _FIELDS:
            raise ConfigSyntaxError(f"unknown key {key!r}", lineno, len(key_part) - len(key_part.lstrip()) + 1)
        if key in values:
            raise ConfigSyntaxError(f"duplicate key {key!r}", lineno, 1)
        if not raw.strip():
            raise ConfigSyntaxError(f"missing value for {key!r}", lineno, val_col)
        try:
            values[key] = _convert(key, raw.strip())
        except (ValueError, SyntaxError, ZeroDivisionError) as exc:
            raise ConfigSyntaxError(f"bad value for {key!r}: {exc}", lineno, val_col) from None
    missing = [k for k in REQUIRED if k not in values]
    if missing:
        raise ConfigError(f"missing required fields: {', '.join(missing)}", missing[0])
    return SchemeConfig(**values)


def format_config(config: SchemeConfig) -> str:
    lines = [f"format = {FORMAT_VERSION}"]
    for name in _FIELDS:
        v = getattr(config, name)
        lines.append(f"{name} = {v!r}" if isinstance(v, float) else f"{name} = {v}")
    return "\n".join(lines) + "\n"


def atomic_write(path: Path, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def fmt_float(x: float) -> str:
    return f"{float(x):.17g}"


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_float(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def write_series_csv(path: Path, columns: dict[str, np.ndarray], index_name: str = "step", index=None) -> None:
    """One row per step (or per ``index`` value), one column per entry of ``columns``."""
    names = list(columns)
    n = len(next(iter(columns.values()))) if columns else 0
    idx = np.arange(n) if index is None else np.asarray(index)
    rows = []
    for i in range(n):
        lead = int(idx[i]) if np.issubdtype(idx.dtype, np.integer) else float(idx[i])
        rows.append([lead] + [float(columns[c][i]) for c in names])
    atomic_write(path, csv_text([index_name] + names, rows))


def read_csv(path: Path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


def sidecar_text(config: SchemeConfig, run_info: dict) -> str:
    lines = ["[run]"]
    for k, v in run_info.items():
        if isinstance(v, (list, tuple)):
            v = ", ".join(str(x) for x in v)
        lines.append(f"{k} = {v}")
    lines.append("")
    lines.append("[config]")
    return "\n".join(lines) + "\n" + format_config(config)


def write_sidecar(path: Path, config: SchemeConfig, run_info: dict) -> None:
    atomic_write(path, sidecar_text(config, run_info))


def read_sidecar(path: Path) -> tuple[dict, SchemeConfig]:
    """Return the ``[run]`` metadata and the parsed ``[config]`` section."""
    sections: dict[str, list[str]] = {}
    current = None
    for line in Path(path).read_text().splitlines():
        s = line.strip()
        if s.startswith("[") and s.endswith("]"):
            current = s[1:-1]
            sections[current] = []
        elif current is not None:
            sections[current].append(line)
    if "config" not in sections:
        raise ConfigError(f"{path}: no [config] section")
    info = {}
    for line in sections.get("run", []):
        if "=" in line:
            k, v = line.split("=", 1)
            info[k.strip()] = v.strip()
    return info, parse_config("\n".join(sections["config"]) + "\n")
