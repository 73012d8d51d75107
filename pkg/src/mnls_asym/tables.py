"""CSV and JSON writers/readers with deterministic formatting."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import ConfigError


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_csv(path: str | Path, header: list[str], rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else repr(f)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def write_json(path: str | Path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n")
    return path


def write_scattering(path, sd) -> Path:
    rows = zip(sd.lambda_grid, sd.s11.real, sd.s11.imag, sd.s21.real, sd.s21.imag, sd.r.real, sd.r.imag)
    return write_csv(path, ["lambda", "re_s11", "im_s11", "re_s21", "im_s21", "re_r", "im_r"], rows)


def write_scattering_vertical(path, sd) -> Path:
    rv = sd.r_vertical
    rows = zip(sd.eta_grid, sd.s11_vertical.real, sd.s11_vertical.imag, sd.s21_vertical.real,
               sd.s21_vertical.imag, rv.real, rv.imag)
    return write_csv(path, ["eta", "re_s11", "im_s11", "re_s21", "im_s21", "re_r", "im_r"], rows)


def write_field(path, f) -> Path:
    return write_csv(path, ["x", "re_q", "im_q"], zip(f.x, f.values.real, f.values.imag))


def read_potential_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Read ``x, re_q, im_q`` columns (a header line is optional)."""
    try:
        raw = np.genfromtxt(path, delimiter=",", comments="#")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    raw = np.atleast_2d(raw)
    raw = raw[~np.isnan(raw).any(axis=1)]
    if raw.shape[1] != 3 or raw.shape[0] < 3:
        raise ConfigError(f"{path}: expected three numeric columns x, re_q, im_q")
    return raw[:, 0], raw[:, 1] + 1j * raw[:, 2]
