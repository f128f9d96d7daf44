"""JSON state, witness and report files.

State file::

    {"dims": [2, 2], "amplitudes": [[0.7071, 0.0], [0.0, 0.0], ...], "label": "bell"}

Amplitudes are ``[re, im]`` pairs in row-major order (first party slowest).
Matrices are nested ``[[[re, im], ...], ...]`` row lists. Python's float
``repr`` is used for all numbers, so every double survives a round trip.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .errors import DimensionMismatch, LUError, StateFileError, ZeroState
from .pipeline import Verdict
from .state import LocalUnitaryTuple, PureState, make_state

FORMAT_VERSION = 1


def _reject_constant(name):
    raise StateFileError(f"non-finite number {name} in file")


def _load_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path}: invalid JSON ({exc})") from exc


def _default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def dump_json(obj, path=None, indent=1) -> str:
    text = json.dumps(obj, default=_default, allow_nan=False, indent=indent)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def complex_to_pairs(x) -> list:
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim == 0:
        return [float(x.real), float(x.imag)]
    return [complex_to_pairs(y) for y in x]


def pairs_to_complex(data, ndim: int) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise StateFileError(f"malformed [re, im] array: {exc}") from exc
    if arr.ndim != ndim + 1 or arr.shape[-1] != 2:
        raise StateFileError(f"expected {ndim}-d array of [re, im] pairs, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise StateFileError("non-finite number in array")
    return arr[..., 0] + 1j * arr[..., 1]


def state_to_dict(v: PureState, label: Optional[str] = None) -> dict:
    d = {"dims": list(v.dims), "amplitudes": complex_to_pairs(v.amplitudes)}
    if label is not None:
        d["label"] = label
    return d


def state_from_dict(d) -> PureState:
    if not isinstance(d, dict) or "dims" not in d or "amplitudes" not in d:
        raise StateFileError('state file needs "dims" and "amplitudes"')
    dims = d["dims"]
    if not isinstance(dims, list) or not all(isinstance(x, int) and not isinstance(x, bool)
                                             for x in dims):
        raise StateFileError('"dims" must be a list of integers')
    amps = pairs_to_complex(d["amplitudes"], 1)
    try:
        return make_state(dims, amps)
    except (DimensionMismatch, ZeroState) as exc:
        raise StateFileError(str(exc)) from exc


def read_state(path) -> PureState:
    return state_from_dict(_load_json(path))


def read_label(path) -> Optional[str]:
    d = _load_json(path)
    return d.get("label") if isinstance(d, dict) else None


def write_state(v: PureState, path, label: Optional[str] = None) -> None:
    dump_json(state_to_dict(v, label), path, indent=None)


def witness_to_list(U: LocalUnitaryTuple) -> list:
    return [complex_to_pairs(m) for m in U.matrices]


def witness_from_list(data) -> LocalUnitaryTuple:
    if not isinstance(data, list) or not data:
        raise StateFileError("witness must be a non-empty list of matrices")
    return LocalUnitaryTuple(tuple(pairs_to_complex(m, 2) for m in data))


def read_witness(path) -> LocalUnitaryTuple:
    """Accepts ``{"witness": [...]}`` (including report files) or a bare list."""
    d = _load_json(path)
    if isinstance(d, dict):
        if "verdict" in d and isinstance(d["verdict"], dict):
            d = d["verdict"]
        d = d.get("witness")
        if d is None:
            raise StateFileError(f"{path}: no witness present")
    return witness_from_list(d)


def verdict_to_dict(v: Verdict) -> dict:
    return {
        "kind": v.kind,
        "stage": v.stage,
        "witness": None if v.witness is None else witness_to_list(v.witness),
        "evidence": v.evidence,
        "tolerances": v.tolerances,
    }


def verdict_from_dict(d: dict) -> Verdict:
    try:
        w = d["witness"]
        return Verdict(
            kind=d["kind"],
            stage=d["stage"],
            witness=None if w is None else witness_from_list(w),
            evidence=d.get("evidence", {}),
            tolerances=d.get("tolerances", {}),
        )
    except (KeyError, TypeError, LUError) as exc:
        raise StateFileError(f"malformed verdict: {exc}") from exc


def make_report(command: str, payload: dict, seed=None, tolerances=None) -> dict:
    rep = {
        "tool": "luequiv",
        "version": __version__,
        "format": FORMAT_VERSION,
        "command": command,
        "seed": seed,
        "tolerances": tolerances or {},
    }
    rep.update(payload)
    return rep


def read_report(path) -> dict:
    d = _load_json(path)
    if not isinstance(d, dict) or d.get("tool") != "luequiv":
        raise StateFileError(f"{path}: not a luequiv report")
    return d
