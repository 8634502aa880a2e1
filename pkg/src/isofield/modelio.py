"""Model file format: JSON documents holding space, coefficients, and kernel.

Schema:
    {
      "space": "sphere:2",
      "m": 2,
      "coeffs": [[[...], ...], ...],        # row-major m x m matrices
      "tail": {"c": 1.0, "r": 0.5},          # optional
      "temporal": {"variant": ..., ...}      # optional; absent => spatial
    }

Temporal variants: {"variant": "pure_spatial"},
{"variant": "ar1", "phi": 0.6}, {"variant": "exponential", "theta": 1.5},
{"variant": "ma1", "phi": [[...], ...]} (coeffs then hold the per-degree
innovation covariances). All numbers are IEEE doubles and round-trip
through emission and parsing.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .errors import ModelFormatError
from .spaces import parse_space
from .spectral import (
    PureSpatial,
    SeparableScalar,
    SpatialModel,
    SpatioTemporalModel,
    TailEnvelope,
    VectorMA1,
)


def _matrix_to_rows(mat: np.ndarray) -> list[list[float]]:
    return [[float(v) for v in row] for row in np.asarray(mat)]


def _kernel_to_dict(kernel) -> dict:
    if isinstance(kernel, PureSpatial):
        return {"variant": "pure_spatial"}
    if isinstance(kernel, SeparableScalar):
        key = "phi" if kernel.kind == "ar1" else "theta"
        return {"variant": kernel.kind, key: float(kernel.param)}
    if isinstance(kernel, VectorMA1):
        return {"variant": "ma1", "phi": _matrix_to_rows(kernel.phi)}
    raise ModelFormatError(f"kernel {type(kernel).__name__} has no file representation")


def model_to_dict(model) -> dict:
    doc = {
        "space": model.space.label,
        "m": int(model.m),
        "coeffs": [_matrix_to_rows(c) for c in model.coeffs],
    }
    if model.tail is not None:
        doc["tail"] = {"c": float(model.tail.c), "r": float(model.tail.r)}
    if isinstance(model, SpatioTemporalModel):
        doc["temporal"] = _kernel_to_dict(model.kernel)
    return doc


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ModelFormatError(message)


def _parse_matrix(obj, m: int, what: str) -> np.ndarray:
    _require(isinstance(obj, list) and len(obj) == m, f"{what} must have {m} rows")
    for row in obj:
        _require(
            isinstance(row, list) and len(row) == m,
            f"{what} must be {m}x{m} row-major",
        )
        _require(
            all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in row),
            f"{what} entries must be numbers",
        )
    return np.asarray(obj, dtype=float)


def model_from_dict(doc: dict):
    _require(isinstance(doc, dict), "model document must be a JSON object")
    for key in ("space", "m", "coeffs"):
        _require(key in doc, f"model document is missing field {key!r}")
    try:
        space = parse_space(doc["space"])
    except Exception as exc:
        raise ModelFormatError(f"bad space field: {exc}") from exc
    m = doc["m"]
    _require(isinstance(m, int) and m >= 1, "m must be a positive integer")
    _require(isinstance(doc["coeffs"], list) and doc["coeffs"], "coeffs must be a nonempty array")
    coeffs = [
        _parse_matrix(c, m, f"coefficient {n}") for n, c in enumerate(doc["coeffs"])
    ]
    tail = None
    if doc.get("tail") is not None:
        tobj = doc["tail"]
        _require(
            isinstance(tobj, dict) and {"c", "r"} <= set(tobj),
            "tail must be an object with fields c and r",
        )
        try:
            tail = TailEnvelope(float(tobj["c"]), float(tobj["r"]))
        except Exception as exc:
            raise ModelFormatError(f"bad tail envelope: {exc}") from exc
    if doc.get("temporal") is None:
        return SpatialModel(space=space, m=m, coeffs=coeffs, tail=tail)
    tdoc = doc["temporal"]
    _require(isinstance(tdoc, dict) and "variant" in tdoc, "temporal must carry a variant")
    variant = tdoc["variant"]
    try:
        if variant == "pure_spatial":
            kernel = PureSpatial()
        elif variant == "ar1":
            kernel = SeparableScalar("ar1", float(tdoc["phi"]))
        elif variant == "exponential":
            kernel = SeparableScalar("exponential", float(tdoc["theta"]))
        elif variant == "ma1":
            kernel = VectorMA1(_parse_matrix(tdoc["phi"], m, "ma1 phi"))
        else:
            raise ModelFormatError(f"unknown temporal variant {variant!r}")
    except ModelFormatError:
        raise
    except KeyError as exc:
        raise ModelFormatError(f"temporal variant {variant!r} is missing field {exc}") from exc
    except Exception as exc:
        raise ModelFormatError(f"bad temporal kernel: {exc}") from exc
    return SpatioTemporalModel(space=space, m=m, coeffs=coeffs, kernel=kernel, tail=tail)


def dump_model(model) -> str:
    return json.dumps(model_to_dict(model), indent=2, sort_keys=True) + "\n"


def save_model(model, path) -> Path:
    path = Path(path)
    path.write_text(dump_model(model))
    return path


def load_model(path):
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: not valid JSON ({exc})") from exc
    return model_from_dict(doc)


def model_hash(model) -> str:
    """SHA-256 of the canonical JSON form; identifies a model in sidecars."""
    payload = json.dumps(model_to_dict(model), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()
