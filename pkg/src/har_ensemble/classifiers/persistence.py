"""Versioned JSON model files.

Floats are written with ``repr`` precision by :mod:`json`, so a round trip
reproduces every parameter, and therefore every prediction, bit for bit.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

FORMAT = "har-model"
VERSION = 1


def _encode(value):
    if isinstance(value, np.ndarray):
        return {"__array__": True, "dtype": value.dtype.str, "shape": list(value.shape),
                "data": value.ravel().tolist()}
    if isinstance(value, dict):
        return {k: _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def _decode(value):
    if isinstance(value, dict):
        if value.get("__array__"):
            return np.array(value["data"], dtype=np.dtype(value["dtype"])).reshape(value["shape"])
        return {k: _decode(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_decode(v) for v in value]
    return value


def model_to_dict(model) -> dict:
    return {
        "format": FORMAT,
        "version": VERSION,
        "kind": model.kind,
        "params": _encode(model.get_params()),
        "classes": _encode(model.classes_),
        "n_features": int(model.n_features_),
        "state": _encode(model.get_state()),
    }


def model_from_dict(doc: dict):
    from . import CLASSIFIERS

    if doc.get("format") != FORMAT:
        raise ValueError(f"not a {FORMAT} document")
    if doc.get("version") != VERSION:
        raise ValueError(f"unsupported model version {doc.get('version')}")
    model = CLASSIFIERS[doc["kind"]](**doc["params"])
    model.classes_ = _decode(doc["classes"])
    model.n_features_ = doc["n_features"]
    model.set_state(_decode(doc["state"]))
    return model


def save_model(model, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model)))


def load_model(path: str | Path):
    return model_from_dict(json.loads(Path(path).read_text()))
