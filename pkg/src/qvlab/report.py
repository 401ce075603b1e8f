"""Verdict and report containers shared by the verification suites.

Every checker in the package reports through one of these dataclasses so the
CLI can serialize results uniformly.  JSON conventions: complex numbers are
``[re, im]`` pairs, matrices are arrays of row arrays, and the boolean verdict
key is ``"pass"``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np


def complex_to_json(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def json_to_complex(pair: Any) -> complex:
    if isinstance(pair, (int, float)):
        return complex(pair)
    re, im = pair
    return complex(re, im)


def vector_to_json(v: np.ndarray) -> list[list[float]]:
    return [complex_to_json(z) for z in np.asarray(v).ravel()]


def matrix_to_json(m: np.ndarray) -> list[list[list[float]]]:
    return [[complex_to_json(z) for z in row] for row in np.asarray(m)]


def json_to_matrix(rows: Any) -> np.ndarray:
    return np.array([[json_to_complex(z) for z in row] for row in rows],
                    dtype=np.complex128)


def json_to_vector(entries: Any) -> np.ndarray:
    return np.array([json_to_complex(z) for z in entries], dtype=np.complex128)


def _jsonable(obj: Any) -> Any:
    """Coerce numpy scalars/arrays and complex values into JSON-fit types."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return vector_to_json(obj.ravel()) if obj.ndim == 1 else matrix_to_json(obj)
        return obj.tolist()
    if isinstance(obj, (np.complexfloating, complex)):
        return complex_to_json(obj)
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


@dataclass
class CheckReport:
    """Outcome of one verification claim.

    ``witnesses`` holds whatever concrete objects demonstrate a failure
    (vectors, matrices, parameter tuples); empty when the claim passes.
    ``residuals`` maps measurement names to numbers.
    """

    claim: str
    passed: bool
    witnesses: list = field(default_factory=list)
    residuals: dict = field(default_factory=dict)
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "pass": bool(self.passed),
            "witnesses": _jsonable(self.witnesses),
            "residuals": _jsonable(self.residuals),
            "seed": self.seed,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)
