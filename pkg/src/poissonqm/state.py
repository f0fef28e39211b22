"""Value types shared across modules: coordinates, Hamiltonians, reports."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import DimensionMismatchError, InputError, InvalidDimensionError


def _frozen_array(values, dtype=float):
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


def _require(data: dict, key: str):
    if not isinstance(data, dict):
        raise InputError("<root>", "expected a JSON object")
    if key not in data:
        raise InputError(key, "missing field")
    return data[key]


def _as_int(data, key):
    value = _require(data, key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(key, f"expected integer, got {value!r}")
    return value


def _as_float(data, key, default=None):
    if default is not None and key not in data:
        return default
    value = _require(data, key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(key, f"expected number, got {value!r}")
    if not math.isfinite(value):
        raise InputError(key, "must be finite")
    return float(value)


def _as_vector(data, key, length):
    value = _require(data, key)
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise InputError(key, "expected a list of numbers") from None
    if arr.shape != (length,):
        raise InputError(key, f"expected length {length}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError(key, "entries must be finite")
    return arr


def complex_to_dict(mat) -> dict:
    mat = np.asarray(mat, dtype=complex)
    return {"re": mat.real.tolist(), "im": mat.imag.tolist()}


def complex_from_dict(data, key, shape=None) -> np.ndarray:
    block = _require(data, key)
    try:
        re = np.asarray(_require(block, "re"), dtype=float)
        im = np.asarray(_require(block, "im"), dtype=float)
    except InputError as exc:
        raise InputError(f"{key}.{exc.field}", "missing field") from None
    except (TypeError, ValueError):
        raise InputError(key, "re/im must be numeric arrays") from None
    if re.shape != im.shape:
        raise InputError(key, f"re shape {re.shape} != im shape {im.shape}")
    if shape is not None and re.shape != tuple(shape):
        raise InputError(key, f"expected shape {tuple(shape)}, got {re.shape}")
    return re + 1j * im


@dataclass(frozen=True, eq=False)
class GellMannState:
    """A Hermitian matrix in Gell-Mann coordinates.

    The matrix is ``alpha0 * I / n + sum_k alpha[k] * T_k``.  Positivity is
    not implied; see :func:`poissonqm.casimirs.is_psd`.
    """

    n: int
    alpha: np.ndarray
    alpha0: float = 1.0

    def __post_init__(self):
        if self.n < 2:
            raise InvalidDimensionError(f"n must be >= 2, got {self.n}")
        alpha = _frozen_array(self.alpha)
        if alpha.shape != (self.n**2 - 1,):
            raise DimensionMismatchError(
                f"alpha must have length {self.n**2 - 1}, got shape {alpha.shape}"
            )
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "alpha0", float(self.alpha0))

    @property
    def dim(self) -> int:
        return self.n**2 - 1

    def with_alpha(self, alpha) -> GellMannState:
        return GellMannState(self.n, alpha, self.alpha0)

    def to_dict(self) -> dict:
        return {"n": self.n, "alpha0": self.alpha0, "alpha": self.alpha.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> GellMannState:
        n = _as_int(data, "n")
        if n < 2:
            raise InputError("n", f"must be >= 2, got {n}")
        alpha0 = _as_float(data, "alpha0", default=1.0)
        return cls(n, _as_vector(data, "alpha", n * n - 1), alpha0)


@dataclass(frozen=True, eq=False)
class HamiltonianCoeffs:
    """Expansion ``H = h0 * I + sum_k h[k] * T_k`` together with hbar."""

    n: int
    h0: float
    h: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        h = _frozen_array(self.h)
        if h.shape != (self.n**2 - 1,):
            raise DimensionMismatchError(
                f"h must have length {self.n**2 - 1}, got shape {h.shape}"
            )
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "h0", float(self.h0))
        object.__setattr__(self, "hbar", float(self.hbar))

    def to_dict(self) -> dict:
        return {"n": self.n, "h0": self.h0, "h": self.h.tolist(), "hbar": self.hbar}

    @classmethod
    def from_dict(cls, data: dict) -> HamiltonianCoeffs:
        n = _as_int(data, "n")
        if n < 2:
            raise InputError("n", f"must be >= 2, got {n}")
        hbar = _as_float(data, "hbar", default=1.0)
        if hbar <= 0:
            raise InputError("hbar", "must be positive")
        return cls(n, _as_float(data, "h0", default=0.0), _as_vector(data, "h", n * n - 1), hbar)


@dataclass(frozen=True)
class VerificationReport:
    name: str
    max_residual: float
    samples: int
    passed: bool
    details: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_residual(cls, name, residual, tolerance, samples, **details):
        residual = float(residual)
        passed = bool(np.isfinite(residual) and residual <= tolerance)
        return cls(name, residual, int(samples), passed, {"tolerance": tolerance, **details})

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "max_residual": self.max_residual,
            "samples": self.samples,
            "passed": self.passed,
            "details": _jsonable(self.details),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj
