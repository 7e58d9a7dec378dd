"""Input validation helpers shared across the package."""
from __future__ import annotations

import numbers

import numpy as np


class ValidationError(ValueError):
    """Raised when user input violates a documented precondition."""


class ResourceError(RuntimeError):
    """Raised when a request exceeds a configured size bound."""


def check_count(value, name: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ValidationError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise ValidationError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_weights(weights) -> np.ndarray:
    """Return ``weights`` as a float64 square matrix or raise."""
    try:
        w = np.array(weights, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"weights are not numeric: {exc}") from exc
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValidationError(f"weights must be a square matrix, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ValidationError("weights contain NaN or infinite entries")
    if np.any(w < 0):
        raise ValidationError("weights must be nonnegative")
    if np.any(np.diag(w) != 0):
        raise ValidationError("weights must have a zero diagonal")
    return w


def check_bits(bits, length: int) -> np.ndarray:
    """Coerce a bitstring (``"1010"`` or a sequence of 0/1) to a uint8 array."""
    if isinstance(bits, str):
        if any(c not in "01" for c in bits):
            raise ValidationError(f"bitstring may only contain 0 and 1: {bits!r}")
        arr = np.fromiter((c == "1" for c in bits), dtype=np.uint8, count=len(bits))
    else:
        arr = np.asarray(bits)
        if arr.ndim != 1 or not np.all((arr == 0) | (arr == 1)):
            raise ValidationError("assignment must be a 1-D sequence of 0/1 values")
        arr = arr.astype(np.uint8)
    if arr.shape[0] != length:
        raise ValidationError(f"expected {length} bits, got {arr.shape[0]}")
    return arr


def bits_to_str(bits) -> str:
    return "".join("1" if b else "0" for b in bits)
