"""VRP instances: construction, random generation and JSON (de)serialization."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from ._validation import ValidationError, check_count, check_weights

COORD_BOX = 10.0


class InstanceParseError(ValidationError):
    """Malformed instance file."""


@dataclass(frozen=True, eq=False)
class VrpInstance:
    """A depot-at-node-0 routing instance with ``k`` vehicles.

    ``weights[i, j]`` is the cost of the directed edge ``i -> j``.
    """

    n: int
    k: int
    weights: np.ndarray
    coords: Optional[np.ndarray] = None

    def __post_init__(self):
        n = check_count(self.n, "n", 2)
        k = check_count(self.k, "k", 1)
        if k > n - 1:
            raise ValidationError(f"vehicle count k={k} must be at most n-1={n - 1}")
        w = check_weights(self.weights)
        if w.shape != (n, n):
            raise ValidationError(f"weights shape {w.shape} does not match n={n}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if self.coords is not None:
            c = np.array(self.coords, dtype=np.float64)
            if c.shape != (n, 2):
                raise ValidationError(f"coords must have shape ({n}, 2), got {c.shape}")
            if not np.array_equal(squared_distances(c), w):
                raise ValidationError("weights are not the squared distances of coords")
            c.setflags(write=False)
            object.__setattr__(self, "coords", c)

    def __eq__(self, other):
        if not isinstance(other, VrpInstance):
            return NotImplemented
        if (self.n, self.k) != (other.n, other.k):
            return False
        if (self.coords is None) != (other.coords is None):
            return False
        if self.coords is not None and not np.array_equal(self.coords, other.coords):
            return False
        return np.array_equal(self.weights, other.weights)

    __hash__ = None

    @property
    def customers(self) -> range:
        return range(1, self.n)

    def total_weight(self) -> float:
        """Sum of |w| over all off-diagonal entries."""
        return float(np.abs(self.weights).sum())

    def to_dict(self) -> dict:
        d = {"n": self.n, "k": self.k}
        if self.coords is not None:
            d["coords"] = self.coords.tolist()
        d["weights"] = self.weights.tolist()
        return d

    def __repr__(self):
        return f"VrpInstance(n={self.n}, k={self.k}, coords={'yes' if self.coords is not None else 'no'})"


def squared_distances(coords: np.ndarray) -> np.ndarray:
    diff = coords[:, None, :] - coords[None, :, :]
    return (diff**2).sum(axis=-1)


def generate_random(n: int, k: int, seed: int) -> VrpInstance:
    """Random instance with coordinates uniform on [0, 10)^2."""
    n = check_count(n, "n", 2)
    k = check_count(k, "k", 1)
    if k > n - 1:
        raise ValidationError(f"vehicle count k={k} must be at most n-1={n - 1}")
    rng = np.random.default_rng(seed)
    coords = rng.uniform(0.0, COORD_BOX, size=(n, 2))
    return VrpInstance(n=n, k=k, weights=squared_distances(coords), coords=coords)


def from_weights(weights, k: int) -> VrpInstance:
    w = check_weights(weights)
    return VrpInstance(n=w.shape[0], k=k, weights=w)


def reference_instance() -> VrpInstance:
    """The 3-node, 2-vehicle example instance used throughout the tests and docs."""
    w = [[0.0, 61.323, 4.732], [61.323, 0.0, 42.895], [4.732, 42.895, 0.0]]
    return from_weights(w, k=2)


def instance_from_dict(data: dict) -> VrpInstance:
    if not isinstance(data, dict):
        raise InstanceParseError("instance document must be an object")
    for field in ("n", "k", "weights"):
        if field not in data:
            raise InstanceParseError(f"instance document is missing the '{field}' field")
    n = data["n"]
    weights = data["weights"]
    if not isinstance(weights, list) or len(weights) != n or any(
        not isinstance(row, list) or len(row) != n for row in weights
    ):
        raise InstanceParseError(f"weights must be {n} rows of {n} numbers (dimension mismatch)")
    try:
        return VrpInstance(n=n, k=data["k"], weights=weights, coords=data.get("coords"))
    except ValidationError as exc:
        raise InstanceParseError(str(exc)) from exc


def write_instance(instance: VrpInstance, path) -> None:
    # json emits the shortest repr that round-trips a float64 exactly
    Path(path).write_text(json.dumps(instance.to_dict(), indent=2) + "\n")


def read_instance(path) -> VrpInstance:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(
            f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    try:
        return instance_from_dict(data)
    except InstanceParseError as exc:
        raise InstanceParseError(f"{path}: {exc}") from exc
