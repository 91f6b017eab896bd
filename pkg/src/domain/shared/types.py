"""
Shared types for the domain layer.
"""
from collections.abc import Sequence
from typing import NewType, TypeAlias

import numpy as np
import numpy.typing as npt

# Type aliases for better type safety
ArcLabel = NewType("ArcLabel", str)
ConfigHash = NewType("ConfigHash", str)

# Array aliases
Vec3R: TypeAlias = npt.NDArray[np.float64]
Matrix3: TypeAlias = npt.NDArray[np.float64]
Points: TypeAlias = npt.NDArray[np.float64]
Faces: TypeAlias = npt.NDArray[np.int64]

# Anything numpy accepts as a 3-vector
VectorLike: TypeAlias = Sequence[float] | npt.NDArray[np.float64]


def as_vec3(value: VectorLike) -> Vec3R:
    """
    Convert a sequence to a finite float 3-vector.

    Args:
        value: Three numbers

    Returns:
        Array of shape (3,)

    Raises:
        ValueError: If the value is not three finite numbers
    """
    vec = np.asarray(value, dtype=np.float64).reshape(-1)
    if vec.shape != (3,) or not np.all(np.isfinite(vec)):
        raise ValueError(f"Expected three finite components, got {value!r}")
    return vec


def unit(value: VectorLike) -> Vec3R:
    """Return ``value`` scaled to unit length."""
    vec = as_vec3(value)
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise ValueError("Cannot normalize the zero vector")
    return vec / norm
