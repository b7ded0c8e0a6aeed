"""Input validation helpers shared across modules."""

import numpy as np

from .exceptions import DimensionMismatch, NonFinite, PreconditionError

_U64_MAX = 2**64 - 1


def check_vector(x, name="x", size=None):
    """Return ``x`` as a finite 1-D float64 array.

    Scalars are promoted to length-1 vectors.
    """
    arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if arr.ndim != 1:
        raise DimensionMismatch(f"{name} must be 1-D, got shape {arr.shape}")
    if arr.size == 0:
        raise DimensionMismatch(f"{name} must not be empty")
    if not np.all(np.isfinite(arr)):
        raise NonFinite(f"{name} contains non-finite entries")
    if size is not None and arr.size != size:
        raise DimensionMismatch(f"{name} has length {arr.size}, expected {size}")
    return arr


def check_square(a, name="a"):
    """Return ``a`` as a finite square float64 matrix."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise DimensionMismatch(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFinite(f"{name} contains non-finite entries")
    return arr


def check_rows(x, dim, name="x"):
    """Return ``x`` as an ``(n, dim)`` float64 array; a 1-D input becomes one row."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise DimensionMismatch(f"{name} must have {dim} columns, got shape {arr.shape}")
    return arr


def check_seed(seed):
    if isinstance(seed, (bool, np.bool_)) or not isinstance(seed, (int, np.integer)):
        raise PreconditionError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed <= _U64_MAX:
        raise PreconditionError(f"seed must fit in 64 unsigned bits, got {seed}")
    return seed


def check_count(n, minimum=1, name="n"):
    if isinstance(n, (bool, np.bool_)) or not isinstance(n, (int, np.integer)):
        raise PreconditionError(f"{name} must be an integer, got {n!r}")
    n = int(n)
    if n < minimum:
        raise PreconditionError(f"{name} must be >= {minimum}, got {n}")
    return n
