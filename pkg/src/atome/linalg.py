"""Dense float32 kernels and the ATMX binary matrix format.

Values are stored as row-major 32-bit floats; reductions (matrix products,
norms, means) accumulate in 64 bits so results stay stable at the sizes
used here. All functions are pure and safe to call concurrently.
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import FormatError, InputError

ATMX_MAGIC = b"ATMX"
ZERO_NORM_EPS = 1e-12

_HEADER = struct.Struct("<4sIII")


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a C-contiguous 2-D float32 array, rejecting non-finite input."""
    m = np.ascontiguousarray(a, dtype=np.float32)
    if m.ndim != 2:
        raise InputError(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError(f"{name} contains non-finite entries")
    return m


def as_vector(a, name: str = "vector") -> np.ndarray:
    """Coerce to a 1-D float32 array, rejecting non-finite input."""
    v = np.ascontiguousarray(a, dtype=np.float32)
    if v.ndim != 1:
        raise InputError(f"{name} must be 1-D, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InputError(f"{name} contains non-finite entries")
    return v


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product with 64-bit accumulation, returned as float32."""
    if a.ndim != 2 or b.ndim != 2:
        raise InputError(f"matmul needs 2-D operands, got {a.shape} and {b.shape}")
    if a.shape[1] != b.shape[0]:
        raise InputError(f"matmul shape mismatch: {a.shape} x {b.shape}")
    out = a.astype(np.float64) @ b.astype(np.float64)
    return out.astype(np.float32)


def softmax_rows(m: np.ndarray) -> np.ndarray:
    """Row-wise softmax, stabilized by subtracting each row's maximum."""
    x = np.asarray(m, dtype=np.float64)
    x = x - x.max(axis=-1, keepdims=True)
    e = np.exp(x)
    e /= e.sum(axis=-1, keepdims=True)
    return e.astype(np.float32)


def layer_norm(x: np.ndarray, gain: np.ndarray, bias: np.ndarray,
               eps: float = 1e-5) -> np.ndarray:
    """Normalize a vector to zero mean / unit variance, then apply gain and bias."""
    if eps <= 0:
        raise InputError(f"layer_norm eps must be > 0, got {eps}")
    v = np.asarray(x, dtype=np.float64)
    if v.shape != np.shape(gain) or v.shape != np.shape(bias):
        raise InputError(
            f"layer_norm shape mismatch: x {v.shape}, gain {np.shape(gain)}, "
            f"bias {np.shape(bias)}")
    mean = v.mean()
    var = v.var()
    out = (v - mean) / np.sqrt(var + eps) * np.asarray(gain, np.float64) \
        + np.asarray(bias, np.float64)
    return out.astype(np.float32)


def layer_norm_rows(m: np.ndarray, gain: np.ndarray, bias: np.ndarray,
                    eps: float = 1e-5) -> np.ndarray:
    """layer_norm applied independently to every row of a matrix."""
    v = np.asarray(m, dtype=np.float64)
    mean = v.mean(axis=1, keepdims=True)
    var = v.var(axis=1, keepdims=True)
    out = (v - mean) / np.sqrt(var + eps) * np.asarray(gain, np.float64) \
        + np.asarray(bias, np.float64)
    return out.astype(np.float32)


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity in [-1, 1]; degenerate (near-zero) vectors score 0."""
    a = np.asarray(u, dtype=np.float64)
    b = np.asarray(v, dtype=np.float64)
    if a.shape != b.shape:
        raise InputError(f"cosine shape mismatch: {a.shape} vs {b.shape}")
    na = np.sqrt((a * a).sum())
    nb = np.sqrt((b * b).sum())
    if na < ZERO_NORM_EPS or nb < ZERO_NORM_EPS:
        return 0.0
    return float(np.clip((a * b).sum() / (na * nb), -1.0, 1.0))


def write_matrix(path, m: np.ndarray) -> None:
    """Write a matrix in the ATMX format.

    Layout: 16-byte header (magic "ATMX", u32-LE rows, u32-LE cols,
    u32-LE reserved=0) followed by rows*cols little-endian IEEE-754
    binary32 values in row-major order.
    """
    m = as_matrix(m)
    rows, cols = m.shape
    with open(path, "wb") as f:
        f.write(_HEADER.pack(ATMX_MAGIC, rows, cols, 0))
        f.write(m.astype("<f4").tobytes(order="C"))


def read_matrix(path) -> np.ndarray:
    """Read an ATMX matrix, naming the offending header field on error."""
    with open(path, "rb") as f:
        header = f.read(_HEADER.size)
        if len(header) < _HEADER.size:
            raise FormatError(
                f"{path}: ATMX header truncated ({len(header)} of "
                f"{_HEADER.size} bytes)")
        magic, rows, cols, reserved = _HEADER.unpack(header)
        if magic != ATMX_MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r}, expected b'ATMX'")
        if reserved != 0:
            raise FormatError(f"{path}: reserved field is {reserved}, expected 0")
        payload = f.read()
    expected = rows * cols * 4
    if len(payload) != expected:
        raise FormatError(
            f"{path}: payload is {len(payload)} bytes, expected {expected} "
            f"for {rows}x{cols} float32")
    data = np.frombuffer(payload, dtype="<f4").reshape(rows, cols)
    m = np.ascontiguousarray(data, dtype=np.float32)
    if not np.all(np.isfinite(m)):
        raise FormatError(f"{path}: matrix data contains non-finite entries")
    return m
