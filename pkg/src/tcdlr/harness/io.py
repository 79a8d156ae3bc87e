"""TNS3 tensor and MSK3 mask files.

Layout: 4 magic bytes, three little-endian ``uint32`` dims ``(n1, n2, n3)``,
then the payload in slice-major order (``k`` outermost) and column-major
within each slice, i.e. ``t.ravel(order="F")``. Tensor payloads are
little-endian ``float64``; mask payloads are single bytes ``0`` or ``1``.
"""

import struct

import numpy as np

__all__ = ["FormatError", "load_tensor", "save_tensor", "load_mask", "save_mask"]

TENSOR_MAGIC = b"TNS3"
MASK_MAGIC = b"MSK3"
_HEADER = struct.Struct("<4s3I")


class FormatError(ValueError):
    """A file does not follow the TNS3/MSK3 layout."""

    def __init__(self, path, reason):
        super().__init__(f"{path}: {reason}")
        self.path = str(path)
        self.reason = reason


def _write(path, magic, shape, payload):
    if len(shape) != 3 or min(shape) < 0 or max(shape) >= 2**32:
        raise ValueError(f"cannot encode shape {shape}")
    with open(path, "wb") as f:
        f.write(_HEADER.pack(magic, *shape))
        f.write(payload)


def _read(path, magic, itemsize):
    with open(path, "rb") as f:
        raw = f.read()
    if len(raw) < _HEADER.size:
        raise FormatError(path, f"truncated header ({len(raw)} bytes)")
    got, n1, n2, n3 = _HEADER.unpack_from(raw)
    if got != magic:
        raise FormatError(path, f"bad magic {got!r}, expected {magic!r}")
    body = raw[_HEADER.size :]
    want = n1 * n2 * n3 * itemsize
    if len(body) != want:
        raise FormatError(
            path, f"payload has {len(body)} bytes, header {n1}x{n2}x{n3} needs {want}"
        )
    return (n1, n2, n3), body


def save_tensor(path, t):
    t = np.asarray(t, dtype=np.float64)
    if t.ndim != 3:
        raise ValueError(f"tensor must have 3 axes, got shape {t.shape}")
    _write(path, TENSOR_MAGIC, t.shape, t.ravel(order="F").astype("<f8").tobytes())


def load_tensor(path):
    shape, body = _read(path, TENSOR_MAGIC, 8)
    flat = np.frombuffer(body, dtype="<f8").astype(np.float64)
    return flat.reshape(shape, order="F")


def save_mask(path, mask):
    mask = np.asarray(mask)
    if mask.ndim != 3:
        raise ValueError(f"mask must have 3 axes, got shape {mask.shape}")
    _write(path, MASK_MAGIC, mask.shape, mask.astype(bool).ravel(order="F").astype(np.uint8).tobytes())


def load_mask(path):
    shape, body = _read(path, MASK_MAGIC, 1)
    flat = np.frombuffer(body, dtype=np.uint8)
    if np.any(flat > 1):
        raise FormatError(path, "mask payload holds bytes other than 0 and 1")
    return flat.astype(bool).reshape(shape, order="F")
