"""RGB raster <-> tensor conversion. Channel ``k`` becomes frontal slice ``k``."""

import numpy as np

__all__ = ["image_to_tensor", "tensor_to_image", "read_image", "write_image"]


def image_to_tensor(raster):
    """8-bit ``(h, w, 3)`` raster to a float tensor in ``[0, 1]``."""
    raster = np.asarray(raster)
    if raster.ndim != 3 or raster.shape[2] != 3:
        raise ValueError(f"expected an (h, w, 3) RGB raster, got shape {raster.shape}")
    if raster.dtype != np.uint8:
        raise ValueError(f"expected 8-bit samples, got {raster.dtype}")
    return raster.astype(np.float64) / 255.0


def tensor_to_image(t):
    """Clamp to ``[0, 1]`` and round back to 8-bit."""
    t = np.asarray(t, dtype=np.float64)
    if t.ndim != 3 or t.shape[2] != 3:
        raise ValueError(f"expected an (h, w, 3) tensor, got shape {t.shape}")
    return np.rint(np.clip(t, 0.0, 1.0) * 255.0).astype(np.uint8)


def read_image(path):
    from PIL import Image

    with Image.open(path) as im:
        return np.asarray(im.convert("RGB"))


def write_image(path, raster):
    from PIL import Image

    Image.fromarray(np.asarray(raster, dtype=np.uint8), mode="RGB").save(path)
