"""t-product algebra for dense real third-order tensors.

Tensors are plain ``float64`` arrays of shape ``(n1, n2, n3)``; the third
axis holds the tubes. Fourier-domain representations are complex arrays of
the same shape obtained with an unnormalized DFT along the tubes, so the
inverse transform divides by ``n3``.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "TSvd",
    "as_tensor",
    "fft_tubes",
    "ifft_tubes",
    "half_slices",
    "mirror_spectrum",
    "identity_tensor",
    "tprod",
    "ttranspose",
    "tqr",
    "tsvd",
    "tubal_rank",
    "tnn",
    "norm_star_g",
    "norm_star_kg",
    "spectral_singular_values",
]

IMAG_TOL = 1e-8


def as_tensor(a, name="tensor"):
    """Validate and return ``a`` as a finite float64 array with three axes."""
    a = np.asarray(a)
    if a.ndim == 2:
        a = a[:, :, None]
    if a.ndim != 3:
        raise ValueError(f"{name} must have 3 axes, got shape {a.shape}")
    if np.iscomplexobj(a):
        raise ValueError(f"{name} must be real")
    a = a.astype(np.float64, copy=False)
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def fft_tubes(t):
    """DFT along the tubes. Slice ``i`` of the result is ``Ā_i``."""
    return np.fft.fft(as_tensor(t), axis=2)


def ifft_tubes(s, check_real=True):
    """Inverse DFT along the tubes, returning a real tensor.

    The imaginary residue is checked against ``1e-8 * (1 + max|real|)``
    before it is dropped.
    """
    s = np.asarray(s)
    if s.ndim != 3:
        raise ValueError(f"spectrum must have 3 axes, got shape {s.shape}")
    t = np.fft.ifft(s, axis=2)
    if check_real and t.size:
        bound = IMAG_TOL * (1.0 + np.abs(t.real).max())
        resid = np.abs(t.imag).max()
        if resid > bound:
            raise ValueError(
                f"inverse transform is not real: imaginary residue {resid:.3e} > {bound:.3e}"
            )
    return np.ascontiguousarray(t.real)


def half_slices(n3):
    """Number of Fourier slices that determine a real tensor's spectrum."""
    return n3 // 2 + 1


def mirror_spectrum(half, n3):
    """Rebuild a full conjugate-symmetric spectrum from its first slices.

    ``half`` has ``n3 // 2 + 1`` frontal slices; slice ``j`` of the output
    for ``j > n3 // 2`` is the conjugate of slice ``n3 - j``.
    """
    h = half_slices(n3)
    if half.shape[2] != h:
        raise ValueError(f"expected {h} half-spectrum slices, got {half.shape[2]}")
    full = np.empty(half.shape[:2] + (n3,), dtype=np.complex128)
    full[:, :, :h] = half
    for j in range(h, n3):
        full[:, :, j] = np.conj(half[:, :, n3 - j])
    return full


def identity_tensor(n, n3):
    """The ``n x n x n3`` identity tensor: first frontal slice is ``I``."""
    t = np.zeros((n, n, n3))
    t[:, :, 0] = np.eye(n)
    return t


def _slice_matmul(a_hat, b_hat):
    # (n1, k, n3) x (k, n2, n3) -> (n1, n2, n3), one product per slice
    return np.einsum("ikt,kjt->ijt", a_hat, b_hat)


def tprod(a, b):
    """t-product ``a * b`` computed slice-wise in the Fourier domain."""
    a = as_tensor(a, "a")
    b = as_tensor(b, "b")
    if a.shape[1] != b.shape[0] or a.shape[2] != b.shape[2]:
        raise ValueError(f"t-product dimension mismatch: {a.shape} * {b.shape}")
    return ifft_tubes(_slice_matmul(fft_tubes(a), fft_tubes(b)))


def ttranspose(a):
    """Tensor conjugate transpose.

    Transposes every frontal slice and reverses the order of slices
    2..n3, so slice ``i`` of ``fft_tubes(a*)`` is ``Ā_i^H``.
    """
    a = as_tensor(a)
    out = np.transpose(a, (1, 0, 2)).copy()
    out[:, :, 1:] = out[:, :, :0:-1]
    return out


def tqr(b):
    """Row-orthonormal t-QR: ``b = r * q``.

    Computed from per-slice reduced QR of ``B̄_i^H``, i.e. ``b* = q* * r*``.

    Parameters
    ----------
    b : ndarray, shape (k, n2, n3)
        Requires ``k <= n2``.

    Returns
    -------
    q : ndarray, shape (k, n2, n3)
        Each Fourier slice has orthonormal rows.
    r : ndarray, shape (k, k, n3)
    """
    b = as_tensor(b, "b")
    k, n2, n3 = b.shape
    if k > n2:
        raise ValueError(f"tqr needs k <= n2, got k={k}, n2={n2}")
    b_hat = fft_tubes(b)
    h = half_slices(n3)
    q_half = np.empty((k, n2, h), dtype=np.complex128)
    r_half = np.empty((k, k, h), dtype=np.complex128)
    for i in range(h):
        qb, rb = np.linalg.qr(b_hat[:, :, i].conj().T)
        q_half[:, :, i] = qb.conj().T
        r_half[:, :, i] = rb.conj().T
    q = ifft_tubes(mirror_spectrum(q_half, n3))
    r = ifft_tubes(mirror_spectrum(r_half, n3))
    return q, r


@dataclass(frozen=True)
class TSvd:
    """Truncated t-SVD ``a = u * s * v*`` of width ``r``."""

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray

    @property
    def r(self):
        return self.s.shape[0]

    def reconstruct(self):
        return tprod(tprod(self.u, self.s), ttranspose(self.v))


def tsvd(a):
    """t-SVD from per-slice SVDs of the half spectrum, mirrored."""
    a = as_tensor(a)
    n1, n2, n3 = a.shape
    r = min(n1, n2)
    a_hat = fft_tubes(a)
    h = half_slices(n3)
    u_half = np.empty((n1, r, h), dtype=np.complex128)
    s_half = np.zeros((r, r, h), dtype=np.complex128)
    v_half = np.empty((n2, r, h), dtype=np.complex128)
    for i in range(h):
        u, s, vh = np.linalg.svd(a_hat[:, :, i], full_matrices=False)
        u_half[:, :, i] = u
        s_half[:, :, i] = np.diag(s)
        v_half[:, :, i] = vh.conj().T
    return TSvd(
        u=ifft_tubes(mirror_spectrum(u_half, n3)),
        s=ifft_tubes(mirror_spectrum(s_half, n3)),
        v=ifft_tubes(mirror_spectrum(v_half, n3)),
    )


def spectral_singular_values(a):
    """Singular values of every Fourier slice, shape ``(min(n1, n2), n3)``."""
    a_hat = fft_tubes(a)
    return np.linalg.svd(np.moveaxis(a_hat, 2, 0), compute_uv=False).T


def tubal_rank(a, tol=1e-8):
    """Number of entries of the first frontal slice of ``S`` above ``tol * max``.

    The first frontal slice of ``S`` holds the per-index averages of the
    spectral singular values over all Fourier slices.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    sv = spectral_singular_values(a)
    first = sv.mean(axis=1)
    top = first.max(initial=0.0)
    if top == 0.0:
        return 0
    return int(np.count_nonzero(first > tol * top))


def tnn(a):
    """Tensor nuclear norm ``(1/n3) sum_i sigma_i(bdiag(Ā))``."""
    sv = spectral_singular_values(a)
    return float(sv.sum() / sv.shape[1])


def norm_star_g(a, g):
    """Surrogate norm ``(1/n3) sum g(sigma)`` over all spectral singular values.

    Zero singular values are skipped, so kinds with ``g(0) != 0`` still
    vanish on the zero tensor.
    """
    sv = spectral_singular_values(a)
    n3 = sv.shape[1]
    sv = sv[sv > 0]
    return float(np.sum(g.value(sv)) / n3)


def norm_star_kg(a, g, k, tol=1e-8):
    """Rank-constrained surrogate norm: ``inf`` when ``tubal_rank(a) > k``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if tubal_rank(a, tol) > k:
        return float("inf")
    return norm_star_g(a, g)
