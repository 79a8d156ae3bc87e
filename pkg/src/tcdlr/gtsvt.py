"""Generalized tensor singular value thresholding.

``gtsvt(Y) = argmin_X 0.5 * ||Y - X||_F**2 + tau * ||X||_{*,g}``

Both terms carry the same ``1/n3`` Parseval factor in the Fourier domain,
so the problem separates into one scalar prox per spectral singular value
with weight ``tau`` itself.
"""

from dataclasses import dataclass, field

import numpy as np

from .parallel import slice_map
from .surrogate import prox
from .tproduct import as_tensor, fft_tubes, half_slices

__all__ = [
    "FactorState",
    "threshold_matrix",
    "gtsvt_full",
    "gtsvt_factored",
    "spectrum_to_tensor",
]


def threshold_matrix(m, tau, g):
    """Singular value thresholding of one complex matrix.

    Returns
    -------
    out : ndarray
        ``U diag(prox(sigma)) V^H``.
    sigma : ndarray
        Singular values of ``m`` before thresholding, descending.
    """
    if not np.any(m):
        return np.zeros_like(m), np.zeros(min(m.shape))
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    t = prox(g, s, tau)
    keep = t > 0
    out = (u[:, keep] * t[keep]) @ vh[keep]
    return out, s


def spectrum_to_tensor(half, n3):
    """Real tensor from the first ``n3 // 2 + 1`` Fourier slices."""
    return np.fft.irfft(half, n=n3, axis=2)


def gtsvt_full(y, tau, g, threads=1):
    """Reference thresholding path: SVD of every Fourier slice of ``y``."""
    y = as_tensor(y, "y")
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    n3 = y.shape[2]
    y_hat = fft_tubes(y)
    h = half_slices(n3)
    outs = slice_map(lambda i: threshold_matrix(y_hat[:, :, i], tau, g)[0], range(h), threads)
    return spectrum_to_tensor(np.stack(outs, axis=2), n3)


@dataclass
class FactorState:
    """Per-slice factors ``(Z̄_i, Q̄_i)`` of the half spectrum.

    ``z[i]`` is ``n1 x k_i`` and ``q[i]`` is ``k_i x n2`` with orthonormal
    rows. Slices past ``n3 // 2`` are implied by conjugate symmetry.
    """

    z: list
    q: list
    n3: int
    sigma: list = field(default_factory=list)

    @property
    def ranks(self):
        return [qi.shape[0] for qi in self.q]

    @property
    def full_ranks(self):
        """Rank of every Fourier slice, mirrored to length ``n3``."""
        r = self.ranks
        return [r[i] if i < len(r) else r[self.n3 - i] for i in range(self.n3)]

    def product_half(self):
        return np.stack([zi @ qi for zi, qi in zip(self.z, self.q)], axis=2)

    def product(self):
        """The real tensor ``Z * Q``."""
        return spectrum_to_tensor(self.product_half(), self.n3)


def gtsvt_factored(a, b, tau, g, threads=1):
    """Threshold ``a * b`` through the small ``n1 x k x n3`` factor.

    Steps per half-spectrum slice: QR of ``B̄_i^H`` gives ``B̄_i = R̄_i Q̄_i``;
    ``Z̄_i = Ā_i R̄_i``; the output slice is ``gsvt(Z̄_i) Q̄_i``.

    Parameters
    ----------
    a : ndarray, shape (n1, k, n3)
    b : ndarray, shape (k, n2, n3)
    tau : float
    g : SurrogateSpec

    Returns
    -------
    x : ndarray, shape (n1, n2, n3)
    state : FactorState
        Unthresholded factors with ``Z * Q == a * b``.
    """
    a = as_tensor(a, "a")
    b = as_tensor(b, "b")
    n1, k, n3 = a.shape
    if b.shape[0] != k or b.shape[2] != n3:
        raise ValueError(f"factor shapes do not chain: {a.shape} * {b.shape}")
    n2 = b.shape[1]
    if k > min(n1, n2):
        raise ValueError(f"inner dimension k={k} exceeds min(n1, n2)={min(n1, n2)}")
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    a_hat = fft_tubes(a)
    b_hat = fft_tubes(b)

    def work(i):
        qb, rb = np.linalg.qr(b_hat[:, :, i].conj().T)
        q = qb.conj().T
        z = a_hat[:, :, i] @ rb.conj().T
        zt, s = threshold_matrix(z, tau, g)
        return z, q, zt @ q, s

    res = slice_map(work, range(half_slices(n3)), threads)
    state = FactorState(
        z=[r[0] for r in res], q=[r[1] for r in res], n3=n3, sigma=[r[3] for r in res]
    )
    x = spectrum_to_tensor(np.stack([r[2] for r in res], axis=2), n3)
    return x, state
