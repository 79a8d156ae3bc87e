"""Per-Fourier-slice fan-out."""

from concurrent.futures import ThreadPoolExecutor


def slice_map(fn, items, threads=1):
    """Apply ``fn`` to every item, in order.

    LAPACK calls release the GIL, so a thread pool gives real overlap for
    the per-slice factorizations. Results keep input order, which keeps
    the output independent of ``threads``.
    """
    items = list(items)
    if threads is None or threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(fn, items))
