"""Hot-loop kernels with compiled/pure backend selection.

At import time the Cython extension `_fast` is preferred; the NumPy/Python
reference `_ref` is the fallback. Set TWEETSCOPE_PURE=1 to force the pure
backend (used by the benchmark and the cross-backend tests).
"""

import os

if os.environ.get("TWEETSCOPE_PURE"):
    from tweetscope.kernels import _ref as _impl

    BACKEND = "pure"
else:
    try:
        from tweetscope.kernels import _fast as _impl

        BACKEND = "compiled"
    except ImportError:
        from tweetscope.kernels import _ref as _impl

        BACKEND = "pure"

hashed_ngram_counts = _impl.hashed_ngram_counts
sqdist_argmin = _impl.sqdist_argmin
group_sums = _impl.group_sums
dot_products = _impl.dot_products

__all__ = [
    "BACKEND",
    "hashed_ngram_counts",
    "sqdist_argmin",
    "group_sums",
    "dot_products",
]
