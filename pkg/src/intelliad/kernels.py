"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the numpy
fallback. Set INTELLIAD_PURE_PYTHON=1 to force the fallback.
"""

import os

BACKEND = "python"

if os.environ.get("INTELLIAD_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._kernels import assign_labels, cooccurrence_counts, update_centroids
        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from ._kernels_py import assign_labels, cooccurrence_counts, update_centroids

__all__ = ["BACKEND", "assign_labels", "update_centroids", "cooccurrence_counts"]
