"""Kernel-quadrature backend selection.

The convolution kernel of the partial integrals is sampled by adaptive
oscillatory quadrature at thousands of points; this is the package's
hot loop.  A compiled core (`_fast`, Cython) and a pure-numpy fallback
(`_ref`) implement the same algorithm; the compiled one is preferred at
import unless HAUS_PURE is set.  `benchmarks/bench_kernels.py` compares
the two.
"""

from __future__ import annotations

import os

import numpy as np

from . import _ref

_impl = _ref
BACKEND = "python"

if not os.environ.get("HAUS_PURE"):
    try:
        from . import _fast  # type: ignore[attr-defined]

        x7, w7 = np.polynomial.legendre.leggauss(7)
        x15, w15 = np.polynomial.legendre.leggauss(15)
        _fast.init_nodes(x7, w7, x15, w15)
        _impl = _fast
        BACKEND = "compiled"
    except ImportError:
        pass

FAMILY_CODES = _ref.FAMILY_CODES


def kernel_batch(family, param, s, rel_tol=1e-8, abs_tol=1e-10):
    """K(s) of the convolution kernel for the analytic weight families
    with the reciprocal scale map, vectorized over s (all s != 0)."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    return _impl.kernel_batch(FAMILY_CODES[family], float(param), s,
                              float(rel_tol), float(abs_tol))


def available_backends() -> dict[str, object]:
    out = {"python": _ref}
    try:
        from . import _fast  # type: ignore[attr-defined]

        out["compiled"] = _fast
    except ImportError:
        pass
    return out
