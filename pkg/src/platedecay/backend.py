"""Kernel backend selection.

The decay-rate integrals spend essentially all their time evaluating the
volume integrand at cubature / Monte-Carlo points, so those batch kernels
exist twice: a Cython extension (``platedecay._kernels``) and a NumPy
fallback (``platedecay._kernels_py``).  The compiled one is preferred when
importable; ``PLATEDECAY_BACKEND=python`` or ``=cython`` forces a choice.
"""

import os

_requested = os.environ.get("PLATEDECAY_BACKEND", "").lower()

if _requested == "python":
    from . import _kernels_py as kernels
elif _requested == "cython":
    from . import _kernels as kernels  # ImportError here is intentional
elif _requested == "":
    try:
        from . import _kernels as kernels
    except ImportError:
        from . import _kernels_py as kernels
else:
    raise RuntimeError(
        f"PLATEDECAY_BACKEND={_requested!r} not understood "
        "(use 'cython' or 'python')"
    )

BACKEND_NAME = kernels.BACKEND
