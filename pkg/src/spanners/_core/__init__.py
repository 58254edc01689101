"""Kernel backend selection: compiled extension if available, numpy fallback otherwise.

Set SPANNERS_BACKEND=python or =cython to force one side; the default tries
the compiled kernels first.  Both backends implement the same five functions
with bit-identical outputs (tested in tests/test_backends.py).
"""

import os

from . import _pykernels

_forced = os.environ.get("SPANNERS_BACKEND", "auto").lower()

if _forced == "python":
    kernels = _pykernels
elif _forced == "cython":
    from . import _ckernels as kernels  # ImportError here is intentional
else:
    try:
        from . import _ckernels as kernels
    except ImportError:
        kernels = _pykernels


def backend_name() -> str:
    return kernels.NAME
