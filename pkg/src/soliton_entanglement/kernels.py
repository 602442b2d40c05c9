"""Backend selection for the hot Kerr substep.

The compiled extension is used when it imports; otherwise the numpy version.
Set ``SOLITON_ENTANGLEMENT_BACKEND=python`` to force the fallback.
"""

import os

from . import _kernels_py

python_kerr_step = _kernels_py.kerr_step

try:
    from ._kernels import kerr_step as compiled_kerr_step
except ImportError:  # extension not built
    compiled_kerr_step = None

if compiled_kerr_step is not None and os.environ.get("SOLITON_ENTANGLEMENT_BACKEND", "") != "python":
    kerr_step = compiled_kerr_step
    BACKEND = "cython"
else:
    kerr_step = python_kerr_step
    BACKEND = "python"

__all__ = ["kerr_step", "BACKEND", "compiled_kerr_step", "python_kerr_step"]
