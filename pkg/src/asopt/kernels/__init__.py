"""Hot-kernel backend selection.

The compiled extension (``_fast``) is preferred; the numpy implementation in
``_pure`` is the drop-in fallback.  Set ``ASOPT_PURE_KERNELS=1`` to force the
fallback, e.g. for the backend comparison benchmark.
"""

import os

from . import _pure

if os.environ.get("ASOPT_PURE_KERNELS", "") not in ("", "0"):
    _impl = _pure
else:
    try:
        from . import _fast as _impl
    except ImportError:
        _impl = _pure

BACKEND = _impl.BACKEND
jacobi_eigh = _impl.jacobi_eigh
base_value = _impl.base_value
base_gradient = _impl.base_gradient
bfgs_embedded = _impl.bfgs_embedded
probe_embedded = _impl.probe_embedded
bfgs_minimize = _pure.bfgs_minimize  # generic-callable descent has no compiled variant
