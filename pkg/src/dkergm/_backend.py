"""Pick the enumeration kernel at import time.

The compiled ``_sweep`` extension is used when it was built; otherwise the
numpy implementation in ``_sweep_py`` takes over.  Setting the environment
variable ``DKERGM_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _sweep_py

try:
    from . import _sweep as _compiled
except ImportError:  # extension not built
    _compiled = None

_KERNELS = {"python": _sweep_py.tally}
if _compiled is not None:
    _KERNELS["cython"] = _compiled.tally

if os.environ.get("DKERGM_PURE_PYTHON") or _compiled is None:
    BACKEND = "python"
else:
    BACKEND = "cython"

tally = _KERNELS[BACKEND]


def available():
    return sorted(_KERNELS)


def get_tally(name=None):
    if name is None:
        return tally
    try:
        return _KERNELS[name]
    except KeyError:
        raise ValueError(f"kernel {name!r} unavailable; have {available()}") from None
