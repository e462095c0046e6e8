"""Kernel backend selection.

Set ``PGL2ATLAS_NO_NUMBA=1`` before import to force the pure-numpy kernels.
The numba kernels are used otherwise, when numba imports cleanly.
"""

import logging
import os

from . import _kernels_numpy

log = logging.getLogger(__name__)


def _want_numba() -> bool:
    flag = os.environ.get("PGL2ATLAS_NO_NUMBA", "").strip().lower()
    return flag in ("", "0", "false", "no")


kernels = _kernels_numpy
BACKEND = "numpy"

if _want_numba():
    try:
        from . import _kernels_numba
    except ImportError:  # pragma: no cover - numba missing
        log.warning("numba unavailable, falling back to numpy kernels")
    else:
        kernels = _kernels_numba
        BACKEND = "numba"
