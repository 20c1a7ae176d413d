"""Hot loops: the compiled extension when it imports, numpy otherwise.

Set ``FIXEDANGLE_PURE_PYTHON=1`` to force the numpy path.
"""

from __future__ import annotations

import os

from . import _fallback

if os.environ.get("FIXEDANGLE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

cut_diagonal = _impl.cut_diagonal
apply_phase = _impl.apply_phase
apply_mixer = _impl.apply_mixer
edge_zz = _impl.edge_zz
maxcut_gray = _impl.maxcut_gray

__all__ = ["BACKEND", "cut_diagonal", "apply_phase", "apply_mixer", "edge_zz", "maxcut_gray"]
