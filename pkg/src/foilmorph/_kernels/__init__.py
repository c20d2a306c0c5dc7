"""Hot-kernel dispatch: compiled extension if available, NumPy fallback.

Set ``FOILMORPH_PURE=1`` to force the pure NumPy implementation (used by
the benchmark and by tests that cross-check the two implementations).
"""

from __future__ import annotations

import os

from . import _pure

if os.environ.get("FOILMORPH_PURE") == "1":
    _impl = _pure
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pure

IMPLEMENTATION: str = _impl.IMPLEMENTATION

similarity = _impl.similarity
detect_self_intersection = _impl.detect_self_intersection
blend = _impl.blend
# Repair runs only on the rare intersecting candidate; the vectorized
# implementation is shared by both backends.
stiffen_and_smooth = _pure.stiffen_and_smooth
