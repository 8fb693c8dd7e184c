"""Kernel backend selection: compiled Cython extension if built, numpy fallback
otherwise.  Set SWAPCOOL_PURE_PYTHON=1 to force the fallback."""

import os

if os.environ.get("SWAPCOOL_PURE_PYTHON"):
    from . import _fallback as _impl

    BACKEND = "python"
else:
    try:
        from . import _compiled as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _fallback as _impl

        BACKEND = "python"

improved_schedule_events = _impl.improved_schedule_events
accumulate_rows = _impl.accumulate_rows

__all__ = ["BACKEND", "improved_schedule_events", "accumulate_rows"]
