"""Kernel selection: compiled extension if available, pure Python otherwise.

The environment variable PCMC_KERNEL forces a backend ("compiled" or
"python"); by default the compiled extension is used when it imports.
Both backends expose the same two functions and produce bit-identical
results, so the choice only affects speed.
"""

from __future__ import annotations

import os

from . import _kernel_py

_forced = os.environ.get("PCMC_KERNEL", "").strip().lower()

_compiled = None
if _forced != "python":
    try:
        from . import _mc_kernel as _compiled
    except ImportError:
        _compiled = None
        if _forced == "compiled":
            raise ImportError(
                "PCMC_KERNEL=compiled but the pcmc._mc_kernel extension is not built"
            )

if _compiled is not None:
    BACKEND = "compiled"
    run_chunk = _compiled.run_chunk
    trial_values = _compiled.trial_values
else:
    BACKEND = "python"
    run_chunk = _kernel_py.run_chunk
    trial_values = _kernel_py.trial_values
