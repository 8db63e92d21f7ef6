"""Kernel backend selection.

The compiled Cython core is used when present; otherwise the numpy fallback.
Set ``ENTGEN_BACKEND=pure`` or ``ENTGEN_BACKEND=compiled`` to force a choice
(forcing ``compiled`` raises if the extension is missing). Both backends
implement the same in-place kernel API, so everything above this module is
backend-agnostic.
"""

import os

from .errors import ConfigError

_choice = os.environ.get("ENTGEN_BACKEND", "auto").lower()
if _choice not in ("auto", "compiled", "pure"):
    raise ConfigError(f"ENTGEN_BACKEND must be auto, compiled or pure, got {_choice!r}")

if _choice == "pure":
    from . import _pure as _impl
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        if _choice == "compiled":
            raise
        from . import _pure as _impl  # type: ignore[no-redef]

BACKEND_NAME: str = _impl.BACKEND_NAME

apply_gate = _impl.apply_gate
apply_pauli = _impl.apply_pauli
run_circuit = _impl.run_circuit
run_circuit_batch = _impl.run_circuit_batch
subset_purity = _impl.subset_purity
powerset_purity_sum = _impl.powerset_purity_sum
ce_full_batch = _impl.ce_full_batch
