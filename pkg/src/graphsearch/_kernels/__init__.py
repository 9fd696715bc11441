"""Hot numerical kernels with a compiled core and a pure-Python fallback.

The compiled extension (`_fast`, built from Cython) is preferred; when it is
missing, or when GRAPHSEARCH_PURE=1 is set, the pure-Python implementations
in `pyimpl` are used instead.  Both expose the same functions with identical
semantics; `tests/test_kernels.py` checks them against each other and the
`kernels` CLI subcommand benchmarks them side by side.
"""

import os


def _select():
    forced = os.environ.get("GRAPHSEARCH_PURE", "")
    if forced and forced != "0":
        from . import pyimpl

        return pyimpl
    try:
        from . import _fast  # type: ignore[attr-defined]

        return _fast
    except ImportError:
        from . import pyimpl

        return pyimpl


impl = _select()

BACKEND: str = impl.BACKEND
subset_dp_average = impl.subset_dp_average
worst_enum = impl.worst_enum
alpha_separator = impl.alpha_separator
min_ratio_cut = impl.min_ratio_cut
separator_dp = impl.separator_dp
schedule_dp = impl.schedule_dp
gap_dp = impl.gap_dp
mask_components = impl.mask_components


def available_backends() -> dict:
    """All importable kernel backends, keyed by name."""
    from . import pyimpl

    out = {"python": pyimpl}
    try:
        from . import _fast  # type: ignore[attr-defined]

        out["cython"] = _fast
    except ImportError:
        pass
    return out
