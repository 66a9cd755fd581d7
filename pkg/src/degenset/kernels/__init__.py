"""Backend selection for the hot subset/ordering kernels.

Set ``DEGENSET_BACKEND=numpy`` to force the pure numpy path; the default is
numba when it imports cleanly.
"""

import os

BACKEND_ENV = "DEGENSET_BACKEND"

KERNELS = (
    "graph_masks",
    "residual_degrees",
    "degenerate_table",
    "incentive_table",
    "subset_sums",
    "activation_table",
    "back_degrees",
    "backdeg_histogram_table",
)


def _load(name):
    if name == "numba":
        from . import _numba as module
    elif name == "numpy":
        from . import _numpy as module
    else:
        raise ValueError(f"unknown kernel backend {name!r}; expected 'numba' or 'numpy'")
    return module


def _select():
    requested = os.environ.get(BACKEND_ENV, "").strip().lower()
    if requested:
        return requested, _load(requested)
    try:
        return "numba", _load("numba")
    except ImportError:
        return "numpy", _load("numpy")


BACKEND, _impl = _select()

graph_masks = _impl.graph_masks
residual_degrees = _impl.residual_degrees
degenerate_table = _impl.degenerate_table
incentive_table = _impl.incentive_table
subset_sums = _impl.subset_sums
activation_table = _impl.activation_table
back_degrees = _impl.back_degrees
backdeg_histogram_table = _impl.backdeg_histogram_table


def backend_module(name):
    """Return the kernel module for ``name`` regardless of the active backend."""
    return _load(name)
