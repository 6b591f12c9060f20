"""Hot kernels: entailment oracles and coverage counting.

Two interchangeable backends provide the same API:

* ``_core`` — a Cython extension compiled at install time;
* ``fallback`` — pure Python + numpy.

The compiled backend is preferred when importable.  ``AXACLIN_BACKEND``
overrides the choice: ``auto`` (default), ``compiled`` (fail loudly if the
extension is missing) or ``python``.

Backend API (identical in both modules):

* ``make_linear_oracle(weights, bias)``
* ``make_nn_oracle(w_hidden, b_hidden, w_out, b_out)``
* ``coverage_counts(row_bits, labels, mask, bits)``

Oracles expose ``score(bits)``, ``entails(mask, bits, want_positive)`` and,
for the linear oracle, ``entails_exhaustive(mask, bits, want_positive)``.
All bit arguments are plain integers over feature spaces of at most 64
features; callers guard larger spaces.
"""

import os

from . import fallback


def _select():
    choice = os.environ.get("AXACLIN_BACKEND", "auto").strip().lower()
    if choice not in ("auto", "compiled", "python"):
        raise ValueError(
            f"AXACLIN_BACKEND must be auto, compiled or python, got {choice!r}"
        )
    if choice == "python":
        return fallback, "python"
    try:
        from . import _core  # noqa: PLC0415

        return _core, "compiled"
    except ImportError:
        if choice == "compiled":
            raise ImportError(
                "AXACLIN_BACKEND=compiled but the axaclin._kernels._core "
                "extension is not built"
            ) from None
        return fallback, "python"


_impl, BACKEND = _select()

make_linear_oracle = _impl.make_linear_oracle
make_nn_oracle = _impl.make_nn_oracle
coverage_counts = _impl.coverage_counts

MAX_KERNEL_FEATURES = 64


def get_backend(name: str):
    """Return a specific backend module (for tests and benchmarks)."""
    if name == "python":
        return fallback
    if name == "compiled":
        from . import _core  # noqa: PLC0415

        return _core
    raise ValueError(name)


def backend_name() -> str:
    return BACKEND
