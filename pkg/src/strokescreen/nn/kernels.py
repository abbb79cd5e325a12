"""Kernel backend selection.

The compiled extension is preferred when importable; the numpy reference
backend is the fallback. Selection happens once at import, can be pinned
with the STROKESCREEN_BACKEND environment variable ("compiled" or
"reference"), and can be switched at runtime with use_backend() — the
benchmark and the parity tests rely on that.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

from strokescreen.nn import kernels_ref

try:
    from strokescreen.nn import _kernels  # type: ignore[attr-defined]
except ImportError:
    _kernels = None

_FORWARDED = [
    "conv1d_forward",
    "conv1d_backward",
    "conv2d_forward",
    "conv2d_backward",
    "avgpool1d_forward",
    "avgpool1d_backward",
    "avgpool2d_forward",
    "avgpool2d_backward",
    "elman_forward",
    "elman_backward",
    "iir_filter",
]

__all__ = _FORWARDED + [
    "active_backend",
    "available_backends",
    "set_backend",
    "use_backend",
]


def available_backends() -> list[str]:
    names = ["reference"]
    if _kernels is not None:
        names.insert(0, "compiled")
    return names


def _module_for(name: str):
    if name == "reference":
        return kernels_ref
    if name == "compiled":
        if _kernels is None:
            raise RuntimeError(
                "compiled backend unavailable; build it with "
                "`python setup.py build_ext --inplace`"
            )
        return _kernels
    raise ValueError(f"unknown backend {name!r}")


def _default() -> str:
    forced = os.environ.get("STROKESCREEN_BACKEND", "").strip().lower()
    if forced:
        return forced
    return "compiled" if _kernels is not None else "reference"


_impl = _module_for(_default())


def active_backend() -> str:
    return _impl.NAME


def set_backend(name: str) -> None:
    global _impl
    _impl = _module_for(name)


@contextmanager
def use_backend(name: str):
    previous = _impl.NAME
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def _make_forwarder(fname: str):
    def call(*args, **kwargs):
        return getattr(_impl, fname)(*args, **kwargs)

    call.__name__ = fname
    return call


for _fname in _FORWARDED:
    globals()[_fname] = _make_forwarder(_fname)
del _fname
