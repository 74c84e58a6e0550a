"""Kernel backend selection.

The compiled extension is preferred; the numpy implementation is used when
the extension has not been built. ``BACKEND`` names the active choice.
"""

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["compiled"] = _ckernels

BACKEND = "compiled" if _ckernels is not None else "python"
_active = _BACKENDS[BACKEND]


def available() -> list[str]:
    return sorted(_BACKENDS)


def get(name: str | None = None):
    """Return the kernel module for ``name`` (default: the active backend)."""
    if name is None:
        return _active
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} not available; have {available()}") from None


def use(name: str) -> None:
    """Switch the active backend for the whole process."""
    global _active, BACKEND
    _active = get(name)
    BACKEND = name
