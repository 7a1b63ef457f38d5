"""Hot numerical kernels with a compiled backend and a numpy fallback.

The compiled extension ``_ckernels`` is used when it was built; otherwise the
numpy implementations in ``_pykernels`` are loaded. ``use_backend`` switches
explicitly, mainly for benchmarks and backend-agreement tests.

Kernels
-------
hermite_table(n_max, x)
    Normalized Hermite functions on a set of points.
superpose(coeffs, x)
    Fock-coefficient superposition of Hermite functions, many rows at once.
banded_apply(bands, v)
    Pentadiagonal matrix-vector product.
expm_banded(bands, v, steps)
    Sub-stepped Taylor exponential of a pentadiagonal generator applied to v.
"""

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_NAMES = ("hermite_table", "superpose", "banded_apply", "expm_banded")
BACKEND = ""


def available_backends():
    return ["cython", "python"] if _ckernels is not None else ["python"]


def use_backend(name):
    """Select ``"cython"`` or ``"python"`` kernels for this process."""
    global BACKEND
    if name == "cython":
        if _ckernels is None:
            raise ImportError("compiled kernels are not built")
        mod = _ckernels
    elif name == "python":
        mod = _pykernels
    else:
        raise ValueError(f"unknown backend {name!r}")
    for attr in _NAMES:
        globals()[attr] = getattr(mod, attr)
    BACKEND = name


use_backend("cython" if _ckernels is not None else "python")
