"""Pure numpy versions of the hot kernels.

Same contracts as the compiled module ``_ckernels``; results agree to
rounding but are not guaranteed bit-identical across backends.
"""

import numpy as np

_PI_M14 = np.pi ** -0.25
_RESCALE = 1e150
_LOG_RESCALE = np.log(_RESCALE)


def hermite_table(n_max, x):
    """Normalized Hermite functions phi_0..phi_{n_max} at the points ``x``.

    Returns an array of shape ``(n_max + 1, len(x))``. The recurrence runs on
    values stripped of the Gaussian factor; a per-point log scale is carried
    so large ``|x|`` underflows gracefully instead of producing zeros early.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty((n_max + 1, x.size))
    log_scale = -0.5 * x * x
    factor = np.exp(log_scale)
    p_prev = np.zeros_like(x)
    p = np.full_like(x, _PI_M14)
    out[0] = p * factor
    for n in range(n_max):
        p_next = x * np.sqrt(2.0 / (n + 1)) * p - np.sqrt(n / (n + 1.0)) * p_prev
        big = np.abs(p_next) > _RESCALE
        if big.any():
            p_next[big] /= _RESCALE
            p[big] /= _RESCALE
            log_scale[big] += _LOG_RESCALE
            factor[big] = np.exp(log_scale[big])
        p_prev, p = p, p_next
        out[n + 1] = p * factor
    return out


def superpose(coeffs, x):
    """psi[t, j] = sum_n coeffs[t, n] * phi_n(x[j]) for every row of ``coeffs``."""
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=np.complex128))
    table = hermite_table(coeffs.shape[1] - 1, x)
    return coeffs @ table


def banded_apply(bands, v):
    """out[n] = sum_k bands[k, n] * v[n + k - 2] for offsets -2..2 (zero outside)."""
    out = bands[2] * v
    out[2:] += bands[0, 2:] * v[:-2]
    out[1:] += bands[1, 1:] * v[:-1]
    out[:-1] += bands[3, :-1] * v[1:]
    out[:-2] += bands[4, :-2] * v[2:]
    return out


def expm_banded(bands, v, steps, rtol=1e-16, max_terms=80):
    """Apply exp(G) to ``v`` where G is pentadiagonal, as ``steps`` Taylor sub-steps.

    Each sub-step sums terms (G/steps)^k v / k! until a term drops below
    ``rtol`` times the running sum. Raises RuntimeError if a sub-step fails to
    converge within ``max_terms``.
    """
    bands = np.asarray(bands, dtype=np.complex128) / steps
    out = np.array(v, dtype=np.complex128)
    for _ in range(steps):
        term = out.copy()
        acc = out.copy()
        for k in range(1, max_terms + 1):
            term = banded_apply(bands, term) / k
            acc += term
            if np.linalg.norm(term) <= rtol * np.linalg.norm(acc):
                break
        else:
            raise RuntimeError("Taylor series did not converge; increase steps")
        out = acc
    return out
