"""Displacement, squeeze, free evolution and parity-projected displacement.

Operators are never formed as matrices. Their generators are pentadiagonal in
the number basis, so exp(G)|psi> is computed by a sub-stepped Taylor series
(see ``_kernels.expm_banded``) on a working space ``guard_band`` levels larger
than the state, and the mass that lands above n_max is audited before the
result is cropped back.

Squeeze convention: S(z) = exp[(z a+a+ - z* a a)/2] taken literally. For real
r > 0 this maps x -> e^r x, so the squeezed vacuum is *wide* in x at t = 0
(var_x = e^{2r}/2).
"""

import enum
import math
from typing import NamedTuple

import numpy as np

from . import _kernels
from .fock import (
    DEFAULT_POLICY,
    FockDomainError,
    FockState,
    TruncationError,
    number_state,
)

SQUEEZE_CONVENTION = (
    "S(z)=exp[(z a^dag^2 - conj(z) a^2)/2]; real r>0 widens x: "
    "var_x(S(r)|0>) = exp(2r)/2, matching d^2(0)=s^2"
)

# Flipped only by mutation tests; production code never changes it.
SQUEEZE_SIGN = 1

DEGENERATE_THRESHOLD = 1e-10


class DegeneracyError(ValueError):
    """D(a)|psi> +/- D(-a)|psi> is (numerically) the zero vector."""


class Parity(enum.IntEnum):
    EVEN = 1
    ODD = -1

    @classmethod
    def parse(cls, value):
        if isinstance(value, Parity):
            return value
        key = str(value).strip().lower()
        if key in ("even", "+", "+1", "1"):
            return cls.EVEN
        if key in ("odd", "-", "-1"):
            return cls.ODD
        raise ValueError(f"unknown parity {value!r}")


class StateKind(str, enum.Enum):
    COHERENT = "coherent"
    SQUEEZED_COHERENT = "squeezed_coherent"
    CAT = "cat"
    EO_SQUEEZED = "eo_squeezed"
    SQUEEZED_NUMBER = "squeezed_number"
    EO_SQUEEZED_NUMBER = "eo_squeezed_number"


class ParityProjection(NamedTuple):
    state: FockState
    normalization: float  # factor applied to the raw combination
    raw_norm_sq: float


def displacement_bands(alpha, dim):
    """Bands of alpha a+ - conj(alpha) a on ``dim`` levels."""
    n = np.arange(dim)
    bands = np.zeros((5, dim), dtype=np.complex128)
    bands[1] = alpha * np.sqrt(n)  # (a+ v)[n] = sqrt(n) v[n-1]
    bands[3] = -np.conj(alpha) * np.sqrt(n + 1.0)
    bands[3, -1] = 0.0
    return bands


def squeeze_bands(z, dim):
    """Bands of (z a+^2 - conj(z) a^2)/2 on ``dim`` levels."""
    n = np.arange(dim, dtype=float)
    bands = np.zeros((5, dim), dtype=np.complex128)
    bands[0] = 0.5 * z * np.sqrt(n * (n - 1.0).clip(min=0.0))
    bands[4] = -0.5 * np.conj(z) * np.sqrt((n + 1.0) * (n + 2.0))
    bands[4, -2:] = 0.0
    return bands


def _norm_bound(bands):
    """Upper bound sqrt(||G||_1 ||G||_inf) on the spectral norm."""
    dim = bands.shape[1]
    mag = np.abs(bands)
    rows = mag.sum(axis=0)
    cols = np.zeros(dim)
    for k, off in enumerate(range(-2, 3)):
        lo, hi = max(0, -off), min(dim, dim - off)
        cols[lo + off:hi + off] += mag[k, lo:hi]
    return math.sqrt(rows.max() * cols.max())


def _check_normalized(s, step):
    tol = max(s.policy.tail_tolerance, 1e-12)
    if abs(s.norm_sq() - 1.0) > tol:
        raise FockDomainError(
            f"{step}: input norm^2 {s.norm_sq():.15g} is not 1 within {tol:.1e}"
        )


def _exp_generator(s, bands_of, step):
    pol = s.policy
    dim = pol.dim + pol.guard_band
    work = np.zeros(dim, dtype=np.complex128)
    work[:pol.dim] = s.coeffs
    bands = bands_of(dim)
    steps = max(1, math.ceil(_norm_bound(bands)))
    out = _kernels.expm_banded(bands, work, steps)
    leaked = float(np.vdot(out[pol.dim:], out[pol.dim:]).real)
    if leaked > pol.tail_tolerance:
        raise TruncationError(step, leaked, pol.tail_tolerance)
    return s.with_coeffs(out[:pol.dim])


def displace(s, alpha):
    """D(alpha)|s> = exp(alpha a+ - conj(alpha) a)|s>."""
    _check_normalized(s, "displace")
    alpha = complex(alpha)
    if alpha == 0:
        return s
    return _exp_generator(s, lambda d: displacement_bands(alpha, d), "displace")


def squeeze(s, r, phi=0.0):
    """S(z)|s> with z = r e^{i phi}; r may be negative."""
    _check_normalized(s, "squeeze")
    z = SQUEEZE_SIGN * r * np.exp(1j * phi)
    if z == 0:
        return s
    return _exp_generator(s, lambda d: squeeze_bands(z, d), "squeeze")


def evolve(s, t):
    """T(t) = exp[-i t (a+a + 1/2)], applied exactly (diagonal)."""
    n = np.arange(s.policy.dim)
    return s.with_coeffs(np.exp(-1j * t * (n + 0.5)) * s.coeffs)


def _eo_raw(s, alpha, parity):
    return displace(s, alpha).coeffs + int(parity) * displace(s, -alpha).coeffs


def eo_displace(s, alpha, parity):
    """Normalized [D(alpha) +/- D(-alpha)]|s>, with the factor that was applied."""
    parity = Parity.parse(parity)
    raw = _eo_raw(s, complex(alpha), parity)
    raw_norm_sq = float(np.vdot(raw, raw).real)
    if raw_norm_sq < DEGENERATE_THRESHOLD:
        raise DegeneracyError(
            f"eo_displace: {parity.name.lower()} combination has norm^2 "
            f"{raw_norm_sq:.3e} < {DEGENERATE_THRESHOLD:.0e}"
        )
    factor = 1.0 / math.sqrt(raw_norm_sq)
    return ParityProjection(s.with_coeffs(raw * factor), factor, raw_norm_sq)


def nonunitarity_witness(alpha, parity, policy=DEFAULT_POLICY):
    """Squared norms of [D(alpha) +/- D(-alpha)] applied to |0> and to |1>.

    A unitary (or a scalar multiple of an isometry) would give equal values.
    """
    if abs(alpha) == 0:
        raise FockDomainError("nonunitarity_witness needs alpha != 0")
    parity = Parity.parse(parity)
    out = []
    for n in (0, 1):
        raw = _eo_raw(number_state(n, policy), complex(alpha), parity)
        out.append(float(np.vdot(raw, raw).real))
    return tuple(out)


def coherent(alpha, policy=DEFAULT_POLICY):
    return displace(number_state(0, policy), alpha)


def cat(alpha, parity, policy=DEFAULT_POLICY):
    return eo_displace(number_state(0, policy), alpha, parity).state


def build_state(
    kind,
    alpha=0.0,
    r=0.0,
    phi=0.0,
    n=0,
    parity=Parity.EVEN,
    policy=DEFAULT_POLICY,
    alpha_max=3.0,
    r_max=1.5,
    with_normalization=False,
):
    """Compose number_state -> squeeze -> (parity-projected) displacement.

    With ``with_normalization=True`` returns ``(state, factor)`` where factor
    is the D+/- normalization (None for the plain-displacement kinds).
    """
    kind = StateKind(kind)
    alpha = complex(alpha)
    if not (np.isfinite(alpha) and abs(alpha) <= alpha_max):
        raise FockDomainError(f"|alpha| = {abs(alpha):.6g} exceeds alpha_max={alpha_max}")
    if not (math.isfinite(r) and abs(r) <= r_max):
        raise FockDomainError(f"|r| = {abs(r):.6g} exceeds r_max={r_max}")
    if not math.isfinite(phi):
        raise FockDomainError("phi must be finite")
    numbered = kind in (StateKind.SQUEEZED_NUMBER, StateKind.EO_SQUEEZED_NUMBER)
    if numbered:
        if not (0 <= n <= policy.n_max // 4):
            raise FockDomainError(f"n={n} outside 0..{policy.n_max // 4}")
    elif n != 0:
        raise FockDomainError(f"kind {kind.value} takes no number-state index")
    squeezed = kind not in (StateKind.COHERENT, StateKind.CAT)
    projected = kind in (StateKind.CAT, StateKind.EO_SQUEEZED, StateKind.EO_SQUEEZED_NUMBER)

    s = number_state(n, policy)
    if squeezed:
        s = squeeze(s, r, phi)
    factor = None
    if projected:
        s, factor, _ = eo_displace(s, alpha, parity)
    else:
        s = displace(s, alpha)
    return (s, factor) if with_normalization else s
