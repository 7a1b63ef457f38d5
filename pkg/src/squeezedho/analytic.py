"""Closed-form densities of even/odd squeezed states and structural checks.

For real alpha and real r >= 0, the state T(t) N [D(alpha) +/- D(-alpha)] S(r)|0>
has density

    rho(x, t) = N(t) exp(-(x^2 + xc^2)/d^2) {cosh(2 x xc / d^2) +/- cos(k x)}

with s = e^{|r|}, d^2 = s^2 cos^2 t + sin^2 t / s^2, x0 = sqrt2 alpha,
xc = x0 cos t and k = 2 x0 sin t / (d^2 s^2). The Gaussian factor comes from
writing each displaced squeezed Gaussian out explicitly; integrating gives
N(t) = 1 / (sqrt(pi) d (1 +/- exp(-x0^2/s^2))).
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .factory import DegeneracyError, Parity
from .position import GridDensity, wavefunction_on_grid


@dataclass(frozen=True)
class EOSqueezedDensityParams:
    x0: float
    r: float
    parity: Parity = Parity.EVEN

    def __post_init__(self):
        object.__setattr__(self, "parity", Parity.parse(self.parity))
        if not (math.isfinite(self.x0) and self.x0 >= 0.0):
            raise ValueError("x0 must be finite and >= 0")
        if not math.isfinite(self.r):
            raise ValueError("r must be finite")
        if self.r < 0.0:
            # s(r) folds the sign away, but under S(z)=exp[(z a+^2 - z* a^2)/2]
            # a negative r starts narrow in x, which d^2(0) = s^2 does not describe
            raise ValueError("closed form covers r >= 0 only; use the Fock pipeline")

    @classmethod
    def from_alpha(cls, alpha, r, parity=Parity.EVEN):
        return cls(math.sqrt(2.0) * float(alpha), r, parity)

    @property
    def s(self):
        return s_of_r(self.r)


def s_of_r(r):
    """Width scale s with ln s = r sgn(r), i.e. e^{|r|}."""
    return math.exp(r * np.sign(r))


def d_squared(t, s):
    return s**2 * np.cos(t) ** 2 + np.sin(t) ** 2 / s**2


def normalization(t, p):
    """The x-independent prefactor N(t) that gives unit integral."""
    s = p.s
    d = np.sqrt(d_squared(t, s))
    overlap = math.exp(-(p.x0**2) / s**2)
    denom = 1.0 + int(p.parity) * overlap
    if denom < 1e-14:
        raise DegeneracyError("odd combination with x0 = 0 has no density")
    return 1.0 / (math.sqrt(math.pi) * d * denom)


def eo_squeezed_density(x, t, p):
    """rho_{+/-}(x, t) for real displacement and real squeeze; vectorized in x."""
    x = np.asarray(x, dtype=float)
    s = p.s
    d2 = d_squared(t, s)
    xc = p.x0 * np.cos(t)
    k = 2.0 * p.x0 * np.sin(t) / (d2 * s**2)
    # exp(-(x^2+xc^2)/d^2) cosh(2 x xc/d^2), written without overflow
    even_part = 0.5 * (np.exp(-((x - xc) ** 2) / d2) + np.exp(-((x + xc) ** 2) / d2))
    fringe = np.exp(-(x**2 + xc**2) / d2) * np.cos(k * x)
    rho = normalization(t, p) * (even_part + int(p.parity) * fringe)
    return np.maximum(rho, 0.0)


def eo_squeezed_density_on_grid(grid, t, p):
    return GridDensity(grid, float(t), eo_squeezed_density(grid.x, t, p))


def fringe_period(t, p):
    """Spatial period 2 pi / k of the interference term."""
    s = p.s
    k = 2.0 * p.x0 * abs(np.sin(t)) / (d_squared(t, s) * s**2)
    return math.inf if k == 0 else 2.0 * math.pi / k


def compare_densities(analytic, numeric, params=None):
    """JSON-ready comparison of two densities on the same grid."""
    if analytic.grid != numeric.grid:
        raise ValueError("densities live on different grids")
    diff = analytic.values - numeric.values
    return {
        "max_abs_diff": float(np.max(np.abs(diff))),
        "l2_diff": float(np.sqrt(analytic.grid.dx * np.sum(diff**2))),
        "grid": analytic.grid.to_dict(),
        "params": dict(params or {}),
    }


class PolynomialFit(NamedTuple):
    residual: float
    coeffs: np.ndarray  # in the scaled variable u = (x - center) / scale
    center: float
    scale: float

    @property
    def roots(self):
        if len(self.coeffs) < 2:
            return np.array([])
        return self.center + self.scale * np.polynomial.polynomial.polyroots(self.coeffs)


def fit_polynomial_ratio(s, ref_gaussian, grid, n, rel_cut=1e-6):
    """Least-squares fit of psi_s / psi_ref by a degree-n complex polynomial in x."""
    psi = wavefunction_on_grid(s, grid).values
    ref = wavefunction_on_grid(ref_gaussian, grid).values
    mask = np.abs(ref) > rel_cut * np.abs(ref).max()
    if mask.sum() <= n + 1:
        raise ValueError("reference state has too little support on the grid")
    x = grid.x[mask]
    ratio = psi[mask] / ref[mask]
    center = 0.5 * (x.min() + x.max())
    scale = max(0.5 * (x.max() - x.min()), 1e-12)
    u = (x - center) / scale
    vander = np.polynomial.polynomial.polyvander(u, n).astype(np.complex128)
    coeffs, *_ = np.linalg.lstsq(vander, ratio, rcond=None)
    resid = np.linalg.norm(vander @ coeffs - ratio) / np.linalg.norm(ratio)
    return PolynomialFit(float(resid), coeffs, center, scale)


def polynomial_structure_check(s, ref_gaussian, grid, n):
    """Relative residual of fitting psi_s / psi_ref by a degree-n polynomial.

    Near zero when s is D S|n> and ref is D S|0> at the same time: the
    squeezed number wavefunction is the Gaussian times a Hermite polynomial in
    a (complex) linear function of x.
    """
    return fit_polynomial_ratio(s, ref_gaussian, grid, n).residual
