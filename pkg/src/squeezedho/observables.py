"""Quadrature moments, the uncertainty chain and ladder eigen-equation residuals.

Conventions: x = (a + a+)/sqrt2, p = (a - a+)/(i sqrt2), so [x, p] = i and the
Heisenberg bound on var_x * var_p is exactly 1/4. All moments come from ladder
matrix elements; nothing here integrates over a position grid.
"""

from dataclasses import asdict, dataclass

import numpy as np

from .fock import FockDomainError, lower_coeffs, raise_coeffs

HUR_BOUND = 0.25
NORM_TOLERANCE = 1e-10


@dataclass(frozen=True)
class UncertaintyReport:
    mean_x: float
    mean_p: float
    var_x: float
    var_p: float
    sym_cov: float
    product: float
    sur_bound: float
    hur_bound: float
    sur_gap: float
    hur_gap: float

    def to_dict(self):
        return asdict(self)

    def chain_slack(self):
        """(product - sur_bound, sur_bound - hur_bound); both >= 0 in exact arithmetic."""
        return self.product - self.sur_bound, self.sur_bound - self.hur_bound


@dataclass(frozen=True)
class ResidualReport:
    residual_norm: float
    fitted_eigenvalue: complex
    operator_descriptor: str

    def to_dict(self):
        lam = self.fitted_eigenvalue
        return {
            "residual_norm": self.residual_norm,
            "fitted_eigenvalue": [lam.real, lam.imag],
            "operator_descriptor": self.operator_descriptor,
        }


def _padded(s, extra=2):
    # room for a+ / a+^2 to act without touching the truncation edge
    return np.concatenate([s.coeffs, np.zeros(extra, dtype=np.complex128)])


def ladder_moments(s):
    """<a>, <a^2>, <a+a> of a normalized state."""
    c = _padded(s)
    a1 = lower_coeffs(c)
    a2 = lower_coeffs(a1)
    n = np.arange(c.size)
    return (
        complex(np.vdot(c, a1)),
        complex(np.vdot(c, a2)),
        float(np.sum(n * np.abs(c) ** 2)),
    )


def quadrature_moments(s, norm_tolerance=NORM_TOLERANCE):
    nsq = s.norm_sq()
    if abs(nsq - 1.0) > norm_tolerance:
        raise FockDomainError(f"state not normalized: norm^2 = {nsq:.15g}")
    a, a2, n = ladder_moments(s)
    mean_x = np.sqrt(2.0) * a.real
    mean_p = np.sqrt(2.0) * a.imag
    var_x = a2.real + n + 0.5 - mean_x**2
    var_p = -a2.real + n + 0.5 - mean_p**2
    # <{x,p}>/2 = Im<a^2>
    sym_cov = a2.imag - mean_x * mean_p
    product = var_x * var_p
    sur_bound = HUR_BOUND + sym_cov**2
    return UncertaintyReport(
        mean_x=float(mean_x),
        mean_p=float(mean_p),
        var_x=float(var_x),
        var_p=float(var_p),
        sym_cov=float(sym_cov),
        product=float(product),
        sur_bound=float(sur_bound),
        hur_bound=HUR_BOUND,
        sur_gap=float(product - sur_bound),
        hur_gap=float(product - HUR_BOUND),
    )


def sur_saturation_residual(s):
    """var_x var_p - (1/4 + sym_cov^2); zero for Gaussian (squeezed coherent) states."""
    return quadrature_moments(s).sur_gap


def _fit_residual(psi, o_psi, descriptor, beta=None):
    lam = np.vdot(psi, o_psi) / np.vdot(psi, psi) if beta is None else beta
    resid = float(np.linalg.norm(o_psi - lam * psi))
    return ResidualReport(resid, complex(lam), descriptor)


def linear_ladder_residual(s, mu, nu, beta=None):
    """Residual of (mu a - nu a+)|psi> = beta|psi>; beta is fitted unless given."""
    if mu == 0 and nu == 0:
        raise FockDomainError("mu and nu cannot both vanish")
    c = _padded(s, 1)
    up, _ = raise_coeffs(c)
    o_psi = mu * lower_coeffs(c) - nu * up
    return _fit_residual(c, o_psi, f"({mu})a - ({nu})a+", beta)


def _quadratic_parts(s):
    c = _padded(s, 2)
    up1, _ = raise_coeffs(c)
    up2, _ = raise_coeffs(up1)
    return c, lower_coeffs(lower_coeffs(c)), up2


def quadratic_ladder_residual(s, mu, nu, beta=None):
    """Residual of (mu a a - nu a+ a+)|psi> = beta|psi>; beta is fitted unless given."""
    if mu == 0 and nu == 0:
        raise FockDomainError("mu and nu cannot both vanish")
    c, aa, adad = _quadratic_parts(s)
    return _fit_residual(c, mu * aa - nu * adad, f"({mu})aa - ({nu})a+a+", beta)


def best_quadratic_ladder_fit(s):
    """Minimize the quadratic residual over |mu|^2 + |nu|^2 = 1 and beta.

    Projecting out |psi> removes beta; what is left is the smallest singular
    value of the two projected vectors [aa psi, -a+a+ psi].
    Returns (mu, nu, ResidualReport).
    """
    c, aa, adad = _quadratic_parts(s)
    c_unit = c / np.linalg.norm(c)
    cols = np.stack([aa, -adad], axis=1)
    cols = cols - np.outer(c_unit, c_unit.conj() @ cols)
    _, sv, vh = np.linalg.svd(cols, full_matrices=False)
    mu, nu = vh[-1].conj()
    report = quadratic_ladder_residual(s, complex(mu), complex(nu))
    return complex(mu), complex(nu), report
