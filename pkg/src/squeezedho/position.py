"""Position-space wavefunctions and densities built from Hermite functions.

x is in oscillator-length units, so phi_0(x) = pi^{-1/4} exp(-x^2/2).
"""

import io
from dataclasses import dataclass

import numpy as np

from . import _kernels

EDGE_TOLERANCE = 1e-10
DEFAULT_HUMP_THRESHOLD = 0.05


@dataclass(frozen=True)
class Grid:
    x_min: float = -12.0
    x_max: float = 12.0
    n_points: int = 2001

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError("grid needs x_min < x_max")
        if self.n_points < 2:
            raise ValueError("grid needs at least 2 points")

    @property
    def x(self):
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def dx(self):
        return (self.x_max - self.x_min) / (self.n_points - 1)

    def to_dict(self):
        return {"x_min": self.x_min, "x_max": self.x_max, "n_points": self.n_points}


@dataclass(frozen=True, eq=False)
class GridWavefunction:
    grid: Grid
    t: float
    values: np.ndarray
    edge_density: float

    @property
    def adequate(self):
        return self.edge_density < EDGE_TOLERANCE


@dataclass(frozen=True, eq=False)
class GridDensity:
    grid: Grid
    t: float
    values: np.ndarray
    edge_density: float = 0.0

    @property
    def adequate(self):
        return self.edge_density < EDGE_TOLERANCE

    @property
    def x(self):
        return self.grid.x

    def integral(self):
        return trapezoid(self.values, self.grid.dx)

    def peak(self):
        return float(self.values.max())


def trapezoid(values, dx):
    v = np.asarray(values)
    return float(dx * (v.sum() - 0.5 * (v[0] + v[-1])))


def hermite_function(n, x):
    """phi_n(x) by the normalized three-term recurrence; scalar or array x."""
    if n < 0:
        raise ValueError("n must be non-negative")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    vals = _kernels.hermite_table(n, xs.ravel())[n].reshape(xs.shape)
    return float(vals[0]) if np.ndim(x) == 0 else vals


def hermite_functions(n_max, x):
    """All phi_0..phi_{n_max} at the points x, shape (n_max+1, len(x))."""
    return _kernels.hermite_table(n_max, np.asarray(x, dtype=float))


def _edge(values):
    return float(max(abs(values[0]) ** 2, abs(values[-1]) ** 2))


def wavefunction_on_grid(s, grid, t=0.0):
    """psi(x) = sum_n c_n phi_n(x). ``t`` is only carried as a label."""
    psi = _kernels.superpose(s.coeffs[None, :], grid.x)[0]
    return GridWavefunction(grid, t, psi, _edge(psi))


def density_on_grid(s, grid, t=0.0):
    psi = wavefunction_on_grid(s, grid, t)
    return GridDensity(grid, t, np.abs(psi.values) ** 2, psi.edge_density)


def density_surface(s, grid, times):
    """Densities of T(t)|s> for each t, sharing one Hermite evaluation."""
    times = np.asarray(times, dtype=float)
    n = np.arange(s.policy.dim)
    rows = np.exp(-1j * np.outer(times, n + 0.5)) * s.coeffs[None, :]
    psi = _kernels.superpose(rows, grid.x)
    rho = np.abs(psi) ** 2
    return [GridDensity(grid, float(t), rho[k], _edge(psi[k])) for k, t in enumerate(times)]


def _strict_maxima(v):
    """Indices of plateau-aware strict local maxima (interior only)."""
    idx = []
    i, m = 1, len(v)
    while i < m - 1:
        if v[i] > v[i - 1]:
            j = i
            while j < m - 1 and v[j + 1] == v[i]:
                j += 1
            if j < m - 1 and v[j + 1] < v[i]:
                idx.append((i + j) // 2)
            i = j + 1
        else:
            i += 1
    return idx


def count_humps(d, threshold_frac=DEFAULT_HUMP_THRESHOLD):
    """Number of strict local maxima at least ``threshold_frac`` of the global max."""
    if not 0.0 < threshold_frac < 1.0:
        raise ValueError("threshold_frac must lie in (0, 1)")
    v = np.asarray(d.values if hasattr(d, "values") else d)
    top = v.max()
    return sum(1 for i in _strict_maxima(v) if v[i] >= threshold_frac * top)


def count_nodes(d, rel_floor=1e-3, threshold_frac=DEFAULT_HUMP_THRESHOLD):
    """Near-zeros of the density lying between its outermost humps.

    On a grid a simple zero of psi shows up as a local minimum of |psi|^2
    below ``rel_floor`` times the global max. Minima in the decaying tails
    (roundoff ripples) are excluded.
    """
    v = np.asarray(d.values if hasattr(d, "values") else d)
    top = v.max()
    humps = [i for i in _strict_maxima(v) if v[i] >= threshold_frac * top]
    if len(humps) < 2:
        return 0
    lo, hi = humps[0], humps[-1]
    return sum(1 for i in _strict_maxima(-v) if lo < i < hi and v[i] < rel_floor * top)


def density_csv(densities):
    """Long-form CSV text ``x,t,rho`` with 15 significant digits."""
    buf = io.StringIO()
    buf.write("x,t,rho\n")
    for d in densities:
        x = d.grid.x
        for xi, ri in zip(x, d.values):
            buf.write(f"{xi:.15g},{d.t:.15g},{ri:.15g}\n")
    return buf.getvalue()


def parse_density_csv(text):
    """Parse ``density_csv`` output back into arrays (x, t, rho)."""
    data = np.loadtxt(io.StringIO(text), delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1], data[:, 2]
