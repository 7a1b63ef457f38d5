"""Truncated Fock-basis states and exact ladder / parity actions.

Amplitudes c_0..c_{n_max} are stored densely. Every operation returns a new
state; nothing here mutates its input.
"""

from dataclasses import dataclass, field

import numpy as np


class FockDomainError(ValueError):
    """Argument outside an operation's domain (range, shape, normalization)."""


class TruncationError(RuntimeError):
    """Probability mass pushed past n_max exceeded the tail tolerance."""

    def __init__(self, step, leaked, tolerance):
        self.step = step
        self.leaked = leaked
        self.tolerance = tolerance
        super().__init__(
            f"{step}: leaked mass {leaked:.3e} exceeds tail tolerance {tolerance:.1e}"
        )


@dataclass(frozen=True)
class TruncationPolicy:
    n_max: int = 256
    guard_band: int = 16
    tail_tolerance: float = 1e-12

    def __post_init__(self):
        if not (self.n_max >= self.guard_band >= 0):
            raise FockDomainError("need n_max >= guard_band >= 0")
        if not (0.0 < self.tail_tolerance < 1.0):
            raise FockDomainError("tail_tolerance must lie in (0, 1)")

    @property
    def dim(self):
        return self.n_max + 1


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True, eq=False)
class FockState:
    """Pure oscillator state as a coefficient vector over |0>..|n_max>."""

    coeffs: np.ndarray
    policy: TruncationPolicy = field(default=DEFAULT_POLICY)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128)
        if c.ndim != 1 or c.size != self.policy.dim:
            raise FockDomainError(
                f"expected {self.policy.dim} amplitudes, got shape {c.shape}"
            )
        if not np.all(np.isfinite(c)):
            raise FockDomainError("amplitudes must be finite")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def n_max(self):
        return self.policy.n_max

    def norm_sq(self):
        return float(np.vdot(self.coeffs, self.coeffs).real)

    def tail_mass(self, k=None):
        """Mass on levels n > n_max - k (k defaults to the guard band)."""
        if k is None:
            k = self.policy.guard_band
        if k <= 0:
            return 0.0
        tail = self.coeffs[self.n_max - k + 1:]
        return float(np.vdot(tail, tail).real)

    def with_coeffs(self, coeffs):
        return FockState(coeffs, self.policy)

    def normalized(self):
        nrm = np.sqrt(self.norm_sq())
        if nrm == 0.0:
            raise FockDomainError("cannot normalize the zero vector")
        return self.with_coeffs(self.coeffs / nrm)

    def __repr__(self):
        return f"FockState(n_max={self.n_max}, norm_sq={self.norm_sq():.15g})"


def number_state(n, policy=DEFAULT_POLICY):
    if not (0 <= n <= policy.n_max):
        raise FockDomainError(f"level {n} outside 0..{policy.n_max}")
    c = np.zeros(policy.dim, dtype=np.complex128)
    c[n] = 1.0
    return FockState(c, policy)


def vacuum(policy=DEFAULT_POLICY):
    return number_state(0, policy)


def lower_coeffs(c):
    """a acting on a raw coefficient vector (top level drops out)."""
    out = np.zeros_like(c)
    out[:-1] = np.sqrt(np.arange(1, c.size)) * c[1:]
    return out


def raise_coeffs(c):
    """a-dagger on a raw vector; returns (result, mass shifted past the top)."""
    out = np.zeros_like(c)
    out[1:] = np.sqrt(np.arange(1, c.size)) * c[:-1]
    leaked = c.size * abs(c[-1]) ** 2
    return out, float(leaked)


def apply_lowering(s):
    return s.with_coeffs(lower_coeffs(s.coeffs))


def apply_raising(s):
    out, leaked = raise_coeffs(s.coeffs)
    if leaked > s.policy.tail_tolerance:
        raise TruncationError("apply_raising", leaked, s.policy.tail_tolerance)
    return s.with_coeffs(out)


def apply_parity(s):
    signs = np.where(np.arange(s.policy.dim) % 2 == 0, 1.0, -1.0)
    return s.with_coeffs(signs * s.coeffs)


def inner(a, b):
    """<a|b>, conjugate-linear in the first argument."""
    if a.coeffs.size != b.coeffs.size:
        raise FockDomainError(
            f"dimension mismatch: {a.coeffs.size} vs {b.coeffs.size}"
        )
    return complex(np.vdot(a.coeffs, b.coeffs))


def fidelity(a, b):
    return abs(inner(a, b)) ** 2 / (a.norm_sq() * b.norm_sq())
