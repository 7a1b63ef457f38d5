"""Acceptance checks, runnable from the CLI (``squeezedho verify``) or pytest.

Each ``check_*`` function returns a list of CheckResult. The ``fast`` suite
uses smaller random sweeps; every tolerance is the same in both suites.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from . import analytic, factory, position
from .factory import Parity, build_state, evolve
from .fock import TruncationPolicy, number_state
from .observables import quadrature_moments, quadratic_ladder_residual
from .scenario import density_grid_from_csv, parse_config, render

TWO_PI = 2.0 * math.pi


@dataclass
class CheckResult:
    criterion: str
    name: str
    passed: bool
    measured: float
    tolerance: str
    seconds: float = 0.0
    detail: str = ""

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        text = (
            f"{flag} [{self.criterion}] {self.name}: measured={self.measured:.6g} "
            f"required {self.tolerance} ({self.seconds:.2f}s)"
        )
        return text + (f" -- {self.detail}" if self.detail else "")


class _Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


def random_state(rng, kind=None):
    """One randomized state from the sweep families, evolved to a random time."""
    kinds = ["coherent", "squeezed_coherent", "cat", "eo_squeezed",
             "squeezed_number", "eo_squeezed_number"]
    kind = kind or kinds[rng.integers(len(kinds))]
    alpha = rng.uniform(0.05, 2.0) * np.exp(1j * rng.uniform(0, TWO_PI))
    r = rng.uniform(-1.0, 1.0)
    phi = rng.uniform(0, TWO_PI)
    n = int(rng.integers(0, 5)) if "number" in kind else 0
    parity = Parity.EVEN if rng.integers(2) == 0 else Parity.ODD
    t = rng.uniform(0, TWO_PI)
    s = build_state(kind, alpha, r, phi, n, parity)
    return evolve(s, t), dict(kind=kind, alpha=alpha, r=r, phi=phi, n=n, parity=parity.name, t=t)


def check_uncertainty_chain(n_states=200, seed=0):
    rng = np.random.default_rng(seed)
    worst = math.inf
    worst_at = None
    with _Timer() as tm:
        for _ in range(n_states):
            s, params = random_state(rng)
            rep = quadrature_moments(s)
            slack = min(rep.chain_slack())
            if slack < worst:
                worst, worst_at = slack, params["kind"]
    ok = worst >= -1e-10 and tm.seconds < 30.0
    return [CheckResult("C1", f"uncertainty chain over {n_states} random states", ok,
                        worst, ">= -1e-10 min slack, < 30 s", tm.seconds,
                        f"tightest: {worst_at}")]


def cat_sur_gap_closed_form(alpha):
    """SUR gap of the real-alpha even cat from <a+a> = a^2 tanh(a^2), <a^2> = a^2."""
    a2 = alpha**2
    var_x = a2 * (1.0 + math.tanh(a2)) + 0.5
    var_p = a2 * (math.tanh(a2) - 1.0) + 0.5
    return var_x * var_p - 0.25


def check_sur_saturation(n_states=100, seed=1):
    rng = np.random.default_rng(seed)
    worst = 0.0
    with _Timer() as tm:
        for _ in range(n_states):
            s, _ = random_state(rng, "squeezed_coherent")
            rep = quadrature_moments(s)
            worst = max(worst, abs(rep.sur_gap) / rep.product)
    ok = worst < 1e-8 and tm.seconds < 30.0
    out = [CheckResult("C2", f"SUR saturation, {n_states} squeezed coherent states", ok,
                       worst, "< 1e-8 relative, < 30 s", tm.seconds)]
    with _Timer() as tm:
        gap = quadrature_moments(factory.cat(2.0, Parity.EVEN)).sur_gap
    oracle = cat_sur_gap_closed_form(2.0)
    ok = gap > 0.01 and abs(gap - oracle) < 1e-9
    out.append(CheckResult("C2", "even cat alpha=2 strictly unsaturated", ok, gap,
                           f"> 0.01 and = {oracle:.12f} within 1e-9", tm.seconds))
    return out


def check_cat_eigenvalue():
    policy = TruncationPolicy(n_max=256)
    worst = 0.0
    with _Timer() as tm:
        for alpha in (0.5, 1.0, 2.0):
            for parity in Parity:
                s = factory.cat(alpha, parity, policy)
                rep = quadratic_ladder_residual(s, 1.0, 0.0, beta=alpha**2)
                worst = max(worst, rep.residual_norm)
    return [CheckResult("C3", "||(aa - alpha^2) cat|| for alpha in {0.5,1,2}, both parities",
                        worst < 1e-8, worst, "< 1e-8", tm.seconds)]


CLOSED_FORM_ALPHAS = (1.0, 2.0)
CLOSED_FORM_RS = (0.0, 0.5, 1.0)
CLOSED_FORM_TIMES = (0.0, 0.4, math.pi / 2, 2.0)


def closed_form_sup_diffs(grid=None):
    """Sup-norm gap between closed-form and Fock densities for all 48 configurations."""
    grid = grid or position.Grid()
    diffs = {}
    for alpha in CLOSED_FORM_ALPHAS:
        for r in CLOSED_FORM_RS:
            for parity in Parity:
                s = build_state("eo_squeezed", alpha, r, 0.0, 0, parity)
                params = analytic.EOSqueezedDensityParams.from_alpha(alpha, r, parity)
                for t, num in zip(CLOSED_FORM_TIMES, position.density_surface(s, grid, CLOSED_FORM_TIMES)):
                    ref = analytic.eo_squeezed_density_on_grid(grid, t, params)
                    diffs[(alpha, r, parity.name, t)] = float(np.max(np.abs(ref.values - num.values)))
    return diffs


def check_closed_form_oracle():
    with _Timer() as tm:
        diffs = closed_form_sup_diffs()
    worst_key = max(diffs, key=diffs.get)
    worst = diffs[worst_key]
    ok = worst < 1e-6 and tm.seconds < 120.0 and len(diffs) == 48
    return [CheckResult("C4", f"closed-form vs Fock density, {len(diffs)} configurations", ok,
                        worst, "< 1e-6 sup-norm, < 120 s", tm.seconds, f"worst at {worst_key}")]


def check_odd_node(n_t=200):
    grid = position.Grid()
    mid = grid.n_points // 2
    assert grid.x[mid] == 0.0
    with _Timer() as tm:
        s = build_state("eo_squeezed", 2.0, 0.5, 0.0, 0, Parity.ODD)
        times = np.arange(n_t) * TWO_PI / n_t
        worst = max(d.values[mid] / d.peak() for d in position.density_surface(s, grid, times))
    return [CheckResult("C5", f"odd-state node at x=0 over {n_t} times", worst < 1e-12,
                        worst, "< 1e-12 x peak", tm.seconds)]


def parity_scenarios(full=True):
    out = [
        {"kind": "eo_squeezed", "alpha_re": 2.0, "r": 0.5, "parity": "even"},
        {"kind": "eo_squeezed", "alpha_re": 2.0, "r": 0.5, "parity": "odd"},
        {"kind": "eo_squeezed_number", "alpha_re": 1.5, "r": 0.3, "n": 1, "parity": "even"},
        {"kind": "eo_squeezed_number", "alpha_re": 1.5, "r": 0.3, "n": 2, "parity": "odd"},
    ]
    if full:
        out += [
            {"kind": "cat", "alpha_re": 1.0, "alpha_im": 1.0, "parity": "even"},
            {"kind": "cat", "alpha_re": 1.0, "alpha_im": 1.0, "parity": "odd"},
            {"kind": "eo_squeezed", "alpha_re": 1.2, "alpha_im": -0.7, "r": -0.6, "phi": 0.9, "parity": "odd"},
            {"kind": "eo_squeezed_number", "alpha_re": 2.0, "r": 0.5, "n": 3, "parity": "even"},
        ]
    return out


def scenario_text(state, t_steps=200, outputs=("density_csv",)):
    import json

    return json.dumps({
        "state": state,
        "evolution": {"t_min": 0.0, "t_max": TWO_PI, "t_steps": t_steps},
        "outputs": list(outputs),
    })


def period_defect(csv_text):
    """max |rho(x, t+pi) - rho(x, t)| over an emitted surface with even t_steps."""
    _, ts, rho = density_grid_from_csv(csv_text)
    half = ts.size // 2
    return float(np.max(np.abs(rho[half:2 * half] - rho[:half])))


def check_parity_period(full=True):
    worst = 0.0
    with _Timer() as tm:
        for state in parity_scenarios(full):
            files = render(parse_config(scenario_text(state)))
            worst = max(worst, period_defect(files["density.csv"]))
    return [CheckResult("C6", "emitted surfaces satisfy rho(x,t+pi) = rho(x,t)", worst < 1e-9,
                        worst, "< 1e-9", tm.seconds)]


def check_two_humps():
    grid = position.Grid()
    out = []
    for r in (0.0, 0.5):
        with _Timer() as tm:
            d = position.density_on_grid(build_state("squeezed_number", 1.0, r, 0.0, 1), grid)
            humps, nodes = position.count_humps(d, 0.05), position.count_nodes(d)
        out.append(CheckResult("C7", f"D(1)S({r})|1> has 2 humps and 1 node", humps == 2 and nodes == 1,
                               humps, "humps == 2, nodes == 1", tm.seconds, f"nodes={nodes}"))
    return out


HUMP_GRID = position.Grid(-20.0, 20.0, 4001)
HUMP_R = 0.5
HUMP_ALPHA = 5.0  # x0 = 7.07 >= 4 s = 6.59


def eo_number_density(n, parity, t):
    s = build_state("eo_squeezed_number", HUMP_ALPHA, HUMP_R, 0.0, n, parity, alpha_max=HUMP_ALPHA)
    return position.density_on_grid(evolve(s, t), HUMP_GRID, t)


def origin_contrast(n):
    """|rho_+(0) - rho_-(0)| / max at t = pi/2 for D+/-(alpha) S(r)|n>."""
    mid = HUMP_GRID.n_points // 2
    even = eo_number_density(n, Parity.EVEN, math.pi / 2).values
    odd = eo_number_density(n, Parity.ODD, math.pi / 2).values
    return abs(even[mid] - odd[mid]) / max(even.max(), odd.max())


def check_eo_number_humps():
    out = []
    assert math.sqrt(2.0) * HUMP_ALPHA >= 4.0 * analytic.s_of_r(HUMP_R)
    for n in (1, 2):
        with _Timer() as tm:
            counts = [position.count_humps(eo_number_density(n, p, 0.0), 0.05) for p in Parity]
        ok = all(c == 2 * (n + 1) for c in counts)
        out.append(CheckResult("C8", f"n={n}: 2(n+1) humps at t=0, both parities", ok,
                               min(counts), f"== {2 * (n + 1)}", tm.seconds, f"counts={counts}"))
    for n in (1, 2):
        with _Timer() as tm:
            c = origin_contrast(n)
        out.append(CheckResult("C8", f"n={n}: even/odd differ at origin at t=pi/2", c > 0.1,
                               c, "> 0.1 x max", tm.seconds))
    return out


def check_nonunitarity():
    with _Timer() as tm:
        w0, w1 = factory.nonunitarity_witness(1.0, Parity.EVEN)
    target = 2.0 + 2.0 * math.exp(-2.0)
    ok = abs(w0 - w1) > 0.1 and abs(w0 - target) < 1e-9
    return [CheckResult("C9", "D+ non-unitarity witness at alpha=1", ok, abs(w0 - w1),
                        "> 0.1, first = 2+2e^-2 within 1e-9", tm.seconds,
                        f"components=({w0:.12f}, {w1:.12f})")]


def random_low_state(rng, n_support=20, policy=None):
    policy = policy or TruncationPolicy()
    c = np.zeros(policy.dim, dtype=np.complex128)
    c[:n_support] = rng.normal(size=n_support) + 1j * rng.normal(size=n_support)
    c /= np.linalg.norm(c)
    return number_state(0, policy).with_coeffs(c)


def _hermite_gram_error(n_max=30, grid=None):
    grid = grid or position.Grid()
    phi = position.hermite_functions(n_max, grid.x)
    w = np.full(grid.n_points, grid.dx)
    w[[0, -1]] *= 0.5
    gram = (phi * w) @ phi.T
    return float(np.max(np.abs(gram - np.eye(n_max + 1))))


def check_substrate(seed=2):
    rng = np.random.default_rng(seed)
    grid = position.Grid()
    out = []
    with _Timer() as tm:
        err = _hermite_gram_error(30, grid)
    out.append(CheckResult("C10", "Hermite orthonormality m,n <= 30", err < 1e-8, err, "< 1e-8", tm.seconds))

    states = [
        factory.coherent(1.5 - 0.5j),
        factory.cat(2.0, Parity.ODD),
        build_state("squeezed_number", 1.0, 0.5, 0.3, 2),
        evolve(build_state("eo_squeezed_number", 1.0 + 1.0j, -0.4, 1.0, 1, Parity.EVEN), 0.7),
    ]
    with _Timer() as tm:
        parseval = max(abs(position.density_on_grid(s, grid).integral() - s.norm_sq()) for s in states)
    out.append(CheckResult("C10", "Parseval grid vs coefficients", parseval < 1e-6, parseval, "< 1e-6", tm.seconds))

    with _Timer() as tm:
        moment_err = 0.0
        x = grid.x
        for s in states:
            rho = position.density_on_grid(s, grid).values
            rep = quadrature_moments(s)
            mx = position.trapezoid(x * rho, grid.dx)
            mx2 = position.trapezoid(x * x * rho, grid.dx)
            moment_err = max(moment_err, abs(mx - rep.mean_x),
                             abs(mx2 - (rep.var_x + rep.mean_x**2)))
    out.append(CheckResult("C10", "grid vs ladder <x>, <x^2>", moment_err < 1e-7, moment_err, "< 1e-7", tm.seconds))

    with _Timer() as tm:
        unit_err = 0.0
        for _ in range(5):
            s = random_low_state(rng)
            alpha = rng.uniform(0, 2) * np.exp(1j * rng.uniform(0, TWO_PI))
            for out_state in (factory.displace(s, alpha),
                              factory.squeeze(s, rng.uniform(-1, 1), rng.uniform(0, TWO_PI)),
                              evolve(s, rng.uniform(0, TWO_PI))):
                unit_err = max(unit_err, abs(out_state.norm_sq() - 1.0))
    out.append(CheckResult("C10", "unitarity of D, S, T", unit_err < 1e-10, unit_err, "< 1e-10", tm.seconds))
    return out


def check_determinism():
    state = {"kind": "eo_squeezed_number", "alpha_re": 1.3, "alpha_im": 0.4, "r": 0.6,
             "phi": 0.5, "n": 2, "parity": "odd"}
    text = scenario_text(state, t_steps=20,
                         outputs=("density_csv", "uncertainty_json", "report_text"))
    with _Timer() as tm:
        first = render(parse_config(text))
        second = render(parse_config(text))
    same = first == second
    return [CheckResult("C11", "identical scenario runs give identical outputs", same,
                        float(same), "== 1 (byte-identical)", tm.seconds)]


def run_suite(suite="fast", seed=0):
    if suite not in ("fast", "full"):
        raise ValueError("suite must be 'fast' or 'full'")
    full = suite == "full"
    results = []
    results += check_uncertainty_chain(200 if full else 50, seed)
    results += check_sur_saturation(100 if full else 30, seed + 1)
    results += check_cat_eigenvalue()
    results += check_closed_form_oracle()
    results += check_odd_node()
    results += check_parity_period(full)
    results += check_two_humps()
    results += check_eo_number_humps()
    results += check_nonunitarity()
    results += check_substrate(seed + 2)
    results += check_determinism()
    return results
