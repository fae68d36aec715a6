"""Checks that a computed solution actually solves its Cauchy problem.

Reports are immutable, deterministic, and serialise to JSON with the schema
``{"check", "setup", "grid", "metrics", "passed"}``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import clifford
from .errors import ParameterError
from .kernel import KernelQuery, kernel_mellin_barnes, kernel_quadrature, kernel_wright
from .solution import SkewSetup, solution_field_spectral, spectral_data
from .spectral import (GridSpec, MultivectorField, apply_frac_hilbert, apply_frac_laplacian,
                       laplacian_symbol, projection_symbol)


def _json_float(x):
    x = float(x)
    if math.isfinite(x):
        return float(f"{x:.17g}")
    return repr(x)


@dataclass(frozen=True)
class Report:
    """Outcome of a single check."""

    check: str
    setup: dict | None
    grid: dict | None
    metrics: dict
    passed: bool

    def to_dict(self) -> dict:
        return {"check": self.check, "setup": self.setup, "grid": self.grid,
                "metrics": {k: (_json_float(v) if isinstance(v, (float, np.floating)) else v)
                            for k, v in self.metrics.items()},
                "passed": bool(self.passed)}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


@dataclass(frozen=True)
class ResidualReport:
    """Residual of the evolution equation at one time.

    ``residual_linf`` is the largest pointwise Clifford norm of the residual,
    ``residual_l2`` its grid l2 norm and ``reference_norm`` the l2 norm of the
    right-hand side, so that ``relative = residual_l2 / reference_norm``.
    """

    kind: str
    setup: SkewSetup
    grid: GridSpec
    t: float
    dt: float
    residual_linf: float
    residual_l2: float
    reference_norm: float
    reference_linf: float = field(default=0.0)

    @property
    def relative(self) -> float:
        return self.residual_l2 / self.reference_norm if self.reference_norm > 0 else self.residual_l2

    @property
    def relative_linf(self) -> float:
        return self.residual_linf / self.reference_linf if self.reference_linf > 0 else self.residual_linf

    def report(self, tol: float) -> Report:
        metrics = {"t": self.t, "dt": self.dt, "residual_linf": self.residual_linf,
                   "residual_l2": self.residual_l2, "reference_norm": self.reference_norm,
                   "relative": self.relative, "relative_linf": self.relative_linf, "tol": tol}
        return Report(f"{self.kind}_residual", self.setup.to_dict(), self.grid.to_dict(),
                      metrics, self.relative <= tol)


def _generator(s: SkewSetup, grid: GridSpec) -> np.ndarray:
    """Mode-wise generator ``-|xi|**alpha (e^{i pi theta/2} chi_- + e^{-i pi theta/2} chi_+)``."""
    w = np.exp(0.5j * math.pi * s.theta)
    proj = w * projection_symbol(grid, -1) + np.conj(w) * projection_symbol(grid, 1)
    return -laplacian_symbol(grid, s.alpha)[..., None] * proj


def pde_residual(s: SkewSetup, grid: GridSpec, t: float, dt: float) -> ResidualReport:
    """Central difference in time minus ``-(-Delta)**(alpha/2) exp(i pi theta/2 H) Phi``.

    Everything is computed in physical space through the FFT pipeline.
    """
    if not t > 0 or not 0 < dt < t:
        raise ParameterError("need t > 0 and 0 < dt < t")
    up = solution_field_spectral(s, grid, t + dt)
    down = solution_field_spectral(s, grid, t - dt)
    lhs = (up - down) * (1.0 / (2 * dt))
    phi = solution_field_spectral(s, grid, t)
    rhs = -apply_frac_laplacian(apply_frac_hilbert(phi, s.theta), s.alpha)
    res = lhs - rhs
    return ResidualReport("pde", s, grid, t, dt, res.max_norm(), res.norm(), rhs.norm(), rhs.max_norm())


def spectral_ode_residual(s: SkewSetup, grid: GridSpec, t: float) -> ResidualReport:
    """Mode-wise check of ``d/dt F(Phi) = G(xi) F(Phi)`` with the exact time derivative.

    ``G = -|xi|**alpha (e^{i pi theta/2} chi_- + e^{-i pi theta/2} chi_+)``; the
    derivative of the closed-form data is formed analytically, so the
    residual is pure roundoff.
    """
    if t < 0:
        raise ParameterError("t must be nonnegative")
    tp, tm = s.taus(t)
    a = laplacian_symbol(grid, s.alpha)
    w = np.exp(0.5j * math.pi * s.theta)
    dp = -w * a * np.exp(-tp * a)
    dm = -np.conj(w) * a * np.exp(-tm * a)
    # chi_- dE_+ + chi_+ dE_-, written out like spectral_data
    lhs = projection_symbol(grid, -1) * dp[..., None] + projection_symbol(grid, 1) * dm[..., None]
    rhs = clifford.geometric_product(_generator(s, grid), spectral_data(s, grid, t).values, grid.n)
    res = clifford.coeff_norm(lhs - rhs)
    ref = clifford.coeff_norm(rhs)
    return ResidualReport("spectral_ode", s, grid, t, 0.0, float(res.max()),
                          float(np.sqrt(np.sum(res ** 2))), float(np.sqrt(np.sum(ref ** 2))), float(ref.max()))


def projector_power_error(s: SkewSetup, grid: GridSpec, k_max: int = 6) -> float:
    """Largest deviation of ``(e^{ia} chi_- + e^{-ia} chi_+)**k`` from ``e^{ika} chi_- + e^{-ika} chi_+``.

    Only nonzero modes are compared: at ``xi = 0`` the projections are the
    convention ``1/2`` and are not idempotent.
    """
    a = 0.5 * math.pi * s.theta
    nz = laplacian_symbol(grid, 1.0) > 0
    cm = projection_symbol(grid, -1)
    cp = projection_symbol(grid, 1)
    base = np.exp(1j * a) * cm + np.exp(-1j * a) * cp
    power = np.zeros_like(base)
    power[..., 0] = 1.0
    worst = 0.0
    for k in range(k_max + 1):
        want = np.exp(1j * a * k) * cm + np.exp(-1j * a * k) * cp
        worst = max(worst, float(np.max(np.abs(power - want)[nz])))
        power = clifford.geometric_product(power, base, grid.n)
    return worst


def delta_ic_check(s: SkewSetup, grid: GridSpec) -> Report:
    """Spectral data at ``t = 0`` must be the unit multivector on every mode."""
    data = spectral_data(s, grid, 0.0).values
    one = np.zeros(grid.blades)
    one[0] = 1.0
    dev = float(np.max(np.abs(data - one)))
    mass = float(np.max([abs(spectral_data(s, grid, tt).values[(0,) * grid.n] - one).max()
                         for tt in (0.0, 0.5, 1.0, 2.0)]))
    return Report("delta_initial_condition", s.to_dict(), grid.to_dict(),
                  {"max_deviation": dev, "zero_mode_deviation": mass}, dev == 0.0 and mass == 0.0)


def semigroup_check(s: SkewSetup, grid: GridSpec, t1: float, t2: float, tol: float = 1e-12) -> Report:
    """``F(Phi)(t1) F(Phi)(t2) = F(Phi)(t1 + t2)`` mode-wise (Clifford product).

    For ``theta != 0`` the data oscillate with phase ``t |xi|**alpha sin(pi theta/2)``,
    so rounding ``t`` alone moves them by about ``eps t |xi|**alpha``.  That floor is
    reported as ``phase_condition``; ``tol`` is only reachable on grids where it is
    smaller.
    """
    a = spectral_data(s, grid, t1).values
    b = spectral_data(s, grid, t2).values
    c = spectral_data(s, grid, t1 + t2).values
    err = float(np.max(clifford.coeff_norm(clifford.geometric_product(a, b, grid.n) - c)))
    cond = (np.finfo(float).eps * (t1 + t2) * abs(math.sin(0.5 * math.pi * s.theta))
            * float(np.max(laplacian_symbol(grid, s.alpha))))
    return Report("semigroup", s.to_dict(), grid.to_dict(),
                  {"t1": t1, "t2": t2, "max_error": err, "phase_condition": cond, "tol": tol}, err <= tol)


#: grid of the three-way kernel comparison
CROSSCHECK_ALPHAS = (2.0, 2.5, 3.0, 4.0, 5.0)
CROSSCHECK_DIMS = (1, 2, 3)
CROSSCHECK_RADII = (0.25, 1.0, 2.0, 4.0)


def crosscheck_methods(alphas=CROSSCHECK_ALPHAS, dims=CROSSCHECK_DIMS, radii=CROSSCHECK_RADII,
                       tau: complex = 1.0) -> list[dict]:
    """Three-way kernel table: Wright series, radial quadrature, Mellin-Barnes.

    Each row carries the three values and the largest pairwise relative error.
    """
    rows = []
    for alpha in alphas:
        for n in dims:
            for r in radii:
                q = KernelQuery(float(alpha), int(n), float(r), complex(tau))
                w = kernel_wright(q)
                qd = kernel_quadrature(q)
                mb = kernel_mellin_barnes(q)
                vals = (w, qd, mb)
                scale = max(abs(v) for v in vals)
                err = max(abs(x - y) for i, x in enumerate(vals) for y in vals[i + 1:]) / scale
                rows.append({"alpha": float(alpha), "n": int(n), "r": float(r),
                             "tau_re": complex(tau).real, "tau_im": complex(tau).imag,
                             "wright": w, "quadrature": qd, "mellin": mb, "max_rel_err": err})
    return rows


def crosscheck_report(rows: list[dict], tol: float = 1e-6) -> Report:
    worst = max(r["max_rel_err"] for r in rows)
    table = [{"alpha": r["alpha"], "n": r["n"], "r": r["r"],
              "wright": [_json_float(r["wright"].real), _json_float(r["wright"].imag)],
              "quadrature": [_json_float(r["quadrature"].real), _json_float(r["quadrature"].imag)],
              "mellin": [_json_float(r["mellin"].real), _json_float(r["mellin"].imag)],
              "max_rel_err": _json_float(r["max_rel_err"])} for r in rows]
    return Report("kernel_crosscheck", None, None,
                  {"rows": table, "worst_rel_err": worst, "tol": tol}, worst <= tol)


def field_difference(a: MultivectorField, b: MultivectorField) -> float:
    """Relative grid l2 distance ``||a - b|| / ||b||``."""
    return (a - b).norm() / b.norm()
