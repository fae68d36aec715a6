"""Fundamental solution of the skew space-fractional Dirac equation.

``Phi_alpha(x, t; theta)`` solves

    d/dt Phi = -(-Delta)**(alpha/2) exp(i pi theta/2 H) Phi,   Phi(x, 0) = delta(x),

where ``H`` is the Riesz-Hilbert transform.  With ``tau_pm = t exp(+-i pi theta/2)``
its Fourier transform is ``chi_- exp(-tau_+ |xi|**alpha) + chi_+ exp(-tau_- |xi|**alpha)``,
so in physical space

    Phi = 1/2 (I + H) K(., tau_+) + 1/2 (I - H) K(., tau_-)
        = Re K(., tau_+) + i H[Im K(., tau_+)],

the second line because ``K(x, conj(tau)) = conj(K(x, tau))``.

Three assemblies are provided: spectral (closed-form multipliers, the
production path), projection form on pointwise kernel values, and the
singular-integral form using the spatial principal-value Hilbert transform.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy import special as sc

from .clifford import Multivector
from .errors import ConvergenceError, ParameterError
from .kernel import KernelQuery, kernel, kernel_radial
from .spectral import (SPECTRAL, GridSpec, MultivectorField, apply_hilbert, apply_hilbert_singular,
                       fft_inverse, hilbert_symbol, laplacian_symbol)
from .special import WrightParams, wright_1psi1

#: slack for floating-point inputs sitting exactly on the window boundary
WINDOW_SLACK = 1e-12


@dataclass(frozen=True)
class SkewSetup:
    """Admissible pair ``(alpha, theta)`` with ``2m <= alpha < 2m + 2``."""

    alpha: float
    theta: float
    m: int

    @property
    def theta_max(self) -> float:
        return min(self.alpha - 2 * self.m, 2 * self.m + 2 - self.alpha)

    def taus(self, t: float) -> tuple[complex, complex]:
        """``(t exp(i pi theta/2), t exp(-i pi theta/2))``."""
        w = cmath.exp(0.5j * math.pi * self.theta)
        tp = t * w
        # exact conjugate so that K(tau_-) = conj K(tau_+) holds bitwise
        return tp, tp.conjugate()

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "theta": self.theta, "m": self.m}


def validate_params(alpha: float, theta: float, *, allow_m0: bool = False) -> SkewSetup:
    """Check ``(alpha, theta)`` against the admissible window.

    ``m`` is the unique integer with ``2m <= alpha < 2m + 2``; ``m >= 1`` is
    required (so ``alpha >= 2``) unless ``allow_m0`` is set, which opens the
    stable-law range ``0 < alpha < 2`` with ``|theta| <= min(alpha, 2 - alpha)``.
    The skewness must satisfy ``|theta| <= min(alpha - 2m, 2m + 2 - alpha)``,
    which keeps ``Re(t exp(+-i pi theta / 2)) >= 0``.
    """
    alpha = float(alpha)
    theta = float(theta)
    if not (math.isfinite(alpha) and math.isfinite(theta)):
        raise ParameterError("alpha and theta must be finite")
    if not alpha > 0:
        raise ParameterError(f"alpha must be positive, got {alpha}")
    m = int(math.floor(alpha / 2))
    if m < 1 and not allow_m0:
        raise ParameterError(
            f"alpha = {alpha} < 2: the window 2m <= alpha < 2m+2 needs m >= 1 "
            "(pass allow_m0 to admit 0 < alpha < 2)")
    setup = SkewSetup(alpha, theta, m)
    bound = setup.theta_max
    if abs(theta) > bound + WINDOW_SLACK:
        raise ParameterError(
            f"theta = {theta} outside the window |theta| <= min(alpha - 2m, 2m + 2 - alpha) "
            f"= {bound:g} for alpha = {alpha}, m = {m}")
    return setup


@dataclass(frozen=True)
class SolutionSample:
    """Pointwise split ``Phi = real_part + hilbert_part``.

    ``kernel_imag`` is ``Im K(r, tau_+)``, the density whose Hilbert transform
    (times ``i``) gives ``hilbert_part``.  That transform is nonlocal, so
    pointwise evaluation leaves ``hilbert_part`` as ``None`` unless
    ``theta = 0``, where it vanishes.
    """

    n: int
    real_part: float
    kernel_imag: float
    hilbert_part: Multivector | None

    @property
    def total(self) -> Multivector:
        if self.hilbert_part is None:
            raise ValueError("the Hilbert part is nonlocal; assemble a field instead")
        return Multivector.scalar(self.real_part, self.n) + self.hilbert_part


def solution_pointwise(s: SkewSetup, n: int, r: float, t: float, method: str = "auto", **kw) -> SolutionSample:
    """Scalar part ``Re K(r, t exp(i pi theta/2))`` and the companion ``Im K``."""
    if not t > 0:
        raise ParameterError("t must be positive")
    tp, _ = s.taus(t)
    k = kernel(KernelQuery(s.alpha, n, r, tp), method, **kw)
    hp = Multivector.zero(n) if s.theta == 0 else None
    im = 0.0 if s.theta == 0 else k.imag
    return SolutionSample(n, k.real, im, hp)


def solution_theta0_series(alpha: float, n: int, r, t: float) -> np.ndarray:
    """Symmetric case written out directly as a Wright series

    ``2**(1-n) / (alpha pi**(n/2) t**(n/alpha)) 1Psi1[(n/alpha, 2/alpha); (n/2, 1) | -r**2 / (4 t**(2/alpha))]``.
    """
    p = WrightParams.for_kernel(alpha, n)
    pref = 2.0 ** (1 - n) / (alpha * math.pi ** (n / 2) * t ** (n / alpha))
    r = np.asarray(r, dtype=float)
    out = np.array([wright_1psi1(p, -(x * x) / (4 * t ** (2 / alpha))).value.real for x in r.ravel()])
    return pref * out.reshape(r.shape)


def spectral_data(s: SkewSetup, grid: GridSpec, t: float) -> MultivectorField:
    """``chi_- exp(-tau_+ |xi|**alpha) + chi_+ exp(-tau_- |xi|**alpha)`` on the lattice.

    Written as ``(E_+ + E_-)/2 + h (E_+ - E_-)/2``; at ``t = 0`` this is exactly 1.
    """
    if t < 0:
        raise ParameterError("t must be nonnegative")
    tp, tm = s.taus(t)
    a = laplacian_symbol(grid, s.alpha)
    ep = np.exp(-tp * a)
    em = np.exp(-tm * a)
    vals = np.zeros(grid.shape + (grid.blades,), dtype=np.complex128)
    vals[..., 0] = 0.5 * (ep + em)
    vals[..., [1 << j for j in range(grid.n)]] = hilbert_symbol(grid) * (0.5 * (ep - em))[..., None]
    return MultivectorField(grid, vals, SPECTRAL)


def solution_field_spectral(s: SkewSetup, grid: GridSpec, t: float) -> MultivectorField:
    """Physical-space solution from its closed-form Fourier data."""
    return fft_inverse(spectral_data(s, grid, t))


def _kernel_pair(s: SkewSetup, grid: GridSpec, t: float, method: str, **kw):
    tp, tm = s.taus(t)
    r = grid.radii()
    kp = kernel_radial(s.alpha, grid.n, r, tp, method, **kw)
    if tm == tp:
        return kp, kp
    return kp, kernel_radial(s.alpha, grid.n, r, tm, method, **kw)


def solution_field_projection(s: SkewSetup, grid: GridSpec, t: float, method: str = "auto", **kw) -> MultivectorField:
    """Projection assembly ``1/2 (I + H) K(tau_+) + 1/2 (I - H) K(tau_-)``.

    Both kernels are evaluated pointwise on the grid; ``H`` is applied
    spectrally.  Equals ``(K_+ + K_-)/2 + H[(K_+ - K_-)/2]``.
    """
    if not t > 0:
        raise ParameterError("t must be positive")
    kp, km = _kernel_pair(s, grid, t, method, **kw)
    even = MultivectorField.from_scalar(grid, 0.5 * (kp + km))
    if s.theta == 0:
        return even
    odd = MultivectorField.from_scalar(grid, 0.5 * (kp - km))
    return even + apply_hilbert(odd)


def solution_field_singular(s: SkewSetup, grid: GridSpec, t: float, method: str = "auto",
                            quad_tol: float = 1e-3, **kw) -> MultivectorField:
    """``Re K(tau_+) + i H[Im K(tau_+)]`` with ``H`` as a principal-value integral (``n <= 2``)."""
    if not t > 0:
        raise ParameterError("t must be positive")
    tp, _ = s.taus(t)
    k = kernel_radial(s.alpha, grid.n, grid.radii(), tp, method, **kw)
    re = MultivectorField.from_scalar(grid, k.real)
    if s.theta == 0:
        return re
    return re + apply_hilbert_singular(MultivectorField.from_scalar(grid, k.imag), quad_tol) * 1j


def solution_samples(field: MultivectorField) -> tuple[np.ndarray, np.ndarray]:
    """Split a physical solution field into its scalar part and grade-1 part."""
    return field.scalar, field.vector()


# -- odd-order reference -----------------------------------------------------------

def oscillatory_oracle(alpha: float, x: float, t: float, sign: int, *, tol: float = 1e-12) -> complex:
    """``(2 pi)**-1 int exp(-t exp(sign i pi/2) |xi|**alpha) exp(i x xi) d xi`` in 1-D.

    The even integrand reduces to ``pi**-1 int_0^inf exp(-sign i t xi**alpha) cos(x xi) d xi``,
    which converges only conditionally.  Rotating the ray to
    ``xi = rho exp(-sign i pi / (2 alpha))`` turns the phase into the decaying
    weight ``exp(-t rho**alpha)``; the rotated integral is done by adaptive
    quadrature.
    """
    if sign not in (1, -1):
        raise ParameterError("sign must be +1 or -1")
    w = cmath.exp(-sign * 0.5j * math.pi / alpha)
    upper = (60.0 / t) ** (1 / alpha) + 2 * abs(x) ** (1 / (alpha - 1))

    def f(rho, part):
        v = cmath.cos(x * rho * w) * w * math.exp(-t * rho ** alpha)
        return v.real if part == 0 else v.imag

    out = []
    for part in (0, 1):
        val, err = integrate.quad(f, 0.0, upper, args=(part,), epsabs=tol, epsrel=tol, limit=400)
        if not err <= 10 * max(tol, tol * abs(val)):
            raise ConvergenceError(f"oscillatory oracle did not converge at x = {x}", estimate=err)
        out.append(val)
    return complex(out[0], out[1]) / math.pi


def airy_closed_form(x, t: float = 1.0) -> np.ndarray:
    """``Re Phi_3(x, t; +-1)`` through the Airy function:
    ``(3t)**(-1/3) / 2 [Ai(x (3t)**(-1/3)) + Ai(-x (3t)**(-1/3))]``."""
    c = (3 * t) ** (-1 / 3)
    x = np.asarray(x, dtype=float)
    return 0.5 * c * (sc.airy(c * x)[0] + sc.airy(-c * x)[0])


@dataclass(frozen=True)
class AiryReport:
    m: int
    t: float
    sign: int
    points: int
    max_abs_deviation: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_abs_deviation <= self.tol

    def to_dict(self) -> dict:
        return {"m": self.m, "alpha": 2 * self.m + 1, "t": self.t, "sign": self.sign,
                "points": self.points, "max_abs_deviation": self.max_abs_deviation,
                "tol": self.tol, "passed": self.passed}


def airy_reference_check(m: int, grid1d: GridSpec, t: float, sign: int, *, tol: float = 1e-5,
                         window: float = 5.0) -> AiryReport:
    """Compare ``Re Phi_{2m+1}(x, t; sign)`` with :func:`oscillatory_oracle` for ``|x| <= window``."""
    if grid1d.n != 1:
        raise ParameterError("the odd-order reference check is one-dimensional")
    if m < 1:
        raise ParameterError("m must be >= 1")
    s = validate_params(2 * m + 1, float(sign))
    x = grid1d.axis()
    x = x[np.abs(x) <= window]
    dev = 0.0
    for xi in x:
        got = solution_pointwise(s, 1, abs(float(xi)), t).real_part
        ref = oscillatory_oracle(s.alpha, float(xi), t, sign).real
        dev = max(dev, abs(got - ref))
    return AiryReport(m, t, sign, int(x.size), dev, tol)

