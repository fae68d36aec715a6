"""The radial Levy kernel ``K_{alpha,n}(x, tau)``.

``K`` is the inverse Fourier transform of ``exp(-tau |xi|**alpha)`` on R^n,
with the ``(2 pi)**-n`` normalisation on the inverse transform.  Because it is
radial it only depends on ``r = |x|``.  Three independent evaluation routes
are provided:

* :func:`kernel_wright` -- Wright series in ``-r**2 tau**(-2/alpha) / 4``
  (production path, ``alpha > 1``);
* :func:`kernel_mellin_barnes` -- trapezoid rule on a vertical line for the
  Mellin-Barnes integral (``alpha > 1``, ``r > 0``);
* :func:`kernel_quadrature` -- Hankel-type radial integral against
  ``J_{n/2-1}``, Gauss panels between Bessel zeros (``Re tau > 0``).

For ``alpha = 2`` and real ``tau`` all of them reduce to :func:`heat_kernel`.
"""
from __future__ import annotations

import cmath
import concurrent.futures
import math
import os
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import special as sc

from .errors import ConvergenceError, ParameterError
from .special import SERIES_ACCURACY, SERIES_RTOL, WrightParams, weber_strip, wright_1psi1

#: beyond this |lambda| the series is abandoned for another route
LAMBDA_GUARD = 700.0

METHODS = ("wright", "quadrature", "mellin", "auto")


@dataclass(frozen=True)
class KernelQuery:
    """One evaluation point ``(alpha, n, r = |x|, tau)``."""

    alpha: float
    n: int
    r: float
    tau: complex

    def __post_init__(self):
        object.__setattr__(self, "tau", complex(self.tau))
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "alpha", float(self.alpha))
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ParameterError(f"dimension n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if not self.alpha > 0:
            raise ParameterError(f"alpha must be positive, got {self.alpha}")
        if not self.r >= 0:
            raise ParameterError(f"r = |x| must be nonnegative, got {self.r}")
        if self.tau == 0:
            raise ParameterError("tau must be nonzero")
        if self.tau.real < 0:
            raise ParameterError(
                f"Re(tau) = {self.tau.real:g} < 0: the kernel is only defined for Re(tau) >= 0 "
                "(|theta| <= 1 keeps t*exp(+-i pi theta/2) in the right half-plane)")

    @property
    def lam(self) -> complex:
        """Argument ``-r**2 tau**(-2/alpha) / 4`` of the Wright series."""
        return -(self.r ** 2) * self.tau ** (-2.0 / self.alpha) / 4.0


@dataclass(frozen=True)
class ContourSpec:
    """Truncated vertical line ``Re s = c``, ``|Im s| <= half_length``, sampled at ``nodes`` points."""

    c: float
    half_length: float
    nodes: int

    def validate(self, n: int) -> None:
        lo, hi = weber_strip(n)
        if not lo < self.c < hi:
            raise ParameterError(
                f"contour abscissa c = {self.c:g} must lie strictly inside ({lo:g}, {hi:g}) for n = {n}")
        if not self.half_length > 0:
            raise ParameterError("contour half_length must be positive")
        if self.nodes < 3 or self.nodes % 2 == 0:
            raise ParameterError("contour nodes must be odd (an even number of trapezoid panels) and >= 3")

    @classmethod
    def default(cls, alpha: float, n: int, tau: complex = 1.0) -> "ContourSpec":
        """Line and step chosen for ~1e-15 truncation and discretisation error.

        The Gamma ratio decays like ``exp(-(pi/2 - |arg tau|) |Im s| / alpha)``;
        the step is limited by the distance from the line to the nearest pole.
        """
        lo, hi = weber_strip(n)
        c = 0.5 * (lo + hi)
        dist = min(c - lo, -c)  # poles at s = -n and s = 0
        h = 2 * math.pi * dist / 42.0
        rate = (math.pi / 2 - abs(cmath.phase(complex(tau)))) / alpha
        T = min(40.0 / rate, 4000.0) if rate > 1e-3 else 4000.0
        panels = 2 * int(math.ceil(T / h))
        return cls(c, T, panels + 1)


def heat_kernel(n: int, r, t: float):
    """Gaussian heat kernel ``(4 pi t)**(-n/2) exp(-r**2 / (4 t))``."""
    if not t > 0:
        raise ParameterError("heat_kernel requires t > 0")
    r = np.asarray(r, dtype=float)
    out = (4 * math.pi * t) ** (-n / 2) * np.exp(-(r ** 2) / (4 * t))
    return float(out) if out.ndim == 0 else out


def kernel_at_origin(alpha: float, n: int, tau: complex) -> complex:
    """``K(0, tau) = 2**(1-n) Gamma(n/alpha) / (alpha pi**(n/2) Gamma(n/2) tau**(n/alpha))``."""
    tau = complex(tau)
    logv = ((1 - n) * math.log(2) + sc.gammaln(n / alpha) - math.log(alpha)
            - 0.5 * n * math.log(math.pi) - sc.gammaln(n / 2))
    return math.exp(logv) * tau ** (-n / alpha)


def _prefactor(alpha: float, n: int, tau: complex) -> complex:
    return 2.0 ** (1 - n) / (alpha * math.pi ** (n / 2)) * tau ** (-n / alpha)


def kernel_wright(q: KernelQuery, *, rtol: float = SERIES_RTOL,
                  accuracy: float = SERIES_ACCURACY, full_output: bool = False):
    """Kernel from its Wright series

    ``K = 2**(1-n) / (alpha pi**(n/2) tau**(n/alpha))
    * 1Psi1[(n/alpha, 2/alpha); (n/2, 1) | -r**2 tau**(-2/alpha) / 4]``.

    Fractional powers of ``tau`` use the principal branch.  For
    ``|lambda| > LAMBDA_GUARD`` and ``Re tau > 0`` the evaluation is handed to
    the quadrature route.  On ``Re tau = 0`` neither integral converges, so
    the series is summed regardless, with extended precision absorbing the
    cancellation.

    With ``full_output`` a ``(value, info)`` pair is returned where ``info``
    holds ``method``, ``est_error``, ``terms_used``.
    """
    if q.alpha <= 1:
        raise ParameterError(
            f"Wright series route needs alpha > 1 for uniform convergence, got alpha = {q.alpha:g}")
    lam = q.lam
    if abs(lam) > LAMBDA_GUARD and q.tau.real > 0:
        return kernel_quadrature(q, full_output=full_output)
    pre = _prefactor(q.alpha, q.n, q.tau)
    res = wright_1psi1(WrightParams.for_kernel(q.alpha, q.n), lam, rtol=rtol, accuracy=accuracy)
    value = pre * res.value
    if q.tau.imag == 0:
        # real tau gives a real kernel; drop roundoff from the complex prefactor
        value = complex(value.real)
    if full_output:
        return value, {"method": "wright", "est_error": abs(pre) * res.tail_bound,
                       "terms_used": res.terms_used}
    return value


def kernel_residue_series_terms(q: KernelQuery, k_max: int, *, dps: int | None = None):
    """Individual residues of the Mellin-Barnes integrand at ``s = -n - 2k``.

    Term ``k`` is ``(-1)**k / k! * 2 Gamma((n+2k)/alpha) / Gamma(n/2+k)
    * (r**2 tau**(-2/alpha) / 4)**(n/2+k) / (alpha pi**(n/2) r**n)``.
    Their sum is the kernel.  With ``dps`` the terms are computed with mpmath
    at that many digits and returned as a list of ``mpc``; otherwise a complex
    numpy array is returned.
    """
    if q.alpha <= 1:
        raise ParameterError("residue series requires alpha > 1")
    if q.r <= 0:
        raise ParameterError("residue terms are written for r > 0; use kernel_at_origin at r = 0")
    a, n = q.alpha, q.n
    k = np.arange(k_max)
    # Gamma((n+2k)/alpha) has poles only if alpha*j = -n-2k for some j >= 0
    if np.any((n + 2 * k) / a <= 0):
        raise ParameterError("pole collision between Gamma((n+2k)/alpha) and the residue set")
    if dps is not None:
        with mpmath.workdps(dps):
            tau = mpmath.mpmathify(q.tau)
            r = mpmath.mpf(q.r)
            w = r ** 2 * tau ** (-mpmath.mpf(2) / a) / 4
            lw = mpmath.log(w)
            pre = 1 / (a * mpmath.pi ** (mpmath.mpf(n) / 2) * r ** n)
            out = []
            for j in range(k_max):
                e = mpmath.mpf(n) / 2 + j
                term = ((-1) ** j * 2 * mpmath.gamma(mpmath.mpf(n + 2 * j) / a)
                        * mpmath.rgamma(e) / mpmath.factorial(j) * mpmath.exp(e * lw) * pre)
                out.append(term)
            return out
    # log w with principal branches of tau**(-2/alpha)
    lw = 2 * math.log(q.r) - (2.0 / a) * cmath.log(q.tau) - math.log(4)
    logt = (math.log(2) + sc.loggamma((n + 2 * k) / a) - sc.gammaln(n / 2 + k)
            - sc.gammaln(k + 1) + (n / 2 + k) * lw
            - math.log(a) - (n / 2) * math.log(math.pi) - n * math.log(q.r))
    sign = np.where(k % 2, -1.0, 1.0)
    return sign * np.exp(logt)


# -- Mellin-Barnes -------------------------------------------------------------

def mellin_barnes_integrand(s, alpha: float, n: int, r: float, tau: complex):
    """``Gamma(n/2 + s/2) Gamma(-s/alpha) / Gamma(-s/2) * (r tau**(-1/alpha) / 2)**(-s)``."""
    s = np.asarray(s, dtype=np.complex128)
    log_z = math.log(r) - cmath.log(complex(tau)) / alpha - math.log(2)
    lg = sc.loggamma(n / 2 + s / 2) + sc.loggamma(-s / alpha) - sc.loggamma(-s / 2) - s * log_z
    return np.exp(lg)


def kernel_mellin_barnes(q: KernelQuery, spec: ContourSpec | None = None, *,
                         tol: float = 1e-10, full_output: bool = False):
    """Kernel from the Mellin-Barnes integral on ``Re s = c``.

    ``K = 1/(alpha pi**(n/2) r**n) * 1/(2 pi i) int Gamma(n/2+s/2) Gamma(-s/alpha)
    / Gamma(-s/2) (r tau**(-1/alpha)/2)**(-s) ds``, truncated to
    ``|Im s| <= T`` and discretised with the trapezoid rule, which converges
    geometrically for this analytic, exponentially decaying integrand.

    Raises :class:`ConvergenceError` when the estimated truncation tail
    exceeds ``tol`` relative to the result.
    """
    if q.alpha <= 1:
        raise ParameterError("Mellin-Barnes route requires alpha > 1")
    if q.r <= 0:
        raise ParameterError("Mellin-Barnes route requires r > 0 (use the Wright route at r = 0)")
    if spec is None:
        spec = ContourSpec.default(q.alpha, q.n, q.tau)
    spec.validate(q.n)
    y = np.linspace(-spec.half_length, spec.half_length, spec.nodes)
    h = y[1] - y[0]
    g = mellin_barnes_integrand(spec.c + 1j * y, q.alpha, q.n, q.r, q.tau)
    w = np.full(y.shape, h)
    w[[0, -1]] *= 0.5
    # (1/2 pi i) int ... ds with ds = i dy
    integral = np.dot(w, g) / (2 * math.pi)
    pre = 1.0 / (q.alpha * math.pi ** (q.n / 2) * q.r ** q.n)
    value = pre * integral
    rate = (math.pi / 2 - abs(cmath.phase(q.tau))) / q.alpha
    edge = max(abs(g[0]), abs(g[-1]))
    tail = edge / rate / math.pi if rate > 1e-12 else math.inf
    est = abs(pre) * tail
    if est > tol * max(abs(value), 1e-300):
        raise ConvergenceError(
            f"Mellin-Barnes truncation tail {est:.3g} exceeds tolerance (|K| = {abs(value):.3g}); "
            "increase half_length or move away from Re(tau) = 0", estimate=est)
    if full_output:
        return complex(value), {"method": "mellin", "est_error": est, "nodes": spec.nodes}
    return complex(value)


# -- radial quadrature ---------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)
_GL_NODES_LO, _GL_WEIGHTS_LO = np.polynomial.legendre.leggauss(16)


def bessel_zeros(nu: float, upto: float) -> np.ndarray:
    """Positive zeros of ``J_nu`` below ``upto`` (McMahon start, Newton polish)."""
    kmax = int(upto / math.pi + 2)
    k = np.arange(1, kmax + 1, dtype=float)
    b = (k + nu / 2 - 0.25) * math.pi
    z = b - (4 * nu * nu - 1) / (8 * b)
    for _ in range(4):
        z = z - sc.jv(nu, z) / sc.jvp(nu, z)
    z = np.sort(z[(z > 0) & (z < upto)])
    return z


def _radial_integrand(rho, q: KernelQuery):
    nu = q.n / 2 - 1
    return (np.exp(-q.tau * (rho / q.r) ** q.alpha)
            * rho ** (q.n / 2) * sc.jv(nu, rho))


def kernel_quadrature(q: KernelQuery, *, cutoff: float = 46.0, max_panels: int = 400_000,
                      tol: float = 1e-10, atol: float | None = None, full_output: bool = False):
    """Kernel from the one-dimensional radial integral

    ``K = (2 pi)**(-n/2) r**(-n) int_0^inf exp(-tau (rho/r)**alpha) rho**(n/2) J_{n/2-1}(rho) d rho``.

    Breakpoints are the zeros of ``J_{n/2-1}``; intervals are further split
    so each Gauss-Legendre panel also resolves the damping factor and its
    phase.  The integral is cut where ``Re(tau) (rho/r)**alpha`` reaches
    ``cutoff``.  The error estimate compares 24- and 16-point rules and adds
    the size of the last panel.

    The estimate must stay below ``tol * |K| + atol``.  ``atol`` defaults to
    ``1e-15 |K(0, tau)|``: far in the tail the integral is a cancellation of
    O(1) contributions and cannot be resolved below that floor.
    """
    if not q.tau.real > 0:
        raise ParameterError(
            "radial quadrature needs Re(tau) > 0 for damping; at Re(tau) = 0 "
            "use the Wright or Mellin-Barnes route")
    if q.r <= 0:
        raise ParameterError("radial quadrature is written for r > 0 (use kernel_at_origin)")
    a, n, r, tau = q.alpha, q.n, q.r, q.tau
    growth = max(n / 2 - 0.5, 0.0)
    rho_max = r * ((cutoff + growth * math.log(cutoff + 1)) / tau.real) ** (1 / a)
    rho_max = max(rho_max, 1e-300)
    edges = np.concatenate(([0.0], bessel_zeros(n / 2 - 1, rho_max), [rho_max]))
    # width limits: damping profile and the phase of exp(-i Im(tau) (rho/r)**alpha)
    scale = r * (1 / abs(tau)) ** (1 / a)
    pieces = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        x = lo
        while x < hi:
            phase_rate = abs(tau) * a * max(x, scale / 4) ** (a - 1) / r ** a
            width = min(hi - x, scale / 4, 1.5 / phase_rate, 0.5 * math.pi)
            pieces.append((x, x + width))
            x += width
            if len(pieces) > max_panels:
                raise ConvergenceError(
                    f"radial quadrature needs more than {max_panels} panels "
                    f"(Re tau = {tau.real:g} gives too little damping)")
    # (rho/r)**alpha is not smooth at 0 for fractional alpha: grade the first panel
    w0 = pieces[0][1]
    graded = [(0.0, w0 * 2.0 ** -12)] + [(w0 * 2.0 ** -j, w0 * 2.0 ** (1 - j)) for j in range(12, 0, -1)]
    pieces = np.array(graded + pieces[1:])
    mid = 0.5 * (pieces[:, 0] + pieces[:, 1])
    half = 0.5 * (pieces[:, 1] - pieces[:, 0])

    def rule(nodes, weights):
        rho = mid[:, None] + half[:, None] * nodes[None, :]
        return (_radial_integrand(rho, q) * weights[None, :]).sum(axis=1) * half

    panel_hi = rule(_GL_NODES, _GL_WEIGHTS)
    panel_lo = rule(_GL_NODES_LO, _GL_WEIGHTS_LO)
    integral = panel_hi.sum()
    pre = (2 * math.pi) ** (-n / 2) * r ** (-n)
    value = pre * integral
    est = pre * (abs(panel_hi.sum() - panel_lo.sum()) + abs(panel_hi[-1])
                 + 1e-16 * np.abs(panel_hi).sum())
    if atol is None:
        atol = 1e-15 * abs(kernel_at_origin(a, n, tau))
    if est > tol * abs(value) + atol:
        raise ConvergenceError(
            f"radial quadrature error estimate {est:.3g} exceeds tolerance (|K| = {abs(value):.3g})",
            estimate=float(est))
    if full_output:
        return complex(value), {"method": "quadrature", "est_error": float(est),
                                "panels": len(pieces)}
    return complex(value)


# -- routing -------------------------------------------------------------------

def kernel(q: KernelQuery, method: str = "auto", *, full_output: bool = False, **kw):
    """Evaluate the kernel by the named method.

    ``auto`` picks the Wright series when ``alpha > 1`` and the series argument
    is within ``LAMBDA_GUARD`` (or ``Re tau = 0``, where nothing else converges), then Mellin-Barnes when its line integral
    converges (``alpha > 1``, ``r > 0``, ``Re tau > 0``), then radial
    quadrature when ``Re tau > 0``.
    """
    if method not in METHODS:
        raise ParameterError(f"unknown method {method!r}; choose from {METHODS}")
    if method == "auto":
        if q.alpha > 1 and (abs(q.lam) <= LAMBDA_GUARD or q.r == 0 or q.tau.real == 0):
            method = "wright"
        elif q.alpha > 1 and q.r > 0 and q.tau.real > 0:
            method = "mellin"
        elif q.tau.real > 0 and q.r > 0:
            method = "quadrature"
        else:
            raise ParameterError("no evaluation route covers this query")
    if q.r == 0 and method != "wright":
        value = kernel_at_origin(q.alpha, q.n, q.tau)
        return (value, {"method": "origin", "est_error": 0.0}) if full_output else value
    fn = {"wright": kernel_wright, "quadrature": kernel_quadrature,
          "mellin": kernel_mellin_barnes}[method]
    return fn(q, full_output=full_output, **kw)


def worker_count() -> int:
    """Worker processes allowed by ``FRACDIRAC_THREADS`` (default 1, serial)."""
    raw = os.environ.get("FRACDIRAC_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ParameterError(f"FRACDIRAC_THREADS must be a positive integer, got {raw!r}") from None


def _radial_chunk(args):
    alpha, n, radii, tau, method, kw = args
    return [kernel(KernelQuery(alpha, n, float(u), tau), method, **kw) for u in radii]


def kernel_radial(alpha: float, n: int, r, tau: complex, method: str = "wright", **kw) -> np.ndarray:
    """Vectorised kernel over an array of radii (each distinct radius evaluated once).

    Distinct radii are split across ``worker_count()`` processes when that
    exceeds one; results do not depend on the split.
    """
    r = np.asarray(r, dtype=float)
    uniq, inv = np.unique(r, return_inverse=True)
    workers = min(worker_count(), max(1, uniq.size // 64))
    if workers == 1:
        vals = _radial_chunk((alpha, n, uniq, tau, method, kw))
    else:
        chunks = np.array_split(uniq, workers)
        with concurrent.futures.ProcessPoolExecutor(workers) as pool:
            parts = pool.map(_radial_chunk, [(alpha, n, c, tau, method, kw) for c in chunks])
            vals = [v for part in parts for v in part]
    return np.asarray(vals, dtype=np.complex128)[inv].reshape(r.shape)
