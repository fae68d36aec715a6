"""Special functions: complex log-Gamma, Bessel J and the Wright series 1Psi1.

``log_gamma`` and ``bessel_j`` are thin, validated wrappers over
:mod:`scipy.special`.  The Wright series is summed here, in log space, with an
extended-precision fallback when the alternating terms cancel badly.
"""
from __future__ import annotations

import functools
import math
from fractions import Fraction
from dataclasses import dataclass, field

import mpmath
import numpy as np
from scipy import special as sc

from .errors import ConvergenceError, ParameterError, PoleError

EPS = np.finfo(float).eps

#: default relative stopping tolerance of the series
SERIES_RTOL = 1e-15
#: default cap on the number of series terms
SERIES_MAX_TERMS = 10_000
#: relative accuracy the cancellation guard aims for
SERIES_ACCURACY = 1e-13


def _is_nonpositive_integer(z) -> bool:
    z = complex(z)
    return z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real)


def log_gamma(z):
    """Principal branch of ``log Gamma(z)`` for complex ``z``.

    Raises :class:`PoleError` at the nonpositive integers.
    """
    za = np.asarray(z, dtype=np.complex128)
    bad = (za.imag == 0) & (za.real <= 0) & (za.real == np.floor(za.real))
    if np.any(bad):
        raise PoleError(f"log_gamma has a pole at {za[bad].ravel()[0].real:g}")
    out = sc.loggamma(za)
    return complex(out) if out.ndim == 0 else out


def gamma(z):
    """``Gamma(z)`` via :func:`log_gamma` (complex result)."""
    return np.exp(log_gamma(z))


def bessel_j(nu, x):
    """Bessel function of the first kind ``J_nu(x)`` for ``nu >= -1/2``, ``x >= 0``."""
    nu_a = np.asarray(nu, dtype=float)
    x_a = np.asarray(x, dtype=float)
    if np.any(nu_a < -0.5):
        raise ParameterError("bessel_j requires nu >= -1/2")
    if np.any(x_a < 0):
        raise ParameterError("bessel_j requires x >= 0")
    out = sc.jv(nu_a, x_a)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class WrightParams:
    """Parameters ``(a1, alpha1), (b1, beta1)`` of the series

    ``sum_k Gamma(a1 + alpha1 k) / Gamma(b1 + beta1 k) * lam**k / k!``.
    """

    a1: complex
    alpha1: float
    b1: complex
    beta1: float
    #: optional ``(alpha, n)`` from which the kernel parameters are rebuilt
    #: exactly in extended precision; rounding ``n/alpha`` to a double can
    #: wreck the cancellation the series relies on
    kernel_source: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.alpha1 == 0 or self.beta1 == 0:
            raise ParameterError("alpha1 and beta1 must be nonzero")

    @property
    def kappa(self) -> float:
        """``1 + beta1 - alpha1``; the series is entire when this is positive."""
        return 1.0 + self.beta1 - self.alpha1

    @property
    def radius(self) -> float:
        """Radius of convergence in ``lam``."""
        k = self.kappa
        if k > 0:
            return math.inf
        if k < 0:
            return 0.0
        return abs(self.alpha1) ** (-self.alpha1) * abs(self.beta1) ** self.beta1

    @classmethod
    def for_kernel(cls, alpha: float, n: int) -> "WrightParams":
        """Parameters of the Levy kernel series: ``(n/alpha, 2/alpha); (n/2, 1)``."""
        return cls(n / alpha, 2.0 / alpha, n / 2.0, 1.0, kernel_source=(float(alpha), int(n)))


@dataclass(frozen=True)
class SeriesResult:
    value: complex
    terms_used: int
    tail_bound: float
    precision: int = 53  # working precision in bits


# -- log-coefficient tables ---------------------------------------------------

def _key(p: WrightParams):
    return (complex(p.a1), float(p.alpha1), complex(p.b1), float(p.beta1))


def _mp_key(p: WrightParams):
    return ("kernel",) + p.kernel_source if p.kernel_source is not None else _key(p)


@functools.lru_cache(maxsize=64)
def _log_coeffs(key, count: int) -> np.ndarray:
    """``log[Gamma(a1 + alpha1 k) / (Gamma(b1 + beta1 k) k!)]`` for ``k < count``.

    Terms with a denominator pole are ``-inf`` (the coefficient vanishes).
    """
    a1, al1, b1, be1 = key
    k = np.arange(count, dtype=float)
    num = a1 + al1 * k
    den = b1 + be1 * k
    num_pole = (num.imag == 0) & (num.real <= 0) & (num.real == np.floor(num.real))
    if np.any(num_pole):
        kp = int(np.flatnonzero(num_pole)[0])
        raise PoleError(f"numerator Gamma pole at term k={kp} (argument {num[kp].real:g})", index=kp)
    den_pole = (den.imag == 0) & (den.real <= 0) & (den.real == np.floor(den.real))
    out = sc.loggamma(num) - sc.gammaln(k + 1)
    with np.errstate(invalid="ignore"):
        out = out - np.where(den_pole, 0, sc.loggamma(np.where(den_pole, 1, den)))
    out[den_pole] = -np.inf
    out.setflags(write=False)
    return out


def _pow2_at_least(m: int, floor: int = 64) -> int:
    size = floor
    while size < m:
        size *= 2
    return size


def _coeff_table(p: WrightParams, count: int) -> np.ndarray:
    # table lengths are powers of two so the cache is shared across calls
    return _log_coeffs(_key(p), _pow2_at_least(count))[:count]


#: largest numerator/denominator of a rational step handled by recurrence
_RECURRENCE_LIMIT = 64


def _exact(v):
    """Exact rational for real floats, else an mpmath complex."""
    v = complex(v)
    if v.imag == 0:
        return Fraction(v.real)
    return mpmath.mpc(v)


def _to_mp(v):
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpmathify(v)


def _gamma_progression(a, step, count: int, reciprocal: bool) -> list:
    """``Gamma(a + step k)`` (or its reciprocal) for ``k < count`` at the working precision.

    With ``step = p/q`` a small positive rational, only the first ``q`` values
    are evaluated directly; the rest follow from ``Gamma(z + p) = Gamma(z) (z)(z+1)..(z+p-1)``.
    """
    fn = mpmath.rgamma if reciprocal else mpmath.gamma
    a_mp = _to_mp(a)
    z = [a_mp + _to_mp(step) * k for k in range(count)]
    frac = step if isinstance(step, Fraction) else None
    poles = isinstance(a, Fraction) and any(
        (a + step * k) <= 0 and (a + step * k).denominator == 1 for k in range(count))
    if (frac is None or frac <= 0 or frac.numerator > _RECURRENCE_LIMIT
            or frac.denominator > _RECURRENCE_LIMIT or poles):
        return [fn(v) for v in z]
    p, q = frac.numerator, frac.denominator
    out = [fn(v) for v in z[:q]]
    for k in range(q, count):
        prod = mpmath.fprod(z[k - q] + j for j in range(p))
        out.append(out[k - q] / prod if reciprocal else out[k - q] * prod)
    return out


@functools.lru_cache(maxsize=32)
def _mp_coeffs(key, count: int, dps: int) -> tuple:
    if key[0] == "kernel":
        alpha, n = Fraction(key[1]), Fraction(key[2])
        a1, al1, b1, be1 = n / alpha, 2 / alpha, n / 2, Fraction(1)
    else:
        a1, al1, b1, be1 = (_exact(v) for v in key)
    if isinstance(a1, Fraction):
        for k in range(count):
            v = a1 + al1 * k
            if v <= 0 and v.denominator == 1:
                raise PoleError(f"numerator Gamma pole at term k={k}", index=k)
    with mpmath.workdps(dps + 10):
        num = _gamma_progression(a1, al1, count, reciprocal=False)
        den = _gamma_progression(b1, be1, count, reciprocal=True)
        fact = mpmath.mpf(1)
        out = []
        for k in range(count):
            if k:
                fact *= k
            out.append(num[k] * den[k] / fact)
    with mpmath.workdps(dps):
        return tuple(+c for c in out)


# -- summation -----------------------------------------------------------------

def _check_regime(p: WrightParams, lam: complex) -> None:
    if lam == 0:
        return
    r = p.radius
    if r == 0.0:
        raise ConvergenceError(
            f"series diverges for every lam != 0 (1 + beta1 - alpha1 = {p.kappa:g} < 0)")
    if abs(lam) >= r:
        raise ConvergenceError(f"|lam| = {abs(lam):g} outside the radius of convergence {r:g}")


def _log_terms(p: WrightParams, lam: complex, count: int) -> np.ndarray:
    """Complex logarithms of the first ``count`` series terms."""
    return _coeff_table(p, count) + np.arange(count) * np.log(complex(lam))


def _cutoff(logmag: np.ndarray, log_floor: float):
    """Number of terms to keep, or ``None`` if the table is too short.

    The cut is placed after the first pair of consecutive terms that lie past
    the peak, decrease, and are both below ``exp(log_floor)``.
    """
    peak = int(np.argmax(logmag))
    below = logmag < log_floor
    ok = below[1:] & below[:-1] & (logmag[1:] < logmag[:-1])
    ok[:peak] = False
    hits = np.flatnonzero(ok)
    if hits.size == 0:
        return None
    return int(hits[0]) + 2


def _geometric_tail(logmag: np.ndarray, used: int) -> float:
    """Bound on the omitted tail from the ratio of the last two kept terms."""
    q = math.exp(logmag[used - 1] - logmag[used - 2])
    if q >= 1:
        return math.inf
    return math.exp(logmag[used - 1]) * q / (1 - q)


def _logsumexp(x: np.ndarray) -> float:
    m = float(np.max(x))
    return m + math.log(float(np.sum(np.exp(x - m))))


def _sum_double(p: WrightParams, lam: complex, rtol: float, max_terms: int):
    """Log-space summation in double precision.

    Returns ``(value, terms_used, truncation_bound, log_abs_sum, logmag)``.
    """
    count = 64
    while True:
        count = min(count, max_terms)
        logt = _log_terms(p, lam, count)
        logmag = logt.real
        shift = float(np.max(logmag))
        terms = np.exp(logt - shift)  # -inf entries become exact zeros
        total = abs(terms.sum())
        floor = math.log(rtol * total) if total > 0 else math.log(rtol) - 700
        used = _cutoff(logmag - shift, floor)
        if used is not None:
            value = complex(terms[:used].sum()) * math.exp(shift)
            return (value, used, _geometric_tail(logmag, used),
                    _logsumexp(logmag[:used]), logmag)
        if count >= max_terms:
            raise ConvergenceError(
                f"Wright series not converged after {max_terms} terms (|lam| = {abs(lam):g})",
                estimate=math.exp(min(logmag[-1], 709)))
        count *= 2


def _sum_mp(p: WrightParams, lam: complex, used: int, dps: int):
    coeffs = _mp_coeffs(_mp_key(p), _pow2_at_least(used), dps)
    with mpmath.workdps(dps):
        return mpmath.polyval(list(coeffs[used - 1::-1]), mpmath.mpmathify(lam))


def wright_1psi1(p: WrightParams, lam: complex, *, rtol: float = SERIES_RTOL,
                 max_terms: int = SERIES_MAX_TERMS,
                 accuracy: float = SERIES_ACCURACY) -> SeriesResult:
    """Evaluate the Wright series ``1Psi1[(a1, alpha1); (b1, beta1) | lam]``.

    Terms are formed in log space, so Gamma ratios far beyond the double range
    are harmless.  Summation stops once two consecutive terms past the peak are
    below ``rtol`` relative to the sum.  When the terms cancel so badly that
    double rounding would exceed ``accuracy``, the sum is redone in extended
    precision (Horner evaluation with mpmath).

    ``tail_bound`` combines a geometric bound on the truncated tail with an
    estimate of the accumulated rounding error.
    """
    lam = complex(lam)
    _check_regime(p, lam)
    if lam == 0:
        if _is_nonpositive_integer(p.a1):
            raise PoleError("numerator Gamma pole at term k=0", index=0)
        v = np.exp(_coeff_table(p, 1)[0])
        return SeriesResult(complex(v), 1, 0.0)

    value, used, trunc, log_abs, logmag = _sum_double(p, lam, rtol, max_terms)
    rounding = 4 * EPS * math.exp(min(log_abs, 709))
    if rounding <= accuracy * abs(value):
        return SeriesResult(value, used, float(trunc + rounding))

    # log_abs - log|value| is the number of digits lost to cancellation; a
    # garbage double sum underestimates it, hence the doubling below
    lost = (log_abs - math.log(max(abs(value), 1e-300))) / math.log(10)
    lost = min(lost, 16.0)
    dps = _pow2_at_least(int(math.ceil(-math.log10(accuracy) + lost)) + 8, 32)
    raises = 0
    while raises < 10:
        s = _sum_mp(p, lam, used, dps)
        log_s = float(mpmath.log(abs(s))) if s != 0 else -math.inf
        log_err = log_abs + math.log(10) * (2 - dps)
        if np.isfinite(log_s) and log_err <= math.log(accuracy) + log_s:
            # rounding is under control; make sure enough terms were kept
            floor = math.log(rtol) + log_s
            while True:
                need = _cutoff(logmag, floor)
                if need is not None or logmag.size >= max_terms:
                    break
                logmag = _log_terms(p, lam, min(2 * logmag.size, max_terms)).real
            if need is None:
                raise ConvergenceError(
                    f"Wright series not converged after {max_terms} terms (|lam| = {abs(lam):g})")
            if need > used:
                used = need
                log_abs = _logsumexp(logmag[:used])
                continue
            tail = _geometric_tail(logmag, used) + math.exp(log_err)
            return SeriesResult(complex(s), used, float(tail), precision=int(dps * 3.33))
        lost = (log_abs - log_s) / math.log(10) if np.isfinite(log_s) else dps
        raises += 1
        if lost >= dps - 4:
            # nothing survived: the sum is pure rounding noise
            dps *= 4
        else:
            dps = _pow2_at_least(max(2 * dps, int(math.ceil(-math.log10(accuracy) + lost)) + 8), 32)
    raise ConvergenceError("Wright series: cancellation guard did not settle")


# -- Mellin transform reference formulas (test fixtures) -------------------------

def mellin_f(s: complex, alpha: float) -> complex:
    """Mellin transform of ``exp(-rho**-alpha)``: ``Gamma(-s/alpha)/alpha`` for ``Re s < 0``."""
    s = complex(s)
    if alpha <= 1:
        raise ParameterError("mellin_f requires alpha > 1")
    if s.real >= 0:
        raise ParameterError("mellin_f requires Re(s) < 0")
    return complex(gamma(-s / alpha)) / alpha


def weber_strip(n: int) -> tuple[float, float]:
    """Open interval of ``Re s`` on which the Weber integral formula holds."""
    return (-float(n), (1.0 - n) / 2.0)


def mellin_g(s: complex, n: int) -> complex:
    """Mellin transform of ``rho**(n/2+1) J_{n/2-1}(rho)``.

    ``2**(n/2+s) Gamma(n/2 + s/2) / Gamma(-s/2)`` on ``-n < Re s < (1-n)/2``.
    """
    s = complex(s)
    lo, hi = weber_strip(n)
    if not lo < s.real < hi:
        raise ParameterError(f"mellin_g: Re(s) = {s.real:g} outside the strip ({lo:g}, {hi:g})")
    return complex(2 ** (n / 2 + s) * np.exp(log_gamma(n / 2 + s / 2)) * sc.rgamma(-s / 2))
