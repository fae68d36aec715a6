"""Complexified Clifford algebra Cl(0, n).

Basis blades ``e_J = e_{j1} e_{j2} ... e_{jr}`` (``j1 < ... < jr``) are encoded
as bit masks: bit ``j-1`` of the mask is set when ``e_j`` appears.  The
generators satisfy ``e_j e_k + e_k e_j = -2 delta_jk``.

Multivectors store a dense array of ``2**n`` complex coefficients indexed by
mask.  The same layout is used for fields, where the blade axis is the last
array axis.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

MAX_DIM = 12


def _check_dim(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_DIM:
        raise ParameterError(f"Clifford dimension must be an integer in [1, {MAX_DIM}], got {n!r}")


def grade(mask: int) -> int:
    """Number of generators in the blade ``mask``."""
    return int(mask).bit_count()


def reorder_sign(a: int, b: int) -> int:
    """Sign picked up by sorting the generator list of ``e_a e_b`` into canonical order."""
    a >>= 1
    swaps = 0
    while a:
        swaps += (a & b).bit_count()
        a >>= 1
    return -1 if swaps & 1 else 1


def blade_product(a: int, b: int, n: int) -> tuple[int, int]:
    """Geometric product of two basis blades.

    Returns ``(sign, mask)`` with ``e_a e_b = sign * e_mask``.  Each generator
    shared by ``a`` and ``b`` contributes a factor ``e_j**2 = -1``.
    """
    _check_dim(n)
    top = 1 << n
    for m in (a, b):
        if not 0 <= m < top:
            raise ParameterError(f"blade mask {m} out of range for n={n}")
    sign = reorder_sign(a, b)
    if (a & b).bit_count() & 1:
        sign = -sign
    return sign, a ^ b


@functools.lru_cache(maxsize=None)
def sign_table(n: int) -> np.ndarray:
    """``table[a, b]`` is the sign of ``e_a e_b``; the result blade is ``a ^ b``."""
    _check_dim(n)
    idx = np.arange(1 << n, dtype=np.int64)
    a = idx[:, None]
    b = idx[None, :]
    swaps = np.zeros((1 << n, 1 << n), dtype=np.int64)
    for i in range(n):
        swaps += ((b >> i) & 1) * np.bitwise_count(a >> (i + 1))
    swaps += np.bitwise_count(a & b)
    table = np.where(swaps & 1, -1, 1).astype(np.int8)
    table.setflags(write=False)
    return table


@functools.lru_cache(maxsize=None)
def grades(n: int) -> np.ndarray:
    g = np.bitwise_count(np.arange(1 << n, dtype=np.int64)).astype(np.int64)
    g.setflags(write=False)
    return g


@functools.lru_cache(maxsize=None)
def dagger_signs(n: int) -> np.ndarray:
    """Per-blade sign of the dagger: ``(-1)**(r(r+1)/2)`` for grade ``r``."""
    r = grades(n)
    s = np.where((r * (r + 1) // 2) & 1, -1, 1).astype(np.int8)
    s.setflags(write=False)
    return s


def vector_mask(j: int) -> int:
    """Mask of the generator ``e_j`` (1-based)."""
    return 1 << (j - 1)


def geometric_product(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """Geometric product of coefficient arrays along the last axis.

    ``a`` and ``b`` broadcast against each other in their leading axes.
    """
    table = sign_table(n)
    size = 1 << n
    a = np.asarray(a)
    b = np.asarray(b)
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
    out = np.zeros(shape + (size,), dtype=np.result_type(a, b, np.complex128))
    idx = np.arange(size)
    for i in range(size):
        ai = a[..., i]
        if not np.any(ai):
            continue
        # fixed left blade i: b-index -> result blade i ^ idx is a permutation
        out[..., i ^ idx] += (ai[..., None] * table[i]) * b
    return out


def left_vector_product(v: np.ndarray, f: np.ndarray, n: int) -> np.ndarray:
    """Left product ``v f`` where ``v`` has grade-1 support only.

    ``v`` has shape ``(..., n)`` holding the coefficients of ``e_1 .. e_n``;
    ``f`` has shape ``(..., 2**n)``.  Cost is ``n`` passes instead of ``2**n``.
    """
    table = sign_table(n)
    idx = np.arange(1 << n)
    out = np.zeros(np.broadcast_shapes(v.shape[:-1], f.shape[:-1]) + (1 << n,),
                   dtype=np.result_type(v, f, np.complex128))
    for j in range(n):
        m = 1 << j
        out[..., m ^ idx] += (v[..., j, None] * table[m]) * f
    return out


@dataclass(frozen=True, eq=False)
class Multivector:
    """Element of the complexified Clifford algebra Cl(0, n)."""

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        _check_dim(self.n)
        c = np.array(self.coeffs, dtype=np.complex128)
        if c.shape != (1 << self.n,):
            raise ParameterError(f"expected {1 << self.n} coefficients for n={self.n}, got shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, n: int) -> "Multivector":
        _check_dim(n)
        return cls(n, np.zeros(1 << n))

    @classmethod
    def scalar(cls, value: complex, n: int) -> "Multivector":
        _check_dim(n)
        c = np.zeros(1 << n, dtype=np.complex128)
        c[0] = value
        return cls(n, c)

    @classmethod
    def blade(cls, mask: int, n: int, value: complex = 1.0) -> "Multivector":
        _check_dim(n)
        if not 0 <= mask < 1 << n:
            raise ParameterError(f"blade mask {mask} out of range for n={n}")
        c = np.zeros(1 << n, dtype=np.complex128)
        c[mask] = value
        return cls(n, c)

    @classmethod
    def vector(cls, components) -> "Multivector":
        """Grade-1 multivector ``sum_j x_j e_j``."""
        x = np.asarray(components, dtype=np.complex128).ravel()
        n = x.size
        _check_dim(n)
        c = np.zeros(1 << n, dtype=np.complex128)
        c[[1 << j for j in range(n)]] = x
        return cls(n, c)

    @property
    def scalar_part(self) -> complex:
        return complex(self.coeffs[0])

    def vector_part(self) -> np.ndarray:
        return self.coeffs[[1 << j for j in range(self.n)]].copy()

    def grade_part(self, r: int) -> "Multivector":
        return Multivector(self.n, np.where(grades(self.n) == r, self.coeffs, 0))

    def is_close(self, other: "Multivector", atol: float = 1e-12) -> bool:
        return self.n == other.n and bool(np.allclose(self.coeffs, other.coeffs, rtol=0, atol=atol))

    def _coerce(self, other) -> "Multivector":
        if isinstance(other, Multivector):
            if other.n != self.n:
                raise ParameterError(f"dimension mismatch: {self.n} vs {other.n}")
            return other
        if np.isscalar(other):
            return Multivector.scalar(other, self.n)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Multivector(self.n, self.coeffs + o.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Multivector(self.n, self.coeffs - o.coeffs)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Multivector(self.n, o.coeffs - self.coeffs)

    def __neg__(self):
        return Multivector(self.n, -self.coeffs)

    def __mul__(self, other):
        if np.isscalar(other):
            return Multivector(self.n, self.coeffs * other)
        if isinstance(other, Multivector):
            return mv_mul(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return Multivector(self.n, other * self.coeffs)
        return NotImplemented

    def __repr__(self):
        terms = []
        for mask in np.flatnonzero(self.coeffs):
            name = "".join(f"e{j + 1}" for j in range(self.n) if mask >> j & 1) or "1"
            terms.append(f"({self.coeffs[mask]:.6g}){name}")
        return f"Multivector(n={self.n}: {' + '.join(terms) or '0'})"


def mv_mul(a: Multivector, b: Multivector) -> Multivector:
    """Geometric product ``a b``."""
    if a.n != b.n:
        raise ParameterError(f"dimension mismatch: {a.n} vs {b.n}")
    return Multivector(a.n, geometric_product(a.coeffs, b.coeffs, a.n))


def dagger_coeffs(c: np.ndarray, n: int) -> np.ndarray:
    return np.conj(c) * dagger_signs(n)


def mv_dagger(a: Multivector) -> Multivector:
    """Dagger conjugation: reversal, ``e_j -> -e_j`` and complex conjugation."""
    return Multivector(a.n, dagger_coeffs(a.coeffs, a.n))


def mv_norm(a: Multivector) -> float:
    """Norm from the scalar part of ``a^dagger a``.

    With the orthonormal blade basis this is ``sqrt(sum_J |a_J|**2)``.
    """
    s = mv_mul(mv_dagger(a), a).coeffs[0].real
    return float(np.sqrt(max(s, 0.0)))


def coeff_norm(c: np.ndarray) -> np.ndarray:
    """Vectorised :func:`mv_norm` over the last axis of a coefficient array."""
    return np.sqrt(np.sum(np.abs(c) ** 2, axis=-1))
