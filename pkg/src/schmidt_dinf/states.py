"""State value types for C^d (x) h with h truncated to n dimensions.

All coordinates are taken in the computational bases: row index ``alpha``
runs over C^d, column index ``k`` over the first ``n`` basis vectors of h.
Instances are immutable; the backing arrays are flagged read-only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, NonFiniteEntry, NotNormalized, ZeroVector

NORM_TOL = 1e-10
ASSEMBLED_NORM_TOL = 1e-6
ZERO_NORM = 1e-14


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


def _check_finite(a: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(a)):
        raise NonFiniteEntry(f"{what} contains NaN or Inf")


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized vector of C^d (x) h_n given by its d x n coefficient matrix."""

    coeffs: np.ndarray

    @property
    def d(self) -> int:
        return self.coeffs.shape[0]

    @property
    def n(self) -> int:
        return self.coeffs.shape[1]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def vector(self) -> np.ndarray:
        """Flattened vector in the e_alpha (x) f_k ordering (alpha major)."""
        return self.coeffs.reshape(-1).copy()

    def __eq__(self, other):
        if not isinstance(other, PureState):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and np.array_equal(self.coeffs, other.coeffs)


def make_pure_state(coeffs, normalize: bool = False) -> PureState:
    """Validate a d x n coefficient matrix and wrap it as a :class:`PureState`.

    Parameters
    ----------
    coeffs : array_like
        ``coeffs[alpha, k]`` is the amplitude on ``e_alpha (x) f_k``.
    normalize : bool
        Divide by the vector norm. Otherwise the norm must already be 1
        within ``1e-10``.
    """
    c = np.array(coeffs, dtype=np.complex128)
    if c.ndim != 2 or c.size == 0:
        raise DimensionError(f"coefficients must be a nonempty d x n matrix, got shape {c.shape}")
    _check_finite(c, "coefficient matrix")
    norm = np.linalg.norm(c)
    if normalize:
        if norm < ZERO_NORM:
            raise ZeroVector(f"state norm {norm:.3e} is below {ZERO_NORM}")
        c = c / norm
    elif abs(norm - 1.0) > NORM_TOL:
        raise NotNormalized(f"state norm is {norm!r}, expected 1")
    return PureState(_frozen(c))


@dataclass(frozen=True, eq=False)
class ProductTerm:
    c: complex
    left: np.ndarray
    right: np.ndarray


@dataclass(frozen=True, eq=False)
class ProductSumState:
    """Finite sum of product vectors ``sum_i c_i left_i (x) right_i``."""

    d: int
    n: int
    terms: tuple[ProductTerm, ...]

    def __eq__(self, other):
        if not isinstance(other, ProductSumState):
            return NotImplemented
        if (self.d, self.n, len(self.terms)) != (other.d, other.n, len(other.terms)):
            return False
        return all(
            a.c == b.c and np.array_equal(a.left, b.left) and np.array_equal(a.right, b.right)
            for a, b in zip(self.terms, other.terms)
        )


def _assemble_raw(d: int, n: int, terms: Sequence[ProductTerm]) -> np.ndarray:
    out = np.zeros((d, n), dtype=np.complex128)
    for t in terms:
        out += t.c * np.outer(t.left, t.right)
    return out


def make_product_sum(terms, d: int | None = None, n: int | None = None) -> ProductSumState:
    """Build a :class:`ProductSumState` from ``(c, left, right)`` triples.

    Factor vectors must be unit vectors and the assembled sum must have norm 1
    within ``1e-6``.
    """
    built = []
    for item in terms:
        c, left, right = item if not isinstance(item, ProductTerm) else (item.c, item.left, item.right)
        c = complex(c)
        left = np.array(left, dtype=np.complex128).reshape(-1)
        right = np.array(right, dtype=np.complex128).reshape(-1)
        if not np.isfinite(c):
            raise NonFiniteEntry("term coefficient is not finite")
        _check_finite(left, "left factor")
        _check_finite(right, "right factor")
        for vec, side in ((left, "left"), (right, "right")):
            if abs(np.linalg.norm(vec) - 1.0) > NORM_TOL:
                raise NotNormalized(f"{side} factor has norm {np.linalg.norm(vec)!r}")
        left.setflags(write=False)
        right.setflags(write=False)
        built.append(ProductTerm(c, left, right))
    if not built:
        raise DimensionError("a product sum needs at least one term")
    d = built[0].left.size if d is None else d
    n = built[0].right.size if n is None else n
    if any(t.left.size != d or t.right.size != n for t in built):
        raise DimensionError(f"all left factors must have length {d} and right factors length {n}")
    norm = np.linalg.norm(_assemble_raw(d, n, built))
    if abs(norm - 1.0) > ASSEMBLED_NORM_TOL:
        raise NotNormalized(f"assembled product sum has norm {norm!r}")
    return ProductSumState(d, n, tuple(built))


def assemble(ps: ProductSumState) -> PureState:
    """Dense coefficient matrix of a product sum, renormalized to unit norm."""
    raw = _assemble_raw(ps.d, ps.n, ps.terms)
    norm = np.linalg.norm(raw)
    if abs(norm - 1.0) > ASSEMBLED_NORM_TOL:
        raise NotNormalized(f"assembled product sum has norm {norm!r}")
    return PureState(_frozen(raw / norm))


@dataclass(frozen=True, eq=False)
class MixedPureState:
    """Element of HS(C^d) (x) h_n stored as ``n`` slices of shape d x d.

    ``slices[k]`` is the matrix-valued coordinate of Q along ``f_k``. The
    normalization conditions of a mixed-pure state are reported through
    :attr:`trace_one` and :attr:`h_purity`; they are not enforced.
    """

    slices: np.ndarray

    @property
    def d(self) -> int:
        return self.slices.shape[1]

    @property
    def n(self) -> int:
        return self.slices.shape[0]

    @property
    def hs_norm(self) -> float:
        return float(np.linalg.norm(self.slices))

    def trace_vector(self) -> np.ndarray:
        """The h-vector obtained by tracing out C^d slice by slice."""
        return np.trace(self.slices, axis1=1, axis2=2)

    @property
    def trace_one(self) -> bool:
        return bool(abs(np.linalg.norm(self.trace_vector()) - 1.0) <= NORM_TOL)

    @property
    def h_purity(self) -> float:
        """Purity of the normalized h-side Gram operator; 1 for Q = q (x) psi."""
        flat = self.slices.reshape(self.n, -1)
        gram = flat.conj() @ flat.T
        tr = np.trace(gram).real
        if tr <= 0:
            return 0.0
        g = gram / tr
        return float(np.real(np.trace(g @ g)))

    @property
    def is_hermitian(self) -> bool:
        return bool(np.allclose(self.slices, self.slices.conj().swapaxes(1, 2), atol=1e-12, rtol=0))

    def __eq__(self, other):
        if not isinstance(other, MixedPureState):
            return NotImplemented
        return self.slices.shape == other.slices.shape and np.array_equal(self.slices, other.slices)


def make_mixed_pure(slices) -> MixedPureState:
    """Validate an ``(n, d, d)`` array of slices."""
    s = np.array(slices, dtype=np.complex128)
    if s.ndim != 3 or s.shape[0] == 0 or s.shape[1] == 0 or s.shape[1] != s.shape[2]:
        raise DimensionError(f"slices must have shape (n, d, d), got {s.shape}")
    _check_finite(s, "slices")
    return MixedPureState(_frozen(s))


def factor_state(q, psi) -> MixedPureState:
    """The factor element ``q (x) psi``."""
    q = np.asarray(q, dtype=np.complex128)
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise DimensionError("q must be a square matrix")
    return make_mixed_pure(psi[:, None, None] * q[None, :, :])
