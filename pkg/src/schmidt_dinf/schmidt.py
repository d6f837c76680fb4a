"""Finite Schmidt decomposition of pure states of C^d (x) h.

Conventions used throughout the package:

* the Schmidt coefficients ``tau`` are the singular values of the d x n
  coefficient matrix, so the eigenvalues of the Delta matrix and of the
  reduced density matrix are ``tau**2`` and both have unit trace;
* a state is the sum ``sum_a tau[a] * left[:, a] (x) right[:, a]``, i.e. the
  coefficient matrix equals ``left @ diag(tau) @ right.T`` (no conjugation on
  the h factor);
* entropies are in nats.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space

from .errors import DimensionError, InvalidTolerance, NotNormalized, NumericalFailure
from .states import ASSEMBLED_NORM_TOL, ProductSumState, PureState, _frozen

DEFAULT_RANK_TOL = 1e-10
GS_DROP_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SchmidtData:
    """Schmidt coefficients and bases of a pure state.

    ``tau`` always has length ``d`` (zero padded when ``n < d``). ``left`` is a
    d x d unitary; ``right`` is n x min(d, n) with orthonormal columns.
    """

    rank: int
    tau: np.ndarray
    left: np.ndarray
    right: np.ndarray

    @property
    def d(self) -> int:
        return self.left.shape[0]

    @property
    def n(self) -> int:
        return self.right.shape[0]

    @property
    def probabilities(self) -> np.ndarray:
        return self.tau**2

    def reconstruct(self) -> np.ndarray:
        m = self.right.shape[1]
        return (self.left[:, :m] * self.tau[:m]) @ self.right.T


def _check_rank_tol(rank_tol: float) -> None:
    if not 0.0 < rank_tol < 1.0:
        raise InvalidTolerance(f"rank_tol must lie in (0, 1), got {rank_tol!r}")


def _complete_columns(q: np.ndarray, cols: int) -> np.ndarray:
    """Extend orthonormal columns ``q`` (dim x m) to ``cols`` orthonormal columns."""
    dim, m = q.shape
    if m >= cols:
        return q[:, :cols]
    if m == 0:
        extra = np.eye(dim, dtype=np.complex128)
    else:
        extra = null_space(q.conj().T)
    return np.hstack([q, extra[:, : cols - m]])


def _svd(matrix: np.ndarray):
    try:
        u, s, vh = np.linalg.svd(matrix, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    if not (np.all(np.isfinite(s)) and np.all(np.isfinite(u)) and np.all(np.isfinite(vh))):
        raise NumericalFailure("SVD returned non-finite values")
    return u, s, vh


def _rank(tau: np.ndarray, rank_tol: float) -> int:
    if tau.size == 0 or tau[0] == 0.0:
        return 0
    return int(np.count_nonzero(tau > rank_tol * tau[0]))


def _package(u: np.ndarray, s: np.ndarray, right: np.ndarray, d: int, n: int, rank_tol: float) -> SchmidtData:
    m = min(d, n)
    tau = np.zeros(d)
    k = min(s.size, m)
    tau[:k] = s[:k]
    left = _complete_columns(u[:, :k], d)
    right = _complete_columns(right[:, :k], m)
    tau.setflags(write=False)
    return SchmidtData(_rank(tau, rank_tol), tau, _frozen(left), _frozen(right))


def delta_matrix(psi: PureState) -> np.ndarray:
    """The d x d matrix ``J(psi)^+ J(psi)``, entries ``sum_k psi[a,k] conj(psi[b,k])``."""
    c = psi.coeffs
    m = c @ c.conj().T
    return 0.5 * (m + m.conj().T)


def schmidt_decompose(psi: PureState, rank_tol: float = DEFAULT_RANK_TOL) -> SchmidtData:
    """Schmidt decomposition via a thin SVD of the coefficient matrix.

    ``rank`` counts coefficients above ``rank_tol * tau[0]``. The rank is
    bounded by ``min(d, n)`` whatever the truncation dimension.
    """
    _check_rank_tol(rank_tol)
    u, s, vh = _svd(psi.coeffs)
    return _package(u, s, vh.T, psi.d, psi.n, rank_tol)


def reduced_density(sd: SchmidtData) -> np.ndarray:
    """``tr_h |psi><psi|`` rebuilt from Schmidt data: ``left diag(tau^2) left^+``."""
    rho = (sd.left * sd.tau**2) @ sd.left.conj().T
    return 0.5 * (rho + rho.conj().T)


def entropy_from_probabilities(p) -> float:
    p = np.asarray(p, dtype=float)
    p = p[p > 0.0]
    return float(max(0.0, -np.sum(p * np.log(p))))


def entanglement_entropy(sd: SchmidtData) -> float:
    """Von Neumann entropy of the reduced state, ``-sum tau^2 ln tau^2`` (nats)."""
    return entropy_from_probabilities(sd.tau**2)


def max_entangled(d: int, n: int) -> PureState:
    if d < 1 or n < d:
        raise DimensionError(f"need n >= d >= 1 to embed a maximally entangled state, got d={d}, n={n}")
    c = np.zeros((d, n), dtype=np.complex128)
    c[np.arange(d), np.arange(d)] = 1.0 / np.sqrt(d)
    return PureState(_frozen(c))


def gram_schmidt(vectors, drop_tol: float = GS_DROP_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the span of ``vectors``.

    Modified Gram-Schmidt with one reorthogonalization pass; vectors whose
    residual norm falls below ``drop_tol`` are treated as dependent.
    """
    vectors = [np.asarray(v, dtype=np.complex128) for v in vectors]
    dim = vectors[0].size
    basis: list[np.ndarray] = []
    for v in vectors:
        w = v.copy()
        for _ in range(2):
            for q in basis:
                w -= np.vdot(q, w) * q
        nrm = np.linalg.norm(w)
        if nrm > drop_tol:
            basis.append(w / nrm)
        if len(basis) == dim:
            break
    if not basis:
        return np.zeros((dim, 0), dtype=np.complex128)
    return np.column_stack(basis)


def decompose_product_sum(ps: ProductSumState, rank_tol: float = DEFAULT_RANK_TOL) -> SchmidtData:
    """Schmidt data of a finite product sum without forming the d x n matrix first.

    Both factor families are orthonormalized, the sum is rewritten as an
    r x s matrix ``D`` in those bases, and ``D`` is diagonalized by SVD.
    """
    _check_rank_tol(rank_tol)
    e = gram_schmidt([t.left for t in ps.terms])
    f = gram_schmidt([t.right for t in ps.terms])
    dmat = np.zeros((e.shape[1], f.shape[1]), dtype=np.complex128)
    for t in ps.terms:
        dmat += t.c * np.outer(e.conj().T @ t.left, f.conj().T @ t.right)
    norm = np.linalg.norm(dmat)
    if abs(norm - 1.0) > ASSEMBLED_NORM_TOL:
        raise NotNormalized(f"product sum has norm {norm!r}")
    u, s, vh = _svd(dmat / norm)
    return _package(e @ u, s, f @ vh.T, ps.d, ps.n, rank_tol)
