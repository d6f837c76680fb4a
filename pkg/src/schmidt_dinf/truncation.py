"""Schmidt data of states with infinitely many h-coordinates.

A :class:`CoefficientSource` describes ``psi[alpha, k]`` for ``alpha`` in
``0..d-1`` and ``k = 1, 2, ...``. Truncating to the first ``N`` columns is the
projection onto ``span{f_1..f_N}``; :func:`converge_schmidt` doubles ``N``
until the Delta matrices of successive truncations agree in operator norm.

Because ``Delta(psi) - Delta(P_N psi)`` is positive semidefinite with trace
equal to the discarded squared mass, a tail bound on that mass is also a
bound on the operator-norm distance to the limit. This is what makes
certification possible when the source supplies one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import zeta

from .errors import DimensionError, InvalidInput, InvalidTolerance, NoConvergence, ZeroVector
from .schmidt import DEFAULT_RANK_TOL, SchmidtData, schmidt_decompose
from .states import ZERO_NORM, PureState, _frozen

ROUNDING_SLACK = 16 * np.finfo(float).eps


@dataclass(frozen=True)
class CoefficientSource:
    """Coefficient oracle for a vector of C^d (x) h.

    Parameters
    ----------
    d : int
        Dimension of the finite factor.
    coefficient : callable
        ``coefficient(alpha, k)`` with 0-based ``alpha`` and 1-based ``k``.
        Must be pure.
    tail_bound : callable, optional
        ``tail_bound(N)`` bounds ``sum_{k > N} sum_alpha |psi[alpha, k]|^2``.
    columns : callable, optional
        Vectorized fast path: ``columns(k0, k1)`` returns the d x (k1 - k0 + 1)
        block of coefficients for ``k = k0..k1``.
    """

    d: int
    coefficient: Callable[[int, int], complex]
    tail_bound: Optional[Callable[[int], float]] = None
    columns: Optional[Callable[[int, int], np.ndarray]] = None
    name: str = "custom"

    def block(self, k0: int, k1: int) -> np.ndarray:
        if k1 < k0:
            return np.zeros((self.d, 0), dtype=np.complex128)
        if self.columns is not None:
            out = np.asarray(self.columns(k0, k1), dtype=np.complex128)
            if out.shape != (self.d, k1 - k0 + 1):
                raise DimensionError(f"columns({k0}, {k1}) returned shape {out.shape}")
            return out
        return np.array(
            [[self.coefficient(a, k) for k in range(k0, k1 + 1)] for a in range(self.d)],
            dtype=np.complex128,
        )


@dataclass(frozen=True)
class Truncation:
    state: PureState
    raw: np.ndarray
    mass: float


def truncate(src: CoefficientSource, N: int) -> Truncation:
    """Project onto the first ``N`` h-basis vectors and renormalize.

    ``mass`` is the captured squared norm before renormalization.
    """
    if N < 1:
        raise InvalidInput(f"truncation dimension must be >= 1, got {N}")
    raw = src.block(1, N)
    return _from_raw(raw)


def _from_raw(raw: np.ndarray) -> Truncation:
    mass = float(np.vdot(raw, raw).real)
    if np.sqrt(mass) < ZERO_NORM:
        raise ZeroVector("all sampled coefficients are negligible")
    raw = _frozen(raw)
    return Truncation(PureState(_frozen(raw / np.sqrt(mass))), raw, mass)


def weyl_gap(delta_a: np.ndarray, delta_b: np.ndarray) -> float:
    """Operator norm ``||delta_a - delta_b||``.

    For Hermitian arguments this bounds the difference of every pair of
    eigenvalues sorted the same way.
    """
    a, b = np.asarray(delta_a), np.asarray(delta_b)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"weyl_gap needs two square matrices of equal size, got {a.shape} and {b.shape}")
    return float(np.linalg.svd(a - b, compute_uv=False)[0])


@dataclass(frozen=True)
class Snapshot:
    n: int
    tau: np.ndarray
    raw_eigenvalues: np.ndarray
    mass: float
    gap: Optional[float]


@dataclass
class ConvergenceReport:
    """Outcome of :func:`converge_schmidt`.

    ``weyl_bound`` bounds ``max_a |tau_a^2 - limit_a^2|`` for the reported
    (renormalized) coefficients. It is certified only when the source has a
    tail bound (``bound_certified``); otherwise it is the last Delta gap.
    """

    final_n: int
    schmidt: SchmidtData
    delta_gap: float
    weyl_bound: float
    bound_certified: bool
    rank_certified: bool
    iterations: list[Snapshot] = field(default_factory=list)


def _delta(raw: np.ndarray) -> np.ndarray:
    m = raw @ raw.conj().T
    return 0.5 * (m + m.conj().T)


def _eigs_desc(h: np.ndarray) -> np.ndarray:
    return np.linalg.eigvalsh(h)[::-1]


def _schedule(n0: int, n_max: int):
    n = n0
    while True:
        yield n
        if n >= n_max:
            return
        n = min(2 * n, n_max)


def converge_schmidt(
    src: CoefficientSource,
    tol: float,
    n0: int = 4,
    n_max: int = 1 << 16,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> ConvergenceReport:
    """Iterate truncations ``N = n0, 2 n0, 4 n0, ...`` (capped at ``n_max``).

    Without a tail bound the loop stops once the operator-norm gap between
    successive unnormalized Delta matrices is below ``tol``. With a tail bound
    it stops as soon as ``tail_bound(N) < tol``: the gap to every later
    truncation is then already below ``tol``, and ``delta_gap`` reports that
    bound.

    Raises
    ------
    NoConvergence
        ``n_max`` was reached first; the partial report is attached.
    """
    if not (tol > 0 and np.isfinite(tol)):
        raise InvalidTolerance(f"tol must be positive, got {tol!r}")
    if n0 < 1 or n_max < n0:
        raise InvalidInput(f"need 1 <= n0 <= n_max, got n0={n0}, n_max={n_max}")

    raw = np.zeros((src.d, 0), dtype=np.complex128)
    prev_delta = None
    snapshots: list[Snapshot] = []
    report = None
    for n in _schedule(n0, n_max):
        raw = np.hstack([raw, src.block(raw.shape[1] + 1, n)])
        tr = _from_raw(raw)
        delta = _delta(raw)
        gap = None if prev_delta is None else weyl_gap(delta, prev_delta)
        sd = schmidt_decompose(tr.state, rank_tol)
        snapshots.append(Snapshot(n, sd.tau.copy(), _eigs_desc(delta), tr.mass, gap))
        tail = None if src.tail_bound is None else float(src.tail_bound(n))
        if tail is not None and tail < tol:
            # every later Delta is within `tail` of this one
            return _report(n, sd, tail, tail, tr.mass, rank_tol, snapshots)
        report = _report(n, sd, gap, tail, tr.mass, rank_tol, snapshots)
        prev_delta = delta
        if gap is not None and gap < tol and tail is None:
            return report
    raise NoConvergence(
        f"no convergence up to n_max={n_max} (last gap {report.delta_gap:.3e}, tol {tol:.3e})", report
    )


def _report(n, sd, gap, tail, mass, rank_tol, snapshots) -> ConvergenceReport:
    gap_value = float("inf") if gap is None else gap
    if tail is None:
        return ConvergenceReport(n, sd, gap_value, gap_value, False, False, list(snapshots))
    # raw eigenvalues are within `tail` of the limit (Weyl); dividing by the
    # captured mass moves them by at most p_max * |1 - mass|. The last term
    # absorbs rounding in the SVD and the renormalization.
    p = sd.tau**2
    bound = tail + float(p[0]) * abs(1.0 - mass) + ROUNDING_SLACK * p.size
    threshold = (rank_tol * sd.tau[0]) ** 2
    r = sd.rank
    certified = r > 0 and p[r - 1] - bound > threshold
    if r < p.size:
        certified = certified and p[r] + bound < threshold
    return ConvergenceReport(n, sd, gap_value, bound, True, bool(certified), list(snapshots))


# Built-in sources -----------------------------------------------------------


def _normalize_weights(weights: Sequence[float]) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0 or np.any(w < 0) or w.sum() <= 0:
        raise InvalidInput("weights must be a nonempty list of nonnegative numbers")
    return w / w.sum()


def geometric_source(weights: Sequence[float], ratios: Sequence[float], interleaved: bool = True) -> CoefficientSource:
    """Rows with geometrically decaying amplitudes.

    Row ``alpha`` carries squared mass ``weights[alpha]`` (after normalizing
    the weights) spread as ``(1 - q) q^(j-1)`` over its j-th support column,
    ``q = ratios[alpha]``. With ``interleaved`` the rows live on disjoint
    column sets (``k = alpha + 1 + d (j - 1)``), so the limit Schmidt
    probabilities are exactly the sorted weights. Otherwise every row uses
    every column (``j = k``) and the limit Delta has the closed form returned
    by :func:`geometric_limit_delta`.
    """
    w = _normalize_weights(weights)
    q = np.asarray(ratios, dtype=float)
    if q.shape != w.shape or np.any(q <= 0) or np.any(q >= 1):
        raise InvalidInput("ratios must match weights and lie in (0, 1)")
    d = w.size
    amp = np.sqrt(w * (1 - q))

    def columns(k0: int, k1: int) -> np.ndarray:
        k = np.arange(k0, k1 + 1)
        out = np.zeros((d, k.size), dtype=np.complex128)
        for a in range(d):
            if interleaved:
                on = (k - 1) % d == a
                j = (k - 1) // d + 1
            else:
                on = np.ones(k.size, dtype=bool)
                j = k
            out[a, on] = amp[a] * q[a] ** ((j[on] - 1) / 2.0)
        return out

    def tail_bound(N: int) -> float:
        if interleaved:
            taken = np.array([0 if N < a + 1 else (N - a - 1) // d + 1 for a in range(d)])
        else:
            taken = np.full(d, N)
        return float(np.sum(w * q**taken))

    return CoefficientSource(
        d,
        lambda a, k: complex(columns(k, k)[a, 0]),
        tail_bound,
        columns,
        name="geometric",
    )


def geometric_limit_delta(weights: Sequence[float], ratios: Sequence[float]) -> np.ndarray:
    """Closed-form limit Delta of the non-interleaved geometric source."""
    w = _normalize_weights(weights)
    q = np.asarray(ratios, dtype=float)
    amp = np.sqrt(w * (1 - q))
    r = np.sqrt(np.outer(q, q))
    return np.outer(amp, amp) / (1 - r)


def power_law_source(weights: Sequence[float], exponents: Sequence[float]) -> CoefficientSource:
    """Rows ``psi[alpha, k] = sqrt(w_alpha / zeta(2 s_alpha)) k^(-s_alpha)``.

    All rows share the columns, so the rows are not orthogonal. Exponents must
    exceed 1/2; the tail bound uses the integral estimate.
    """
    w = _normalize_weights(weights)
    s = np.asarray(exponents, dtype=float)
    if s.shape != w.shape or np.any(s <= 0.5):
        raise InvalidInput("exponents must match weights and exceed 1/2")
    d = w.size
    amp = np.sqrt(w / zeta(2 * s))

    def columns(k0: int, k1: int) -> np.ndarray:
        k = np.arange(k0, k1 + 1, dtype=float)
        return (amp[:, None] * k[None, :] ** (-s[:, None])).astype(np.complex128)

    def tail_bound(N: int) -> float:
        return float(np.sum(amp**2 * N ** (1 - 2 * s) / (2 * s - 1)))

    return CoefficientSource(d, lambda a, k: complex(columns(k, k)[a, 0]), tail_bound, columns, name="power_law")


def finite_source(coeffs) -> CoefficientSource:
    """Source that is zero beyond the given d x n block (exact tail bound)."""
    c = np.array(coeffs, dtype=np.complex128)
    if c.ndim != 2 or c.size == 0:
        raise DimensionError("finite source needs a nonempty d x n matrix")
    d, n = c.shape
    col_mass = np.sum(np.abs(c) ** 2, axis=0)
    suffix = np.concatenate([np.cumsum(col_mass[::-1])[::-1], [0.0]])

    def columns(k0: int, k1: int) -> np.ndarray:
        out = np.zeros((d, k1 - k0 + 1), dtype=np.complex128)
        lo, hi = k0 - 1, min(k1, n)
        if hi > lo:
            out[:, : hi - lo] = c[:, lo:hi]
        return out

    def tail_bound(N: int) -> float:
        return float(suffix[min(N, n)])

    return CoefficientSource(d, lambda a, k: complex(c[a, k - 1]) if k <= n else 0j, tail_bound, columns, name="finite")
