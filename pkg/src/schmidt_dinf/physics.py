"""Spin-orbit entanglement examples.

Bloch spin-1/2 states ``c1 e1 (x) theta1 + c2 e2 (x) theta2`` and Dirac
spinors ``sum_mu e_mu (x) psi_mu`` in C^4 (x) h, both analyzed through the
Schmidt machinery of :mod:`schmidt_dinf.schmidt`.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidInput
from .mixed_pure import coefficient_matrix
from .schmidt import DEFAULT_RANK_TOL, SchmidtData, entanglement_entropy, entropy_from_probabilities, schmidt_decompose
from .states import NORM_TOL, PureState, _frozen, make_mixed_pure

ORTHOGONAL_TOL = 1e-10
DIAGONAL_GRAM_TOL = 1e-12


class BlochRegime(str, Enum):
    ORTHOGONAL = "Orthogonal"
    DEPENDENT = "Dependent"
    INTERMEDIATE = "Intermediate"


@dataclass(frozen=True, eq=False)
class BlochInput:
    c1: float
    c2: float
    theta1: np.ndarray
    theta2: np.ndarray

    @property
    def n(self) -> int:
        return self.theta1.size


def make_bloch_input(c1: float, c2: float, theta1, theta2) -> BlochInput:
    t1 = np.array(theta1, dtype=np.complex128).reshape(-1)
    t2 = np.array(theta2, dtype=np.complex128).reshape(-1)
    c1, c2 = float(c1), float(c2)
    if not (np.isfinite(c1) and np.isfinite(c2)) or c1 < 0 or c2 < 0:
        raise InvalidInput("c1 and c2 must be finite and nonnegative")
    if abs(c1 * c1 + c2 * c2 - 1.0) > NORM_TOL:
        raise InvalidInput(f"c1^2 + c2^2 must equal 1, got {c1 * c1 + c2 * c2!r}")
    if t1.size != t2.size or t1.size == 0:
        raise InvalidInput("orbital factors must have the same nonzero length")
    if not (np.all(np.isfinite(t1)) and np.all(np.isfinite(t2))):
        raise InvalidInput("orbital factors must be finite")
    for t, name in ((t1, "theta1"), (t2, "theta2")):
        if abs(np.linalg.norm(t) - 1.0) > NORM_TOL:
            raise InvalidInput(f"{name} must be a unit vector")
    return BlochInput(c1, c2, _frozen(t1), _frozen(t2))


def bloch_from_overlap(c1: float, sigma: complex, n: int = 2) -> BlochInput:
    """Bloch input with ``theta1 = f_1`` and ``theta2 = sigma f_1 + sqrt(1 - |sigma|^2) f_2``."""
    sigma = complex(sigma)
    if abs(sigma) > 1.0 + 1e-12:
        raise InvalidInput(f"|sigma| must not exceed 1, got {abs(sigma)!r}")
    if n < 2:
        raise InvalidInput("need n >= 2 for a Bloch state with two orbital factors")
    c1 = float(c1)
    if not 0.0 <= c1 <= 1.0:
        raise InvalidInput("c1 must lie in [0, 1]")
    t1 = np.zeros(n, dtype=np.complex128)
    t2 = np.zeros(n, dtype=np.complex128)
    t1[0] = 1.0
    t2[0] = sigma
    t2[1] = np.sqrt(max(0.0, 1.0 - abs(sigma) ** 2))
    return make_bloch_input(c1, np.sqrt(max(0.0, 1.0 - c1 * c1)), t1, t2)


def bloch_state(b: BlochInput) -> PureState:
    return PureState(_frozen(np.vstack([b.c1 * b.theta1, b.c2 * b.theta2])))


def bloch_orthonormal_form(b: BlochInput):
    """Rewrite the state over orthonormal orbital vectors.

    Returns ``(theta1_star, theta2_star, D)`` with ``theta1_star = theta1``,
    ``theta2 = sigma theta1_star + sqrt(1 - |sigma|^2) theta2_star`` and
    ``psi = sum_ab D[a, b] e_a (x) theta_b_star``.
    """
    sigma = np.vdot(b.theta1, b.theta2)
    rest = b.theta2 - sigma * b.theta1
    s = np.sqrt(max(0.0, 1.0 - abs(sigma) ** 2))
    if np.linalg.norm(rest) > ORTHOGONAL_TOL:
        t2s = rest / np.linalg.norm(rest)
    else:
        # theta2 is parallel to theta1; any unit vector orthogonal to it will do
        basis = np.eye(b.n, dtype=np.complex128)
        cand = basis - np.outer(b.theta1, b.theta1.conj() @ basis)
        t2s = cand[:, int(np.argmax(np.linalg.norm(cand, axis=0)))]
        t2s = t2s / np.linalg.norm(t2s)
    dmat = np.array([[b.c1, 0.0], [b.c2 * sigma, b.c2 * s]], dtype=np.complex128)
    return b.theta1.copy(), t2s, dmat


@dataclass(frozen=True, eq=False)
class BlochReport:
    sigma: complex
    delta: float
    rho: np.ndarray
    eigenvalues: np.ndarray
    entropy: float
    schmidt_entropy: float
    regime: BlochRegime


def bloch_rho(c1: float, c2: float, sigma: complex) -> np.ndarray:
    """The 2 x 2 matrix ``[[c1^2, c1 c2 sigma], [c1 c2 sigma*, c2^2]]``."""
    off = c1 * c2 * sigma
    return np.array([[c1 * c1, off], [np.conj(off), c2 * c2]], dtype=np.complex128)


def bloch_analyze(b: BlochInput) -> BlochReport:
    """Entanglement between spin and orbital parts of a Bloch state.

    ``rho`` is written with ``sigma = <theta1|theta2>``; it is the transpose of
    ``tr_h |psi><psi|`` in the package's conjugate-linear-first convention,
    which has the same spectrum.
    """
    sigma = complex(np.vdot(b.theta1, b.theta2))
    rho = bloch_rho(b.c1, b.c2, sigma)
    eig = np.clip(np.linalg.eigvalsh(rho)[::-1], 0.0, None)
    ent = entropy_from_probabilities(eig)
    mag = abs(sigma)
    if mag < ORTHOGONAL_TOL:
        regime = BlochRegime.ORTHOGONAL
    elif mag > 1.0 - ORTHOGONAL_TOL:
        regime = BlochRegime.DEPENDENT
    else:
        regime = BlochRegime.INTERMEDIATE
    cross = entanglement_entropy(schmidt_decompose(bloch_state(b)))
    return BlochReport(sigma, abs(1.0 - sigma), rho, eig, ent, cross, regime)


def bloch_sweep(c1: float, sigmas, n: int = 2) -> list[BlochReport]:
    return [bloch_analyze(bloch_from_overlap(c1, s, n)) for s in sigmas]


@dataclass(frozen=True, eq=False)
class DiracSpinor:
    components: np.ndarray

    @property
    def n(self) -> int:
        return self.components.shape[1]


def make_dirac_spinor(components, normalize: bool = False) -> DiracSpinor:
    c = np.array(components, dtype=np.complex128)
    if c.ndim != 2 or c.shape[0] != 4 or c.shape[1] == 0:
        raise InvalidInput(f"a spinor has four components of equal length, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise InvalidInput("spinor contains non-finite entries")
    norm = np.linalg.norm(c)
    if normalize:
        if norm == 0:
            raise InvalidInput("zero spinor")
        c = c / norm
    elif abs(norm - 1.0) > NORM_TOL:
        raise InvalidInput(f"spinor norm is {norm!r}, expected 1")
    return DiracSpinor(_frozen(c))


def gram_matrix(s: DiracSpinor) -> np.ndarray:
    """``G[a, b] = <psi_a | psi_b>``."""
    c = s.components
    g = c.conj() @ c.T
    return 0.5 * (g + g.conj().T)


@dataclass(frozen=True, eq=False)
class DiracReport:
    schmidt: SchmidtData
    entropy: float
    gram: np.ndarray
    diagonal_gram: bool


def dirac_analyze(s: DiracSpinor, rank_tol: float = DEFAULT_RANK_TOL) -> DiracReport:
    """Spin-orbit Schmidt data of a spinor.

    When the Gram matrix is diagonal the components are already a Schmidt
    form and ``tau**2`` equals the sorted diagonal of ``G``.
    """
    sd = schmidt_decompose(PureState(s.components), rank_tol)
    g = gram_matrix(s)
    off = g - np.diag(np.diag(g))
    return DiracReport(sd, entanglement_entropy(sd), g, bool(np.max(np.abs(off)) < DIAGONAL_GRAM_TOL))


def dirac_maximizer(n: int = 4) -> DiracSpinor:
    """``psi_mu = f_mu / 2``: orthogonal components with equal weight."""
    if n < 4:
        raise InvalidInput("need n >= 4 for four orthogonal components")
    c = np.zeros((4, n), dtype=np.complex128)
    c[np.arange(4), np.arange(4)] = 0.5
    return DiracSpinor(_frozen(c))


def _batch_entropy(batch: np.ndarray) -> np.ndarray:
    p = np.linalg.svd(batch, compute_uv=False) ** 2
    p = p / p.sum(axis=-1, keepdims=True)
    safe = np.where(p > 0, p, 1.0)
    return np.maximum(0.0, -np.sum(p * np.log(safe), axis=-1))


@dataclass(frozen=True, eq=False)
class ScanResult:
    max_entropy: float
    argmax: DiracSpinor
    entropies: np.ndarray


def random_spinors(samples: int, n: int, seed: int) -> np.ndarray:
    """Independent complex Gaussians per coordinate, normalized per spinor."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((samples, 4, n)) + 1j * rng.standard_normal((samples, 4, n))
    return z / np.linalg.norm(z, axis=(1, 2), keepdims=True)


def dirac_conjecture_scan(samples: int, n: int, seed: int, include=()) -> ScanResult:
    """Largest spin-orbit entropy over random spinors.

    ``include`` adds fixed spinors to the pool (evaluated after the random
    ones). The ceiling ``ln 4`` is a theorem for pure spinors; the scan only
    records how close random sampling gets.
    """
    if samples < 1 or n < 4:
        raise InvalidInput("need samples >= 1 and n >= 4")
    pool = random_spinors(samples, n, seed)
    extra = [s.components for s in include]
    if any(e.shape != (4, n) for e in extra):
        raise InvalidInput(f"included spinors must have shape (4, {n})")
    if extra:
        pool = np.concatenate([pool, np.array(extra)])
    ent = _batch_entropy(pool)
    best = int(np.argmax(ent))
    ent.setflags(write=False)
    return ScanResult(float(ent[best]), DiracSpinor(_frozen(pool[best])), ent)


def mixed_pure_entropy_scan(samples: int, n: int, seed: int, d: int = 4) -> tuple[float, np.ndarray]:
    """Exploratory: entropy of ``lambda^2 / sum(lambda^2)`` over random mixed-pure tensors.

    There is no agreed entropy for mixed-pure states; this surrogate is for
    inspection only. Returns the maximum and all sampled values.
    """
    if samples < 1 or n < 1:
        raise InvalidInput("need samples >= 1 and n >= 1")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((samples, n, d, d)) + 1j * rng.standard_normal((samples, n, d, d))
    mats = np.array([coefficient_matrix(make_mixed_pure(q)) for q in z])
    ent = _batch_entropy(mats)
    return float(ent.max()), ent
