"""Majorization order on Schmidt probability vectors and LOCC convertibility.

The probability vector of a pure state is its sorted ``tau**2`` (the spectrum
of the reduced density matrix). ``psi1`` can be converted into ``psi2`` by
LOCC exactly when the prefix sums of ``psi1``'s vector never exceed those of
``psi2``'s.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionError, InvalidInput
from .schmidt import SchmidtData

MAJORIZATION_TOL = 1e-9
SIMPLEX_TOL = 1e-10


class MajorizationVerdict(str, Enum):
    CONVERTIBLE_12 = "Convertible12"
    CONVERTIBLE_21 = "Convertible21"
    EQUIVALENT = "Equivalent"
    INCOMPARABLE = "Incomparable"


@dataclass(frozen=True, eq=False)
class SchmidtProbVector:
    p: np.ndarray

    def __len__(self) -> int:
        return self.p.size

    def prefix_sums(self) -> np.ndarray:
        return np.cumsum(self.p)


def prob_vector(p) -> SchmidtProbVector:
    """Validate a point of the simplex and sort it descending."""
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.size == 0 or not np.all(np.isfinite(p)):
        raise InvalidInput("probability vector must be nonempty and finite")
    if np.any(p < -SIMPLEX_TOL) or abs(p.sum() - 1.0) > SIMPLEX_TOL:
        raise InvalidInput(f"not a probability vector (sum {p.sum()!r}, min {p.min()!r})")
    p = np.sort(np.clip(p, 0.0, None))[::-1].copy()
    p.setflags(write=False)
    return SchmidtProbVector(p)


def to_prob_vector(sd: SchmidtData) -> SchmidtProbVector:
    return prob_vector(sd.tau**2)


def _padded(a: SchmidtProbVector, b: SchmidtProbVector):
    size = max(len(a), len(b))
    return np.pad(a.p, (0, size - len(a))), np.pad(b.p, (0, size - len(b)))


def majorizes(a: SchmidtProbVector, b: SchmidtProbVector, tol: float = MAJORIZATION_TOL) -> bool:
    """True iff ``b`` is majorized by ``a``: every prefix sum of ``b`` is at most
    that of ``a`` (plus ``tol``). Shorter vectors are zero padded."""
    pa, pb = _padded(a, b)
    return bool(np.all(np.cumsum(pb) <= np.cumsum(pa) + tol))


def verdict_from_vectors(a: SchmidtProbVector, b: SchmidtProbVector, tol: float = MAJORIZATION_TOL) -> MajorizationVerdict:
    forward = majorizes(b, a, tol)
    backward = majorizes(a, b, tol)
    if forward and backward:
        return MajorizationVerdict.EQUIVALENT
    if forward:
        return MajorizationVerdict.CONVERTIBLE_12
    if backward:
        return MajorizationVerdict.CONVERTIBLE_21
    return MajorizationVerdict.INCOMPARABLE


def locc_verdict(psi1: SchmidtData, psi2: SchmidtData, tol: float = MAJORIZATION_TOL) -> MajorizationVerdict:
    """Classify LOCC convertibility between two pure states of the same d.

    ``Convertible12`` means psi1 -> psi2 is possible (and not the reverse);
    ``Equivalent`` means both directions are.
    """
    if psi1.d != psi2.d:
        raise DimensionError(f"states live on different finite factors (d={psi1.d} vs d={psi2.d})")
    return verdict_from_vectors(to_prob_vector(psi1), to_prob_vector(psi2), tol)
