"""Random instances and independent reference computations for the tests.

The reference routines here deliberately avoid the package's own linear
algebra paths: explicit loops, closed forms, or a different numpy routine.
"""

import math

import numpy as np


def random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unit(rng, n):
    v = random_complex(rng, n)
    return v / np.linalg.norm(v)


def random_coeffs(rng, d, n):
    c = random_complex(rng, (d, n))
    return c / np.linalg.norm(c)


def random_unitary(rng, n):
    q, r = np.linalg.qr(random_complex(rng, (n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(rng, d, rank=None):
    rank = d if rank is None else rank
    a = random_complex(rng, (d, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_hermitian(rng, d):
    a = random_complex(rng, (d, d))
    return 0.5 * (a + a.conj().T)


def loop_delta(coeffs):
    """Delta[a, b] = sum_k psi[a, k] conj(psi[b, k]) by explicit summation."""
    d, n = coeffs.shape
    out = np.zeros((d, d), dtype=complex)
    for a in range(d):
        for b in range(d):
            out[a, b] = sum(coeffs[a, k] * np.conj(coeffs[b, k]) for k in range(n))
    return out


def singular_values_via_eigh(m):
    """Singular values as square roots of eigenvalues of m^+ m or m m^+."""
    m = np.asarray(m)
    g = m @ m.conj().T if m.shape[0] <= m.shape[1] else m.conj().T @ m
    ev = np.clip(np.linalg.eigvalsh(g), 0.0, None)[::-1]
    return np.sqrt(ev)


def eig2x2_hermitian(m):
    """Closed-form eigenvalues of a 2x2 Hermitian matrix, descending."""
    a, d = m[0, 0].real, m[1, 1].real
    b = abs(m[0, 1])
    mean = 0.5 * (a + d)
    rad = math.sqrt(0.25 * (a - d) ** 2 + b * b)
    return np.array([mean + rad, mean - rad])


def shannon(p):
    return -sum(x * math.log(x) for x in p if x > 0)


def prefix_dominates(a, b, tol=1e-9):
    """Loop version of: every prefix sum of sorted b is <= that of sorted a."""
    a = sorted(a, reverse=True)
    b = sorted(b, reverse=True)
    size = max(len(a), len(b))
    a = a + [0.0] * (size - len(a))
    b = b + [0.0] * (size - len(b))
    sa = sb = 0.0
    for x, y in zip(a, b):
        sa += x
        sb += y
        if sb > sa + tol:
            return False
    return True


def matrix_unit_operator_svals(slices):
    """Operator Schmidt coefficients via the matrix-unit vectorization.

    Row index (a, b) of the d^2 x n matrix holds Q[k][a, b]; the matrix units
    are HS-orthonormal, so its singular values are the operator Schmidt
    coefficients regardless of the Hermitian basis used by the package.
    """
    s = np.asarray(slices)
    n, d, _ = s.shape
    m = np.zeros((d * d, n), dtype=complex)
    for k in range(n):
        for a in range(d):
            for b in range(d):
                m[a * d + b, k] = s[k, a, b]
    return singular_values_via_eigh(m)


def random_mp_sep(rng, d, n, terms):
    """Convex combination sum_i p_i q_i (x) psi_i of factor states."""
    p = rng.dirichlet(np.ones(terms))
    out = np.zeros((n, d, d), dtype=complex)
    for w in p:
        q = random_density(rng, d, rank=int(rng.integers(1, d + 1)))
        v = random_unit(rng, n)
        out += w * v[:, None, None] * q[None, :, :]
    return out


def random_hermitian_sliced(rng, d, n):
    out = np.array([random_hermitian(rng, d) for _ in range(n)])
    return out / np.linalg.norm(out)


def random_prob(rng, d):
    return rng.dirichlet(np.ones(d) * float(rng.uniform(0.2, 2.0)))
