"""Small dense linear-algebra kernels (matrix sizes up to a few hundred).

Everything here is a pure function of its inputs.  Random number generators
are always passed explicitly.
"""
from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import NotAntisymmetric, NotHermitian, NotPSD, NotSymmetric, OutOfRange
from .settings import get_tolerances


def _square(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def hermitian_defect(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T), initial=0.0))


def antisymmetry_defect(a: np.ndarray) -> float:
    return float(np.max(np.abs(a + a.T), initial=0.0))


def eigh(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    Returns ascending eigenvalues and a unitary matrix of eigenvectors (columns).
    Raises :class:`NotHermitian` if ``h`` deviates from its adjoint by more than
    the structural tolerance (max-abs).
    """
    h = _square(h, "H")
    defect = hermitian_defect(h)
    if defect > get_tolerances().structural:
        raise NotHermitian(f"matrix is not Hermitian (max deviation {defect:.3e})")
    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    return w, v


def sqrt_psd(a: np.ndarray) -> np.ndarray:
    """Principal square root of a Hermitian positive semidefinite matrix."""
    w, v = eigh(a)
    tol = get_tolerances()
    if w.size and w[0] < -tol.psd_clip:
        raise NotPSD(f"matrix has eigenvalue {w[0]:.3e} < 0")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def takagi(s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Takagi factorization ``S = U diag(d) U^T`` of a complex symmetric matrix.

    ``d`` holds the singular values of ``S`` in non-increasing order and ``U``
    is unitary.

    The columns ``u`` satisfy ``S conj(u) = d u``.  Writing ``S = A + iB`` and
    ``u = x + iy`` this is the real symmetric eigenproblem
    ``[[A, B], [B, -A]] [x; y] = d [x; y]`` whose spectrum is ``+-d``; the
    positive half gives the non-null columns.  Columns for (numerically) zero
    singular values span the orthogonal complement of the range of ``S``.
    """
    s = _square(s, "S").astype(complex)
    n = s.shape[0]
    defect = float(np.max(np.abs(s - s.T), initial=0.0))
    if defect > get_tolerances().structural:
        raise NotSymmetric(f"matrix is not symmetric (max deviation {defect:.3e})")
    s = (s + s.T) / 2
    if n == 0:
        return np.zeros((0, 0), complex), np.zeros(0)

    a, b = s.real, s.imag
    k = np.block([[a, b], [b, -a]])
    w, v = np.linalg.eigh(k)
    scale = max(float(w[-1]), 0.0)
    cutoff = 1e-13 * scale if scale > 0 else 0.0
    keep = np.flatnonzero(w > cutoff)[::-1][:n]  # largest first
    d = w[keep]
    u = v[:n, keep] + 1j * v[n:, keep]

    r = u.shape[1]
    if r:
        # Near-zero singular values have nearly degenerate +-d partners in the
        # embedding, which can leak a little complex non-orthogonality.
        p, _, qh = np.linalg.svd(u, full_matrices=False)
        u = p @ qh
    if r < n:
        q, _ = np.linalg.qr(u, mode="complete") if r else (np.eye(n, dtype=complex), None)
        u = np.hstack([u, q[:, r:]])
        d = np.concatenate([d, np.zeros(n - r)])
    return u, d


def expm_antisym(h: np.ndarray, s: float = 1.0) -> np.ndarray:
    """``exp(s h)`` for a real antisymmetric ``h``; the result lies in SO(n)."""
    h = _square(h, "h")
    if np.iscomplexobj(h):
        if np.max(np.abs(h.imag), initial=0.0) > 0:
            raise NotAntisymmetric("generator must be real")
        h = h.real
    defect = antisymmetry_defect(h)
    if defect > 1e-12:
        raise NotAntisymmetric(f"generator is not antisymmetric (max deviation {defect:.3e})")
    h = (h - h.T) / 2
    if h.shape[0] == 0:
        return np.zeros((0, 0))
    return scipy.linalg.expm(float(s) * h)


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed special orthogonal ``n x n`` matrix (``n`` even)."""
    if n <= 0 or n % 2:
        raise OutOfRange(f"n must be a positive even integer, got {n}")
    z = rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q
