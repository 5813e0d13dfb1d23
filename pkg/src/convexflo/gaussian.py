"""Correlation-matrix formalism for fermionic Gaussian states.

A state on ``d`` modes is described by the real antisymmetric ``2d x 2d``
matrix ``M_kl = i <c_k c_l>`` (``k != l``).  Pure Gaussian states are exactly
those with orthogonal ``M``.  Under ``H = i sum_kl h_kl c_k c_l`` the
Majoranas rotate as ``c -> exp(4 h t) c`` and ``M -> R M R^T``.
Occupation measurement of mode ``k`` gives ``n_k = 0`` with probability
``(1 + M_{2k-1,2k}) / 2``.
"""
from __future__ import annotations

import numpy as np
import scipy.linalg

from . import fock
from .densekit import antisymmetry_defect, expm_antisym, random_orthogonal
from .errors import IndexOutOfRange, NotAntisymmetric, NotGaussian, OutOfRange
from .settings import get_tolerances

MAX_LIFT_MODES = 6


class DegenerateOutcome(ValueError):
    """A measurement outcome with vanishing probability was requested."""


def fock_correlation(occ) -> np.ndarray:
    """Correlation matrix of the Fock basis state ``|n_1 ... n_d>``."""
    blocks = [(1 - 2 * int(n)) * np.array([[0.0, 1.0], [-1.0, 0.0]]) for n in occ]
    return scipy.linalg.block_diag(*blocks)


def vacuum_correlation(d: int) -> np.ndarray:
    if d < 1:
        raise OutOfRange(f"mode count must be positive, got {d}")
    return fock_correlation((0,) * d)


def direct_sum(*ms: np.ndarray) -> np.ndarray:
    """Correlation matrix of a product state; arguments ordered from the lowest modes."""
    return scipy.linalg.block_diag(*ms)


def validate_correlation(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
        raise ValueError(f"correlation matrix must be 2d x 2d, got shape {m.shape}")
    if antisymmetry_defect(m) > get_tolerances().structural:
        raise NotAntisymmetric("correlation matrix is not antisymmetric")
    return m


def gaussian_residual(m: np.ndarray) -> float:
    """``max |M M^T - I|``; zero exactly for pure Gaussian states."""
    m = np.asarray(m, dtype=float)
    return float(np.max(np.abs(m @ m.T - np.eye(m.shape[0])), initial=0.0))


def is_gaussian_pure(m: np.ndarray, tol: float = 1e-8) -> tuple[bool, float]:
    """Return ``(residual <= tol, residual)`` with ``residual = max|MM^T - I|``."""
    r = gaussian_residual(m)
    return r <= tol, r


def rotation(h: np.ndarray, t: float) -> np.ndarray:
    """Orthogonal Majorana rotation generated by ``H = i sum h_kl c_k c_l`` over time ``t``."""
    return expm_antisym(h, 4.0 * t)


def rotate(m: np.ndarray, r: np.ndarray, majorana_idx=None) -> np.ndarray:
    """``R M R^T`` where ``R`` acts on the listed Majorana indices (0-based) only."""
    if majorana_idx is None:
        return r @ m @ r.T
    idx = np.asarray(majorana_idx)
    out = m.copy()
    out[idx, :] = r @ out[idx, :]
    out[:, idx] = out[:, idx] @ r.T
    return out


def evolve(m: np.ndarray, h: np.ndarray, t: float) -> np.ndarray:
    """Evolve ``M`` under the quadratic Hamiltonian with coefficients ``h`` for time ``t``."""
    h = np.asarray(h, dtype=float)
    if h.shape != np.shape(m):
        raise ValueError(f"generator shape {h.shape} does not match M {np.shape(m)}")
    if antisymmetry_defect(h) > 1e-12:
        raise NotAntisymmetric("generator h must be antisymmetric")
    return rotate(np.asarray(m, dtype=float), rotation(h, t))


def _mode_slots(m: np.ndarray, k: int) -> tuple[int, int]:
    d = m.shape[0] // 2
    if not 1 <= k <= d:
        raise IndexOutOfRange(f"mode {k} outside 1..{d}")
    return 2 * k - 2, 2 * k - 1


def outcome_probability(m: np.ndarray, k: int, outcome: int) -> float:
    """Born probability of reading ``n_k = outcome``."""
    a, b = _mode_slots(m, k)
    sign = 1.0 if outcome == 0 else -1.0
    return float(min(1.0, max(0.0, 0.5 * (1.0 + sign * m[a, b]))))


def project_mode(m: np.ndarray, k: int, outcome: int) -> np.ndarray:
    """Post-measurement correlation matrix after reading ``n_k = outcome``."""
    a, b = _mode_slots(m, k)
    lam = 1.0 if outcome == 0 else -1.0
    denom = 1.0 + lam * m[a, b]
    if denom < 2 * get_tolerances().degenerate_outcome:
        raise DegenerateOutcome(f"outcome {outcome} on mode {k} has vanishing probability")
    ca, cb = m[:, a], m[:, b]
    out = m + lam * (np.outer(ca, -cb) - np.outer(cb, -ca)) / denom
    out[[a, b], :] = 0.0
    out[:, [a, b]] = 0.0
    out[a, b], out[b, a] = lam, -lam
    return out


def measure_mode(
    m: np.ndarray, k: int, rng: np.random.Generator
) -> tuple[int, float, np.ndarray]:
    """Sample the occupation of mode ``k``.

    Returns ``(outcome, probability, M')``.  An outcome whose probability is
    below the degenerate-outcome tolerance is never selected.
    """
    p0 = outcome_probability(m, k, 0)
    eps = get_tolerances().degenerate_outcome
    if p0 < eps:
        s = 1
    elif 1.0 - p0 < eps:
        s = 0
    else:
        s = 0 if rng.random() < p0 else 1
    p = p0 if s == 0 else 1.0 - p0
    return s, p, project_mode(m, k, s)


def random_pure_gaussian(d: int, rng: np.random.Generator, parity: int = 1) -> np.ndarray:
    """Haar-random pure Gaussian correlation matrix of the given parity."""
    if d < 1:
        raise OutOfRange(f"mode count must be positive, got {d}")
    ref = vacuum_correlation(d) if parity > 0 else fock_correlation((0,) * (d - 1) + (1,))
    r = random_orthogonal(2 * d, rng)
    return r @ ref @ r.T


# --- lifting a correlation matrix to a state vector --------------------------

def gaussian_frame(m: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    """Find ``R`` in SO(2d) and a Fock reference ``n`` with ``M = R M_n R^T``.

    The reference is the vacuum for even states and ``|0...01>`` for odd ones.
    Columns are built pairwise: pick a unit vector ``z`` orthogonal to the
    columns found so far and set the partner column to ``M z``.
    """
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    cols: list[np.ndarray] = []
    eye = np.eye(n)
    while len(cols) < n:
        basis = np.array(cols).T if cols else np.zeros((n, 0))
        resid = eye - basis @ (basis.T @ eye)
        j = int(np.argmax(np.linalg.norm(resid, axis=0)))
        z = resid[:, j] / np.linalg.norm(resid[:, j])
        partner = m @ z
        partner -= basis @ (basis.T @ partner)
        partner -= z * (z @ partner)
        cols.extend([partner / np.linalg.norm(partner), z])
    r = np.array(cols).T
    u, _, vt = np.linalg.svd(r)
    r = u @ vt
    occ = [0] * (n // 2)
    if np.linalg.det(r) < 0:
        r[:, -1] = -r[:, -1]
        occ[-1] = 1
    return r, tuple(occ)


def givens_factorization(r: np.ndarray) -> list[tuple[int, int, float]]:
    """Factor ``R`` in SO(n) into planar rotations.

    Returns ``[(i, j, alpha), ...]`` (``i < j``, 0-based) such that ``R`` is
    the ordered product of the rotations ``G(i, j, alpha)``, where ``G`` is
    the identity except ``G_ii = G_jj = cos(alpha)``, ``G_ij = sin(alpha)``,
    ``G_ji = -sin(alpha)``.
    """
    w = np.array(r, dtype=float)
    n = w.shape[0]
    elims = []
    for j in range(n - 1):
        for i in range(n - 1, j, -1):
            if w[i, j] == 0.0:
                continue
            rad = np.hypot(w[j, j], w[i, j])
            c, s = w[j, j] / rad, w[i, j] / rad
            wj, wi = w[j].copy(), w[i].copy()
            w[j], w[i] = c * wj + s * wi, -s * wj + c * wi
            elims.append((j, i, np.arctan2(s, c)))
    # G_K ... G_1 R = I, so R = G_1^T ... G_K^T and G(alpha)^T = G(-alpha)
    return [(j, i, -alpha) for j, i, alpha in elims]


def apply_rotation_to_state(psi: np.ndarray, i: int, j: int, alpha: float) -> np.ndarray:
    """Apply ``exp((alpha/2) c_i c_j)`` (0-based Majorana indices), which rotates ``M`` by ``G(i, j, alpha)``."""
    c = fock.majoranas(fock.mode_count(psi.shape[0]))
    return np.cos(alpha / 2) * psi + np.sin(alpha / 2) * (c[i] @ (c[j] @ psi))


def gaussian_state_vector(m: np.ndarray) -> np.ndarray:
    """Dense state vector (up to a global phase) of a pure Gaussian state."""
    m = validate_correlation(m)
    d = m.shape[0] // 2
    if d > MAX_LIFT_MODES:
        raise OutOfRange(f"lifting is limited to {MAX_LIFT_MODES} modes, got {d}")
    ok, res = is_gaussian_pure(m)
    if not ok:
        raise NotGaussian(f"correlation matrix is not pure Gaussian (residual {res:.3e})")
    r, occ = gaussian_frame(m)
    psi = fock.basis_state(occ)
    for i, j, alpha in reversed(givens_factorization(r)):
        psi = apply_rotation_to_state(psi, i, j, alpha)
    return psi / np.linalg.norm(psi)
