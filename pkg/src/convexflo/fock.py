"""Dense Fock-space backend.

Basis convention: the Fock state ``|n_1, ..., n_d>`` has index
``sum_k n_k 2**(k-1)`` (mode 1 is the least significant bit) and equals
``(a_1^dag)^{n_1} ... (a_d^dag)^{n_d} |0>``.  This is realised by the
Jordan-Wigner construction where ``a_k`` carries parity strings
``diag(1, -1)`` on the modes ``j < k``.

Majorana operators are ``c_{2k-1} = a_k + a_k^dag`` and
``c_{2k} = i (a_k - a_k^dag)``; indices are 1-based throughout the public API.
States and operators are plain numpy arrays: a pure state is a vector of
length ``2**d`` and a density operator a ``2**d x 2**d`` matrix.
"""
from __future__ import annotations

import functools

import numpy as np

from .densekit import eigh
from .errors import IndexOutOfRange, NotEven, NotPSD, OutOfRange
from .settings import get_tolerances

MAX_MODES = 8

_LOWER = np.array([[0.0, 1.0], [0.0, 0.0]])
_ZSTRING = np.diag([1.0, -1.0])


def mode_count(dim: int) -> int:
    """Number of modes ``d`` for a Fock space of dimension ``dim = 2**d``."""
    d = int(dim).bit_length() - 1
    if d < 0 or 1 << d != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return d


def _check_modes(d: int) -> None:
    if not 1 <= d <= MAX_MODES:
        raise OutOfRange(f"mode count must be in 1..{MAX_MODES}, got {d}")


def fock_index(occupations) -> int:
    return sum(int(n) << k for k, n in enumerate(occupations))


def occupations(index: int, d: int) -> tuple[int, ...]:
    return tuple((index >> k) & 1 for k in range(d))


def basis_state(occ) -> np.ndarray:
    occ = tuple(occ)
    psi = np.zeros(1 << len(occ), dtype=complex)
    psi[fock_index(occ)] = 1.0
    return psi


def vacuum(d: int) -> np.ndarray:
    return basis_state((0,) * d)


def excitation_numbers(d: int) -> np.ndarray:
    """Total particle number ``N`` of every basis state."""
    idx = np.arange(1 << d)
    return np.array([bin(i).count("1") for i in idx])


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@functools.lru_cache(maxsize=None)
def annihilation(k: int, d: int) -> np.ndarray:
    """``a_k`` (``1 <= k <= d``) as a dense real matrix."""
    _check_modes(d)
    if not 1 <= k <= d:
        raise IndexOutOfRange(f"mode {k} outside 1..{d}")
    out = np.ones((1, 1))
    # kron's first factor is the most significant bit, i.e. mode d
    for j in range(d, 0, -1):
        factor = np.eye(2) if j > k else (_LOWER if j == k else _ZSTRING)
        out = np.kron(out, factor)
    return _frozen(out)


@functools.lru_cache(maxsize=None)
def majoranas(d: int) -> np.ndarray:
    """Stack of all ``2d`` Majorana operators, shape ``(2d, 2**d, 2**d)``."""
    _check_modes(d)
    ops = []
    for k in range(1, d + 1):
        a = annihilation(k, d)
        ops.append(a + a.T)
        ops.append(1j * (a - a.T))
    return _frozen(np.array(ops, dtype=complex))


def majorana(k: int, d: int) -> np.ndarray:
    """Majorana operator ``c_k`` for ``1 <= k <= 2d``."""
    if not 1 <= k <= 2 * d:
        raise IndexOutOfRange(f"Majorana index {k} outside 1..{2 * d}")
    return majoranas(d)[k - 1]


def number_operator(k: int, d: int) -> np.ndarray:
    """``n_k = a_k^dag a_k``, which equals ``(I - i c_{2k-1} c_{2k}) / 2``."""
    a = annihilation(k, d)
    return a.T @ a


@functools.lru_cache(maxsize=None)
def parity_Q(d: int) -> np.ndarray:
    """Parity operator, diagonal with entries ``(-1)**N``."""
    _check_modes(d)
    return _frozen(np.diag((-1.0) ** excitation_numbers(d)).astype(complex))


def parity_from_majoranas(d: int) -> np.ndarray:
    """``Q = i**d c_1 c_2 ... c_{2d}`` built from the Majorana product."""
    return (1j**d) * np.linalg.multi_dot(list(majoranas(d))) if d > 0 else np.eye(1)


def parity_projectors(d: int) -> tuple[np.ndarray, np.ndarray]:
    q = parity_Q(d)
    eye = np.eye(q.shape[0])
    return (eye + q) / 2, (eye - q) / 2


def sector_indices(d: int, sector: int) -> np.ndarray:
    """Basis indices of the even (``sector=+1``) or odd (``-1``) subspace."""
    n = excitation_numbers(d)
    return np.flatnonzero((n % 2 == 0) if sector > 0 else (n % 2 == 1))


def parity_defect(x: np.ndarray) -> float:
    """Max-abs norm of ``[X, Q]``."""
    q = np.diag(parity_Q(mode_count(x.shape[0]))).real
    return float(np.max(np.abs(x * (q[None, :] - q[:, None])), initial=0.0))


def is_even(x: np.ndarray, tol: float | None = None) -> bool:
    tol = get_tolerances().structural if tol is None else tol
    return parity_defect(np.asarray(x)) <= tol


def state_parity(psi: np.ndarray) -> float:
    """Expectation of ``Q`` in a (normalized) pure state."""
    q = np.diag(parity_Q(mode_count(psi.shape[0]))).real
    return float(np.sum(q * np.abs(psi) ** 2))


# --- Majorana monomials and tilde conjugation ---------------------------------

def monomial(mask: int, d: int) -> np.ndarray:
    """``c_S`` for the index set encoded in ``mask`` (bit j <-> c_{j+1}), in increasing order."""
    c = majoranas(d)
    out = np.eye(1 << d, dtype=complex)
    for j in range(2 * d):
        if mask >> j & 1:
            out = out @ c[j]
    return out


def _even_masks(d: int):
    return [m for m in range(1 << (2 * d)) if bin(m).count("1") % 2 == 0]


@functools.lru_cache(maxsize=4)
def _even_monomials(d: int) -> np.ndarray:
    return _frozen(np.array([monomial(m, d) for m in _even_masks(d)]))


def _iter_even_monomials(d: int):
    if d <= 5:
        yield from _even_monomials(d)
    else:
        for m in _even_masks(d):
            yield monomial(m, d)


def majorana_coefficients(x: np.ndarray) -> np.ndarray:
    """Coefficients of ``X`` on the even Majorana monomials, ``Tr(c_S^dag X) / 2**d``."""
    x = np.asarray(x)
    d = mode_count(x.shape[0])
    if d <= 5:
        return np.einsum("sab,ab->s", _even_monomials(d).conj(), x) / (1 << d)
    return np.array([np.vdot(m, x) for m in _iter_even_monomials(d)]) / (1 << d)


def tilde(x: np.ndarray) -> np.ndarray:
    """Complex conjugate of the coefficients in the Majorana-monomial expansion.

    Only defined for even operators (raises :class:`NotEven` otherwise).  The map
    is antilinear and an involution.
    """
    x = np.asarray(x, dtype=complex)
    if not is_even(x):
        raise NotEven(f"operator is not even (|[X, Q]| = {parity_defect(x):.3e})")
    d = mode_count(x.shape[0])
    coeff = majorana_coefficients(x).conj()
    if d <= 5:
        return np.einsum("s,sab->ab", coeff, _even_monomials(d))
    out = np.zeros_like(x)
    for b, m in zip(coeff, _iter_even_monomials(d)):
        out += b * m
    return out


# --- named states ---------------------------------------------------------------

def a8_stabilizers() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Quartic stabilizers ``c1c2c3c4``, ``c3c4c5c6``, ``c1c3c5c7`` on four modes."""
    c = majoranas(4)
    s1 = c[0] @ c[1] @ c[2] @ c[3]
    s2 = c[2] @ c[3] @ c[4] @ c[5]
    s3 = c[0] @ c[2] @ c[4] @ c[6]
    return s1, s2, s3


def a8_projector() -> np.ndarray:
    """``(1/16)(I + S1)(I + S2)(I + S3)(I + Q)``."""
    eye = np.eye(16)
    s1, s2, s3 = a8_stabilizers()
    return (eye + s1) @ (eye + s2) @ (eye + s3) @ (eye + parity_Q(4)) / 16


@functools.lru_cache(maxsize=None)
def _a8() -> np.ndarray:
    w, v = np.linalg.eigh(a8_projector())
    psi = v[:, -1]
    lead = psi[np.argmax(np.abs(psi) > 1e-8)]
    return _frozen(psi * (abs(lead) / lead))


def a8_state() -> np.ndarray:
    """The four-mode state ``|a8>``; the first nonzero amplitude is real positive."""
    return _a8().copy()


def depolarized_a8(p: float) -> np.ndarray:
    """``(1 - p)|a8><a8| + p I / 16``."""
    if not 0.0 <= p <= 1.0:
        raise OutOfRange(f"noise strength p must lie in [0, 1], got {p}")
    psi = _a8()
    return (1 - p) * np.outer(psi, psi.conj()) + p * np.eye(16) / 16


# --- states and correlation matrices -------------------------------------------

def projector(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def validate_density(rho: np.ndarray, require_even: bool = True) -> np.ndarray:
    """Check the density-operator invariants; returns ``rho`` as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    mode_count(rho.shape[0])
    tol = get_tolerances()
    w, _ = eigh(rho)
    if w[0] < -tol.psd_clip:
        raise NotPSD(f"density operator has eigenvalue {w[0]:.3e}")
    tr = np.trace(rho).real
    if abs(tr - 1) > tol.structural:
        raise OutOfRange(f"density operator has trace {tr!r}")
    if require_even and not is_even(rho):
        raise NotEven("density operator does not commute with parity")
    return rho


def correlation_from_state(state: np.ndarray) -> np.ndarray:
    """Correlation matrix ``M_kl = (i/2) Tr(rho [c_k, c_l])`` of an even state.

    ``state`` may be a density matrix or a pure-state vector of definite parity.
    """
    state = np.asarray(state, dtype=complex)
    tol = get_tolerances().structural
    d = mode_count(state.shape[0])
    c = majoranas(d)
    if state.ndim == 1:
        if not is_even(projector(state)):
            raise NotEven("pure state has no definite parity")
        phi = c @ state  # rows: c_k |psi>
        t = phi.conj() @ phi.T  # <psi| c_k c_l |psi>
    else:
        if not is_even(state):
            raise NotEven("state does not commute with parity")
        t = np.einsum("kab,lba->kl", c @ state[None], c)  # Tr(c_k rho c_l) = Tr(rho c_l c_k)
        t = t.T
    m = 0.5j * (t - t.T)
    if np.max(np.abs(m.imag), initial=0.0) > tol:
        raise NotEven("correlation matrix is not real")
    return m.real


def tensor_modes(*ops: np.ndarray) -> np.ndarray:
    """Joint operator on consecutive mode blocks (first argument = lowest modes).

    Valid for even operators, for which the fermionic tensor product coincides
    with the Kronecker product in this basis ordering.
    """
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(op, out)
    return out
