"""Exact convex-Gaussianity certification for four-mode fermionic states.

The excitation-hole duality ``theta`` is an antiunitary map on each parity
sector of the four-mode Fock space that commutes with every ``c_i c_j``.  A
pure state of definite parity is Gaussian iff ``<psi|theta psi> = 0``, and the
convex roof of ``|<psi|theta psi>|`` has the closed form
``max(0, l_1 - l_2 - ... - l_8)`` in the singular values ``l_k`` of the
matrix ``<w_i|theta w_j>`` built from any decomposition ``rho = sum |w_i><w_i|``.
A state is convex-Gaussian iff this vanishes on both sectors.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from . import fock
from .densekit import eigh, takagi
from .errors import (
    MixedParity,
    MixedSector,
    NotPSD,
    WrongModeCount,
    WrongSector,
)
from .gaussian import gaussian_residual
from .settings import get_tolerances

MODES = 4
DIM = 16
SECTOR_DIM = 8


# --- theta -------------------------------------------------------------------

def reordering_sign(index: int, d: int = MODES) -> int:
    """Sign of moving the creators of the complement of ``n`` past those of ``n``.

    This is the parity of the permutation that sorts (occupied modes of ``n``,
    occupied modes of the complement) into increasing order.
    """
    occ = [k for k in range(d) if index >> k & 1]
    empty = [k for k in range(d) if not index >> k & 1]
    inversions = sum(1 for i in occ for j in empty if i > j)
    return -1 if inversions % 2 else 1


def theta_sign(index: int, d: int = MODES) -> int:
    """Coefficient of ``|n-bar>`` in ``theta |n>``."""
    n = bin(index).count("1")
    return (-1) ** (n // 2) * reordering_sign(index, d)


@dataclass(frozen=True)
class ThetaMap:
    """Antiunitary ``theta = V K`` on one parity sector (``K``: complex conjugation).

    ``indices`` lists the full-space basis indices of the sector; ``matrix`` is
    the real signed permutation ``V`` in that basis.
    """

    sector: int
    indices: np.ndarray
    matrix: np.ndarray

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """``theta psi`` for a sector vector (length 8) or a full vector supported in the sector."""
        psi = np.asarray(psi, dtype=complex)
        if psi.shape[0] == SECTOR_DIM:
            return self.matrix @ psi.conj()
        out = np.zeros(DIM, dtype=complex)
        out[self.indices] = self.matrix @ psi[self.indices].conj()
        return out

    def conjugate(self, x: np.ndarray) -> np.ndarray:
        """``theta X theta`` for an 8 x 8 sector operator."""
        return self.matrix @ np.asarray(x).conj() @ self.matrix.T

    def embed(self) -> np.ndarray:
        """``V`` as a 16 x 16 matrix vanishing outside the sector."""
        out = np.zeros((DIM, DIM))
        out[np.ix_(self.indices, self.indices)] = self.matrix
        return out


@functools.lru_cache(maxsize=None)
def _theta(sector: int) -> ThetaMap:
    idx = fock.sector_indices(MODES, sector)
    pos = {int(i): k for k, i in enumerate(idx)}
    v = np.zeros((SECTOR_DIM, SECTOR_DIM))
    for k, i in enumerate(idx):
        v[pos[(DIM - 1) ^ int(i)], k] = theta_sign(int(i))
    v.flags.writeable = False
    idx.flags.writeable = False
    return ThetaMap(sector, idx, v)


def theta(sector: int) -> ThetaMap:
    """Excitation-hole duality on the even (``+1``) or odd (``-1``) sector.

    Phase fixed by ``theta_+ |0000> = |1111>`` and ``theta_- |1000> = |0111>``.
    """
    if sector not in (1, -1):
        raise ValueError(f"sector must be +1 or -1, got {sector}")
    return _theta(sector)


@functools.lru_cache(maxsize=None)
def theta_full() -> np.ndarray:
    """Both sectors at once: ``theta psi = V conj(psi)`` for definite-parity ``psi``."""
    out = theta(1).embed() + theta(-1).embed()
    out.flags.writeable = False
    return out


# --- sector helpers ----------------------------------------------------------

def _sector_weights(psi: np.ndarray) -> tuple[float, float]:
    w = np.abs(psi) ** 2
    return float(w[theta(1).indices].sum()), float(w[theta(-1).indices].sum())


def pure_sector(psi: np.ndarray) -> int:
    """Parity sector of a four-mode pure state; raises :class:`MixedParity` otherwise."""
    psi = np.asarray(psi)
    if psi.shape != (DIM,):
        raise WrongModeCount(f"expected a four-mode state vector, got shape {psi.shape}")
    plus, minus = _sector_weights(psi)
    tol = get_tolerances().structural
    if minus <= tol * max(plus, 1.0):
        return 1
    if plus <= tol * max(minus, 1.0):
        return -1
    raise MixedParity(f"state has weight {plus:.3e} (even) and {minus:.3e} (odd)")


def restrict(rho: np.ndarray, sector: int) -> np.ndarray:
    """The 8 x 8 block of ``P rho P`` on the given sector."""
    idx = theta(sector).indices
    return np.asarray(rho, dtype=complex)[np.ix_(idx, idx)]


def operator_sector(rho: np.ndarray) -> int:
    """Sector supporting a 16 x 16 operator; :class:`MixedSector` if both carry weight."""
    rho = np.asarray(rho)
    scale = max(float(np.max(np.abs(rho), initial=0.0)), 1e-300)
    tol = get_tolerances().structural
    plus = np.max(np.abs(restrict(rho, 1)), initial=0.0) / scale
    minus = np.max(np.abs(restrict(rho, -1)), initial=0.0) / scale
    if minus <= tol:
        return 1
    if plus <= tol:
        return -1
    raise MixedSector("operator is supported in both parity sectors")


def _sector_block(rho: np.ndarray, sector: int | None) -> tuple[np.ndarray, int]:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape == (SECTOR_DIM, SECTOR_DIM):
        if sector is None:
            raise ValueError("sector must be given for an 8 x 8 block")
        return rho, sector
    if rho.shape != (DIM, DIM):
        raise WrongModeCount(f"expected a four-mode operator, got shape {rho.shape}")
    found = operator_sector(rho)
    if sector is not None and sector != found:
        raise WrongSector(f"operator is supported in sector {found:+d}, not {sector:+d}")
    return restrict(rho, found), found


def _psd_factor(block: np.ndarray) -> np.ndarray:
    """``W`` with ``block = W W^dag`` and orthogonal columns, numerically zero directions dropped."""
    w, v = eigh(block)
    tol = get_tolerances()
    if w[0] < -tol.psd_clip:
        raise NotPSD(f"operator has eigenvalue {w[0]:.3e}")
    top = max(float(w[-1]), 0.0)
    keep = w > tol.rank * top if top > 0 else np.zeros_like(w, dtype=bool)
    return v[:, keep] * np.sqrt(w[keep])


# --- concurrences ------------------------------------------------------------

def concurrence_pure(psi: np.ndarray) -> float:
    """``|<psi|theta psi>|`` for a normalized four-mode state of definite parity."""
    psi = np.asarray(psi, dtype=complex)
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > get_tolerances().structural:
        raise ValueError(f"state is not normalized (norm {norm!r})")
    pure_sector(psi)
    return float(abs(np.vdot(psi, theta_full() @ psi.conj())))


def concurrence_spectrum(rho: np.ndarray, sector: int | None = None) -> np.ndarray:
    """Non-increasing ``l_1 >= ... >= l_8``: square roots of the eigenvalues of ``rho theta rho theta``.

    Computed as the singular values of ``<w_i|theta w_j>`` for the eigen-factor
    ``rho = W W^dag``, which equal those eigenvalue square roots without
    squaring small numbers.
    """
    block, sector = _sector_block(rho, sector)
    w = _psd_factor(block)
    tau = w.conj().T @ theta(sector).matrix @ w.conj()
    lam = np.zeros(SECTOR_DIM)
    if tau.size:
        sv = np.linalg.svd(tau, compute_uv=False)
        lam[: sv.size] = sv
    return lam


def concurrence_mixed(rho: np.ndarray, sector: int | None = None) -> tuple[float, np.ndarray]:
    """Generalized concurrence ``max(0, l_1 - sum_{k>=2} l_k)`` of a sector operator.

    ``rho`` is a PSD 16 x 16 operator supported in one sector, or its 8 x 8 block
    together with ``sector``.  It need not have unit trace.
    """
    lam = concurrence_spectrum(rho, sector)
    return max(0.0, float(lam[0] - lam[1:].sum())), lam


def preconcurrence(rho: np.ndarray, sector: int | None = None) -> float:
    """Signed ``l_1 - sum_{k>=2} l_k``; its zero crossing marks the convex-Gaussian boundary."""
    lam = concurrence_spectrum(rho, sector)
    return float(lam[0] - lam[1:].sum())


# --- decompositions ----------------------------------------------------------

@dataclass
class GaussianDecomposition:
    """Convex decomposition ``rho = sum_i p_i |psi_i><psi_i|`` into pure Gaussian states."""

    weights: np.ndarray
    states: list[np.ndarray]
    correlations: list[np.ndarray]
    sectors: list[int]

    def __len__(self) -> int:
        return len(self.weights)

    def mixture(self) -> np.ndarray:
        out = np.zeros((DIM, DIM), dtype=complex)
        for p, psi in zip(self.weights, self.states):
            out += p * np.outer(psi, psi.conj())
        return out

    def max_residual(self) -> float:
        return max((gaussian_residual(m) for m in self.correlations), default=0.0)

    def scaled(self, factor: float) -> GaussianDecomposition:
        return GaussianDecomposition(
            np.asarray(self.weights) * factor, list(self.states), list(self.correlations), list(self.sectors)
        )

    @staticmethod
    def merge(*parts: GaussianDecomposition) -> GaussianDecomposition:
        return GaussianDecomposition(
            np.concatenate([np.asarray(p.weights, dtype=float) for p in parts]) if parts else np.zeros(0),
            [s for p in parts for s in p.states],
            [m for p in parts for m in p.correlations],
            [s for p in parts for s in p.sectors],
        )


@dataclass
class ConcurrenceCertificate:
    """Proof of non-convex-Gaussianity of a sector state.

    Carries the concurrence of the normalized sector state, the ``l`` spectrum
    of the unnormalized block and an optimal decomposition whose components all
    have concurrence ``concurrence``.
    """

    sector: int
    concurrence: float
    spectrum: np.ndarray
    weights: np.ndarray
    states: list[np.ndarray]

    def mixture(self) -> np.ndarray:
        return sum(p * np.outer(s, s.conj()) for p, s in zip(self.weights, self.states))


@functools.lru_cache(maxsize=None)
def sylvester_hadamard(n: int) -> np.ndarray:
    if n < 1 or n & (n - 1):
        raise ValueError(f"Sylvester Hadamard matrices exist for powers of two, got {n}")
    h = np.ones((1, 1))
    while h.shape[0] < n:
        h = np.block([[h, h], [h, -h]])
    h.flags.writeable = False
    return h


def balance_phases(lengths: np.ndarray) -> np.ndarray:
    """Unit complex numbers ``z`` with ``sum z_j lengths_j = 0``.

    ``lengths`` must be non-increasing with ``lengths[0] <= sum(lengths[1:])``.
    The tail is split greedily into two groups whose sums ``B`` and ``C``
    differ by at most ``lengths[0]``; every member of a group shares one
    direction, which reduces the closure to a triangle with sides
    ``lengths[0], B, C``.
    """
    lengths = np.asarray(lengths, dtype=float)
    z = np.ones(lengths.size, dtype=complex)
    if lengths.size == 0 or lengths[0] <= 0:
        return z
    a = lengths[0]
    groups = ([], [])
    sums = [0.0, 0.0]
    for j in range(1, lengths.size):
        g = 0 if sums[0] <= sums[1] else 1
        groups[g].append(j)
        sums[g] += lengths[j]
    b, c = sums
    if b > 0:
        cos_beta = np.clip((c * c - a * a - b * b) / (2 * a * b), -1.0, 1.0)
        zb = np.exp(1j * np.arccos(cos_beta))
    else:
        zb = 1.0
    rest = -(a + b * zb)
    zc = rest / abs(rest) if abs(rest) > 0 else -1.0
    z[groups[0]] = zb
    z[groups[1]] = zc
    return z


def _zero_diagonal_rotation(b: np.ndarray) -> np.ndarray:
    """Orthogonal ``O`` with ``diag(O B O^T) = 0`` for a real symmetric traceless ``B``."""
    n = b.shape[0]
    o = np.eye(n)
    scale = max(float(np.max(np.abs(b), initial=0.0)), 1e-300)
    for _ in range(4 * n):
        cur = o @ b @ o.T
        diag = np.diag(cur)
        i, j = int(np.argmax(diag)), int(np.argmin(diag))
        if diag[i] <= 1e-15 * scale or diag[j] >= -1e-15 * scale:
            break
        p, q, s = cur[i, i], cur[i, j], cur[j, j]
        t = (-q - np.sqrt(q * q - p * s)) / s
        cth = 1.0 / np.hypot(1.0, t)
        sth = t * cth
        oi, oj = o[i].copy(), o[j].copy()
        o[i], o[j] = cth * oi + sth * oj, -sth * oi + cth * oj
    return o


def _embed(vec: np.ndarray, sector: int) -> np.ndarray:
    out = np.zeros(DIM, dtype=complex)
    out[theta(sector).indices] = vec
    return out


def optimal_decomposition(
    rho: np.ndarray, sector: int | None = None
) -> GaussianDecomposition | ConcurrenceCertificate:
    """Optimal convex-roof decomposition of a sector state.

    If the state is convex-Gaussian the result is a :class:`GaussianDecomposition`
    of ``rho / tr(rho)`` with at most eight components.  Otherwise a
    :class:`ConcurrenceCertificate` is returned whose components all share the
    state's concurrence.
    """
    block, sector = _sector_block(rho, sector)
    tol = get_tolerances()
    tr = float(np.trace(block).real)
    if tr <= 0:
        raise ValueError("sector block has zero trace")
    th = theta(sector)
    w = _psd_factor(block / tr)
    tau = w.conj().T @ th.matrix @ w.conj()
    u, d = takagi(tau)
    x = w @ u  # <x_i|theta x_j> = delta_ij d_i
    conc = float(d[0] - d[1:].sum())

    if conc * tr <= tol.verdict:
        if d[0] <= 1e-13:
            y = x
        else:
            n = 1 << (x.shape[1] - 1).bit_length()
            x = np.hstack([x, np.zeros((SECTOR_DIM, n - x.shape[1]))])
            dd = np.concatenate([d, np.zeros(n - d.size)])
            z = balance_phases(dd)
            x = x * np.exp(-0.5j * np.angle(z))  # <x'_j|theta x'_j> = z_j d_j
            y = x @ sylvester_hadamard(n).T / np.sqrt(n)
        return _gaussian_components(y, sector)

    # equal-concurrence decomposition: z_1 = x_1, z_j = i x_j, then a real rotation
    zv = x * np.where(np.arange(x.shape[1]) == 0, 1.0, 1j)
    signed = np.where(np.arange(d.size) == 0, d, -d)
    gram = (zv.conj().T @ zv).real
    o = _zero_diagonal_rotation(np.diag(signed) - conc * gram)
    y = zv @ o.T
    norms = np.sum(np.abs(y) ** 2, axis=0)
    keep = norms > 1e-15
    states = [_embed(y[:, k] / np.sqrt(norms[k]), sector) for k in np.flatnonzero(keep)]
    return ConcurrenceCertificate(
        sector=sector,
        concurrence=conc,
        spectrum=concurrence_spectrum(block, sector),
        weights=norms[keep] / norms[keep].sum(),
        states=states,
    )


def _gaussian_components(y: np.ndarray, sector: int) -> GaussianDecomposition:
    norms = np.sum(np.abs(y) ** 2, axis=0)
    keep = np.flatnonzero(norms > 1e-15)
    states = [_embed(y[:, k] / np.sqrt(norms[k]), sector) for k in keep]
    weights = norms[keep] / norms[keep].sum()
    corr = [fock.correlation_from_state(s) for s in states]
    return GaussianDecomposition(weights, states, corr, [sector] * len(states))


# --- pure-state geometry -----------------------------------------------------

@dataclass
class SchmidtDecomposition:
    """``psi' = sqrt(1-a^2) psi1 + i a psi2 = sqrt(1-p^2) psi_g + p theta psi_g``.

    ``psi' = exp(i phase) psi`` is the input with the phase that makes
    ``<psi'|theta psi'>`` real and non-negative.
    """

    a: float
    psi1: np.ndarray
    psi2: np.ndarray
    psi_gauss: np.ndarray
    p: float
    phase: float
    rotated: np.ndarray = field(repr=False)

    @property
    def concurrence(self) -> float:
        return 1.0 - 2.0 * self.a**2


def _theta_real_complement(psi1: np.ndarray, th: ThetaMap) -> np.ndarray:
    best, best_norm = None, -1.0
    for k in range(SECTOR_DIM):
        e = np.zeros(SECTOR_DIM, dtype=complex)
        e[k] = 1.0
        for cand in ((e + th.apply(e)) / 2, (e - th.apply(e)) / 2j):
            cand = cand - psi1 * np.vdot(psi1, cand).real
            nrm = np.linalg.norm(cand)
            if nrm > best_norm:
                best, best_norm = cand, nrm
    return best / best_norm


def _schmidt_sector(vec: np.ndarray, sector: int) -> SchmidtDecomposition:
    th = theta(sector)
    overlap = np.vdot(vec, th.apply(vec))
    phase = 0.5 * float(np.angle(overlap)) if abs(overlap) > 1e-15 else 0.0
    rotated = np.exp(1j * phase) * vec
    u = (rotated + th.apply(rotated)) / 2
    v = (rotated - th.apply(rotated)) / 2j
    a = float(np.linalg.norm(v))
    psi1 = u / np.linalg.norm(u)
    psi1 = (psi1 + th.apply(psi1)) / 2
    psi1 /= np.linalg.norm(psi1)
    if a > 1e-12:
        psi2 = v / a
        psi2 = (psi2 + th.apply(psi2)) / 2
        psi2 = psi2 - psi1 * np.vdot(psi1, psi2).real
        psi2 /= np.linalg.norm(psi2)
    else:
        psi2 = _theta_real_complement(psi1, th)
    a = min(a, np.sqrt(0.5))
    psi_g = (psi1 + 1j * psi2) / np.sqrt(2)
    p = (np.sqrt(1 - a * a) - a) / np.sqrt(2)
    return SchmidtDecomposition(
        a=a,
        psi1=_embed(psi1, sector),
        psi2=_embed(psi2, sector),
        psi_gauss=_embed(psi_g, sector),
        p=float(p),
        phase=phase,
        rotated=_embed(rotated, sector),
    )


def schmidt_pure(psi: np.ndarray) -> SchmidtDecomposition:
    """Orbit and generalized Schmidt decomposition of a normalized even four-mode state.

    ``psi1`` and ``psi2`` are orthonormal and fixed by ``theta``; ``psi_gauss``
    is Gaussian and ``<psi_gauss|theta psi_gauss> = 0``.
    """
    psi = np.asarray(psi, dtype=complex)
    if pure_sector(psi) != 1:
        raise WrongSector("Schmidt decomposition is defined on the even sector")
    return _schmidt_sector(psi[theta(1).indices], 1)


# --- fidelity geometry -------------------------------------------------------

def uhlmann_fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """``(tr sqrt(sqrt(rho) sigma sqrt(rho)))**2``, evaluated as the squared nuclear norm of ``A^dag B``."""
    a, b = _psd_factor(np.asarray(rho)), _psd_factor(np.asarray(sigma))
    if a.size == 0 or b.size == 0:
        return 0.0
    return float(np.linalg.svd(a.conj().T @ b, compute_uv=False).sum() ** 2)


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    w = np.linalg.eigvalsh(np.asarray(rho) - np.asarray(sigma))
    return 0.5 * float(np.abs(w).sum())


def _single_sector_state(rho: np.ndarray, sector: int) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (DIM, DIM):
        raise WrongModeCount(f"expected a four-mode operator, got shape {rho.shape}")
    other = restrict(rho, -sector)
    if np.max(np.abs(other), initial=0.0) > get_tolerances().structural:
        raise WrongSector(f"state has support outside sector {sector:+d}")
    return restrict(rho, sector)


def fidelity_gauss(rho: np.ndarray, sector: int = 1) -> float:
    """Maximal Uhlmann fidelity with a convex-Gaussian state, ``1/2 + sqrt(1 - C^2)/2``."""
    block = _single_sector_state(rho, sector)
    conc, _ = concurrence_mixed(block / np.trace(block).real, sector)
    # sqrt(1 - C^2) turns roundoff in C ~ 1 into ~1e-8; treat 64 ulp as exact
    if conc >= 1.0 - 64 * np.finfo(float).eps:
        conc = 1.0
    return 0.5 + 0.5 * np.sqrt(1.0 - conc * conc)


def distance_bounds(rho: np.ndarray, sector: int = 1) -> tuple[float, float]:
    """Fuchs-van de Graaf bounds on the trace distance to the convex-Gaussian set."""
    f = fidelity_gauss(rho, sector)
    return float(1.0 - np.sqrt(f)), float(np.sqrt(max(0.0, 1.0 - f)))


def nearest_convex_gaussian(rho: np.ndarray, sector: int = 1) -> np.ndarray:
    """A convex-Gaussian state attaining :func:`fidelity_gauss` for a single-sector ``rho``.

    Each component of the equal-concurrence decomposition is replaced by the
    Gaussian state of its generalized Schmidt decomposition.
    """
    block = _single_sector_state(rho, sector)
    rho = np.asarray(rho, dtype=complex) / np.trace(block).real
    result = optimal_decomposition(rho, sector)
    if isinstance(result, GaussianDecomposition):
        return result.mixture()
    sigma = np.zeros((DIM, DIM), dtype=complex)
    for p, s in zip(result.weights, result.states):
        g = _schmidt_sector(s[theta(sector).indices], sector).psi_gauss
        sigma += p * np.outer(g, g.conj())
    return sigma


# --- full certification ------------------------------------------------------

@dataclass
class CertificateReport:
    c_plus: float
    c_minus: float
    is_convex_gaussian: bool
    spectrum_plus: np.ndarray
    spectrum_minus: np.ndarray
    trace_plus: float
    trace_minus: float
    tolerance: float
    f_gauss: float | None = None
    distance_lower: float | None = None
    distance_upper: float | None = None
    decomposition: GaussianDecomposition | None = None
    certificates: list[ConcurrenceCertificate] = field(default_factory=list)


def certify(rho: np.ndarray, decompose: bool = False, tol: float | None = None) -> CertificateReport:
    """Decide convex-Gaussianity of an even four-mode density operator (or pure state).

    The verdict holds iff both sector concurrences are at most ``tol``
    (default: the verdict tolerance).  Fidelity and distance bounds are
    reported for states supported in a single sector.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim == 1:
        rho = np.outer(rho, rho.conj())
    if rho.shape[0] != DIM:
        raise WrongModeCount(f"certification needs four modes, got {fock.mode_count(rho.shape[0])}")
    rho = fock.validate_density(rho)
    settings = get_tolerances()
    tol = settings.verdict if tol is None else tol

    blocks = {s: restrict(rho, s) for s in (1, -1)}
    traces = {s: float(np.trace(blocks[s]).real) for s in (1, -1)}
    conc, spec = {}, {}
    for s in (1, -1):
        conc[s], spec[s] = concurrence_mixed(blocks[s], s)

    report = CertificateReport(
        c_plus=conc[1],
        c_minus=conc[-1],
        is_convex_gaussian=max(conc[1], conc[-1]) <= tol,
        spectrum_plus=spec[1],
        spectrum_minus=spec[-1],
        trace_plus=traces[1],
        trace_minus=traces[-1],
        tolerance=tol,
    )
    for s in (1, -1):
        if traces[-s] <= settings.structural:
            report.f_gauss = fidelity_gauss(rho, s)
            report.distance_lower, report.distance_upper = distance_bounds(rho, s)
            break

    if decompose:
        parts = []
        for s in (1, -1):
            if traces[s] <= settings.structural:
                continue
            res = optimal_decomposition(blocks[s], s)
            if isinstance(res, GaussianDecomposition):
                parts.append(res.scaled(traces[s]))
            else:
                report.certificates.append(res)
        if not report.certificates:
            merged = GaussianDecomposition.merge(*parts)
            merged.weights = merged.weights / merged.weights.sum()
            report.decomposition = merged
    return report


def direct_sum_sectors(block_plus: np.ndarray, block_minus: np.ndarray) -> np.ndarray:
    """Assemble a 16 x 16 operator from its even and odd 8 x 8 blocks."""
    out = np.zeros((DIM, DIM), dtype=complex)
    ip, im = theta(1).indices, theta(-1).indices
    out[np.ix_(ip, ip)] = block_plus
    out[np.ix_(im, im)] = block_minus
    return out


__all__ = [
    "CertificateReport",
    "ConcurrenceCertificate",
    "GaussianDecomposition",
    "SchmidtDecomposition",
    "ThetaMap",
    "balance_phases",
    "certify",
    "concurrence_mixed",
    "concurrence_pure",
    "concurrence_spectrum",
    "distance_bounds",
    "fidelity_gauss",
    "nearest_convex_gaussian",
    "optimal_decomposition",
    "preconcurrence",
    "schmidt_pure",
    "sylvester_hadamard",
    "theta",
    "theta_full",
    "trace_distance",
    "uhlmann_fidelity",
]
