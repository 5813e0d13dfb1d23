import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convexflo import certifier, fock, gaussian
from convexflo.errors import MixedParity, MixedSector, NotPSD, WrongModeCount, WrongSector

from conftest import (
    random_even_density,
    random_even_pure,
    random_gaussian_mixture,
    random_gaussian_pure,
)


def sector_density(rng, sector=1, rank=None):
    rho = random_even_density(rng, rank=rank)
    block = certifier.restrict(rho, sector)
    zero = np.zeros((8, 8))
    full = certifier.direct_sum_sectors(block, zero) if sector == 1 else certifier.direct_sum_sectors(zero, block)
    return full / np.trace(block).real


def full_theta(vec):
    return certifier.theta_full() @ np.conj(vec)


# --- theta -------------------------------------------------------------------

def test_theta_fixes_vacuum_to_full():
    assert np.allclose(full_theta(fock.vacuum(4)), fock.basis_state((1, 1, 1, 1)))


def test_theta_sign_on_pair_state():
    assert np.allclose(full_theta(fock.basis_state((1, 1, 0, 0))), -fock.basis_state((0, 0, 1, 1)))


@pytest.mark.parametrize("sector", [1, -1])
def test_theta_is_involution(sector):
    th = certifier.theta(sector)
    assert np.abs(th.matrix @ th.matrix.conj() - np.eye(8)).max() <= 1e-12
    assert np.array_equal(np.abs(th.matrix), np.abs(th.matrix).astype(bool).astype(float))


@pytest.mark.parametrize("sector", [1, -1])
def test_theta_commutes_with_quadratic_monomials(sector):
    c = fock.majoranas(4)
    th = certifier.theta(sector)
    for i, j in itertools.combinations(range(8), 2):
        x = certifier.restrict(c[i] @ c[j], sector)
        assert np.abs(th.conjugate(x) - x).max() <= 1e-12


def test_theta_agrees_with_annihilator_pairs():
    # a_k a_l theta = theta a_k^dag a_l^dag on the vacuum fixes every even sign
    a = [fock.annihilation(k, 4) for k in range(1, 5)]
    full = fock.basis_state((1, 1, 1, 1))
    for k, l in itertools.combinations(range(4), 2):
        lhs = a[k] @ a[l] @ full
        rhs = full_theta(a[k].T @ a[l].T @ fock.vacuum(4))
        assert np.allclose(lhs, rhs)


def test_theta_sign_table():
    for index in range(16):
        n = bin(index).count("1")
        expected = (-1) ** (n // 2) * certifier.reordering_sign(index)
        assert certifier.theta_sign(index) == expected


def test_literal_floor_rule_breaks_commutation():
    # the bare (-1)^floor(N/2) table (no reordering sign) is not c_i c_j invariant
    idx = certifier.theta(1).indices
    v = np.zeros((8, 8))
    pos = {int(i): k for k, i in enumerate(idx)}
    for k, i in enumerate(idx):
        v[pos[15 ^ int(i)], k] = (-1) ** (bin(int(i)).count("1") // 2)
    c = fock.majoranas(4)
    worst = max(
        np.abs(v @ certifier.restrict(c[i] @ c[j], 1).conj() @ v.T - certifier.restrict(c[i] @ c[j], 1)).max()
        for i, j in itertools.combinations(range(8), 2)
    )
    assert worst > 1


@pytest.mark.parametrize("sector", [1, -1])
def test_theta_conjugation_is_tilde(rng, sector):
    th = certifier.theta(sector)
    for _ in range(100):
        rho = sector_density(rng, sector)
        block = certifier.restrict(fock.tilde(rho), sector)
        assert np.abs(th.conjugate(certifier.restrict(rho, sector)) - block).max() <= 1e-10


def test_theta_apply_shapes():
    th = certifier.theta(1)
    vec = np.arange(8) + 1j
    full = np.zeros(16, dtype=complex)
    full[th.indices] = vec
    assert np.allclose(th.apply(full)[th.indices], th.apply(vec))


# --- pure concurrence --------------------------------------------------------

def test_concurrence_pure_examples():
    assert certifier.concurrence_pure(fock.vacuum(4)) == 0
    assert abs(certifier.concurrence_pure(fock.a8_state()) - 1) <= 1e-12


def test_concurrence_pure_gaussian(rng):
    for parity in (1, -1):
        for _ in range(50):
            assert certifier.concurrence_pure(random_gaussian_pure(rng, 4, parity)) <= 1e-9


def test_concurrence_pure_rejects_mixed_parity():
    psi = (fock.vacuum(4) + fock.basis_state((1, 0, 0, 0))) / np.sqrt(2)
    with pytest.raises(MixedParity):
        certifier.concurrence_pure(psi)


def test_pure_concurrence_zero_iff_gaussian(rng):
    for _ in range(200):
        psi = random_gaussian_pure(rng)
        assert certifier.concurrence_pure(psi) <= 1e-8
        assert gaussian.is_gaussian_pure(fock.correlation_from_state(psi))[0]
    for _ in range(200):
        psi = random_even_pure(rng)
        gauss, _ = gaussian.is_gaussian_pure(fock.correlation_from_state(psi))
        assert gauss == (certifier.concurrence_pure(psi) <= 1e-8)


# --- mixed concurrence -------------------------------------------------------

def test_concurrence_mixed_depolarized_a8():
    for p in np.linspace(0, 1, 41):
        c, lam = certifier.concurrence_mixed(certifier.restrict(fock.depolarized_a8(p), 1), 1)
        assert abs(c - max(0.0, 1 - 11 * p / 8)) <= 1e-10
        assert np.all(np.diff(lam) <= 1e-15)


def test_concurrence_mixed_simple_cases(rng):
    proj = fock.projector(random_gaussian_pure(rng))
    assert certifier.concurrence_mixed(proj)[0] <= 1e-9
    plus, _ = fock.parity_projectors(4)
    c, lam = certifier.concurrence_mixed(plus / 8)
    assert c == 0 and np.allclose(lam, 1 / 8)


def test_concurrence_mixed_errors():
    with pytest.raises(MixedSector):
        certifier.concurrence_mixed(np.eye(16) / 16)
    with pytest.raises(NotPSD):
        certifier.concurrence_mixed(-np.eye(8), 1)
    with pytest.raises(WrongModeCount):
        certifier.concurrence_mixed(np.eye(4) / 4)


@pytest.mark.parametrize("sector", [1, -1])
def test_spectrum_matches_sqrt_route(rng, sector):
    # independent route: sqrt of eigenvalues of sqrt(rho) tilde(rho) sqrt(rho)
    for _ in range(30):
        rho = sector_density(rng, sector)
        root = certifier.restrict(fock.tilde(rho), sector)
        sq = np.linalg.cholesky(certifier.restrict(rho, sector))
        w = np.linalg.eigvalsh(sq.conj().T @ root @ sq)
        route = np.sqrt(np.clip(w, 0, None))[::-1]
        assert np.abs(certifier.concurrence_spectrum(rho) - route).max() <= 1e-9


def test_convex_roof_upper_bound(rng):
    for _ in range(100):
        k = int(rng.integers(1, 6))
        weights = rng.dirichlet(np.ones(k))
        states = [random_even_pure(rng) for _ in range(k)]
        rho = sum(w * fock.projector(s) for w, s in zip(weights, states))
        bound = sum(w * certifier.concurrence_pure(s) for w, s in zip(weights, states))
        assert bound >= certifier.concurrence_mixed(rho)[0] - 1e-9


def test_noise_response_monotone():
    values = [certifier.concurrence_mixed(certifier.restrict(fock.depolarized_a8(p), 1), 1)[0] for p in np.linspace(0, 1, 1000)]
    assert np.all(np.diff(values) <= 1e-12)


# --- certify -----------------------------------------------------------------

def test_certify_examples():
    rep = certifier.certify(fock.depolarized_a8(8 / 11))
    assert rep.c_plus <= 1e-10 and rep.c_minus == 0 and rep.is_convex_gaussian
    rep = certifier.certify(fock.depolarized_a8(0.5))
    assert abs(rep.c_plus - 0.3125) <= 1e-12 and not rep.is_convex_gaussian
    rep = certifier.certify(fock.projector(fock.vacuum(4)))
    assert rep.is_convex_gaussian and rep.c_plus == 0 and rep.c_minus == 0
    assert rep.f_gauss == 1.0 and rep.distance_lower == 0 and rep.distance_upper == 0


def test_certify_reports_bounds_only_for_single_sector():
    rep = certifier.certify(fock.depolarized_a8(0.2))
    assert rep.f_gauss is None and rep.distance_lower is None
    rep = certifier.certify(fock.a8_state())
    assert rep.f_gauss == 0.5
    assert rep.distance_lower <= rep.distance_upper


def test_certify_mode_count():
    with pytest.raises(WrongModeCount):
        certifier.certify(np.eye(4) / 4)


def test_certify_tolerance_override():
    rho = fock.depolarized_a8(0.7)
    c = certifier.certify(rho).c_plus
    assert not certifier.certify(rho).is_convex_gaussian
    assert certifier.certify(rho, tol=c).is_convex_gaussian


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 8))
def test_soundness_on_gaussian_mixtures(seed, k):
    rng = np.random.default_rng(seed)
    rho = random_gaussian_mixture(rng, k)
    rep = certifier.certify(rho, decompose=True)
    assert rep.c_plus <= 1e-8 and rep.c_minus <= 1e-8
    dec = rep.decomposition
    assert abs(dec.weights.sum() - 1) <= 1e-10
    assert np.all(dec.weights > 0)
    assert np.linalg.norm(dec.mixture() - rho) <= 1e-8
    assert dec.max_residual() <= 1e-8
    assert len(dec) <= 16
    for s in (1, -1):
        assert sum(1 for x in dec.sectors if x == s) <= 8


# --- decompositions ----------------------------------------------------------

def test_decomposition_of_gaussian_projector(rng):
    psi = random_gaussian_pure(rng)
    dec = certifier.optimal_decomposition(fock.projector(psi))
    assert len(dec) == 1
    assert np.isclose(dec.weights[0], 1)
    assert abs(np.vdot(dec.states[0], psi)) >= 1 - 1e-10


@pytest.mark.parametrize("p", [8 / 11, 0.75, 0.9, 1.0])
def test_decomposition_depolarized_a8(p):
    rho = fock.depolarized_a8(p)
    block = certifier.restrict(rho, 1)
    dec = certifier.optimal_decomposition(block, 1)
    assert isinstance(dec, certifier.GaussianDecomposition)
    assert len(dec) <= 8
    assert dec.max_residual() <= 1e-8
    target = certifier.direct_sum_sectors(block / np.trace(block).real, np.zeros((8, 8)))
    assert np.linalg.norm(dec.mixture() - target) <= 1e-8


def test_decomposition_of_five_gaussians(rng):
    rho = random_gaussian_mixture(rng, 5, parities=(1,))
    dec = certifier.optimal_decomposition(rho)
    assert np.linalg.norm(dec.mixture() - rho) <= 1e-8
    assert dec.max_residual() <= 1e-8


def test_equal_concurrence_certificate(rng):
    for _ in range(50):
        rho = sector_density(rng, 1, rank=int(rng.integers(1, 9)))
        c, _ = certifier.concurrence_mixed(rho)
        result = certifier.optimal_decomposition(rho)
        if c <= 1e-8:
            assert isinstance(result, certifier.GaussianDecomposition)
            continue
        assert isinstance(result, certifier.ConcurrenceCertificate)
        assert abs(result.concurrence - c) <= 1e-10
        for s in result.states:
            assert abs(certifier.concurrence_pure(s) - c) <= 1e-8
        assert np.linalg.norm(result.mixture() - rho) <= 1e-8


def test_balance_phases_closes_polygon():
    rng = np.random.default_rng(0)
    for _ in range(200):
        n = int(rng.integers(2, 9))
        d = np.sort(rng.random(n))[::-1]
        if d[0] > d[1:].sum():
            continue
        z = certifier.balance_phases(d)
        assert np.allclose(np.abs(z), 1)
        assert abs(np.sum(z * d)) <= 1e-12


def test_sylvester_hadamard():
    h = certifier.sylvester_hadamard(8)
    assert np.allclose(h @ h.T, 8 * np.eye(8))
    with pytest.raises(ValueError):
        certifier.sylvester_hadamard(6)


# --- Schmidt decomposition and fidelity ---------------------------------------

def check_schmidt(psi):
    res = certifier.schmidt_pure(psi)
    th = certifier.theta(1)
    assert abs(np.vdot(res.psi1, res.psi2)) <= 1e-10
    for vec in (res.psi1, res.psi2):
        assert np.abs(th.apply(vec) - vec).max() <= 1e-10
    assert gaussian.gaussian_residual(fock.correlation_from_state(res.psi_gauss)) <= 1e-8
    rec = np.sqrt(1 - res.p**2) * res.psi_gauss + res.p * th.apply(res.psi_gauss)
    assert np.linalg.norm(res.rotated - rec) <= 1e-9
    rec10 = np.sqrt(1 - res.a**2) * res.psi1 + 1j * res.a * res.psi2
    assert np.linalg.norm(res.rotated - rec10) <= 1e-9
    assert 0 <= res.a <= 1 / np.sqrt(2) + 1e-12
    assert abs(certifier.concurrence_pure(psi) - (1 - 2 * res.a**2)) <= 1e-9
    return res


def test_schmidt_gaussian_state(rng):
    psi = random_gaussian_pure(rng)
    res = check_schmidt(psi)
    assert abs(res.a - 1 / np.sqrt(2)) <= 1e-8
    assert abs(res.p) <= 1e-8
    assert abs(np.vdot(res.psi_gauss, psi)) >= 1 - 1e-9


def test_schmidt_a8():
    res = check_schmidt(fock.a8_state())
    assert res.a <= 1e-12
    assert abs(res.p - 1 / np.sqrt(2)) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_schmidt_random(seed):
    check_schmidt(random_even_pure(np.random.default_rng(seed)))


def test_schmidt_rejects_odd():
    with pytest.raises(WrongSector):
        certifier.schmidt_pure(fock.basis_state((1, 0, 0, 0)))


def test_fidelity_examples(rng):
    assert certifier.fidelity_gauss(fock.projector(fock.a8_state())) == 0.5
    lo, hi = certifier.distance_bounds(fock.projector(fock.a8_state()))
    assert np.isclose(lo, 1 - np.sqrt(0.5)) and np.isclose(hi, np.sqrt(0.5))
    g = fock.projector(random_gaussian_pure(rng))
    assert abs(certifier.fidelity_gauss(g) - 1) <= 1e-12
    assert np.allclose(certifier.distance_bounds(g), (0, 0), atol=1e-6)
    with pytest.raises(WrongSector):
        certifier.fidelity_gauss(np.eye(16) / 16)


def test_fidelity_of_pure_states_matches_schmidt(rng):
    for _ in range(50):
        psi = random_even_pure(rng)
        res = certifier.schmidt_pure(psi)
        f = certifier.fidelity_gauss(fock.projector(psi))
        assert abs(f - (1 - res.p**2)) <= 1e-9
        assert abs(f - abs(np.vdot(res.psi_gauss, psi)) ** 2) <= 1e-9


def test_nearest_state_attains_fidelity(rng):
    for _ in range(30):
        rho = sector_density(rng, 1, rank=int(rng.integers(1, 4)))
        sigma = certifier.nearest_convex_gaussian(rho)
        assert certifier.certify(sigma).is_convex_gaussian
        assert abs(certifier.uhlmann_fidelity(rho, sigma) - certifier.fidelity_gauss(rho)) <= 1e-8


def test_nearest_state_odd_sector(rng):
    rho = sector_density(rng, -1, rank=2)
    sigma = certifier.nearest_convex_gaussian(rho, sector=-1)
    assert certifier.certify(sigma).is_convex_gaussian
    assert abs(certifier.uhlmann_fidelity(rho, sigma) - certifier.fidelity_gauss(rho, -1)) <= 1e-8


def test_uhlmann_fidelity_basic(rng):
    psi, phi = random_even_pure(rng), random_even_pure(rng)
    f = certifier.uhlmann_fidelity(fock.projector(psi), fock.projector(phi))
    assert abs(f - abs(np.vdot(psi, phi)) ** 2) <= 1e-12
    rho = random_even_density(rng)
    assert abs(certifier.uhlmann_fidelity(rho, rho) - 1) <= 1e-10
