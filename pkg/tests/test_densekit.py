import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convexflo import densekit
from convexflo.errors import NotAntisymmetric, NotHermitian, NotPSD, NotSymmetric, OutOfRange

from conftest import random_hermitian, random_psd


def test_eigh_identity_and_diagonal():
    w, v = densekit.eigh(np.eye(8))
    assert np.allclose(w, 1)
    assert np.allclose(v @ v.conj().T, np.eye(8))
    w, _ = densekit.eigh(np.diag([3.0, 1.0]))
    assert np.allclose(w, [1, 3])


@pytest.mark.parametrize("n", [2, 8, 16])
def test_eigh_reconstruction(rng, n):
    for _ in range(20):
        h = random_hermitian(n, rng)
        w, v = densekit.eigh(h)
        assert np.all(np.diff(w) >= 0)
        assert np.linalg.norm(v @ np.diag(w) @ v.conj().T - h) <= 1e-10
        assert np.abs(v.conj().T @ v - np.eye(n)).max() <= 1e-10


def test_eigh_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        densekit.eigh(np.array([[0, 1], [0, 0]], dtype=complex))


def test_sqrt_psd_examples():
    assert np.allclose(densekit.sqrt_psd(np.eye(3)), np.eye(3))
    assert np.allclose(densekit.sqrt_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))


@pytest.mark.parametrize("n", [2, 8, 16])
def test_sqrt_psd_squares_back(rng, n):
    for _ in range(100):
        a = random_psd(n, rng, rank=int(rng.integers(1, n + 1)))
        b = densekit.sqrt_psd(a)
        assert densekit.hermitian_defect(b) <= 1e-10
        assert np.linalg.norm(b @ b - a) <= 1e-9 * max(1.0, np.linalg.norm(a))


def test_sqrt_psd_clips_roundoff_and_rejects_negative():
    b = densekit.sqrt_psd(np.diag([1.0, -1e-12]))
    assert np.allclose(b, np.diag([1.0, 0.0]))
    with pytest.raises(NotPSD):
        densekit.sqrt_psd(np.diag([1.0, -1e-6]))


def test_takagi_diagonal():
    u, d = densekit.takagi(np.diag([0.7, 0.3]))
    assert np.allclose(d, [0.7, 0.3])
    assert np.allclose(u @ np.diag(d) @ u.T, np.diag([0.7, 0.3]))


def test_takagi_swap():
    s = np.array([[0, 1], [1, 0]], dtype=complex)
    u, d = densekit.takagi(s)
    assert np.allclose(d, [1, 1])
    assert np.abs(u @ np.diag(d) @ u.T - s).max() <= 1e-12


@pytest.mark.parametrize("n", [1, 3, 8])
def test_takagi_random(rng, n):
    for _ in range(100):
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        s = a + a.T
        u, d = densekit.takagi(s)
        assert np.linalg.norm(u @ np.diag(d) @ u.T - s) <= 1e-9
        assert np.abs(u.conj().T @ u - np.eye(n)).max() <= 1e-10
        assert np.allclose(d, np.linalg.svd(s, compute_uv=False), atol=1e-9)


def test_takagi_rank_deficient(rng):
    v = rng.standard_normal((6, 2)) + 1j * rng.standard_normal((6, 2))
    s = v @ np.diag([2.0, 0.5]) @ v.T
    u, d = densekit.takagi(s)
    assert np.linalg.norm(u @ np.diag(d) @ u.T - s) <= 1e-9
    assert np.abs(d[2:]).max() <= 1e-12
    assert np.abs(u.conj().T @ u - np.eye(6)).max() <= 1e-10


def test_takagi_rejects_nonsymmetric():
    with pytest.raises(NotSymmetric):
        densekit.takagi(np.array([[0, 1], [2, 0]], dtype=complex))


def test_expm_antisym_examples():
    assert np.allclose(densekit.expm_antisym(np.zeros((4, 4))), np.eye(4))
    phi = 0.37
    r = densekit.expm_antisym(np.array([[0, phi], [-phi, 0]]))
    assert np.allclose(r, [[np.cos(phi), np.sin(phi)], [-np.sin(phi), np.cos(phi)]])
    with pytest.raises(NotAntisymmetric):
        densekit.expm_antisym(np.eye(2))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-3, 3), st.floats(-3, 3))
def test_expm_antisym_group_law(seed, s, t):
    a = np.random.default_rng(seed).standard_normal((8, 8))
    h = a - a.T
    r = densekit.expm_antisym(h, s + t)
    assert np.abs(r @ r.T - np.eye(8)).max() <= 1e-10
    assert abs(np.linalg.det(r) - 1) <= 1e-8
    assert np.abs(r - densekit.expm_antisym(h, s) @ densekit.expm_antisym(h, t)).max() <= 1e-9


def test_random_orthogonal_properties():
    r = densekit.random_orthogonal(2, np.random.default_rng(1))
    assert np.abs(r @ r.T - np.eye(2)).max() <= 1e-10
    a = densekit.random_orthogonal(8, np.random.default_rng(5))
    b = densekit.random_orthogonal(8, np.random.default_rng(5))
    assert np.array_equal(a, b)
    assert abs(np.linalg.det(a) - 1) <= 1e-10
    with pytest.raises(OutOfRange):
        densekit.random_orthogonal(3, np.random.default_rng(0))


def test_random_orthogonal_mean_vanishes():
    rng = np.random.default_rng(11)
    samples = np.array([densekit.random_orthogonal(8, rng) for _ in range(1000)])
    mean = samples.mean(axis=0)
    stderr = samples.std(axis=0) / np.sqrt(len(samples))
    assert np.all(np.abs(mean) <= 5 * stderr)
