import numpy as np
import pytest

from convexflo import fock, gaussian


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_hermitian(n, rng):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2


def random_psd(n, rng, rank=None):
    g = rng.standard_normal((n, rank or n)) + 1j * rng.standard_normal((n, rank or n))
    return g @ g.conj().T


def random_even_density(rng, d=4, rank=None):
    """Random density operator commuting with parity."""
    rho = random_psd(1 << d, rng, rank)
    plus, minus = fock.parity_projectors(d)
    rho = plus @ rho @ plus + minus @ rho @ minus
    return rho / np.trace(rho).real


def random_even_pure(rng, d=4):
    psi = np.zeros(1 << d, dtype=complex)
    idx = fock.sector_indices(d, 1)
    psi[idx] = rng.standard_normal(idx.size) + 1j * rng.standard_normal(idx.size)
    return psi / np.linalg.norm(psi)


def random_gaussian_pure(rng, d=4, parity=1):
    return gaussian.gaussian_state_vector(gaussian.random_pure_gaussian(d, rng, parity))


def random_gaussian_mixture(rng, k, d=4, parities=(1, -1)):
    weights = rng.dirichlet(np.ones(k))
    rho = np.zeros((1 << d, 1 << d), dtype=complex)
    for w in weights:
        psi = random_gaussian_pure(rng, d, int(rng.choice(parities)))
        rho += w * fock.projector(psi)
    return rho


# --- acceptance summary --------------------------------------------------------

ACCEPTANCE: dict[int, list[tuple[str, bool, str]]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[number]
        ok = all(passed for _, passed, _ in checks)
        failed = [f"{label}: {detail}" for label, passed, detail in checks if not passed]
        names = ", ".join(label for label, _, _ in checks)
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({names})"
        if failed:
            line += " | " + "; ".join(failed)
        terminalreporter.write_line(line)
