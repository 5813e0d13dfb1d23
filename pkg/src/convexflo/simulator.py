"""Adaptive fermionic-linear-optics circuits.

A circuit acts on ``d_comp`` computational modes followed by ``k`` copies of
an ``m``-mode ancilla.  Mode indices in instructions are 0-based over that
combined register.  Two interchangeable backends execute circuits:

* ``dense``: density matrix on the full Fock space (oracle, at most 6 modes);
* ``cov``: the correlation matrix, polynomial in the mode count.

Ancillas reach the ``cov`` backend through :func:`run_with_ancilla`, which
samples one pure Gaussian component per copy from the certified optimal
decomposition of the ancilla state.

Shot ``i`` of a sampling run with seed ``s`` uses the generator
``default_rng(SeedSequence(s, spawn_key=(i,)))``; results therefore do not
depend on how shots are distributed over workers.
"""
from __future__ import annotations

import functools
import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
import scipy.linalg

from . import fock, gaussian
from .certifier import GaussianDecomposition, certify
from .densekit import antisymmetry_defect
from .errors import (
    IndexOutOfRange,
    InvalidGuard,
    NotAntisymmetric,
    NotConvexGaussian,
    TooManyBranches,
    TooManyModes,
    WrongAncillaModes,
)
from .settings import get_tolerances

MAX_DENSE_MODES = 6
MAX_EXACT_MEASUREMENTS = 20
SKIPPED = "-"


# --- circuit description -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class Evolve:
    """Evolution under ``H = i sum_kl h_kl c_k c_l`` for time ``t``.

    ``h`` is indexed by the Majoranas of ``modes`` (``2 * len(modes)`` square,
    ordered ``c_{2j-1}, c_{2j}`` per listed mode) or of the whole register
    when ``modes`` is ``None``.
    """

    h: np.ndarray
    t: float
    modes: tuple[int, ...] | None = None

    def __post_init__(self):
        h = np.array(self.h, dtype=float)
        if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] % 2:
            raise ValueError(f"generator must be 2n x 2n, got shape {h.shape}")
        if antisymmetry_defect(h) > 1e-12:
            raise NotAntisymmetric("generator h must be antisymmetric")
        h.flags.writeable = False
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "t", float(self.t))
        if self.modes is not None:
            modes = tuple(int(m) for m in self.modes)
            if len(set(modes)) != len(modes):
                raise ValueError(f"repeated mode in {modes}")
            if 2 * len(modes) != h.shape[0]:
                raise ValueError(f"generator of size {h.shape[0]} does not match {len(modes)} modes")
            object.__setattr__(self, "modes", modes)

    def majorana_indices(self, total_modes: int) -> np.ndarray | None:
        if self.modes is None:
            if self.h.shape[0] != 2 * total_modes:
                raise ValueError(f"generator of size {self.h.shape[0]} does not match {total_modes} modes")
            return None
        return np.array([2 * m + s for m in self.modes for s in (0, 1)])

    @functools.cached_property
    def rotation(self) -> np.ndarray:
        return gaussian.rotation(self.h, self.t)

    @functools.cached_property
    def _unitaries(self) -> dict:
        return {}

    def unitary(self, total_modes: int) -> np.ndarray:
        """Dense ``exp(-i H t)`` on the full register."""
        cache = self._unitaries
        if total_modes not in cache:
            c = fock.majoranas(total_modes)
            idx = self.majorana_indices(total_modes)
            idx = np.arange(2 * total_modes) if idx is None else idx
            ham = 1j * np.einsum("kl,kab,lbc->ac", self.h, c[idx], c[idx])
            cache[total_modes] = scipy.linalg.expm(-1j * self.t * ham)
        return cache[total_modes]


@dataclass(frozen=True)
class Measure:
    """Occupation measurement of ``mode``.

    ``guard = (j, bit)`` makes the measurement conditional on the ``j``-th
    earlier measurement (counting Measure instructions from 0) having
    returned ``bit``.
    """

    mode: int
    guard: tuple[int, int] | None = None


@dataclass(frozen=True)
class Conditional:
    """Evolution executed only when an earlier measurement returned ``bit``."""

    op: Evolve
    guard: tuple[int, int]


Instruction = Union[Evolve, Measure, Conditional]


@dataclass(frozen=True, eq=False)
class Ancilla:
    """``copies`` independent copies of a ``modes``-mode even state (density matrix)."""

    state: np.ndarray
    copies: int = 1
    modes: int = 4
    source: str | None = None

    def __post_init__(self):
        rho = np.asarray(self.state, dtype=complex)
        if rho.ndim == 1:
            rho = fock.projector(rho)
        if rho.shape != (1 << self.modes,) * 2:
            raise WrongAncillaModes(f"ancilla state of shape {rho.shape} does not act on {self.modes} modes")
        if self.copies < 1:
            raise ValueError(f"ancilla copies must be positive, got {self.copies}")
        object.__setattr__(self, "state", fock.validate_density(rho))

    @functools.cached_property
    def report(self):
        return certify(self.state, decompose=True)


@dataclass(frozen=True, eq=False)
class Circuit:
    d_comp: int
    ops: tuple = ()
    ancilla: Ancilla | None = None

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        if self.d_comp < 0:
            raise ValueError(f"computational mode count must be non-negative, got {self.d_comp}")
        if self.total_modes < 1:
            raise ValueError("circuit has no modes")
        self.validate()

    @property
    def total_modes(self) -> int:
        extra = self.ancilla.copies * self.ancilla.modes if self.ancilla else 0
        return self.d_comp + extra

    @property
    def measurement_count(self) -> int:
        return sum(isinstance(op, Measure) for op in self.ops)

    def validate(self) -> None:
        n = self.total_modes
        seen = 0
        for pos, op in enumerate(self.ops):
            guard = getattr(op, "guard", None)
            if guard is not None:
                j, bit = guard
                if not 0 <= j < seen or bit not in (0, 1):
                    raise InvalidGuard(f"instruction {pos}: guard {guard} needs an earlier measurement and a bit")
            inner = op.op if isinstance(op, Conditional) else op
            if isinstance(inner, Measure):
                if not 0 <= inner.mode < n:
                    raise IndexOutOfRange(f"instruction {pos}: mode {inner.mode} outside 0..{n - 1}")
                seen += 1
            elif isinstance(inner, Evolve):
                if inner.modes is None:
                    inner.majorana_indices(n)
                elif not all(0 <= m < n for m in inner.modes):
                    raise IndexOutOfRange(f"instruction {pos}: modes {inner.modes} outside 0..{n - 1}")
            else:
                raise TypeError(f"instruction {pos}: unknown instruction {op!r}")


@dataclass
class RunRecord:
    """Outcome of one shot.

    ``outcomes[j]`` is ``None`` for a guarded measurement that was skipped;
    ``probabilities[j]`` is the conditional probability of the recorded bit.
    """

    outcomes: list[int | None]
    probabilities: list[float | None]
    final: np.ndarray
    backend: str
    seed: int | None = None

    @property
    def bitstring(self) -> str:
        return "".join(SKIPPED if s is None else str(s) for s in self.outcomes)

    @property
    def probability(self) -> float:
        return float(np.prod([p for p in self.probabilities if p is not None]))


# --- backends ----------------------------------------------------------------

class _DenseState:
    name = "dense"

    def __init__(self, rho: np.ndarray, total_modes: int):
        self.rho = rho
        self.n = total_modes

    def copy(self):
        return _DenseState(self.rho.copy(), self.n)

    def evolve(self, op: Evolve) -> None:
        u = op.unitary(self.n)
        self.rho = u @ self.rho @ u.conj().T

    def _empty(self, mode: int) -> np.ndarray:
        return (np.arange(1 << self.n) >> mode & 1) == 0

    def probability(self, mode: int, outcome: int) -> float:
        mask = self._empty(mode) if outcome == 0 else ~self._empty(mode)
        return float(min(1.0, max(0.0, np.diag(self.rho)[mask].real.sum())))

    def project(self, mode: int, outcome: int, prob: float) -> None:
        keep = self._empty(mode) if outcome == 0 else ~self._empty(mode)
        self.rho = np.where(np.outer(keep, keep), self.rho, 0.0) / prob

    @property
    def final(self) -> np.ndarray:
        return self.rho


class _CovState:
    name = "cov"

    def __init__(self, m: np.ndarray, project=gaussian.project_mode):
        self.m = m
        self._project = project

    def copy(self):
        return _CovState(self.m.copy(), self._project)

    def evolve(self, op: Evolve) -> None:
        idx = op.majorana_indices(self.m.shape[0] // 2)
        self.m = gaussian.rotate(self.m, op.rotation, idx)

    def probability(self, mode: int, outcome: int) -> float:
        return gaussian.outcome_probability(self.m, mode + 1, outcome)

    def project(self, mode: int, outcome: int, prob: float) -> None:
        self.m = self._project(self.m, mode + 1, outcome)

    @property
    def final(self) -> np.ndarray:
        return self.m


def _guard_holds(guard, outcomes) -> bool:
    return guard is None or outcomes[guard[0]] == guard[1]


def _sample_shot(circuit: Circuit, state, rng: np.random.Generator) -> tuple[list, list]:
    eps = get_tolerances().degenerate_outcome
    outcomes: list = []
    probs: list = []
    for op in circuit.ops:
        if isinstance(op, Measure):
            if not _guard_holds(op.guard, outcomes):
                outcomes.append(None)
                probs.append(None)
                continue
            p0 = state.probability(op.mode, 0)
            if p0 < eps:
                s = 1
            elif 1.0 - p0 < eps:
                s = 0
            else:
                s = 0 if rng.random() < p0 else 1
            p = p0 if s == 0 else 1.0 - p0
            state.project(op.mode, s, p)
            outcomes.append(s)
            probs.append(p)
        elif isinstance(op, Conditional):
            if _guard_holds(op.guard, outcomes):
                state.evolve(op.op)
        else:
            state.evolve(op)
    return outcomes, probs


def _enumerate(circuit: Circuit, state, weight: float = 1.0) -> dict[str, float]:
    """All branches with chain-rule probabilities (branches below the degenerate tolerance are dropped)."""
    if circuit.measurement_count > MAX_EXACT_MEASUREMENTS:
        raise TooManyBranches(
            f"{circuit.measurement_count} measurements exceed the exact-enumeration limit {MAX_EXACT_MEASUREMENTS}"
        )
    eps = get_tolerances().degenerate_outcome
    out: dict[str, float] = {}

    def walk(pos: int, st, outcomes: list, prob: float):
        while pos < len(circuit.ops):
            op = circuit.ops[pos]
            pos += 1
            if isinstance(op, Measure):
                if not _guard_holds(op.guard, outcomes):
                    outcomes = outcomes + [None]
                    continue
                for s in (0, 1):
                    p = st.probability(op.mode, s)
                    if p < eps:
                        continue
                    branch = st.copy()
                    branch.project(op.mode, s, p)
                    walk(pos, branch, outcomes + [s], prob * p)
                return
            if isinstance(op, Conditional):
                if _guard_holds(op.guard, outcomes):
                    st.evolve(op.op)
            else:
                st.evolve(op)
        key = "".join(SKIPPED if s is None else str(s) for s in outcomes)
        out[key] = out.get(key, 0.0) + prob

    walk(0, state, [], weight)
    return out


def dense_initial_state(circuit: Circuit) -> np.ndarray:
    n = circuit.total_modes
    if n > MAX_DENSE_MODES:
        raise TooManyModes(f"dense backend is limited to {MAX_DENSE_MODES} modes, circuit has {n}")
    parts = []
    if circuit.d_comp:
        parts.append(fock.projector(fock.vacuum(circuit.d_comp)))
    if circuit.ancilla is not None:
        parts.extend([circuit.ancilla.state] * circuit.ancilla.copies)
    return fock.tensor_modes(*parts)


def _as_rng(rng) -> tuple[np.random.Generator, int | None]:
    seed = int(rng) if isinstance(rng, (int, np.integer)) else None
    return np.random.default_rng(rng), seed


def run_dense(circuit: Circuit, rng=None) -> RunRecord:
    """Sample one shot on the dense density-matrix backend."""
    gen, seed = _as_rng(rng)
    state = _DenseState(dense_initial_state(circuit), circuit.total_modes)
    outcomes, probs = _sample_shot(circuit, state, gen)
    return RunRecord(outcomes, probs, state.final, "dense", seed)


def _cov_initial(circuit: Circuit, initial: np.ndarray | None) -> np.ndarray:
    n = circuit.total_modes
    if initial is None:
        if circuit.ancilla is not None:
            raise ValueError("circuit has an ancilla: sample it with run_with_ancilla or pass an initial correlation matrix")
        return gaussian.vacuum_correlation(n)
    initial = gaussian.validate_correlation(initial)
    if initial.shape[0] != 2 * n:
        raise ValueError(f"initial correlation matrix has size {initial.shape[0]}, expected {2 * n}")
    return initial.copy()


def run_cov(circuit: Circuit, rng=None, initial: np.ndarray | None = None, project=gaussian.project_mode) -> RunRecord:
    """Sample one shot on the correlation-matrix backend.

    ``initial`` replaces the vacuum, e.g. by a sampled ancilla component.
    """
    gen, seed = _as_rng(rng)
    state = _CovState(_cov_initial(circuit, initial), project)
    outcomes, probs = _sample_shot(circuit, state, gen)
    return RunRecord(outcomes, probs, state.final, "cov", seed)


# --- ancillas ----------------------------------------------------------------

def ancilla_decomposition(circuit: Circuit) -> GaussianDecomposition:
    """Certified Gaussian decomposition of the circuit's ancilla.

    Raises :class:`NotConvexGaussian` when certification fails.
    """
    anc = circuit.ancilla
    if anc is None:
        raise ValueError("circuit has no ancilla")
    if anc.modes != 4:
        raise WrongAncillaModes(f"convex-Gaussian certification needs 4-mode ancillas, got {anc.modes}")
    report = anc.report
    if not report.is_convex_gaussian:
        raise NotConvexGaussian(report.c_plus, report.c_minus)
    return report.decomposition


def _ancilla_initial(circuit: Circuit, components: Sequence[int], dec: GaussianDecomposition) -> np.ndarray:
    blocks = [gaussian.vacuum_correlation(circuit.d_comp)] if circuit.d_comp else []
    blocks.extend(dec.correlations[i] for i in components)
    return gaussian.direct_sum(*blocks)


def run_with_ancilla(circuit: Circuit, rng=None, project=gaussian.project_mode) -> RunRecord:
    """One shot with each ancilla copy replaced by an independently sampled Gaussian component."""
    gen, seed = _as_rng(rng)
    dec = ancilla_decomposition(circuit)
    picks = gen.choice(len(dec), size=circuit.ancilla.copies, p=dec.weights)
    state = _CovState(_ancilla_initial(circuit, picks, dec), project)
    outcomes, probs = _sample_shot(circuit, state, gen)
    return RunRecord(outcomes, probs, state.final, "cov", seed)


# --- distributions -----------------------------------------------------------

@dataclass
class Histogram:
    """Outcome bitstring -> probability (exact) or relative frequency (shots)."""

    probabilities: dict[str, float]
    backend: str
    shots: int | None = None
    seed: int | None = None
    counts: dict[str, int] | None = field(default=None)

    def sorted_items(self) -> list[tuple[str, float]]:
        return sorted(self.probabilities.items())


def shot_rng(seed: int, shot: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(shot,)))


def _run_one(circuit: Circuit, backend: str, rng, project) -> RunRecord:
    if backend == "dense":
        return run_dense(circuit, rng)
    if circuit.ancilla is not None:
        return run_with_ancilla(circuit, rng, project)
    return run_cov(circuit, rng, project=project)


def _shot_chunk(circuit: Circuit, backend: str, seed: int, shots: range, project) -> Counter:
    counts: Counter = Counter()
    for i in shots:
        counts[_run_one(circuit, backend, shot_rng(seed, i), project).bitstring] += 1
    return counts


def exact_distribution(circuit: Circuit, backend: str = "cov", project=gaussian.project_mode) -> dict[str, float]:
    if backend == "dense":
        init = dense_initial_state(circuit)
        if circuit.measurement_count > MAX_EXACT_MEASUREMENTS:
            raise TooManyBranches(f"{circuit.measurement_count} measurements exceed {MAX_EXACT_MEASUREMENTS}")
        return _enumerate(circuit, _DenseState(init, circuit.total_modes))
    if circuit.ancilla is None:
        return _enumerate(circuit, _CovState(gaussian.vacuum_correlation(circuit.total_modes), project))
    dec = ancilla_decomposition(circuit)
    total: dict[str, float] = {}
    for combo in itertools.product(range(len(dec)), repeat=circuit.ancilla.copies):
        w = float(np.prod([dec.weights[i] for i in combo]))
        branch = _enumerate(circuit, _CovState(_ancilla_initial(circuit, combo, dec), project), w)
        for key, p in branch.items():
            total[key] = total.get(key, 0.0) + p
    return total


def outcome_distribution(
    circuit: Circuit,
    backend: str = "cov",
    shots: int | None = None,
    seed: int | None = None,
    workers: int = 1,
    project: Callable = gaussian.project_mode,
) -> Histogram:
    """Exact branch distribution (``shots=None``) or a sampled histogram.

    Sampling with ``workers > 1`` splits the shot indices over processes; the
    per-shot seeds make the result identical to a sequential run.
    """
    if backend not in ("dense", "cov"):
        raise ValueError(f"unknown backend {backend!r}")
    if shots is None:
        return Histogram(exact_distribution(circuit, backend, project), backend)
    if shots < 1:
        raise ValueError(f"shots must be positive, got {shots}")
    seed = int(np.random.SeedSequence().entropy) if seed is None else int(seed)
    if backend == "dense":
        dense_initial_state(circuit)
    elif circuit.ancilla is not None:
        ancilla_decomposition(circuit)
    if workers > 1 and shots > 1:
        bounds = np.linspace(0, shots, workers + 1).astype(int)
        chunks = [range(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        counts: Counter = Counter()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_shot_chunk, circuit, backend, seed, ch, project) for ch in chunks]
            for fut in futures:
                counts.update(fut.result())
    else:
        counts = _shot_chunk(circuit, backend, seed, range(shots), project)
    probs = {k: v / shots for k, v in counts.items()}
    return Histogram(probs, backend, shots, seed, dict(counts))


def total_variation(p: dict[str, float], q: dict[str, float]) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def max_branch_discrepancy(p: dict[str, float], q: dict[str, float]) -> float:
    keys = set(p) | set(q)
    return max((abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys), default=0.0)


def random_circuit(
    d_comp: int,
    depth: int,
    rng: np.random.Generator,
    ancilla: Ancilla | None = None,
    measure_fraction: float = 0.3,
    guard_fraction: float = 0.3,
    local: bool = False,
) -> Circuit:
    """Random adaptive circuit; evolutions act on all modes or, with ``local``, on two random modes."""
    n = d_comp + (ancilla.copies * ancilla.modes if ancilla else 0)
    ops: list = []
    measured = 0
    for _ in range(depth):
        guard = None
        if measured and rng.random() < guard_fraction:
            guard = (int(rng.integers(measured)), int(rng.integers(2)))
        if rng.random() < measure_fraction:
            ops.append(Measure(int(rng.integers(n)), guard))
            measured += 1
            continue
        if local and n >= 2:
            modes = tuple(int(x) for x in rng.choice(n, size=2, replace=False))
        else:
            modes = None
        size = 2 * (len(modes) if modes else n)
        a = rng.standard_normal((size, size))
        op = Evolve(a - a.T, float(rng.uniform(0.05, 0.5)), modes)
        ops.append(Conditional(op, guard) if guard else op)
    return Circuit(d_comp, tuple(ops), ancilla)
