"""Command-line interface.

Exit codes: 0 success or affirmative verdict, 1 negative verdict,
2 input error, 3 precondition violation (e.g. a non-convex-Gaussian ancilla).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np
import scipy.optimize

from . import certifier, fock, gaussian, simulator
from .errors import (
    FileFormatError,
    FloError,
    NotConvexGaussian,
    OutOfRange,
    TooManyBranches,
    TooManyModes,
)
from .fileio import (
    density_of,
    dumps,
    histogram_to_dict,
    read_circuit,
    read_state,
    report_to_dict,
    state_to_dict,
    write_json,
    write_state,
)
from .settings import tolerances

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_PRECONDITION = 0, 1, 2, 3
CROSSCHECK_TOL = 1e-9


def _g(x) -> str:
    return "none" if x is None else format(float(x), ".17g")


def _emit(args, doc) -> None:
    if args.out:
        write_json(args.out, doc)
    else:
        sys.stdout.write(dumps(doc))


# --- certify / decompose -----------------------------------------------------

def _load_density(path: str) -> np.ndarray:
    kind, arr = read_state(path)
    return density_of(kind, arr)


def cmd_certify(args) -> int:
    rho = _load_density(args.state)
    report = certifier.certify(rho, decompose=args.decompose, tol=args.tol)
    _emit(args, report_to_dict(report))
    print(f"C_plus = {_g(report.c_plus)}", file=sys.stderr)
    print(f"C_minus = {_g(report.c_minus)}", file=sys.stderr)
    if report.f_gauss is not None:
        print(f"F_gauss = {_g(report.f_gauss)}", file=sys.stderr)
    verdict = "convex-Gaussian" if report.is_convex_gaussian else "not convex-Gaussian"
    print(f"verdict: {verdict}", file=sys.stderr)
    return EXIT_OK if report.is_convex_gaussian else EXIT_NEGATIVE


def cmd_decompose(args) -> int:
    args.decompose = True
    return cmd_certify(args)


# --- scan --------------------------------------------------------------------

def _even_restriction(p: float) -> np.ndarray:
    return certifier.restrict(fock.depolarized_a8(p), 1)


def scan_row(p: float) -> dict:
    rho = fock.depolarized_a8(p)
    report = certifier.certify(rho)
    block = certifier.restrict(rho, 1)
    even = certifier.direct_sum_sectors(block / np.trace(block).real, np.zeros((8, 8)))
    f = certifier.fidelity_gauss(even)
    lo, hi = certifier.distance_bounds(even)
    return {"p": p, "C_plus": report.c_plus, "F_gauss_even": f, "distance_lower": lo, "distance_upper": hi}


def critical_noise(xtol: float = 1e-13) -> float:
    """Root of the signed even-sector concurrence of the depolarized ``|a8>`` family."""
    return float(
        scipy.optimize.brentq(
            lambda p: certifier.preconcurrence(_even_restriction(p), 1), 0.0, 1.0, xtol=xtol, rtol=4 * np.finfo(float).eps
        )
    )


def cmd_scan(args) -> int:
    if not (0.0 <= args.pmin < args.pmax <= 1.0):
        raise OutOfRange(f"need 0 <= pmin < pmax <= 1, got {args.pmin}, {args.pmax}")
    if args.steps < 2:
        raise OutOfRange(f"need at least 2 steps, got {args.steps}")
    rows = [scan_row(float(p)) for p in np.linspace(args.pmin, args.pmax, args.steps)]
    cols = ["p", "C_plus", "F_gauss_even", "distance_lower", "distance_upper"]
    lines = [",".join(cols)] + [",".join(_g(r[c]) for c in cols) for r in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(f"p_cr = {_g(critical_noise())}", file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


# --- simulation --------------------------------------------------------------

def _pick_backend(args, circuit) -> str:
    if args.backend == "auto":
        return "dense" if args.oracle and circuit.total_modes <= simulator.MAX_DENSE_MODES else "cov"
    return args.backend


def cmd_simulate(args) -> int:
    circuit = read_circuit(args.circuit)
    backend = _pick_backend(args, circuit)
    shots = None if args.exact else args.shots
    hist = simulator.outcome_distribution(circuit, backend, shots=shots, seed=args.seed, workers=args.workers)
    _emit(args, histogram_to_dict(hist))
    return EXIT_OK


def _corrupted_update(m: np.ndarray, k: int, outcome: int) -> np.ndarray:
    """Measurement update with the sign of the rank-two correction flipped (negative control)."""
    a, b = 2 * k - 2, 2 * k - 1
    lam = 1.0 if outcome == 0 else -1.0
    ca, cb = m[:, a], m[:, b]
    out = m - lam * (np.outer(cb, ca) - np.outer(ca, cb)) / max(1.0 + lam * m[a, b], 1e-300)
    out[[a, b], :] = 0.0
    out[:, [a, b]] = 0.0
    out[a, b], out[b, a] = lam, -lam
    return out


def cmd_crosscheck(args) -> int:
    circuit = read_circuit(args.circuit)
    project = _corrupted_update if args.corrupt_update else gaussian.project_mode
    dense = simulator.exact_distribution(circuit, "dense")
    cov = simulator.exact_distribution(circuit, "cov", project)
    worst = simulator.max_branch_discrepancy(dense, cov)
    branches = sorted(set(dense) | set(cov))
    doc = {
        "max_discrepancy": worst,
        "tolerance": CROSSCHECK_TOL,
        "branches": [{"outcome": k, "dense": dense.get(k, 0.0), "cov": cov.get(k, 0.0)} for k in branches],
    }
    _emit(args, doc)
    print(f"max per-branch discrepancy = {_g(worst)}", file=sys.stderr)
    return EXIT_OK if worst <= CROSSCHECK_TOL else EXIT_NEGATIVE


# --- random states -----------------------------------------------------------

def random_state(kind: str, modes: int, seed: int | None, components: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    dim = 1 << modes
    if kind == "gaussian-pure":
        return gaussian.gaussian_state_vector(gaussian.random_pure_gaussian(modes, rng))
    if kind == "even-pure":
        psi = np.zeros(dim, dtype=complex)
        idx = fock.sector_indices(modes, 1)
        psi[idx] = rng.standard_normal(idx.size) + 1j * rng.standard_normal(idx.size)
        return psi / np.linalg.norm(psi)
    if not 1 <= components <= 8:
        raise OutOfRange(f"mixtures take 1..8 components, got {components}")
    if kind == "gaussian-mixture":
        weights = rng.dirichlet(np.ones(components))
        rho = np.zeros((dim, dim), dtype=complex)
        for w in weights:
            parity = 1 if rng.random() < 0.5 else -1
            psi = gaussian.gaussian_state_vector(gaussian.random_pure_gaussian(modes, rng, parity))
            rho += w * fock.projector(psi)
        return rho
    if kind == "even-mixed":
        g = rng.standard_normal((dim, components)) + 1j * rng.standard_normal((dim, components))
        rho = g @ g.conj().T
        plus, minus = fock.parity_projectors(modes)
        rho = plus @ rho @ plus + minus @ rho @ minus
        return rho / np.trace(rho).real
    raise OutOfRange(f"unknown state kind {kind!r}")


def cmd_random_state(args) -> int:
    if not 1 <= args.modes <= gaussian.MAX_LIFT_MODES:
        raise OutOfRange(f"modes must lie in 1..{gaussian.MAX_LIFT_MODES}, got {args.modes}")
    state = random_state(args.kind, args.modes, args.seed, args.components)
    if args.out:
        write_state(args.out, state)
    else:
        sys.stdout.write(dumps(state_to_dict(state)))
    return EXIT_OK


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convexflo",
        description="Convex-Gaussianity certification and fermionic linear optics simulation.",
    )
    parser.add_argument("--tol", type=float, default=None, help="verdict tolerance on the concurrences (default 1e-8)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="decide convex-Gaussianity of a four-mode state")
    p.add_argument("state")
    p.add_argument("--decompose", action="store_true", help="include an optimal Gaussian decomposition")
    p.add_argument("--out", help="report file (default: stdout)")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("decompose", help="optimal Gaussian decomposition or a concurrence certificate")
    p.add_argument("state")
    p.add_argument("--out")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("simulate", help="run a circuit and write the outcome histogram")
    p.add_argument("circuit")
    p.add_argument("--backend", choices=["dense", "cov", "auto"], default="auto")
    p.add_argument("--oracle", action="store_true", help="let 'auto' use the dense backend when it fits")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--shots", type=int, default=1000)
    mode.add_argument("--exact", action="store_true", help="enumerate all branches")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("scan-a8", help="concurrence and fidelity of the depolarized |a8> family")
    p.add_argument("--pmin", type=float, default=0.0)
    p.add_argument("--pmax", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--out", help="CSV file (default: stdout)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("crosscheck", help="compare dense and correlation-matrix branch probabilities")
    p.add_argument("circuit")
    p.add_argument("--exact", action="store_true", help="accepted for symmetry with simulate; enumeration is always exact")
    p.add_argument("--corrupt-update", action="store_true", help=argparse.SUPPRESS)
    p.add_argument("--out")
    p.set_defaults(func=cmd_crosscheck)

    p = sub.add_parser("random-state", help="write a reproducible random state file")
    p.add_argument("--kind", required=True, choices=["gaussian-pure", "even-pure", "gaussian-mixture", "even-mixed"])
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--components", type=int, default=4)
    p.add_argument("--modes", type=int, default=4)
    p.add_argument("--out")
    p.set_defaults(func=cmd_random_state)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        if args.tol is not None:
            if not args.tol >= 0:
                raise OutOfRange(f"--tol must be non-negative, got {args.tol}")
            with tolerances(verdict=args.tol):
                return args.func(args)
        return args.func(args)
    except NotConvexGaussian as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (TooManyModes, TooManyBranches) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (FileFormatError, FloError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
