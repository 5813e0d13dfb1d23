"""JSON file formats for states, circuits, certificate reports and histograms.

Complex numbers are stored as ``[re, im]`` pairs.  Floats are written with 17
significant digits so that every value survives a write/read cycle exactly.

State file::

    {"modes": 4, "kind": "pure", "amplitudes": [[re, im], ...]}
    {"modes": 4, "kind": "density", "matrix": [[[re, im], ...], ...]}
    {"modes": 4, "kind": "correlation", "matrix": [[...], ...]}

Circuit file::

    {"modes": 2,
     "ancilla": {"modes": 4, "copies": 1, "state": "anc.json"},
     "ops": [{"type": "evolve", "h": [[...]], "t": 0.3, "modes": [0, 1]},
             {"type": "measure", "mode": 0, "if": {"outcome": 0, "equals": 1}}]}

``modes`` of an evolve op is optional; a generator smaller than the register
then acts on the lowest modes.  The ancilla state path is resolved relative to
the circuit file.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from . import fock
from .certifier import CertificateReport, ConcurrenceCertificate, GaussianDecomposition
from .errors import FileFormatError
from .simulator import Ancilla, Circuit, Conditional, Evolve, Histogram, Measure


# --- serialization -----------------------------------------------------------

def _format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    text = format(x, ".17g")
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def _encode(obj: Any, indent: int, level: int) -> str:
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist(), indent, level)
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        parts = [_encode(v, indent, level + 1) for v in obj]
        if all(not isinstance(v, (list, tuple, dict, np.ndarray)) for v in obj):
            return "[" + ", ".join(parts) + "]"
        return "[" + pad + ("," + pad).join(parts) + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    """JSON text with floats at 17 significant digits."""
    return _encode(obj, indent, 0) + "\n"


def write_json(path: str | Path, obj: Any) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def read_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FileFormatError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def complex_to_pairs(a: np.ndarray) -> list:
    a = np.asarray(a, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def _field(doc: dict, key: str, where: str):
    if not isinstance(doc, dict):
        raise FileFormatError(f"{where}: expected an object")
    if key not in doc:
        raise FileFormatError(f"{where}: missing field '{key}'")
    return doc[key]


def pairs_to_complex(data, where: str) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FileFormatError(f"{where}: expected numbers ({exc})") from exc
    if arr.ndim == 0 or arr.shape[-1] != 2:
        raise FileFormatError(f"{where}: complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _real_matrix(data, where: str) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FileFormatError(f"{where}: expected a real matrix ({exc})") from exc
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise FileFormatError(f"{where}: expected a square matrix, got shape {arr.shape}")
    return arr


# --- states ------------------------------------------------------------------

def state_to_dict(state: np.ndarray, kind: str | None = None) -> dict:
    state = np.asarray(state)
    if kind == "correlation":
        return {"modes": state.shape[0] // 2, "kind": "correlation", "matrix": state.real.tolist()}
    d = fock.mode_count(state.shape[0])
    if state.ndim == 1:
        return {"modes": d, "kind": "pure", "amplitudes": complex_to_pairs(state)}
    return {"modes": d, "kind": "density", "matrix": complex_to_pairs(state)}


def state_from_dict(doc: dict, where: str = "state") -> tuple[str, np.ndarray]:
    """Return ``(kind, array)`` after shape checks."""
    modes = _field(doc, "modes", where)
    kind = _field(doc, "kind", where)
    if not isinstance(modes, int) or not 1 <= modes <= fock.MAX_MODES:
        raise FileFormatError(f"{where}.modes: expected an integer in 1..{fock.MAX_MODES}, got {modes!r}")
    dim = 1 << modes
    if kind == "pure":
        psi = pairs_to_complex(_field(doc, "amplitudes", where), f"{where}.amplitudes")
        if psi.shape != (dim,):
            raise FileFormatError(f"{where}.amplitudes: expected {dim} entries, got shape {psi.shape}")
        return kind, psi
    if kind == "density":
        rho = pairs_to_complex(_field(doc, "matrix", where), f"{where}.matrix")
        if rho.shape != (dim, dim):
            raise FileFormatError(f"{where}.matrix: expected {dim} x {dim}, got shape {rho.shape}")
        return kind, rho
    if kind == "correlation":
        m = _real_matrix(_field(doc, "matrix", where), f"{where}.matrix")
        if m.shape[0] != 2 * modes:
            raise FileFormatError(f"{where}.matrix: expected {2 * modes} x {2 * modes}, got shape {m.shape}")
        return kind, m
    raise FileFormatError(f"{where}.kind: expected 'pure', 'density' or 'correlation', got {kind!r}")


def read_state(path: str | Path) -> tuple[str, np.ndarray]:
    return state_from_dict(read_json(path), str(path))


def write_state(path: str | Path, state: np.ndarray, kind: str | None = None) -> None:
    write_json(path, state_to_dict(state, kind))


def density_of(kind: str, arr: np.ndarray) -> np.ndarray:
    if kind == "pure":
        return fock.projector(arr)
    if kind == "density":
        return arr
    raise FileFormatError(f"a state vector or density matrix is required, got kind {kind!r}")


# --- circuits ----------------------------------------------------------------

def _guard(doc, where: str):
    if doc is None:
        return None
    j = _field(doc, "outcome", where)
    bit = _field(doc, "equals", where)
    if not isinstance(j, int) or bit not in (0, 1):
        raise FileFormatError(f"{where}: expected integer 'outcome' and 'equals' in {{0, 1}}")
    return (j, int(bit))


def _evolve(doc: dict, where: str, total: int) -> Evolve:
    h = _real_matrix(_field(doc, "h", where), f"{where}.h")
    t = _field(doc, "t", where)
    if not isinstance(t, (int, float)):
        raise FileFormatError(f"{where}.t: expected a number, got {t!r}")
    modes = doc.get("modes")
    if modes is None and h.shape[0] < 2 * total:
        modes = list(range(h.shape[0] // 2))
    try:
        return Evolve(h, float(t), None if modes is None else tuple(modes))
    except (ValueError, TypeError) as exc:
        raise FileFormatError(f"{where}: {exc}") from exc


def circuit_from_dict(doc: dict, base: Path | None = None, where: str = "circuit") -> Circuit:
    d_comp = _field(doc, "modes", where)
    if not isinstance(d_comp, int) or d_comp < 0:
        raise FileFormatError(f"{where}.modes: expected a non-negative integer, got {d_comp!r}")
    ancilla = None
    anc_doc = doc.get("ancilla")
    if anc_doc is not None:
        aw = f"{where}.ancilla"
        m = _field(anc_doc, "modes", aw)
        k = anc_doc.get("copies", 1)
        ref = _field(anc_doc, "state", aw)
        if isinstance(ref, dict):
            kind, arr = state_from_dict(ref, f"{aw}.state")
        else:
            path = Path(ref) if base is None else base / ref
            kind, arr = read_state(path)
        if not isinstance(m, int) or not isinstance(k, int):
            raise FileFormatError(f"{aw}: 'modes' and 'copies' must be integers")
        try:
            ancilla = Ancilla(density_of(kind, arr), copies=k, modes=m, source=None if isinstance(ref, dict) else str(ref))
        except FileFormatError:
            raise
        except ValueError as exc:
            raise FileFormatError(f"{aw}: {exc}") from exc
    total = d_comp + (ancilla.copies * ancilla.modes if ancilla else 0)

    ops = []
    for i, op in enumerate(_field(doc, "ops", where)):
        ow = f"{where}.ops[{i}]"
        typ = _field(op, "type", ow)
        guard = _guard(op.get("if"), f"{ow}.if")
        if typ == "measure":
            mode = _field(op, "mode", ow)
            if not isinstance(mode, int):
                raise FileFormatError(f"{ow}.mode: expected an integer, got {mode!r}")
            ops.append(Measure(mode, guard))
        elif typ == "evolve":
            ev = _evolve(op, ow, total)
            ops.append(Conditional(ev, guard) if guard else ev)
        else:
            raise FileFormatError(f"{ow}.type: expected 'evolve' or 'measure', got {typ!r}")
    return Circuit(d_comp, tuple(ops), ancilla)


def read_circuit(path: str | Path) -> Circuit:
    path = Path(path)
    return circuit_from_dict(read_json(path), path.parent, str(path))


def circuit_to_dict(circuit: Circuit, ancilla_state: str | dict | None = None) -> dict:
    ops = []
    for op in circuit.ops:
        if isinstance(op, Measure):
            entry = {"type": "measure", "mode": op.mode}
            guard = op.guard
        else:
            ev = op.op if isinstance(op, Conditional) else op
            guard = getattr(op, "guard", None)
            entry = {"type": "evolve", "h": ev.h.tolist(), "t": ev.t}
            if ev.modes is not None:
                entry["modes"] = list(ev.modes)
        if guard is not None:
            entry["if"] = {"outcome": guard[0], "equals": guard[1]}
        ops.append(entry)
    doc: dict = {"modes": circuit.d_comp}
    if circuit.ancilla is not None:
        anc = circuit.ancilla
        ref = ancilla_state if ancilla_state is not None else (anc.source or state_to_dict(anc.state))
        doc["ancilla"] = {"modes": anc.modes, "copies": anc.copies, "state": ref}
    doc["ops"] = ops
    return doc


# --- reports -----------------------------------------------------------------

def report_to_dict(report: CertificateReport) -> dict:
    doc = {
        "C_plus": report.c_plus,
        "C_minus": report.c_minus,
        "is_convex_gaussian": report.is_convex_gaussian,
        "tolerance": report.tolerance,
        "spectrum_plus": list(map(float, report.spectrum_plus)),
        "spectrum_minus": list(map(float, report.spectrum_minus)),
        "trace_plus": report.trace_plus,
        "trace_minus": report.trace_minus,
        "F_gauss": report.f_gauss,
        "distance_lower": report.distance_lower,
        "distance_upper": report.distance_upper,
        "decomposition": None,
        "certificates": [
            {
                "sector": c.sector,
                "concurrence": c.concurrence,
                "spectrum": list(map(float, c.spectrum)),
                "components": [
                    {"weight": float(w), "amplitudes": complex_to_pairs(s)} for w, s in zip(c.weights, c.states)
                ],
            }
            for c in report.certificates
        ],
    }
    if report.decomposition is not None:
        dec = report.decomposition
        doc["decomposition"] = [
            {"weight": float(w), "sector": int(s), "amplitudes": complex_to_pairs(psi), "correlation": m.tolist()}
            for w, s, psi, m in zip(dec.weights, dec.sectors, dec.states, dec.correlations)
        ]
    return doc


def report_from_dict(doc: dict, where: str = "report") -> CertificateReport:
    def opt(key):
        v = doc.get(key)
        return None if v is None else float(v)

    dec = None
    comps = doc.get("decomposition")
    if comps is not None:
        dec = GaussianDecomposition(
            np.array([float(_field(c, "weight", where)) for c in comps]),
            [pairs_to_complex(_field(c, "amplitudes", where), f"{where}.decomposition") for c in comps],
            [np.asarray(_field(c, "correlation", where), dtype=float) for c in comps],
            [int(_field(c, "sector", where)) for c in comps],
        )
    certs = [
        ConcurrenceCertificate(
            sector=int(c["sector"]),
            concurrence=float(c["concurrence"]),
            spectrum=np.asarray(c["spectrum"], dtype=float),
            weights=np.array([float(x["weight"]) for x in c["components"]]),
            states=[pairs_to_complex(x["amplitudes"], f"{where}.certificates") for x in c["components"]],
        )
        for c in doc.get("certificates", [])
    ]
    return CertificateReport(
        c_plus=float(_field(doc, "C_plus", where)),
        c_minus=float(_field(doc, "C_minus", where)),
        is_convex_gaussian=bool(_field(doc, "is_convex_gaussian", where)),
        spectrum_plus=np.asarray(_field(doc, "spectrum_plus", where), dtype=float),
        spectrum_minus=np.asarray(_field(doc, "spectrum_minus", where), dtype=float),
        trace_plus=float(_field(doc, "trace_plus", where)),
        trace_minus=float(_field(doc, "trace_minus", where)),
        tolerance=float(_field(doc, "tolerance", where)),
        f_gauss=opt("F_gauss"),
        distance_lower=opt("distance_lower"),
        distance_upper=opt("distance_upper"),
        decomposition=dec,
        certificates=certs,
    )


def histogram_to_dict(hist: Histogram) -> dict:
    return {
        "backend": hist.backend,
        "exact": hist.shots is None,
        "shots": hist.shots,
        "seed": hist.seed,
        "histogram": dict(hist.sorted_items()),
        "counts": None if hist.counts is None else dict(sorted(hist.counts.items())),
    }
