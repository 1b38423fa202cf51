"""JSON encodings for matrices, instruments, states and scenario files.

Complex arrays are nested lists of ``[re, im]`` pairs, row-major. Python's
float repr round-trips doubles exactly, so encode/decode is lossless.
"""
from __future__ import annotations

import json

import numpy as np

from .hilbert import DensityState, Projector
from .instruments import Instrument
from .tolerances import current


class FormatError(ValueError):
    """Malformed input file; ``where`` locates the offending field."""

    def __init__(self, message, where=""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


def matrix_to_json(m) -> list:
    m = np.asarray(getattr(m, "matrix", m), dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def vector_to_json(v) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex).ravel()]


def _pairs_to_complex(obj, where):
    arr = np.asarray(obj, dtype=float)
    if arr.shape[-1:] != (2,):
        raise FormatError("expected [re, im] pairs", where)
    return arr[..., 0] + 1j * arr[..., 1]


def matrix_from_json(obj, where="matrix") -> np.ndarray:
    try:
        m = _pairs_to_complex(obj, where)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"not a matrix of [re, im] pairs ({exc})", where) from exc
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise FormatError(f"expected a square matrix, got shape {m.shape}", where)
    return m


def vector_from_json(obj, where="vector") -> np.ndarray:
    try:
        v = _pairs_to_complex(obj, where)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"not a vector of [re, im] pairs ({exc})", where) from exc
    if v.ndim != 1:
        raise FormatError("expected a flat list of [re, im] pairs", where)
    return v


def instrument_to_json(I: Instrument) -> dict:
    return {"label": I.label, "outcomes": [matrix_to_json(P) for P in I.outcomes]}


def instrument_from_json(obj, where="instrument") -> Instrument:
    if not isinstance(obj, dict) or "outcomes" not in obj:
        raise FormatError("expected {label, outcomes}", where)
    mats = [matrix_from_json(m, f"{where}.outcomes[{k}]")
            for k, m in enumerate(obj["outcomes"])]
    try:
        return Instrument(tuple(Projector(m) for m in mats), obj.get("label", ""))
    except ValueError as exc:
        raise FormatError(str(exc), where) from exc


def state_to_json(s: DensityState) -> dict:
    return {"matrix": matrix_to_json(s)}


def state_from_json(obj, where="state") -> DensityState:
    """Accepts {"matrix": ...}, {"vector": ...} or the name "singlet"."""
    try:
        if obj == "singlet":
            from .epr import singlet_state
            return singlet_state()
        if isinstance(obj, dict) and "vector" in obj:
            v = vector_from_json(obj["vector"], f"{where}.vector")
            norm = float(np.linalg.norm(v))
            if abs(norm - 1.0) > current().tr:
                raise FormatError(f"state vector has norm {norm:.6g}", f"{where}.vector")
            return DensityState.from_vector(v)
        if isinstance(obj, dict) and "matrix" in obj:
            return DensityState(matrix_from_json(obj["matrix"], f"{where}.matrix"))
    except FormatError:
        raise
    except ValueError as exc:
        raise FormatError(str(exc), where) from exc
    raise FormatError('expected {"matrix": ...}, {"vector": ...} or "singlet"', where)


def load_json(path):
    """Read a JSON file, turning decode errors into FormatError with line info."""
    with open(path) as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}",
                          f"{path}:{exc.lineno}:{exc.colno}") from exc


def _instrument_entry(obj, where) -> Instrument:
    if isinstance(obj, dict) and "polarizer" in obj:
        from .epr import polarizer_instrument
        pol = obj["polarizer"]
        try:
            return polarizer_instrument(pol.get("kind", "linear"),
                                        float(pol.get("theta", 0.0)),
                                        int(pol.get("arm", 1)))
        except (TypeError, ValueError, AttributeError) as exc:
            raise FormatError(str(exc), f"{where}.polarizer") from exc
    return instrument_from_json(obj, where)


def frame_from_json(obj, where="frame"):
    from .spacetime import FrameTransform
    if not isinstance(obj, dict) or "v" not in obj:
        raise FormatError("frame needs a velocity 'v'", where)
    try:
        U = obj.get("unitary")
        return FrameTransform(np.atleast_1d(np.asarray(obj["v"], dtype=float)),
                              obj.get("rotation"), obj.get("translation"),
                              None if U is None else matrix_from_json(U, f"{where}.unitary"))
    except FormatError:
        raise
    except (TypeError, ValueError) as exc:
        raise FormatError(str(exc), where) from exc


def scenario_from_json(obj):
    """Decode a frame-consistency scenario file.

    ``dim`` is the number of spatial dimensions of the regions.
    """
    from .spacetime import LocalizedInstrument, Scenario, SpacetimeRegion
    for key in ("dim", "regions", "instruments", "state"):
        if key not in obj:
            raise FormatError("missing field", key)
    dim = obj["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise FormatError("must be a positive integer", "dim")
    located = {}
    instants = obj.get("instants", {})
    for name in ("I", "J"):
        where = f"regions.{name}"
        reg = obj["regions"].get(name)
        if not isinstance(reg, dict) or "lo" not in reg or "hi" not in reg:
            raise FormatError("expected {lo, hi}", where)
        try:
            region = SpacetimeRegion(reg["lo"], reg["hi"])
        except (TypeError, ValueError) as exc:
            raise FormatError(str(exc), where) from exc
        if region.dim != dim:
            raise FormatError(f"region has {region.dim} spatial dims, dim is {dim}", where)
        if name not in obj["instruments"]:
            raise FormatError("missing instrument", f"instruments.{name}")
        instr = _instrument_entry(obj["instruments"][name], f"instruments.{name}")
        located[name] = LocalizedInstrument(instr, region,
                                            float(instants.get(name, 0.5)))
    state = state_from_json(obj["state"])
    frames = tuple(frame_from_json(f, f"frames[{k}]")
                   for k, f in enumerate(obj.get("frames", [{"v": [0.0] * dim}])))
    for k, g in enumerate(frames):
        if g.dim != dim:
            raise FormatError(f"frame velocity has {g.dim} components", f"frames[{k}]")
        if g.unitary is not None and g.unitary.shape[0] != state.dim:
            raise FormatError("unitary does not act on the state space",
                              f"frames[{k}].unitary")
    return Scenario(located["I"], located["J"], state, frames)
