"""Input schemas and canonical JSON output.

Two input shapes are understood: a moment-sequence file and a finite-space
file (points, named basis vectors, functional values, partition, optional
designated subspace / extension targets / domination witnesses).  Output is
serialized canonically: sorted keys, floats at 17 significant digits, so a
rerun is byte-identical and doubles survive a round trip.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import IoError, SchemaError
from .funcspace import FunctionVec, GroundSet, Subspace
from .extend import Functional
from .measure import Measure, SigmaAlgebra
from .moments import AtomicMeasure, MomentSequence, Support

SCHEMA_VERSION = "1"


# --- canonical output ---------------------------------------------------------

def _fmt_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError("cannot serialize a non-finite float")
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return format(x, ".17g")


def dumps_canonical(obj) -> str:
    """Deterministic JSON: sorted keys, fixed 17-significant-digit floats."""
    out = []
    _emit(obj, out)
    return "".join(out)


def _emit(obj, out: list) -> None:
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_fmt_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if not isinstance(key, str):
                raise ValueError("JSON object keys must be strings")
            if i:
                out.append(",")
            out.append(json.dumps(key))
            out.append(":")
            _emit(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _emit(item, out)
        out.append("]")
    else:
        raise ValueError(f"cannot serialize {type(obj).__name__}")


# --- parsing ------------------------------------------------------------------

def _require(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise SchemaError(path, message)


def _number(value, path: str) -> float:
    _require(isinstance(value, (int, float)) and not isinstance(value, bool),
             path, "expected a number")
    v = float(value)
    _require(v == v and abs(v) != float("inf"), path, "number must be finite")
    return v


def _number_list(value, path: str) -> list[float]:
    _require(isinstance(value, list), path, "expected a list of numbers")
    return [_number(v, f"{path}[{i}]") for i, v in enumerate(value)]


def load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(
            f"{path}:{exc.lineno}:{exc.colno}", f"invalid JSON: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise SchemaError(path, "top level must be a JSON object")
    return doc


@dataclass(frozen=True)
class MomentInput:
    sequence: MomentSequence
    atomic: AtomicMeasure | None


@dataclass(frozen=True, eq=False)
class FiniteSpaceInput:
    ground: GroundSet
    domain: Subspace
    basis_names: tuple[str, ...]
    functional: Functional | None
    algebra: SigmaAlgebra | None
    designated: Subspace | None          # optional "b_basis" subspace
    designated_names: tuple[str, ...]
    targets: tuple[tuple[str, FunctionVec], ...]
    witnesses: dict[int, FunctionVec]
    subspace_variant: bool
    measure: Measure | None


def parse_support(doc: dict, path: str = "support") -> Support:
    raw = doc.get("support")
    if raw is None:
        return Support.line()
    _require(isinstance(raw, dict), path, "expected an object")
    kind = raw.get("type")
    _require(kind in ("line", "halfline", "interval"), f"{path}.type",
             "expected one of 'line', 'halfline', 'interval'")
    if kind == "interval":
        a = _number(raw.get("a"), f"{path}.a")
        b = _number(raw.get("b"), f"{path}.b")
        _require(a < b, f"{path}.a", "interval requires a < b")
        return Support.interval(a, b)
    _require("a" not in raw and "b" not in raw, path, f"{kind} support takes no endpoints")
    return Support("line") if kind == "line" else Support.halfline()


def parse_moment_input(doc: dict) -> MomentInput:
    _require("moments" in doc, "moments", "field is required")
    values = _number_list(doc["moments"], "moments")
    _require(len(values) % 2 == 1,
             "moments", f"need an odd count of entries m_0..m_2d, got {len(values)}")
    support = parse_support(doc)
    try:
        seq = MomentSequence(tuple(values), support)
    except ValueError as exc:
        raise SchemaError("moments", str(exc)) from exc

    atomic = None
    if "atomic_measure" in doc:
        raw = doc["atomic_measure"]
        _require(isinstance(raw, dict), "atomic_measure", "expected an object")
        atoms = _number_list(raw.get("atoms", []), "atomic_measure.atoms")
        weights = _number_list(raw.get("weights", []), "atomic_measure.weights")
        try:
            atomic = AtomicMeasure(tuple(atoms), tuple(weights), support)
        except ValueError as exc:
            raise SchemaError("atomic_measure", str(exc)) from exc
    return MomentInput(seq, atomic)


def _parse_named_vectors(raw, ground: GroundSet, path: str):
    _require(isinstance(raw, dict), path, "expected an object of name -> values")
    names, vecs = [], []
    for name, values in raw.items():
        vals = _number_list(values, f"{path}.{name}")
        _require(len(vals) == ground.size, f"{path}.{name}",
                 f"expected {ground.size} values, got {len(vals)}")
        names.append(str(name))
        vecs.append(FunctionVec(ground, np.asarray(vals)))
    return tuple(names), tuple(vecs)


def parse_finite_space_input(doc: dict) -> FiniteSpaceInput:
    _require("points" in doc, "points", "field is required")
    points = doc["points"]
    _require(isinstance(points, list) and points, "points", "expected a nonempty list")
    try:
        ground = GroundSet(tuple(str(p) for p in points))
    except ValueError as exc:
        raise SchemaError("points", str(exc)) from exc

    basis_names, basis_vecs = _parse_named_vectors(doc.get("basis", {}), ground, "basis")
    try:
        domain = Subspace(ground, basis_vecs)
    except ValueError as exc:
        raise SchemaError("basis", str(exc)) from exc

    functional = None
    if "functional" in doc:
        raw = doc["functional"]
        _require(isinstance(raw, dict), "functional", "expected an object of name -> value")
        _require(set(raw) == set(basis_names), "functional",
                 "keys must match the basis names exactly")
        coeffs = [_number(raw[name], f"functional.{name}") for name in basis_names]
        functional = Functional(domain, np.asarray(coeffs))

    algebra = None
    if "sigma_algebra" in doc:
        raw = doc["sigma_algebra"]
        _require(isinstance(raw, list), "sigma_algebra", "expected a list of blocks")
        blocks = []
        for i, block in enumerate(raw):
            _require(isinstance(block, list), f"sigma_algebra[{i}]", "expected a list of indices")
            for j, idx in enumerate(block):
                _require(isinstance(idx, int) and not isinstance(idx, bool)
                         and 0 <= idx < ground.size,
                         f"sigma_algebra[{i}][{j}]",
                         f"expected a point index in [0, {ground.size})")
            blocks.append(tuple(block))
        try:
            algebra = SigmaAlgebra(ground, tuple(blocks))
        except ValueError as exc:
            raise SchemaError("sigma_algebra", str(exc)) from exc

    designated = None
    designated_names: tuple[str, ...] = ()
    if "b_basis" in doc:
        designated_names, vecs = _parse_named_vectors(doc["b_basis"], ground, "b_basis")
        try:
            designated = Subspace(ground, vecs)
        except ValueError as exc:
            raise SchemaError("b_basis", str(exc)) from exc

    target_names, target_vecs = _parse_named_vectors(doc.get("targets", {}), ground, "targets")
    targets = tuple(zip(target_names, target_vecs))

    options = doc.get("options", {})
    _require(isinstance(options, dict), "options", "expected an object")
    subspace_variant = bool(options.get("subspace_variant", False))

    witnesses: dict[int, FunctionVec] = {}
    if "witnesses" in doc:
        raw = doc["witnesses"]
        _require(isinstance(raw, dict), "witnesses", "expected an object of g-name -> f-name")
        lookup = dict(zip(basis_names, basis_vecs)) | dict(targets)
        for gname, fname in raw.items():
            _require(gname in basis_names, f"witnesses.{gname}", "unknown basis name")
            _require(isinstance(fname, str) and fname in lookup, f"witnesses.{gname}",
                     "witness must name a basis vector or target")
            witnesses[basis_names.index(gname)] = lookup[fname]

    measure = None
    if "measure" in doc:
        raw = doc["measure"]
        _require(isinstance(raw, dict), "measure", "expected an object")
        _require(algebra is not None, "measure", "a sigma_algebra is required alongside a measure")
        mass = _number_list(raw.get("mass", []), "measure.mass")
        _require(len(mass) == algebra.n_blocks, "measure.mass",
                 f"expected {algebra.n_blocks} masses")
        _require(all(v >= -1e-12 for v in mass), "measure.mass", "masses must be nonnegative")
        measure = Measure(algebra, np.asarray(mass))

    return FiniteSpaceInput(
        ground=ground,
        domain=domain,
        basis_names=basis_names,
        functional=functional,
        algebra=algebra,
        designated=designated,
        designated_names=designated_names,
        targets=targets,
        witnesses=witnesses,
        subspace_variant=subspace_variant,
        measure=measure,
    )


def parse_input(path: str):
    """Load and validate an input file.

    Returns a :class:`MomentInput` or :class:`FiniteSpaceInput` depending on
    which schema the file matches ("moments" vs "points").
    """
    doc = load_json(path)
    schema = doc.get("schema", SCHEMA_VERSION)
    _require(str(schema) == SCHEMA_VERSION, "schema",
             f"unsupported schema version {schema!r} (expected '{SCHEMA_VERSION}')")
    if "moments" in doc:
        return parse_moment_input(doc)
    if "points" in doc:
        return parse_finite_space_input(doc)
    raise SchemaError("", "expected either a 'moments' or a 'points' input file")


# --- encoding helpers for results --------------------------------------------

def encode_atomic(mu: AtomicMeasure) -> dict:
    return {"atoms": list(mu.atoms), "weights": list(mu.weights)}

def encode_support(s: Support) -> dict:
    out = {"type": s.kind}
    if s.kind == "interval":
        out["a"] = s.a
        out["b"] = s.b
    return out

def encode_measure(mu: Measure) -> dict:
    return {
        "blocks": [list(b) for b in mu.algebra.blocks],
        "mass": list(mu.block_mass),
    }

def encode_poly(p) -> list:
    return list(p.coeffs)
