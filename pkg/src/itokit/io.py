"""JSON documents for Ito algebras and deterministic report output.

Complex numbers are ``[re, im]`` pairs. Output is canonical: keys sorted,
floats printed with 17 significant digits, so ``emit(parse(text)) == text``
for any emitted document and reports are byte-identical across runs.
"""

import json
import math
import warnings
from dataclasses import replace

import numpy as np

from .algebra import ItoAlgebra, ThermalForm, VacuumForm, check_axioms
from .errors import AxiomWarning, DocumentError, SchemaError

SCHEMA_VERSION = 1


# Canonical JSON writer ---------------------------------------------------------


def _fmt_float(x):
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite number {x!r}")
    s = "%.17g" % x
    if "." not in s and "e" not in s and "n" not in s:
        s += ".0"
    return s


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1)) if indent else ""
    end = " " * (indent * level) if indent else ""
    nl = "\n" if indent else ""
    sep = "," + nl if indent else ", "
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return _encode([float(obj.real), float(obj.imag)], 0, 0)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist(), indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            pad + json.dumps(str(k), ensure_ascii=False) + (": " if indent else ":") + _encode(v, indent, level + 1)
            for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))
        ]
        return "{" + nl + sep.join(items) + nl + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        # numeric leaves stay on one line
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) or _is_pair(v) for v in obj):
            return "[" + ", ".join(_encode(v, 0, 0) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[" + nl + sep.join(items) + nl + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _is_pair(v):
    return isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float, np.number)) for x in v)


def dumps(obj, indent=2):
    """Deterministic JSON text (sorted keys, round-trippable floats)."""
    return _encode(obj, indent, 0) + "\n"


def complex_to_json(a):
    """Nested ``[re, im]`` lists from a complex scalar or array."""
    arr = np.asarray(a, dtype=complex)
    pairs = np.stack([arr.real, arr.imag], axis=-1)
    return pairs.tolist()


# Documents -------------------------------------------------------------------


def algebra_to_document(alg: ItoAlgebra):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "dim": alg.dim,
        "basis": list(alg.labels),
        "mul": complex_to_json(alg.mul),
        "star": complex_to_json(alg.star_matrix),
        "death": complex_to_json(alg.death),
        "state": complex_to_json(alg.state),
    }
    tags = {}
    if alg.vacuum is not None:
        v = alg.vacuum
        tags["vacuum"] = {
            "space_dim": v.space_dim,
            "alpha": complex_to_json(v.alpha),
            "kets": complex_to_json(v.kets),
            "bras": complex_to_json(v.bras),
            "ops": complex_to_json(v.ops),
        }
    if alg.thermal is not None:
        t = alg.thermal
        tags["thermal"] = {
            "dim": t.dim,
            "alpha": complex_to_json(t.alpha),
            "xi": complex_to_json(t.xi),
            "mul": complex_to_json(t.mul),
            "star": complex_to_json(t.star),
            "gram": complex_to_json(t.gram),
        }
    if tags:
        doc["tags"] = tags
    return doc


def emit_algebra(alg: ItoAlgebra):
    return dumps(algebra_to_document(alg))


def _complex_array(value, shape, field):
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise SchemaError(field, "expected nested arrays of [re, im] pairs") from None
    if arr.shape != tuple(shape) + (2,):
        dims = "×".join(str(s) for s in shape) or "scalar"
        raise SchemaError(field, f"expected {dims} array of [re, im] pairs, got shape {arr.shape[:-1] if arr.ndim else ()}")
    if not np.all(np.isfinite(arr)):
        raise SchemaError(field, "entries must be finite")
    return arr[..., 0] + 1j * arr[..., 1]


def _require(doc, field, kind, where=""):
    if field not in doc:
        raise SchemaError(where + field, "missing")
    val = doc[field]
    if kind is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise SchemaError(where + field, "expected an integer")
    if kind is list and not isinstance(val, list):
        raise SchemaError(where + field, "expected an array")
    if kind is dict and not isinstance(val, dict):
        raise SchemaError(where + field, "expected an object")
    return val


def document_to_algebra(doc, tol=None, warn=True):
    if not isinstance(doc, dict):
        raise SchemaError("document", "expected a JSON object")
    version = _require(doc, "schema_version", int)
    if version != SCHEMA_VERSION:
        raise SchemaError("schema_version", f"unsupported version {version}, expected {SCHEMA_VERSION}")
    n = _require(doc, "dim", int)
    if n < 1:
        raise SchemaError("dim", "must be positive")
    basis = _require(doc, "basis", list)
    if len(basis) != n or not all(isinstance(s, str) for s in basis):
        raise SchemaError("basis", f"expected {n} strings")
    if len(set(basis)) != n:
        raise SchemaError("basis", "labels must be distinct")
    try:
        mul = _complex_array(_require(doc, "mul", list), (n, n, n), "mul")
    except SchemaError:
        raise SchemaError("mul", "expected n×n×n") from None
    star = _complex_array(_require(doc, "star", list), (n, n), "star")
    death = _complex_array(_require(doc, "death", list), (n,), "death")
    state = _complex_array(_require(doc, "state", list), (n,), "state")
    vacuum = thermal = None
    tags = doc.get("tags", {})
    if not isinstance(tags, dict):
        raise SchemaError("tags", "expected an object")
    if "vacuum" in tags:
        v = tags["vacuum"]
        if not isinstance(v, dict):
            raise SchemaError("tags.vacuum", "expected an object")
        p = _require(v, "space_dim", int, "tags.vacuum.")
        vacuum = VacuumForm(
            p,
            _complex_array(_require(v, "alpha", list, "tags.vacuum."), (n,), "tags.vacuum.alpha"),
            _complex_array(_require(v, "kets", list, "tags.vacuum."), (n, p), "tags.vacuum.kets"),
            _complex_array(_require(v, "bras", list, "tags.vacuum."), (n, p), "tags.vacuum.bras"),
            _complex_array(_require(v, "ops", list, "tags.vacuum."), (n, p, p), "tags.vacuum.ops"),
        )
    if "thermal" in tags:
        t = tags["thermal"]
        if not isinstance(t, dict):
            raise SchemaError("tags.thermal", "expected an object")
        p = _require(t, "dim", int, "tags.thermal.")
        thermal = ThermalForm(
            p,
            _complex_array(_require(t, "alpha", list, "tags.thermal."), (n,), "tags.thermal.alpha"),
            _complex_array(_require(t, "xi", list, "tags.thermal."), (n, p), "tags.thermal.xi"),
            _complex_array(_require(t, "mul", list, "tags.thermal."), (p, p, p), "tags.thermal.mul"),
            _complex_array(_require(t, "star", list, "tags.thermal."), (p, p), "tags.thermal.star"),
            _complex_array(_require(t, "gram", list, "tags.thermal."), (p, p), "tags.thermal.gram"),
        )
    kwargs = {} if tol is None else {"tol": tol}
    alg = ItoAlgebra(basis, mul, star, death, state, vacuum=vacuum, thermal=thermal, **kwargs)
    report = check_axioms(alg)
    if not report.passed and warn:
        warnings.warn(f"document fails {', '.join(report.names())}", AxiomWarning, stacklevel=3)
    return replace(alg, report=report)


def loads(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON: {exc.msg} at line {exc.lineno} column {exc.colno}", exc.lineno, exc.colno) from None


def parse_algebra(text, tol=None, warn=True) -> ItoAlgebra:
    """Parse and validate a document; axiom failures warn but still return the algebra."""
    return document_to_algebra(loads(text), tol=tol, warn=warn)
