"""Scenario files: versioned JSON descriptions of instances to verify.

A scenario carries a ring, a graded module, operation tables, and a list
of checks.  Coefficients are strings so that Z, Q, and GF(p) share one
encoding; linear combinations are lists of [coefficient, name] pairs where
name is a basis name or a list of names for tensor values.

Top-level fields:

    schema_version   1
    kind             "bialgebra" | "cone" | "complex"
    name             optional label
    ring             "Z" | "Q" | "GF(p)"
    module           {"basis": [{"name": ..., "degree": ...}, ...]}
    safe             optional list of basis names (quantifier window)
    checks           optional list of check ids (defaults per kind)

bialgebra: mu, lambda (operation tables), eta (combination), optional
differential.  cone: the bialgebra fields plus n and optional c0, Q0, B.
complex: differential, optional top (extreme degree for the essential
check), optional pair {module, differential, map, secondary} describing a
second complex with a chain map into the main one.

Operation tables: {"degree": d, "entries": [{"in": [names...],
"out": combination}, ...]}; inputs not listed map to zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .rings import Ring, ring_from_name
from .graded import (
    BasisElement,
    GradedModule,
    GradedMap,
    Vector,
    tensor,
    TENSOR_SEP,
)
from .complexes import ChainComplex, ChainMap
from .bialgebra import BialgebraData
from .cone_product import ConeProductData


class SchemaError(ValueError):
    """Scenario violates the schema; `path` locates the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


DEFAULT_CHECKS = {
    "bialgebra": ("axioms", "lambda-eta"),
    "cone": ("components", "associativity", "assoc-infinitesimal"),
    "complex": ("d-squared",),
}

KNOWN_CHECKS = {
    "bialgebra": {"axioms", "lambda-eta", "involutivity", "cc-antisymmetry",
                  "loday-ronco", "reverse-bivector-gate"},
    "cone": {"components", "associativity", "assoc-infinitesimal"},
    "complex": {"d-squared", "essential"},
}


@dataclass
class Scenario:
    kind: str
    name: str
    ring: Ring
    payload: object            # BialgebraData, ConeProductData, or complex bundle
    checks: tuple
    raw: dict = field(repr=False, default=None)
    reverse_bivector: object = None   # optional claimed value of lam(eta)


@dataclass
class ComplexBundle:
    complex: ChainComplex
    top: int = None
    pair_map: ChainMap = None          # second complex -> main complex
    secondary: GradedMap = None        # degree +1 map alongside pair_map


def _expect(cond, path, message):
    if not cond:
        raise SchemaError(path, message)


def _get(obj, key, path, required=True, typ=None):
    if key not in obj:
        if required:
            raise SchemaError(f"{path}.{key}", "missing required field")
        return None
    val = obj[key]
    if typ is not None and not isinstance(val, typ):
        raise SchemaError(f"{path}.{key}",
                          f"expected {typ.__name__}, got {type(val).__name__}")
    return val


def _parse_module(obj, ring, path) -> GradedModule:
    basis_raw = _get(obj, "basis", path, typ=list)
    basis = []
    for i, b in enumerate(basis_raw):
        bp = f"{path}.basis[{i}]"
        _expect(isinstance(b, dict), bp, "expected an object")
        name = _get(b, "name", bp, typ=str)
        degree = _get(b, "degree", bp, typ=int)
        _expect(TENSOR_SEP not in name and name, bp + ".name",
                "names must be nonempty and free of the tensor separator")
        basis.append(BasisElement(name, degree))
    try:
        return GradedModule(ring, basis)
    except ValueError as e:
        raise SchemaError(path + ".basis", str(e))


def _parse_combo(raw, module, path, arity=1) -> Vector:
    """[[coeff, name-or-names], ...] into a vector of module (tensor power)."""
    _expect(isinstance(raw, list), path, "expected a list of [coeff, name] pairs")
    target = module if arity == 1 else tensor(*([module] * arity))
    R = module.ring
    out = {}
    for i, pair in enumerate(raw):
        pp = f"{path}[{i}]"
        _expect(isinstance(pair, list) and len(pair) == 2, pp,
                "expected [coefficient, name]")
        coeff_raw, name_raw = pair
        _expect(isinstance(coeff_raw, str), pp + "[0]",
                "coefficients are strings")
        try:
            coeff = R.parse(coeff_raw)
        except (ValueError, ZeroDivisionError) as e:
            raise SchemaError(pp + "[0]", f"bad coefficient: {e}")
        if arity == 1:
            _expect(isinstance(name_raw, str), pp + "[1]", "expected a name")
            names = [name_raw]
        else:
            _expect(isinstance(name_raw, list) and len(name_raw) == arity,
                    pp + "[1]", f"expected a list of {arity} names")
            names = name_raw
        for nm in names:
            _expect(isinstance(nm, str) and module.has(nm), pp + "[1]",
                    f"unknown basis name {nm!r}")
        key = TENSOR_SEP.join(names)
        out[key] = R.add(out.get(key, R.zero()), coeff)
    return Vector(target, out)


def _parse_operation(obj, module, path, in_arity, out_arity) -> GradedMap:
    degree = _get(obj, "degree", path, typ=int)
    entries = _get(obj, "entries", path, typ=list)
    source = module if in_arity == 1 else tensor(*([module] * in_arity))
    target = module if out_arity == 1 else tensor(*([module] * out_arity))
    table = {}
    for i, entry in enumerate(entries):
        ep = f"{path}.entries[{i}]"
        _expect(isinstance(entry, dict), ep, "expected an object")
        in_raw = _get(entry, "in", ep, typ=list)
        _expect(len(in_raw) == in_arity, ep + ".in",
                f"expected {in_arity} input name(s)")
        for nm in in_raw:
            _expect(isinstance(nm, str) and module.has(nm), ep + ".in",
                    f"unknown basis name {nm!r}")
        key = TENSOR_SEP.join(in_raw)
        _expect(key not in table, ep + ".in", "duplicate entry for this input")
        out = _parse_combo(entry["out"], module, ep + ".out", arity=out_arity)
        in_degree = source.degree_of(key)
        d = out.degree()
        if d is not None and d != in_degree + degree:
            raise SchemaError(
                ep + ".out",
                f"inhomogeneous value: degree {d}, expected {in_degree + degree}")
        table[key] = out
    try:
        return GradedMap.from_table(source, target, degree, table)
    except (ValueError, KeyError) as e:
        raise SchemaError(path, str(e))


def _parse_checks(obj, kind, path):
    raw = obj.get("checks")
    if raw is None:
        return DEFAULT_CHECKS[kind]
    _expect(isinstance(raw, list), f"{path}.checks", "expected a list")
    out = []
    for i, c in enumerate(raw):
        _expect(isinstance(c, str) and c in KNOWN_CHECKS[kind],
                f"{path}.checks[{i}]",
                f"unknown check {c!r} for kind {kind!r}; "
                f"known: {sorted(KNOWN_CHECKS[kind])}")
        out.append(c)
    return tuple(out)


def ingest(data) -> Scenario:
    """Validate a scenario (dict or JSON text) into typed objects."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            raise SchemaError("$", f"invalid JSON: line {e.lineno} column {e.colno}")
    _expect(isinstance(data, dict), "$", "scenario must be a JSON object")
    version = _get(data, "schema_version", "$", typ=int)
    _expect(version == 1, "$.schema_version", f"unsupported version {version}")
    kind = _get(data, "kind", "$", typ=str)
    _expect(kind in DEFAULT_CHECKS, "$.kind",
            f"unknown kind {kind!r}; expected one of {sorted(DEFAULT_CHECKS)}")
    name = data.get("name", "")
    try:
        ring = ring_from_name(_get(data, "ring", "$", typ=str))
    except ValueError as e:
        raise SchemaError("$.ring", str(e))
    module = _parse_module(_get(data, "module", "$", typ=dict), ring, "$.module")
    checks = _parse_checks(data, kind, "$")

    safe = data.get("safe")
    if safe is not None:
        _expect(isinstance(safe, list), "$.safe", "expected a list of names")
        for i, nm in enumerate(safe):
            _expect(isinstance(nm, str) and module.has(nm), f"$.safe[{i}]",
                    f"unknown basis name {nm!r}")

    if kind == "complex":
        payload = _ingest_complex(data, module, ring)
        return Scenario(kind, name, ring, payload, checks, data)

    mu = _parse_operation(_get(data, "mu", "$", typ=dict), module, "$.mu", 2, 1)
    lam = _parse_operation(_get(data, "lambda", "$", typ=dict), module,
                           "$.lambda", 1, 2)
    eta = _parse_combo(_get(data, "eta", "$", typ=list), module, "$.eta")
    differential = None
    if "differential" in data:
        differential = _parse_operation(data["differential"], module,
                                        "$.differential", 1, 1)
        _expect(differential.degree == -1, "$.differential.degree",
                "differentials have degree -1")
    try:
        inst = BialgebraData(module, mu, lam, eta, safe_names=safe,
                             differential=differential, name=name)
    except ValueError as e:
        raise SchemaError("$", str(e))

    reverse_bivector = None
    if "reverse_bivector" in data:
        reverse_bivector = _parse_combo(data["reverse_bivector"], module,
                                        "$.reverse_bivector", arity=2)
    if "reverse-bivector-gate" in checks and reverse_bivector is None:
        raise SchemaError("$.checks",
                          "reverse-bivector-gate needs a reverse_bivector field")

    if kind == "bialgebra":
        return Scenario(kind, name, ring, inst, checks, data, reverse_bivector)

    n = _get(data, "n", "$", typ=int)
    A2 = tensor(module, module)
    A3 = tensor(module, module, module)
    c0 = (_parse_combo(data["c0"], module, "$.c0", arity=2)
          if "c0" in data else A2.zero())
    Q0 = (_parse_combo(data["Q0"], module, "$.Q0", arity=2)
          if "Q0" in data else A2.zero())
    B = (_parse_combo(data["B"], module, "$.B", arity=3)
         if "B" in data else A3.zero())
    try:
        cone_data = ConeProductData(
            ChainComplex(module, differential), mu, lam, c0, Q0, B, n,
            safe_names=safe, name=name)
    except ValueError as e:
        raise SchemaError("$", str(e))
    return Scenario(kind, name, ring, cone_data, checks, data)


def _ingest_complex(data, module, ring) -> ComplexBundle:
    differential = _parse_operation(_get(data, "differential", "$", typ=dict),
                                    module, "$.differential", 1, 1)
    _expect(differential.degree == -1, "$.differential.degree",
            "differentials have degree -1")
    try:
        cx = ChainComplex(module, differential)
    except ValueError as e:
        raise SchemaError("$.differential", str(e))
    top = data.get("top")
    if top is not None:
        _expect(isinstance(top, int), "$.top", "expected an integer")
    pair_map = None
    secondary = None
    if "pair" in data:
        p = data["pair"]
        _expect(isinstance(p, dict), "$.pair", "expected an object")
        pmod = _parse_module(_get(p, "module", "$.pair", typ=dict), ring,
                             "$.pair.module")
        pdiff = _parse_operation(_get(p, "differential", "$.pair", typ=dict),
                                 pmod, "$.pair.differential", 1, 1)
        try:
            pcx = ChainComplex(pmod, pdiff)
        except ValueError as e:
            raise SchemaError("$.pair.differential", str(e))
        fmap = _parse_cross_map(_get(p, "map", "$.pair", typ=dict), pmod,
                                module, "$.pair.map")
        _expect(fmap.degree == 0, "$.pair.map.degree", "chain maps have degree 0")
        try:
            pair_map = ChainMap(pcx, cx, fmap)
        except ValueError as e:
            raise SchemaError("$.pair.map", str(e))
        if "secondary" in p:
            secondary = _parse_cross_map(p["secondary"], pmod, module,
                                         "$.pair.secondary")
            _expect(secondary.degree == 1, "$.pair.secondary.degree",
                    "secondary maps have degree +1")
    return ComplexBundle(cx, top, pair_map, secondary)


def _parse_cross_map(obj, source, target, path) -> GradedMap:
    degree = _get(obj, "degree", path, typ=int)
    entries = _get(obj, "entries", path, typ=list)
    table = {}
    for i, entry in enumerate(entries):
        ep = f"{path}.entries[{i}]"
        in_raw = _get(entry, "in", ep, typ=list)
        _expect(len(in_raw) == 1 and isinstance(in_raw[0], str)
                and source.has(in_raw[0]), ep + ".in", "unknown basis name")
        out = _parse_combo(entry["out"], target, ep + ".out")
        d = out.degree()
        if d is not None and d != source.degree_of(in_raw[0]) + degree:
            raise SchemaError(ep + ".out", "inhomogeneous value")
        table[in_raw[0]] = out
    try:
        return GradedMap.from_table(source, target, degree, table)
    except (ValueError, KeyError) as e:
        raise SchemaError(path, str(e))


def load(path: str) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return ingest(text)


# ---------------------------------------------------------------------------
# Export (fixtures and instances back to scenario JSON)
# ---------------------------------------------------------------------------

def _combo_to_json(v: Vector, arity=1):
    R = v.module.ring
    out = []
    for name, c in sorted(v.coeffs.items()):
        label = name if arity == 1 else name.split(TENSOR_SEP)
        out.append([R.format(c), label])
    return out


def _operation_to_json(m: GradedMap, in_arity, out_arity):
    entries = []
    for e in m.source.basis():
        v = m.eval_basis(e.name)
        if v.is_zero():
            continue
        entries.append({
            "in": list(m.source.parts_of(e.name)),
            "out": _combo_to_json(v, out_arity),
        })
    return {"degree": m.degree, "entries": entries}


def export_bialgebra(inst: BialgebraData, ring_name: str = None) -> dict:
    """Scenario dict reproducing the instance (drop semantics included)."""
    module = inst.module
    ring_label = ring_name or repr(module.ring)
    doc = {
        "schema_version": 1,
        "kind": "bialgebra",
        "name": inst.name,
        "ring": ring_label,
        "module": {"basis": [{"name": e.name, "degree": e.degree}
                             for e in module.basis()]},
        "mu": _operation_to_json(inst.mu, 2, 1),
        "lambda": _operation_to_json(inst.lam, 1, 2),
        "eta": _combo_to_json(inst.eta),
    }
    if inst.safe_names != module.basis_names():
        doc["safe"] = list(inst.safe_names)
    if inst.differential is not None:
        doc["differential"] = _operation_to_json(inst.differential, 1, 1)
    return doc


def structurally_equal(a: BialgebraData, b: BialgebraData) -> bool:
    """Same basis, degrees, unit, window, and full operation tables."""
    if a.module != b.module or a.eta != b.eta:
        return False
    if tuple(a.safe_names) != tuple(b.safe_names):
        return False
    if a.mu.degree != b.mu.degree or a.lam.degree != b.lam.degree:
        return False
    A2 = tensor(a.module, a.module)
    return (all(a.mu.eval_basis(e.name) == b.mu.eval_basis(e.name)
                for e in A2.basis())
            and all(a.lam.eval_basis(e.name) == b.lam.eval_basis(e.name)
                    for e in a.module.basis()))
