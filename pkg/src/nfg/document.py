"""Textual graph documents.

A document is JSON (UTF-8, no comments) with this shape::

    {
      "format": 1,
      "alphabets": [{"id": "A", "size": 4, "field": {"p": 2, "k": 2}}],
      "variables": [{"id": "x", "alphabet": "A", "kind": "external"}],
      "factors": [
        {"id": "f", "ports": ["x"],
         "spec": {"kind": "dense", "values": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]}}
      ],
      "prefactor": [1.0, 0.0]
    }

``field`` and ``prefactor`` are optional (plain alphabet, prefactor 1).
Complex numbers are [re, im] pairs; dense values are flat, row-major with
the last port's index varying fastest.  Factor specs may instead name a
builtin kind: "equality", "delta", "sign_inverter", "levi_civita",
"fourier" (parameters are inferred from the ports).  Parsing is strict:
unknown fields, dangling references, and shape mismatches are rejected
with the JSON path of the offending field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import factors as builtins
from .errors import DocumentError
from .graph import Alphabet, FactorTensor, Nfg, Variable

FORMAT_VERSION = 1

_BUILTIN_KINDS = ("dense", "equality", "delta", "sign_inverter", "levi_civita", "fourier")


@dataclass(frozen=True)
class AlphabetDecl:
    id: str
    size: int
    field: tuple[int, int] | None = None


@dataclass(frozen=True)
class VariableDecl:
    id: str
    alphabet: str
    kind: str


@dataclass(frozen=True)
class FactorDecl:
    id: str
    ports: tuple[str, ...]
    kind: str
    values: tuple[tuple[float, float], ...] | None = None


@dataclass(frozen=True)
class NfgDocument:
    format_version: int
    alphabets: tuple[AlphabetDecl, ...]
    variables: tuple[VariableDecl, ...]
    factors: tuple[FactorDecl, ...]
    prefactor: tuple[float, float] = (1.0, 0.0)


def _want(value, path, kind, what):
    if kind is int and isinstance(value, bool):
        raise DocumentError(path, f"expected {what}, got a boolean")
    if not isinstance(value, kind):
        raise DocumentError(path, f"expected {what}, got {type(value).__name__}")
    return value


def _fields(obj, path, required, optional=()):
    _want(obj, path, dict, "an object")
    for key in obj:
        if key not in required and key not in optional:
            raise DocumentError(f"{path}.{key}", "unknown field")
    for key in required:
        if key not in obj:
            raise DocumentError(path, f"missing required field {key!r}")
    return obj


def _number(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DocumentError(path, f"expected a number, got {type(value).__name__}")
    return value


def _pair(value, path):
    _want(value, path, list, "a [re, im] pair")
    if len(value) != 2:
        raise DocumentError(path, f"expected a [re, im] pair, got length {len(value)}")
    return (_number(value[0], f"{path}[0]"), _number(value[1], f"{path}[1]"))


def _parse_alphabet(obj, path):
    _fields(obj, path, ("id", "size"), ("field",))
    field = None
    if "field" in obj:
        fobj = _fields(obj["field"], f"{path}.field", ("p", "k"))
        field = (
            _want(fobj["p"], f"{path}.field.p", int, "an integer"),
            _want(fobj["k"], f"{path}.field.k", int, "an integer"),
        )
    return AlphabetDecl(
        _want(obj["id"], f"{path}.id", str, "a string"),
        _want(obj["size"], f"{path}.size", int, "an integer"),
        field,
    )


def _parse_variable(obj, path):
    _fields(obj, path, ("id", "alphabet", "kind"))
    kind = _want(obj["kind"], f"{path}.kind", str, "a string")
    if kind not in ("external", "internal"):
        raise DocumentError(f"{path}.kind", f"kind must be 'external' or 'internal', got {kind!r}")
    return VariableDecl(
        _want(obj["id"], f"{path}.id", str, "a string"),
        _want(obj["alphabet"], f"{path}.alphabet", str, "a string"),
        kind,
    )


def _parse_factor(obj, path):
    _fields(obj, path, ("id", "ports", "spec"))
    ports = _want(obj["ports"], f"{path}.ports", list, "a list of variable ids")
    ports = tuple(
        _want(p, f"{path}.ports[{i}]", str, "a string") for i, p in enumerate(ports)
    )
    spec_path = f"{path}.spec"
    spec = _fields(obj["spec"], spec_path, ("kind",), ("values",))
    kind = _want(spec["kind"], f"{spec_path}.kind", str, "a string")
    if kind not in _BUILTIN_KINDS:
        raise DocumentError(f"{spec_path}.kind", f"unknown factor kind {kind!r}")
    values = None
    if kind == "dense":
        if "values" not in spec:
            raise DocumentError(spec_path, "dense factor spec requires 'values'")
        raw = _want(spec["values"], f"{spec_path}.values", list, "a list of [re, im] pairs")
        values = tuple(_pair(v, f"{spec_path}.values[{i}]") for i, v in enumerate(raw))
    elif "values" in spec:
        raise DocumentError(f"{spec_path}.values", f"factor kind {kind!r} takes no values")
    return FactorDecl(_want(obj["id"], f"{path}.id", str, "a string"), ports, kind, values)


def _check_references(doc: NfgDocument):
    alphabets = {}
    for i, a in enumerate(doc.alphabets):
        if a.id in alphabets:
            raise DocumentError(f"alphabets[{i}].id", f"duplicate alphabet id {a.id!r}")
        alphabets[a.id] = a
        if a.size < 1:
            raise DocumentError(f"alphabets[{i}].size", "size must be >= 1")
        if a.field is not None and a.size != a.field[0] ** a.field[1]:
            raise DocumentError(
                f"alphabets[{i}]", f"size {a.size} != p**k = {a.field[0] ** a.field[1]}"
            )
    variables = {}
    for i, v in enumerate(doc.variables):
        if v.id in variables:
            raise DocumentError(f"variables[{i}].id", f"duplicate variable id {v.id!r}")
        if v.alphabet not in alphabets:
            raise DocumentError(
                f"variables[{i}].alphabet", f"dangling reference to alphabet {v.alphabet!r}"
            )
        variables[v.id] = v
    seen_factors = set()
    for i, f in enumerate(doc.factors):
        path = f"factors[{i}]"
        if f.id in seen_factors:
            raise DocumentError(f"{path}.id", f"duplicate factor id {f.id!r}")
        seen_factors.add(f.id)
        port_alphabets = []
        for j, p in enumerate(f.ports):
            if p not in variables:
                raise DocumentError(f"{path}.ports[{j}]", f"dangling reference to variable {p!r}")
            port_alphabets.append(alphabets[variables[p].alphabet])
        _check_factor_shape(f, path, port_alphabets)


def _check_factor_shape(f: FactorDecl, path, port_alphabets):
    kind = f.kind
    if kind == "dense":
        expected = 1
        for a in port_alphabets:
            expected *= a.size
        if len(f.values) != expected:
            raise DocumentError(
                f"{path}.spec.values",
                f"got {len(f.values)} values, ports require {expected}",
            )
        return
    if kind == "equality":
        if len(f.ports) < 2:
            raise DocumentError(f"{path}.ports", "equality factor needs at least 2 ports")
        if len({a.id for a in port_alphabets}) != 1:
            raise DocumentError(f"{path}.ports", "equality ports must share one alphabet")
    elif kind == "delta":
        if len(f.ports) != 2:
            raise DocumentError(f"{path}.ports", f"delta takes 2 ports, got {len(f.ports)}")
        if len({a.id for a in port_alphabets}) != 1:
            raise DocumentError(f"{path}.ports", "delta ports must share one alphabet")
    elif kind == "sign_inverter":
        if len(f.ports) != 2:
            raise DocumentError(f"{path}.ports", f"sign_inverter takes 2 ports, got {len(f.ports)}")
        if len({a.id for a in port_alphabets}) != 1:
            raise DocumentError(f"{path}.ports", "sign_inverter ports must share one alphabet")
        if port_alphabets[0].field is None:
            raise DocumentError(f"{path}.ports", "sign_inverter needs a vector-space alphabet")
    elif kind == "levi_civita":
        if len(f.ports) != 3:
            raise DocumentError(f"{path}.ports", f"levi_civita takes 3 ports, got {len(f.ports)}")
        for j, a in enumerate(port_alphabets):
            if a.size != 3:
                raise DocumentError(
                    f"{path}.ports[{j}]", f"levi_civita needs size-3 alphabets, got {a.size}"
                )
    elif kind == "fourier":
        if len(f.ports) != 2:
            raise DocumentError(f"{path}.ports", f"fourier takes 2 ports, got {len(f.ports)}")
        shapes = {(a.size, a.field) for a in port_alphabets}
        if len(shapes) != 1 or port_alphabets[0].field is None:
            raise DocumentError(
                f"{path}.ports", "fourier needs two ports over one vector-space alphabet"
            )


def parse(text: str) -> NfgDocument:
    """Parse and fully validate a document; raises DocumentError with a
    line/column for syntax problems and a JSON path otherwise."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"line {e.lineno}, column {e.colno}", e.msg) from None
    top = _fields(data, "$", ("format", "alphabets", "variables", "factors"), ("prefactor",))
    version = _want(top["format"], "$.format", int, "an integer")
    if version != FORMAT_VERSION:
        raise DocumentError("$.format", f"unsupported format version {version}")
    doc = NfgDocument(
        version,
        tuple(
            _parse_alphabet(a, f"alphabets[{i}]")
            for i, a in enumerate(_want(top["alphabets"], "$.alphabets", list, "a list"))
        ),
        tuple(
            _parse_variable(v, f"variables[{i}]")
            for i, v in enumerate(_want(top["variables"], "$.variables", list, "a list"))
        ),
        tuple(
            _parse_factor(f, f"factors[{i}]")
            for i, f in enumerate(_want(top["factors"], "$.factors", list, "a list"))
        ),
        _pair(top["prefactor"], "$.prefactor") if "prefactor" in top else (1.0, 0.0),
    )
    _check_references(doc)
    return doc


def _fmt_number(x) -> str:
    if isinstance(x, int):
        return str(x)
    if x != x:
        return "NaN"
    if x == np.inf:
        return "Infinity"
    if x == -np.inf:
        return "-Infinity"
    return format(x, ".17g")


def _fmt_pair(pair) -> str:
    return f"[{_fmt_number(pair[0])}, {_fmt_number(pair[1])}]"


def _fmt_str(s) -> str:
    return json.dumps(s)


def serialize(doc: NfgDocument) -> str:
    """Canonical text form: fixed field order, floats at 17 significant
    digits, one declaration per line.  parse(serialize(doc)) == doc."""

    def alphabet_line(a):
        field = f', "field": {{"p": {a.field[0]}, "k": {a.field[1]}}}' if a.field else ""
        return f'{{"id": {_fmt_str(a.id)}, "size": {a.size}{field}}}'

    def variable_line(v):
        return (
            f'{{"id": {_fmt_str(v.id)}, "alphabet": {_fmt_str(v.alphabet)}, '
            f'"kind": {_fmt_str(v.kind)}}}'
        )

    def factor_line(f):
        ports = ", ".join(_fmt_str(p) for p in f.ports)
        if f.kind == "dense":
            values = ", ".join(_fmt_pair(v) for v in f.values)
            spec = f'{{"kind": "dense", "values": [{values}]}}'
        else:
            spec = f'{{"kind": {_fmt_str(f.kind)}}}'
        return f'{{"id": {_fmt_str(f.id)}, "ports": [{ports}], "spec": {spec}}}'

    def block(name, lines):
        if not lines:
            return f'  "{name}": []'
        body = ",\n".join(f"    {line}" for line in lines)
        return f'  "{name}": [\n{body}\n  ]'

    parts = [
        f'  "format": {doc.format_version}',
        block("alphabets", [alphabet_line(a) for a in doc.alphabets]),
        block("variables", [variable_line(v) for v in doc.variables]),
        block("factors", [factor_line(f) for f in doc.factors]),
        f'  "prefactor": {_fmt_pair(doc.prefactor)}',
    ]
    return "{\n" + ",\n".join(parts) + "\n}\n"


def build_nfg(doc: NfgDocument) -> Nfg:
    """Materialize a parsed document as a graph."""
    alphabets = {a.id: Alphabet(a.id, a.size, a.field) for a in doc.alphabets}
    variables = [Variable(v.id, alphabets[v.alphabet], v.kind) for v in doc.variables]
    by_id = {v.id: v for v in variables}
    tensors = []
    for f in doc.factors:
        port_alphabets = tuple(by_id[p].alphabet for p in f.ports)
        if f.kind == "dense":
            values = np.array([complex(re, im) for re, im in f.values])
        elif f.kind == "equality":
            values = builtins.equality_indicator(port_alphabets[0], len(f.ports)).values
        elif f.kind == "delta":
            values = builtins.kronecker_delta(port_alphabets[0]).values
        elif f.kind == "sign_inverter":
            values = builtins.sign_inverter(port_alphabets[0]).values
        elif f.kind == "levi_civita":
            values = builtins.levi_civita(port_alphabets[0]).values
        else:
            values = builtins.fourier_factor(port_alphabets[0]).values
        tensors.append(FactorTensor(f.id, f.ports, port_alphabets, values))
    return Nfg(
        alphabets.values(),
        variables,
        tensors,
        complex(doc.prefactor[0], doc.prefactor[1]),
    )


def doc_from_nfg(nfg: Nfg) -> NfgDocument:
    """Dense document for a graph, entities sorted by id."""
    return NfgDocument(
        FORMAT_VERSION,
        tuple(
            AlphabetDecl(a.id, a.size, a.field)
            for a in sorted(nfg.alphabets.values(), key=lambda a: a.id)
        ),
        tuple(
            VariableDecl(v.id, v.alphabet.id, v.kind)
            for v in sorted(nfg.variables.values(), key=lambda v: v.id)
        ),
        tuple(
            FactorDecl(
                f.id,
                f.ports,
                "dense",
                tuple((float(c.real), float(c.imag)) for c in f.flat()),
            )
            for f in sorted(nfg.factors.values(), key=lambda f: f.id)
        ),
        (float(nfg.prefactor.real), float(nfg.prefactor.imag)),
    )
