"""Reading and writing extension descriptions ("ramify-spec/1" JSON).

A file looks like::

    {"schema": "ramify-spec/1",
     "name": "sqrt2",
     "base": {"kind": "padic", "p": 2},
     "steps": [{"type": "eisenstein", "coeffs": ["-2", "0", "1"]}],
     "options": {"precision": 32, "m_grid": 4, "catalog": {"e_max": 4, "perturb_den": 4}}}

Coefficient literals are strings: integers over Q_p, polynomials in t over
F_p((t)).  Above the first floor a literal may also be a list of coordinates
over the floor below.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .exactmath import fmt_rat
from .galois import ExtensionSpec
from .localfield import Eisenstein, GroundField, Unramified

SCHEMA = "ramify-spec/1"


class SpecError(ValueError):
    """Schema violation; ``pointer`` names the offending field (JSON pointer)."""

    def __init__(self, pointer: str, msg: str):
        super().__init__(f"{pointer or '/'}: {msg}")
        self.pointer = pointer


@dataclass(frozen=True)
class SpecOptions:
    precision: int | None = None
    m_grid: int | None = None
    e_max: int | None = None
    perturb_den: int | None = None


@dataclass(frozen=True)
class LoadedSpec:
    spec: ExtensionSpec
    options: SpecOptions = field(default_factory=SpecOptions)
    expected: dict = field(default_factory=dict)


def _need(obj, key, typ, ptr):
    if not isinstance(obj, dict) or key not in obj:
        raise SpecError(ptr, f"missing field {key!r}")
    val = obj[key]
    if not isinstance(val, typ) or isinstance(val, bool):
        raise SpecError(f"{ptr}/{key}", f"expected {getattr(typ, '__name__', typ)}")
    return val


def _literal(x, ptr, depth=0):
    if isinstance(x, bool):
        raise SpecError(ptr, "booleans are not coefficient literals")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        if not x.strip():
            raise SpecError(ptr, "empty literal")
        try:
            return int(x)
        except ValueError:
            return x.strip()
    if isinstance(x, list) and depth < 4:
        return tuple(_literal(y, f"{ptr}/{i}", depth + 1) for i, y in enumerate(x))
    raise SpecError(ptr, f"bad coefficient literal {x!r}")


def _step(raw, ptr):
    if not isinstance(raw, dict):
        raise SpecError(ptr, "step must be an object")
    kind = raw.get("type")
    if kind == "unramified":
        deg = _need(raw, "degree", int, ptr)
        if deg < 1:
            raise SpecError(f"{ptr}/degree", "degree must be positive")
        mod = raw.get("modulus")
        if mod is not None:
            if not isinstance(mod, list) or len(mod) != deg + 1:
                raise SpecError(f"{ptr}/modulus", f"modulus needs {deg + 1} integer entries")
            try:
                mod = tuple(int(c) for c in mod)
            except (TypeError, ValueError):
                raise SpecError(f"{ptr}/modulus", "modulus entries must be integers") from None
        return Unramified(deg, mod)
    if kind == "eisenstein":
        coeffs = _need(raw, "coeffs", list, ptr)
        if len(coeffs) < 3:
            raise SpecError(f"{ptr}/coeffs", "an Eisenstein polynomial has degree >= 2")
        return Eisenstein(tuple(_literal(c, f"{ptr}/coeffs/{i}") for i, c in enumerate(coeffs)))
    raise SpecError(f"{ptr}/type", f"unknown step type {kind!r}")


def _opt_int(opts, key, ptr, lo=1):
    if key not in opts:
        return None
    v = opts[key]
    if not isinstance(v, int) or isinstance(v, bool) or v < lo:
        raise SpecError(f"{ptr}/{key}", f"expected an integer >= {lo}")
    return v


def parse_spec(doc: dict) -> LoadedSpec:
    if not isinstance(doc, dict):
        raise SpecError("", "top level must be an object")
    schema = doc.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise SpecError("/schema", f"unsupported schema {schema!r}")
    base = _need(doc, "base", dict, "")
    kind = _need(base, "kind", str, "/base")
    p = _need(base, "p", int, "/base")
    try:
        ground = GroundField(kind, p)
    except ValueError as exc:
        raise SpecError("/base", str(exc)) from None
    steps = _need(doc, "steps", list, "")
    parsed = tuple(_step(s, f"/steps/{i}") for i, s in enumerate(steps))
    gen = doc.get("generator")
    if gen is not None:
        gen = _literal(gen, "/generator")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise SpecError("/name", "expected a string")
    opts = doc.get("options", {})
    if not isinstance(opts, dict):
        raise SpecError("/options", "expected an object")
    cat = opts.get("catalog", {})
    if not isinstance(cat, dict):
        raise SpecError("/options/catalog", "expected an object")
    options = SpecOptions(
        precision=_opt_int(opts, "precision", "/options", 4),
        m_grid=_opt_int(opts, "m_grid", "/options"),
        e_max=_opt_int(cat, "e_max", "/options/catalog", 1),
        perturb_den=_opt_int(cat, "perturb_den", "/options/catalog", 1),
    )
    expected = doc.get("expected", {})
    if not isinstance(expected, dict):
        raise SpecError("/expected", "expected an object")
    spec = ExtensionSpec(ground, parsed, name, gen)
    validate_steps(spec)
    return LoadedSpec(spec, options, expected)


def validate_steps(spec: ExtensionSpec, prec: int = 8):
    """Build the tower floor by floor so a bad step is reported with its pointer."""
    from .localfield import TowerField
    F = TowerField(spec.ground, (), prec)
    for i, st in enumerate(spec.steps):
        try:
            F = F.extend(st)
        except (ValueError, TypeError, ArithmeticError) as exc:
            raise SpecError(f"/steps/{i}", str(exc)) from None


def load_spec(path) -> LoadedSpec:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError("", f"not JSON: {exc}") from None
    return parse_spec(doc)


# ---------------------------------------------------------------- writing

def _lit_out(x):
    if isinstance(x, (tuple, list)):
        return [_lit_out(y) for y in x]
    return str(x)


def step_json(st) -> dict:
    if isinstance(st, Unramified):
        out = {"type": "unramified", "degree": st.degree}
        if st.modulus is not None:
            out["modulus"] = list(st.modulus)
        return out
    return {"type": "eisenstein", "coeffs": [_lit_out(c) for c in st.coeffs]}


def spec_json(spec: ExtensionSpec, expected: dict | None = None) -> dict:
    doc = {"schema": SCHEMA, "name": spec.name,
           "base": {"kind": spec.ground.kind, "p": spec.ground.p},
           "steps": [step_json(s) for s in spec.steps]}
    if spec.generator is not None:
        doc["generator"] = _lit_out(spec.generator)
    if expected:
        doc["expected"] = {k: fmt_rat(v) if isinstance(v, (int, Fraction)) else v
                           for k, v in expected.items()}
    return doc
