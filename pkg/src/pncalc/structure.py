"""Structure-definition files: (chart, P, N, volume density, kmax) as data.

Accepted layout (JSON shown, TOML uses the same keys with ``[[P]]`` and
``[[N]]`` tables)::

    {"dim": 2, "coords": ["x", "y"],
     "P": [{"i": 1, "j": 2, "expr": "1"}],
     "N": [{"i": 1, "j": 1, "expr": "x"}, {"i": 2, "j": 2, "expr": "x"}],
     "volume": "1", "kmax": 3}

P entries are upper triangular (i < j); N entries are N^i_j.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import tomli

from .errors import PNError, StructureParseError, ValidationError
from .expr import Chart
from .tensor import EndoField, Multivector

OPTIONAL_KEYS = {"name", "notes", "expected", "volume", "kmax"}
REQUIRED_KEYS = {"dim", "coords", "P", "N"}


@dataclass(frozen=True)
class Entry:
    i: int
    j: int
    expr: str

    def to_dict(self):
        return {"i": self.i, "j": self.j, "expr": self.expr}


@dataclass
class Structure:
    """A parsed structure: engine objects ready for the checks."""

    chart: Chart
    P: Multivector
    N: EndoField
    rho: object
    kmax: int


@dataclass
class StructureDef:
    dim: int
    coords: list
    P: list
    N: list
    volume: str = "1"
    kmax: int = 3
    name: str | None = None
    extra: dict = field(default_factory=dict, compare=False)

    def to_dict(self):
        out = {
            "dim": self.dim,
            "coords": list(self.coords),
            "P": [e.to_dict() for e in self.P],
            "N": [e.to_dict() for e in self.N],
            "volume": self.volume,
            "kmax": self.kmax,
        }
        if self.name is not None:
            out = {"name": self.name, **out}
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def digest(self):
        payload = dict(self.to_dict())
        payload.pop("name", None)
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def build(self):
        chart = Chart(tuple(self.coords))
        P = Multivector(chart, 2, {(e.i, e.j): chart.parse(e.expr) for e in self.P})
        N = EndoField.from_entries(chart, {(e.i, e.j): chart.parse(e.expr) for e in self.N})
        return Structure(chart, P, N, chart.parse(self.volume), self.kmax)


def _int(value, what):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{what} must be an integer, got {value!r}")
    return value


def _entries(raw, key, dim, chart, upper):
    if not isinstance(raw, list):
        raise ValidationError(f"{key} must be a list of {{i, j, expr}} entries")
    seen = set()
    out = []
    for pos, item in enumerate(raw):
        where = f"{key}[{pos}]"
        if not isinstance(item, dict) or set(item) != {"i", "j", "expr"}:
            raise ValidationError(f"{where} must have exactly the keys i, j, expr")
        i, j = _int(item["i"], f"{where}.i"), _int(item["j"], f"{where}.j")
        if not (1 <= i <= dim and 1 <= j <= dim):
            raise ValidationError(f"{where}: index ({i}, {j}) outside 1..{dim}")
        if upper and i >= j:
            raise ValidationError(f"{where}: P entries need i < j, got ({i}, {j})")
        if (i, j) in seen:
            raise ValidationError(f"{where}: duplicate entry ({i}, {j})")
        seen.add((i, j))
        expr = item["expr"]
        if isinstance(expr, int) and not isinstance(expr, bool):
            expr = str(expr)
        if not isinstance(expr, str):
            raise ValidationError(f"{where}.expr must be a string")
        try:
            chart.parse(expr)
        except PNError as exc:
            raise ValidationError(f"{where}.expr {expr!r}: {exc}") from exc
        out.append(Entry(i, j, expr))
    return out


def structure_from_dict(data):
    """Validate a decoded document and return a StructureDef."""
    if not isinstance(data, dict):
        raise ValidationError("a structure definition must be a mapping")
    missing = REQUIRED_KEYS - set(data)
    if missing:
        raise ValidationError(f"missing keys: {', '.join(sorted(missing))}")
    unknown = set(data) - REQUIRED_KEYS - OPTIONAL_KEYS
    if unknown:
        raise ValidationError(f"unknown keys: {', '.join(sorted(unknown))}")
    dim = _int(data["dim"], "dim")
    if dim < 1:
        raise ValidationError("dim must be at least 1")
    coords = data["coords"]
    if not isinstance(coords, list) or len(coords) != dim:
        raise ValidationError(f"coords must be a list of {dim} names")
    try:
        chart = Chart(tuple(coords))
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    P = _entries(data["P"], "P", dim, chart, upper=True)
    N = _entries(data["N"], "N", dim, chart, upper=False)
    volume = data.get("volume", "1")
    if isinstance(volume, int) and not isinstance(volume, bool):
        volume = str(volume)
    if not isinstance(volume, str):
        raise ValidationError("volume must be an expression string")
    try:
        rho = chart.parse(volume)
    except PNError as exc:
        raise ValidationError(f"volume {volume!r}: {exc}") from exc
    if rho.is_zero():
        raise ValidationError("volume density must not be zero")
    kmax = _int(data.get("kmax", 3), "kmax")
    if kmax < 1:
        raise ValidationError("kmax must be at least 1")
    name = data.get("name")
    extra = {k: data[k] for k in ("notes", "expected") if k in data}
    return StructureDef(dim, list(coords), P, N, volume, kmax, name, extra)


_TOML_POS = re.compile(r"line (\d+), column (\d+)")


def parse_structure_text(text, fmt="json"):
    if fmt == "toml":
        try:
            data = tomli.loads(text)
        except tomli.TOMLDecodeError as exc:
            line, col = getattr(exc, "lineno", None), getattr(exc, "colno", None)
            if line is None:
                m = _TOML_POS.search(str(exc))
                line, col = (int(m[1]), int(m[2])) if m else (None, None)
            msg = getattr(exc, "msg", str(exc))
            raise StructureParseError(f"invalid TOML: {msg}", line, col) from exc
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise StructureParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    return structure_from_dict(data)


def load_structure(path):
    """Read a JSON or TOML structure file (chosen by the .toml suffix)."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    fmt = "toml" if path.suffix.lower() == ".toml" else "json"
    return parse_structure_text(text, fmt)
