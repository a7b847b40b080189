"""Curated structures and seeded generators of test pairs.

Fixture files live in ``pncalc/data/fixtures`` in the CLI input format, with
two extra keys: ``expected`` (check name -> status of a full-suite run) and
``notes``. Generators validate what they emit with the engine itself.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .errors import GenerationFailed, UnknownFixture
from .expr import Chart
from .pn import is_admissible, is_compatible, is_nijenhuis, is_poisson
from .sampling import make_rng, random_poly, random_univariate
from .structure import Entry, StructureDef, structure_from_dict

FIXTURE_NAMES = ("FIX-0", "FIX-A", "FIX-B", "FIX-C")
GENERATOR_KINDS = ("dim2-general", "dim4-blockdiag")

CANONICAL_COORDS = ["x1", "x2", "y1", "y2"]
CANONICAL_P = [Entry(1, 3, "1"), Entry(2, 4, "1")]


@dataclass
class Fixture:
    name: str
    structure: StructureDef
    expected: dict
    notes: str


def fixture_path(name):
    if name not in FIXTURE_NAMES:
        raise UnknownFixture(name)
    return resources.files("pncalc") / "data" / "fixtures" / f"{name}.json"


def load_fixture(name):
    data = json.loads(fixture_path(name).read_text(encoding="utf-8"))
    sdef = structure_from_dict(data)
    return Fixture(name, sdef, data.get("expected", {}), data.get("notes", ""))


def _validate(sdef, want_compatible):
    s = sdef.build()
    ok = bool(is_poisson(s.P)) and bool(is_nijenhuis(s.N)) and bool(is_admissible(s.P, s.N))
    return ok and bool(is_compatible(s.P, s.N)) == want_compatible


def random_compatible(seed, kind):
    """Seeded compatible pair of the given kind, validated before returning."""
    if kind not in GENERATOR_KINDS:
        raise ValueError(f"unknown generator kind {kind!r}; expected one of {GENERATOR_KINDS}")
    rng = make_rng(f"compatible:{kind}:{seed}")
    if kind == "dim2-general":
        chart = Chart(("x", "y"))
        p = random_poly(chart, rng)
        f = random_poly(chart, rng)
        sdef = StructureDef(
            2, ["x", "y"], [Entry(1, 2, str(p))], [Entry(1, 1, str(f)), Entry(2, 2, str(f))],
            name=f"random-{kind}-{seed}",
        )
    else:
        chart = Chart(tuple(CANONICAL_COORDS))
        g1 = random_univariate(chart, rng, 1)
        g2 = random_univariate(chart, rng, 2)
        diag = [g1, g2, g1, g2]
        sdef = StructureDef(
            4, list(CANONICAL_COORDS), list(CANONICAL_P),
            [Entry(i, i, str(g)) for i, g in enumerate(diag, start=1)],
            name=f"random-{kind}-{seed}",
        )
    if not _validate(sdef, True):
        raise GenerationFailed(f"generated {kind} structure (seed {seed}) is not compatible")
    return sdef


def random_admissible_incompatible(seed, max_tries=50):
    """Canonical P on n = 4 with N = f Id for a random non-constant f."""
    chart = Chart(tuple(CANONICAL_COORDS))
    rng = make_rng(f"incompatible:{seed}")
    for _ in range(max_tries):
        f = random_poly(chart, rng, allow_constant=False)
        sdef = StructureDef(
            4, list(CANONICAL_COORDS), list(CANONICAL_P),
            [Entry(i, i, str(f)) for i in range(1, 5)],
            name=f"random-incompatible-{seed}",
        )
        if _validate(sdef, False):
            return sdef
    raise GenerationFailed(f"no admissible incompatible pair found for seed {seed}")
