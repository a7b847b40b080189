import pytest

from pncalc.cli import run_structure
from pncalc.errors import GenerationFailed, UnknownFixture
from pncalc.fixtures import (
    FIXTURE_NAMES,
    load_fixture,
    random_admissible_incompatible,
    random_compatible,
)
from pncalc.modular import build_hierarchy
from pncalc.pn import (
    cond_dN_derivation,
    is_admissible,
    is_compatible,
    is_nijenhuis,
    is_poisson,
    trace_identity_check,
)
from pncalc.sampling import make_rng, random_form
from pncalc.tensor import endo_bivector


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_expected_statuses_reproduced(name):
    fx = load_fixture(name)
    report = run_structure(fx.structure)
    assert {c.name: c.status for c in report.checks} == fx.expected
    assert fx.notes


def test_unknown_fixture():
    with pytest.raises(UnknownFixture):
        load_fixture("FIX-Z")


def test_fixture_descriptions(fx):
    a = fx["FIX-A"]
    x, y = a.chart.coords()
    assert a.N.trace() == 2 * x
    b = fx["FIX-B"]
    assert b.chart.coord_names == ("x1", "x2", "y1", "y2")
    assert [b.N[i, i] for i in range(1, 5)] == [b.chart.coord(1), b.chart.coord(2)] * 2
    assert all(v.is_constant() for v in fx["FIX-0"].N.rows[0])


def test_fix0_hierarchy_vanishes(fx):
    s = fx["FIX-0"]
    report = run_structure(load_fixture("FIX-0").structure)
    assert not report.failed
    assert all(X.is_zero() for X in build_hierarchy(s.P, s.N, 3).modular_vfs)


@pytest.mark.parametrize("kind", ["dim2-general", "dim4-blockdiag"])
@pytest.mark.parametrize("seed", range(5))
def test_random_compatible(kind, seed):
    sdef = random_compatible(seed, kind)
    assert sdef.to_json() == random_compatible(seed, kind).to_json()
    s = sdef.build()
    assert is_compatible(s.P, s.N) and is_poisson(s.P) and is_nijenhuis(s.N)


def test_blockdiag_powers_are_poisson():
    s = random_compatible(2, "dim4-blockdiag").build()
    for k in range(4):
        Pk = endo_bivector(s.N.power(k), s.P).to_multivector()
        assert is_poisson(Pk)


def test_seeds_differ():
    outs = {random_compatible(seed, "dim2-general").to_json() for seed in range(6)}
    assert len(outs) > 1


def test_bad_kind():
    with pytest.raises(ValueError):
        random_compatible(0, "dim3")


def test_generation_failure_is_loud(monkeypatch):
    import pncalc.fixtures as fixtures

    monkeypatch.setattr(fixtures, "_validate", lambda sdef, want: False)
    with pytest.raises(GenerationFailed):
        fixtures.random_compatible(0, "dim2-general")
    with pytest.raises(GenerationFailed):
        fixtures.random_admissible_incompatible(0, max_tries=3)


@pytest.mark.parametrize("seed", range(4))
def test_random_incompatible_profile(seed):
    sdef = random_admissible_incompatible(seed)
    assert sdef.to_json() == random_admissible_incompatible(seed).to_json()
    s = sdef.build()
    assert is_admissible(s.P, s.N) and is_poisson(s.P) and is_nijenhuis(s.N)
    assert not is_compatible(s.P, s.N)
    alpha = random_form(s.chart, make_rng(seed), 1)
    assert trace_identity_check(s.P, s.N, alpha).is_zero()
    v = cond_dN_derivation(s.P, s.N)
    assert not v and "f" in v.witness
