"""Acceptance criteria 1-9, each an exact-zero check with a time budget.

Every test prints one line ``criterion N: PASS|FAIL (...)``. Run the module
directly (``python tests/test_acceptance.py``) to get the nine lines without
pytest's capture.
"""

import json
import sys
import time
from pathlib import Path

import pytest

from pncalc.calculus import schouten
from pncalc.cli import run_structure, strip_elapsed
from pncalc.expr import Chart
from pncalc.fixtures import (
    FIXTURE_NAMES,
    load_fixture,
    random_admissible_incompatible,
    random_compatible,
)
from pncalc.modular import (
    class_representative_checks,
    cocycle_check,
    hierarchy_consistency,
    modular_defining_residual,
    mu_independence_check,
    recursion_checks,
    relation_check,
    xi_N_via_definition,
)
from pncalc.pn import (
    bm_operator_check,
    concomitant_abstract,
    concomitant_coord,
    corollary_check,
    d_trace,
    full_compat_report,
    is_compatible,
    trace_identity_check,
)
from pncalc.sampling import make_rng, random_bivector, random_form, random_poly

GOLDEN = Path(__file__).parent / "golden"
COMPATIBLE_FIXTURES = ("FIX-0", "FIX-A", "FIX-B")


def fixture(name):
    return load_fixture(name).structure.build()


def compatible_pairs(count=10):
    kinds = ("dim2-general", "dim4-blockdiag")
    return [random_compatible(i, kinds[i % 2]).build() for i in range(count)]


def incompatible_pairs(count=10):
    return [random_admissible_incompatible(i).build() for i in range(count)]


def report(number, ok, detail, elapsed, budget):
    within = elapsed <= budget
    status = "PASS" if ok and within else "FAIL"
    print(f"criterion {number}: {status} ({detail}; {elapsed:.1f}s of {budget}s)")
    return ok and within


def timed(fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    return ok, detail, time.perf_counter() - t0


# -- criteria ---------------------------------------------------------------


def criterion_1():
    structures = [fixture(n) for n in FIXTURE_NAMES] + compatible_pairs() + incompatible_pairs()
    rng = make_rng("acceptance:1")
    bad = 0
    for s in structures:
        for _ in range(5):
            if not trace_identity_check(s.P, s.N, random_form(s.chart, rng, 1)).is_zero():
                bad += 1
    return bad == 0, f"{len(structures)} structures x 5 one-forms, {bad} nonzero residuals"


def criterion_2():
    structures = [fixture(n) for n in COMPATIBLE_FIXTURES] + compatible_pairs()
    rng = make_rng("acceptance:2")
    bad = total = 0
    for s in structures:
        for _ in range(3):
            total += 1
            bad += not corollary_check(s.P, s.N, random_poly(s.chart, rng)).is_zero()
        for k in range(s.chart.dim + 1):
            total += 1
            bad += not bm_operator_check(s.P, s.N, random_form(s.chart, rng, k)).is_zero()
    return bad == 0, f"{total} residuals on {len(structures)} compatible structures, {bad} nonzero"


def criterion_3():
    structures = compatible_pairs() + incompatible_pairs()
    disagreements = []
    for i, s in enumerate(structures):
        r = full_compat_report(s.P, s.N, trials=8, seed=0)
        again = full_compat_report(s.P, s.N, trials=8, seed=0)
        expected = i < 10
        if not r.conditions_agree() or r.conditions[0] != expected or r.witnesses != again.witnesses:
            disagreements.append(i)
    return not disagreements, f"20 structures, disagreements at {disagreements or 'none'}"


def criterion_4():
    bad = []
    for name in FIXTURE_NAMES:
        s = fixture(name)
        rho = 1 + s.chart.coord(1) ** 2
        xi1, xi2 = xi_N_via_definition(s.N), xi_N_via_definition(s.N, rho)
        if xi1 != d_trace(s.N) or xi2 != xi1:
            bad.append(name)
    return not bad, f"4 Nijenhuis fixtures, failures: {bad or 'none'}"


def criterion_5():
    failures = []
    for name in ("FIX-A", "FIX-B"):
        s = fixture(name)
        rho2 = 1 + s.chart.coord(1) ** 2
        failures += [f"{name}:{r.name}" for r in hierarchy_consistency(s.P, s.N, 3) if not r.passed]
        for k in (1, 2, 3):
            if not mu_independence_check(s.P, s.N, k, s.chart.one, rho2).is_zero():
                failures.append(f"{name}:mu[{k}]")
            if not relation_check(s.P, s.N, k).is_zero():
                failures.append(f"{name}:relation[{k}]")
            if not cocycle_check(s.P, s.N, k).is_zero():
                failures.append(f"{name}:cocycle[{k}]")
        if not all(r.is_zero() for r in recursion_checks(s.P, s.N, 3)["recursion"]):
            failures.append(f"{name}:recursion")
    return not failures, f"FIX-A, FIX-B at kmax 3, failures: {failures or 'none'}"


def criterion_6():
    failures = []
    for name in COMPATIBLE_FIXTURES:
        s = fixture(name)
        failures += [f"{name}:{r.name}" for r in class_representative_checks(s.P, s.N, 3) if not r.passed]
    return not failures, f"3 compatible fixtures at kmax 3, failures: {failures or 'none'}"


def criterion_7():
    s = fixture("FIX-C")
    compat = is_compatible(s.P, s.N)
    r1 = full_compat_report(s.P, s.N, trials=8, seed=0)
    r2 = full_compat_report(s.P, s.N, trials=8, seed=0)
    derivation = dict(r1.witnesses)
    has_fg = any(
        key in derivation and {"f", "g"} <= set(derivation[key])
        for key in ("cond_dN_derivation", "cond_dP_derivation", "cond_function_form")
    )
    rng = make_rng("acceptance:7")
    eq1 = all(
        trace_identity_check(s.P, s.N, random_form(s.chart, rng, 1)).is_zero() for _ in range(5)
    )
    ok = (
        not compat
        and compat.witness is not None
        and not r1.cond_dN_derivation
        and has_fg
        and eq1
        and r1.witnesses == r2.witnesses
    )
    return ok, f"compatible={bool(compat)}, (f,g) witness={has_fg}, eq1 zero={eq1}"


def criterion_8():
    admissible = [fixture(n) for n in FIXTURE_NAMES] + compatible_pairs() + incompatible_pairs()
    rng = make_rng("acceptance:8")
    conc_bad = mod_bad = 0
    for s in admissible:
        C = concomitant_coord(s.P, s.N)
        for _ in range(2):
            a, b = random_form(s.chart, rng, 1), random_form(s.chart, rng, 1)
            conc_bad += concomitant_abstract(s.P, s.N, a, b) != C.contract(a, b)
        rho = 1 + s.chart.coord(1) ** 2
        for _ in range(10):
            mod_bad += not modular_defining_residual(s.P, rho, random_poly(s.chart, rng)).is_zero()
    sch_bad = 0
    for seed in range(10):
        chart = Chart(("x", "y", "z")) if seed % 2 else Chart(("x1", "x2", "y1", "y2"))
        P = random_bivector(chart, make_rng(f"acceptance:8:{seed}"))
        S = schouten(P, P)
        n = chart.dim
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                for k in range(j + 1, n + 1):
                    cyc = chart.zero
                    for l in range(1, n + 1):
                        cyc = cyc + P[l, i] * P[j, k].diff(l) + P[l, j] * P[k, i].diff(l) + P[l, k] * P[i, j].diff(l)
                    sch_bad += S[i, j, k] != -2 * cyc
    ok = conc_bad == mod_bad == sch_bad == 0
    return ok, f"mismatches: concomitant {conc_bad}, modular {mod_bad}, schouten {sch_bad}"


def criterion_9():
    expected = {"I_1": "2*x", "X^(1)": "(0, -1)", "X^(2)": "(0, -x)", "xi_N": "(2, 0)"}
    golden_text = (GOLDEN / "FIX-A.json").read_text()
    golden = json.loads(golden_text)
    values_ok = all(golden["computed"].get(k) == v for k, v in expected.items())
    same = True
    for name in FIXTURE_NAMES:
        fresh = strip_elapsed(run_structure(load_fixture(name).structure).to_json())
        text = json.dumps(fresh, indent=2) + "\n"
        same &= text == (GOLDEN / f"{name}.json").read_text()
    return values_ok and same, f"FIX-A values {'match' if values_ok else 'differ'}, golden files {'identical' if same else 'differ'}"


CRITERIA = [
    (1, criterion_1, 120),
    (2, criterion_2, 120),
    (3, criterion_3, 180),
    (4, criterion_4, 60),
    (5, criterion_5, 180),
    (6, criterion_6, 60),
    (7, criterion_7, 60),
    (8, criterion_8, 180),
    (9, criterion_9, 60),
]


@pytest.mark.parametrize("number, fn, budget", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, fn, budget, capsys):
    ok, detail, elapsed = timed(fn)
    with capsys.disabled():
        sys.stdout.write("\n")
        passed = report(number, ok, detail, elapsed, budget)
    assert passed, detail


if __name__ == "__main__":
    results = [report(n, *timed(fn), b) for n, fn, b in CRITERIA]
    sys.exit(0 if all(results) else 1)
