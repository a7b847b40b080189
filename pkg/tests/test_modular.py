import pytest
from hypothesis import given

from helpers import X3, form, multivector, poly, seeds
from pncalc.calculus import apply_vf, ext_d, int_vec
from pncalc.errors import BadDegree, NotCompatible, PreconditionFailed
from pncalc.fixtures import random_admissible_incompatible, random_compatible
from pncalc.modular import (
    VolumeDensity,
    build_hierarchy,
    class_representative_checks,
    cocycle_check,
    hamiltonian_vf,
    hierarchy_consistency,
    modular_defining_residual,
    modular_form_identity_check,
    modular_vf,
    mu_independence_check,
    pn_modular_vf,
    poisson_bracket,
    recursion_checks,
    relation_check,
    xi_N_via_definition,
)
from pncalc.pn import d_trace
from pncalc.tensor import DiffForm, EndoField, Multivector, endo_bivector

COMPATIBLE = ("FIX-0", "FIX-A", "FIX-B")


def vec(chart, *vals):
    return Multivector.from_list(chart, list(vals))


def divergence_oracle(P, rho, f):
    """div_mu(H_f) from d(i_{H_f} mu) = L_{H_f} mu, read on the top form."""
    mu = DiffForm.top(P.chart, rho)
    top = ext_d(int_vec(hamiltonian_vf(P, f), mu))
    return top[tuple(range(1, P.chart.dim + 1))] / rho


class TestFixA:
    def test_hamiltonian(self, fx):
        s = fx["FIX-A"]
        x, y = s.chart.coords()
        assert hamiltonian_vf(s.P, x) == vec(s.chart, 0, 1)
        assert poisson_bracket(s.P, x, y) == 1

    def test_modular_field_of_np(self, fx):
        s = fx["FIX-A"]
        NP = endo_bivector(s.N, s.P).to_multivector()
        assert modular_vf(NP) == vec(s.chart, 0, -1)

    def test_modular_field_with_density(self, fx):
        s = fx["FIX-A"]
        x, y = s.chart.coords()
        rho = 1 + x**2
        assert modular_vf(s.P, rho) == vec(s.chart, 0, -2 * x / rho)

    def test_hierarchy_values(self, fx):
        s = fx["FIX-A"]
        x, _ = s.chart.coords()
        assert pn_modular_vf(s.P, s.N, 1) == vec(s.chart, 0, -1)
        assert pn_modular_vf(s.P, s.N, 2) == vec(s.chart, 0, -x)
        h = build_hierarchy(s.P, s.N, 2)
        assert h.raw_modular_vfs[2] == vec(s.chart, 0, -2 * x)
        assert h.functions == [2 * x, x**2]

    def test_modular_form_identity_example(self, fx):
        s = fx["FIX-A"]
        _, y = s.chart.coords()
        alpha = DiffForm.from_list(s.chart, [y, 0])
        assert modular_form_identity_check(s.P, s.chart.one, alpha).is_zero()

    def test_xi(self, fx):
        s = fx["FIX-A"]
        assert xi_N_via_definition(s.N) == DiffForm.from_list(s.chart, [2, 0])


class TestDefinitions:
    @pytest.mark.parametrize("name", ["FIX-A", "FIX-B", "FIX-C"])
    def test_closed_form_vs_divergence(self, fx, name):
        s = fx[name]
        rho = 1 + s.chart.coord(1) ** 2
        for P in (s.P, endo_bivector(s.N, s.P).to_multivector()):
            X = modular_vf(P, rho)
            for seed in range(4):
                f = poly(s.chart, seed)
                assert modular_defining_residual(P, rho, f).is_zero()
                assert apply_vf(X, f) == divergence_oracle(P, rho, f)

    @given(seeds)
    def test_form_identity_random(self, s):
        P = multivector(X3, s, 2)
        rho = 2 + X3.coord(2) ** 2
        assert modular_form_identity_check(P, rho, form(X3, s, 1)).is_zero()

    def test_volume_density_guards(self, fx):
        chart = fx["FIX-A"].chart
        with pytest.raises(ValueError):
            VolumeDensity(chart.zero)
        with pytest.raises(ValueError):
            VolumeDensity(chart.coord(1))
        assert VolumeDensity(1 + chart.coord(1) ** 2).rho == 1 + chart.coord(1) ** 2


class TestHierarchy:
    @pytest.mark.parametrize("name", COMPATIBLE)
    def test_relation_and_cocycle(self, fx, name):
        s = fx[name]
        for k in (1, 2, 3):
            assert relation_check(s.P, s.N, k).is_zero()
            assert cocycle_check(s.P, s.N, k).is_zero()

    def test_fix0_all_zero(self, fx):
        s = fx["FIX-0"]
        h = build_hierarchy(s.P, s.N, 3)
        assert all(X.is_zero() for X in h.modular_vfs)

    def test_mu_independence(self, fx):
        a, b = fx["FIX-A"], fx["FIX-B"]
        for k in (1, 2):
            assert mu_independence_check(a.P, a.N, k, a.chart.one, 1 + a.chart.coord(1) ** 2).is_zero()
        for k in (1, 2, 3):
            assert mu_independence_check(b.P, b.N, k, b.chart.one, 2 + b.chart.coord(1) ** 2).is_zero()

    @pytest.mark.parametrize("name", COMPATIBLE)
    def test_recursions(self, fx, name):
        s = fx[name]
        out = recursion_checks(s.P, s.N, 3)
        assert set(out) == {"recursion", "powers", "generalized"}
        assert all(r.is_zero() for rs in out.values() for r in rs)

    @pytest.mark.parametrize("name", COMPATIBLE)
    def test_consistency(self, fx, name):
        s = fx[name]
        results = hierarchy_consistency(s.P, s.N, 3)
        assert len(results) == 4 + 6 + 6
        assert all(r.passed for r in results)

    @pytest.mark.parametrize("seed", range(4))
    def test_generated_pairs(self, seed):
        kind = ("dim2-general", "dim4-blockdiag")[seed % 2]
        s = random_compatible(seed, kind).build()
        for k in (1, 2):
            assert relation_check(s.P, s.N, k).is_zero()
            assert cocycle_check(s.P, s.N, k).is_zero()
        assert all(r.is_zero() for rs in recursion_checks(s.P, s.N, 3).values() for r in rs)
        assert all(r.passed for r in class_representative_checks(s.P, s.N, 3))

    def test_gates(self, fx):
        s = fx["FIX-C"]
        with pytest.raises(NotCompatible):
            pn_modular_vf(s.P, s.N, 1)
        with pytest.raises(BadDegree):
            pn_modular_vf(fx["FIX-A"].P, fx["FIX-A"].N, 0)

    def test_negative_control(self, fx):
        s = fx["FIX-C"]
        rel = [relation_check(s.P, s.N, k, check=False) for k in (1, 2, 3)]
        rec = recursion_checks(s.P, s.N, 3, check=False)
        assert any(not r.is_zero() for r in rel) or any(
            not r.is_zero() for rs in rec.values() for r in rs
        )
        assert not relation_check(s.P, s.N, 1, check=False).is_zero()


class TestModularForm:
    @pytest.mark.parametrize("name", ["FIX-0", "FIX-A", "FIX-B", "FIX-C"])
    def test_equals_d_trace(self, fx, name):
        s = fx[name]
        rho = 1 + s.chart.coord(1) ** 2
        assert xi_N_via_definition(s.N) == d_trace(s.N)
        assert xi_N_via_definition(s.N, rho) == d_trace(s.N)

    def test_fix_b_value(self, fx):
        s = fx["FIX-B"]
        assert xi_N_via_definition(s.N).as_list() == [2, 2, 0, 0]

    def test_generated_nijenhuis(self):
        s = random_admissible_incompatible(5).build()
        assert xi_N_via_definition(s.N) == d_trace(s.N)

    def test_requires_nijenhuis(self, fx):
        chart = fx["FIX-A"].chart
        x, y = chart.coords()
        N = EndoField.from_entries(chart, {(1, 2): y**2, (2, 1): x, (1, 1): 1})
        with pytest.raises(PreconditionFailed):
            xi_N_via_definition(N)


class TestClassRepresentatives:
    @pytest.mark.parametrize("name", COMPATIBLE)
    def test_all_vanish(self, fx, name):
        s = fx[name]
        results = class_representative_checks(s.P, s.N, 3)
        assert [r.name for r in results if not r.passed] == []

    def test_trace_recursion_on_fix_a(self, fx):
        # N* d Tr N = 2x dx, d Tr N^2 = 4x dx, and 4x - 2x = 2x = (d Tr N^2)/2
        s = fx["FIX-A"]
        x, _ = s.chart.coords()
        d1, d2 = d_trace(s.N), d_trace(s.N.power(2))
        assert s.N.transpose_apply(d1).as_list() == [2 * x, 0]
        assert d2.as_list() == [4 * x, 0]
        assert d2 - s.N.transpose_apply(d1) == d2 / 2

    def test_fix_c_fails(self, fx):
        s = fx["FIX-C"]
        results = class_representative_checks(s.P, s.N, 3, check=False)
        failed = {r.name for r in results if not r.passed}
        assert "transpose[b]" in failed
        assert all(r.witness for r in results if not r.passed)
