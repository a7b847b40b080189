"""Modular vector fields of a Poisson-Nijenhuis hierarchy.

For a compatible pair (P, N) with P_k = N^k P and a volume form
mu = rho dx^1 ^ ... ^ dx^n this module computes the modular fields X^k_mu of
each P_k, the hierarchy X^(k) = X^k_mu - N X^{k-1}_mu, the fundamental
functions I_k = Tr(N^k)/k, the modular 1-form of (TM, N, [ , ]_N) from its
defining relation, and residuals of every representative-level identity
relating them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .calculus import (
    apply_vf,
    deformed_schouten,
    ext_d,
    int_biv,
    int_vec,
    lie_deriv,
    schouten,
)
from .errors import BadDegree, NotCompatible, PoleAtPoint, PreconditionFailed
from .pn import d_trace, hamiltonian, is_compatible, is_nijenhuis
from .report import FAIL, PASS, CheckResult, residual_witness
from .tensor import DiffForm, Multivector, bivector_sharp, endo_bivector, pairing

HALF = Fraction(1, 2)

__all__ = [
    "VolumeDensity",
    "Hierarchy",
    "build_hierarchy",
    "hamiltonian_vf",
    "poisson_bracket",
    "modular_vf",
    "modular_form_identity_check",
    "modular_defining_residual",
    "pn_modular_vf",
    "mu_independence_check",
    "relation_check",
    "recursion_checks",
    "cocycle_check",
    "hierarchy_consistency",
    "xi_N_via_definition",
    "class_representative_checks",
]


class VolumeDensity:
    """mu = rho dx^1 ^ ... ^ dx^n paired with lambda = rho^-1 d_1 ^ ... ^ d_n."""

    def __init__(self, rho, samples=16, seed=0):
        if rho.is_zero():
            raise ValueError("volume density must not vanish")
        self.rho = rho
        self.chart = rho.chart
        self._check_samples(samples, seed)

    def _check_samples(self, samples, seed):
        # the nowhere-zero hypothesis can only be spot-checked
        if self.rho.is_constant():
            return
        rng = random.Random(seed)
        for _ in range(samples):
            pt = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(self.chart.dim)]
            try:
                val = self.rho.eval_at(pt)
            except PoleAtPoint:
                continue
            if val == 0:
                raise ValueError(f"volume density {self.rho} vanishes at {pt}")

    @classmethod
    def unit(cls, chart):
        return cls(chart.one)

    @property
    def mu(self):
        return DiffForm.top(self.chart, self.rho)

    @property
    def lam(self):
        return Multivector.top(self.chart, 1 / self.rho)

    def __repr__(self):
        return f"VolumeDensity({self.rho})"


def _density(chart, rho):
    if rho is None:
        return VolumeDensity.unit(chart)
    if isinstance(rho, VolumeDensity):
        return rho
    return VolumeDensity(rho)


def hamiltonian_vf(P, f):
    """H^P_f = P df."""
    return hamiltonian(P, f)


def poisson_bracket(P, f, g):
    """{f, g}_P = <dg, H^P_f> = P^{ij} d_i f d_j g."""
    return apply_vf(hamiltonian(P, f), g)


def modular_vf(P, rho=None):
    """X^i = sum_j d_j P^{ij} + sum_j P^{ij} d_j(rho)/rho."""
    chart = P.chart
    vol = _density(chart, rho)
    n = chart.dim
    drho = [vol.rho.diff(j) for j in range(1, n + 1)]
    inv = 1 / vol.rho
    out = []
    for i in range(1, n + 1):
        s = chart.zero
        for j in range(1, n + 1):
            if i == j:
                continue
            pij = P[i, j]
            if pij.is_zero():
                continue
            s = s + pij.diff(j)
            if not drho[j - 1].is_zero():
                s = s + pij * drho[j - 1] * inv
        out.append(s)
    return Multivector.from_list(chart, out)


def _top_coeff(omega):
    return pairing(omega, Multivector.top(omega.chart))


def modular_defining_residual(P, rho, f):
    """<X_mu, df> rho - (coefficient of L_{H_f} mu on dx^1^...^dx^n)."""
    vol = _density(P.chart, rho)
    X = modular_vf(P, vol)
    lhs = apply_vf(X, f) * vol.rho
    return lhs - _top_coeff(lie_deriv(hamiltonian(P, f), vol.mu))


def modular_form_identity_check(P, rho, alpha):
    """Residual of <X_mu, alpha> mu = d i_{P alpha} mu + (i_P d alpha) mu.

    The sign of the last term is the one forced by the interior-product
    normalisation i_P(dx^i ^ dx^j) = P^{ij}.
    """
    vol = _density(P.chart, rho)
    X = modular_vf(P, vol)
    lhs = pairing(alpha, X) * vol.rho
    Pa = bivector_sharp(P, alpha)
    exact = _top_coeff(ext_d(int_vec(Pa, vol.mu)))
    return lhs - exact - int_biv(P, ext_d(alpha)).value() * vol.rho


# ---------------------------------------------------------------------------
# the hierarchy
# ---------------------------------------------------------------------------


@dataclass
class Hierarchy:
    bivectors: list
    powers: list
    functions: list
    modular_vfs: list
    raw_modular_vfs: list
    density: VolumeDensity

    @property
    def kmax(self):
        return len(self.functions)


def _gate(P, N, check):
    if check and not is_compatible(P, N):
        raise NotCompatible()


def build_hierarchy(P, N, kmax, rho=None, check=True):
    """P_0..P_kmax, N^0..N^kmax, I_1..I_kmax, X^(1)..X^(kmax), X^0_mu..X^kmax_mu."""
    _gate(P, N, check)
    if kmax < 1:
        raise BadDegree("kmax must be at least 1")
    vol = _density(P.chart, rho)
    powers = [N.power(0)]
    for _ in range(kmax):
        powers.append(powers[-1] @ N)
    bivectors = [P] + [endo_bivector(Nk, P).to_multivector() for Nk in powers[1:]]
    functions = [powers[k].trace() / k for k in range(1, kmax + 1)]
    raw = [modular_vf(Pk, vol) for Pk in bivectors]
    hier = [raw[k] - N.apply(raw[k - 1]) for k in range(1, kmax + 1)]
    return Hierarchy(bivectors, powers, functions, hier, raw, vol)


def pn_modular_vf(P, N, k, rho=None, check=True):
    """X^(k) = X^k_mu - N X^{k-1}_mu."""
    if k < 1:
        raise BadDegree("the hierarchy starts at k = 1")
    _gate(P, N, check)
    vol = _density(P.chart, rho)
    Pk = endo_bivector(N.power(k), P).to_multivector()
    Pk1 = endo_bivector(N.power(k - 1), P).to_multivector()
    return modular_vf(Pk, vol) - N.apply(modular_vf(Pk1, vol))


def mu_independence_check(P, N, k, rho1, rho2, check=True):
    return pn_modular_vf(P, N, k, rho1, check) - pn_modular_vf(P, N, k, rho2, check=False)


def relation_check(P, N, k, rho=None, check=True):
    """Residual of X^(k) + 1/2 P d(Tr N^k / k)."""
    Xk = pn_modular_vf(P, N, k, rho, check)
    Ik = N.power(k).trace() / k
    return Xk + HALF * hamiltonian(P, Ik)


def _x_n_q(N, Q, vol):
    """Modular field of the pair (N, Q): X_{NQ, mu} - N X_{Q, mu}."""
    NQ = endo_bivector(N, Q).to_multivector()
    return modular_vf(NQ, vol) - N.apply(modular_vf(Q, vol))


def recursion_checks(P, N, kmax, rho=None, check=True):
    """Residual lists for the three recursions of the hierarchy.

    (a) X^(k) - N X^(k-1), 2 <= k <= kmax;
    (b) N^{k-1} X^(1) - X^(k), 1 <= k <= kmax;
    (c) X_{N, N^k P} + N X_{N, N^{k-1} P} - X_{N^2, N^{k-1} P}, 1 <= k <= kmax - 1.
    """
    h = build_hierarchy(P, N, kmax, rho, check)
    X = h.modular_vfs
    a = [X[k - 1] - N.apply(X[k - 2]) for k in range(2, kmax + 1)]
    b = [h.powers[k - 1].apply(X[0]) - X[k - 1] for k in range(1, kmax + 1)]
    N2 = h.powers[2] if kmax >= 2 else N @ N
    c = [
        _x_n_q(N, h.bivectors[k], h.density)
        + N.apply(_x_n_q(N, h.bivectors[k - 1], h.density))
        - _x_n_q(N2, h.bivectors[k - 1], h.density)
        for k in range(1, kmax)
    ]
    return {"recursion": a, "powers": b, "generalized": c}


def cocycle_check(P, N, k, rho=None, check=True):
    """[P_k, X^(k)]; zero iff X^(k) is a d_{P_k}-cocycle."""
    Xk = pn_modular_vf(P, N, k, rho, check)
    Pk = endo_bivector(N.power(k), P).to_multivector()
    return schouten(Pk, Xk)


def _result(name, residual):
    w = residual_witness(residual)
    return CheckResult(name, PASS if w is None else FAIL, w)


def hierarchy_consistency(P, N, kmax, check=True):
    """Poisson property, pairwise Schouten commutation, involution of the I_k."""
    h = build_hierarchy(P, N, kmax, None, check)
    out = []
    for k, Pk in enumerate(h.bivectors):
        out.append(_result(f"poisson[P{k}]", schouten(Pk, Pk)))
    for j in range(len(h.bivectors)):
        for k in range(j + 1, len(h.bivectors)):
            out.append(_result(f"schouten[P{j},P{k}]", schouten(h.bivectors[j], h.bivectors[k])))
    for l in (0, 1):
        for j in range(1, kmax + 1):
            for k in range(j + 1, kmax + 1):
                br = poisson_bracket(h.bivectors[l], h.functions[j - 1], h.functions[k - 1])
                out.append(_result(f"involution[I{j},I{k};P{l}]", br))
    return out


def xi_N_via_definition(N, rho=None, check=True):
    """Modular 1-form of (TM, N, [ , ]_N) read off from

        <xi, X> lambda (x) mu = [X, lambda]_N (x) mu + lambda (x) L_{NX} mu

    on coordinate fields X = d_i, with <lambda, mu> = 1.
    """
    if check and not is_nijenhuis(N):
        raise PreconditionFailed("nijenhuis_N", "N has nonzero Nijenhuis torsion")
    chart = N.chart
    vol = _density(chart, rho)
    lam, mu = vol.lam, vol.mu
    comps = []
    for i in range(1, chart.dim + 1):
        X = Multivector.basis(chart, (i,))
        first = pairing(mu, deformed_schouten(N, X, lam))
        second = pairing(lie_deriv(N.apply(X), mu), lam)
        comps.append(first + second)
    return DiffForm.from_list(chart, comps)


def class_representative_checks(P, N, kmax, rho=None, check=True):
    """Representative-level residuals of the modular-class relations.

    Representatives: 2 X^k_mu for the cotangent algebroid of P_k and d Tr N^k
    for (TM, N^k, [ , ]_{N^k}).
    """
    h = build_hierarchy(P, N, kmax, rho, check)
    raw, X = h.raw_modular_vfs, h.modular_vfs
    PdTrN = bivector_sharp(P, d_trace(N))
    traces = [Nk.trace() for Nk in h.powers]
    dtr = [ext_d(DiffForm.scalar(t)) for t in traces]
    out = [
        _result("morphism_rep[a]", 2 * raw[1] - N.apply(2 * raw[0]) + PdTrN),
        _result("morphism_rep[a]=2X1", 2 * raw[1] - N.apply(2 * raw[0]) - 2 * X[0]),
        _result("transpose[b]", -PdTrN - 2 * X[0]),
    ]
    for k in range(2, kmax + 1):
        out.append(
            _result(
                f"trace_recursion[c,k={k}]",
                dtr[k] - N.transpose_apply(dtr[k - 1]) - dtr[k] / k,
            )
        )
    for k in range(1, kmax + 1):
        Ik = traces[k] / k
        out.append(
            _result(
                f"relative_rep[d,k={k}]",
                2 * (raw[k] - N.apply(raw[k - 1])) + hamiltonian(P, Ik),
            )
        )
        out.append(
            _result(f"power_rep[e,k={k}]", -hamiltonian(P, traces[k]) - 2 * k * X[k - 1])
        )
        tele = X[k - 1]
        for l in range(1, k):
            tele = tele + h.powers[k - l].apply(X[l - 1])
        out.append(
            _result(
                f"telescoping[e,k={k}]",
                2 * (raw[k] - h.powers[k].apply(raw[0])) - 2 * tele,
            )
        )
    return out
