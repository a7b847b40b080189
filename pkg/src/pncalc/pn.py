"""Admissibility and compatibility of a bivector P with a (1,1)-tensor N.

Covers the concomitant C(P, N) (coordinate five-term formula and the
bracket definition), the equivalent characterisations of compatibility,
the trace identity for admissible Poisson-Nijenhuis pairs, its corollary for
exact 1-forms and the operator form of the derived bracket.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .calculus import (
    apply_vf,
    d_N,
    deformed_schouten,
    derived_bracket_op,
    ext_d,
    int_biv,
    int_vec,
    koszul_bracket,
    lie_deriv,
    nijenhuis_torsion,
    schouten,
)
from .errors import NotAdmissible, NotCompatible, PreconditionFailed
from .report import Verdict, residual_verdict, residual_witness
from .sampling import make_rng, random_form, random_poly, random_vector
from .tensor import (
    DiffForm,
    EndoField,
    Multivector,
    bivector_matrix,
    bivector_sharp,
    endo_bivector,
    pairing,
)

HALF = Fraction(1, 2)

__all__ = [
    "Concomitant",
    "CompatReport",
    "is_poisson",
    "is_nijenhuis",
    "is_admissible",
    "np_bivector",
    "concomitant_coord",
    "concomitant_abstract",
    "is_compatible",
    "full_compat_report",
    "cond_dN_derivation",
    "cond_dP_derivation",
    "cond_function_form",
    "trace_identity_check",
    "corollary_check",
    "bm_operator_check",
    "d_trace",
]


class Concomitant:
    """Components C^{kj}_m (upper k, j; lower m), 1-based."""

    def __init__(self, chart, comps):
        self.chart = chart
        self._comps = {k: v for k, v in sorted(comps.items()) if not v.is_zero()}

    def __getitem__(self, kjm):
        return self._comps.get(tuple(kjm), self.chart.zero)

    def items(self):
        return self._comps.items()

    def is_zero(self):
        return not self._comps

    def first_nonzero(self):
        for k, v in self._comps.items():
            return k, v
        return None

    def partial_trace(self):
        """The 1-form-like list j -> sum_k C^{kj}_k."""
        n = self.chart.dim
        out = [self.chart.zero] * n
        for (k, j, m), v in self._comps.items():
            if k == m:
                out[j - 1] = out[j - 1] + v
        return out

    def trace_pairing(self, alpha):
        """Tr(C alpha) = sum_{k,j} C^{kj}_k alpha_j."""
        out = self.chart.zero
        for j, t in enumerate(self.partial_trace(), start=1):
            out = out + t * alpha[j]
        return out

    def contract(self, alpha, beta):
        """C(alpha, beta)_m = sum_{k,j} C^{kj}_m beta_k alpha_j.

        The first argument pairs with the second upper index; this is the
        pairing under which the component formula reproduces the bracket
        definition in :func:`concomitant_abstract`.
        """
        n = self.chart.dim
        out = [self.chart.zero] * n
        for (k, j, m), v in self._comps.items():
            c = beta[k] * alpha[j]
            if not c.is_zero():
                out[m - 1] = out[m - 1] + v * c
        return DiffForm.from_list(self.chart, out)


@dataclass
class CompatReport:
    admissible: bool
    poisson_P: bool
    nijenhuis_N: bool
    concomitant_zero: bool
    cond_dN_derivation: bool | None
    cond_dP_derivation: bool | None
    cond_function_form: bool | None
    witnesses: list = field(default_factory=list)

    @property
    def conditions(self):
        return (
            self.concomitant_zero,
            self.cond_dN_derivation,
            self.cond_dP_derivation,
            self.cond_function_form,
        )

    def conditions_agree(self):
        return len(set(self.conditions)) == 1


# ---------------------------------------------------------------------------
# structure predicates
# ---------------------------------------------------------------------------


def is_poisson(P):
    """[P, P] == 0, with the first nonzero component as witness."""
    return residual_verdict(schouten(P, P))


def is_nijenhuis(N):
    return residual_verdict(nijenhuis_torsion(N))


def is_admissible(P, N):
    """NP skew-symmetric (equivalently NP = PN)."""
    defect = endo_bivector(N, P).symmetric_defect()
    if not defect:
        return Verdict(True)
    (i, j), s = defect[0]
    return Verdict(False, {"index": [i, j], "expr": str(s)})


def np_bivector(P, N):
    """NP as a bivector; raises NotAdmissible when it is not skew."""
    T = endo_bivector(N, P)
    if not T.is_skew():
        raise NotAdmissible()
    return T.to_multivector()


def d_trace(N):
    return ext_d(DiffForm.scalar(N.trace()))


# ---------------------------------------------------------------------------
# concomitant
# ---------------------------------------------------------------------------


def concomitant_coord(P, N):
    """C^{kj}_m = P^{lj} d_l N^k_m + P^{kl} d_l N^j_m - N^l_m d_l P^{kj}
    + N^j_l d_m P^{kl} - P^{lj} d_m N^k_l, summed over l."""
    chart = P.chart
    n = chart.dim
    Pm = bivector_matrix(P)
    Nm = N.rows
    dP = [[[Pm[a][b].diff(l + 1) for l in range(n)] for b in range(n)] for a in range(n)]
    dN = [[[Nm[a][b].diff(l + 1) for l in range(n)] for b in range(n)] for a in range(n)]
    comps = {}
    for k in range(n):
        for j in range(n):
            for m in range(n):
                s = chart.zero
                for l in range(n):
                    terms = (
                        (Pm[l][j], dN[k][m][l]),
                        (Pm[k][l], dN[j][m][l]),
                        (-Nm[l][m], dP[k][j][l]),
                        (Nm[j][l], dP[k][l][m]),
                        (-Pm[l][j], dN[k][l][m]),
                    )
                    for a, b in terms:
                        if not a.is_zero() and not b.is_zero():
                            s = s + a * b
                comps[(k + 1, j + 1, m + 1)] = s
    return Concomitant(chart, comps)


def concomitant_abstract(P, N, alpha, beta):
    """C(a, b) = [a, b]_NP - ([N a, b]_P + [a, N b]_P - N[a, b]_P)."""
    NP = np_bivector(P, N)
    Na, Nb = N.transpose_apply(alpha), N.transpose_apply(beta)
    return koszul_bracket(NP, alpha, beta) - (
        koszul_bracket(P, Na, beta)
        + koszul_bracket(P, alpha, Nb)
        - N.transpose_apply(koszul_bracket(P, alpha, beta))
    )


@lru_cache(maxsize=256)
def _compatible(P, N):
    adm = is_admissible(P, N)
    if not adm:
        return Verdict(False, {"admissible": adm.witness})
    C = concomitant_coord(P, N)
    w = residual_witness(C)
    return Verdict(w is None, None if w is None else {"concomitant": w})


def is_compatible(P, N):
    """Admissible and C(P, N) == 0."""
    return _compatible(P, N)


def _require_admissible(P, N, check):
    if check and not is_admissible(P, N):
        raise NotAdmissible()


def _require_compatible(P, N, check):
    if check and not is_compatible(P, N):
        raise NotCompatible()


# ---------------------------------------------------------------------------
# equivalent forms of compatibility (randomised symbolic witnesses)
# ---------------------------------------------------------------------------


def hamiltonian(P, f):
    return bivector_sharp(P, ext_d(DiffForm.scalar(f)))


def _dN_derivation_residuals(P, N, f, g, alpha):
    """Defects of d_N acting as a derivation of the Koszul bracket.

    Uses the graded extension fixed by [a, f]_P = -i_{H_f} a and
    [w, f]_P = +i_{H_f} w for 2-forms w (bracket with a function is a
    derivation of the wedge product). Instances:
      (f, g):     0 = [d_N f, g] - [f, d_N g]
      (alpha, f): d_N[alpha, f] = [d_N alpha, f] + [alpha, d_N f]
    """
    dN = d_N(N)
    df = ext_d(DiffForm.scalar(f))
    dg = ext_d(DiffForm.scalar(g))
    Hf, Hg = bivector_sharp(P, df), bivector_sharp(P, dg)
    pair = int_vec(Hg, N.transpose_apply(df)) + int_vec(Hf, N.transpose_apply(dg))
    out = [pair]
    for a in (dg, alpha):
        lhs = dN(DiffForm.scalar(-int_vec(Hf, a).value()))
        rhs = int_vec(Hf, dN(a)) + koszul_bracket(P, a, N.transpose_apply(df))
        out.append(lhs - rhs)
    return out


def _trial_loop(P, N, trials, seed, residual_fn, draw):
    rng = make_rng(seed)
    chart = P.chart
    for t in range(trials):
        sample = draw(chart, rng)
        res = residual_fn(*sample)
        w = residual_witness(res)
        if w is not None:
            return Verdict(
                False,
                {"trial": t, **{k: str(v) for k, v in zip(draw.names, sample)}, **w},
            )
    return Verdict(True)


def _draw_fga(chart, rng):
    return (random_poly(chart, rng), random_poly(chart, rng), random_form(chart, rng, 1))


_draw_fga.names = ("f", "g", "alpha")


def _draw_fg(chart, rng):
    return (random_poly(chart, rng), random_poly(chart, rng))


_draw_fg.names = ("f", "g")


def _draw_xy(chart, rng):
    return (random_vector(chart, rng), random_vector(chart, rng))


_draw_xy.names = ("X", "Y")


def cond_dN_derivation(P, N, trials=8, seed=0, check=True):
    """d_N is a derivation of [ , ]_P, tested on functions and 1-forms."""
    _require_admissible(P, N, check)
    return _trial_loop(
        P, N, trials, seed,
        lambda f, g, a: _dN_derivation_residuals(P, N, f, g, a),
        _draw_fga,
    )


def cond_dP_derivation(P, N, trials=8, seed=0, check=True):
    """d_P = [P, .] is a derivation of the deformed Schouten bracket [ , ]_N."""
    _require_admissible(P, N, check)

    def residual(X, Y):
        lhs = schouten(P, deformed_schouten(N, X, Y))
        rhs = deformed_schouten(N, schouten(P, X), Y) + deformed_schouten(
            N, X, schouten(P, Y)
        )
        return lhs - rhs

    return _trial_loop(P, N, trials, seed, residual, _draw_xy)


def function_form_residual(P, N, f, g):
    """d{f,g}_NP - (L_{H_f} d_N g - L_{H_g} d_N f - d_N(H_f g))."""
    NP = np_bivector(P, N)
    dN = d_N(N)
    F, G = DiffForm.scalar(f), DiffForm.scalar(g)
    Hf, Hg = hamiltonian(P, f), hamiltonian(P, g)
    lhs = ext_d(DiffForm.scalar(apply_vf(hamiltonian(NP, f), g)))
    rhs = (
        lie_deriv(Hf, dN(G))
        - lie_deriv(Hg, dN(F))
        - dN(DiffForm.scalar(apply_vf(Hf, g)))
    )
    return lhs - rhs


def cond_function_form(P, N, trials=8, seed=0, check=True):
    _require_admissible(P, N, check)
    return _trial_loop(
        P, N, trials, seed, lambda f, g: function_form_residual(P, N, f, g), _draw_fg
    )


def full_compat_report(P, N, trials=8, seed=0):
    """Structure predicates plus the four characterisations of compatibility.

    The three randomised conditions need NP skew and are reported as None
    when P, N are not admissible.
    """
    adm = is_admissible(P, N)
    poisson = is_poisson(P)
    nij = is_nijenhuis(N)
    witnesses = []
    for name, v in (("admissible", adm), ("poisson_P", poisson), ("nijenhuis_N", nij)):
        if not v:
            witnesses.append((name, v.witness))
    if adm:
        C = residual_verdict(concomitant_coord(P, N))
        conds = {
            "cond_dN_derivation": cond_dN_derivation(P, N, trials, seed, check=False),
            "cond_dP_derivation": cond_dP_derivation(P, N, trials, seed, check=False),
            "cond_function_form": cond_function_form(P, N, trials, seed, check=False),
        }
    else:
        C = Verdict(False, adm.witness)
        conds = dict.fromkeys(
            ("cond_dN_derivation", "cond_dP_derivation", "cond_function_form")
        )
    if not C:
        witnesses.append(("concomitant", C.witness))
    for name, v in conds.items():
        if v is not None and not v:
            witnesses.append((name, v.witness))
    return CompatReport(
        admissible=bool(adm),
        poisson_P=bool(poisson),
        nijenhuis_N=bool(nij),
        concomitant_zero=bool(C) and bool(adm),
        witnesses=witnesses,
        **{k: None if v is None else bool(v) for k, v in conds.items()},
    )


# ---------------------------------------------------------------------------
# trace identity, corollary, operator identity
# ---------------------------------------------------------------------------


def _require_pn_hypotheses(P, N):
    if not is_poisson(P):
        raise PreconditionFailed("poisson_P", "P is not a Poisson bivector")
    if not is_nijenhuis(N):
        raise PreconditionFailed("nijenhuis_N", "N has nonzero Nijenhuis torsion")
    if not is_admissible(P, N):
        raise NotAdmissible()


def trace_identity_check(P, N, alpha, check=True, concomitant=None):
    """Residual of 1/2 Tr(C alpha) - 1/2 <P d Tr N, alpha> - [i_N, i_P]_d alpha.

    Holds for every admissible Poisson-Nijenhuis pair, compatible or not.
    """
    if check:
        _require_pn_hypotheses(P, N)
    C = concomitant if concomitant is not None else concomitant_coord(P, N)
    lhs = HALF * C.trace_pairing(alpha)
    pd = HALF * pairing(alpha, bivector_sharp(P, d_trace(N)))
    db = derived_bracket_op(N, P)(alpha).value()
    return lhs - pd - db


def corollary_check(P, N, f, check=True):
    """Residual of i_P(d_N df) + 1/2 H^P_{Tr N}(f)."""
    _require_compatible(P, N, check)
    df = ext_d(DiffForm.scalar(f))
    lhs = int_biv(P, d_N(N)(df)).value()
    return lhs + HALF * apply_vf(bivector_sharp(P, d_trace(N)), f)


def bm_operator_check(P, N, omega, check=True):
    """Residual of [i_N, i_P]_d w - i_V w with V = -1/2 P d Tr N."""
    _require_compatible(P, N, check)
    V = -HALF * bivector_sharp(P, d_trace(N))
    return derived_bracket_op(N, P)(omega) - int_vec(V, omega)


__all__ += ["hamiltonian", "function_form_residual"]
