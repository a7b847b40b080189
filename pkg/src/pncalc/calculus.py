"""Cartan calculus and brackets on a chart.

Forms: d, interior products by vectors, endomorphisms and bivectors, Lie
derivative. Multivectors: Schouten bracket and its deformation by a (1,1)
tensor. 1-forms: the Koszul bracket of a bivector. Operators on forms are
wrapped in :class:`GradedOperator` so graded commutators can be composed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import ChartMismatch, DegreeMismatch
from .tensor import (
    DiffForm,
    EndoField,
    Multivector,
    bivector_sharp,
    endo_bivector,
    pairing,
    sort_sign,
)

__all__ = [
    "apply_vf",
    "ext_d",
    "int_vec",
    "int_endo",
    "int_biv",
    "lie_bracket",
    "lie_deriv",
    "schouten",
    "deformed_bracket",
    "deformed_schouten",
    "nijenhuis_torsion",
    "Torsion",
    "koszul_bracket",
    "GradedOperator",
    "ext_d_op",
    "int_endo_op",
    "int_biv_op",
    "int_vec_op",
    "d_N",
    "d_P",
    "derived_bracket_op",
]


def _same_chart(*objs):
    chart = objs[0].chart
    for o in objs[1:]:
        if o.chart != chart:
            raise ChartMismatch(
                f"charts differ: {chart.coord_names} vs {o.chart.coord_names}"
            )
    return chart


def _accumulate(out, key, val):
    if key in out:
        out[key] = out[key] + val
    else:
        out[key] = val


def apply_vf(X, f):
    """Derivative of the function f along the vector field X."""
    _same_chart(X, f)
    out = f.chart.zero
    for (i,), xi in X.items():
        dfi = f.diff(i)
        if not dfi.is_zero():
            out = out + xi * dfi
    return out


# ---------------------------------------------------------------------------
# forms
# ---------------------------------------------------------------------------


def ext_d(omega):
    """Exterior derivative: (d w) = sum_l d_l w_I dx^l ^ dx^I."""
    chart = omega.chart
    out = {}
    for I, f in omega.items():
        for l in range(1, chart.dim + 1):
            if l in I:
                continue
            g = f.diff(l)
            if g.is_zero():
                continue
            sign, key = sort_sign((l,) + I)
            _accumulate(out, key, g if sign > 0 else -g)
    return DiffForm._from_sorted(chart, omega.degree + 1, out)


def _iota(i, omega, coeff=None):
    """Contraction of omega with coeff * d_i (first slot)."""
    out = {}
    for I, f in omega.items():
        if i not in I:
            continue
        p = I.index(i)
        val = f if coeff is None else coeff * f
        key = I[:p] + I[p + 1 :]
        _accumulate(out, key, -val if p % 2 else val)
    return out


def int_vec(X, omega):
    """Interior product i_X omega = omega(X, ...)."""
    chart = _same_chart(X, omega)
    out = {}
    for (i,), xi in X.items():
        for k, v in _iota(i, omega, xi).items():
            _accumulate(out, k, v)
    return DiffForm._from_sorted(chart, omega.degree - 1, out)


def int_endo(N, omega):
    """Degree-0 derivation i_N: (i_N w)(X1..Xk) = sum_a w(X1, .., N X_a, .., Xk)."""
    chart = _same_chart(N, omega)
    n = chart.dim
    out = {}
    for I, f in omega.items():
        for a, ia in enumerate(I):
            row = N.rows[ia - 1]
            for c in range(1, n + 1):
                nc = row[c - 1]
                if nc.is_zero():
                    continue
                sign, key = sort_sign(I[:a] + (c,) + I[a + 1 :])
                if not sign:
                    continue
                val = nc * f
                _accumulate(out, key, val if sign > 0 else -val)
    return DiffForm._from_sorted(chart, omega.degree, out)


def int_biv(P, omega):
    """i_P = 1/2 sum_{i,j} P^{ij} i_{d_j} i_{d_i}; on 2-forms i_P w = sum_{i<j} P^{ij} w_ij."""
    chart = _same_chart(P, omega)
    if P.degree != 2:
        raise DegreeMismatch("int_biv needs a bivector")
    out = {}
    for (i, j), p in P.items():
        inner = DiffForm._from_sorted(chart, omega.degree - 1, _iota(i, omega))
        for k, v in _iota(j, inner, p).items():
            _accumulate(out, k, v)
    return DiffForm._from_sorted(chart, omega.degree - 2, out)


# ---------------------------------------------------------------------------
# brackets of multivectors
# ---------------------------------------------------------------------------


def lie_bracket(X, Y):
    """[X, Y]^i = X^j d_j Y^i - Y^j d_j X^i."""
    chart = _same_chart(X, Y)
    xs, ys = X.as_list(), Y.as_list()
    return Multivector.from_list(
        chart, [apply_vf(X, ys[i]) - apply_vf(Y, xs[i]) for i in range(chart.dim)]
    )


def _term(chart, idx, coeff):
    return Multivector._from_sorted(chart, len(idx), {idx: coeff})


def _graded_bracket(A, B, vec_bracket, anchor):
    """Gerstenhaber extension of a Lie algebroid bracket on TM.

    Built from the vector bracket and the anchor by the rules
    [X, f] = anchor(X) f, [A, B^C] = [A,B]^C + (-1)^{(a-1)b} B^[A,C] and
    [A, B] = -(-1)^{(a-1)(b-1)} [B, A].
    """
    chart = _same_chart(A, B)
    deg = A.degree + B.degree - 1
    total = Multivector.zero(chart, deg)
    for I, f in A.items():
        for J, g in B.items():
            total = total + _term_bracket(chart, I, f, J, g, vec_bracket, anchor)
    return total


def _term_bracket(chart, I, f, J, g, vec_bracket, anchor):
    a, b = len(I), len(J)
    if b >= 2:
        A = _term(chart, I, f)
        X = _term(chart, J[:1], g)
        C = _term(chart, J[1:], chart.one)
        first = _graded_bracket(A, X, vec_bracket, anchor).wedge(C)
        second = X.wedge(_graded_bracket(A, C, vec_bracket, anchor))
        return first - second if (a - 1) % 2 else first + second
    if a >= 2:
        swapped = _term_bracket(chart, J, g, I, f, vec_bracket, anchor)
        return swapped if (a - 1) * (b - 1) % 2 else -swapped
    if a == 1 and b == 1:
        return vec_bracket(_term(chart, I, f), _term(chart, J, g))
    if a == 1 and b == 0:
        return Multivector.scalar(apply_vf(anchor(_term(chart, I, f)), g))
    if a == 0 and b == 1:
        return Multivector.scalar(-apply_vf(anchor(_term(chart, J, g)), f))
    return Multivector.zero(chart, -1)


def _identity(X):
    return X


def schouten(A, B):
    """Schouten-Nijenhuis bracket of multivector fields."""
    return _graded_bracket(A, B, lie_bracket, _identity)


def deformed_bracket(N, X, Y):
    """[X, Y]_N = [NX, Y] + [X, NY] - N[X, Y]."""
    _same_chart(N, X, Y)
    return lie_bracket(N.apply(X), Y) + lie_bracket(X, N.apply(Y)) - N.apply(lie_bracket(X, Y))


def deformed_schouten(N, A, B):
    """Schouten bracket of the Lie algebroid (TM, N, [ , ]_N)."""
    return _graded_bracket(
        A, B, lambda X, Y: deformed_bracket(N, X, Y), N.apply
    )


def lie_deriv(X, T):
    """Lie derivative along X of a form, multivector or (1,1)-tensor."""
    if isinstance(T, DiffForm):
        _same_chart(X, T)
        out = int_vec(X, ext_d(T))
        if T.degree > 0:
            out = out + ext_d(int_vec(X, T))
        return out
    if isinstance(T, Multivector):
        return schouten(X, T)
    if isinstance(T, EndoField):
        chart = _same_chart(X, T)
        n = chart.dim
        cols = []
        for j in range(1, n + 1):
            e = Multivector.basis(chart, (j,))
            cols.append(
                (lie_bracket(X, T.apply(e)) - T.apply(lie_bracket(X, e))).as_list()
            )
        return EndoField(chart, [[cols[j][i] for j in range(n)] for i in range(n)])
    raise TypeError(f"cannot take a Lie derivative of {type(T).__name__}")


class Torsion:
    """Nijenhuis torsion as a vector-valued 2-form; ``T[i, j, k]`` is T^i_{jk}."""

    def __init__(self, chart, comps):
        self.chart = chart
        self._comps = {k: v for k, v in sorted(comps.items()) if not v.is_zero()}

    def __getitem__(self, ijk):
        i, j, k = ijk
        if j == k:
            return self.chart.zero
        if j < k:
            return self._comps.get((i, j, k), self.chart.zero)
        return -self._comps.get((i, k, j), self.chart.zero)

    def __call__(self, X, Y):
        n = self.chart.dim
        xs, ys = X.as_list(), Y.as_list()
        out = [self.chart.zero] * n
        for (i, j, k), t in self._comps.items():
            coef = xs[j - 1] * ys[k - 1] - xs[k - 1] * ys[j - 1]
            if not coef.is_zero():
                out[i - 1] = out[i - 1] + t * coef
        return Multivector.from_list(self.chart, out)

    def items(self):
        return self._comps.items()

    def is_zero(self):
        return not self._comps

    def first_nonzero(self):
        for k, v in self._comps.items():
            return k, v
        return None


def nijenhuis_torsion(N):
    """T(X, Y) = [NX, NY] - N[X, Y]_N, tabulated on coordinate fields."""
    chart = N.chart
    n = chart.dim
    basis = [Multivector.basis(chart, (j,)) for j in range(1, n + 1)]
    images = [N.apply(e) for e in basis]
    comps = {}
    for j in range(n):
        for k in range(j + 1, n):
            t = lie_bracket(images[j], images[k]) - N.apply(
                deformed_bracket(N, basis[j], basis[k])
            )
            for (i,), v in t.items():
                comps[(i, j + 1, k + 1)] = v
    return Torsion(chart, comps)


def koszul_bracket(P, alpha, beta):
    """[a, b]_P = L_{Pa} b - L_{Pb} a - d(P(a, b)) on 1-forms."""
    _same_chart(P, alpha, beta)
    Pa = bivector_sharp(P, alpha)
    Pb = bivector_sharp(P, beta)
    pab = pairing(beta, Pa)
    return lie_deriv(Pa, beta) - lie_deriv(Pb, alpha) - ext_d(DiffForm.scalar(pab))


# ---------------------------------------------------------------------------
# graded operators on forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedOperator:
    """Linear operator on forms shifting the degree by ``degree``."""

    degree: int
    action: Callable[[DiffForm], DiffForm]
    name: str = "op"

    @property
    def parity(self):
        return self.degree % 2

    def __call__(self, omega):
        out = self.action(omega)
        if out.degree != omega.degree + self.degree:
            raise DegreeMismatch(f"{self.name} produced degree {out.degree}")
        return out

    def __matmul__(self, other):
        return GradedOperator(
            self.degree + other.degree,
            lambda w: self(other(w)),
            f"{self.name}∘{other.name}",
        )

    def __add__(self, other):
        if other.degree != self.degree:
            raise DegreeMismatch("cannot add operators of different degrees")
        return GradedOperator(
            self.degree, lambda w: self(w) + other(w), f"({self.name}+{other.name})"
        )

    def __neg__(self):
        return GradedOperator(self.degree, lambda w: -self(w), f"-{self.name}")

    def __sub__(self, other):
        return self + (-other)

    def commutator(self, other):
        """Graded commutator AB - (-1)^{|A||B|} BA."""
        sign = -1 if self.parity and other.parity else 1
        ab = self @ other
        ba = other @ self

        def action(w):
            return ab(w) - ba(w) if sign > 0 else ab(w) + ba(w)

        return GradedOperator(
            self.degree + other.degree, action, f"[{self.name},{other.name}]"
        )


ext_d_op = GradedOperator(1, ext_d, "d")


def int_endo_op(N):
    return GradedOperator(0, lambda w: int_endo(N, w), "i_N")


def int_biv_op(P):
    return GradedOperator(-2, lambda w: int_biv(P, w), "i_P")


def int_vec_op(X):
    return GradedOperator(-1, lambda w: int_vec(X, w), "i_X")


def d_N(N):
    """d_N = [i_N, d] = i_N d - d i_N; on functions d_N f = N* df."""
    return int_endo_op(N).commutator(ext_d_op)


def d_P(P):
    """Lichnerowicz differential A -> [P, A] on multivectors."""
    return lambda A: schouten(P, A)


def derived_bracket_op(N, P):
    """Derived bracket [i_N, i_P]_d = [d, i_NP] - [d_N, i_P] (degree -1, odd).

    With i_N a derivation, i_P i_N = 2 i_NP on 2-forms, so the bare
    commutator [d_N, i_P] is not tensorial; the [d, i_NP] term restores the
    identity i_P i_N -> i_NP used when contracting. On 1-forms the result is
    i_NP d(alpha) - i_P d(N* alpha). Requires NP skew.
    """
    NP = endo_bivector(N, P).to_multivector()
    op = ext_d_op.commutator(int_biv_op(NP)) - d_N(N).commutator(int_biv_op(P))
    return GradedOperator(-1, op.action, "[i_N,i_P]_d")
