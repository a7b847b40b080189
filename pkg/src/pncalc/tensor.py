"""Tensor fields on a chart: multivectors, forms, (1,1)-tensors.

Conventions used everywhere downstream:

* indices are 1-based; alternating components are stored only under strictly
  increasing index tuples, other orderings resolve by permutation sign;
* a bivector acts on 1-forms by contraction in its first slot,
  ``(P alpha)^j = sum_i P^{ij} alpha_i`` and ``P(alpha, beta) = P^{ij} alpha_i beta_j``;
* an endomorphism N has entries ``N[i, j] = N^i_j`` (row i, column j); on
  vectors ``(NX)^i = N^i_j X^j``, on 1-forms ``(N*alpha)_j = N^i_j alpha_i``;
* basis pairing ``<dx^I, d_I> = 1`` for increasing I.
"""

from __future__ import annotations

from numbers import Integral, Rational

from .errors import ChartMismatch, DegreeMismatch, NotSkew
from .expr import Chart, RatFunc

__all__ = [
    "Multivector",
    "DiffForm",
    "EndoField",
    "ContraTensor2",
    "sort_sign",
    "wedge",
    "bivector_sharp",
    "endo_apply",
    "endo_transpose_apply",
    "endo_compose",
    "endo_power",
    "endo_trace",
    "endo_bivector",
    "is_skew",
    "pairing",
]


def sort_sign(idx):
    """Sort an index tuple, returning (sign, sorted tuple); sign 0 on repeats."""
    idx = list(idx)
    sign = 1
    # insertion sort counting transpositions; tuples are short
    for a in range(1, len(idx)):
        b = a
        while b > 0 and idx[b - 1] > idx[b]:
            idx[b - 1], idx[b] = idx[b], idx[b - 1]
            sign = -sign
            b -= 1
    for a in range(1, len(idx)):
        if idx[a] == idx[a - 1]:
            return 0, None
    return sign, tuple(idx)


def _check_chart(a, b):
    if a.chart != b.chart:
        raise ChartMismatch(
            f"charts differ: {a.chart.coord_names} vs {b.chart.coord_names}"
        )


def _scalar(chart, c):
    if isinstance(c, RatFunc):
        if c.chart != chart:
            raise ChartMismatch("scalar lives on another chart")
        return c
    return RatFunc.const(chart, c)


class _Alternating:
    """Sparse alternating tensor field of fixed degree and variance."""

    __slots__ = ("chart", "degree", "_comps")
    _kind = "alternating"

    def __init__(self, chart, degree, comps=None):
        # negative degrees are allowed as zero placeholders (e.g. i_X f)
        if not isinstance(degree, Integral):
            raise DegreeMismatch(f"invalid degree {degree!r}")
        if degree < 0 and comps:
            raise DegreeMismatch("negative-degree objects are always zero")
        store = {}
        for idx, val in (comps or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise DegreeMismatch(f"index {idx} does not have length {degree}")
            for i in idx:
                chart.check_index(i)
            sign, key = sort_sign(idx)
            if not sign:
                continue
            val = _scalar(chart, val)
            if sign < 0:
                val = -val
            if key in store:
                store[key] = store[key] + val
            else:
                store[key] = val
        self.chart = chart
        self.degree = degree
        self._comps = {k: v for k, v in sorted(store.items()) if not v.is_zero()}

    @classmethod
    def _from_sorted(cls, chart, degree, comps):
        obj = cls.__new__(cls)
        obj.chart = chart
        obj.degree = degree
        obj._comps = {k: v for k, v in sorted(comps.items()) if not v.is_zero()}
        return obj

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, chart, degree):
        return cls._from_sorted(chart, degree, {})

    @classmethod
    def scalar(cls, f, chart=None):
        """Degree-0 object wrapping a function."""
        chart = f.chart if isinstance(f, RatFunc) else chart
        return cls._from_sorted(chart, 0, {(): _scalar(chart, f)})

    @classmethod
    def basis(cls, chart, idx, coeff=1):
        return cls(chart, len(idx), {tuple(idx): coeff})

    @classmethod
    def from_list(cls, chart, values):
        """Degree-1 object from a list of n component values."""
        if len(values) != chart.dim:
            raise DegreeMismatch(f"expected {chart.dim} components, got {len(values)}")
        return cls(chart, 1, {(i + 1,): v for i, v in enumerate(values)})

    @classmethod
    def top(cls, chart, coeff=1):
        return cls(chart, chart.dim, {tuple(range(1, chart.dim + 1)): coeff})

    # -- access ------------------------------------------------------------
    def __getitem__(self, idx):
        if isinstance(idx, Integral):
            idx = (idx,)
        idx = tuple(idx)
        if len(idx) != self.degree:
            raise DegreeMismatch(f"index {idx} does not have length {self.degree}")
        sign, key = sort_sign(idx)
        if not sign:
            return self.chart.zero
        val = self._comps.get(key)
        if val is None:
            return self.chart.zero
        return val if sign > 0 else -val

    def items(self):
        return self._comps.items()

    def components(self):
        return dict(self._comps)

    def as_list(self):
        if self.degree != 1:
            raise DegreeMismatch("as_list is defined for degree 1 only")
        return [self[i] for i in range(1, self.chart.dim + 1)]

    def value(self):
        """The function underlying a degree-0 object."""
        if self.degree != 0:
            raise DegreeMismatch("value() is defined for degree 0 only")
        return self._comps.get((), self.chart.zero)

    def is_zero(self):
        return not self._comps

    def first_nonzero(self):
        """Witness (index, component) of the first nonzero entry, or None."""
        for k, v in self._comps.items():
            return k, v
        return None

    # -- linear structure --------------------------------------------------
    def _same(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        _check_chart(self, other)
        if other.degree != self.degree:
            raise DegreeMismatch(f"degrees differ: {self.degree} vs {other.degree}")

    def __add__(self, other):
        if not isinstance(other, _Alternating):
            return NotImplemented
        self._same(other)
        out = dict(self._comps)
        for k, v in other._comps.items():
            out[k] = out[k] + v if k in out else v
        return type(self)._from_sorted(self.chart, self.degree, out)

    def __neg__(self):
        return type(self)._from_sorted(
            self.chart, self.degree, {k: -v for k, v in self._comps.items()}
        )

    def __sub__(self, other):
        if not isinstance(other, _Alternating):
            return NotImplemented
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, _Alternating):
            return NotImplemented
        if not isinstance(c, (RatFunc, Integral, Rational)):
            return NotImplemented
        c = _scalar(self.chart, c)
        return type(self)._from_sorted(
            self.chart, self.degree, {k: c * v for k, v in self._comps.items()}
        )

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = _scalar(self.chart, c)
        return self * (1 / c)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return (
            self.chart == other.chart
            and self.degree == other.degree
            and self._comps == other._comps
        )

    def __hash__(self):
        return hash((type(self).__name__, self.chart, self.degree, frozenset(self._comps.items())))

    def map_components(self, fn):
        return type(self)._from_sorted(
            self.chart, self.degree, {k: fn(v) for k, v in self._comps.items()}
        )

    # -- exterior product --------------------------------------------------
    def wedge(self, other):
        if type(other) is not type(self):
            raise TypeError("wedge needs two objects of the same variance")
        _check_chart(self, other)
        deg = self.degree + other.degree
        out = {}
        if deg <= self.chart.dim:
            for I, f in self._comps.items():
                for J, g in other._comps.items():
                    sign, key = sort_sign(I + J)
                    if not sign:
                        continue
                    term = f * g if sign > 0 else -(f * g)
                    out[key] = out[key] + term if key in out else term
        return type(self)._from_sorted(self.chart, deg, out)

    def __xor__(self, other):
        return self.wedge(other)

    def to_str_dict(self):
        return {",".join(map(str, k)): str(v) for k, v in self._comps.items()}

    def __repr__(self):
        names = self.chart.coord_names
        prefix = "d" if self._kind == "form" else "@"
        if not self._comps:
            return f"{type(self).__name__}(deg={self.degree}, 0)"
        terms = []
        for k, v in self._comps.items():
            basis = "^".join(prefix + names[i - 1] for i in k) or "1"
            terms.append(f"({v})*{basis}")
        return f"{type(self).__name__}(deg={self.degree}, {' + '.join(terms)})"


class Multivector(_Alternating):
    """Contravariant alternating field: sum of f * d_{i1} ^ ... ^ d_{ik}."""

    __slots__ = ()
    _kind = "multivector"


class DiffForm(_Alternating):
    """Covariant alternating field: sum of f * dx^{i1} ^ ... ^ dx^{ik}."""

    __slots__ = ()
    _kind = "form"


def wedge(a, b):
    return a.wedge(b)


# ---------------------------------------------------------------------------
# (1,1)-tensors
# ---------------------------------------------------------------------------


class EndoField:
    """(1,1)-tensor field; ``self[i, j]`` is N^i_j with 1-based indices."""

    __slots__ = ("chart", "rows")

    def __init__(self, chart, rows):
        n = chart.dim
        rows = tuple(tuple(_scalar(chart, v) for v in row) for row in rows)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise DegreeMismatch(f"endomorphism must be {n}x{n}")
        self.chart = chart
        self.rows = rows

    @classmethod
    def from_entries(cls, chart, entries):
        """Build from a sparse mapping {(i, j): value} of N^i_j."""
        n = chart.dim
        rows = [[0] * n for _ in range(n)]
        for (i, j), v in entries.items():
            chart.check_index(i)
            chart.check_index(j)
            rows[i - 1][j - 1] = v
        return cls(chart, rows)

    @classmethod
    def identity(cls, chart):
        return cls.scalar(chart, 1)

    @classmethod
    def scalar(cls, chart, f):
        n = chart.dim
        return cls(chart, [[f if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, chart, values):
        n = chart.dim
        return cls(chart, [[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        self.chart.check_index(i)
        self.chart.check_index(j)
        return self.rows[i - 1][j - 1]

    def entries(self):
        n = self.chart.dim
        return {
            (i + 1, j + 1): self.rows[i][j]
            for i in range(n)
            for j in range(n)
            if not self.rows[i][j].is_zero()
        }

    def apply(self, X):
        _check_chart(self, X)
        if X.degree != 1:
            raise DegreeMismatch("N acts on vector fields")
        xs = X.as_list()
        return Multivector.from_list(
            self.chart, [_dot(row, xs, self.chart) for row in self.rows]
        )

    def transpose_apply(self, alpha):
        _check_chart(self, alpha)
        if alpha.degree != 1:
            raise DegreeMismatch("the transpose of N acts on 1-forms")
        a = alpha.as_list()
        n = self.chart.dim
        return DiffForm.from_list(
            self.chart,
            [_dot([self.rows[i][j] for i in range(n)], a, self.chart) for j in range(n)],
        )

    def transpose(self):
        n = self.chart.dim
        return EndoField(self.chart, [[self.rows[j][i] for j in range(n)] for i in range(n)])

    def compose(self, other):
        _check_chart(self, other)
        n = self.chart.dim
        cols = [[other.rows[k][j] for k in range(n)] for j in range(n)]
        return EndoField(
            self.chart,
            [[_dot(self.rows[i], cols[j], self.chart) for j in range(n)] for i in range(n)],
        )

    __matmul__ = compose

    def power(self, k):
        if not isinstance(k, Integral) or k < 0:
            raise ValueError("power needs a non-negative integer")
        out = EndoField.identity(self.chart)
        for _ in range(k):
            out = out @ self
        return out

    def trace(self):
        out = self.chart.zero
        for i in range(self.chart.dim):
            out = out + self.rows[i][i]
        return out

    def __add__(self, other):
        _check_chart(self, other)
        return EndoField(
            self.chart,
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
        )

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, c):
        c = _scalar(self.chart, c)
        return EndoField(self.chart, [[c * a for a in r] for r in self.rows])

    __rmul__ = __mul__

    def is_zero(self):
        return all(a.is_zero() for r in self.rows for a in r)

    def is_constant(self):
        return all(a.is_constant() for r in self.rows for a in r)

    def __eq__(self, other):
        if not isinstance(other, EndoField):
            return NotImplemented
        return self.chart == other.chart and self.rows == other.rows

    def __hash__(self):
        return hash((self.chart, self.rows))

    def __repr__(self):
        return "EndoField([" + ", ".join(
            "[" + ", ".join(str(a) for a in r) + "]" for r in self.rows
        ) + "])"


def _dot(a, b, chart):
    out = chart.zero
    for x, y in zip(a, b):
        if not x.is_zero() and not y.is_zero():
            out = out + x * y
    return out


class ContraTensor2:
    """Full n x n contravariant 2-tensor, not assumed antisymmetric."""

    __slots__ = ("chart", "rows")

    def __init__(self, chart, rows):
        self.chart = chart
        self.rows = tuple(tuple(_scalar(chart, v) for v in r) for r in rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i - 1][j - 1]

    def symmetric_defect(self):
        """Entries (i, j, T^ij + T^ji) with i <= j that fail skew-symmetry."""
        n = self.chart.dim
        out = []
        for i in range(n):
            for j in range(i, n):
                s = self.rows[i][j] + self.rows[j][i]
                if not s.is_zero():
                    out.append(((i + 1, j + 1), s))
        return out

    def is_skew(self):
        return not self.symmetric_defect()

    def to_multivector(self):
        defect = self.symmetric_defect()
        if defect:
            (i, j), s = defect[0]
            raise NotSkew(f"T^{i}{j} + T^{j}{i} = {s} is not zero")
        n = self.chart.dim
        return Multivector(
            self.chart,
            2,
            {(i + 1, j + 1): self.rows[i][j] for i in range(n) for j in range(i + 1, n)},
        )


def bivector_matrix(P):
    """Full antisymmetric component matrix of a bivector (0-based lists)."""
    n = P.chart.dim
    return [[P[i + 1, j + 1] if i != j else P.chart.zero for j in range(n)] for i in range(n)]


def bivector_sharp(P, alpha):
    """(P alpha)^j = sum_i P^{ij} alpha_i."""
    _check_chart(P, alpha)
    if P.degree != 2 or alpha.degree != 1:
        raise DegreeMismatch("bivector_sharp takes a bivector and a 1-form")
    n = P.chart.dim
    out = [P.chart.zero] * n
    for (i, j), p in P.items():
        ai, aj = alpha[i], alpha[j]
        if not ai.is_zero():
            out[j - 1] = out[j - 1] + p * ai
        if not aj.is_zero():
            out[i - 1] = out[i - 1] - p * aj
    return Multivector.from_list(P.chart, out)


def endo_apply(N, X):
    return N.apply(X)


def endo_transpose_apply(N, alpha):
    return N.transpose_apply(alpha)


def endo_compose(N, M):
    return N.compose(M)


def endo_power(N, k):
    return N.power(k)


def endo_trace(N):
    return N.trace()


def endo_bivector(N, P):
    """(NP)^{ij} = sum_k N^i_k P^{kj} as a full 2-tensor."""
    _check_chart(N, P)
    Pm = bivector_matrix(P)
    n = P.chart.dim
    cols = [[Pm[k][j] for k in range(n)] for j in range(n)]
    return ContraTensor2(
        P.chart, [[_dot(N.rows[i], cols[j], P.chart) for j in range(n)] for i in range(n)]
    )


def is_skew(T):
    return T.is_skew()


def pairing(omega, A):
    """<omega, A> = sum over increasing I of omega_I A^I."""
    if not isinstance(omega, DiffForm) or not isinstance(A, Multivector):
        raise TypeError("pairing takes a form and a multivector")
    _check_chart(omega, A)
    if omega.degree != A.degree:
        raise DegreeMismatch(f"degrees differ: {omega.degree} vs {A.degree}")
    out = omega.chart.zero
    for I, f in omega.items():
        g = A._comps.get(I)
        if g is not None:
            out = out + f * g
    return out


__all__ += ["bivector_matrix", "Chart"]
