"""Shared builders for the test modules."""

import itertools

from hypothesis import strategies as st

from pncalc.expr import Chart
from pncalc.sampling import make_rng, random_form, random_poly, random_vector
from pncalc.tensor import DiffForm, EndoField, Multivector

X2 = Chart(("x", "y"))
X3 = Chart(("x", "y", "z"))

seeds = st.integers(min_value=0, max_value=10**6)


def poly(chart, seed, max_degree=2):
    return random_poly(chart, make_rng(seed), max_degree)


def ratfunc(chart, seed):
    rng = make_rng(seed)
    return random_poly(chart, rng) / random_poly(chart, rng, max_degree=1)


def form(chart, seed, degree):
    return random_form(chart, make_rng(seed), degree)


def vector(chart, seed):
    return random_vector(chart, make_rng(seed))


def endo(chart, seed, max_degree=1):
    rng = make_rng(seed)
    n = chart.dim
    return EndoField(
        chart, [[random_poly(chart, rng, max_degree) for _ in range(n)] for _ in range(n)]
    )


def multivector(chart, seed, degree):
    rng = make_rng(seed)
    return Multivector(
        chart,
        degree,
        {I: random_poly(chart, rng, 1) for I in itertools.combinations(range(1, chart.dim + 1), degree)},
    )


def scalar_form(f):
    return DiffForm.scalar(f)
