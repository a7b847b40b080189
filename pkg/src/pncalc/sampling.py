"""Seeded random polynomial witnesses (functions, forms, vector fields)."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .tensor import DiffForm, Multivector

COEFF_POOL = (
    Fraction(-2),
    Fraction(-1),
    Fraction(-1, 2),
    Fraction(1, 2),
    Fraction(1),
    Fraction(2),
    Fraction(3),
)


def make_rng(seed):
    return random.Random(seed)


def _monomials(n, max_degree):
    out = []
    for exps in itertools.product(range(max_degree + 1), repeat=n):
        if sum(exps) <= max_degree:
            out.append(exps)
    return sorted(out, key=lambda e: (sum(e), e))


def random_poly(chart, rng, max_degree=2, terms=3, allow_constant=True):
    """Random polynomial of total degree <= max_degree, coefficients from COEFF_POOL."""
    monos = _monomials(chart.dim, max_degree)
    if not allow_constant:
        monos = [m for m in monos if sum(m)]
    while True:
        f = chart.zero
        for exps in rng.sample(monos, min(terms, len(monos))):
            term = chart.const(rng.choice(COEFF_POOL))
            for i, e in enumerate(exps):
                if e:
                    term = term * chart.coord(i + 1) ** e
            f = f + term
        if not f.is_zero():
            return f


def random_univariate(chart, rng, i, max_degree=2):
    """Random nonconstant polynomial in the i-th coordinate only."""
    x = chart.coord(i)
    while True:
        f = chart.zero
        for e in range(max_degree + 1):
            if rng.random() < 0.7:
                f = f + rng.choice(COEFF_POOL) * x**e
        if f.degree() >= 1:
            return f


def random_form(chart, rng, degree, max_degree=2):
    comps = {
        I: random_poly(chart, rng, max_degree, terms=2)
        for I in itertools.combinations(range(1, chart.dim + 1), degree)
    }
    return DiffForm(chart, degree, comps)


def random_vector(chart, rng, max_degree=2):
    return Multivector.from_list(
        chart, [random_poly(chart, rng, max_degree, terms=2) for _ in range(chart.dim)]
    )


def random_bivector(chart, rng, max_degree=2):
    comps = {
        I: random_poly(chart, rng, max_degree, terms=2)
        for I in itertools.combinations(range(1, chart.dim + 1), 2)
    }
    return Multivector(chart, 2, comps)
