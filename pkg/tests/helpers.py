"""Seeded generators shared by the property tests."""
from fractions import Fraction
from itertools import combinations_with_replacement, permutations

import numpy as np

from src.funcfile.polynomial import Polynomial, VectorField


def variable_names(n):
    return tuple(f"x{i}" for i in range(1, n + 1))


def random_coefficient(rng, fractional=False):
    value = int(rng.integers(1, 6)) * int(rng.choice([-1, 1]))
    if fractional and rng.random() < 0.3:
        return Fraction(value, int(rng.integers(2, 5)))
    return Fraction(value)


def random_exponents(rng, nvars, max_degree):
    exponents = [0] * nvars
    for _ in range(int(rng.integers(0, max_degree + 1))):
        exponents[int(rng.integers(nvars))] += 1
    return tuple(exponents)


def random_polynomial(rng, variables, max_degree=4, max_terms=6, fractional=False):
    terms = [
        (random_coefficient(rng, fractional), random_exponents(rng, len(variables), max_degree))
        for _ in range(int(rng.integers(1, max_terms + 1)))
    ]
    return Polynomial.from_terms(variables, terms)


def monomials_of_degree(nvars, degree):
    result = []
    for combo in combinations_with_replacement(range(nvars), degree):
        exponents = [0] * nvars
        for i in combo:
            exponents[i] += 1
        result.append(tuple(exponents))
    return result


def random_quadratic_field(rng, nvars, nfuncs=2):
    """Degree-2 field using every quadratic monomial, so stacked Hessians have full column rank."""
    variables = variable_names(nvars)
    functions = []
    for j in range(nfuncs):
        terms = [(random_coefficient(rng), e) for e in monomials_of_degree(nvars, 2)]
        terms += [(random_coefficient(rng), e) for e in monomials_of_degree(nvars, 1) if rng.random() < 0.5]
        terms.append((random_coefficient(rng), (0,) * nvars))
        functions.append((f"f{j + 1}", Polynomial.from_terms(variables, terms)))
    return VectorField(variables, tuple(functions))


def random_cubic_field(rng, nvars=3):
    """Degree-3 field with a dominant 10*x_j^3 in f_j plus small random terms."""
    variables = variable_names(nvars)
    functions = []
    for j in range(nvars):
        cube = tuple(3 if i == j else 0 for i in range(nvars))
        terms = [(Fraction(10), cube)]
        terms += [
            (Fraction(int(rng.integers(-2, 3)), 4), random_exponents(rng, nvars, 3))
            for _ in range(4)
        ]
        functions.append((f"f{j + 1}", Polynomial.from_terms(variables, terms)))
    return VectorField(variables, tuple(functions))


def naive_evaluate(poly, values):
    """Independent sum of products over the raw terms."""
    total = 0.0
    for term in poly.terms:
        product = float(term.coefficient)
        for x, e in zip(values, term.exponents):
            for _ in range(e):
                product = product * x
        total += product
    return total


def match_spectra(got, expected):
    """Largest distance under the best pairing of two equally sized lists of complex values."""
    expected = list(expected)
    return min(
        max(abs(g - e) for g, e in zip(got, perm))
        for perm in permutations(expected)
    )


def gershgorin_contains(a, z, slack):
    a = np.asarray(a)
    radii = np.abs(a).sum(axis=1) - np.abs(np.diag(a))
    return any(abs(z - a[i, i]) <= radii[i] + slack for i in range(a.shape[0]))


def abs_polynomial(poly):
    """Same terms with absolute coefficients: evaluated at |x| it bounds the size of every partial sum."""
    return Polynomial.from_terms(poly.variables, [(abs(t.coefficient), t.exponents) for t in poly.terms])
