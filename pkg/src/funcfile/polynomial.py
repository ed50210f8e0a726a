"""
Canonical multivariate polynomials with exact rational coefficients.

A Polynomial always lives over an ordered tuple of variable names (the
declaring VectorField's variables). Terms are kept in graded-lexicographic
order with declaration-order variables: higher total degree first, ties
broken by descending exponent vectors.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from src.errors import ArityMismatch, DuplicateName, NonFiniteValue, Overflow, UnknownName, UnknownVariable

Exponents = Tuple[int, ...]


def _order_key(exponents: Exponents):
    return (-sum(exponents), tuple(-e for e in exponents))


@dataclass(frozen=True)
class Monomial:
    coefficient: Fraction
    exponents: Exponents

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def evaluate(self, values: Sequence[float]) -> float:
        result = float(self.coefficient)
        for x, e in zip(values, self.exponents):
            if e:
                try:
                    result *= x ** e
                except OverflowError:
                    raise Overflow(f"term overflows at value {x!r} with exponent {e}") from None
        return result


@dataclass(frozen=True)
class Polynomial:
    variables: Tuple[str, ...]
    terms: Tuple[Monomial, ...] = ()

    @classmethod
    def from_terms(cls, variables: Sequence[str], terms: Iterable[Tuple[Fraction, Exponents]]) -> "Polynomial":
        """Build the canonical form: like terms combined, zeros dropped, graded-lex sorted."""
        variables = tuple(variables)
        combined: Dict[Exponents, Fraction] = {}
        for coefficient, exponents in terms:
            exponents = tuple(int(e) for e in exponents)
            if len(exponents) != len(variables):
                raise ArityMismatch(
                    f"exponent vector of length {len(exponents)} over {len(variables)} variables"
                )
            combined[exponents] = combined.get(exponents, Fraction(0)) + Fraction(coefficient)
        ordered = sorted((e for e, c in combined.items() if c != 0), key=_order_key)
        return cls(variables, tuple(Monomial(combined[e], e) for e in ordered))

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls(tuple(variables), ())

    @classmethod
    def constant(cls, variables: Sequence[str], value) -> "Polynomial":
        return cls.from_terms(variables, [(Fraction(value), (0,) * len(variables))])

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "Polynomial":
        variables = tuple(variables)
        if name not in variables:
            raise UnknownVariable(name)
        exponents = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, (Monomial(Fraction(1), exponents),))

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1."""
        return max((t.degree for t in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def is_affine(self) -> bool:
        return self.degree <= 1

    def coefficient_of(self, exponents: Exponents) -> Fraction:
        for term in self.terms:
            if term.exponents == tuple(exponents):
                return term.coefficient
        return Fraction(0)

    def _check_compatible(self, other: "Polynomial") -> None:
        if self.variables != other.variables:
            raise ArityMismatch(f"polynomials over {self.variables} and {other.variables}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_compatible(other)
        pairs = [(t.coefficient, t.exponents) for t in self.terms + other.terms]
        return Polynomial.from_terms(self.variables, pairs)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.variables, tuple(Monomial(-t.coefficient, t.exponents) for t in self.terms))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check_compatible(other)
        pairs = [
            (a.coefficient * b.coefficient, tuple(x + y for x, y in zip(a.exponents, b.exponents)))
            for a in self.terms
            for b in other.terms
        ]
        return Polynomial.from_terms(self.variables, pairs)

    def scale(self, factor) -> "Polynomial":
        factor = Fraction(factor)
        return Polynomial.from_terms(self.variables, [(t.coefficient * factor, t.exponents) for t in self.terms])

    def power(self, exponent: int) -> "Polynomial":
        result = Polynomial.constant(self.variables, 1)
        for _ in range(exponent):
            result = result * self
        return result

    def derivative(self, index: int) -> "Polynomial":
        """Exact partial derivative with respect to the variable at `index`."""
        pairs = []
        for term in self.terms:
            e = term.exponents[index]
            if e == 0:
                continue
            lowered = term.exponents[:index] + (e - 1,) + term.exponents[index + 1:]
            pairs.append((term.coefficient * e, lowered))
        return Polynomial.from_terms(self.variables, pairs)

    def evaluate_values(self, values: Sequence[float]) -> float:
        """Term-sum evaluation over values given in variable order."""
        if len(values) != self.nvars:
            raise ArityMismatch(f"expected {self.nvars} values, got {len(values)}")
        total = sum((term.evaluate(values) for term in self.terms), 0.0)
        if not math.isfinite(total):
            raise Overflow(f"evaluation is not finite ({total})")
        return total


@dataclass(frozen=True)
class Point:
    """One sensitive record: a finite real value for every variable."""

    values: Mapping[str, float] = field(default_factory=dict)

    @classmethod
    def for_variables(cls, variables: Sequence[str], values: Mapping[str, float]) -> "Point":
        missing = [v for v in variables if v not in values]
        extra = [k for k in values if k not in variables]
        if missing or extra:
            raise ArityMismatch(f"point does not match variables: missing {missing}, unexpected {extra}")
        checked = {}
        for name in variables:
            value = float(values[name])
            if not math.isfinite(value):
                raise NonFiniteValue(f"value of '{name}' is not finite: {value}")
            checked[name] = value
        return cls(checked)

    def vector(self, variables: Sequence[str]) -> List[float]:
        """Values in the given variable order."""
        if set(self.values) != set(variables) or len(self.values) != len(variables):
            raise ArityMismatch(
                f"point defines {sorted(self.values)}, expected {list(variables)}"
            )
        return [self.values[name] for name in variables]


@dataclass(frozen=True)
class VectorField:
    """The named system F = (f1..fm) over declared variables x1..xn."""

    variables: Tuple[str, ...]
    functions: Tuple[Tuple[str, Polynomial], ...]

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise DuplicateName(next(v for v in self.variables if self.variables.count(v) > 1))
        names = [name for name, _ in self.functions]
        if len(set(names)) != len(names):
            raise DuplicateName(next(n for n in names if names.count(n) > 1))
        for name, poly in self.functions:
            if poly.variables != self.variables:
                raise ArityMismatch(f"function '{name}' is not over the declared variables")

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def m(self) -> int:
        return len(self.functions)

    @property
    def function_names(self) -> List[str]:
        return [name for name, _ in self.functions]

    def function(self, name: str) -> Polynomial:
        for fname, poly in self.functions:
            if fname == name:
                return poly
        raise UnknownName(f"unknown function '{name}'")

    def variable_index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnknownVariable(name) from None

    def point(self, values: Mapping[str, float]) -> Point:
        return Point.for_variables(self.variables, values)


def evaluate(poly: Polynomial, point: Point) -> float:
    return poly.evaluate_values(point.vector(poly.variables))


def evaluate_field(field: VectorField, point: Point) -> Dict[str, float]:
    """Evaluate every component f_j of the field at the point."""
    values = point.vector(field.variables)
    return {name: poly.evaluate_values(values) for name, poly in field.functions}


def partial_derivative(poly: Polynomial, var: str) -> Polynomial:
    if var not in poly.variables:
        raise UnknownVariable(var)
    return poly.derivative(poly.variables.index(var))


def _format_coefficient(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _format_term(term: Monomial, variables: Sequence[str]) -> str:
    factors = [
        name if e == 1 else f"{name}^{e}"
        for name, e in zip(variables, term.exponents)
        if e
    ]
    magnitude = abs(term.coefficient)
    if not factors:
        return _format_coefficient(magnitude)
    if magnitude == 1:
        return "*".join(factors)
    return "*".join([_format_coefficient(magnitude)] + factors)


def canonical_text(poly: Polynomial) -> str:
    """Serialize in graded-lex order with explicit '*' and '^' (exponents > 1)."""
    if poly.is_zero():
        return "0"
    parts = []
    for i, term in enumerate(poly.terms):
        body = _format_term(term, poly.variables)
        negative = term.coefficient < 0
        if i == 0:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f" - {body}" if negative else f" + {body}")
    return "".join(parts)


def field_text(field: VectorField) -> str:
    """Serialize a whole field as a function file."""
    lines = ["vars: " + " ".join(field.variables)]
    lines.extend(f"{name} = {canonical_text(poly)}" for name, poly in field.functions)
    return "\n".join(lines) + "\n"
