"""Exact Laurent polynomials in one variable over the rationals."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Mapping, Tuple, Union

Scalar = Union[int, Fraction]


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and "a/b" strings to Fraction; floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"exact rational expected, got {type(x).__name__}")


class LaurentPoly:
    """Finite sum of c_k x^k with k in Z and c_k in Q.

    Zero coefficients are never stored, so two polynomials are equal iff
    their coefficient maps are equal.
    """

    __slots__ = ("_c",)

    def __init__(self, coefficients: Mapping[int, Scalar] | None = None):
        c: Dict[int, Fraction] = {}
        for k, v in (coefficients or {}).items():
            v = as_fraction(v)
            if v:
                c[int(k)] = c.get(int(k), Fraction(0)) + v
                if not c[int(k)]:
                    del c[int(k)]
        self._c = c

    @classmethod
    def constant(cls, c: Scalar) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, k: int, c: Scalar = 1) -> "LaurentPoly":
        return cls({k: c})

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @property
    def coefficients(self) -> Dict[int, Fraction]:
        return dict(self._c)

    def __getitem__(self, k: int) -> Fraction:
        return self._c.get(k, Fraction(0))

    def items(self) -> Iterable[Tuple[int, Fraction]]:
        return sorted(self._c.items())

    def is_zero(self) -> bool:
        return not self._c

    def is_constant(self) -> bool:
        return all(k == 0 for k in self._c)

    def degree_range(self) -> Tuple[int, int]:
        if not self._c:
            raise ValueError("zero polynomial has no degree range")
        return min(self._c), max(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._c == other._c
        try:
            return self._c == LaurentPoly.constant(as_fraction(other))._c
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    @staticmethod
    def _lift(x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        return LaurentPoly.constant(as_fraction(x))

    def __add__(self, other) -> "LaurentPoly":
        other = self._lift(other)
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, Fraction(0)) + v
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        other = self._lift(other)
        out: Dict[int, Fraction] = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                out[i + j] = out.get(i + j, Fraction(0)) + a * b
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "LaurentPoly":
        if e < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials can be inverted")
            (k, c), = self._c.items()
            return LaurentPoly({k * e: c ** e})
        out = LaurentPoly.constant(1)
        for _ in range(e):
            out = out * self
        return out

    def scale(self, c: Scalar) -> "LaurentPoly":
        c = as_fraction(c)
        return LaurentPoly({k: v * c for k, v in self._c.items()})

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly({k - 1: k * v for k, v in self._c.items() if k})

    def __call__(self, x) -> Fraction:
        x = as_fraction(x)
        if x == 0 and any(k < 0 for k in self._c):
            raise ZeroDivisionError("pole at x = 0")
        return sum((v * x ** k for k, v in self._c.items()), Fraction(0))

    def evalf(self, x: float) -> float:
        return float(sum(float(v) * x ** k for k, v in self._c.items()))

    def limit_at_infinity(self) -> Fraction:
        """Limit as |x| -> infinity; raises if a positive power is present."""
        if any(k > 0 for k in self._c):
            raise ValueError("unbounded as |x| -> infinity")
        return self[0]

    def to_string(self, var: str = "x") -> str:
        if not self._c:
            return "0"
        parts = []
        for k, v in sorted(self._c.items(), reverse=True):
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            coef = str(v)
            if mono:
                parts.append(f"({coef})*{mono}" if v != 1 else mono)
            else:
                parts.append(f"({coef})")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_string()})"
