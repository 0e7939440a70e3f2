"""Exact algebra of radial differential operators with an angular symbol.

A :class:`DiffOp` is a finite sum ``f_{d,a}(x) * D^d * Lam^a`` where ``D`` is
the derivative in the base variable (``r`` or ``t``), ``Lam`` stands for the
Laplace-Beltrami operator of the unit sphere and commutes with everything,
and each ``f_{d,a}`` is a :class:`LaurentPoly` in the base variable.
Operators are always stored in normal order (coefficients to the left).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from math import comb
from typing import Dict, Iterable, List, Mapping, Tuple

from .constants import Params, lower_critical
from .laurent import LaurentPoly, Scalar, as_fraction

Key = Tuple[int, int]


class BaseVariableMismatch(ValueError):
    pass


class DiffOp:
    __slots__ = ("_terms", "base_var")

    def __init__(self, terms: Mapping[Key, LaurentPoly | Scalar] | None = None, base_var: str = "r"):
        out: Dict[Key, LaurentPoly] = {}
        for (d, a), c in (terms or {}).items():
            if d < 0 or a < 0:
                raise ValueError("derivative and angular orders must be non-negative")
            c = c if isinstance(c, LaurentPoly) else LaurentPoly.constant(c)
            if c:
                out[(d, a)] = out.get((d, a), LaurentPoly()) + c
                if not out[(d, a)]:
                    del out[(d, a)]
        self._terms = out
        self.base_var = base_var

    # constructors ---------------------------------------------------------

    @classmethod
    def identity(cls, base_var: str = "r") -> "DiffOp":
        return cls({(0, 0): 1}, base_var)

    @classmethod
    def derivative(cls, base_var: str = "r") -> "DiffOp":
        return cls({(1, 0): 1}, base_var)

    @classmethod
    def angular(cls, base_var: str = "r") -> "DiffOp":
        return cls({(0, 1): 1}, base_var)

    @classmethod
    def multiplication(cls, f: LaurentPoly | Scalar, base_var: str = "r") -> "DiffOp":
        return cls({(0, 0): f}, base_var)

    # access ---------------------------------------------------------------

    @property
    def terms(self) -> Dict[Key, LaurentPoly]:
        return dict(self._terms)

    def coefficient(self, d: int, a: int = 0) -> LaurentPoly:
        return self._terms.get((d, a), LaurentPoly())

    def order(self) -> int:
        return max((d for d, _ in self._terms), default=0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant_coefficient(self) -> bool:
        return all(c.is_constant() for c in self._terms.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.base_var == other.base_var and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.base_var, frozenset(self._terms.items())))

    # arithmetic -----------------------------------------------------------

    def _check(self, other: "DiffOp") -> None:
        if self.base_var != other.base_var:
            raise BaseVariableMismatch(f"{self.base_var} vs {other.base_var}")

    def _lift(self, other) -> "DiffOp":
        if isinstance(other, DiffOp):
            self._check(other)
            return other
        return DiffOp.multiplication(other, self.base_var)

    def __add__(self, other) -> "DiffOp":
        other = self._lift(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, LaurentPoly()) + c
        return DiffOp(out, self.base_var)

    __radd__ = __add__

    def __neg__(self) -> "DiffOp":
        return DiffOp({k: -c for k, c in self._terms.items()}, self.base_var)

    def __sub__(self, other) -> "DiffOp":
        return self + (-self._lift(other))

    def scale(self, c: LaurentPoly | Scalar) -> "DiffOp":
        """Left multiplication by a coefficient function."""
        c = c if isinstance(c, LaurentPoly) else LaurentPoly.constant(c)
        return DiffOp({k: c * v for k, v in self._terms.items()}, self.base_var)

    def __mul__(self, other) -> "DiffOp":
        if isinstance(other, DiffOp):
            return compose(self, other)
        return self.scale(other)

    def __rmul__(self, other) -> "DiffOp":
        return self.scale(other)

    def __pow__(self, e: int) -> "DiffOp":
        out = DiffOp.identity(self.base_var)
        for _ in range(e):
            out = compose(out, self)
        return out

    def to_string(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (d, a), c in sorted(self._terms.items(), reverse=True):
            ops = "".join([f"D^{d}" if d else "", f"Lam^{a}" if a else ""]) or "1"
            parts.append(f"[{c.to_string(self.base_var)}]*{ops}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"DiffOp<{self.base_var}>({self.to_string()})"


def compose(a: DiffOp, b: DiffOp) -> DiffOp:
    """Composition a o b via the Leibniz rule D^i g = sum C(i,k) g^(k) D^(i-k)."""
    if a.base_var != b.base_var:
        raise BaseVariableMismatch(f"{a.base_var} vs {b.base_var}")
    out: Dict[Key, LaurentPoly] = {}
    for (i, la), f in a.terms.items():
        for (j, lb), g in b.terms.items():
            gk = g
            for k in range(i + 1):
                if gk.is_zero():
                    break
                key = (i + j - k, la + lb)
                out[key] = out.get(key, LaurentPoly()) + f * gk.scale(comb(i, k))
                gk = gk.derivative()
    return DiffOp(out, a.base_var)


def substitute_derivative(op: DiffOp, replacement: DiffOp) -> DiffOp:
    """Replace every D in the normal-ordered ``op`` by ``replacement``.

    This is exactly conjugation g^{-1} o op o g when ``replacement`` is
    g^{-1} o D o g, since multiplication operators commute with g.
    """
    out = DiffOp({}, op.base_var)
    powers: Dict[int, DiffOp] = {0: DiffOp.identity(op.base_var)}
    for d in range(1, op.order() + 1):
        powers[d] = compose(powers[d - 1], replacement)
    for (d, a), c in op.terms.items():
        lam = DiffOp({(0, a): 1}, op.base_var)
        out = out + compose(lam, powers[d]).scale(c)
    return out


# --- LogPowerExpr ----------------------------------------------------------


class LogPowerExpr:
    """Finite sum of c * x^a * L^(b - j) with L = -ln x on (0, 1).

    ``terms`` maps (a, j) to c, with a rational and j a non-negative integer
    downshift from the base log exponent b.
    """

    __slots__ = ("_terms", "log_base")

    def __init__(self, terms: Mapping[Tuple[Scalar, int], Scalar] | None = None, log_base: Scalar = 0):
        self.log_base = as_fraction(log_base)
        out: Dict[Tuple[Fraction, int], Fraction] = {}
        for (a, j), c in (terms or {}).items():
            if j < 0 or int(j) != j:
                raise ValueError("log downshift must be a non-negative integer")
            key = (as_fraction(a), int(j))
            c = as_fraction(c)
            out[key] = out.get(key, Fraction(0)) + c
            if not out[key]:
                del out[key]
        self._terms = out

    @classmethod
    def power(cls, a: Scalar, log_exponent: Scalar = 0, coeff: Scalar = 1) -> "LogPowerExpr":
        return cls({(a, 0): coeff}, log_exponent)

    @property
    def terms(self) -> Dict[Tuple[Fraction, int], Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def items(self) -> List[Tuple[Fraction, Fraction, Fraction]]:
        """(x exponent, L exponent, coefficient) triples sorted by dominance as x -> 0+."""
        rows = [(a, self.log_base - j, c) for (a, j), c in self._terms.items()]
        return sorted(rows, key=lambda r: (r[0], -r[1]))

    def leading_term(self) -> Tuple[Fraction, Fraction, Fraction]:
        if not self._terms:
            raise ValueError("zero expression has no leading term")
        return self.items()[0]

    def coefficient(self, a: Scalar, log_exponent: Scalar) -> Fraction:
        j = self.log_base - as_fraction(log_exponent)
        if j.denominator != 1 or j < 0:
            return Fraction(0)
        return self._terms.get((as_fraction(a), int(j)), Fraction(0))

    def _rebased(self, b: Fraction) -> Dict[Tuple[Fraction, int], Fraction]:
        shift = b - self.log_base
        if shift.denominator != 1 or shift < 0:
            raise ValueError("log bases differ by a non-integer or negative amount")
        return {(a, j + int(shift)): c for (a, j), c in self._terms.items()}

    def __add__(self, other: "LogPowerExpr") -> "LogPowerExpr":
        if not isinstance(other, LogPowerExpr):
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        b = max(self.log_base, other.log_base)
        out = self._rebased(b)
        for k, c in other._rebased(b).items():
            out[k] = out.get(k, Fraction(0)) + c
        return LogPowerExpr(out, b)

    def __neg__(self) -> "LogPowerExpr":
        return LogPowerExpr({k: -c for k, c in self._terms.items()}, self.log_base)

    def __sub__(self, other: "LogPowerExpr") -> "LogPowerExpr":
        return self + (-other)

    def scale(self, c: Scalar) -> "LogPowerExpr":
        c = as_fraction(c)
        return LogPowerExpr({k: v * c for k, v in self._terms.items()}, self.log_base)

    def times_laurent(self, f: LaurentPoly) -> "LogPowerExpr":
        out: Dict[Tuple[Fraction, int], Fraction] = {}
        for k, fc in f.items():
            for (a, j), c in self._terms.items():
                key = (a + k, j)
                out[key] = out.get(key, Fraction(0)) + fc * c
        return LogPowerExpr(out, self.log_base)

    def derivative(self) -> "LogPowerExpr":
        out: Dict[Tuple[Fraction, int], Fraction] = {}
        for (a, j), c in self._terms.items():
            e = self.log_base - j
            if a:
                out[(a - 1, j)] = out.get((a - 1, j), Fraction(0)) + a * c
            if e:
                out[(a - 1, j + 1)] = out.get((a - 1, j + 1), Fraction(0)) - e * c
        return LogPowerExpr(out, self.log_base)

    def monomial_power(self, p: Scalar) -> "LogPowerExpr":
        """(x^a L^e)^p for a single term with unit coefficient (or integer p)."""
        if len(self._terms) != 1:
            raise ValueError("only single-term expressions can be raised to a power")
        p = as_fraction(p)
        ((a, j), c), = self._terms.items()
        if c != 1 and p.denominator != 1:
            raise ValueError("non-unit coefficient under a fractional power is not rational")
        e = self.log_base - j
        return LogPowerExpr({(a * p, 0): c ** int(p) if c != 1 else 1}, e * p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LogPowerExpr):
            return NotImplemented
        return (self - other).is_zero()

    def evalf(self, x: float) -> float:
        import math

        L = -math.log(x)
        return float(sum(float(c) * x ** float(a) * L ** float(e) for a, e, c in self.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "LogPowerExpr(0)"
        body = " + ".join(f"({c})*x^({a})*L^({e})" for a, e, c in self.items())
        return f"LogPowerExpr({body})"


def apply(op: DiffOp, expr: LogPowerExpr, eigenvalue: Scalar = 0) -> LogPowerExpr:
    """Action of ``op`` on ``expr`` with the angular symbol replaced by ``eigenvalue``."""
    lam = as_fraction(eigenvalue)
    derivs = [expr]
    for _ in range(op.order()):
        derivs.append(derivs[-1].derivative())
    out = LogPowerExpr({}, expr.log_base)
    for (d, a), c in op.terms.items():
        w = lam ** a
        if not w:
            continue
        out = out + derivs[d].times_laurent(c.scale(w))
    return out


# --- concrete operators ------------------------------------------------------


def laplacian_polar(n: int) -> DiffOp:
    """Radial form D^2 + (n-1) r^-1 D + r^-2 Lam of the Euclidean Laplacian."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return DiffOp(
        {
            (2, 0): 1,
            (1, 0): LaurentPoly.monomial(-1, n - 1),
            (0, 1): LaurentPoly.monomial(-2, 1),
        },
        "r",
    )


def polyharmonic_polar(n: int, m: int) -> DiffOp:
    lap = laplacian_polar(n)
    return lap ** m


def tri_laplacian_polar(n: int) -> DiffOp:
    return compose(compose(laplacian_polar(n), laplacian_polar(n)), laplacian_polar(n))


def derivative_shift(shift: LaurentPoly | Scalar, base_var: str = "t") -> DiffOp:
    """The operator D + shift."""
    return DiffOp({(1, 0): 1, (0, 0): shift}, base_var)


def cylinder_factor(n: int, shift: Scalar = 0) -> DiffOp:
    """S(D + shift) with S(D) = D^2 + (n-2) D + Lam, in the variable t = ln r."""
    s = as_fraction(shift)
    # (D+s)^2 + (n-2)(D+s) + Lam
    return DiffOp({(2, 0): 1, (1, 0): 2 * s + (n - 2), (0, 0): s * s + (n - 2) * s, (0, 1): 1}, "t")


def polyharmonic_cylinder(n: int, m: int) -> DiffOp:
    """r^{2m} Delta^m written in t = ln r: S(D-2(m-1)) o ... o S(D-2) o S(D)."""
    op = DiffOp.identity("t")
    for k in range(m - 1, -1, -1):
        op = compose(op, cylinder_factor(n, -2 * k))
    return op


def emden_fowler_operator(n: int, p, m: int = 3) -> DiffOp:
    """Operator acting on v = r^gamma u, gamma = 2m/(p-1).

    Delta^m (r^-gamma v) = r^(-gamma-2m) * (returned operator) v.
    """
    p = as_fraction(p)
    g = Fraction(2 * m) / (p - 1)
    return substitute_derivative(polyharmonic_cylinder(n, m), derivative_shift(-g, "t"))


def log_power_exponent(n: int, m: int = 3) -> Fraction:
    """Exponent beta of (-t)^beta in u = e^{-gamma t} (-t)^beta w making the RHS carry t^-1."""
    g = Fraction(n - 2 * m)
    return -g / (2 * m)


def nonautonomous_operator(n: int, m: int = 3, log_exponent: Scalar | None = None) -> DiffOp:
    """Operator acting on w for u = e^{-gamma t} (-t)^beta w at the lower critical exponent.

    Conjugation by (-t)^beta sends D to D + beta/t, so all coefficients stay
    Laurent polynomials in t.
    """
    beta = log_power_exponent(n, m) if log_exponent is None else as_fraction(log_exponent)
    p = Fraction(n, n - 2 * m)
    auto = emden_fowler_operator(n, p, m)
    return substitute_derivative(auto, derivative_shift(LaurentPoly.monomial(-1, beta), "t"))


def euler_form(op: DiffOp) -> Tuple[int, DiffOp]:
    """Rewrite an equidimensional r-operator as r^-s Q(D_t) with D_t = r d/dr.

    Uses r^d (d/dr)^d = D(D-1)...(D-d+1). Raises if ``op`` is not
    equidimensional.
    """
    if op.base_var != "r":
        raise BaseVariableMismatch("euler_form expects an operator in r")
    shift = None
    out = DiffOp({}, "t")
    for (d, a), c in op.terms.items():
        if len(c.coefficients) != 1:
            raise ValueError("coefficient is not a monomial")
        (k, v), = c.items()
        s = d - k
        if shift is None:
            shift = s
        elif s != shift:
            raise ValueError("operator is not equidimensional")
        falling = DiffOp.identity("t")
        for i in range(d):
            falling = compose(falling, derivative_shift(-i, "t"))
        out = out + compose(DiffOp({(0, a): v}, "t"), falling)
    return int(shift or 0), out


# --- coefficient sets ------------------------------------------------------------

# name -> (derivative order, angular power)
CYLINDER_SCHEME: Dict[str, Key] = {
    **{f"K{d}": (d, 0) for d in range(7)},
    **{f"J{d}": (d, 1) for d in range(5)},
    **{f"L{d}": (d, 2) for d in range(3)},
    "Lam3": (0, 3),
}

POLAR_SCHEME: Dict[str, Key] = {
    **{f"M{d}": (d, 0) for d in range(7)},
    **{f"N{d}": (d, 1) for d in range(5)},
    **{f"O{d}": (d, 2) for d in range(3)},
    "Lam3": (0, 3),
}


@dataclass(frozen=True)
class CoefficientSet:
    """Named coefficients of a sixth order operator.

    ``entries`` maps names such as K0..K6, J0..J4, L0..L2, Lam3 (cylinder) or
    M0..M6, N0..N4, O0..O2, Lam3 (polar) to Laurent polynomials. Terms not
    covered by the scheme land in ``extra``; it is empty for every operator
    built here.
    """

    entries: Dict[str, LaurentPoly]
    base_var: str
    extra: Dict[Key, LaurentPoly] = field(default_factory=dict)

    def __getitem__(self, name: str) -> LaurentPoly:
        return self.entries[name]

    @property
    def K(self) -> List[LaurentPoly]:
        return [self.entries[f"K{j}"] for j in range(6)]

    @property
    def J(self) -> List[LaurentPoly]:
        return [self.entries[f"J{j}"] for j in range(5)]

    @property
    def L(self) -> List[LaurentPoly]:
        return [self.entries[f"L{j}"] for j in range(3)]

    def is_autonomous(self) -> bool:
        return all(c.is_constant() for c in self.entries.values())

    def constant(self, name: str) -> Fraction:
        c = self.entries[name]
        if not c.is_constant():
            raise ValueError(f"{name} is not constant")
        return c[0]

    def radial_floats(self, t: float | None = None) -> List[float]:
        """K0..K5 as floats, evaluated at t for nonautonomous sets."""
        if t is None:
            return [float(self.constant(f"K{j}")) for j in range(6)]
        return [self.entries[f"K{j}"].evalf(t) for j in range(6)]


def coefficient_set(op: DiffOp, scheme: Mapping[str, Key]) -> CoefficientSet:
    inverse = {v: k for k, v in scheme.items()}
    entries = {name: op.coefficient(*key) for name, key in scheme.items()}
    extra = {k: c for k, c in op.terms.items() if k not in inverse}
    return CoefficientSet(entries, op.base_var, extra)


# The three builders below are memoized; callers treat the returned sets as read-only.
@lru_cache(maxsize=256)
def polar_coefficients(n: int) -> CoefficientSet:
    return coefficient_set(tri_laplacian_polar(n), POLAR_SCHEME)


def emden_fowler_conjugate(n: int, p) -> CoefficientSet:
    return _emden_fowler_conjugate(int(n), as_fraction(p))


@lru_cache(maxsize=1024)
def _emden_fowler_conjugate(n: int, p: Fraction) -> CoefficientSet:
    return coefficient_set(emden_fowler_operator(n, p, 3), CYLINDER_SCHEME)


def emden_fowler_conjugate_params(params: Params) -> CoefficientSet:
    return emden_fowler_conjugate(params.n, params.p)


def nonautonomous_conjugate(n: int, log_exponent: Scalar | None = None) -> CoefficientSet:
    if n < 7:
        raise ValueError("n must be >= 7")
    return _nonautonomous_conjugate(int(n), None if log_exponent is None else as_fraction(log_exponent))


@lru_cache(maxsize=256)
def _nonautonomous_conjugate(n: int, log_exponent: Fraction | None) -> CoefficientSet:
    return coefficient_set(nonautonomous_operator(n, 3, log_exponent), CYLINDER_SCHEME)


def autonomous_from_polar(n: int, p) -> CoefficientSet:
    """Second derivation route: polar composition, Euler rewrite, then D -> D - gamma."""
    shift, q = euler_form(tri_laplacian_polar(n))
    if shift != 6:
        raise AssertionError(f"unexpected homogeneity {shift}")
    g = Fraction(6) / (as_fraction(p) - 1)
    return coefficient_set(substitute_derivative(q, derivative_shift(-g, "t")), CYLINDER_SCHEME)


def symbol_poly(coeffs: CoefficientSet) -> List[Fraction]:
    """Radial symbol K0 + K1 x + ... + K5 x^5 + x^6, ascending coefficients."""
    if not coeffs.is_autonomous():
        raise ValueError("symbol polynomial needs an autonomous coefficient set")
    lead = coeffs.constant("K6")
    return [coeffs.constant(f"K{j}") for j in range(6)] + [lead]


def radial_symbol(op: DiffOp) -> List[Fraction]:
    """Ascending coefficients of the Lam = 0 slice of a constant-coefficient operator."""
    if not op.is_constant_coefficient():
        raise ValueError("operator has non-constant coefficients")
    return [op.coefficient(d, 0)[0] for d in range(op.order() + 1)]


def lower_critical_log_constant(n: int, m: int = 3) -> Fraction:
    """(-1)^(m+1) lim t*K0_tilde for the order-2m nonautonomous operator.

    Balancing the constant state against the t^-1 nonlinearity gives
    w0^(p-1) equal to this number.
    """
    op = nonautonomous_operator(n, m)
    k0 = op.coefficient(0, 0)
    if any(k > -1 for k, _ in k0.items()):
        raise AssertionError("K0_tilde should vanish at t = infinity")
    return (-1) ** (m + 1) * k0[-1]


def order_m_product_constant(n: int, m: int, p) -> Fraction:
    """(-1)^m times the constant term of the order-2m conjugated radial symbol."""
    return (-1) ** m * emden_fowler_operator(n, p, m).coefficient(0, 0)[0]


def params_lower_critical(n: int) -> Params:
    return Params(n, lower_critical(n))
