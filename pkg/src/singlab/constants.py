"""Parameters, critical exponents and the named constants of the problem.

Rational quantities are exact ``Fraction`` values. Irrational powers are
evaluated with mpmath at ``WORKING_DPS`` digits and rounded to float at the
API boundary.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Tuple

import mpmath

from .laurent import as_fraction

WORKING_DPS = 60


class DomainError(ValueError):
    """Raised when a quantity is requested outside its range of definition."""


class Regime(str, enum.Enum):
    SERRIN_LIONS = "SerrinLions"
    AVILES = "Aviles"
    GIDAS_SPRUCK = "GidasSpruck"
    UPPER_CRITICAL = "UpperCritical"
    SUPERCRITICAL = "Supercritical"

    @property
    def supported(self) -> bool:
        return self is not Regime.SUPERCRITICAL


def parse_rational(text) -> Fraction:
    """Parse "a/b", integers or decimal strings into an exact Fraction."""
    try:
        return as_fraction(text)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc


@dataclass(frozen=True)
class CriticalExponents:
    lower: Fraction
    upper: Fraction
    gamma: Fraction


@dataclass(frozen=True)
class Params:
    n: int
    p: Fraction

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n:
            raise ValueError(f"dimension must be an integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "p", parse_rational(self.p))
        if self.n < 7:
            raise ValueError(f"n must be >= 7, got {self.n}")
        if self.p <= 1:
            raise ValueError(f"p must be > 1, got {self.p}")

    @classmethod
    def of(cls, n, p) -> "Params":
        return cls(int(n), parse_rational(p))

    @property
    def gamma(self) -> Fraction:
        return gamma(self)

    @property
    def lower(self) -> Fraction:
        return lower_critical(self.n)

    @property
    def upper_minus_one(self) -> Fraction:
        return upper_critical(self.n) - 1

    def exponents(self) -> CriticalExponents:
        return CriticalExponents(lower_critical(self.n), upper_critical(self.n), self.gamma)

    def label(self) -> str:
        return f"n={self.n},p={self.p}"


def lower_critical(n: int) -> Fraction:
    return Fraction(n, n - 6)


def upper_critical(n: int) -> Fraction:
    return Fraction(2 * n, n - 6)


def classify_regime(params: Params) -> Regime:
    lo = lower_critical(params.n)
    hi = upper_critical(params.n) - 1
    p = params.p
    if p < lo:
        return Regime.SERRIN_LIONS
    if p == lo:
        return Regime.AVILES
    if p < hi:
        return Regime.GIDAS_SPRUCK
    if p == hi:
        return Regime.UPPER_CRITICAL
    return Regime.SUPERCRITICAL


def gamma(params: Params) -> Fraction:
    if params.p == 1:
        raise ZeroDivisionError("gamma is undefined at p = 1")
    return Fraction(6) / (params.p - 1)


def _product_formula(n: int, g: Fraction) -> Fraction:
    return g * (g + 2) * (g + 4) * (n - 2 - g) * (n - 4 - g) * (n - 6 - g)


def k0_product(params: Params) -> Fraction:
    """Coefficient K0(n, p) of the homogeneous singular solution."""
    return _product_formula(params.n, params.gamma)


def k0_hat(n: int) -> Fraction:
    """Log-corrected constant (4/3)(n-2)(n-4)(n-6)^2 of the lower critical case."""
    if n < 7:
        raise ValueError("n must be >= 7")
    return Fraction(4, 3) * (n - 2) * (n - 4) * (n - 6) ** 2


def _mpf(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def ell_star_mp(params: Params):
    k0 = k0_product(params)
    if k0 <= 0:
        raise DomainError(f"K0({params.n},{params.p}) = {k0} <= 0; limit level undefined")
    with mpmath.workdps(WORKING_DPS):
        p = _mpf(params.p)
        return (p - 1) / (2 * (p + 1)) * mpmath.power(_mpf(k0), (p + 1) / (p - 1))


def ell_star(params: Params) -> float:
    """Limit Pohozaev level ((p-1)/(2(p+1))) K0^((p+1)/(p-1)) per unit sphere."""
    return float(ell_star_mp(params))


def ell_star_sharp(n: int) -> float:
    """Magnitude (3/(2(n-3))) K0_hat(n)^((n-3)/3); the sign is left to the caller."""
    with mpmath.workdps(WORKING_DPS):
        return float(mpmath.mpf(3) / (2 * (n - 3)) * mpmath.power(_mpf(k0_hat(n)), mpmath.mpf(n - 3) / 3))


def sharp_level_candidates(n: int) -> Dict[str, float]:
    """Competing values for the lower critical limit level.

    All share the factor K0_hat^((n-3)/3) and differ in the prefactor:
    the printed 3/(2(n-3)), the value 3(n-4)/(2(n-3)) obtained by inserting
    the nonzero root into the printed two-term energy, and (2n-9)/(2(n-3))
    obtained with the half weight on the quadratic term.
    """
    prefactors = {
        "printed": Fraction(3, 2 * (n - 3)),
        "energy_root": Fraction(3 * (n - 4), 2 * (n - 3)),
        "half_weight": Fraction(2 * n - 9, 2 * (n - 3)),
    }
    with mpmath.workdps(WORKING_DPS):
        base = mpmath.power(_mpf(k0_hat(n)), mpmath.mpf(n - 3) / 3)
        return {k: float(_mpf(v) * base) for k, v in prefactors.items()}


def k0_hat_sign_variants(n: int) -> Dict[str, Fraction]:
    """K0_hat under the two sign conventions used for lim t*K0_tilde."""
    k = k0_hat(n)
    return {"plus_limit": k, "minus_limit": -k}


def equilibrium_value(params: Params) -> float:
    k0 = k0_product(params)
    if k0 <= 0:
        raise DomainError("no positive homogeneous solution")
    with mpmath.workdps(WORKING_DPS):
        return float(mpmath.power(_mpf(k0), 1 / (_mpf(params.p) - 1)))


def universal_bound_constant(params: Params) -> float:
    """Constant ((p-1)/(2n))^(-1/(p-1)) in the global upper bound u <= C|x|^(-gamma)."""
    with mpmath.workdps(WORKING_DPS):
        p = _mpf(params.p)
        return float(mpmath.power((p - 1) / (2 * params.n), -1 / (p - 1)))


@lru_cache(maxsize=64)
def sphere_measure_exact(n: int) -> Tuple[Fraction, int]:
    """omega_{n-1} = |S^{n-1}| written as (rational, k) meaning rational * pi^k."""
    if n < 1:
        raise ValueError("n must be positive")
    if n % 2 == 0:
        h = n // 2
        return Fraction(2, math.factorial(h - 1)), h
    h = (n - 1) // 2
    return Fraction(2 ** n * math.factorial(h), math.factorial(n - 1)), h


def sphere_measure(n: int) -> float:
    if n <= 32:
        c, k = sphere_measure_exact(n)
        with mpmath.workdps(WORKING_DPS):
            return float(_mpf(c) * mpmath.pi ** k)
    with mpmath.workdps(WORKING_DPS):
        return float(2 * mpmath.pi ** (mpmath.mpf(n) / 2) / mpmath.gamma(mpmath.mpf(n) / 2))


@dataclass(frozen=True)
class NamedConstants:
    k0_product: Fraction
    k0_hat: Fraction
    ell_star: float | None
    ell_star_sharp: float
    omega: float


def named_constants(params: Params) -> NamedConstants:
    k0 = k0_product(params)
    return NamedConstants(
        k0_product=k0,
        k0_hat=k0_hat(params.n),
        ell_star=ell_star(params) if k0 > 0 else None,
        ell_star_sharp=ell_star_sharp(params.n),
        omega=sphere_measure(params.n),
    )


# --- general even order 2m --------------------------------------------------

@dataclass(frozen=True)
class OrderConstants:
    m: int
    n: int
    p: Fraction | None
    k0_m: Fraction | None
    k0_hat_m: Fraction
    k0_hat_per_order: Fraction | None


def k0_order(n: int, m: int, p) -> Fraction:
    """Product constant of the order-2m homogeneous solution (m = 1, 2, 3)."""
    p = parse_rational(p)
    g = Fraction(2 * m) / (p - 1)
    if m == 1:
        return g * (n - 2 - g)
    if m == 2:
        return g * (g + 2) * (n - 2 - g) * (n - 4 - g)
    if m == 3:
        return _product_formula(n, g)
    raise ValueError(f"order m must be 1, 2 or 3, got {m}")


def k0_hat_general(n: int, m: int) -> Fraction:
    """The displayed general-order log constant 2^(m-2)(m-1)!/m * prod(n-2j) * (n-2m)^2."""
    if m not in (1, 2, 3):
        raise ValueError(f"order m must be 1, 2 or 3, got {m}")
    prod = 1
    for j in range(m):
        prod *= n - 2 * j
    return Fraction(2) ** (m - 2) * math.factorial(m - 1) / m * prod * (n - 2 * m) ** 2


def k0_hat_per_order(n: int, m: int) -> Fraction:
    """Second, fourth and sixth order log constants as stated for each order."""
    if m == 1:
        return Fraction((n - 2) ** 2, 2)
    if m == 2:
        return Fraction((n - 2) * (n - 4) ** 2, 2)
    if m == 3:
        return k0_hat(n)
    raise ValueError(f"order m must be 1, 2 or 3, got {m}")


def general_order_constants(n: int, m: int, p=None) -> OrderConstants:
    if m not in (1, 2, 3):
        raise ValueError(f"order m must be 1, 2 or 3, got {m}")
    if n <= 2 * m:
        raise ValueError(f"need n > 2m, got n={n}, m={m}")
    pp = parse_rational(p) if p is not None else None
    return OrderConstants(
        m=m,
        n=n,
        p=pp,
        k0_m=k0_order(n, m, pp) if pp is not None else None,
        k0_hat_m=k0_hat_general(n, m),
        k0_hat_per_order=k0_hat_per_order(n, m),
    )
