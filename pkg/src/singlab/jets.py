"""Formal polynomials in the jet (v, v', ..., v^(6)) of a cylinder solution.

Two extra symbols carry the nonlinearity: ``N`` stands for |v|^(p-1) v and
``Q`` for |v|^(p+1)/(p+1), with Q' = N v'. Coefficients are Laurent
polynomials in t, so the same class handles the autonomous functional
(constant coefficients) and the t-weighted one.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple

import numpy as np

from .laurent import LaurentPoly, Scalar

JET_ORDER = 7  # v0..v6
N_IDX = 7
Q_IDX = 8
NSYM = 9

Monomial = Tuple[int, ...]
SYMBOLS = tuple(f"v{i}" for i in range(JET_ORDER)) + ("N", "Q")


def _mono(**powers: int) -> Monomial:
    e = [0] * NSYM
    for name, k in powers.items():
        e[SYMBOLS.index(name)] = k
    return tuple(e)


class JetPolynomial:
    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, LaurentPoly | Scalar] | None = None):
        out: Dict[Monomial, LaurentPoly] = {}
        for m, c in (terms or {}).items():
            if len(m) != NSYM:
                raise ValueError("monomial has the wrong number of symbols")
            c = c if isinstance(c, LaurentPoly) else LaurentPoly.constant(c)
            acc = out.get(m, LaurentPoly()) + c
            if acc:
                out[m] = acc
            else:
                out.pop(m, None)
        self._terms = out

    @classmethod
    def symbol(cls, name: str, coeff: LaurentPoly | Scalar = 1) -> "JetPolynomial":
        return cls({_mono(**{name: 1}): coeff})

    @classmethod
    def product(cls, coeff: LaurentPoly | Scalar, *names: str) -> "JetPolynomial":
        e = [0] * NSYM
        for nm in names:
            e[SYMBOLS.index(nm)] += 1
        return cls({tuple(e): coeff})

    @property
    def terms(self) -> Dict[Monomial, LaurentPoly]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "JetPolynomial") -> "JetPolynomial":
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, LaurentPoly()) + c
        return JetPolynomial(out)

    def __neg__(self) -> "JetPolynomial":
        return JetPolynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "JetPolynomial") -> "JetPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "JetPolynomial":
        if not isinstance(other, JetPolynomial):
            c = other if isinstance(other, LaurentPoly) else LaurentPoly.constant(other)
            return JetPolynomial({m: v * c for m, v in self._terms.items()})
        out: Dict[Monomial, LaurentPoly] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, LaurentPoly()) + c1 * c2
        return JetPolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, JetPolynomial):
            return NotImplemented
        return (self - other).is_zero()

    def uses(self, name: str) -> bool:
        i = SYMBOLS.index(name)
        return any(m[i] for m in self._terms)

    def derivative(self) -> "JetPolynomial":
        """Total t-derivative: coefficients, v_i -> v_{i+1}, Q -> N v1."""
        out = JetPolynomial({m: c.derivative() for m, c in self._terms.items()})
        for m, c in self._terms.items():
            if m[N_IDX]:
                raise ValueError("the derivative of N is outside the jet algebra")
            for i in range(NSYM):
                k = m[i]
                if not k:
                    continue
                e = list(m)
                e[i] -= 1
                if i == Q_IDX:
                    e[N_IDX] += 1
                    e[1] += 1
                elif i == JET_ORDER - 1:
                    raise ValueError("cannot differentiate v6; substitute the ODE first")
                else:
                    e[i + 1] += 1
                out = out + JetPolynomial({tuple(e): c.scale(k)})
        return out

    def substitute_top(self, replacement: "JetPolynomial") -> "JetPolynomial":
        """Replace v6 by ``replacement`` (which must not contain v6)."""
        if replacement.uses("v6"):
            raise ValueError("replacement contains v6")
        out = JetPolynomial()
        idx = JET_ORDER - 1
        for m, c in self._terms.items():
            k = m[idx]
            base = list(m)
            base[idx] = 0
            term = JetPolynomial({tuple(base): c})
            for _ in range(k):
                term = term * replacement
            out = out + term
        return out

    def evaluate(self, jet: Sequence[float], p: float, t: float | None = None, top: float | None = None) -> float:
        """Numeric value at a 6-jet (v0..v5); v6 is needed only if present."""
        v = float(jet[0])
        vals = list(map(float, jet[:6])) + [0.0 if top is None else float(top)]
        vals.append(np.sign(v) * abs(v) ** p)
        vals.append(abs(v) ** (p + 1) / (p + 1))
        total = 0.0
        for m, c in self._terms.items():
            if m[6] and top is None:
                raise ValueError("v6 value required")
            cv = c.evalf(t) if not c.is_constant() else float(c[0])
            if not c.is_constant() and t is None:
                raise ValueError("t required for nonconstant coefficients")
            term = cv
            for i, k in enumerate(m):
                if k:
                    term *= vals[i] ** k
            total += term
        return total

    def quadratic_diagonal(self) -> Dict[int, LaurentPoly]:
        """Coefficients of the pure squares v_i^2 (used to read off dissipation weights)."""
        out = {}
        for m, c in self._terms.items():
            if sum(m) == 2 and max(m) == 2 and m.index(2) < JET_ORDER:
                out[m.index(2)] = c
        return out

    def to_string(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in sorted(self._terms.items(), reverse=True):
            mono = "*".join(f"{SYMBOLS[i]}^{k}" if k > 1 else SYMBOLS[i] for i, k in enumerate(m) if k) or "1"
            parts.append(f"[{c.to_string('t')}]*{mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"JetPolynomial({self.to_string()})"


def v(i: int) -> JetPolynomial:
    return JetPolynomial.symbol(f"v{i}")


def ode_top(K: Sequence[LaurentPoly | Scalar], forcing: LaurentPoly | Scalar = -1) -> JetPolynomial:
    """v6 = -(K0 v0 + ... + K5 v5) + forcing * N."""
    out = JetPolynomial.symbol("N", forcing)
    for i, k in enumerate(K):
        out = out - v(i) * k
    return out
