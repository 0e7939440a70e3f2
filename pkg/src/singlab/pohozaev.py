"""Pohozaev functionals on the cylinder: values, monotonicity identities and limit levels."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np

from .constants import (
    WORKING_DPS,
    DomainError,
    Params,
    Regime,
    classify_regime,
    ell_star,
    k0_hat,
    lower_critical,
)
from .discrepancy import DiscrepancyReport, make_entry
from .dynamics import (
    IntegratorConfig,
    State6,
    Trajectory,
    autonomous_coefficients,
    integrate,
    nonautonomous_field,
)
from .jets import JetPolynomial, ode_top, v
from .laurent import LaurentPoly
from . import operators as ops
from . import tables

POHOZAEV_CSV_HEADER = ("t", "P", "dP_numeric", "dP_formula")
Coefficient = Union[Fraction, LaurentPoly]


# --- symbolic forms ---------------------------------------------------------------------


def h_rad_polynomial(K: Sequence[Coefficient], weight: Coefficient = 1, quadratic_index: int = 2) -> JetPolynomial:
    """The radial Pohozaev density as a jet polynomial.

    ``weight`` multiplies every quadratic term (1 for the autonomous functional,
    t for the nonautonomous one); ``quadratic_index`` selects which K_j sits in
    front of v1^2/2 (K2 in the autonomous display, K1 in the nonautonomous one).
    The nonlinear term enters as Q = |v|^(p+1)/(p+1).
    """
    w = weight if isinstance(weight, LaurentPoly) else LaurentPoly.constant(weight)
    half = Fraction(1, 2)
    quad = (
        v(5) * v(1) - v(4) * v(2) + v(3) * v(3) * half
        + (v(4) * v(1) - v(3) * v(2)) * K[5]
        + (v(3) * v(1) - v(2) * v(2) * half) * K[4]
        + v(2) * v(1) * K[3]
        + v(1) * v(1) * _scale(K[quadratic_index], half)
        + v(0) * v(0) * _scale(K[0], half)
    )
    return quad * w + JetPolynomial.symbol("Q")


def _scale(c: Coefficient, s: Fraction) -> Coefficient:
    return c.scale(s) if isinstance(c, LaurentPoly) else c * s


def printed_dissipation(K: Sequence[Coefficient]) -> JetPolynomial:
    """Radial right-hand side -K5 v3^2 + K3 v2^2 - K1 v1^2 of the monotonicity formula."""
    return -(v(3) * v(3) * K[5]) + v(2) * v(2) * K[3] - v(1) * v(1) * K[1]


@dataclass
class IdentityCheck:
    params: Params
    h_source: str
    ode_source: str
    derivative: JetPolynomial
    residual: JetPolynomial
    leftover_nonlinear: bool
    report: DiscrepancyReport

    @property
    def holds(self) -> bool:
        return self.residual.is_zero()


def verify_monotonicity_identity_symbolic(params: Params, h_source: str = "derived",
                                          ode_source: str = "derived") -> IdentityCheck:
    """d/dt H_rad along the ODE, minus the printed dissipation, as an exact jet polynomial.

    With both sources "derived" the residual is zero. Mixing sources shows
    what the printed coefficient values do to the identity.
    """
    Kh = autonomous_coefficients(params, h_source)
    Ko = autonomous_coefficients(params, ode_source)
    H = h_rad_polynomial(Kh)
    dH = H.derivative().substitute_top(ode_top(Ko, -1))
    resid = dH - printed_dissipation(Kh)
    rep = DiscrepancyReport()
    names = ("v0", "v1", "v2", "v3", "v4", "v5", "v6", "N", "Q")
    derived_terms = dH.terms
    printed_terms = printed_dissipation(Kh).terms
    for mono in sorted(set(derived_terms) | set(printed_terms)):
        label = "*".join(f"{names[i]}^{k}" if k > 1 else names[i] for i, k in enumerate(mono) if k)
        d = derived_terms.get(mono, LaurentPoly())
        pr = printed_terms.get(mono, LaurentPoly())
        rep.add(make_entry("monotonicity", label, params.n, d[0], pr[0], f"p={params.p}"))
    rep.notes["h_source"] = h_source
    rep.notes["ode_source"] = ode_source
    leftover = resid.uses("N") or resid.uses("Q")
    return IdentityCheck(params, h_source, ode_source, dH, resid, leftover, rep)


# --- numeric evaluation -------------------------------------------------------------------------


def _h_value(K: Sequence[float], jet, p: float, weight=1.0,
             quadratic_index: int = 2, nl_coeff: Optional[float] = None):
    """Density at one jet (shape (6,)) or at many (shape (m, 6))."""
    arr = np.asarray(jet, dtype=float)
    v0, v1, v2, v3, v4, v5 = (arr[..., i] for i in range(6))
    quad = (
        v5 * v1 - v4 * v2 + 0.5 * v3 * v3
        + K[5] * (v4 * v1 - v3 * v2)
        + K[4] * (v3 * v1 - 0.5 * v2 * v2)
        + K[3] * v2 * v1
        + 0.5 * K[quadratic_index] * v1 * v1
        + 0.5 * K[0] * v0 * v0
    )
    c = 1.0 / (p + 1) if nl_coeff is None else nl_coeff
    out = weight * quad + c * np.abs(v0) ** (p + 1)
    return float(out) if arr.ndim == 1 else out


def h_rad_autonomous(params: Params, s: State6, source: str = "derived") -> float:
    """Autonomous radial Pohozaev density per unit sphere measure."""
    K = [float(k) for k in autonomous_coefficients(params, source)]
    return _h_value(K, s.jet, float(params.p))


def h_rad_constant_exact(params: Params, c: Fraction) -> Fraction:
    """Exact density at a constant rational state (only for integer p)."""
    if params.p.denominator != 1:
        raise ValueError("exact constant-state value needs integer p")
    K0 = autonomous_coefficients(params)[0]
    return K0 * c * c / 2 + abs(c) ** (int(params.p) + 1) / (params.p + 1)


def equilibrium_level_mp(params: Params):
    """H_rad at the nonzero equilibrium, evaluated in extended precision."""
    from .constants import k0_product, _mpf

    K0 = autonomous_coefficients(params)[0]
    with mpmath.workdps(WORKING_DPS):
        p = _mpf(params.p)
        vs = mpmath.power(_mpf(k0_product(params)), 1 / (p - 1))
        return _mpf(K0) * vs ** 2 / 2 + vs ** (p + 1) / (p + 1)


def dissipation_value(K: Sequence[float], jet):
    arr = np.asarray(jet, dtype=float)
    out = -K[5] * arr[..., 3] ** 2 + K[3] * arr[..., 2] ** 2 - K[1] * arr[..., 1] ** 2
    return float(out) if arr.ndim == 1 else out


@dataclass(frozen=True)
class PohozaevSample:
    t: float
    value: float
    derivative_numeric: float
    derivative_formula: float

    def __post_init__(self):
        for name in ("t", "value", "derivative_numeric", "derivative_formula"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} is not finite")


@dataclass
class MonotonicityResult:
    samples: List[PohozaevSample]
    max_abs_difference: float  # max |numeric - formula - residual|
    max_abs_residual: float
    sign_counts: Dict[str, int]
    nonincreasing: bool
    stencil_spacing: float

    def verdict(self, tol: float = 1e-6) -> str:
        return "consistent" if self.max_abs_difference <= tol else "inconsistent"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(POHOZAEV_CSV_HEADER)
        for s in self.samples:
            w.writerow([format(x, ".17g") for x in (s.t, s.value, s.derivative_numeric, s.derivative_formula)])
        return buf.getvalue()


def _uniform_pitch(times: np.ndarray) -> float:
    d = np.diff(times)
    if len(d) == 0:
        raise ValueError("grid too coarse")
    pitch = float(np.mean(d))
    if np.max(np.abs(d - pitch)) > 1e-9 * max(1.0, abs(pitch)):
        raise ValueError("monotonicity check needs a uniform sample grid")
    return pitch


def monotonicity_check(params: Params, traj: Trajectory, h_source: str = "derived",
                       identity: Optional[IdentityCheck] = None) -> MonotonicityResult:
    """Centered 4th order differences of P against the printed dissipation along ``traj``."""
    if len(traj) < 8:
        raise ValueError("grid too coarse: at least 8 samples needed")
    pitch = _uniform_pitch(traj.times)
    spacing = max(1e-3, abs(pitch))
    k = max(1, int(round(spacing / abs(pitch))))
    h = k * pitch
    K = [float(c) for c in autonomous_coefficients(params, h_source)]
    p = float(params.p)
    P = _h_value(K, traj.states, p)
    idx = np.arange(2 * k, len(traj) - 2 * k)
    if len(idx) < 8:
        raise ValueError("grid too coarse: fewer than 8 interior samples")
    num = (-P[idx + 2 * k] + 8 * P[idx + k] - 8 * P[idx - k] + P[idx - 2 * k]) / (12 * h)
    forms = dissipation_value(K, traj.states[idx])
    residual = identity.residual if identity is not None else None
    if residual is not None and not residual.is_zero():
        res = np.array([residual.evaluate(traj.states[i], p) for i in idx])
    else:
        res = np.zeros(len(idx))
    diffs = np.abs(num - forms - res)
    samples = [PohozaevSample(float(traj.times[i]), float(P[i]), float(a), float(b))
               for i, a, b in zip(idx, num, forms)]
    counts = {
        "negative": int(np.sum(forms < 0)),
        "zero": int(np.sum(forms == 0)),
        "positive": int(np.sum(forms > 0)),
    }
    return MonotonicityResult(samples, float(diffs.max()), float(np.abs(res).max()), counts,
                              counts["positive"] == 0, abs(h))


def pohozaev_series(params: Params, traj: Trajectory, source: str = "derived") -> np.ndarray:
    K = [float(c) for c in autonomous_coefficients(params, source)]
    return _h_value(K, traj.states, float(params.p))


def term_magnitude_series(params: Params, traj: Trajectory, source: str = "derived") -> np.ndarray:
    """Sum of the absolute values of the individual density terms; the scale of cancellation error in P."""
    K = [abs(float(c)) for c in autonomous_coefficients(params, source)]
    a = np.abs(traj.states)
    v0, v1, v2, v3, v4, v5 = (a[:, i] for i in range(6))
    quad = (
        v5 * v1 + v4 * v2 + 0.5 * v3 * v3
        + K[5] * (v4 * v1 + v3 * v2)
        + K[4] * (v3 * v1 + 0.5 * v2 * v2)
        + K[3] * v2 * v1
        + 0.5 * K[2] * v1 * v1
        + 0.5 * K[0] * v0 * v0
    )
    return quad + v0 ** (float(params.p) + 1) / (float(params.p) + 1)


# --- nonautonomous functional ---------------------------------------------------------------


def nonautonomous_nl_coefficient(n: int) -> Fraction:
    """(n-6)/(2(n-3)), which equals 1/(2_# + 1)."""
    return Fraction(n - 6, 2 * (n - 3))


def h_rad_nonautonomous(n: int, t: float, s: State6) -> float:
    """t-weighted radial density evaluated with the derived coefficients."""
    if t == 0:
        raise ZeroDivisionError("pole at t = 0")
    cs = ops.nonautonomous_conjugate(n)
    K = [c.evalf(t) for c in cs.K]
    p = float(lower_critical(n))
    return _h_value(K, s.jet, p, weight=t, quadratic_index=1, nl_coeff=float(nonautonomous_nl_coefficient(n)))


def nonautonomous_derivative_polynomial(n: int) -> JetPolynomial:
    """d/dt of the t-weighted density along the derived equation w6 = -sum K~ w + N/t."""
    cs = ops.nonautonomous_conjugate(n)
    H = h_rad_polynomial(cs.K, LaurentPoly.monomial(1), quadratic_index=1)
    return H.derivative().substitute_top(ode_top(cs.K, LaurentPoly.monomial(-1)))


@dataclass(frozen=True)
class NonautonomousLimit:
    n: int
    w0: float
    value_at_t: float
    t: float
    limit_value: float
    energy_printed: float  # (n-6)/(2(n-3)) w0^(2_#+1) + K0_hat w0^2
    energy_half_weight: float  # same with K0_hat/2


def constant_state_limit(n: int, t: float = -1e6) -> NonautonomousLimit:
    """Value of the nonautonomous density at w0 = K0_hat^((n-6)/6), and its t -> -inf limit."""
    kh = float(k0_hat(n))
    w0 = kh ** ((n - 6) / 6)
    p = float(lower_critical(n))
    c = float(nonautonomous_nl_coefficient(n))
    cs = ops.nonautonomous_conjugate(n)
    lim_tk0 = float(cs["K0"][-1])
    val = h_rad_nonautonomous(n, t, State6.constant(w0))
    lim = c * w0 ** (p + 1) + 0.5 * lim_tk0 * w0 ** 2
    return NonautonomousLimit(
        n=n, w0=w0, value_at_t=val, t=t, limit_value=lim,
        energy_printed=c * w0 ** (p + 1) + kh * w0 ** 2,
        energy_half_weight=c * w0 ** (p + 1) + 0.5 * kh * w0 ** 2,
    )


# --- limit classification ---------------------------------------------------------------------


@dataclass(frozen=True)
class LevelClassification:
    label: str
    value: float
    distances: Dict[str, float]


def _classify(value: float, levels: Dict[str, float], scale: float, cutoff: float = 0.1) -> LevelClassification:
    dist = {k: abs(value - lv) / scale for k, lv in levels.items()}
    best = min(dist, key=dist.get)
    label = best if dist[best] <= cutoff else "unresolved"
    return LevelClassification(label, value, dist)


def limit_level(params_or_n: Union[Params, int], traj: Trajectory, regime: Optional[Regime] = None) -> LevelClassification:
    """Classify the terminal state of a trajectory running toward t = -infinity.

    Autonomous runs: Pohozaev value against {0, -ell*_p}. Aviles runs
    (an integer n, or regime Aviles): terminal w against {0, K0_hat^((n-6)/6)}.
    """
    if isinstance(params_or_n, Params):
        regime = regime or classify_regime(params_or_n)
    else:
        regime = Regime.AVILES
    if regime is Regime.AVILES:
        n = params_or_n if isinstance(params_or_n, int) else params_or_n.n
        w_hat = float(k0_hat(n)) ** ((n - 6) / 6)
        w = float(traj.states[-1, 0])
        return _classify(w, {"zero": 0.0, "k0-hat-level": w_hat}, w_hat)
    params = params_or_n
    value = h_rad_autonomous(params, traj.terminal())
    if regime is not Regime.GIDAS_SPRUCK:
        raise DomainError("the nonzero limit level is defined only in the Gidas-Spruck range")
    ls = ell_star(params)
    return _classify(value, {"zero": 0.0, "minus-ell-star": -ls}, ls)


def aviles_probe(n: int, t0: float = -1000.0, span: float = 3.0, w0: Optional[float] = None,
                 cfg: IntegratorConfig = IntegratorConfig(), sample_pitch: float = 0.01) -> Trajectory:
    """Integrate the nonautonomous equation toward -infinity from a constant state at t0."""
    if t0 >= 0:
        raise ValueError("t0 must be negative")
    if w0 is None:
        w0 = float(k0_hat(n)) ** ((n - 6) / 6)
    return integrate(nonautonomous_field(n), t0, State6.constant(w0), t0 - span, cfg, sample_pitch=sample_pitch)


# --- sign audit -----------------------------------------------------------------------------

SIGN_CLAIMS = {"K5": ">=0", "K1": ">=0", "L1": ">=0", "K3": "<=0", "J3": "<=0", "J1": "<=0"}


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _matches(x: Fraction, claim: str) -> bool:
    return x >= 0 if claim == ">=0" else x <= 0


@dataclass(frozen=True)
class SignRecord:
    name: str
    claim: str
    printed: Fraction
    derived: Fraction
    printed_sign: int
    derived_sign: int
    matches_claim: bool  # judged on the printed value
    derived_matches_claim: bool


@dataclass(frozen=True)
class SignProfile:
    n: int
    p: Fraction
    regime: str
    records: Tuple[SignRecord, ...]

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "p": str(self.p),
            "regime": self.regime,
            "signs": {
                r.name: {
                    "claim": r.claim,
                    "printed": str(r.printed),
                    "derived": str(r.derived),
                    "printed_sign": r.printed_sign,
                    "derived_sign": r.derived_sign,
                    "matches_claim": r.matches_claim,
                    "derived_matches_claim": r.derived_matches_claim,
                }
                for r in self.records
            },
        }


def sign_profile(params: Params) -> SignProfile:
    regime = classify_regime(params)
    if regime in (Regime.SERRIN_LIONS, Regime.SUPERCRITICAL):
        raise DomainError("the sign audit covers 2_# <= p <= 2^# - 1")
    derived = ops.emden_fowler_conjugate(params.n, params.p)
    recs = []
    for name, claim in SIGN_CLAIMS.items():
        pr = tables.AUTONOMOUS[name](params.n, params.p)
        de = derived.constant(name)
        recs.append(SignRecord(name, claim, pr, de, _sign(pr), _sign(de), _matches(pr, claim), _matches(de, claim)))
    return SignProfile(params.n, params.p, regime.value, tuple(recs))
