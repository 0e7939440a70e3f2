"""Radial profiles u(r) recovered from cylinder trajectories, rate fits and transforms."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

import mpmath
import numpy as np

from .constants import WORKING_DPS, _mpf, DomainError, Params, k0_hat, k0_product, lower_critical
from .dynamics import Trajectory
from . import operators as ops

PROVENANCE = ("from-trajectory", "ansatz", "kelvin", "rescaled")
MIN_FIT_POINTS = 16


@dataclass(frozen=True)
class RadialProfile:
    radii: np.ndarray
    values: np.ndarray
    provenance: str = "ansatz"

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        u = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "radii", r)
        object.__setattr__(self, "values", u)
        if r.ndim != 1 or r.shape != u.shape or len(r) < 2:
            raise ValueError("radii and values must be matching 1-D arrays of length >= 2")
        if self.provenance not in PROVENANCE:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if np.any(r <= 0) or np.any(r >= 1):
            raise ValueError("radii must lie in (0, 1)")
        if np.any(np.diff(r) >= 0):
            raise ValueError("radii must be strictly decreasing")
        if np.any(~np.isfinite(u)) or np.any(u <= 0):
            raise ValueError("profile values must be positive")

    def __len__(self) -> int:
        return len(self.radii)

    def window(self, r_min: float, r_max: float) -> "RadialProfile":
        mask = (self.radii >= r_min) & (self.radii <= r_max)
        return RadialProfile(self.radii[mask], self.values[mask], self.provenance)

    def log_interpolate(self, r: np.ndarray) -> np.ndarray:
        """Piecewise linear interpolation of ln u against ln r (monotone in each cell)."""
        r = np.asarray(r, dtype=float)
        lo, hi = self.radii[-1], self.radii[0]
        if np.any(r < lo * (1 - 1e-12)) or np.any(r > hi * (1 + 1e-12)):
            raise DomainError("requested radius outside the profile support")
        x = np.log(self.radii[::-1])
        y = np.log(self.values[::-1])
        return np.exp(np.interp(np.log(r), x, y))


@dataclass(frozen=True)
class RateFit:
    exponent: float
    log_exponent: float
    constant: float
    residual_rms: float
    window: Tuple[float, float]
    model: str
    points: int

    def __post_init__(self):
        if not math.isfinite(self.residual_rms):
            raise ValueError("non-finite residual")

    def as_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "log_exponent": self.log_exponent,
            "constant": self.constant,
            "residual_rms": self.residual_rms,
            "window": list(self.window),
            "model": self.model,
            "points": self.points,
        }


def profile_from_trajectory(params: Params, traj: Trajectory) -> RadialProfile:
    """u(e^t) = e^(-gamma t) v(t); the t = 0 endpoint (r = 1) is dropped."""
    t = np.asarray(traj.times)
    if np.any(t > 0):
        raise ValueError("profile reconstruction needs t <= 0")
    keep = t < 0
    t = t[keep]
    vals = traj.states[keep, 0]
    if np.any(vals <= 0):
        raise ValueError("nonpositive v encountered; profile undefined")
    g = float(params.gamma)
    order = np.argsort(-t)  # decreasing t gives decreasing r
    t, vals = t[order], vals[order]
    return RadialProfile(np.exp(t), np.exp(-g * t) * vals, "from-trajectory")


def fit_rate(profile: RadialProfile, window: Tuple[float, float] = (1e-10, 1e-4),
             model: str = "pure-power") -> RateFit:
    """Least squares for ln u against {1, ln r} or {1, ln r, ln(-ln r)}."""
    r_min, r_max = window
    if not 0 < r_min < r_max < 1:
        raise ValueError("window must satisfy 0 < r_min < r_max < 1")
    mask = (profile.radii >= r_min) & (profile.radii <= r_max)
    if mask.sum() < MIN_FIT_POINTS:
        raise ValueError(f"need at least {MIN_FIT_POINTS} grid points in the window")
    lr = np.log(profile.radii[mask])
    y = np.log(profile.values[mask])
    cols = [np.ones_like(lr), lr]
    if model == "power-log":
        cols.append(np.log(-lr))
    elif model != "pure-power":
        raise ValueError(f"unknown model {model!r}")
    A = np.column_stack(cols)
    # scale columns so the conditioning reflects the data rather than units
    norms = np.linalg.norm(A, axis=0)
    coef, _, rank, _ = np.linalg.lstsq(A / norms, y, rcond=None)
    if rank < A.shape[1]:
        raise np.linalg.LinAlgError("degenerate window: design matrix is rank deficient")
    coef = coef / norms
    resid = y - A @ coef
    return RateFit(
        exponent=float(coef[1]),
        log_exponent=float(coef[2]) if model == "power-log" else 0.0,
        constant=float(np.exp(coef[0])),
        residual_rms=float(np.sqrt(np.mean(resid ** 2))),
        window=(float(r_min), float(r_max)),
        model=model,
        points=int(mask.sum()),
    )


def kelvin_transform(profile: RadialProfile, mu: float, n: int,
                     radii: Optional[np.ndarray] = None) -> RadialProfile:
    """(mu/r)^(n-6) u(mu^2/r).

    Without ``radii`` the result lives on the image grid mu^2/r_i, where no
    interpolation is needed, so applying the map twice returns the input
    values exactly. With ``radii`` the profile is interpolated log-log.
    """
    if mu <= 0:
        raise ValueError("mu must be positive")
    if radii is None:
        r_img = mu * mu / profile.radii
        keep = r_img < 1
        if keep.sum() < 2:
            raise DomainError("Kelvin image leaves (0, 1): domain exhausted")
        r = r_img[keep][::-1]
        u = (mu / r) ** (n - 6) * profile.values[keep][::-1]
        return RadialProfile(r, u, "kelvin")
    r = np.asarray(radii, dtype=float)
    u = (mu / r) ** (n - 6) * profile.log_interpolate(mu * mu / r)
    return RadialProfile(r, u, "kelvin")


def homogeneous_profile(c: float, gamma: float, radii: np.ndarray) -> RadialProfile:
    r = np.asarray(radii, dtype=float)
    return RadialProfile(r, c * r ** (-gamma), "ansatz")


def aviles_profile(n: int, radii: np.ndarray, constant: Optional[float] = None) -> RadialProfile:
    """A r^(6-n) (-ln r)^((6-n)/6), by default with A = K0_hat(n)^((n-6)/6)."""
    r = np.asarray(radii, dtype=float)
    A = float(k0_hat(n)) ** ((n - 6) / 6) if constant is None else constant
    return RadialProfile(r, A * r ** (6 - n) * (-np.log(r)) ** ((6 - n) / 6), "ansatz")


# --- symbolic balance --------------------------------------------------------------


@dataclass(frozen=True)
class AvilesBalance:
    n: int
    c: Fraction  # A^(2_# - 1) = c
    root_exponent: Fraction  # A = c^root_exponent
    lhs_exponents: Tuple[Fraction, Fraction]
    rhs_exponents: Tuple[Fraction, Fraction]
    derived_constant: float
    k0_hat_constant: float
    matches_k0_hat: bool
    c_over_k0_hat: Fraction

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "c": str(self.c),
            "derived_constant": f"({self.c})^({self.root_exponent})",
            "derived_constant_value": self.derived_constant,
            "k0_hat_constant": self.k0_hat_constant,
            "matches_k0_hat": self.matches_k0_hat,
            "c_over_k0_hat": str(self.c_over_k0_hat),
            "lhs_leading": [str(x) for x in self.lhs_exponents],
            "rhs_leading": [str(x) for x in self.rhs_exponents],
        }


def aviles_leading_balance(n: int) -> AvilesBalance:
    """Leading-order balance of (-Delta)^3 u = u^(2_#) on A r^(6-n) L^((6-n)/6), L = -ln r."""
    if n < 7:
        raise ValueError("n must be >= 7")
    b = Fraction(6 - n, 6)
    ansatz = ops.LogPowerExpr.power(6 - n, b)
    lhs = ops.apply(ops.tri_laplacian_polar(n), ansatz).scale(-1)  # (-Delta)^3 = -Delta^3
    a_l, e_l, c = lhs.leading_term()
    q = lower_critical(n)
    rhs = ansatz.monomial_power(q)
    a_r, e_r, _ = rhs.leading_term()
    if (a_l, e_l) != (a_r, e_r):
        raise ArithmeticError(f"leading terms do not balance: {(a_l, e_l)} vs {(a_r, e_r)}")
    if c <= 0:
        raise ArithmeticError("leading coefficient is not positive; no positive balance constant")
    root = 1 / (q - 1)  # A = c^((n-6)/6)
    kh = k0_hat(n)
    with mpmath.workdps(WORKING_DPS):
        A = mpmath.power(_mpf(c), _mpf(root))
        B = mpmath.power(_mpf(kh), _mpf(Fraction(n - 6, 6)))
        derived, expected = float(A), float(B)
    return AvilesBalance(n, c, root, (a_l, e_l), (a_r, e_r), derived, expected, c == kh, c / kh)


# --- scaling ------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalingReport:
    lam: float
    points: int
    max_value_difference: float  # |v_hat(t) - v(t + ln lam)| relative
    max_slope_difference: float  # first divided differences, relative
    max_curvature_difference: float
    exact_grid: bool

    def passed(self, tol: float = 1e-9) -> bool:
        return max(self.max_value_difference, self.max_slope_difference, self.max_curvature_difference) <= tol


def _jets(t: np.ndarray, v: np.ndarray):
    d1 = np.diff(v) / np.diff(t)
    tm = 0.5 * (t[1:] + t[:-1])
    d2 = np.diff(d1) / np.diff(tm)
    return d1, d2


def _rel(a: np.ndarray, b: np.ndarray) -> float:
    if len(a) == 0:
        return 0.0
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))))


def scaling_invariance_check(params: Params, profile: RadialProfile, lam: float) -> ScalingReport:
    """u_lam(r) = lam^gamma u(lam r) has cylinder image v_hat(t) = v(t + ln lam)."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    g = float(params.gamma)
    r = profile.radii
    lo, hi = r[-1], r[0]
    mask = (lam * r >= lo * (1 - 1e-12)) & (lam * r <= hi * (1 + 1e-12))
    if mask.sum() < 3:
        raise DomainError("scaled window leaves the profile support")
    rr = r[mask]
    t = np.log(rr)
    # points of lam * r that fall on the grid need no interpolation
    lr_grid = np.log(r)
    idx = np.searchsorted(-lr_grid, -(np.log(lam) + t))
    idx = np.clip(idx, 0, len(r) - 1)
    exact = bool(np.all(np.abs(lr_grid[idx] - (np.log(lam) + t)) <= 1e-9))
    u_shift = profile.values[idx] if exact else profile.log_interpolate(lam * rr)
    u_hat = lam ** g * u_shift
    v_hat = np.exp(g * t) * u_hat
    # cylinder image of u evaluated at t + ln lam
    ts = t + math.log(lam)
    v_shift = np.exp(g * ts) * u_shift
    d1a, d2a = _jets(t, v_hat)
    d1b, d2b = _jets(ts, v_shift)
    return ScalingReport(lam, int(mask.sum()), _rel(v_hat, v_shift), _rel(d1a, d1b), _rel(d2a, d2b), exact)


@dataclass(frozen=True)
class GidasSpruckRate:
    fit: RateFit
    expected_exponent: float
    expected_constant: float

    @property
    def exponent_error(self) -> float:
        return abs(self.fit.exponent - self.expected_exponent)

    @property
    def constant_relative_error(self) -> float:
        return abs(self.fit.constant - self.expected_constant) / self.expected_constant


def gidas_spruck_rate(params: Params, profile: RadialProfile,
                      window: Tuple[float, float] = (1e-6, 1e-3)) -> GidasSpruckRate:
    fit = fit_rate(profile, window, "pure-power")
    k0 = k0_product(params)
    with mpmath.workdps(WORKING_DPS):
        c = float(mpmath.power(_mpf(k0), 1 / (_mpf(params.p) - 1)))
    return GidasSpruckRate(fit, -float(params.gamma), c)
