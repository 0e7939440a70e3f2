"""Radial cylinder ODEs: right-hand sides, adaptive integration, equilibria, spectra, shooting."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from scipy.integrate import DOP853, RK45, solve_bvp

from .constants import (
    WORKING_DPS,
    DomainError,
    Params,
    Regime,
    classify_regime,
    k0_product,
    lower_critical,
)
from .laurent import LaurentPoly
from . import operators as ops
from . import tables

BLOWUP_LIMIT = 1e150
CSV_HEADER = ("t", "v", "v1", "v2", "v3", "v4", "v5")


class IntegrationError(RuntimeError):
    pass


class StepSizeUnderflow(IntegrationError):
    pass


class MaxStepsExceeded(IntegrationError):
    pass


class NonFiniteState(IntegrationError):
    pass


class BlowUp(IntegrationError):
    pass


class RootResidualError(ArithmeticError):
    pass


class ShootingError(RuntimeError):
    pass


@dataclass(frozen=True)
class State6:
    jet: Tuple[float, float, float, float, float, float]

    def __post_init__(self):
        jet = tuple(float(x) for x in self.jet)
        if len(jet) != 6:
            raise ValueError("a state has exactly six components")
        if not all(math.isfinite(x) for x in jet):
            raise ValueError("state components must be finite")
        object.__setattr__(self, "jet", jet)

    @classmethod
    def constant(cls, c: float) -> "State6":
        return cls((c, 0.0, 0.0, 0.0, 0.0, 0.0))

    def array(self) -> np.ndarray:
        return np.array(self.jet)


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    max_steps: int = 2_000_000
    method: str = "DOP853"

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol"):
            v = getattr(self, name)
            if not (1e-14 <= v <= 1e-2):
                raise ValueError(f"{name} must lie in [1e-14, 1e-2], got {v}")
        if self.max_step <= 0:
            raise ValueError("max_step must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be positive")
        if self.method not in ("DOP853", "RK45"):
            raise ValueError("method must be DOP853 or RK45")

    @property
    def order(self) -> int:
        return 8 if self.method == "DOP853" else 5


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (len(times), 6)
    meta: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        s = np.asarray(self.states, dtype=float).reshape(len(t), 6)
        if len(t) >= 2:
            d = np.diff(t)
            if not (np.all(d > 0) or np.all(d < 0)):
                raise ValueError("trajectory times must be strictly monotone")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "states", s)

    @property
    def direction(self) -> int:
        return 1 if len(self.times) < 2 or self.times[-1] > self.times[0] else -1

    def __len__(self) -> int:
        return len(self.times)

    def state(self, i: int) -> State6:
        return State6(tuple(self.states[i]))

    def reversed(self) -> "Trajectory":
        return Trajectory(self.times[::-1].copy(), self.states[::-1].copy(), dict(self.meta))

    def terminal(self) -> State6:
        return self.state(-1)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for t, row in zip(self.times, self.states):
            w.writerow([format(t, ".17g")] + [format(x, ".17g") for x in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Trajectory":
        rows = list(csv.reader(io.StringIO(text)))
        if tuple(rows[0]) != CSV_HEADER:
            raise ValueError("unexpected trajectory header")
        data = np.array([[float(x) for x in r] for r in rows[1:]])
        return cls(data[:, 0], data[:, 1:])


# --- fields -------------------------------------------------------------------------


def nonlinearity(v: float, p: float) -> float:
    """Odd extension |v|^(p-1) v, guarded against overflow."""
    a = abs(v)
    if a > BLOWUP_LIMIT:
        raise BlowUp(f"state magnitude {a:.3e} exceeds {BLOWUP_LIMIT:.0e}")
    if a == 0.0:
        return 0.0
    if a > 1e100:
        mag = math.exp(p * math.log(a))
    else:
        mag = a ** p
    return math.copysign(mag, v)


@dataclass(frozen=True)
class Field:
    """Vector field of a radial sixth order cylinder equation.

    kind "autonomous": v6 = -sum K_i v_i - N(v);
    kind "linear":     v6 = -sum K_i v_i;
    kind "nonautonomous": w6 = -sum K~_i(t) w_i + t^-1 N(w).
    """

    kind: str
    n: int
    p: Fraction
    K: Tuple[float, ...] = ()
    K_laurent: Tuple[LaurentPoly, ...] = ()
    source: str = "derived"

    def key(self) -> str:
        return f"{self.kind}:{self.source}:n={self.n}:p={self.p}"

    def coefficients(self, t: float | None = None) -> np.ndarray:
        if self.kind == "nonautonomous":
            if t == 0:
                raise ZeroDivisionError("pole at t = 0")
            return np.array([c.evalf(t) for c in self.K_laurent])
        return np.asarray(self.K, dtype=float)

    def __call__(self, t: float, y: np.ndarray) -> np.ndarray:
        K = self.coefficients(t)
        out = np.empty(6)
        out[:5] = y[1:]
        top = -float(np.dot(K, y))
        if self.kind == "autonomous":
            top -= nonlinearity(float(y[0]), float(self.p))
        elif self.kind == "nonautonomous":
            top += nonlinearity(float(y[0]), float(self.p)) / t
        out[5] = top
        return out


def autonomous_coefficients(params: Params, source: str = "derived") -> Tuple[Fraction, ...]:
    if source == "derived":
        cs = ops.emden_fowler_conjugate(params.n, params.p)
        return tuple(cs.constant(f"K{j}") for j in range(6))
    if source == "printed":
        return tuple(tables.AUTONOMOUS[f"K{j}"](params.n, params.p) for j in range(6))
    raise ValueError("source must be 'derived' or 'printed'")


def autonomous_field(params: Params, source: str = "derived", linear: bool = False) -> Field:
    K = tuple(float(k) for k in autonomous_coefficients(params, source))
    return Field("linear" if linear else "autonomous", params.n, params.p, K, (), source)


def nonautonomous_field(n: int) -> Field:
    cs = ops.nonautonomous_conjugate(n)
    return Field("nonautonomous", n, lower_critical(n), (), tuple(cs.K), "derived")


def rhs_autonomous(params: Params, s: State6, source: str = "derived") -> np.ndarray:
    return autonomous_field(params, source)(0.0, s.array())


def rhs_nonautonomous(n: int, t: float, s: State6) -> np.ndarray:
    if t == 0:
        raise ZeroDivisionError("the nonautonomous field has a pole at t = 0")
    return nonautonomous_field(n)(t, s.array())


# --- integrator -------------------------------------------------------------------------

_SOLVERS = {"DOP853": DOP853, "RK45": RK45}


def integrate(fld: Field, t0: float, s0: State6, t1: float, cfg: IntegratorConfig = IntegratorConfig(),
              t_eval: Optional[Sequence[float]] = None, sample_pitch: Optional[float] = None) -> Trajectory:
    """Adaptive integration from t0 to t1 (either direction).

    Output grid: ``t_eval`` if given, else a uniform grid of spacing
    ``sample_pitch`` from t0 to t1, else the accepted step points.
    """
    t0, t1 = float(t0), float(t1)
    if t0 == t1:
        raise ValueError("t0 and t1 must differ")
    if fld.kind == "nonautonomous" and min(t0, t1) <= 0 <= max(t0, t1):
        raise ValueError("interval contains the pole t = 0")
    direction = 1.0 if t1 > t0 else -1.0
    if t_eval is None and sample_pitch is not None:
        m = int(math.floor(abs(t1 - t0) / sample_pitch + 1e-9))
        t_eval = [t0 + direction * k * sample_pitch for k in range(m + 1)]
        if abs(t_eval[-1] - t1) > 1e-12:
            t_eval.append(t1)
    grid = None if t_eval is None else np.asarray(t_eval, dtype=float)
    if grid is not None and len(grid) >= 2 and not np.all(np.diff(grid) * direction > 0):
        raise ValueError("t_eval must be strictly monotone in the integration direction")

    solver = _SOLVERS[cfg.method](fld, t0, s0.array(), t1, rtol=cfg.rel_tol, atol=cfg.abs_tol,
                                  max_step=cfg.max_step)
    times: List[float] = [t0]
    states: List[np.ndarray] = [s0.array()]
    gi = 0
    if grid is not None:
        times, states = [], []
        while gi < len(grid) and (grid[gi] - t0) * direction <= 0:
            if grid[gi] != t0:
                raise ValueError("t_eval points before t0")
            times.append(t0)
            states.append(s0.array())
            gi += 1
    steps = 0
    while solver.status == "running":
        if steps >= cfg.max_steps:
            raise MaxStepsExceeded(f"more than {cfg.max_steps} steps before reaching t={t1}")
        try:
            msg = solver.step()
        except BlowUp:
            raise
        except (OverflowError, FloatingPointError) as exc:
            raise BlowUp(str(exc)) from exc
        steps += 1
        if solver.status == "failed":
            raise StepSizeUnderflow(f"{msg} at t={solver.t}")
        y = solver.y
        if not np.all(np.isfinite(y)):
            raise NonFiniteState(f"nonfinite state at t={solver.t}")
        if np.max(np.abs(y)) > BLOWUP_LIMIT:
            raise BlowUp(f"state exceeded {BLOWUP_LIMIT:.0e} at t={solver.t}")
        if grid is None:
            times.append(solver.t)
            states.append(y.copy())
        else:
            dense = solver.dense_output()
            while gi < len(grid) and (grid[gi] - solver.t) * direction <= 0:
                times.append(float(grid[gi]))
                states.append(np.asarray(dense(grid[gi]), dtype=float))
                gi += 1
    meta = {
        "method": cfg.method,
        "rel_tol": cfg.rel_tol,
        "abs_tol": cfg.abs_tol,
        "steps": steps,
        "nfev": int(solver.nfev),
        "field": fld.key(),
    }
    return Trajectory(np.array(times), np.array(states), meta)


def constant_trajectory(c: float, t0: float, t1: float, num: int = 101) -> Trajectory:
    t = np.linspace(t0, t1, num)
    s = np.zeros((num, 6))
    s[:, 0] = c
    return Trajectory(t, s, {"kind": "constant"})


# --- equilibria and spectra ----------------------------------------------------------------


def _mpf(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def equilibria(params: Params) -> List[float]:
    regime = classify_regime(params)
    if regime is Regime.SUPERCRITICAL:
        raise DomainError("equilibria are classified only up to p = 2^# - 1")
    k0 = k0_product(params)
    if k0 <= 0:
        return [0.0]
    with mpmath.workdps(WORKING_DPS):
        return [0.0, float(mpmath.power(_mpf(k0), 1 / (_mpf(params.p) - 1)))]


def scalar_fixed_point_map(params: Params, source: str = "derived"):
    """c -> -K0 c - |c|^(p-1) c, whose zeros are the constant solutions."""
    k0 = float(autonomous_coefficients(params, source)[0])
    p = float(params.p)
    return lambda c: -k0 * c - nonlinearity(c, p)


@dataclass(frozen=True)
class Spectrum:
    roots: Tuple[complex, ...]
    residuals: Tuple[float, ...]
    coefficients: Tuple[float, ...]  # ascending, monic degree 6

    def sorted_roots(self) -> List[complex]:
        return sorted(self.roots, key=lambda z: (round(z.real, 9), round(z.imag, 9)))


def characteristic_coefficients(params: Params, equilibrium: float, source: str = "derived") -> List:
    """Ascending coefficients of q(x) + p |v*|^(p-1); exact when v* is 0 or the nonzero equilibrium."""
    K = list(autonomous_coefficients(params, source))
    if equilibrium == 0:
        return K + [Fraction(1)]
    eq = equilibria(params)
    if len(eq) == 2 and math.isclose(equilibrium, eq[1], rel_tol=1e-12):
        # v*^(p-1) = K0 of the product formula, exactly
        return [K[0] + params.p * k0_product(params)] + K[1:] + [Fraction(1)]
    with mpmath.workdps(WORKING_DPS):
        c = _mpf(params.p) * mpmath.power(abs(mpmath.mpf(equilibrium)), _mpf(params.p) - 1)
    return [mpmath.mpf(float(K[0])) + c] + K[1:] + [Fraction(1)]


def polynomial_roots(coeffs: Sequence, newton_steps: int = 8) -> Spectrum:
    """Companion-matrix eigenvalues polished by Newton steps in extended precision."""
    with mpmath.workdps(WORKING_DPS):
        mp = [c if isinstance(c, mpmath.mpf) else (_mpf(c) if isinstance(c, Fraction) else mpmath.mpf(c))
              for c in coeffs]
        lead = mp[-1]
        mp = [c / lead for c in mp]
        deg = len(mp) - 1
        companion = np.zeros((deg, deg))
        companion[1:, :-1] = np.eye(deg - 1)
        companion[:, -1] = [-float(c) for c in mp[:-1]]
        guesses = np.linalg.eigvals(companion)
        desc = mp[::-1]
        dcoef = [c * (deg - i) for i, c in enumerate(desc[:-1])]
        roots, res = [], []
        for z0 in guesses:
            z = mpmath.mpc(complex(z0))
            for _ in range(newton_steps):
                fz = mpmath.polyval(desc, z)
                dz = mpmath.polyval(dcoef, z)
                if dz == 0:
                    break
                step = fz / dz
                z -= step
                if abs(step) < mpmath.mpf(10) ** (-40):
                    break
            r = abs(mpmath.polyval(desc, z))
            zc = complex(z)
            if abs(zc.imag) < 1e-14 * max(1.0, abs(zc)):
                zc = complex(zc.real, 0.0)
            roots.append(zc)
            res.append(float(r))
    for z, r in zip(roots, res):
        if r > 1e-8 * (1 + abs(z)) ** deg:
            raise RootResidualError(f"root {z} has residual {r:.3e}")
    return Spectrum(tuple(roots), tuple(res), tuple(float(c) for c in mp))


def stability_spectrum(params: Params, equilibrium: float, source: str = "derived") -> Spectrum:
    return polynomial_roots(characteristic_coefficients(params, equilibrium, source))


# --- shooting ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class ShootSeed:
    """Perturbation spec: ``amplitude`` of the v-deviation at t = 0 plus mode weights.

    ``weights`` maps an index into :func:`unstable_modes` (sorted by real part,
    one representative per conjugate pair) to a complex weight; ``target``
    selects the single mode nearest to it. Default: weight 1 on every mode.
    """

    amplitude: float = 1e-3
    weights: Optional[Tuple[Tuple[int, complex], ...]] = None
    target: Optional[complex] = None


def _representatives(roots: Sequence[complex], sign: int) -> List[complex]:
    out = [z for z in roots if sign * z.real > 1e-12 and z.imag >= -1e-14]
    return sorted(out, key=lambda z: (z.real, z.imag))


def unstable_modes(spec: Spectrum) -> List[complex]:
    """Eigenvalues with positive real part (they decay as t decreases), one per conjugate pair."""
    return _representatives(spec.roots, +1)


def _mode_vector(lam: complex) -> np.ndarray:
    return np.array([lam ** k for k in range(6)], dtype=complex)


def _is_real(z: complex) -> bool:
    return abs(z.imag) <= 1e-12 * max(1.0, abs(z))


def linear_mode_solution(modes: Sequence[complex], weights: Sequence[complex], t) -> np.ndarray:
    """Real solution sum over modes of (w e^{lam t} V + conjugate), V = (1, lam, ..., lam^5).

    Returns an array of shape (6, len(t)).
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros((6, len(t)))
    for lam, w in zip(modes, weights):
        term = w * np.exp(lam * t)[None, :] * _mode_vector(lam)[:, None]
        out += np.real(term) if _is_real(lam) else 2 * np.real(term)
    return out


def _mode_weights(modes: Sequence[complex], seed: ShootSeed) -> List[complex]:
    if seed.target is not None:
        idx = int(np.argmin([abs(m - seed.target) for m in modes]))
        return [1.0 if i == idx else 0.0 for i in range(len(modes))]
    if seed.weights is not None:
        wmap = dict(seed.weights)
        return [complex(wmap.get(i, 0.0)) for i in range(len(modes))]
    return [1.0] * len(modes)


def _scaled_weights(modes, weights, amplitude):
    base = linear_mode_solution(modes, weights, [0.0])[:, 0]
    ref = abs(base[0]) if base[0] != 0 else float(np.max(np.abs(base)))
    if ref == 0:
        raise ValueError("seed weights produce a zero perturbation")
    return [w * amplitude / ref for w in weights]


def _deviation_rhs(K: np.ndarray, vstar: float, p: float):
    """Field for x = v - v*, written so that x = 0 is an exact fixed point."""
    Kf = np.asarray(K, dtype=float)
    base = abs(vstar) ** p

    def f(t, x):
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        out[:5] = x[1:]
        v = vstar + x[0]
        nl = np.sign(v) * np.abs(v) ** p - base
        out[5] = -np.tensordot(Kf, x, axes=(0, 0)) - nl
        return out

    return f


def _mode_coordinates(roots: Sequence[complex]) -> np.ndarray:
    V = np.array([_mode_vector(z) for z in roots]).T
    return np.linalg.inv(V)


def _boundary_rows(roots, W, reps):
    rows = []
    for z in reps:
        j = int(np.argmin([abs(r - z) for r in roots]))
        rows.append(("re", j))
        if not _is_real(z):
            rows.append(("im", j))
    return rows


def shoot_to_equilibrium(params: Params, seed: ShootSeed = ShootSeed(), horizon: float = 30.0,
                         cfg: IntegratorConfig = IntegratorConfig(), sample_pitch: float = 0.01,
                         max_retries: int = 8, tolerance: float = 1e-6, window: float = 1.0) -> Trajectory:
    """Solution converging to the nonzero equilibrium as t -> -infinity.

    The equilibrium is a saddle, so a plain initial value integration over
    the whole horizon amplifies rounding along the opposite modes by roughly
    exp(max|Re lambda| * horizon). The trajectory is therefore located by
    collocation on [-horizon, 0]: at t = -horizon the modes that grow toward
    -infinity are switched off, at t = 0 the decaying modes carry the seed.
    Each unit window is then re-integrated with the adaptive integrator from
    the collocation state, and the result is returned with decreasing t.
    """
    if classify_regime(params) is not Regime.GIDAS_SPRUCK:
        raise DomainError("shooting to the nonzero equilibrium needs the Gidas-Spruck range")
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    vstar = equilibria(params)[1]
    spec = stability_spectrum(params, vstar)
    roots = list(spec.roots)
    if any(abs(z.real) <= 1e-12 for z in roots):
        raise ShootingError("linearization has a root on the imaginary axis")
    modes = unstable_modes(spec)
    growing = _representatives(roots, -1)
    weights = _mode_weights(modes, seed)
    W = _mode_coordinates(roots)
    rows_left = _boundary_rows(roots, W, growing)
    rows_right = _boundary_rows(roots, W, modes)
    K = np.array([float(k) for k in autonomous_coefficients(params)])
    p = float(params.p)
    rhs = _deviation_rhs(K, vstar, p)
    m = int(round(horizon / sample_pitch))
    grid = np.linspace(-horizon, 0.0, m + 1)

    amp = float(seed.amplitude)
    last_error: Optional[str] = None
    for attempt in range(max_retries + 1):
        if amp == 0.0:
            traj = constant_trajectory(vstar, -horizon, 0.0, m + 1).reversed()
            traj.meta.update({"amplitude": 0.0, "terminal_distance": 0.0, "attempts": attempt + 1,
                              "equilibrium": vstar})
            return traj
        wts = _scaled_weights(modes, weights, amp)
        target = {}
        for z, w in zip(modes, wts):
            j = int(np.argmin([abs(r - z) for r in roots]))
            target[j] = w

        def bc(xa, xb):
            ca, cb = W @ xa, W @ xb
            res = []
            for kind, j in rows_left:
                res.append(ca[j].real if kind == "re" else ca[j].imag)
            for kind, j in rows_right:
                d = cb[j] - target[j]
                res.append(d.real if kind == "re" else d.imag)
            return np.array(res)

        mesh = np.linspace(-horizon, 0.0, max(201, int(horizon * 40) + 1))
        guess = linear_mode_solution(modes, wts, mesh)
        try:
            sol = solve_bvp(rhs, bc, mesh, guess, tol=1e-9, bc_tol=1e-12, max_nodes=200000)
        except (FloatingPointError, OverflowError, ValueError) as exc:
            sol, last_error = None, str(exc)
        if sol is None or not sol.success:
            last_error = last_error if sol is None else sol.message
            amp /= 2
            continue
        if np.max(np.abs(sol.y[0])) > 0.5 * vstar:
            last_error = f"left the neighbourhood of v* (max deviation {np.max(np.abs(sol.y[0])):.3e})"
            amp /= 2
            continue
        try:
            states = _refine_windows(rhs, sol, grid, window, cfg)
        except IntegrationError as exc:
            last_error = str(exc)
            amp /= 2
            continue
        states[:, 0] += vstar
        traj = Trajectory(grid[::-1].copy(), states[::-1].copy())
        dist = float(np.linalg.norm(traj.states[-1] - np.array([vstar, 0, 0, 0, 0, 0])))
        if dist > tolerance:
            raise ShootingError(f"terminal distance {dist:.3e} exceeds {tolerance:.1e}; increase the horizon")
        traj.meta.update({
            "amplitude": amp,
            "requested_amplitude": float(seed.amplitude),
            "attempts": attempt + 1,
            "terminal_distance": dist,
            "equilibrium": vstar,
            "modes": [str(z) for z in modes],
            "horizon": horizon,
            "collocation_nodes": int(sol.x.size),
            "collocation_rms_residual": float(np.max(sol.rms_residuals)),
            "method": cfg.method,
            "rel_tol": cfg.rel_tol,
            "abs_tol": cfg.abs_tol,
        })
        return traj
    raise ShootingError(f"no convergent trajectory after {max_retries + 1} attempts: {last_error}")


def _refine_windows(rhs, sol, grid: np.ndarray, window: float, cfg: IntegratorConfig) -> np.ndarray:
    """Re-integrate each window from the collocation state so every sample solves the ODE."""
    out = np.empty((len(grid), 6))
    t_start = grid[0]
    i = 0
    while i < len(grid):
        j = i
        while j + 1 < len(grid) and grid[j + 1] - t_start <= window + 1e-12:
            j += 1
        y0 = sol.sol(grid[i])
        if j == i:
            out[i] = y0
        else:
            seg = _integrate_fn(rhs, grid[i], y0, grid[i: j + 1], cfg)
            out[i: j + 1] = seg
        i = j + 1 if j > i else i + 1
        if i < len(grid):
            t_start = grid[i]
    return out


def _integrate_fn(rhs, t0: float, y0: np.ndarray, t_eval: np.ndarray, cfg: IntegratorConfig) -> np.ndarray:
    solver = _SOLVERS[cfg.method](rhs, t0, y0, t_eval[-1], rtol=cfg.rel_tol, atol=cfg.abs_tol,
                                  max_step=cfg.max_step)
    out = [y0]
    k = 1
    steps = 0
    while solver.status == "running" and k < len(t_eval):
        solver.step()
        steps += 1
        if solver.status == "failed":
            raise StepSizeUnderflow(f"step failure at t={solver.t}")
        if steps > cfg.max_steps:
            raise MaxStepsExceeded("window integration exceeded max_steps")
        if not np.all(np.isfinite(solver.y)):
            raise NonFiniteState(f"nonfinite state at t={solver.t}")
        dense = solver.dense_output()
        while k < len(t_eval) and t_eval[k] <= solver.t:
            out.append(dense(t_eval[k]))
            k += 1
    return np.array(out)


# --- integrator self-check ----------------------------------------------------------------


@dataclass(frozen=True)
class OrderStudy:
    method: str
    nominal_order: int
    tolerances: Tuple[float, ...]
    nfev: Tuple[int, ...]
    errors: Tuple[float, ...]
    slope: float  # d log(error) / d log(nfev); about -order for a consistent method


ORDER_TOLERANCES = tuple(float(x) for x in np.logspace(-7, -12, 11))


def order_study_modes(params: Params) -> Tuple[float, float, float]:
    """Real modes of the linearization at 0: the negative one nearest 0 and the two smallest positive."""
    spec = stability_spectrum(params, 0.0)
    real = sorted(z.real for z in spec.roots if _is_real(z))
    neg = [x for x in real if x < 0]
    pos = [x for x in real if x > 0]
    if not neg or len(pos) < 2:
        raise ValueError("not enough real modes for the order study")
    return neg[-1], pos[0], pos[1]


def convergence_order(params: Params, method: str = "DOP853", tolerances: Sequence[float] = ORDER_TOLERANCES,
                      horizon: float = 2.0, mode_weights: Sequence[float] = (1.0, 0.5, 0.25)) -> OrderStudy:
    """Endpoint error of the linear field against its exact exponential solution.

    The initial state is a combination of real modes e^(lam t), so the exact
    endpoint is known in closed form; the slope of log error against log of
    the number of right-hand-side evaluations estimates the method order.
    """
    modes = order_study_modes(params)
    y0 = sum(w * _mode_vector(lam).real for w, lam in zip(mode_weights, modes))
    exact = sum(w * math.exp(lam * horizon) * _mode_vector(lam).real for w, lam in zip(mode_weights, modes))
    fld = autonomous_field(params, linear=True)
    errs, evals = [], []
    for tol in tolerances:
        cfg = IntegratorConfig(rel_tol=tol, abs_tol=max(tol * 1e-3, 1e-14), method=method)
        tr = integrate(fld, 0.0, State6(tuple(y0)), horizon, cfg)
        errs.append(float(np.max(np.abs(tr.states[-1] - exact) / np.maximum(1.0, np.abs(exact)))))
        evals.append(int(tr.meta["nfev"]))
    slope = float(np.polyfit(np.log(evals), np.log(errs), 1)[0])
    return OrderStudy(method, IntegratorConfig(method=method).order, tuple(tolerances), tuple(evals),
                      tuple(errs), slope)
