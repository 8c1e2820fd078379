"""Product-of-exponentials factorization of single-mode dynamics.

Control convention (the one table to rule out sign ambiguity):

    H(t) = u1 a†a  - i u2 (a - a†)  + u3 (a + a†)
                   - i u4 (a² - a†²) + u5 (a² + a†²)        (hermitian)

equivalently iH(t) = sum_j u_j X_j over the skew generators

    X1 = i a†a,  X2 = a - a†,  X3 = i(a + a†),
    X4 = a² - a†²,  X5 = i(a² + a†²).

The propagator ansatz is the ordered product

    U(t) = e^{-f1 X1} e^{-f2 X2} e^{-f3 X3} e^{-f4 X4} e^{-f5 X5} e^{-i f_phase}

(wh2 uses the first three factors only).  For wh2 the factor functions are
plain quadratures; for the full five-generator algebra they solve a coupled
ODE system integrated by fixed-step RK4.  The central (global-phase) factor
is tracked separately and never enters any fidelity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicSpline
from scipy.linalg import expm

from .fock_oracle import hermitian_generators

N_CONTROLS = {"wh2": 3, "schrodinger": 5}


@dataclass
class ControlSpec:
    """Sampled control functions on a uniform grid t_k = k h, k = 0..n_steps.

    `funcs`, when given, are the exact control callables used for dense
    evaluation (RK4 midpoints); otherwise a cubic spline through the samples
    is used.
    """
    algebra: str
    h: float
    n_steps: int
    u: np.ndarray  # shape (n_controls, n_steps + 1)
    funcs: Optional[List[Callable[[float], float]]] = None

    def __post_init__(self):
        if self.algebra not in N_CONTROLS:
            raise ValueError(f"unknown algebra {self.algebra!r}")
        if not (self.h > 0):
            raise ValueError("grid step must be positive")
        self.u = np.asarray(self.u, dtype=float)
        want = (N_CONTROLS[self.algebra], self.n_steps + 1)
        if self.u.shape != want:
            raise ValueError(f"control array shape {self.u.shape}, want {want}")
        if not np.all(np.isfinite(self.u)):
            raise ValueError("controls must be finite-valued")
        self._spline = None

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.h

    def evaluate(self, t: float) -> np.ndarray:
        if self.funcs is not None:
            return np.array([f(t) for f in self.funcs])
        if self._spline is None:
            self._spline = CubicSpline(self.grid, self.u, axis=1)
        return self._spline(t)

    # -- constructors ------------------------------------------------------
    @staticmethod
    def from_funcs(algebra: str, funcs: Sequence[Callable], t_final: float,
                   h: float) -> "ControlSpec":
        n_steps = int(round(t_final / h))
        grid = np.arange(n_steps + 1) * h
        u = np.array([[f(t) for t in grid] for f in funcs])
        return ControlSpec(algebra, h, n_steps, u, funcs=list(funcs))

    @staticmethod
    def constant(algebra: str, values: Sequence[float], t_final: float,
                 h: float) -> "ControlSpec":
        return ControlSpec.from_funcs(
            algebra, [lambda t, v=v: float(v) for v in values], t_final, h
        )

    @staticmethod
    def from_json(obj: dict) -> "ControlSpec":
        algebra = obj["algebra"]
        h = float(obj["h"])
        if "preset" in obj:
            t_final = float(obj["t_final"])
            if obj["preset"] == "constant":
                return ControlSpec.constant(algebra, obj["values"], t_final, h)
            if obj["preset"] == "sinusoid":
                amps = obj["amplitudes"]
                freqs = obj["frequencies"]
                phases = obj.get("phases", [0.0] * len(amps))
                funcs = [
                    lambda t, A=A, w=w, p=p: A * math.sin(w * t + p)
                    for A, w, p in zip(amps, freqs, phases)
                ]
                return ControlSpec.from_funcs(algebra, funcs, t_final, h)
            raise ValueError(f"unknown preset {obj['preset']!r}")
        u = np.asarray(obj["controls"], dtype=float)
        return ControlSpec(algebra, h, u.shape[1] - 1, u)


@dataclass
class FactorSolution:
    algebra: str
    h: float
    f: np.ndarray      # shape (n_factors, n_steps + 1)
    fdot: np.ndarray   # same shape, stored derivatives
    phase: np.ndarray  # central-factor function, shape (n_steps + 1,)
    method: str        # "ClosedFormQuadrature" | "RK4"
    error_estimate: Optional[float] = None

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.f.shape[1]) * self.h


class SqueezeBlowUpError(RuntimeError):
    def __init__(self, step: int, t: float):
        super().__init__(
            f"factor ODE blew up at step {step} (t = {t:.6g}); the "
            "factorization only exists locally in time for these controls"
        )
        self.step = step
        self.t = t


def _cumquad(y: np.ndarray, h: float) -> np.ndarray:
    return cumulative_simpson(y, dx=h, initial=0.0)


# ---------------------------------------------------------------------------
# wh2: closed-form quadratures
# ---------------------------------------------------------------------------

def wh2_factors(spec: ControlSpec) -> FactorSolution:
    """f1 = ∫u1, then a rotating-frame quadrature for the displacements and
    the phase quadrature  d(phase)/dt = 2 f2 df3/dt."""
    if spec.algebra != "wh2":
        raise ValueError("wh2_factors requires a wh2 ControlSpec")
    u1, u2, u3 = spec.u
    h = spec.h
    f1 = _cumquad(u1, h)
    c, s = np.cos(f1), np.sin(f1)
    f2dot = c * u2 + s * u3
    f3dot = c * u3 - s * u2
    f2 = _cumquad(f2dot, h)
    f3 = _cumquad(f3dot, h)
    phase = _cumquad(2.0 * f2 * f3dot, h)
    f = np.vstack([f1, f2, f3])
    fdot = np.vstack([u1, f2dot, f3dot])
    return FactorSolution(spec.algebra, h, f, fdot, phase,
                          "ClosedFormQuadrature")


# ---------------------------------------------------------------------------
# Five-generator system: RK4 on the inverted equations
# ---------------------------------------------------------------------------

def _rhs(f: np.ndarray, u: np.ndarray) -> np.ndarray:
    f1, f2, f3, f4, _ = f
    u1, u2, u3, u4, u5 = u
    th = math.tanh(4 * f4)
    ch = math.cosh(4 * f4)
    s1, c1 = math.sin(f1), math.cos(f1)
    s2, c2 = math.sin(2 * f1), math.cos(2 * f1)
    return np.array([
        u1 - 2 * u4 * s2 * th + 2 * u5 * c2 * th,
        u2 * c1 + u3 * s1
        - 2 * u4 * (f3 * s2 * (1 + th) - f2 * c2)
        + 2 * u5 * (f3 * c2 * (1 + th) + f2 * s2),
        -u2 * s1 + u3 * c1
        - 2 * u4 * (f2 * s2 * (1 - th) + f3 * c2)
        + 2 * u5 * (f2 * c2 * (1 - th) - f3 * s2),
        u4 * c2 + u5 * s2,
        -u4 * s2 / ch + u5 * c2 / ch,
    ])


def _integrate(spec: ControlSpec, substeps: int) -> np.ndarray:
    """RK4 with `substeps` internal steps per grid interval; returns f on the
    grid nodes."""
    n = spec.n_steps
    out = np.zeros((5, n + 1))
    f = np.zeros(5)
    hh = spec.h / substeps
    for k in range(n):
        for m in range(substeps):
            t = k * spec.h + m * hh
            k1 = _rhs(f, spec.evaluate(t))
            k2 = _rhs(f + hh / 2 * k1, spec.evaluate(t + hh / 2))
            k3 = _rhs(f + hh / 2 * k2, spec.evaluate(t + hh / 2))
            k4 = _rhs(f + hh * k3, spec.evaluate(t + hh))
            f = f + hh / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(f)) or abs(4 * f[3]) > 350.0:
            raise SqueezeBlowUpError(k + 1, (k + 1) * spec.h)
        out[:, k + 1] = f
    return out


def schrodinger_factors(spec: ControlSpec) -> FactorSolution:
    """RK4 integration of the inverted factor ODEs, with a step-halving
    error estimate and the adjoint phase quadrature."""
    if spec.algebra != "schrodinger":
        raise ValueError("schrodinger_factors requires a schrodinger spec")
    f = _integrate(spec, 1)
    f_half = _integrate(spec, 2)
    err = float(np.max(np.abs(f - f_half)))
    fdot = np.stack([
        _rhs(f[:, k], spec.evaluate(k * spec.h)) for k in range(f.shape[1])
    ], axis=1)
    phase = _phase_quadrature(f, fdot, spec.h, n_factors=5)
    return FactorSolution(spec.algebra, spec.h, f, fdot, phase, "RK4",
                          error_estimate=err)


# ---------------------------------------------------------------------------
# Adjoint reconstruction (forward check and phase)
# ---------------------------------------------------------------------------

def _adjoint_matrices() -> List[np.ndarray]:
    """ad matrices of X1..X5 on the basis (i, X1..X5), computed from the
    exact bracket engine once."""
    from .lie_engine import LieSpan, bracket
    from .weyl_core import MINUS, PLUS, SkewPoly, number_op, unit_i

    M = SkewPoly.monomial
    basis = [unit_i(), number_op(), M(MINUS, (1, 0)), M(PLUS, (1, 0)),
             M(MINUS, (2, 0)), M(PLUS, (2, 0))]
    span = LieSpan(basis)
    ads = []
    for j in range(1, 6):
        cols = []
        for b in basis:
            coords = span.coordinates(bracket(basis[j], b))
            cols.append([float(c) for c in coords])
        ads.append(np.array(cols).T)
    return ads


_ADJOINT_CACHE: Optional[List[np.ndarray]] = None


def _adjoints() -> List[np.ndarray]:
    global _ADJOINT_CACHE
    if _ADJOINT_CACHE is None:
        _ADJOINT_CACHE = _adjoint_matrices()
    return _ADJOINT_CACHE


def _reconstruct_at(f: np.ndarray, fdot: np.ndarray,
                    n_factors: int) -> np.ndarray:
    """Coordinates of sum_j fdot_j Ad(U1..U_{j-1}) X_j in the basis
    (i, X1..X5): entry 0 is the central component, entries 1.. are the
    reconstructed controls."""
    ads = _adjoints()
    acc = np.zeros(6)
    left = np.eye(6)
    for j in range(n_factors):
        e = np.zeros(6)
        e[j + 1] = 1.0
        acc += fdot[j] * (left @ e)
        left = left @ expm(-f[j] * ads[j])
    return acc


def _phase_quadrature(f: np.ndarray, fdot: np.ndarray, h: float,
                      n_factors: int) -> np.ndarray:
    n = f.shape[1]
    r0 = np.array([
        _reconstruct_at(f[:, k], fdot[:, k], n_factors)[0] for k in range(n)
    ])
    return _cumquad(-r0, h)


def reconstructed_controls(sol: FactorSolution) -> np.ndarray:
    """Controls implied by the factor functions via the adjoint product;
    independent of the closed-form forward expressions."""
    n_factors = sol.f.shape[0]
    n = sol.f.shape[1]
    out = np.zeros((n_factors, n))
    for k in range(n):
        r = _reconstruct_at(sol.f[:, k], sol.fdot[:, k], n_factors)
        out[:, k] = r[1:1 + n_factors]
    return out


# ---------------------------------------------------------------------------
# Residuals
# ---------------------------------------------------------------------------

def _forward_controls(f: np.ndarray, fdot: np.ndarray) -> np.ndarray:
    """The five forward expressions u_j(f, fdot) for the full system."""
    f1, f2, f3, f4, _ = f
    g1, g2, g3, g4, g5 = fdot
    s1, c1 = np.sin(f1), np.cos(f1)
    s2, c2 = np.sin(2 * f1), np.cos(2 * f1)
    sh, ch = np.sinh(4 * f4), np.cosh(4 * f4)
    em, ep = np.exp(-4 * f4), np.exp(4 * f4)
    return np.vstack([
        g1 - 2 * g5 * sh,
        g2 * c1 - g3 * s1 - 2 * g4 * (f2 * c1 + f3 * s1)
        + 2 * g5 * (f2 * em * s1 - f3 * ep * c1),
        g2 * s1 + g3 * c1 + 2 * g4 * (f3 * c1 - f2 * s1)
        - 2 * g5 * (f2 * em * c1 + f3 * ep * s1),
        g4 * c2 - g5 * ch * s2,
        g4 * s2 + g5 * ch * c2,
    ])


def _fd4(f: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order finite-difference derivative along the last axis."""
    n = f.shape[-1]
    if n < 5:
        return np.gradient(f, h, axis=-1)
    out = np.empty_like(f)
    out[..., 2:-2] = (f[..., :-4] - 8 * f[..., 1:-3]
                      + 8 * f[..., 3:-1] - f[..., 4:]) / (12 * h)
    # one-sided 5-point stencils at the edges, same order
    lo = (-25 * f[..., 0] + 48 * f[..., 1] - 36 * f[..., 2]
          + 16 * f[..., 3] - 3 * f[..., 4]) / (12 * h)
    lo1 = (-3 * f[..., 0] - 10 * f[..., 1] + 18 * f[..., 2]
           - 6 * f[..., 3] + f[..., 4]) / (12 * h)
    out[..., 0], out[..., 1] = lo, lo1
    hi = (25 * f[..., -1] - 48 * f[..., -2] + 36 * f[..., -3]
          - 16 * f[..., -4] + 3 * f[..., -5]) / (12 * h)
    hi1 = (3 * f[..., -1] + 10 * f[..., -2] - 18 * f[..., -3]
           + 6 * f[..., -4] - f[..., -5]) / (12 * h)
    out[..., -1], out[..., -2] = hi, hi1
    return out


def residual_check(spec: ControlSpec, sol: FactorSolution,
                   derivatives: str = "fd") -> float:
    """Max over the grid of |u_reconstructed - u_input|.

    `derivatives="fd"` differentiates the stored factor curves numerically,
    so the residual genuinely measures the integration error;
    `derivatives="stored"` uses the solver's own right-hand sides.
    """
    if sol.f.shape[1] != spec.n_steps + 1:
        raise ValueError("solution and spec grids differ")
    if derivatives == "fd":
        fdot = _fd4(sol.f, sol.h)
    elif derivatives == "stored":
        fdot = sol.fdot
    else:
        raise ValueError("derivatives must be 'fd' or 'stored'")
    if spec.algebra == "wh2":
        f = np.vstack([sol.f, np.zeros((2, sol.f.shape[1]))])
        fdot = np.vstack([fdot, np.zeros((2, sol.f.shape[1]))])
        u_rec = _forward_controls(f, fdot)[:3]
    else:
        u_rec = _forward_controls(sol.f, fdot)
    return float(np.max(np.abs(u_rec - spec.u)))


# ---------------------------------------------------------------------------
# Propagators
# ---------------------------------------------------------------------------

def factored_propagator(sol: FactorSolution, t_index: int, N: int,
                        include_phase: bool = True) -> np.ndarray:
    """Product of truncated single-generator exponentials at a grid index."""
    if N < 8:
        raise ValueError("need N >= 8")
    gens = hermitian_generators(sol.algebra, N)
    U = np.eye(N, dtype=complex)
    for f_j, H_j in zip(sol.f[:, t_index], gens):
        if f_j:
            U = U @ expm(-1j * f_j * H_j)
    if include_phase:
        U = U * np.exp(-1j * sol.phase[t_index])
    return U
