"""Leading-coefficient sufficient condition for infinite-dimensionality.

For two elements of degree > 2, the coefficients of ``a^d`` and ``a† a^{d-1}``
(written a0, a1 for the first element and b0, b1 for the second) control a
commutator chain of strictly increasing degree: if a0·b0 != 0 and the mixed
invariant delta = d2·a1·b0 - d1·a0·b1 != 0, the generated Lie algebra is
infinite-dimensional.  When the raw coefficients fail the test, a symplectic
change of frame a† -> s11·a† + s12·a, a -> s21·a† + s22·a (det = 1) can make
them generic; `symplectic_search` scans a small deterministic family followed
by seeded random draws and returns a re-checkable certificate on success.

The condition is sufficient only; the verdict vocabulary is
{"infinite", "inconclusive"} and never "finite".
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .weyl_core import (
    GR_ZERO,
    MINUS,
    PLUS,
    GaussianRational,
    MultiIndex,
    SkewPoly,
    WeylPoly,
    _reorder,
)

#: |value| threshold for "nonzero" under floating-point frames, applied after
#: rescaling each element's coefficients to unit max magnitude
NUMERIC_TOLERANCE = 1e-9


# ---------------------------------------------------------------------------
# Exact leading data
# ---------------------------------------------------------------------------

def top_coefficients(e: SkewPoly) -> Dict[str, Fraction]:
    """The four leading coefficients c0, chat0, c1, chat1 of a skew element.

    c_k / chat_k are the coefficients of g_+ / g_- at the degree-d index
    (d-k, k); together they determine the a^d and a† a^{d-1} coefficients of
    the normal-ordered form.
    """
    d = e.degree
    if not isinstance(d, int) or d <= 2:
        raise ValueError("top_coefficients requires degree > 2")
    return {
        "d": d,
        "c0": e.coeff(PLUS, (d, 0)),
        "chat0": e.coeff(MINUS, (d, 0)),
        "c1": e.coeff(PLUS, (d - 1, 1)),
        "chat1": e.coeff(MINUS, (d - 1, 1)),
    }


def leading_pair(x: WeylPoly) -> Tuple[GaussianRational, GaussianRational]:
    """(a0, a1): the coefficients of a^d and a† a^{d-1}, d = deg x."""
    d = x.degree
    if not isinstance(d, int):
        raise ValueError("zero polynomial has no leading coefficients")
    return x.coeff(0, d), x.coeff(1, d - 1)


def delta(x: WeylPoly, y: WeylPoly) -> GaussianRational:
    """The exact invariant d_y·a1·b0 - d_x·a0·b1 built from leading data.

    Up to lower-order terms, [x, y] has a^{d_x+d_y-2} coefficient -delta(x,y).
    """
    a0, a1 = leading_pair(x)
    b0, b1 = leading_pair(y)
    dx, dy = x.degree, y.degree
    return a1 * b0 * GaussianRational.real(dy) - a0 * b1 * GaussianRational.real(dx)


# ---------------------------------------------------------------------------
# Identity-frame check (exact, coefficient inequalities)
# ---------------------------------------------------------------------------

def identity_conditions(e1: SkewPoly, e2: SkewPoly) -> List[bool]:
    """The four coefficient inequalities at the identity frame.

    The first pair expresses a0·b0 != 0, the second pair delta != 0, each
    split into real and imaginary parts of the leading skew coefficients.
    """
    t1, t2 = top_coefficients(e1), top_coefficients(e2)
    d1, d2 = t1["d"], t2["d"]
    return [
        t1["chat0"] * t2["chat0"] != t1["c0"] * t2["c0"],
        t2["chat0"] * t1["c0"] != -t1["chat0"] * t2["c0"],
        d1 * (t1["chat0"] * t2["chat1"] - t1["c0"] * t2["c1"])
        != d2 * (t1["chat1"] * t2["chat0"] - t1["c1"] * t2["c0"]),
        d1 * (t1["c0"] * t2["chat1"] + t1["chat0"] * t2["c1"])
        != d2 * (t1["c1"] * t2["chat0"] + t1["chat1"] * t2["c0"]),
    ]


def identity_check(e1: SkewPoly, e2: SkewPoly) -> str:
    """"infinite" if all four leading-coefficient inequalities hold, else
    "inconclusive".  Requires both degrees > 2."""
    return "infinite" if all(identity_conditions(e1, e2)) else "inconclusive"


# ---------------------------------------------------------------------------
# Symplectic frames
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymplecticParams:
    """Skew-hermiticity-preserving symplectic frame

        [[e^{i·phi} cosh s,  e^{i·theta} sinh s],
         [e^{-i·theta} sinh s, e^{-i·phi} cosh s]]

    always of determinant 1."""
    s: float
    phi: float
    theta: float

    def matrix(self) -> Tuple[complex, complex, complex, complex]:
        ch, sh = math.cosh(self.s), math.sinh(self.s)
        return (
            cmath.exp(1j * self.phi) * ch,
            cmath.exp(1j * self.theta) * sh,
            cmath.exp(-1j * self.theta) * sh,
            cmath.exp(-1j * self.phi) * ch,
        )

    def to_json(self) -> dict:
        return {"s": self.s, "phi": self.phi, "theta": self.theta}


CPoly = Dict[MultiIndex, complex]


def cpoly_mul(p: CPoly, q: CPoly) -> CPoly:
    """Noncommutative product of normal-ordered complex polynomials."""
    out: CPoly = {}
    for (a1, b1), c1 in p.items():
        for (a2, b2), c2 in q.items():
            c = c1 * c2
            for (s, r), n in _reorder(b1, a2).items():
                key = (a1 + s, r + b2)
                out[key] = out.get(key, 0j) + c * n
    return out


def cpoly_bracket(p: CPoly, q: CPoly, tol: float = 0.0) -> CPoly:
    pq, qp = cpoly_mul(p, q), cpoly_mul(q, p)
    out = dict(pq)
    for k, v in qp.items():
        out[k] = out.get(k, 0j) - v
    scale = max((abs(v) for v in out.values()), default=0.0)
    cutoff = tol * scale
    return {k: v for k, v in out.items() if abs(v) > cutoff}


def weyl_to_cpoly(x: WeylPoly) -> CPoly:
    return {k: complex(v) for k, v in x.terms.items()}


def _cpoly_pow(base: CPoly, n: int) -> CPoly:
    out: CPoly = {(0, 0): 1.0 + 0j}
    for _ in range(n):
        out = cpoly_mul(out, base)
    return out


def transform(x: WeylPoly, sigma) -> CPoly:
    """Apply the frame change a† -> s11 a† + s12 a, a -> s21 a† + s22 a.

    `sigma` is a SymplecticParams or a flat (s11, s12, s21, s22) tuple with
    determinant 1 (checked to 1e-12 for raw tuples).  Bracket-preserving for
    any determinant-1 frame.
    """
    if isinstance(sigma, SymplecticParams):
        s11, s12, s21, s22 = sigma.matrix()
    else:
        s11, s12, s21, s22 = (complex(v) for v in sigma)
        if abs(s11 * s22 - s12 * s21 - 1) > 1e-12:
            raise ValueError("frame matrix must have determinant 1")
    adag_img: CPoly = {(1, 0): s11, (0, 1): s12}
    a_img: CPoly = {(1, 0): s21, (0, 1): s22}
    out: CPoly = {}
    for (alpha, beta), c in x.terms.items():
        term = cpoly_mul(_cpoly_pow(adag_img, alpha), _cpoly_pow(a_img, beta))
        cc = complex(c)
        for k, v in term.items():
            out[k] = out.get(k, 0j) + cc * v
    return out


def _cpoly_degree(p: CPoly, tol: float = 0.0) -> int:
    scale = max((abs(v) for v in p.values()), default=0.0)
    live = [k for k, v in p.items() if abs(v) > tol * scale]
    if not live:
        raise ValueError("zero polynomial")
    return max(a + b for a, b in live)


def _numeric_leading(p: CPoly) -> Tuple[int, complex, complex]:
    d = _cpoly_degree(p, NUMERIC_TOLERANCE)
    return d, p.get((0, d), 0j), p.get((1, d - 1), 0j)


# ---------------------------------------------------------------------------
# Certificates and the search
# ---------------------------------------------------------------------------

@dataclass
class IgusaCertificate:
    verdict: str  # always "infinite"
    params: Optional[SymplecticParams]  # None means the identity frame
    a0b0: complex
    delta: complex

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "sigma": self.params.to_json() if self.params else "identity",
            "a0b0": [self.a0b0.real, self.a0b0.imag],
            "delta": [self.delta.real, self.delta.imag],
        }


def _evaluate_frame(e1: SkewPoly, e2: SkewPoly,
                    params: Optional[SymplecticParams]) -> Optional[IgusaCertificate]:
    if params is None:
        x, y = e1.to_weyl(), e2.to_weyl()
        a0, a1 = leading_pair(x)
        b0, b1 = leading_pair(y)
        prod = a0 * b0
        dlt = delta(x, y)
        if prod and dlt:
            return IgusaCertificate("infinite", None, complex(prod), complex(dlt))
        return None
    p = transform(e1.to_weyl(), params)
    q = transform(e2.to_weyl(), params)
    # rescale to unit max magnitude so the tolerance is scale-free
    for poly in (p, q):
        m = max(abs(v) for v in poly.values())
        for k in poly:
            poly[k] /= m
    d1, a0, a1 = _numeric_leading(p)
    d2, b0, b1 = _numeric_leading(q)
    prod = a0 * b0
    dlt = d2 * a1 * b0 - d1 * a0 * b1
    if abs(prod) > NUMERIC_TOLERANCE and abs(dlt) > NUMERIC_TOLERANCE:
        return IgusaCertificate("infinite", params, prod, dlt)
    return None


def symplectic_search(e1: SkewPoly, e2: SkewPoly, samples: int = 256,
                      seed: int = 7) -> Optional[IgusaCertificate]:
    """Search for a frame certifying infinite-dimensionality.

    Schedule: identity frame (exact arithmetic), then the deterministic grid
    s in {±1/2, ±1} x phi, theta in {0, pi/2}, then `samples` seeded random
    draws.  Returns the first certificate found, or None.
    """
    for e in (e1, e2):
        if not isinstance(e.degree, int) or e.degree <= 2:
            raise ValueError("symplectic_search requires degree > 2 elements")
    cert = _evaluate_frame(e1, e2, None)
    if cert is not None:
        return cert
    for s in (0.5, -0.5, 1.0, -1.0):
        for phi in (0.0, math.pi / 2):
            for theta in (0.0, math.pi / 2):
                cert = _evaluate_frame(e1, e2, SymplecticParams(s, phi, theta))
                if cert is not None:
                    return cert
    rng = random.Random(seed)
    for _ in range(samples):
        params = SymplecticParams(
            s=rng.uniform(-1.5, 1.5),
            phi=rng.uniform(0.0, 2 * math.pi),
            theta=rng.uniform(0.0, 2 * math.pi),
        )
        cert = _evaluate_frame(e1, e2, params)
        if cert is not None:
            return cert
    return None


def verify_certificate(cert: IgusaCertificate, e1: SkewPoly,
                       e2: SkewPoly) -> bool:
    """Recompute the certified quantities from the stored frame."""
    fresh = _evaluate_frame(e1, e2, cert.params)
    if fresh is None:
        return False
    return (abs(fresh.a0b0 - cert.a0b0) < 1e-9
            and abs(fresh.delta - cert.delta) < 1e-9)


def chain_degrees(e1: SkewPoly, e2: SkewPoly,
                  params: Optional[SymplecticParams], steps: int = 5) -> List[int]:
    """Degrees of the commutator chain seeded at the (transformed) second
    element, with the auxiliary element chosen by the delta criterion at each
    step.  Used to confirm certificates independently."""
    x = transform(e1.to_weyl(), params) if params else weyl_to_cpoly(e1.to_weyl())
    y = transform(e2.to_weyl(), params) if params else weyl_to_cpoly(e2.to_weyl())

    def ndelta(p: CPoly, q: CPoly) -> complex:
        dp, p0, p1 = _numeric_leading(p)
        dq, q0, q1 = _numeric_leading(q)
        return dq * p1 * q0 - dp * p0 * q1

    u = y
    degrees = [_cpoly_degree(u, NUMERIC_TOLERANCE)]
    for _ in range(steps):
        if abs(ndelta(u, x)) > NUMERIC_TOLERANCE:
            s = x
        elif abs(ndelta(u, y)) > NUMERIC_TOLERANCE:
            s = y
        else:
            break
        u = cpoly_bracket(u, s, tol=1e-12)
        # renormalize to tame growth
        m = max(abs(v) for v in u.values())
        u = {k: v / m for k, v in u.items()}
        degrees.append(_cpoly_degree(u, NUMERIC_TOLERANCE))
    return degrees
