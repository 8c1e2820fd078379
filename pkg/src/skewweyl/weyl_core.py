"""Exact arithmetic for normal-ordered bosonic polynomials and their
skew-hermitian combinations.

Conventions
-----------
A canonical (normal-ordered) monomial is ``(a†)^alpha a^beta``, indexed by
the multi-index ``gamma = (alpha, beta)``.  For a *well-ordered* multi-index
(``alpha >= beta``) the two skew-hermitian monomials are

    plus(gamma)  = i ( (a†)^beta a^alpha + (a†)^alpha a^beta )
    minus(gamma) = (a†)^beta a^alpha - (a†)^alpha a^beta

so e.g. ``minus((1,0)) = a - a†`` and ``plus((0,0)) = 2i``.  ``minus``
vanishes identically when ``alpha == beta``; such keys are never stored.
Every polynomial ``p`` in ``a, a†`` with ``p† = -p`` is a unique real linear
combination of these monomials.

Coefficients are exact: plain rationals (`fractions.Fraction`) for
skew-hermitian polynomials, Gaussian rationals for normal-ordered ones.
All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Dict, Iterable, Iterator, Mapping, Tuple

MultiIndex = Tuple[int, int]

PLUS = 1
MINUS = -1

#: degree of the zero polynomial
NEG_INF = float("-inf")

#: tags for the five-way splitting of the skew-hermitian monomial basis:
#: A0   = span{2i, 2i a†a}                  (gamma in {(0,0),(1,1)}, plus)
#: A1   = span{a-a†, i(a+a†)}              (gamma=(1,0))
#: A2   = span{a²-a†², i(a²+a†²)}          (gamma=(2,0))
#: AEQ  = span{i(a†)^k a^k : k >= 2}       (gamma=(k,k), plus)
#: APERP = everything else                  (alpha > beta, alpha+beta >= 3)
SUBSPACES = ("A0", "A1", "A2", "Aeq", "Aperp")


def is_well_ordered(gamma: MultiIndex) -> bool:
    return gamma[0] >= gamma[1]


def chi(gamma: MultiIndex) -> int:
    """alpha - beta: the net creation excess of a multi-index."""
    return gamma[0] - gamma[1]


def dag(gamma: MultiIndex) -> MultiIndex:
    return (gamma[1], gamma[0])


def theta(gamma: MultiIndex) -> MultiIndex:
    """The well-ordered representative of {gamma, gamma†}."""
    return gamma if gamma >= dag(gamma) else dag(gamma)


def esign(gamma: MultiIndex) -> int:
    """+1 if gamma is already well-ordered (gamma >= gamma†), else -1."""
    return PLUS if gamma >= dag(gamma) else MINUS


def compose(gamma: MultiIndex, other: MultiIndex) -> MultiIndex:
    """Elementwise product of two multi-indices."""
    return (gamma[0] * other[0], gamma[1] * other[1])


def mdeg(gamma: MultiIndex) -> int:
    return gamma[0] + gamma[1]


def subspace_of(sigma: int, gamma: MultiIndex) -> str:
    """Which of the five basis subspaces the monomial (sigma, gamma) spans."""
    alpha, beta = gamma
    if alpha == beta:
        # minus-monomials with alpha == beta vanish and are never stored
        return "A0" if alpha <= 1 else "Aeq"
    if (alpha, beta) == (1, 0):
        return "A1"
    if (alpha, beta) == (2, 0):
        return "A2"
    return "Aperp"


def monomial_key_order(key: Tuple[int, MultiIndex]) -> Tuple[int, MultiIndex, int]:
    """Deterministic total order on monomials: degree, multi-index, sign."""
    sigma, gamma = key
    return (mdeg(gamma), gamma, 0 if sigma == PLUS else 1)


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def scale(self, c: Fraction) -> "GaussianRational":
        return GaussianRational(self.re * c, self.im * c)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    @staticmethod
    def real(c) -> "GaussianRational":
        return GaussianRational(Fraction(c), Fraction(0))

    @staticmethod
    def imag(c) -> "GaussianRational":
        return GaussianRational(Fraction(0), Fraction(c))


GR_ZERO = GaussianRational()
GR_ONE = GaussianRational.real(1)
GR_I = GaussianRational.imag(1)


def _reorder(r: int, s: int) -> Dict[MultiIndex, int]:
    """Normal-order a^r (a†)^s: returns {(alpha, beta): integer coefficient}
    with a^r (a†)^s = sum c_(alpha,beta) (a†)^alpha a^beta.

    Closed form: a^r (a†)^s = sum_j j! C(r,j) C(s,j) (a†)^(s-j) a^(r-j).
    """
    out: Dict[MultiIndex, int] = {}
    for j in range(min(r, s) + 1):
        out[(s - j, r - j)] = factorial(j) * comb(r, j) * comb(s, j)
    return out


class WeylPoly:
    """Normal-ordered polynomial in a, a† with GaussianRational coefficients.

    Immutable; the term map never stores zero coefficients.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[MultiIndex, GaussianRational] = ()):
        cleaned = {k: v for k, v in dict(terms).items() if v}
        object.__setattr__(self, "terms", cleaned)

    def __setattr__(self, *_):  # pragma: no cover - immutability guard
        raise AttributeError("WeylPoly is immutable")

    # -- constructors ------------------------------------------------------
    @staticmethod
    def zero() -> "WeylPoly":
        return WeylPoly()

    @staticmethod
    def term(alpha: int, beta: int, coeff: GaussianRational = GR_ONE) -> "WeylPoly":
        if alpha < 0 or beta < 0:
            raise ValueError(f"negative powers in ({alpha}, {beta})")
        return WeylPoly({(alpha, beta): coeff})

    # -- ring structure ----------------------------------------------------
    def __add__(self, other: "WeylPoly") -> "WeylPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, GR_ZERO) + v
        return WeylPoly(out)

    def __sub__(self, other: "WeylPoly") -> "WeylPoly":
        return self + (-other)

    def __neg__(self) -> "WeylPoly":
        return WeylPoly({k: -v for k, v in self.terms.items()})

    def scale(self, c: GaussianRational) -> "WeylPoly":
        if not c:
            return WeylPoly()
        return WeylPoly({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other: "WeylPoly") -> "WeylPoly":
        out: Dict[MultiIndex, GaussianRational] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                c = c1 * c2
                # (a†)^a1 a^b1 (a†)^a2 a^b2 : reorder the middle a^b1 (a†)^a2
                for (s, r), n in _reorder(b1, a2).items():
                    key = (a1 + s, r + b2)
                    prev = out.get(key, GR_ZERO)
                    out[key] = prev + c.scale(Fraction(n))
        return WeylPoly(out)

    def dagger(self) -> "WeylPoly":
        return WeylPoly(
            {(b, a): c.conjugate() for (a, b), c in self.terms.items()}
        )

    def commutator(self, other: "WeylPoly") -> "WeylPoly":
        return self * other - other * self

    # -- inspection --------------------------------------------------------
    @property
    def degree(self):
        if not self.terms:
            return NEG_INF
        return max(a + b for a, b in self.terms)

    def truncate_to_degree(self, d: int) -> "WeylPoly":
        return WeylPoly({k: v for k, v in self.terms.items() if k[0] + k[1] <= d})

    def top_part(self) -> "WeylPoly":
        d = self.degree
        if d == NEG_INF:
            return WeylPoly()
        return WeylPoly({k: v for k, v in self.terms.items() if k[0] + k[1] == d})

    def coeff(self, alpha: int, beta: int) -> GaussianRational:
        return self.terms.get((alpha, beta), GR_ZERO)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, WeylPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "WeylPoly(0)"
        bits = []
        for (a, b), c in sorted(self.terms.items()):
            bits.append(f"({c.re}{'+' if c.im >= 0 else '-'}{abs(c.im)}i)·ad{a}a{b}")
        return "WeylPoly(" + " + ".join(bits) + ")"


class SkewPoly:
    """Real linear combination of skew-hermitian monomials.

    Keys are ``(sigma, gamma)`` with sigma in {+1, -1} and gamma well-ordered;
    the identically-zero minus-monomials (gamma = (k, k)) are never stored.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Tuple[int, MultiIndex], Fraction] = ()):
        cleaned = {}
        for (sigma, gamma), c in dict(terms).items():
            if not c:
                continue
            if sigma not in (PLUS, MINUS):
                raise ValueError(f"bad sign {sigma!r}")
            if not is_well_ordered(gamma):
                raise ValueError(f"multi-index {gamma} is not well-ordered")
            if sigma == MINUS and gamma[0] == gamma[1]:
                continue  # identically zero monomial
            cleaned[(sigma, gamma)] = Fraction(c)
        object.__setattr__(self, "terms", cleaned)

    def __setattr__(self, *_):  # pragma: no cover - immutability guard
        raise AttributeError("SkewPoly is immutable")

    # -- constructors ------------------------------------------------------
    @staticmethod
    def zero() -> "SkewPoly":
        return SkewPoly()

    @staticmethod
    def monomial(sigma: int, gamma: MultiIndex, c=Fraction(1)) -> "SkewPoly":
        if not is_well_ordered(gamma):
            raise ValueError(
                f"multi-index {gamma} is not well-ordered (need alpha >= beta)"
            )
        return SkewPoly({(sigma, gamma): Fraction(c)})

    # -- linear structure --------------------------------------------------
    def __add__(self, other: "SkewPoly") -> "SkewPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return SkewPoly(out)

    def __sub__(self, other: "SkewPoly") -> "SkewPoly":
        return self + (-other)

    def __neg__(self) -> "SkewPoly":
        return SkewPoly({k: -v for k, v in self.terms.items()})

    def scale(self, c) -> "SkewPoly":
        c = Fraction(c)
        return SkewPoly({k: v * c for k, v in self.terms.items()})

    # -- conversions -------------------------------------------------------
    def to_weyl(self) -> WeylPoly:
        out: Dict[MultiIndex, GaussianRational] = {}

        def bump(key: MultiIndex, val: GaussianRational):
            out[key] = out.get(key, GR_ZERO) + val

        for (sigma, (alpha, beta)), c in self.terms.items():
            if sigma == PLUS:
                bump((beta, alpha), GaussianRational.imag(c))
                bump((alpha, beta), GaussianRational.imag(c))
            else:
                bump((beta, alpha), GaussianRational.real(c))
                bump((alpha, beta), GaussianRational.real(-c))
        return WeylPoly(out)

    @staticmethod
    def from_weyl(p: WeylPoly) -> "SkewPoly":
        if p.dagger() != -p:
            for (a, b), c in sorted(p.terms.items()):
                mirror = p.coeff(b, a)
                if mirror.conjugate() != -c:
                    raise ValueError(
                        f"polynomial is not skew-hermitian: coefficient of "
                        f"(a†)^{a} a^{b} is {c.re}+{c.im}i but its mirror "
                        f"requires {-mirror.re}+{mirror.im}i"
                    )
        out: Dict[Tuple[int, MultiIndex], Fraction] = {}
        for (a, b), c in p.terms.items():
            if a < b:
                continue  # handled by the well-ordered partner
            if a == b:
                # diagonal basis element is 2i (a†)^a a^a, so c = 2i * plus_coeff
                out[(PLUS, (a, b))] = c.im / 2
            else:
                # coeff of (a†)^a a^b is  i*plus - minus
                out[(PLUS, (a, b))] = c.im
                out[(MINUS, (a, b))] = -c.re
        return SkewPoly(out)

    # -- projections and inspection ---------------------------------------
    def project(self, tag: str) -> "SkewPoly":
        if tag not in SUBSPACES:
            raise ValueError(f"unknown subspace {tag!r}")
        return SkewPoly(
            {k: v for k, v in self.terms.items() if subspace_of(*k) == tag}
        )

    @property
    def degree(self):
        if not self.terms:
            return NEG_INF
        return max(mdeg(gamma) for _, gamma in self.terms)

    def top_part(self) -> "SkewPoly":
        d = self.degree
        if d == NEG_INF:
            return SkewPoly()
        return SkewPoly(
            {k: v for k, v in self.terms.items() if mdeg(k[1]) == d}
        )

    def coeff(self, sigma: int, gamma: MultiIndex) -> Fraction:
        return self.terms.get((sigma, gamma), Fraction(0))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def sorted_terms(self) -> Iterator[Tuple[Tuple[int, MultiIndex], Fraction]]:
        return iter(sorted(self.terms.items(), key=lambda kv: monomial_key_order(kv[0])))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, SkewPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "SkewPoly(0)"
        bits = []
        for (sigma, gamma), c in self.sorted_terms():
            s = "+" if sigma == PLUS else "-"
            bits.append(f"{c}·g{s}{gamma}")
        return "SkewPoly(" + " + ".join(bits) + ")"


# ---------------------------------------------------------------------------
# Frequently used elements
# ---------------------------------------------------------------------------

def unit_i() -> SkewPoly:
    """The central element i (= plus((0,0)) / 2)."""
    return SkewPoly.monomial(PLUS, (0, 0), Fraction(1, 2))


def number_op() -> SkewPoly:
    """i a†a (= plus((1,1)) / 2)."""
    return SkewPoly.monomial(PLUS, (1, 1), Fraction(1, 2))


def schrodinger_monomials() -> Tuple[SkewPoly, ...]:
    """The six monomials spanning the degree-<=2 subalgebra:
    i, i a†a, i(a+a†), a-a†, i(a²+a†²), a²-a†²."""
    return (
        unit_i(),
        number_op(),
        SkewPoly.monomial(PLUS, (1, 0)),
        SkewPoly.monomial(MINUS, (1, 0)),
        SkewPoly.monomial(PLUS, (2, 0)),
        SkewPoly.monomial(MINUS, (2, 0)),
    )


# ---------------------------------------------------------------------------
# JSON wire formats (bit-exact fraction strings)
# ---------------------------------------------------------------------------

def skew_to_json(s: SkewPoly) -> dict:
    return {
        "skew": [
            {
                "sigma": "+" if sigma == PLUS else "-",
                "alpha": gamma[0],
                "beta": gamma[1],
                "coeff": str(c),
            }
            for (sigma, gamma), c in s.sorted_terms()
        ]
    }


def skew_from_json(obj: dict) -> SkewPoly:
    try:
        entries = obj["skew"]
    except (KeyError, TypeError):
        raise ValueError("expected an object with a 'skew' array")
    terms: Dict[Tuple[int, MultiIndex], Fraction] = {}
    for i, e in enumerate(entries):
        try:
            sigma = {"+": PLUS, "-": MINUS}[e["sigma"]]
            gamma = (int(e["alpha"]), int(e["beta"]))
            coeff = Fraction(e["coeff"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"bad skew term at index {i}: {exc}") from exc
        key = (sigma, gamma)
        terms[key] = terms.get(key, Fraction(0)) + coeff
    return SkewPoly(terms)


def weyl_to_json(p: WeylPoly) -> dict:
    return {
        "weyl": [
            {"alpha": a, "beta": b, "re": str(c.re), "im": str(c.im)}
            for (a, b), c in sorted(p.terms.items())
        ]
    }


def weyl_from_json(obj: dict) -> WeylPoly:
    try:
        entries = obj["weyl"]
    except (KeyError, TypeError):
        raise ValueError("expected an object with a 'weyl' array")
    terms: Dict[MultiIndex, GaussianRational] = {}
    for i, e in enumerate(entries):
        try:
            key = (int(e["alpha"]), int(e["beta"]))
            c = GaussianRational(Fraction(e["re"]), Fraction(e["im"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"bad weyl term at index {i}: {exc}") from exc
        terms[key] = terms.get(key, GR_ZERO) + c
    return WeylPoly(terms)
