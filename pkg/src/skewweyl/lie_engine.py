"""Lie brackets, exact Lie closures, and finiteness decision procedures.

The closure routine follows the level structure V_0 = span(G),
V_{k+1} = V_k + [V_k, V_k], with exact echelon bookkeeping over the
skew-hermitian monomial basis.  Before falling back to a budgeted closure,
`lie_closure` runs a fixed sequence of decision rules (exact decisions for
monomial generator sets and generator sets containing a harmonic drift term
i(w a†a + c), then sufficient infiniteness criteria with machine-checkable
witnesses).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .weyl_core import (
    MINUS,
    NEG_INF,
    PLUS,
    MultiIndex,
    SkewPoly,
    mdeg,
    monomial_key_order,
    number_op,
    skew_to_json,
    subspace_of,
    unit_i,
)

MonKey = Tuple[int, MultiIndex]


def bracket(x: SkewPoly, y: SkewPoly) -> SkewPoly:
    """Exact commutator [x, y]; skew-hermitian inputs give a skew result."""
    return SkewPoly.from_weyl(x.to_weyl().commutator(y.to_weyl()))


# ---------------------------------------------------------------------------
# Exact spans with echelonized coordinates
# ---------------------------------------------------------------------------

class LieSpan:
    """Ordered basis of a subspace of the skew-hermitian algebra with exact
    row-reduced coordinates over the monomial basis.

    Mutable only through `insert`; used as an immutable value once built.
    """

    def __init__(self, vectors: Iterable[SkewPoly] = ()):
        self.basis: List[SkewPoly] = []
        # pivot monomial key -> fully reduced row (dict MonKey -> Fraction)
        self._rows: Dict[MonKey, Dict[MonKey, Fraction]] = {}
        for v in vectors:
            self.insert(v)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _reduce(self, v: SkewPoly) -> Dict[MonKey, Fraction]:
        row = dict(v.terms)
        changed = True
        while changed:
            changed = False
            for key in sorted(row, key=monomial_key_order):
                if not row[key]:
                    del row[key]
                    continue
                pivot_row = self._rows.get(key)
                if pivot_row is not None:
                    c = row[key]
                    for k2, c2 in pivot_row.items():
                        row[k2] = row.get(k2, Fraction(0)) - c * c2
                    changed = True
                    break
        return {k: c for k, c in row.items() if c}

    def contains(self, v: SkewPoly) -> bool:
        return not self._reduce(v)

    def insert(self, v: SkewPoly) -> bool:
        """Add v to the span; returns True if the dimension grew."""
        residual = self._reduce(v)
        if not residual:
            return False
        pivot = min(residual, key=monomial_key_order)
        c = residual[pivot]
        new_row = {k: val / c for k, val in residual.items()}
        # keep all rows fully reduced against each other
        for p, row in self._rows.items():
            if pivot in row:
                f = row[pivot]
                for k2, c2 in new_row.items():
                    row[k2] = row.get(k2, Fraction(0)) - f * c2
                self._rows[p] = {k: val for k, val in row.items() if val}
        self._rows[pivot] = new_row
        self.basis.append(v)
        return True

    def coordinates(self, v: SkewPoly) -> Optional[List[Fraction]]:
        """Exact coordinates of v in `self.basis`, or None if v is outside."""
        import sympy

        keys = sorted({k for b in self.basis for k in b.terms},
                      key=monomial_key_order)
        kindex = {k: i for i, k in enumerate(keys)}
        if any(k not in kindex for k in v.terms):
            return None
        A = sympy.zeros(len(keys), self.dim)
        bvec = sympy.zeros(len(keys), 1)
        for j, b in enumerate(self.basis):
            for k, c in b.terms.items():
                A[kindex[k], j] = sympy.Rational(c.numerator, c.denominator)
        for k, c in v.terms.items():
            bvec[kindex[k]] = sympy.Rational(c.numerator, c.denominator)
        try:
            sol, params = A.gauss_jordan_solve(bvec)
        except ValueError:
            return None
        if params.shape[0]:
            sol = sol.subs({p: 0 for p in params})
        coords = [Fraction(int(x.p), int(x.q)) for x in sol]
        acc = SkewPoly()
        for c, b in zip(coords, self.basis):
            acc = acc + b.scale(c)
        return coords if acc == v else None

    def canonical_key(self) -> Tuple:
        """Hashable canonical form (RREF rows) identifying the subspace."""
        rows = []
        for pivot in sorted(self._rows, key=monomial_key_order):
            row = self._rows[pivot]
            rows.append(tuple(sorted(row.items(), key=lambda kv: monomial_key_order(kv[0]))))
        return tuple(rows)

    def copy(self) -> "LieSpan":
        out = LieSpan()
        out.basis = list(self.basis)
        out._rows = {p: dict(r) for p, r in self._rows.items()}
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, LieSpan) and self.canonical_key() == other.canonical_key()

    def __hash__(self) -> int:
        return hash(self.canonical_key())

    def __repr__(self) -> str:
        return f"LieSpan(dim={self.dim})"


def span_is_bracket_closed(span: LieSpan) -> bool:
    for i, x in enumerate(span.basis):
        for y in span.basis[i + 1:]:
            if not span.contains(bracket(x, y)):
                return False
    return True


# ---------------------------------------------------------------------------
# Closure outcomes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Budget:
    max_dim: int = 64
    max_degree: int = 24

    def __post_init__(self):
        if self.max_dim <= 0 or self.max_degree <= 0:
            raise ValueError("budget must be positive")


@dataclass
class InfinitenessWitness:
    rule: str  # PerpWithFreeHam | MixedEqAndQuad | MonomialGlossaryViolation
    #          | IgusaCertificate | ChainDegreeGrowth
    evidence: dict = field(default_factory=dict)


@dataclass
class ClosureOutcome:
    outcome: str  # "finite" | "infinite" | "inconclusive"
    span: Optional[LieSpan] = None
    witness: Optional[InfinitenessWitness] = None
    budget_report: Optional[dict] = None

    @property
    def dim(self) -> Optional[int]:
        return self.span.dim if self.span is not None else None

    def to_json(self) -> dict:
        out: dict = {"outcome": self.outcome}
        if self.span is not None:
            out["dim"] = self.span.dim
            out["basis"] = [skew_to_json(b) for b in self.span.basis]
        if self.witness is not None:
            out["rule"] = self.witness.rule
            out["witness"] = self.witness.evidence
        if self.budget_report is not None:
            out["budget"] = self.budget_report
        return out


# ---------------------------------------------------------------------------
# Decision helpers
# ---------------------------------------------------------------------------

_SCHRODINGER_KEYS = {
    (PLUS, (0, 0)),
    (PLUS, (1, 1)),
    (PLUS, (1, 0)),
    (MINUS, (1, 0)),
    (PLUS, (2, 0)),
    (MINUS, (2, 0)),
}


def _drift_term(g: SkewPoly) -> Optional[Tuple[Fraction, Fraction]]:
    """If g = i(w a†a + c) exactly with w != 0, return (w, c)."""
    keys = set(g.terms)
    if not keys <= {(PLUS, (1, 1)), (PLUS, (0, 0))}:
        return None
    w = 2 * g.coeff(PLUS, (1, 1))
    c = 2 * g.coeff(PLUS, (0, 0))
    if not w:
        return None
    return (w, c)


def _raw_closure(gens: Sequence[SkewPoly], budget: Budget) -> ClosureOutcome:
    """Budgeted level-structure closure with exact echelon bookkeeping."""
    span = LieSpan()
    for g in gens:
        span.insert(g)
    frontier = list(span.basis)
    max_deg_seen = max((b.degree for b in span.basis), default=NEG_INF)
    while frontier:
        if span.dim > budget.max_dim:
            return ClosureOutcome(
                "inconclusive",
                budget_report={"max_dim": budget.max_dim,
                               "max_degree": budget.max_degree,
                               "dim_reached": span.dim,
                               "degree_reached": max_deg_seen},
            )
        new: List[SkewPoly] = []
        old_basis = list(span.basis)
        for x in frontier:
            for y in old_basis:
                z = bracket(x, y)
                if not z:
                    continue
                if z.degree != NEG_INF and z.degree > budget.max_degree:
                    return ClosureOutcome(
                        "inconclusive",
                        budget_report={"max_dim": budget.max_dim,
                                       "max_degree": budget.max_degree,
                                       "dim_reached": span.dim,
                                       "degree_reached": z.degree},
                    )
                if span.insert(z):
                    new.append(z)
                    max_deg_seen = max(max_deg_seen, z.degree)
        frontier = new
    return ClosureOutcome("finite", span=span)


def chain_witness(seed: SkewPoly, aux, steps: int = 8,
                  required_growth: int = 3) -> Optional[InfinitenessWitness]:
    """Run the commutator chain u <- [u, s] and look for sustained strict
    degree growth.

    `aux` is either a fixed SkewPoly or a sequence cycled over the steps.
    Returns a witness carrying the chain prefix once `required_growth`
    consecutive strict degree increases are seen, else None.
    """
    if steps < 2:
        raise ValueError("need at least two chain steps")
    aux_seq = [aux] if isinstance(aux, SkewPoly) else list(aux)
    u = seed
    degrees = [u.degree]
    chain = [u]
    growth = 0
    for step in range(steps):
        s = aux_seq[step % len(aux_seq)]
        u = bracket(u, s)
        if not u:
            return None
        chain.append(u)
        degrees.append(u.degree)
        if degrees[-1] > degrees[-2]:
            growth += 1
            if growth >= required_growth:
                return InfinitenessWitness(
                    rule="ChainDegreeGrowth",
                    evidence={
                        "degrees": degrees,
                        "chain": [skew_to_json(c) for c in chain],
                        "aux": [skew_to_json(a) for a in aux_seq],
                    },
                )
        else:
            growth = 0
    return None


def verify_chain_witness(w: InfinitenessWitness) -> bool:
    """Re-check a ChainDegreeGrowth witness exactly from its payload."""
    from .weyl_core import skew_from_json

    if w.rule != "ChainDegreeGrowth":
        return False
    chain = [skew_from_json(o) for o in w.evidence["chain"]]
    aux = [skew_from_json(o) for o in w.evidence["aux"]]
    for i in range(len(chain) - 1):
        if bracket(chain[i], aux[i % len(aux)]) != chain[i + 1]:
            return False
    degs = [c.degree for c in chain]
    if degs != w.evidence["degrees"]:
        return False
    # sustained growth at the end of the recorded prefix
    return all(degs[i + 1] > degs[i] for i in range(len(degs) - 4, len(degs) - 1))


def decide_monomial_set(gens: Sequence[SkewPoly],
                        budget: Budget = Budget()) -> ClosureOutcome:
    """Exact finite/infinite decision for generator sets of single monomials.

    Finiteness holds exactly when the distinct monomials are (a) all central
    or Kerr-type (abelian case), or (b) all among the six degree-<=2
    monomials, or (c) a single higher-degree well-ordered monomial with
    alpha > beta, possibly alongside i.  Every other combination generates an
    infinite-dimensional algebra.
    """
    keys: set = set()
    for g in gens:
        if not g:
            continue
        if not g.is_monomial():
            raise ValueError("decide_monomial_set requires single-monomial generators")
        keys.update(g.terms)
    if not keys:
        return ClosureOutcome("finite", span=LieSpan())
    tags = {k: subspace_of(*k) for k in keys}
    perp = [k for k, t in tags.items() if t == "Aperp"]
    monos = [SkewPoly.monomial(s, g) for s, g in keys]
    finite = False
    if all(not bracket(x, y)
           for x, y in itertools.combinations(monos, 2)):
        finite = True  # mutually commuting (covers all of A0 + Kerr-type)
    elif not perp and all(k in _SCHRODINGER_KEYS for k in keys):
        finite = True
    elif len(perp) == 1 and all(k == perp[0] or k == (PLUS, (0, 0)) for k in keys):
        finite = True  # one nonlinearity plus (optionally) the central i
    if finite:
        # finiteness is already proven, so run the brute closure under a
        # budget that cannot truncate it (dim <= max(6, #generators))
        safe = Budget(max(budget.max_dim, 8, 2 * len(monos)),
                      max(budget.max_degree, 2 * max(a + b for _, (a, b) in keys) + 2))
        out = _raw_closure(gens, safe)
        assert out.outcome == "finite"
        return out
    return ClosureOutcome(
        "infinite",
        witness=InfinitenessWitness(
            rule="MonomialGlossaryViolation",
            evidence={"monomials": [
                {"sigma": "+" if s == PLUS else "-", "alpha": g[0], "beta": g[1]}
                for s, g in sorted(keys, key=monomial_key_order)
            ]},
        ),
    )


def decide_with_free_hamiltonian(gens: Sequence[SkewPoly],
                                 budget: Budget = Budget()) -> ClosureOutcome:
    """Exact decision when some generator is a harmonic drift i(w a†a + c).

    The closure is finite iff no generator has support in the residual
    nonlinear subspace, and additionally no generator has linear or quadratic
    support whenever some generator has Kerr-type support.
    """
    drift = None
    for g in gens:
        d = _drift_term(g)
        if d is not None and d[0] > 0:
            drift = g
            break
    if drift is None:
        raise ValueError(
            "no generator of the form i(w a†a + c) with w > 0; use lie_closure"
        )
    perp_offender = next((g for g in gens if g.project("Aperp")), None)
    if perp_offender is not None:
        return ClosureOutcome(
            "infinite",
            witness=InfinitenessWitness(
                rule="PerpWithFreeHam",
                evidence={"drift": skew_to_json(drift),
                          "offender": skew_to_json(perp_offender)},
            ),
        )
    eq_support = next((g for g in gens if g.project("Aeq")), None)
    if eq_support is not None:
        quad = next(
            (g for g in gens if g.project("A1") or g.project("A2")), None
        )
        if quad is not None:
            return ClosureOutcome(
                "infinite",
                witness=InfinitenessWitness(
                    rule="MixedEqAndQuad",
                    evidence={"kerr_element": skew_to_json(eq_support),
                              "quadratic_element": skew_to_json(quad)},
                ),
            )
    out = _raw_closure(gens, budget)
    assert out.outcome == "finite"
    return out


def _mixed_eq_quad_witness(gens: Sequence[SkewPoly]) -> Optional[InfinitenessWitness]:
    """Sufficient criterion: one element whose top-degree part is a pure
    Kerr-type monomial of degree >= 4, together with one element whose
    component outside span(A0, Aeq) is nonzero and of maximal degree within
    that element.
    """
    def eq_leader(g: SkewPoly) -> bool:
        top = g.top_part()
        if top.degree == NEG_INF or top.degree < 4:
            return False
        return len(top.terms) == 1 and all(
            subspace_of(*k) == "Aeq" for k in top.terms
        )

    leaders = [g for g in gens if eq_leader(g)]
    if not leaders:
        return None
    for g in gens:
        off_diag = g - g.project("A0") - g.project("Aeq")
        if not off_diag:
            continue
        rest = g - off_diag
        if off_diag.degree >= rest.degree or not rest:
            return ClosureOutcomeWitness(leaders[0], g)
    return None


def ClosureOutcomeWitness(e1: SkewPoly, e2: SkewPoly) -> InfinitenessWitness:
    return InfinitenessWitness(
        rule="MixedEqAndQuad",
        evidence={"kerr_element": skew_to_json(e1), "partner": skew_to_json(e2)},
    )


def _low_degree_mixed_witness(gens: Sequence[SkewPoly]) -> Optional[InfinitenessWitness]:
    """Companion criterion: e1 in span(A0, Aeq) with Kerr support, e2 in the
    degree-<=2 subalgebra with linear/quadratic support."""
    e1 = next(
        (g for g in gens
         if g.project("Aeq") and g == g.project("A0") + g.project("Aeq")),
        None,
    )
    if e1 is None:
        return None
    for g in gens:
        quad = g.project("A1") + g.project("A2")
        if quad and g == g.project("A0") + quad:
            return ClosureOutcomeWitness(e1, g)
    return None


def lie_closure(gens: Sequence[SkewPoly],
                budget: Budget = Budget()) -> ClosureOutcome:
    """Lie closure with decision rules applied before budgeted iteration.

    Rule order: exact monomial-set decision, exact drift-term decision,
    drift+nonlinearity criterion, mixed Kerr/quadratic criteria, identity
    leading-coefficient criterion (degree > 2 pairs), commutator-chain
    search, then budgeted closure.
    """
    gens = [g for g in gens if g]
    if not gens:
        return ClosureOutcome("finite", span=LieSpan())

    if all(g.is_monomial() for g in gens):
        return decide_monomial_set(gens, budget)

    if any((d := _drift_term(g)) is not None and d[0] > 0 for g in gens):
        return decide_with_free_hamiltonian(gens, budget)

    # drift term appearing alongside residual nonlinear support, exact rule
    drift = next((g for g in gens if _drift_term(g) is not None), None)
    if drift is not None:
        offender = next((g for g in gens if g.project("Aperp")), None)
        if offender is not None:
            return ClosureOutcome(
                "infinite",
                witness=InfinitenessWitness(
                    rule="PerpWithFreeHam",
                    evidence={"drift": skew_to_json(drift),
                              "offender": skew_to_json(offender)},
                ),
            )

    for detector in (_low_degree_mixed_witness, _mixed_eq_quad_witness):
        w = detector(gens)
        if w is not None:
            return ClosureOutcome("infinite", witness=w)

    # leading-coefficient criterion at the identity frame (sufficient only)
    from .igusa import _evaluate_frame, identity_check

    for x, y in itertools.combinations(gens, 2):
        if x.degree > 2 and y.degree > 2:
            if identity_check(x, y) == "infinite":
                cert = _evaluate_frame(x, y, None)
                return ClosureOutcome(
                    "infinite",
                    witness=InfinitenessWitness(
                        rule="IgusaCertificate",
                        evidence={"pair": [skew_to_json(x), skew_to_json(y)],
                                  **(cert.to_json() if cert else {})},
                    ),
                )

    for seed in gens:
        for aux in gens:
            w = chain_witness(seed, aux, steps=8)
            if w is not None:
                return ClosureOutcome("infinite", witness=w)

    return _raw_closure(gens, budget)


def centralizer_in(x: SkewPoly, ambient: LieSpan) -> LieSpan:
    """Exact kernel of ad(x) restricted to a bracket-closed ambient span."""
    if not span_is_bracket_closed(ambient):
        raise ValueError("ambient span is not closed under the bracket")
    import sympy

    images = [bracket(x, b) for b in ambient.basis]
    keys = sorted({k for im in images for k in im.terms}, key=monomial_key_order)
    if not keys:
        return ambient.copy()
    A = sympy.zeros(len(keys), ambient.dim)
    kindex = {k: i for i, k in enumerate(keys)}
    for j, im in enumerate(images):
        for k, c in im.terms.items():
            A[kindex[k], j] = sympy.Rational(c.numerator, c.denominator)
    out = LieSpan()
    for vec in A.nullspace():
        acc = SkewPoly()
        denom = 1
        for entry in vec:
            denom = sympy.ilcm(denom, entry.q) if entry.q != 1 else denom
        for c, b in zip(vec, ambient.basis):
            acc = acc + b.scale(Fraction(int(c.p * denom), int(c.q)))
        out.insert(acc)
    return out
