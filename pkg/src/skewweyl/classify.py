"""Structural invariants and catalog identification of finite subalgebras.

Instead of solving the nonlinear isomorphism equations, algebras are matched
through an invariant fingerprint (dimension, derived / lower-central series
profiles, center dimension, exact Killing signature).  The fingerprint
separates every named algebra in the catalog; in particular the two
four-dimensional solvable algebras wh1 and wh2 differ in Killing signature
((1,0,3) vs (0,1,3)), which replaces any case analysis over nonlinear
systems.  Parametric families (nilpotent chains L_n, their solvable
extensions, and diagonal solvable algebras r(j1..jn)) are recognized
structurally.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from .lie_engine import LieSpan, bracket, span_is_bracket_closed
from .weyl_core import SkewPoly

Vec = Tuple[Fraction, ...]


def _to_rat(x: Fraction):
    return sympy.Rational(x.numerator, x.denominator)


# ---------------------------------------------------------------------------
# Structure constants
# ---------------------------------------------------------------------------

class StructureConstants:
    """Bracket table of an n-dimensional algebra in a fixed basis.

    `table[i][j]` is the coordinate vector of [b_i, b_j]; antisymmetry is
    enforced at construction.
    """

    def __init__(self, n: int, entries: Dict[Tuple[int, int], Dict[int, Fraction]]):
        self.n = n
        self.table: List[List[Vec]] = [
            [tuple(Fraction(0) for _ in range(n)) for _ in range(n)]
            for _ in range(n)
        ]
        for (i, j), comps in entries.items():
            v = [Fraction(0)] * n
            for k, c in comps.items():
                v[k] = Fraction(c)
            self.table[i][j] = tuple(v)
            self.table[j][i] = tuple(-c for c in v)

    @staticmethod
    def from_span(b: LieSpan) -> "StructureConstants":
        if not span_is_bracket_closed(b):
            raise ValueError("span is not closed under the bracket")
        n = b.dim
        entries: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for i in range(n):
            for j in range(i + 1, n):
                coords = b.coordinates(bracket(b.basis[i], b.basis[j]))
                assert coords is not None
                entries[(i, j)] = {k: c for k, c in enumerate(coords) if c}
        return StructureConstants(n, entries)

    def bracket_vec(self, u: Sequence, v: Sequence) -> List:
        out = [sympy.Integer(0)] * self.n
        for i in range(self.n):
            if not u[i]:
                continue
            for j in range(self.n):
                if not v[j]:
                    continue
                c = u[i] * v[j]
                for k, t in enumerate(self.table[i][j]):
                    if t:
                        out[k] += c * _to_rat(t)
        return out

    def ad(self, i: int) -> sympy.Matrix:
        cols = [[_to_rat(self.table[i][j][k]) for j in range(self.n)]
                for k in range(self.n)]
        return sympy.Matrix(cols)


def _colspace(vectors: List[List]) -> List[List]:
    if not vectors:
        return []
    m = sympy.Matrix([list(v) for v in vectors]).T
    return [list(c) for c in m.columnspace()]


def _subspace_product(sc: StructureConstants, A: List[List], B: List[List]) -> List[List]:
    return _colspace([sc.bracket_vec(u, v) for u in A for v in B])


def _full_basis(n: int) -> List[List]:
    return [[sympy.Integer(1 if i == j else 0) for i in range(n)] for j in range(n)]


def _series(sc: StructureConstants, step) -> List[List[List]]:
    """Run a descending series until the dimension stabilizes."""
    out = [_full_basis(sc.n)]
    while True:
        nxt = step(out[-1])
        out.append(nxt)
        if len(nxt) == len(out[-2]) or not nxt:
            break
    return out


def _series_dims(series: List[List[List]]) -> Tuple[int, ...]:
    dims = [len(s) for s in series]
    # normalize: stop at first repeat or at 0
    norm = [dims[0]]
    for d in dims[1:]:
        if d == norm[-1]:
            break
        norm.append(d)
        if d == 0:
            break
    return tuple(norm)


# ---------------------------------------------------------------------------
# Invariants on LieSpans
# ---------------------------------------------------------------------------

def derived_series(b: LieSpan) -> List[LieSpan]:
    """D^0 = b, D^{l+1} = [D^l, D^l], until stabilization."""
    if not span_is_bracket_closed(b):
        raise ValueError("span is not closed under the bracket")
    out = [b]
    while True:
        cur = out[-1]
        nxt = LieSpan()
        for i, x in enumerate(cur.basis):
            for y in cur.basis[i + 1:]:
                nxt.insert(bracket(x, y))
        if nxt.dim == cur.dim:
            break
        out.append(nxt)
        if nxt.dim == 0:
            break
    return out


def lower_central_series(b: LieSpan) -> List[LieSpan]:
    """n_0 = b, n_{l+1} = [b, n_l], until stabilization."""
    if not span_is_bracket_closed(b):
        raise ValueError("span is not closed under the bracket")
    out = [b]
    while True:
        cur = out[-1]
        nxt = LieSpan()
        for x in b.basis:
            for y in cur.basis:
                nxt.insert(bracket(x, y))
        if nxt.dim == cur.dim:
            break
        out.append(nxt)
        if nxt.dim == 0:
            break
    return out


def center(b: LieSpan) -> LieSpan:
    from .lie_engine import centralizer_in

    out = b.copy()
    for x in b.basis:
        out = _intersect(out, centralizer_in(x, b))
    return out


def _intersect(a: LieSpan, b: LieSpan) -> LieSpan:
    """Subspace intersection via the nullspace of the stacked bases."""
    out = LieSpan()
    from .weyl_core import monomial_key_order

    keys = sorted({k for s in (a, b) for vec in s.basis for k in vec.terms},
                  key=monomial_key_order)
    kindex = {k: i for i, k in enumerate(keys)}
    M = sympy.zeros(len(keys), a.dim + b.dim)
    for j, v in enumerate(a.basis):
        for k, c in v.terms.items():
            M[kindex[k], j] = _to_rat(c)
    for j, v in enumerate(b.basis):
        for k, c in v.terms.items():
            M[kindex[k], a.dim + j] = -_to_rat(c)
    for null in M.nullspace():
        acc = SkewPoly()
        for j, v in enumerate(a.basis):
            c = null[j]
            if c:
                acc = acc + v.scale(Fraction(int(c.p), int(c.q)))
        out.insert(acc)
    return out


# ---------------------------------------------------------------------------
# Killing form
# ---------------------------------------------------------------------------

def _sylvester_signature(G: sympy.Matrix) -> Tuple[int, int, int]:
    """Exact signature of a symmetric rational matrix by congruence
    reduction."""
    G = G.copy()
    n = G.shape[0]
    n_plus = n_minus = n_zero = 0
    idx = list(range(n))
    while idx:
        pivot = next((i for i in idx if G[i, i] != 0), None)
        if pivot is None:
            pair = next(((i, j) for i in idx for j in idx
                         if i < j and G[i, j] != 0), None)
            if pair is None:
                n_zero += len(idx)
                break
            i, j = pair
            # congruence: add row/col j to i to expose a diagonal entry
            G[i, :] = G[i, :] + G[j, :]
            G[:, i] = G[:, i] + G[:, j]
            pivot = i
        d = G[pivot, pivot]
        if d > 0:
            n_plus += 1
        else:
            n_minus += 1
        for i in idx:
            if i == pivot or G[i, pivot] == 0:
                continue
            f = G[i, pivot] / d
            G[i, :] = G[i, :] - f * G[pivot, :]
            G[:, i] = G[:, i] - f * G[:, pivot]
        idx.remove(pivot)
    return (n_plus, n_minus, n_zero)


def killing_form(b: LieSpan):
    """Exact Killing Gram matrix B(x,y) = Tr(ad_x ad_y), with rank and
    signature."""
    sc = StructureConstants.from_span(b)
    return _killing_from_sc(sc)


def _killing_from_sc(sc: StructureConstants):
    ads = [sc.ad(i) for i in range(sc.n)]
    G = sympy.Matrix(sc.n, sc.n,
                     lambda i, j: (ads[i] * ads[j]).trace())
    signature = _sylvester_signature(G)
    return G, G.rank(), signature


# ---------------------------------------------------------------------------
# Fingerprints
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Fingerprint:
    dim: int
    derived_dims: Tuple[int, ...]
    lcs_dims: Tuple[int, ...]
    center_dim: int
    solvable: bool
    nilpotent: bool
    killing_rank: int
    killing_signature: Tuple[int, int, int]

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "derived_dims": list(self.derived_dims),
            "lcs_dims": list(self.lcs_dims),
            "center_dim": self.center_dim,
            "solvable": self.solvable,
            "nilpotent": self.nilpotent,
            "killing_rank": self.killing_rank,
            "killing_signature": list(self.killing_signature),
        }


def _fingerprint_from_sc(sc: StructureConstants) -> Fingerprint:
    der = _series(sc, lambda s: _subspace_product(sc, s, s))
    lcs = _series(sc, lambda s: _subspace_product(sc, _full_basis(sc.n), s))
    der_dims = _series_dims(der)
    lcs_dims = _series_dims(lcs)
    # center: common kernel of all ad maps
    stacked = sympy.Matrix.vstack(*[sc.ad(i) for i in range(sc.n)]) \
        if sc.n else sympy.zeros(0, 0)
    center_dim = len(stacked.nullspace()) if sc.n else 0
    _, rank, signature = _killing_from_sc(sc)
    return Fingerprint(
        dim=sc.n,
        derived_dims=der_dims,
        lcs_dims=lcs_dims,
        center_dim=center_dim,
        solvable=der_dims[-1] == 0,
        nilpotent=lcs_dims[-1] == 0,
        killing_rank=rank,
        killing_signature=signature,
    )


def fingerprint(b: LieSpan) -> Fingerprint:
    return _fingerprint_from_sc(StructureConstants.from_span(b))


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

def _abelian_sc(n: int) -> StructureConstants:
    return StructureConstants(n, {})


def _chain_sc(n: int) -> StructureConstants:
    """L_n, dim n+1: [e1, e_j] = e_{j+1} for j = 2..n (0-indexed shift)."""
    entries = {(0, j): {j + 1: Fraction(1)} for j in range(1, n)}
    return StructureConstants(n + 1, entries)


def _chain_ext_sc(n: int) -> StructureConstants:
    """Ltilde_n, dim n+2: solvable extension of L_n by a grading element."""
    entries: Dict[Tuple[int, int], Dict[int, Fraction]] = {
        (0, 1): {1: Fraction(1)},
    }
    for j in range(2, n + 2):
        entries[(0, j)] = {j: Fraction(-(n + 1 - (j - 1)))}
    for j in range(2, n + 1):
        entries[(1, j)] = {j + 1: Fraction(1)}
    return StructureConstants(n + 2, entries)


def _diagonal_sc(weights: Sequence[Fraction]) -> StructureConstants:
    """r(j1..jn), dim n+1: [e0, e_k] = -j_k e_k."""
    entries = {(0, k + 1): {k + 1: -Fraction(w)} for k, w in enumerate(weights)}
    return StructureConstants(len(weights) + 1, entries)


_CONCRETE_SC: Dict[str, StructureConstants] = {
    "aff(1)": StructureConstants(2, {(0, 1): {0: Fraction(1)}}),
    "aff(1)+R": StructureConstants(3, {(0, 1): {0: Fraction(1)}}),
    "h1": StructureConstants(3, {(0, 1): {2: Fraction(1)}}),
    "sl2": StructureConstants(3, {
        (0, 1): {1: Fraction(2)},
        (0, 2): {2: Fraction(-2)},
        (1, 2): {0: Fraction(1)},
    }),
    "sl2+R": StructureConstants(4, {
        (0, 1): {1: Fraction(2)},
        (0, 2): {2: Fraction(-2)},
        (1, 2): {0: Fraction(1)},
    }),
    "wh1": StructureConstants(4, {
        (1, 2): {0: Fraction(1)},
        (1, 3): {1: Fraction(1)},
        (2, 3): {2: Fraction(-1)},
    }),
    "wh2": StructureConstants(4, {
        (0, 1): {2: Fraction(-1)},
        (0, 2): {1: Fraction(1)},
        (1, 2): {3: Fraction(1)},
    }),
    "Schrodinger": StructureConstants(6, {
        # basis order: i, ia†a, g+^i, g-^i, g+^2i, g-^2i  (cf. bracket table)
        (1, 2): {3: Fraction(1)},
        (1, 3): {2: Fraction(-1)},
        (1, 4): {5: Fraction(2)},
        (1, 5): {4: Fraction(-2)},
        (2, 3): {0: Fraction(-2)},
        (2, 4): {3: Fraction(2)},
        (2, 5): {2: Fraction(-2)},
        (3, 4): {2: Fraction(2)},
        (3, 5): {3: Fraction(2)},
        (4, 5): {0: Fraction(-4), 1: Fraction(-8)},
    }),
}


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    parameters: Tuple = ()
    fingerprint: Optional[Fingerprint] = None
    method: str = "fingerprint"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "parameters": [str(p) for p in self.parameters],
            "fingerprint": self.fingerprint.to_json() if self.fingerprint else None,
            "method": self.method,
        }


def reference_structure(name: str) -> StructureConstants:
    """Structure constants of a concrete catalog algebra in its stated
    basis order."""
    return _CONCRETE_SC[name]


def catalog_fingerprints() -> Dict[str, Fingerprint]:
    """Reference fingerprints of the concrete (non-parametric) catalog."""
    return {name: _fingerprint_from_sc(sc) for name, sc in _CONCRETE_SC.items()}


_CATALOG_CACHE: Optional[Dict[str, Fingerprint]] = None


def _catalog() -> Dict[str, Fingerprint]:
    global _CATALOG_CACHE
    if _CATALOG_CACHE is None:
        _CATALOG_CACHE = catalog_fingerprints()
    return _CATALOG_CACHE


def _identify_parametric(sc: StructureConstants, fp: Fingerprint) -> Optional[CatalogEntry]:
    n = sc.n
    if fp.nilpotent and fp.lcs_dims == tuple([n] + list(range(n - 2, -1, -1))):
        if fp == _fingerprint_from_sc(_chain_sc(n - 1)):
            return CatalogEntry("L_n", (n - 1,), fp, "structural")
    if fp.solvable and not fp.nilpotent and n >= 4:
        if fp == _fingerprint_from_sc(_chain_ext_sc(n - 2)):
            return CatalogEntry("Ltilde_n", (n - 2,), fp, "structural")
    if fp.solvable and not fp.nilpotent and fp.derived_dims[:2] == (n, n - 1):
        # candidate diagonal family: derived algebra abelian, some generator
        # acting diagonalizably on it with rational eigenvalues
        der = _subspace_product(sc, _full_basis(n), _full_basis(n))
        if len(der) == n - 1:
            abelian = all(
                not any(sc.bracket_vec(u, v)) for u, v in
                itertools.combinations(der, 2)
            )
            if abelian:
                weights = _diagonal_weights(sc, der)
                if weights is not None:
                    return CatalogEntry("r(j1..jn)", tuple(weights), fp,
                                        "structural")
    return None


def _diagonal_weights(sc: StructureConstants,
                      der: List[List]) -> Optional[Tuple[Fraction, ...]]:
    """Eigenvalues of a complementary generator acting on the (abelian)
    derived algebra, normalized so the largest |weight| is 1."""
    D = sympy.Matrix([list(v) for v in der]).T
    # find a basis vector outside the derived algebra
    outside = None
    for j in range(sc.n):
        e = [sympy.Integer(1 if i == j else 0) for i in range(sc.n)]
        if D.rank() == D.row_join(sympy.Matrix(e)).rank():
            continue
        outside = e
        break
    if outside is None:
        return None
    images = [sc.bracket_vec(outside, list(v)) for v in der]
    M = sympy.Matrix([list(v) for v in images]).T
    try:
        A = D.gauss_jordan_solve(M)[0]
    except ValueError:
        return None
    ev = A.eigenvals()
    weights: List[Fraction] = []
    for lam, mult in ev.items():
        if not lam.is_rational:
            return None
        weights.extend([Fraction(int(lam.p), int(lam.q))] * mult)
    if not any(weights):
        return None
    scale = max((abs(w) for w in weights if w), default=Fraction(1))
    weights = sorted((-Fraction(w) / scale for w in weights), reverse=True)
    return tuple(weights)


def identify(b: LieSpan) -> CatalogEntry:
    sc = StructureConstants.from_span(b)
    fp = _fingerprint_from_sc(sc)
    if fp.derived_dims == (fp.dim, 0) or fp.dim == 0 or (
            fp.dim and len(fp.derived_dims) > 1 and fp.derived_dims[1] == 0):
        return CatalogEntry("R^n", (fp.dim,), fp)
    for name, ref in _catalog().items():
        if fp == ref:
            return CatalogEntry(name, (), fp)
    parametric = _identify_parametric(sc, fp)
    if parametric is not None:
        return parametric
    return CatalogEntry("Unrecognized", (), fp, "none")


# ---------------------------------------------------------------------------
# Nullity and nilpotent chain bases
# ---------------------------------------------------------------------------

def nullity_witness(b: LieSpan, pair: Tuple[SkewPoly, SkewPoly]) -> bool:
    """True iff the two elements generate exactly the given span."""
    from .lie_engine import Budget, lie_closure

    for p in pair:
        if not b.contains(p):
            raise ValueError("witness elements must lie in the span")
    out = lie_closure(list(pair), Budget(max_dim=max(8, 2 * b.dim),
                                         max_degree=64))
    return out.outcome == "finite" and out.span == b


def nilpotent_chain_basis(b: LieSpan) -> Optional[Tuple[List[SkewPoly], SkewPoly]]:
    """For a non-abelian nilpotent span, a basis ({y_0..y_{n-2}}, x) with
    [y_j, y_k] = 0 and [x, y_j] = y_{j-1} (and [x, y_0] = 0).

    Built constructively: candidate x and top chain element are scanned over
    basis vectors and pair sums; the chain is generated by repeated
    bracketing with x.  Returns None if the scan fails.
    """
    fp = fingerprint(b)
    if not fp.nilpotent or fp.derived_dims[-1] == fp.dim:
        raise ValueError("chain basis requires a nilpotent span")
    if len(fp.derived_dims) == 1 or fp.derived_dims[1] == 0:
        raise ValueError("span is abelian; any basis works")
    n = b.dim
    candidates = list(b.basis) + [
        u + v for u, v in itertools.combinations(b.basis, 2)
    ]
    for x in candidates:
        for ytop in candidates:
            chain = [ytop]
            while len(chain) <= n:
                nxt = bracket(x, chain[-1])
                if not nxt:
                    break
                chain.append(nxt)
            if len(chain) != n - 1:
                continue
            if any(bracket(u, v) for u, v in itertools.combinations(chain, 2)):
                continue
            span = LieSpan(chain + [x])
            if span.dim == n and span == b:
                return (list(reversed(chain)), x)
    return None
