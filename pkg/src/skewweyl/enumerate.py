"""Enumeration of all subalgebras generated by subsets of a basis.

The recursion mirrors the pruned depth-first strategy: starting from each
basis element, extend the current closed span one basis element at a time,
skipping extensions that are already inside the span (they cannot produce a
new algebra) and subtrees whose linear span already equals the full algebra.
A naive closure over all 2^n - 1 subsets is provided as an oracle; both
agree as sets of subspaces.
"""

from __future__ import annotations

import itertools
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .classify import CatalogEntry, identify
from .lie_engine import Budget, LieSpan, bracket, lie_closure
from .weyl_core import SkewPoly, skew_to_json


@dataclass
class RealizationRecord:
    generating_subset: Tuple[int, ...]
    span: LieSpan
    catalog: CatalogEntry

    def to_json(self) -> dict:
        return {
            "generating_subset": list(self.generating_subset),
            "dim": self.span.dim,
            "basis": [skew_to_json(b) for b in self.span.basis],
            "catalog": self.catalog.to_json(),
        }


def _closure_span(gens: Sequence[SkewPoly], budget: Budget) -> LieSpan:
    out = lie_closure(list(gens), budget)
    if out.outcome != "finite":
        raise ValueError("closure exceeded budget during enumeration")
    return out.span


def thread_count() -> int:
    """Worker count for the outer enumeration loop (WEYL_LIE_THREADS)."""
    raw = os.environ.get("WEYL_LIE_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"WEYL_LIE_THREADS must be an integer, got {raw!r}")
    return max(1, n)


def enumerate_subalgebras(basis: Sequence[SkewPoly],
                          budget: Budget = Budget(),
                          threads: Optional[int] = None) -> List[RealizationRecord]:
    """All distinct subalgebra spans generated by non-empty subsets of
    `basis`, each identified against the catalog.

    Errors out before enumerating if the full basis has no finite closure.
    """
    basis = list(basis)
    n = len(basis)
    check = LieSpan(basis)
    if check.dim != n:
        raise ValueError("basis elements must be linearly independent")
    full = lie_closure(basis, budget)
    if full.outcome != "finite":
        raise ValueError("the full basis does not generate a finite algebra")
    ambient = full.span

    found: Dict[Tuple, Tuple[Tuple[int, ...], LieSpan]] = {}
    lock = threading.Lock()

    def record(subset: Tuple[int, ...], span: LieSpan) -> bool:
        """Atomic check-and-insert; True if the span is new."""
        key = span.canonical_key()
        with lock:
            if key in found:
                return False
            found[key] = (subset, span)
            return True

    def extend(subset: Tuple[int, ...], span: LieSpan, k: int) -> None:
        if k >= n:
            return
        lin = span.copy()
        lin.insert(basis[k])
        if lin.dim == ambient.dim and lin == ambient:
            # any further extension can only reproduce the full algebra
            return
        if span.contains(basis[k]):
            extend(subset, span, k + 1)
            return
        for ell in range(k, n):
            bigger = _closure_span(list(span.basis) + [basis[ell]], budget)
            new_subset = subset + (ell,)
            if record(new_subset, bigger):
                extend(new_subset, bigger, ell + 1)

    def start(j: int) -> None:
        span = _closure_span([basis[j]], budget)
        record((j,), span)
        extend((j,), span, j + 1)

    workers = thread_count() if threads is None else max(1, threads)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(start, range(n)))
    else:
        for j in range(n):
            start(j)
    record(tuple(range(n)), ambient)

    records = [
        RealizationRecord(subset, span, identify(span))
        for subset, span in found.values()
    ]
    records.sort(key=lambda r: (r.span.dim, r.generating_subset))
    return records


def brute_force_subalgebras(basis: Sequence[SkewPoly],
                            budget: Budget = Budget()) -> List[LieSpan]:
    """Oracle: closures of all 2^n - 1 non-empty subsets, deduplicated."""
    out: Dict[Tuple, LieSpan] = {}
    for r in range(1, len(basis) + 1):
        for subset in itertools.combinations(basis, r):
            span = _closure_span(subset, budget)
            out.setdefault(span.canonical_key(), span)
    return list(out.values())


# ---------------------------------------------------------------------------
# Glossary
# ---------------------------------------------------------------------------

#: expected realization counts of the non-abelian classes over the
#: degree-<=2 monomial basis
GLOSSARY_NONABELIAN_COUNTS = {
    "aff(1)": 2,
    "aff(1)+R": 2,
    "h1": 1,
    "sl2": 1,
    "sl2+R": 1,
    "wh1": 2,
    "wh2": 1,
    "Schrodinger": 1,
}


def glossary_report() -> dict:
    """Enumerate over the six degree-<=2 monomials and group by catalog
    entry, checking the expected class multiplicities."""
    from .weyl_core import schrodinger_monomials

    records = enumerate_subalgebras(schrodinger_monomials())
    by_name: Dict[str, List[RealizationRecord]] = {}
    for r in records:
        by_name.setdefault(r.catalog.name, []).append(r)
    counts = {name: len(rs) for name, rs in by_name.items()}
    dims: Dict[int, int] = {}
    for r in records:
        dims[r.span.dim] = dims.get(r.span.dim, 0) + 1
    mismatches = {
        name: (counts.get(name, 0), want)
        for name, want in GLOSSARY_NONABELIAN_COUNTS.items()
        if counts.get(name, 0) != want
    }
    return {
        "total_spans": len(records),
        "dims": dims,
        "counts": counts,
        "mismatches": mismatches,
        "records": [r.to_json() for r in records],
    }


def glossary_markdown(report: Optional[dict] = None) -> str:
    """The glossary grouped as a markdown table."""
    report = report or glossary_report()
    by_name: Dict[str, List[dict]] = {}
    for rec in report["records"]:
        by_name.setdefault(rec["catalog"]["name"], []).append(rec)
    lines = ["| algebra | dimension | realizations | generating subsets |",
             "|---------|-----------|--------------|--------------------|"]
    for name in sorted(by_name, key=lambda s: (by_name[s][0]["dim"], s)):
        recs = by_name[name]
        subsets = ", ".join(str(tuple(r["generating_subset"])) for r in recs)
        dims = sorted({r["dim"] for r in recs})
        lines.append(
            f"| {name} | {'/'.join(map(str, dims))} | {len(recs)} | {subsets} |"
        )
    return "\n".join(lines)
