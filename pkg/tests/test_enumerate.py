"""Subset enumeration against the brute-force oracle and the known
glossary over the degree-<=2 monomial basis."""

import os

import pytest

from skewweyl.enumerate import (GLOSSARY_NONABELIAN_COUNTS,
                                brute_force_subalgebras,
                                enumerate_subalgebras, glossary_markdown,
                                glossary_report, thread_count)
from skewweyl.lie_engine import LieSpan, bracket
from skewweyl.weyl_core import (MINUS, PLUS, SkewPoly, schrodinger_monomials,
                                unit_i)


def gp(a, b):
    return SkewPoly.monomial(PLUS, (a, b))


def gm(a, b):
    return SkewPoly.monomial(MINUS, (a, b))


class TestSmallBases:
    def test_single_central_element(self):
        records = enumerate_subalgebras([unit_i()])
        assert len(records) == 1
        assert records[0].span.dim == 1
        assert records[0].catalog.name == "R^n"

    def test_displacement_pair(self):
        # {g+, g-} of degree one: singles are abelian lines, the pair
        # closes to the Heisenberg algebra
        records = enumerate_subalgebras([gp(1, 0), gm(1, 0)])
        names = sorted(r.catalog.name for r in records)
        assert names == ["R^n", "R^n", "h1"]

    def test_affine_pair(self):
        records = enumerate_subalgebras([gp(1, 0), gm(2, 0)])
        assert len(records) == 3
        by_subset = {r.generating_subset: r for r in records}
        assert by_subset[(0, 1)].catalog.name == "aff(1)"
        assert by_subset[(0, 1)].span.dim == 2

    def test_rejects_dependent_basis(self):
        with pytest.raises(ValueError):
            enumerate_subalgebras([unit_i(), unit_i().scale(2)])

    def test_rejects_infinite_ambient(self):
        with pytest.raises(ValueError):
            enumerate_subalgebras([gp(3, 0), gm(3, 0)])


class TestInvariants:
    def test_records_are_bracket_closed(self):
        basis = schrodinger_monomials()
        for r in enumerate_subalgebras(basis):
            sp = r.span
            for x in sp.basis:
                for y in sp.basis:
                    assert sp.contains(bracket(x, y))

    def test_matches_brute_force_oracle(self):
        basis = schrodinger_monomials()
        pruned = enumerate_subalgebras(basis)
        oracle = brute_force_subalgebras(basis)
        assert len(pruned) == len(oracle)
        keys = {r.span.canonical_key() for r in pruned}
        assert keys == {sp.canonical_key() for sp in oracle}

    def test_no_duplicate_spans(self):
        records = enumerate_subalgebras(schrodinger_monomials())
        keys = [r.span.canonical_key() for r in records]
        assert len(keys) == len(set(keys))

    def test_sorted_by_dimension(self):
        records = enumerate_subalgebras(schrodinger_monomials())
        dims = [r.span.dim for r in records]
        assert dims == sorted(dims)

    def test_thread_invariance(self):
        basis = schrodinger_monomials()
        serial = enumerate_subalgebras(basis, threads=1)
        parallel = enumerate_subalgebras(basis, threads=4)
        assert ({r.span.canonical_key() for r in serial}
                == {r.span.canonical_key() for r in parallel})


class TestGlossary:
    def test_report_totals(self):
        report = glossary_report()
        assert report["total_spans"] == 22
        assert report["dims"] == {1: 6, 2: 7, 3: 4, 4: 4, 6: 1}
        assert report["mismatches"] == {}

    def test_nonabelian_counts(self):
        counts = glossary_report()["counts"]
        for name, want in GLOSSARY_NONABELIAN_COUNTS.items():
            assert counts[name] == want

    def test_markdown_mentions_every_class(self):
        text = glossary_markdown()
        for name in GLOSSARY_NONABELIAN_COUNTS:
            assert name in text

    def test_record_json_shape(self):
        rec = glossary_report()["records"][0]
        assert set(rec) == {"generating_subset", "dim", "basis", "catalog"}


class TestThreadCount:
    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("WEYL_LIE_THREADS", "3")
        assert thread_count() == 3

    def test_default_is_one(self, monkeypatch):
        monkeypatch.delenv("WEYL_LIE_THREADS", raising=False)
        assert thread_count() == 1

    def test_rejects_garbage(self, monkeypatch):
        monkeypatch.setenv("WEYL_LIE_THREADS", "lots")
        with pytest.raises(ValueError):
            thread_count()
