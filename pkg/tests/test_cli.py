"""CLI wire formats and exit codes (run in-process through cli.run)."""

import json

import pytest

from skewweyl.cli import run
from skewweyl.weyl_core import (MINUS, PLUS, SkewPoly, schrodinger_monomials,
                                skew_to_json)


def write_elements(tmp_path, name, elements):
    path = tmp_path / name
    path.write_text(json.dumps([skew_to_json(e) for e in elements]))
    return str(path)


def mono(sigma, a, b):
    return SkewPoly.monomial(sigma, (a, b))


@pytest.fixture
def out(capsys):
    def read():
        return json.loads(capsys.readouterr().out)
    return read


class TestClosure:
    def test_finite(self, tmp_path, out):
        gens = write_elements(tmp_path, "g.json",
                              [mono(PLUS, 1, 0), mono(MINUS, 1, 0)])
        assert run(["closure", "--gens", gens]) == 0
        doc = out()
        assert doc["outcome"] == "finite"
        assert doc["dim"] == 3
        assert len(doc["basis"]) == 3

    def test_infinite_with_witness(self, tmp_path, out):
        gens = write_elements(tmp_path, "g.json",
                              [mono(PLUS, 3, 0), mono(MINUS, 3, 0)])
        assert run(["closure", "--gens", gens]) == 0
        doc = out()
        assert doc["outcome"] == "infinite"
        assert doc["rule"]

    def test_generators_wrapper_accepted(self, tmp_path, out):
        path = tmp_path / "g.json"
        path.write_text(json.dumps(
            {"generators": [skew_to_json(mono(PLUS, 0, 0))]}))
        assert run(["closure", "--gens", str(path)]) == 0
        assert out()["dim"] == 1

    def test_budget_flags(self, tmp_path, out):
        gens = write_elements(tmp_path, "g.json", schrodinger_monomials())
        assert run(["closure", "--gens", gens, "--budget-dim", "4"]) == 0
        assert out()["outcome"] in {"finite", "inconclusive"}


class TestClassify:
    def test_heisenberg(self, tmp_path, out):
        basis = write_elements(
            tmp_path, "b.json",
            [mono(PLUS, 0, 0), mono(PLUS, 1, 0), mono(MINUS, 1, 0)])
        assert run(["classify", "--basis", basis]) == 0
        doc = out()
        assert doc["catalog"]["name"] == "h1"
        assert doc["dim"] == 3
        assert "fingerprint" in doc

    def test_non_closed_basis_is_domain_error(self, tmp_path):
        basis = write_elements(tmp_path, "b.json",
                               [mono(PLUS, 2, 0), mono(MINUS, 2, 0)])
        assert run(["classify", "--basis", basis]) == 1


class TestEnumerate:
    def test_glossary_record_count(self, tmp_path, out):
        basis = write_elements(tmp_path, "b.json", schrodinger_monomials())
        assert run(["enumerate", "--basis", basis]) == 0
        records = out()
        assert len(records) == 22

    def test_infinite_ambient_is_domain_error(self, tmp_path):
        basis = write_elements(tmp_path, "b.json",
                               [mono(PLUS, 3, 0), mono(MINUS, 3, 0)])
        assert run(["enumerate", "--basis", basis]) == 1


class TestIgusa:
    def test_certificate_emitted(self, tmp_path, out):
        e1 = write_elements(tmp_path, "e1.json", [mono(MINUS, 3, 0)])
        e2 = write_elements(tmp_path, "e2.json", [mono(PLUS, 3, 0)])
        assert run(["igusa", "--e1", e1, "--e2", e2]) == 0
        doc = out()
        assert doc["identity_verdict"] == "inconclusive"
        assert doc["verdict"] == "infinite"
        assert set(doc["sigma"]) == {"s", "phi", "theta"}

    def test_low_degree_is_domain_error(self, tmp_path):
        e1 = write_elements(tmp_path, "e1.json", [mono(PLUS, 2, 0)])
        e2 = write_elements(tmp_path, "e2.json", [mono(PLUS, 3, 0)])
        assert run(["igusa", "--e1", e1, "--e2", e2]) == 1


class TestSimulate:
    def test_wh2_constant(self, tmp_path, out):
        controls = tmp_path / "c.json"
        controls.write_text(json.dumps({
            "preset": "constant", "values": [1.0, 0.1, 0.0],
            "t_final": 0.5, "h": 1e-3,
        }))
        code = run(["simulate", "--algebra", "wh2",
                    "--controls", str(controls), "--fock-dim", "32"])
        assert code == 0
        doc = out()
        assert doc["method"] == "ClosedFormQuadrature"
        assert doc["fidelity_vs_oracle"] > 1 - 1e-6
        assert doc["residual"] < 1e-6

    def test_csv_written(self, tmp_path, out):
        controls = tmp_path / "c.json"
        controls.write_text(json.dumps({
            "preset": "constant", "values": [1.0, 0.0, 0.0],
            "t_final": 0.1, "h": 1e-2,
        }))
        csv = tmp_path / "factors.csv"
        assert run(["simulate", "--algebra", "wh2", "--controls",
                    str(controls), "--fock-dim", "32", "--csv",
                    str(csv)]) == 0
        header = csv.read_text().splitlines()[0]
        assert header == "t,f1,f2,f3,phase"

    def test_algebra_mismatch_is_usage_error(self, tmp_path):
        controls = tmp_path / "c.json"
        controls.write_text(json.dumps({
            "algebra": "wh2", "preset": "constant",
            "values": [1.0, 0.0, 0.0], "t_final": 0.1, "h": 1e-2,
        }))
        assert run(["simulate", "--algebra", "schrodinger",
                    "--controls", str(controls)]) == 2


class TestSelftest:
    def test_passes(self, out):
        assert run(["selftest"]) == 0
        doc = out()
        assert doc["passed"] is True
        assert doc["table1"] == "15/15"
        assert doc["glossary"]["total_spans"] == 22
        assert doc["glossary"]["mismatches"] == {}


class TestErrors:
    def test_missing_file(self):
        assert run(["closure", "--gens", "/nonexistent/g.json"]) == 2

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert run(["closure", "--gens", str(path)]) == 2

    def test_bad_element(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps([{"skew": [{"sigma": "?", "alpha": 1,
                                               "beta": 0, "coeff": "1"}]}]))
        assert run(["closure", "--gens", str(path)]) == 2

    def test_unknown_subcommand_is_usage_error(self, capsys):
        assert run(["frobnicate"]) == 2

    def test_deterministic_output(self, tmp_path, capsys):
        gens = write_elements(tmp_path, "g.json", schrodinger_monomials())
        run(["closure", "--gens", gens])
        first = capsys.readouterr().out
        run(["closure", "--gens", gens])
        assert capsys.readouterr().out == first
