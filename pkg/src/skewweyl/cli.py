"""Command-line interface.

Every subcommand reads JSON (files or flags) and writes a JSON document to
stdout.  Exit codes: 0 success, 1 domain error (a precondition of the
underlying operation failed), 2 usage error (bad flags or malformed input).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List

import numpy as np

from .lie_engine import Budget, LieSpan, bracket, lie_closure
from .weyl_core import SkewPoly, schrodinger_monomials, skew_from_json


class DomainError(Exception):
    pass


class InputError(Exception):
    pass


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}, "
                         f"column {exc.colno}")


def _load_elements(path: str) -> List[SkewPoly]:
    obj = _load_json(path)
    if isinstance(obj, dict) and "generators" in obj:
        obj = obj["generators"]
    if isinstance(obj, dict):
        obj = [obj]
    if not isinstance(obj, list):
        raise InputError(f"{path}: expected an element list or "
                         '{"generators": [...]}')
    out = []
    for k, entry in enumerate(obj):
        try:
            out.append(skew_from_json(entry))
        except (ValueError, KeyError, TypeError) as exc:
            raise InputError(f"{path}: element {k}: {exc}")
    return out


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_closure(args) -> int:
    gens = _load_elements(args.gens)
    out = lie_closure(gens, Budget(args.budget_dim, args.budget_deg))
    _emit(out.to_json())
    return 0


def _cmd_classify(args) -> int:
    from .classify import fingerprint, identify

    basis = _load_elements(args.basis)
    span = LieSpan(basis)
    entry = identify(span)
    _emit({"dim": span.dim,
           "fingerprint": fingerprint(span).to_json(),
           "catalog": entry.to_json()})
    return 0


def _cmd_enumerate(args) -> int:
    from .enumerate import enumerate_subalgebras

    basis = _load_elements(args.basis)
    records = enumerate_subalgebras(basis)
    _emit([r.to_json() for r in records])
    return 0


def _cmd_igusa(args) -> int:
    from .igusa import identity_check, symplectic_search

    (e1,) = _load_elements(args.e1)
    (e2,) = _load_elements(args.e2)
    verdict = identity_check(e1, e2)
    cert = symplectic_search(e1, e2, samples=args.samples, seed=args.seed)
    out = {"identity_verdict": verdict}
    if cert is not None:
        out.update(cert.to_json())
    else:
        out["verdict"] = "inconclusive"
    _emit(out)
    return 0


def _cmd_simulate(args) -> int:
    from .fock_oracle import direct_propagator, state_fidelity
    from .wei_norman import (ControlSpec, factored_propagator, residual_check,
                             schrodinger_factors, wh2_factors)

    obj = _load_json(args.controls)
    obj.setdefault("algebra", args.algebra)
    if obj["algebra"] != args.algebra:
        raise InputError("--algebra disagrees with the controls file")
    try:
        spec = ControlSpec.from_json(obj)
    except (KeyError, ValueError) as exc:
        raise InputError(f"{args.controls}: {exc}")
    sol = wh2_factors(spec) if spec.algebra == "wh2" else schrodinger_factors(spec)
    N = args.fock_dim
    U_fac = factored_propagator(sol, sol.f.shape[1] - 1, N)
    U_dir = direct_propagator(spec, N)
    psi0 = np.zeros(N)
    psi0[0] = 1.0
    out = {
        "algebra": spec.algebra,
        "grid": {"h": spec.h, "n_steps": spec.n_steps},
        "method": sol.method,
        "f": sol.f.tolist(),
        "phase": sol.phase.tolist(),
        "residual": residual_check(spec, sol),
        "fidelity_vs_oracle": state_fidelity(U_dir @ psi0, U_fac @ psi0),
    }
    if sol.error_estimate is not None:
        out["error_estimate"] = sol.error_estimate
    if args.csv:
        header = ",".join(
            ["t"] + [f"f{j + 1}" for j in range(sol.f.shape[0])] + ["phase"]
        )
        rows = np.column_stack([sol.grid, sol.f.T, sol.phase])
        np.savetxt(args.csv, rows, delimiter=",", header=header, comments="")
    _emit(out)
    return 0


def _cmd_selftest(args) -> int:
    from .classify import reference_structure
    from .enumerate import GLOSSARY_NONABELIAN_COUNTS, glossary_report

    report = {}
    basis = schrodinger_monomials()
    span = LieSpan(basis)
    ref = reference_structure("Schrodinger")
    ok = 0
    failures = []
    for i in range(6):
        for j in range(i + 1, 6):
            got = span.coordinates(bracket(basis[i], basis[j]))
            want = [Fraction(c) for c in ref.table[i][j]]
            if got == want:
                ok += 1
            else:
                failures.append({"pair": [i, j],
                                 "got": [str(c) for c in (got or [])],
                                 "want": [str(c) for c in want]})
    report["table1"] = f"{ok}/15"
    gl = glossary_report()
    report["glossary"] = {
        "total_spans": gl["total_spans"],
        "dims": gl["dims"],
        "mismatches": gl["mismatches"],
    }
    passed = (ok == 15 and gl["total_spans"] == 22 and not gl["mismatches"])
    report["passed"] = passed
    if failures:
        report["table1_failures"] = failures
    _emit(report)
    return 0 if passed else 1


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="skewweyl",
        description="Exact Lie-algebraic tools for the single-mode "
                    "skew-hermitian Weyl algebra.",
        epilog="Exit codes: 0 success, 1 domain error, 2 usage/input error. "
               "WEYL_LIE_THREADS caps enumeration parallelism.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("closure", help="Lie closure of a generator set")
    c.add_argument("--gens", required=True)
    c.add_argument("--budget-dim", type=int, default=64)
    c.add_argument("--budget-deg", type=int, default=24)
    c.set_defaults(fn=_cmd_closure)

    c = sub.add_parser("classify", help="fingerprint and catalog match")
    c.add_argument("--basis", required=True)
    c.set_defaults(fn=_cmd_classify)

    c = sub.add_parser("enumerate", help="all subset-generated subalgebras")
    c.add_argument("--basis", required=True)
    c.set_defaults(fn=_cmd_enumerate)

    c = sub.add_parser("igusa", help="two-element infiniteness certificate")
    c.add_argument("--e1", required=True)
    c.add_argument("--e2", required=True)
    c.add_argument("--samples", type=int, default=256)
    c.add_argument("--seed", type=int, default=7)
    c.set_defaults(fn=_cmd_igusa)

    c = sub.add_parser("simulate", help="factorized dynamics vs oracle")
    c.add_argument("--algebra", required=True, choices=["wh2", "schrodinger"])
    c.add_argument("--controls", required=True)
    c.add_argument("--fock-dim", type=int, default=64)
    c.add_argument("--csv", default=None)
    c.set_defaults(fn=_cmd_simulate)

    c = sub.add_parser("selftest", help="bracket table and glossary checks")
    c.set_defaults(fn=_cmd_selftest)
    return p


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
