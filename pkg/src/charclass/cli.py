"""Command-line front end.

Exit status: 0 success, 1 verify-paper found a failing criterion, 2 domain
error, 64 usage or parse error, 66 fixture not found.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from sympy import isprime

from . import __version__
from .acceptance import FAIL, WARN, CriterionResult, render, verify
from .algebra import bso, parse_bso_name, pontryagin_ring
from .errors import CharClassError, FixtureNotFoundError, ParseError
from .fixtures import load_bordism, load_model, load_table
from .genus import (
    GENUS_KINDS,
    ScalingReport,
    characteristic_sequence,
    genus_product,
    genus_series,
    multiplicative_sequence,
    scaling_relation_report,
)
from .invariants import (
    STANDARD_MANIFOLDS,
    ManifoldDescriptor,
    Pi0Report,
    euler_characteristic,
    kervaire_semicharacteristic,
    pi0_report,
    splitting_value,
    vanishing_primes,
    wu_vanishing_degrees,
)
from .steenrod import (
    Discrepancy,
    SplittingReport,
    compare_tables,
    derive_table_splitting,
    sign_pattern,
    splitting_obstruction,
    total_power,
    wu_coefficient,
    wu_formula_vs_oracle,
    wu_series,
)
from .thom import mmm_class, parse_thom, signature_via_L, tangent_class

EXIT_OK, EXIT_FAILED, EXIT_DOMAIN, EXIT_USAGE, EXIT_NOINPUT = 0, 1, 2, 64, 66


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting, so usage errors map to 64."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _odd_prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if p == 2 or not isprime(p):
        raise argparse.ArgumentTypeError(f"{p} is not an odd prime")
    return p


def _degree(text: str) -> int:
    try:
        d = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if d < 0:
        raise argparse.ArgumentTypeError("degree must be nonnegative")
    return d


def _positive(text: str) -> int:
    d = _degree(text)
    if d == 0:
        raise argparse.ArgumentTypeError("must be positive")
    return d


def build_parser() -> Parser:
    parser = Parser(prog="charclass", description="Exact characteristic-class computations.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--json", action="store_true", help="emit a JSON report")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    p = sub.add_parser("lclass", help="Hirzebruch L-class components")
    p.add_argument("--max-degree", type=_degree, default=16)
    p.add_argument("--bso", type=_positive, default=None, help="reduce in H*(BSO(n)) instead of the stable ring")

    p = sub.add_parser("genus", help="components of a genus, or the Ltilde/L scaling report")
    p.add_argument("--kind", choices=GENUS_KINDS, default="L")
    p.add_argument("--max-degree", type=_degree, default=16)
    p.add_argument("--m", type=_positive, default=None, help="number of roots for a product genus (Ltilde)")
    p.add_argument("--scaling", action="store_true", help="report Ltilde_4k / L_4k on BSO(2m) for k <= --k")
    p.add_argument("--k", type=_positive, default=3)

    p = sub.add_parser("mmm", help="generalized MMM class f_!(c(T_v)) on a model fixture")
    p.add_argument("--model", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--class", dest="cls", help="polynomial in the vertical classes, e.g. 'p1^2'")
    g.add_argument("--genus", choices=("L", "inv_linear", "total_p"))

    p = sub.add_parser("signature", help="signature of a model's total space via L")
    p.add_argument("--model", required=True)

    p = sub.add_parser("steenrod", help="Steenrod tables: splitting obstruction, comparison, total powers")
    p.add_argument("--table", default="paper-verbatim-p3")
    p.add_argument("--prop63", dest="obstruction", action="store_true", help="evaluate Q = P^3 - P^2 P^1 on u_-4")
    p.add_argument("--compare", action="store_true", help="compare the table against the root oracle")
    p.add_argument("--apply", metavar="EXPR", help="total power of a class, e.g. 'p1*p2' or 'u_-4*p1'")
    p.add_argument("--max-i", type=_degree, default=3)

    p = sub.add_parser("wu", help="Wu series coefficients and the printed-formula check")
    p.add_argument("--p", type=_odd_prime, required=True)
    p.add_argument("--max-i", type=_degree, default=6)
    p.add_argument("--compare", action="store_true", help="compare P(u_-3 p1) with the root oracle")
    p.add_argument("--kmax", type=_positive, default=None, help="also list the degrees k covered at p")

    p = sub.add_parser("primes", help="primes for which the kappa coefficient is a unit")
    p.add_argument("--k", type=_positive, default=None)
    p.add_argument("--kmax", type=_positive, default=None, help="TSV table for k = 1..kmax")
    p.add_argument("--bound", type=_positive, default=100)

    p = sub.add_parser("pi0", help="pi_0(MTSO(n)) from the bordism fixture")
    p.add_argument("--n", type=_positive, action="append", required=True)
    p.add_argument("--bordism", default="bordism")

    p = sub.add_parser("invariants", help="Euler characteristic, semi-characteristic and splitting value")
    p.add_argument("--manifold", choices=sorted(STANDARD_MANIFOLDS))
    p.add_argument("--betti", help="comma-separated Betti numbers b_0..b_n")
    p.add_argument("--signature", type=int, default=0)
    p.add_argument("--name", default="M")

    p = sub.add_parser("verify-paper", help="run every acceptance criterion")
    p.add_argument("--only", action="append", help="restrict to criterion numbers")
    return parser


# --------------------------------------------------------------------------
# commands; each returns (inputs, results, warnings, text lines)

def _cmd_lclass(a):
    D = a.max_degree
    if a.bso:
        ring = bso(a.bso, None, max(D, 64))
        total = characteristic_sequence("L", ring, D)
        comps, label = total.components(), ring.name
    else:
        num_p = max(1, D // 4)
        seq = multiplicative_sequence(genus_series("L", D // 4), num_p, D)
        comps, label = dict(seq), f"Q[p1..p{num_p}]"
    rows = [{"degree": d, "class": str(comps.get(d, "0")), "ring": label} for d in range(4, D + 1, 4)]
    text = ["degree\tL"] + [f"{r['degree']}\t{r['class']}" for r in rows]
    return {"max_degree": D, "bso": a.bso}, rows, [], text


def _cmd_genus(a):
    if a.scaling:
        m = a.m or 3
        reps = [scaling_relation_report(mm, k) for mm in range(1, m + 1) for k in range(1, a.k + 1)]
        warnings = [f"m={r.m}, k={r.k}: computed 2^{r.exponent}, printed 2^{r.printed_exponent}" for r in reps if not r.agrees]
        text = ["m\tk\tratio\texponent\tprinted"] + [
            f"{r.m}\t{r.k}\t{r.ratio}\t{r.exponent}\t{r.printed_exponent}" for r in reps
        ]
        return {"scaling": True, "m": m, "k": a.k}, [r.to_dict() for r in reps], warnings, text
    D = a.max_degree
    series = genus_series(a.kind, D // 4)
    if a.m is not None:
        seq = genus_product(series, a.m, D)
        label = f"Q[p1..p{a.m}]"
    elif series[0] != 1:
        raise CharClassError(f"{a.kind} has Q(0) != 1; pass --m for the product over m roots")
    else:
        num_p = max(1, D // 4)
        seq = multiplicative_sequence(series, num_p, D)
        label = f"Q[p1..p{num_p}]"
    rows = [{"degree": d, "class": str(seq[d]), "ring": label} for d in range(0, D + 1, 4) if seq[d]]
    text = [f"degree\t{a.kind}"] + [f"{r['degree']}\t{r['class']}" for r in rows]
    return {"kind": a.kind, "max_degree": D, "m": a.m}, rows, [], text


def _cmd_mmm(a):
    model = load_model(a.model)
    vring = model.vertical_ring
    if a.cls is not None:
        c = vring.parse(a.cls)
        label = a.cls
    else:
        top = (model.base_dim or model.base.truncation) + model.fibre_dim
        c = characteristic_sequence(a.genus, vring, top)
        label = a.genus
    kappa = mmm_class(model, c)
    rows = [{"model": model.name, "class": label, "kappa": str(kappa)}]
    return {"model": a.model, "class": label}, rows, [], [f"kappa_{label} = {kappa}"]


def _cmd_signature(a):
    model = load_model(a.model)
    sig = signature_via_L(model)
    rows = [{"model": model.name, "L_base": str(tangent_class(model, "L")), "signature": str(sig)}]
    return {"model": a.model}, rows, [], [f"L(TB) = {rows[0]['L_base']}", f"signature = {sig}"]


def _cmd_steenrod(a):
    table = load_table(a.table)
    results, warnings, text = [], [], []
    if not (a.obstruction or a.compare or a.apply):
        a.obstruction = True
    if a.compare:
        oracle = derive_table_splitting(parse_bso_name(table.ring.name), table.prime)
        diffs = compare_tables(table, oracle)
        for d in diffs:
            results.append({"discrepancy": d.to_dict()})
            text.append(f"{d.what}\tconfigured: {d.configured}\toracle: {d.oracle}\t{d.kind}")
        pattern = sign_pattern(diffs)
        if pattern:
            warnings.append("table differs from the root oracle: " + ", ".join(f"{k} {v}" for k, v in pattern.items()))
        text.append(f"{len(diffs)} discrepancies")
    if a.apply:
        x = parse_thom(a.apply, table.ring) if "u_" in a.apply else table.ring.parse(a.apply)
        res = total_power(x, table, a.max_i)
        results.append({"total_power": res.to_dict()})
        text.append(f"P({res.input}):")
        text += [f"  P^{i} = {c}" for i, c in sorted(res.components.items())]
    if a.obstruction:
        rep = splitting_obstruction(table)
        results.append({"splitting": rep.to_dict()})
        text += [f"table: {table.name} (p = {table.prime}, {table.ring.name})", rep.summary()]
    return {"table": a.table, "obstruction": a.obstruction, "compare": a.compare, "apply": a.apply}, results, warnings, text


def _cmd_wu(a):
    p = a.p
    series = wu_series(p, (p - 1) // 2 * a.max_i + 1)
    rows = [{"p": p, "i": i, "coefficient": int(wu_coefficient(p, i))} for i in range(a.max_i + 1)]
    text = [f"series: {series.to_str('z')}", "i\tcoefficient mod p"] + [f"{r['i']}\t{r['coefficient']}" for r in rows]
    warnings = []
    if a.compare:
        for i, printed, derived in wu_formula_vs_oracle(p, 1, min(a.max_i, 4)):
            warnings.append(f"P^{i}(u_-3*p1): printed formula {printed}, root oracle {derived}")
    if a.kmax:
        ks = wu_vanishing_degrees(p, a.kmax)
        rows.append({"p": p, "degrees": ks})
        text.append("degrees: " + " ".join(map(str, ks)))
    return {"p": p, "max_i": a.max_i, "compare": a.compare, "kmax": a.kmax}, rows, warnings, text


def _cmd_primes(a):
    if a.k is None and a.kmax is None:
        raise UsageError("primes: one of --k or --kmax is required")
    if a.k is not None:
        ps = vanishing_primes(a.k, a.bound)
        rows = [{"k": a.k, "primes": ps}]
        text = [" ".join(map(str, ps))]
    else:
        rows = [{"k": k, "primes": vanishing_primes(k, a.bound)} for k in range(1, a.kmax + 1)]
        text = ["k\tprimes"] + [f"{r['k']}\t{' '.join(map(str, r['primes']))}" for r in rows]
    return {"k": a.k, "kmax": a.kmax, "bound": a.bound}, rows, [], text


def _cmd_pi0(a):
    table = load_bordism(a.bordism)
    rows, text = [], ["n\tZ/eul_(n+1)\tOmega_n\tpi_0\tsplitting"]
    for n in a.n:
        try:
            rep = pi0_report(n, table)
        except KeyError as exc:
            raise CharClassError(str(exc.args[0])) from exc
        rows.append(rep.to_dict())
        text.append(f"{rep.n}\t{rep.torsion}\t{rep.bordism}\t{rep.group}\t{rep.splitting}")
    return {"n": a.n, "bordism": a.bordism}, rows, [], text


def _cmd_invariants(a):
    if a.manifold:
        M = STANDARD_MANIFOLDS[a.manifold]
    elif a.betti:
        try:
            betti = tuple(int(x) for x in a.betti.split(","))
        except ValueError:
            raise UsageError(f"invariants: bad Betti list {a.betti!r}")
        M = ManifoldDescriptor(a.name, len(betti) - 1, betti, a.signature)
    else:
        raise UsageError("invariants: one of --manifold or --betti is required")
    row = {"descriptor": M.to_dict(), "euler": euler_characteristic(M)}
    row["kerv"] = kervaire_semicharacteristic(M) if M.dim % 4 == 1 else None
    row["splitting"] = None if M.dim % 4 == 3 else splitting_value(M)
    text = [f"{M.name}: dim {M.dim}, betti {list(M.betti)}, signature {M.signature}",
            f"euler\t{row['euler']}"]
    if row["kerv"] is not None:
        text.append(f"kerv\t{row['kerv']}")
    text.append(f"splitting\t{'none needed' if row['splitting'] is None else row['splitting']}")
    return {"descriptor": M.to_dict()}, [row], [], text


def _cmd_verify(a):
    results = verify(a.only)
    warnings = [f"criterion {r.number}: {w}" for r in results for w in r.warnings]
    failed = [r.number for r in results if r.status == FAIL]
    warned = [r.number for r in results if r.status == WARN]
    text = [render(results), f"verify-paper: {len(results)} criteria, {len(failed)} failed, {len(warned)} warned"]
    return {"only": a.only}, [r.to_dict() for r in results], warnings, text


COMMANDS = {
    "lclass": _cmd_lclass, "genus": _cmd_genus, "mmm": _cmd_mmm, "signature": _cmd_signature,
    "steenrod": _cmd_steenrod, "wu": _cmd_wu, "primes": _cmd_primes, "pi0": _cmd_pi0,
    "invariants": _cmd_invariants, "verify-paper": _cmd_verify,
}


# --------------------------------------------------------------------------
# JSON round trip

def decode_results(command: str, results: list) -> list:
    """Rebuild typed objects from the ``results`` of a JSON report."""
    out = []
    for r in results:
        if command in ("lclass", "genus") and "degree" in r:
            ring = bso(parse_bso_name(r["ring"])) if r["ring"].startswith("BSO") else pontryagin_ring(
                int(r["ring"].split("..p")[1].rstrip("]")))
            out.append(ring.parse(r["class"]))
        elif command == "genus":
            out.append(ScalingReport.from_dict(r))
        elif command == "mmm":
            out.append(load_model(r["model"]).base.parse(r["kappa"]))
        elif command == "signature":
            out.append(Fraction(r["signature"]))
        elif command == "steenrod":
            if "splitting" in r:
                out.append(SplittingReport.from_dict(r["splitting"]))
            elif "discrepancy" in r:
                out.append(Discrepancy(**r["discrepancy"]))
            else:
                out.append(r["total_power"])
        elif command == "wu":
            out.append(r)
        elif command == "primes":
            out.append((r["k"], list(r["primes"])))
        elif command == "pi0":
            out.append(Pi0Report.from_dict(r))
        elif command == "invariants":
            out.append(ManifoldDescriptor.from_dict(r["descriptor"]))
        elif command == "verify-paper":
            out.append(CriterionResult.from_dict(r))
        else:
            raise ParseError(f"unknown command {command!r}")
    return out


def _emit(doc: dict, text: list[str], as_json: bool, stream) -> None:
    if as_json:
        stream.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    else:
        for line in text:
            stream.write(line + "\n")
        if doc["command"] != "verify-paper":  # the rendered table already lists them
            for w in doc.get("warnings", []):
                stream.write(f"warning: {w}\n")


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = "--json" in argv
    command = None
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        inputs, results, warnings, text = COMMANDS[command](args)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except UsageError as exc:
        return _error(command, exc, "usage", EXIT_USAGE, as_json, stdout, stderr)
    except ParseError as exc:
        return _error(command, exc, "parse", EXIT_USAGE, as_json, stdout, stderr)
    except FixtureNotFoundError as exc:
        return _error(command, exc, "fixture", EXIT_NOINPUT, as_json, stdout, stderr)
    except (CharClassError, ValueError, ZeroDivisionError) as exc:
        return _error(command, exc, "domain", EXIT_DOMAIN, as_json, stdout, stderr)
    doc = {"command": command, "inputs": inputs, "results": results, "warnings": warnings}
    _emit(doc, text, as_json, stdout)
    if command == "verify-paper" and any(r["status"] == FAIL for r in results):
        return EXIT_FAILED
    return EXIT_OK


def _error(command, exc, kind, code, as_json, stdout, stderr) -> int:
    err = {"type": type(exc).__name__, "kind": kind, "message": str(exc), "exit": code}
    if as_json:
        doc = {"command": command, "inputs": {}, "results": [], "warnings": [], "error": err}
        stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        stderr.write(f"charclass: {kind} error: {exc}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
