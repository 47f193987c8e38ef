"""Command-line front end: verification commands with JSON reports.

Every report embeds the resolved run configuration, serializes exact
values as canonical field-element strings, and keeps stable key order so
reports are diffable.  Timestamps live in a separate field.  Exit codes:
0 all checks pass, 1 at least one FAIL, 2 input/configuration error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import __version__
from .coeffalg import (a_perp_ideal_check, all_words, commutation_residual,
                       filtration_check, filtration_level_duals,
                       resolution_identity_check, triangular_rank_check)
from .repmod import (build_Nw, check_annihilator, check_factorization,
                     check_reduced_word_independence, check_unitarity,
                     spectra)
from .rootdata import CartanError, Weight, fundamental, validate_cartan
from .uqmod import TruncModule, cross_defect, dual_basis, serre_defect


class CliError(Exception):
    """Input or configuration problem; maps to exit code 2."""


# ---------------------------------------------------------------------------
# Argument parsing helpers


def _parse_matrix(args) -> list[list[int]]:
    if args.cartan:
        try:
            with open(args.cartan, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read Cartan file: {exc}") from exc
        if isinstance(data, dict):
            data = data.get("a")
        if not isinstance(data, list):
            raise CliError("Cartan file must hold a matrix or {'a': matrix}")
        return data
    if args.a:
        try:
            data = json.loads(args.a)
        except json.JSONDecodeError as exc:
            raise CliError(f"--a is not valid JSON: {exc}") from exc
        return data
    raise CliError("provide --a or --cartan")


def _cartan(args):
    try:
        return validate_cartan(_parse_matrix(args))
    except CartanError as exc:
        raise CliError(f"invalid Cartan matrix: {exc}") from exc


def _parse_hw(cd, text: str) -> Weight:
    try:
        dom = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise CliError(f"bad weight {text!r}: {exc}") from exc
    if len(dom) != cd.rank:
        raise CliError(f"weight {text!r} has wrong rank (need {cd.rank})")
    return Weight(dom)


def _parse_word(text: str) -> tuple[int, ...]:
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise CliError(f"bad word {text!r}: {exc}") from exc


def _parse_q(text: str) -> Fraction:
    try:
        q0 = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"bad q value {text!r}: {exc}") from exc
    if not 0 < q0 < 1:
        raise CliError("q must satisfy 0 < q < 1")
    return q0


# ---------------------------------------------------------------------------
# Report plumbing


def _jsonify(obj):
    """Deterministic JSON-ready form: floats round-trip, exacts as text."""
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, complex):
        return {"re": _jsonify(obj.real), "im": _jsonify(obj.imag)}
    if isinstance(obj, float):
        return float(f"{obj:.17g}")
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (int, str, bool)) or obj is None:
        return obj
    return str(obj)


def report_bundle(checks: list, config: dict) -> dict:
    return _jsonify({
        "version": __version__,
        "config": config,
        "checks": checks,
        "summary": {
            "total": len(checks),
            "passed": sum(1 for c in checks if c.get("status") == "PASS"),
            "failed": sum(1 for c in checks if c.get("status") == "FAIL"),
        },
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    })


def _emit(bundle: dict, args) -> int:
    text = json.dumps(bundle, indent=2, sort_keys=True)
    if getattr(args, "json", None):
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    for c in bundle["checks"]:
        print(f"{c.get('check', '?')}: {c.get('status', '?')}")
    if not bundle["checks"]:
        print("no checks run")
    return 0 if bundle["summary"]["failed"] == 0 else 1


def _config_of(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


# ---------------------------------------------------------------------------
# Subcommands


def cmd_cartan_validate(args) -> int:
    cd = _cartan(args)
    info = {
        "check": "cartan_validate",
        "status": "PASS",
        "witness": {
            "rank": cd.rank,
            "affine": cd.affine,
            "symmetrizers": list(cd.d),
            "marks": list(cd.marks) if cd.marks else None,
        },
    }
    return _emit(report_bundle([info], _config_of(args)), args)


def cmd_module_build(args) -> int:
    cd = _cartan(args)
    hw = _parse_hw(cd, args.hw)
    m = TruncModule(cd, hw, args.depth)
    dims = {",".join(map(str, b)): d for b, d in sorted(m.dims().items())}
    rep = {
        "check": "module_build",
        "status": "PASS",
        "witness": {
            "hw": list(hw.dom),
            "depth": args.depth,
            "dimensions": dims,
            "total_dim": sum(m.dims().values()),
        },
    }
    return _emit(report_bundle([rep], _config_of(args)), args)


def cmd_verify_serre(args) -> int:
    cd = _cartan(args)
    m = TruncModule(cd, _parse_hw(cd, args.hw), args.depth)
    checks = []
    for i in cd.nodes:
        for j in cd.nodes:
            if i != j:
                rep = serre_defect(m, i, j)
                bad = sum(rep[k]["nonzero_defects"] for k in rep)
                checks.append({"check": f"serre_{i}{j}",
                               "status": "PASS" if bad == 0 else "FAIL",
                               "witness": rep})
            rep = cross_defect(m, i, j)
            checks.append({"check": f"cross_{i}{j}",
                           "status": "PASS" if rep["nonzero_defects"] == 0
                           else "FAIL",
                           "witness": rep})
    return _emit(report_bundle(checks, _config_of(args)), args)


def cmd_verify_triangular(args) -> int:
    cd = _cartan(args)
    m_plus = TruncModule(cd, _parse_hw(cd, args.hw), args.depth)
    m_minus = (m_plus if args.hw2 is None else
               TruncModule(cd, _parse_hw(cd, args.hw2), args.depth))
    rep = triangular_rank_check(m_plus, m_minus, args.maxlen)
    return _emit(report_bundle([rep], _config_of(args)), args)


def cmd_verify_commute(args) -> int:
    cd = _cartan(args)
    m_s = TruncModule(cd, _parse_hw(cd, args.hw), args.depth)
    m_p = (m_s if args.hw2 is None else
           TruncModule(cd, _parse_hw(cd, args.hw2), args.depth))
    checks = []
    for b_lam in sorted(m_s.betas):
        if sum(b_lam) > args.max_height:
            continue
        for l_lam in dual_basis(m_s, b_lam):
            for b_mu in sorted(m_p.betas):
                if not 0 < sum(b_mu) <= args.max_height:
                    continue
                for l_mu in dual_basis(m_p, b_mu):
                    rep = commutation_residual(m_s, m_p, l_lam, l_mu,
                                               m_p.highest_vec(), args.maxlen)
                    rep["check"] = (f"commute_{'_'.join(map(str, b_lam))}"
                                    f"__{'_'.join(map(str, b_mu))}")
                    checks.append(rep)
    return _emit(report_bundle(checks, _config_of(args)), args)


def cmd_verify_resolve(args) -> int:
    cd = _cartan(args)
    m = TruncModule(cd, _parse_hw(cd, args.hw), args.depth)
    words = list(all_words(cd, args.maxlen))
    bad = sum(0 if resolution_identity_check(m, w).is_zero() else 1
              for w in words)
    rep = {"check": "resolution_of_identity",
           "status": "PASS" if bad == 0 else "FAIL",
           "witness": {"words": len(words), "nonzero_residuals": bad}}
    return _emit(report_bundle([rep], _config_of(args)), args)


def cmd_verify_filtration(args) -> int:
    cd = _cartan(args)
    m = TruncModule(cd, _parse_hw(cd, args.hw), args.depth)
    checks = []
    for level in args.levels:
        duals = [l for l in filtration_level_duals(m, level)
                 if sum(l.beta) == level]
        for xi in duals:
            for xi_p in filtration_level_duals(m, max(args.levels)):
                rep = filtration_check(m, m, xi, xi_p, level, args.maxlen)
                rep["check"] = (f"filtration_l{level}_"
                                f"{'_'.join(map(str, xi.beta))}__"
                                f"{'_'.join(map(str, xi_p.beta))}")
                checks.append(rep)
    return _emit(report_bundle(checks, _config_of(args)), args)


def cmd_verify_aperp(args) -> int:
    cd = _cartan(args)
    m_perp = TruncModule(cd, _parse_hw(cd, args.hw), args.depth)
    m_probe = (m_perp if args.hw2 is None else
               TruncModule(cd, _parse_hw(cd, args.hw2), args.depth))
    rep = a_perp_ideal_check(m_perp, m_probe, args.maxlen)
    return _emit(report_bundle([rep], _config_of(args)), args)


# ---- rep subcommands ------------------------------------------------------


def _rep_from_args(args):
    cd = _cartan(args)
    word = _parse_word(args.word)
    return cd, build_Nw(cd, word, args.K, _parse_q(args.q))


def _validate_rep_file(path: str) -> None:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read rep file: {exc}") from exc
    if not isinstance(data, dict) or "factors" not in data:
        raise CliError("rep file is missing the 'factors' field")
    for f in data["factors"]:
        needed = {"node", "dim_cap", "generators"}
        if not isinstance(f, dict) or not needed <= set(f):
            raise CliError("rep file factor entries are malformed")
        K = f["dim_cap"]
        for name, mat in f["generators"].items():
            if (len(mat) != K or any(len(row) != K for row in mat)):
                raise CliError(f"generator {name} has wrong shape")


def cmd_rep_build(args) -> int:
    cd, rep = _rep_from_args(args)
    factors = []
    for f in rep.factors:
        factors.append({
            "node": f.node,
            "symmetrizer": f.d,
            "dim_cap": f.dim_cap,
            "q0": str(f.q0),
            "char_twist": complex(f.char_twist),
            "generators": {name: [[complex(x) for x in row] for row in M]
                           for name, M in f.gens.items()},
        })
    out = {"check": "rep_build", "status": "PASS",
           "witness": {"word": list(rep.word), "dim": rep.dim}}
    bundle = report_bundle([out], _config_of(args))
    bundle["factors"] = _jsonify(factors)
    return _emit(bundle, args)


def cmd_rep_spectra(args) -> int:
    if args.rep_file:
        _validate_rep_file(args.rep_file)
    cd, rep = _rep_from_args(args)
    hw = _parse_hw(cd, args.hw)
    sp = spectra(rep, hw, args.depth, margin=args.margin)
    mods = [abs(e) for e, _ in sp]
    out = {"check": "rep_spectra",
           "status": "PASS" if max(mods) <= 1 + 1e-9 else "FAIL",
           "witness": {
               "eigenvalues": [{"value": e, "weight_label": g}
                               for e, g in sp],
               "max_modulus": max(mods),
               "skipped_pairs": rep.skipped_pairs,
           }}
    return _emit(report_bundle([out], _config_of(args)), args)


def cmd_rep_verify_tensor(args) -> int:
    if args.rep_file:
        _validate_rep_file(args.rep_file)
    cd = _cartan(args)
    word = _parse_word(args.word)
    if len(word) < 2 or word[0] != args.i:
        raise CliError("--word must start with --i and have length >= 2")
    hw = _parse_hw(cd, args.hw)
    rep = check_factorization(cd, args.i, word[1:], hw, args.K,
                              _parse_q(args.q), args.depth, tol=args.tol)
    return _emit(report_bundle([rep], _config_of(args)), args)


def cmd_rep_verify_annihilator(args) -> int:
    cd = _cartan(args)
    hw = _parse_hw(cd, args.hw)
    rep = check_annihilator(cd, _parse_word(args.word), hw, args.depth,
                            args.K, _parse_q(args.q), margin=args.margin,
                            tol=args.tol)
    return _emit(report_bundle([rep], _config_of(args)), args)


def cmd_rep_verify_unitary(args) -> int:
    cd, rep = _rep_from_args(args)
    hw = _parse_hw(cd, args.hw)
    out = check_unitarity(rep, hw, args.depth, max_height=args.max_height,
                          margin=args.margin, tol=args.tol)
    return _emit(report_bundle([out], _config_of(args)), args)


def cmd_rep_verify_words(args) -> int:
    cd = _cartan(args)
    hws = [fundamental(cd, 0)] if args.hw is None else [
        _parse_hw(cd, args.hw)]
    rep = check_reduced_word_independence(
        cd, _parse_word(args.word), _parse_word(args.word2), hws,
        args.K, _parse_q(args.q), args.depth, margin=args.margin,
        tol=args.tol)
    return _emit(report_bundle([rep], _config_of(args)), args)


def cmd_suite_acceptance(args) -> int:
    from .acceptance import CRITERIA
    threads = max(1, int(os.environ.get("QKM_THREADS", "1")))
    t0 = time.time()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            checks = list(pool.map(lambda nf: nf[1](), CRITERIA))
    else:
        checks = [fn() for _, fn in CRITERIA]
    bundle = report_bundle(checks, _config_of(args))
    bundle["wall_seconds"] = _jsonify(time.time() - t0)
    return _emit(bundle, args)


# ---------------------------------------------------------------------------
# Parser assembly


def _add_cartan_opts(p):
    p.add_argument("--a", help="Cartan matrix as inline JSON")
    p.add_argument("--cartan", help="path to a JSON file with the matrix")


def _add_common(p, *, hw=True, depth=None, maxlen=None):
    _add_cartan_opts(p)
    if hw:
        p.add_argument("--hw", required=True,
                       help="dominant weight, comma separated")
    if depth is not None:
        p.add_argument("--depth", type=int, default=depth)
    if maxlen is not None:
        p.add_argument("--maxlen", type=int, default=maxlen)
    p.add_argument("--json", help="write the JSON report here")


def _add_rep_common(p):
    _add_cartan_opts(p)
    p.add_argument("--word", required=True,
                   help="reduced word, comma separated node indices")
    p.add_argument("--K", type=int, default=8, help="per-leg dimension cap")
    p.add_argument("--q", default="1/2", help="rational q0 in (0,1)")
    p.add_argument("--json", help="write the JSON report here")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qkm",
        description="Verification toolkit for quantized function algebras "
                    "of affine Kac-Moody algebras at finite truncation depth.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cartan", help="Cartan matrix utilities")
    s = p.add_subparsers(dest="subcommand", required=True)
    pc = s.add_parser("validate", help="validate a generalized Cartan matrix")
    _add_cartan_opts(pc)
    pc.add_argument("--json")
    pc.set_defaults(func=cmd_cartan_validate)

    p = sub.add_parser("module", help="highest-weight module utilities")
    s = p.add_subparsers(dest="subcommand", required=True)
    pm = s.add_parser("build", help="build a truncated module, report dims")
    _add_common(pm, depth=3)
    pm.set_defaults(func=cmd_module_build)

    p = sub.add_parser("verify", help="structural identity checks")
    s = p.add_subparsers(dest="subcommand", required=True)
    pv = s.add_parser("serre", help="quantum Serre and cross relations")
    _add_common(pv, depth=4)
    pv.set_defaults(func=cmd_verify_serre)
    pv = s.add_parser("triangular", help="independence of mixed products")
    _add_common(pv, depth=2, maxlen=4)
    pv.add_argument("--hw2", help="second dominant weight (default: --hw)")
    pv.set_defaults(func=cmd_verify_triangular)
    pv = s.add_parser("commute", help="q-commutation up to corrections")
    _add_common(pv, depth=2, maxlen=4)
    pv.add_argument("--hw2")
    pv.add_argument("--max-height", type=int, default=2)
    pv.set_defaults(func=cmd_verify_commute)
    pv = s.add_parser("resolve", help="resolution of the identity")
    _add_common(pv, depth=3, maxlen=3)
    pv.set_defaults(func=cmd_verify_resolve)
    pv = s.add_parser("filtration", help="filtration congruence")
    _add_common(pv, depth=3, maxlen=4)
    pv.add_argument("--levels", type=lambda t: [int(x) for x in t.split(",")],
                    default=[0, 1, 2])
    pv.set_defaults(func=cmd_verify_filtration)
    pv = s.add_parser("aperp", help="positive-level coefficient ideal")
    _add_common(pv, depth=2, maxlen=4)
    pv.add_argument("--hw2")
    pv.set_defaults(func=cmd_verify_aperp)

    p = sub.add_parser("rep", help="tensor-module commands")
    s = p.add_subparsers(dest="subcommand", required=True)
    pr = s.add_parser("build", help="build and serialize a tensor module")
    _add_rep_common(pr)
    pr.set_defaults(func=cmd_rep_build)
    pr = s.add_parser("spectra", help="extremal-operator spectrum")
    _add_rep_common(pr)
    pr.add_argument("--hw", required=True)
    pr.add_argument("--depth", type=int, default=4)
    pr.add_argument("--margin", type=int, default=2)
    pr.add_argument("--rep-file", help="serialized module to validate first")
    pr.set_defaults(func=cmd_rep_spectra)
    pr = s.add_parser("verify-tensor", help="leading-leg factorization")
    _add_rep_common(pr)
    pr.add_argument("--i", type=int, required=True,
                    help="leading reflection index")
    pr.add_argument("--hw", required=True)
    pr.add_argument("--depth", type=int, default=3)
    pr.add_argument("--tol", type=float, default=1e-10)
    pr.add_argument("--rep-file")
    pr.set_defaults(func=cmd_rep_verify_tensor)
    pr = s.add_parser("verify-annihilator", help="Demazure-complement kernel")
    _add_rep_common(pr)
    pr.add_argument("--hw", required=True)
    pr.add_argument("--depth", type=int, default=4)
    pr.add_argument("--margin", type=int, default=2)
    pr.add_argument("--tol", type=float, default=1e-10)
    pr.set_defaults(func=cmd_rep_verify_annihilator)
    pr = s.add_parser("verify-unitary", help="adjoint compatibility")
    _add_rep_common(pr)
    pr.add_argument("--hw", required=True)
    pr.add_argument("--depth", type=int, default=3)
    pr.add_argument("--max-height", type=int, default=2)
    pr.add_argument("--margin", type=int, default=2)
    pr.add_argument("--tol", type=float, default=1e-9)
    pr.set_defaults(func=cmd_rep_verify_unitary)
    pr = s.add_parser("verify-words", help="reduced-word independence")
    _add_rep_common(pr)
    pr.add_argument("--word2", required=True)
    pr.add_argument("--hw", help="probe weight (default: first fundamental)")
    pr.add_argument("--depth", type=int, default=3)
    pr.add_argument("--margin", type=int, default=2)
    pr.add_argument("--tol", type=float, default=1e-6)
    pr.set_defaults(func=cmd_rep_verify_words)

    p = sub.add_parser("suite", help="bundled verification suites")
    s = p.add_subparsers(dest="subcommand", required=True)
    ps = s.add_parser("acceptance", help="run all twelve acceptance checks")
    ps.add_argument("--json")
    ps.set_defaults(func=cmd_suite_acceptance)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, CartanError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
