"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 validation failure, 3 oracle
disagreement.  ``--json`` prints the full report; plain output is a flattened view
of the same content.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import arrangements as arr
from . import cones, germ, mhs
from .dgla import (
    PreconditionError, WDGLAFormatError, check_dgla_axioms, check_weight_axioms, cohomology,
    lie_from_spec, load_wdgla, reduce_to_quadratic, truncate,
)
from .exactalg import PolynomialSyntaxError
from .grouprep import ParseError, parse_presentation, parse_representation

SCHEMA = 1
EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_DISAGREE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _located(path: str, exc: Exception) -> str:
    return f"{path}: {exc}"


# --- rendering -------------------------------------------------------------------------

def _plain(obj, prefix="") -> list[str]:
    out = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            key = f"{prefix}{k}"
            if isinstance(v, dict) and v:
                out.append(f"{key}:")
                out.extend(_plain(v, prefix + "  "))
            elif isinstance(v, list) and v and any(isinstance(x, (dict, list)) for x in v):
                out.append(f"{key}:")
                for x in v:
                    out.append(f"{prefix}  - " + json.dumps(x, sort_keys=True))
            elif isinstance(v, list) and v and all(isinstance(x, str) for x in v) and max(map(len, v)) > 12:
                out.append(f"{key}:")
                out.extend(f"{prefix}  {x}" for x in v)
            elif isinstance(v, list):
                out.append(f"{key}: " + (", ".join(str(x) for x in v) if v else "(none)"))
            elif isinstance(v, bool):
                out.append(f"{key}: {'true' if v else 'false'}")
            else:
                out.append(f"{key}: {v}")
    return out


def _emit(report: dict, args) -> None:
    body = {"schema": SCHEMA, **report}
    if args.json:
        text = json.dumps(body, indent=2, sort_keys=True) + "\n"
    else:
        text = "\n".join(_plain(body)) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# --- group commands --------------------------------------------------------------------

def _load_group(args):
    try:
        pres = parse_presentation(_read(args.presentation))
    except ParseError as exc:
        raise UsageError(_located(args.presentation, exc)) from None
    try:
        rep = parse_representation(_read(args.representation), pres)
    except ParseError as exc:
        raise UsageError(_located(args.representation, exc)) from None
    return pres, rep


def _invalid(command, exc) -> tuple[dict, int]:
    return {"command": command, "status": "invalid", "error": str(exc)}, EXIT_INVALID


def cmd_cone(args):
    pres, rep = _load_group(args)
    try:
        res = germ.quadratic_cone(pres, rep)
    except germ.InvalidInput as exc:
        return _invalid("cone", exc)
    k = len(res.relations)
    summary = f"{k} relation{'s' if k != 1 else ''}" + (" (smooth)" if k == 0 else "")
    return {"command": "cone", "status": "ok", "summary": summary, **res.to_dict()}, EXIT_OK


def cmd_oracle(args):
    if not 3 <= args.order <= 6:
        raise UsageError(f"--order must be between 3 and 6, got {args.order}")
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    pres, rep = _load_group(args)
    try:
        rep_ = germ.deformation_oracle(pres, rep, args.order, count=args.samples, seed=args.seed)
    except germ.InvalidInput as exc:
        return _invalid("oracle", exc)
    d = rep_.to_dict()
    in_cone = sum(1 for e in rep_.entries if e["in_cone"])
    report = {
        "command": "oracle", "status": "agree" if rep_.agree else "disagree",
        "order": args.order, "seed": args.seed, "dims": d["dims"], "relations": d["relations"],
        "samples": d["samples"], "in_cone": in_cone,
        "disagreement_count": len(rep_.disagreements), "disagreements": rep_.disagreements,
    }
    return report, EXIT_OK if rep_.agree else EXIT_DISAGREE


# --- dgla --------------------------------------------------------------------------------

def _load_dgla(path):
    try:
        return load_wdgla(_read(path))
    except (WDGLAFormatError, ValueError) as exc:
        raise UsageError(_located(path, exc)) from None


def _weight_check(L):
    """g-mode when the file names g, augmented mode when L^0 = 0, otherwise skipped."""
    if L.g_spec:
        try:
            return check_weight_axioms(L, lie_from_spec(L.g_spec))
        except WDGLAFormatError as exc:
            raise UsageError(str(exc)) from None
    if not L.block(0):
        return check_weight_axioms(L)
    return None


def _dims_rows(L):
    return [{"degree": j, "weight": i, "dim": d} for (j, i), d in sorted(L.block_dims().items())]


def cmd_dgla(args):
    L = _load_dgla(args.input)
    head = {"command": f"dgla {args.action}", "label": L.label, "dim": L.dim}
    if args.action == "check":
        ax = check_dgla_axioms(L)
        wt = _weight_check(L)
        report = {**head, "axioms": ax.to_dict()}
        if wt is not None:
            report["weights"] = wt.to_dict()
        ok = ax.ok and (wt is None or wt.ok)
        report["status"] = "ok" if ok else "invalid"
        return report, EXIT_OK if ok else EXIT_INVALID
    ax = check_dgla_axioms(L, limit=5)
    if not ax.ok:
        v = ax.violations[0]
        return {**head, "status": "invalid", "error": f"{v['axiom']} fails at {v['where']}",
                "axioms": ax.to_dict()}, EXIT_INVALID
    if args.action == "cohomology":
        H = cohomology(L)
        return {**head, "status": "ok", "blocks": _dims_rows(L), **H.to_dict()}, EXIT_OK
    if args.action == "truncate":
        try:
            T = truncate(L)
        except PreconditionError as exc:
            return {**head, "status": "invalid", "error": str(exc), "witnesses": exc.witnesses}, EXIT_INVALID
        return {**head, "status": "ok" if T.ok else "invalid", **T.to_dict()}, EXIT_OK if T.ok else EXIT_INVALID
    # reduce
    try:
        R = reduce_to_quadratic(L)
    except PreconditionError as exc:
        return {**head, "status": "invalid", "error": str(exc), "witnesses": exc.witnesses}, EXIT_INVALID
    if not R.ok:
        return {**head, "status": "refused", **R.to_dict()}, EXIT_INVALID
    return {**head, "status": "ok", **R.to_dict()}, EXIT_OK


# --- cones -------------------------------------------------------------------------------

def _load_cone(path, validate=True):
    try:
        return cones.load_cone(_read(path), validate=validate)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    except cones.InhomogeneousError as exc:
        raise cones.InhomogeneousError(f"{path}: {exc}") from None
    except (PolynomialSyntaxError, ValueError) as exc:
        raise UsageError(_located(path, exc)) from None


def cmd_cones(args):
    head = {"command": f"cones {args.action}"}
    if args.action == "check":
        c = _load_cone(args.input, validate=False)
        rep = cones.check_homogeneous(c)
        report = {**head, "status": "ok" if rep.ok else "invalid", "nvars": c.nvars,
                  "homogeneity": rep.to_dict()}
        if rep.ok:
            report["quadratic"] = cones.is_quadratic(c)
        return report, EXIT_OK if rep.ok else EXIT_INVALID
    try:
        c = _load_cone(args.input)
        out = cones.realify(c) if args.action == "realify" else cones.halve_weights(c)
    except ValueError as exc:
        return {**head, "status": "invalid", "error": str(exc)}, EXIT_INVALID
    return {**head, "status": "ok", "cone": cones.cone_to_dict(out)}, EXIT_OK


# --- mhs ---------------------------------------------------------------------------------

def cmd_mhs(args):
    text = _read(args.input)
    head = {"command": f"mhs {args.action}"}
    try:
        if args.action == "split":
            V = mhs.load_filtered_space(text)
        else:
            C = mhs.load_filtered_complex(text)
    except mhs.FiltrationError as exc:
        msg = str(exc)
        if msg.startswith("line "):
            raise UsageError(_located(args.input, exc)) from None
        return {**head, "status": "invalid", "error": msg}, EXIT_INVALID
    if args.action == "split":
        try:
            S = mhs.deligne_splitting(V)
        except mhs.NotMixedHodge as exc:
            return {**head, "status": "invalid", "error": str(exc), "weight": exc.weight, "p": exc.p}, EXIT_INVALID
        d = S.to_dict()
        return {**head, "status": "ok" if d["recombination_ok"] else "invalid", **d}, \
            EXIT_OK if d["recombination_ok"] else EXIT_INVALID
    R = mhs.dec_filtration(C)
    support = {str(n): mhs.weight_support(C, n).to_dict() for n in C.degrees}
    return {**head, "status": "ok" if R.identity_ok else "invalid", **R.to_dict(),
            "weight_support": support}, EXIT_OK if R.identity_ok else EXIT_INVALID


# --- arrangements ------------------------------------------------------------------------

def cmd_arrangement(args):
    Ns = sorted(set(args.N or [2, 3]))
    if any(N < 2 for N in Ns):
        raise UsageError("--N values must be at least 2")
    text = _read(args.input)
    try:
        L = arr.parse_arrangement(text)
    except arr.ArrangementError as exc:
        if "duplicate" in str(exc):
            return {"command": "arrangement", "status": "invalid", "error": _located(args.input, exc)}, EXIT_INVALID
        raise UsageError(_located(args.input, exc)) from None
    return {"command": "arrangement", "status": "ok", **arr.arrangement_report(L, Ns)}, EXIT_OK


# --- parser ------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the full JSON report")
    common.add_argument("--out", metavar="PATH", help="write the report to PATH instead of stdout")

    p = _Parser(prog="quadgerm", description="Exact local structure of representation varieties.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("cone", parents=[common], help="quadratic cone at a representation")
    c.add_argument("presentation")
    c.add_argument("representation")
    c.set_defaults(func=cmd_cone)

    o = sub.add_parser("oracle", parents=[common], help="compare cone membership with lifting")
    o.add_argument("presentation")
    o.add_argument("representation")
    o.add_argument("--order", type=int, default=3, help="highest lift order to test, 3..6 (order k means a lift over Q[t]/t^(k+1))")
    o.add_argument("--samples", type=int, default=200)
    o.add_argument("--seed", type=int, default=0)
    o.set_defaults(func=cmd_oracle)

    d = sub.add_parser("dgla", parents=[common], help="bigraded DGLA operations")
    d.add_argument("action", choices=["check", "cohomology", "truncate", "reduce"])
    d.add_argument("input")
    d.set_defaults(func=cmd_dgla)

    k = sub.add_parser("cones", parents=[common], help="weighted homogeneous cones")
    k.add_argument("action", choices=["check", "realify", "halve"])
    k.add_argument("input")
    k.set_defaults(func=cmd_cones)

    m = sub.add_parser("mhs", parents=[common], help="mixed Hodge linear algebra")
    m.add_argument("action", choices=["split", "dec"])
    m.add_argument("input")
    m.set_defaults(func=cmd_mhs)

    a = sub.add_parser("arrangement", parents=[common], help="line arrangement analysis")
    a.add_argument("input")
    a.add_argument("--N", type=int, nargs="+", help="cover exponents (default 2 3)")
    a.set_defaults(func=cmd_arrangement)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, code = args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"quadgerm: error: {exc}\n")
        return EXIT_USAGE
    except cones.InhomogeneousError as exc:
        report, code = {"command": args.command, "status": "invalid", "error": str(exc)}, EXIT_INVALID
    _emit(report, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
