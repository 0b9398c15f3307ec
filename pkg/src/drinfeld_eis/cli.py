"""Batch command-line front end.

Every subcommand prints one report (JSON schema v1 or CSV) and exits with
0 on success, 1 if a verification check fails, 2 on a precision error or a
precision-insufficient check, 3 on a domain error, 4 when a resource cap is
hit and 64 on bad usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import drinfeld, eisenstein, lattice, modspace, verify
from .arithmetic import APoly, CongClass, all_classes, primitive_monic_reps
from .errors import DomainError, PrecisionError, ResourceError
from .series import FieldSpec

SCHEMA = "drinfeld-eis-report"
SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAIL, EXIT_PRECISION, EXIT_DOMAIN, EXIT_RESOURCE, EXIT_USAGE = 0, 1, 2, 3, 4, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--q", type=int, default=2, help="size of the constant field")
    p.add_argument("--ext-m", type=int, default=1, help="residue extension degree m")
    p.add_argument("--ram-e", type=int, default=2, help="ramification index e of random frames")
    p.add_argument("--P", type=int, default=64, help="absolute precision in u-digits")
    p.add_argument("--deg-cap", type=int, default=3, help="largest level degree enumerated")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="write the report here instead of stdout")
    return p


def _frame_args(p: argparse.ArgumentParser):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--builtin", choices=lattice.BUILTINS, default=None)
    g.add_argument("--frame", help="frame as a JSON file or inline JSON list of series")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="drinfeld-eis", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eis", parents=[common], help="Eisenstein series of a lattice")
    _frame_args(p)
    p.add_argument("--k", type=int, default=1, help="weight")
    p.add_argument("--kind", choices=("full", "partial", "restricted"), default="full")
    p.add_argument("--level", default="T")
    p.add_argument("--u", help="comma-separated numerators, e.g. '1,0'; default all classes")
    p.add_argument("--method", choices=("moebius", "direct"), default="moebius")

    p = sub.add_parser("drinfeld", parents=[common], help="exponential and Drinfeld module")
    _frame_args(p)
    p.add_argument("--level", help="also report phi_N for this level")
    p.add_argument("--method", choices=("product", "eisenstein"), default="product")

    p = sub.add_parser("smb", parents=[common], help="successive minimum basis")
    _frame_args(p)

    p = sub.add_parser("invariants", parents=[common], help="cusp and curve invariants")
    p.add_argument("--deg-max", type=int, default=None, help="defaults to --deg-cap")
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--k-max", type=int, default=5)

    p = sub.add_parser("embed", parents=[common], help="Eisenstein coordinates of a point")
    _frame_args(p)
    p.add_argument("--level", default="T")

    p = sub.add_parser("verify", parents=[common], help="run the identity checks")
    p.add_argument("--suite", default="all", help="'all' or comma-separated check names")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--inject-fault", choices=("g1",), default=None,
                   help="perturb g_1 by 1 to exercise the failure path")
    return parser


# ---------------------------------------------------------------------------
# Inputs
# ---------------------------------------------------------------------------


def _config(args) -> verify.RunConfig:
    return verify.RunConfig(q=args.q, ext_m=args.ext_m, ram_e=args.ram_e, P=args.P,
                            deg_cap=args.deg_cap, seed=args.seed)


def _poly(cfg, text: str) -> APoly:
    N = APoly.parse(cfg.fq.base, text)
    if N.degree() < 1 or not N.is_monic():
        raise DomainError(f"level {text!r} must be monic of positive degree")
    return N


def _load_frame(args, cfg, prec: int):
    if args.frame is None:
        return lattice.builtin_frame(args.builtin or "rank2-sqrt", cfg.fq, prec)
    text = args.frame.strip()
    if not text.startswith(("[", "{")):
        text = Path(text).read_text()
    data = json.loads(text)
    items = data["omegas"] if isinstance(data, dict) else data
    if not items:
        raise DomainError("frame JSON is empty")
    first = items[0]
    if (first.get("p"), first.get("s", 1)) != (cfg.fq.p, cfg.fq.s):
        raise DomainError("frame JSON is over a different constant field than --q")
    spec = FieldSpec(cfg.fq, first.get("e", 1))
    return lattice.LatticeFrame.from_json(items, spec)


def _frame_prec(cfg, level_degree: int = 1) -> int:
    # enough for any builtin (r = e <= 3) up to phi_N with deg N = level_degree
    return 2 * cfg.P + 6 * cfg.q ** (3 * max(level_degree, 1) + 1) // cfg.q + 6 * cfg.q ** 4 + 64


def _classes(N, r, kind, u_text):
    if u_text:
        nums = tuple(APoly.parse(N.field, x) for x in u_text.split(","))
        if len(nums) != r:
            raise DomainError(f"--u needs {r} numerators")
        return [CongClass(N, nums)]
    if kind == "restricted":
        return [CongClass(N, n) for n in primitive_monic_reps(N, r)]
    return all_classes(N, r)


# ---------------------------------------------------------------------------
# Subcommands; each returns (result payload, csv rows, exit code)
# ---------------------------------------------------------------------------


def _series_row(x):
    return {"lead": x.lead, "prec": x.prec, "zero": x.is_zero()}


def cmd_eis(args, cfg, echo):
    fr = _load_frame(args, cfg, _frame_prec(cfg))
    ctx = eisenstein.context(fr)
    P = cfg.P
    echo.update(k=args.k, kind=args.kind, frame=_frame_label(args))
    entries = []
    if args.kind == "full":
        entries.append({"u": None, **eisenstein.eisenstein_full(ctx, args.k, P).to_json()})
    else:
        N = _poly(cfg, args.level)
        echo.update(level=str(N), method=args.method if args.kind == "restricted" else None)
        for u in _classes(N, fr.rank, args.kind, args.u):
            if args.kind == "partial":
                v = eisenstein.eisenstein_partial(ctx, args.k, u, P)
            else:
                v = eisenstein.eisenstein_restricted(ctx, args.k, u, P, args.method)
            entries.append({"u": u.to_json(), "label": " ".join(str(n) for n in u.numerators), **v.to_json()})
    rows = [{"index": i, "u": e.get("label", ""), "lead": e["value"]["lead"], "prec": e["value"]["prec"],
             "tail_bound": e["tail_bound"]} for i, e in enumerate(entries)]
    return {"values": entries}, rows, EXIT_OK


def _frame_label(args):
    return args.builtin or ("file" if args.frame else "rank2-sqrt")


def cmd_drinfeld(args, cfg, echo):
    N = _poly(cfg, args.level) if args.level else None
    fr = _load_frame(args, cfg, _frame_prec(cfg, N.degree() if N is not None else 1))
    ctx = eisenstein.context(fr)
    r = ctx.rank
    echo.update(frame=_frame_label(args), method=args.method)
    # composing up to phi_N multiplies the loss by q^(r deg N)
    margin = ctx.spec.e * ctx.spec.q ** (r * N.degree()) if N is not None else 0
    alphas = drinfeld.exp_coeffs(ctx, r, args.method,
                                 drinfeld.alpha_precision_for(cfg.P, ctx.spec, r) + margin).alphas
    phi = drinfeld.drinfeld_from_alphas(alphas, r)
    if phi.coeffs[-1].is_zero():
        raise PrecisionError("top Drinfeld coefficient vanishes to precision")
    out = {"alphas": [a.truncate(cfg.P).to_json() for a in alphas], "phi_T": phi.truncate(cfg.P).to_json()}
    rows = [{"poly": "phi_T", "i": i, **_series_row(c)} for i, c in enumerate(phi.truncate(cfg.P).coeffs)]
    if N is not None:
        echo.update(level=str(N))
        phi_N = drinfeld.division_poly(phi, N).truncate(cfg.P)
        out["phi_N"] = phi_N.to_json()
        rows += [{"poly": "phi_N", "i": i, **_series_row(c)} for i, c in enumerate(phi_N.coeffs)]
    return out, rows, EXIT_OK


def cmd_smb(args, cfg, echo):
    fr = _load_frame(args, cfg, _frame_prec(cfg))
    echo.update(frame=_frame_label(args))
    cert = lattice.smb_reduce(fr)
    rows = [{"index": i, "minimum": str(m)} for i, m in enumerate(cert.minima)]
    return {"certificate": cert.to_json(), "in_fundamental_domain": lattice.in_fundamental_domain(fr)}, rows, EXIT_OK


def cmd_invariants(args, cfg, echo):
    deg_max = cfg.deg_cap if args.deg_max is None else args.deg_max
    if deg_max < 1 or args.k_max < 1:
        raise DomainError("--deg-max and --k-max must be positive")
    echo.update(deg_max=deg_max, r=args.r, k_max=args.k_max)
    table = modspace.invariants_table(cfg.fq.base, deg_max, args.r, args.k_max)
    rows = []
    for row in table:
        flat = {k: v for k, v in row.items() if k != "dim_mod"}
        for k, v in row.get("dim_mod", {}).items():
            flat[f"dim_mod_{k}"] = v
        rows.append(flat)
    return {"rows": table}, rows, EXIT_OK


def cmd_embed(args, cfg, echo):
    fr = _load_frame(args, cfg, _frame_prec(cfg))
    N = _poly(cfg, args.level)
    echo.update(frame=_frame_label(args), level=str(N))
    vec = eisenstein.embed_jN(fr, N, cfg.P)
    index, ratios = eisenstein.projective_normalize([v.value for v in vec.entries])
    rows = [{"index": i, "n": " ".join(str(x) for x in n), **_series_row(v.value)}
            for i, (n, v) in enumerate(zip(vec.reps, vec.entries))]
    return {"vector": vec.to_json(), "normalized_at": index,
            "ratios": [x.to_json() for x in ratios]}, rows, EXIT_OK


def cmd_verify(args, cfg, echo):
    names = None if args.suite == "all" else [n.strip() for n in args.suite.split(",") if n.strip()]
    unknown = sorted(set(names or ()) - set(verify.CHECK_NAMES))
    if unknown:
        raise DomainError(f"unknown checks: {', '.join(unknown)}")
    echo.update(suite=args.suite, inject_fault=args.inject_fault)
    results = verify.run_suite(cfg, names, args.inject_fault, max(1, args.jobs))
    summary = verify.summarize(results)
    rows = [{k: v for k, v in r.to_json().items() if k != "details"} for r in results]
    code = EXIT_FAIL if summary["fail"] else EXIT_PRECISION if summary[verify.INSUFFICIENT] else EXIT_OK
    return {"checks": [r.to_json() for r in results], "summary": summary}, rows, code


COMMANDS = {"eis": cmd_eis, "drinfeld": cmd_drinfeld, "smb": cmd_smb, "invariants": cmd_invariants,
            "embed": cmd_embed, "verify": cmd_verify}


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def render(report: dict, rows: list, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    fields = []
    for row in rows:
        for k in row:
            if k not in fields:
                fields.append(k)
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: "" if row.get(k) is None else row.get(k) for k in fields})
    return buf.getvalue()


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(str(exc) + "\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    echo = {"command": args.command}
    try:
        cfg = _config(args)
        echo.update(cfg.to_json())
        payload, rows, code = COMMANDS[args.command](args, cfg, echo)
        status = "ok"
    except PrecisionError as exc:
        payload, rows, code, status = {"error": str(exc)}, [{"error": str(exc)}], EXIT_PRECISION, "precision-error"
    except DomainError as exc:
        payload, rows, code, status = {"error": str(exc)}, [{"error": str(exc)}], EXIT_DOMAIN, "domain-error"
    except ResourceError as exc:
        payload, rows, code, status = {"error": str(exc)}, [{"error": str(exc)}], EXIT_RESOURCE, "resource-error"
    report = {"schema": SCHEMA, "schema_version": SCHEMA_VERSION, "command": args.command,
              "config": echo, "status": status, "result": payload}
    _emit(render(report, rows, args.format), args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
