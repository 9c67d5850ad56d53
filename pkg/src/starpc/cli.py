"""Command-line front end: ``starpc <command> [options]``.

Commands
--------
run-replicated, run-systematic
    Run one private-computation session from a config file and write the
    transcript plus a summary.
audit
    Exact privacy audit of colluding server subsets.
rate-table
    Formula versus measured rates of the systematic scheme over RS codes.
code-star
    Star products and powers of codes.
encode
    Storage shares ``Y = X G_C`` for a data matrix.

Failures print ``{"error": ..., "type": ...}`` as JSON and exit with status 2.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .algebra import Matrix
from .codes import RSCode, code_to_dict, min_distance, rs_code, star_power, star_product
from .config import block_length, build_scheme, inputs, load_config, parse_code
from .exceptions import ConfigurationError, EnumerationLimitError, InfeasibleConfigurationError
from .privacy_audit import AUDIT_GUARD, mutual_information
from .scheme_replicated import ReplicatedPCScheme
from .scheme_systematic import SystematicPCScheme, rs_rate
from .simnet import config_hash, encode_storage, fresh_seed, run_session
from .validation import check_data_matrix, check_field


class CommandError(Exception):
    """A user-facing failure that should be reported as error JSON."""


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _header(seed, cfg: dict) -> dict:
    return {"tool": {"name": "starpc", "version": __version__}, "seed": seed, "config_hash": config_hash(cfg)}


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _seed(args, cfg: dict) -> int:
    if args.seed is not None:
        return args.seed
    if cfg.get("seed") is not None:
        return int(cfg["seed"])
    return fresh_seed()


def cmd_run(args, kind: str) -> int:
    cfg = load_config(args.config)
    if cfg.get("scheme", kind) != kind:
        raise ConfigurationError(f"config describes a {cfg['scheme']!r} scheme, not {kind!r}")
    cfg = dict(cfg, scheme=kind)
    seed = _seed(args, cfg)
    est = build_scheme(cfg, seed)
    est._setup()
    X, Phi = inputs(cfg, est, seed)
    values, transcript, acct = run_session(est, Phi, X, seed)
    if isinstance(values, Matrix):
        table = values.to_strings()
    else:
        table = [[str(v)] for v in values]
    summary = {
        "scheme": kind,
        "B": len(Phi),
        "S": transcript.S,
        "rate": _frac(transcript.rate),
        "rate_decimal": float(transcript.rate),
        "accounting": acct.to_dict(),
        "accounting_ok": acct.check(est.storage_code_.N, est.space_.dim),
    }
    doc = dict(_header(seed, cfg), summary=summary, values=table, transcript=transcript.to_dict())
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["b"] + [f"k{k + 1}" for k in range(len(table[0]))])
        for b, row in enumerate(table, 1):
            w.writerow([b] + row)
        _emit(buf.getvalue(), args.out)
        if args.out:
            sys.stdout.write(_dump(dict(_header(seed, cfg), summary=summary)))
        return 0
    _emit(_dump(doc), args.out)
    if args.out:
        sys.stdout.write(_dump(dict(_header(seed, cfg), summary=summary)))
    return 0


def _subsets(args, N: int) -> list[tuple[int, ...]]:
    if args.subset:
        return [tuple(int(s) for s in args.subset.split(","))]
    size = args.all_subsets
    if size is None:
        raise CommandError("audit needs --all-subsets T or --subset i,j,...")
    if not 1 <= size <= N:
        raise CommandError(f"--all-subsets must lie in 1..{N}")
    return list(itertools.combinations(range(1, N + 1), size))


def cmd_audit(args) -> int:
    cfg = load_config(args.config)
    seed = _seed(args, cfg)
    est = build_scheme(cfg, seed)
    est._setup()
    B = block_length(cfg, est)
    reports = []
    for sub in _subsets(args, est.storage_code_.N):
        r = mutual_information(est, sub, B=B, mode=args.mode, limit=args.guard_limit, seed=seed)
        reports.append(r.to_dict())
    passed = all(r["verdict"] == "private" for r in reports)
    doc = dict(_header(seed, cfg), passed=passed, expect_leak=args.expect_leak, reports=reports)
    _emit(_dump(doc), args.out)
    if args.expect_leak:
        return 0 if not passed else 1
    return 0 if passed else 1


def _range(text: str) -> list[int]:
    out: list[int] = []
    for part in text.split(","):
        if ":" in part:
            lo, hi = part.split(":")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def rate_row(field, N: int, K: int, T: int, G: int, seed: int) -> dict:
    """One rate-table row: formula rate and the rate of an actual session.

    ``K = 1`` rows use the replicated scheme (all servers hold the single
    column), whose rate is ``(N - T)/N``.
    """
    row = {"N": N, "K": K, "T": T, "G": G}
    if not 1 <= T < N or not 1 <= K <= N:
        return dict(row, F="", S="", rate_formula="infeasible", rate_measured="infeasible", status="invalid")
    rng = np.random.default_rng(seed)
    if K == 1:
        est = ReplicatedPCScheme(N=N, T=T, field=field, M=1, G=G, seed=seed)
        formula = Fraction(N - T, N)
        B = N - T
    else:
        try:
            formula = rs_rate(N, K, T, G)
        except InfeasibleConfigurationError:
            return dict(row, F="", S="", rate_formula="infeasible", rate_measured="infeasible", status="infeasible")
        est = SystematicPCScheme(storage_code=rs_code(list(range(N)), K, field), T=T, G=G, M=1, seed=seed)
        try:
            est._setup()
        except InfeasibleConfigurationError:
            return dict(row, F=0, S="", rate_formula=_frac(formula), rate_formula_decimal=float(formula),
                        rate_measured="infeasible", status="boundary")
        B = est.B_
    est._setup()
    X = Matrix(field, [field.random(rng, K)])
    Phi = [est.space_.sample(rng) for _ in range(B)]
    _, tr, _ = run_session(est, Phi, X, seed)
    F = N - T if K == 1 else est.F_
    return dict(row, F=F, S=tr.S, rate_formula=_frac(formula), rate_formula_decimal=float(formula),
                rate_measured=_frac(tr.rate), rate_measured_decimal=float(tr.rate),
                status="ok" if tr.rate == formula else "mismatch")


RATE_COLUMNS = ["N", "K", "T", "G", "F", "S", "rate_formula", "rate_measured",
                "rate_formula_decimal", "rate_measured_decimal", "status"]


def cmd_rate_table(args) -> int:
    field = check_field(args.field)
    seed = args.seed if args.seed is not None else 0
    rows = []
    for N, K, T, G in itertools.product(_range(args.N), _range(args.K), _range(args.T), _range(args.G)):
        if N > field.order:
            raise CommandError(f"N = {N} exceeds the field size {field.order}")
        rows.append(rate_row(field, N, K, T, G, seed))
    cfg = {"field": field.to_dict(), "N": args.N, "K": args.K, "T": args.T, "G": args.G}
    if args.format == "json":
        _emit(_dump(dict(_header(seed, cfg), rows=rows)), args.out)
    else:
        buf = io.StringIO()
        buf.write(f"# starpc {__version__} seed={seed} config_hash={config_hash(cfg)}\n")
        w = csv.DictWriter(buf, RATE_COLUMNS, restval="", lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        _emit(buf.getvalue(), args.out)
    return 0 if all(r["status"] != "mismatch" for r in rows) else 1


def _code_summary(C) -> dict:
    d = code_to_dict(C)
    d["min_distance"] = min_distance(C)
    return d


def cmd_code_star(args) -> int:
    """Config keys: ``field``, ``code``, and either ``other`` or ``power``."""
    cfg = load_config(args.config)
    field = check_field(cfg.get("field"))
    if "code" not in cfg:
        raise ConfigurationError("code-star config needs 'code'")
    C = parse_code(cfg["code"], field)
    if "other" in cfg:
        D = parse_code(cfg["other"], field)
        result = star_product(C, D)
        expected = None
        if isinstance(C, RSCode) and isinstance(D, RSCode) and C.alpha == D.alpha:
            expected = min(C.K + D.K - 1, C.N)
    elif "power" in cfg:
        G = int(cfg["power"])
        result = star_power(C, G)
        expected = min(G * (C.K - 1) + 1, C.N) if isinstance(C, RSCode) else None
    else:
        raise ConfigurationError("code-star config needs 'other' or 'power'")
    doc = dict(_header(None, cfg), inputs=[code_to_dict(C)], result=_code_summary(result))
    if expected is not None:
        doc["rs_identity"] = {"expected_K": expected, "holds": result == rs_code(C.alpha, expected, field)}
    _emit(_dump(doc), args.out)
    return 0


def cmd_encode(args) -> int:
    cfg = load_config(args.config)
    field = check_field(cfg.get("field"))
    ext = check_field(cfg.get("ext_field"), field)
    if "storage_code" not in cfg or "data" not in cfg:
        raise ConfigurationError("encode config needs 'storage_code' and 'data'")
    C = parse_code(cfg["storage_code"], field)
    X = check_data_matrix(cfg["data"], ext, n_cols=C.K)
    servers = encode_storage(X, C)
    shares = [[ext.to_str(v) for v in s.share] for s in servers]
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["server"] + [f"y{i + 1}" for i in range(X.n_rows)])
        for n, sh in enumerate(shares, 1):
            w.writerow([n] + sh)
        _emit(buf.getvalue(), args.out)
    else:
        _emit(_dump(dict(_header(None, cfg), shares={str(n): sh for n, sh in enumerate(shares, 1)})), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="starpc", description="Private computation on coded distributed storage.")
    parser.add_argument("--version", action="version", version=f"starpc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=("json", "csv")):
        p.add_argument("--seed", type=int, default=None, help="session seed (default: config, else fresh)")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--format", choices=fmt, default=fmt[0])

    for name in ("run-replicated", "run-systematic"):
        p = sub.add_parser(name, help=f"run one {name[4:]} session")
        p.add_argument("--config", required=True, help="config path or shipped name")
        common(p)

    p = sub.add_parser("audit", help="exact privacy audit")
    p.add_argument("--config", required=True)
    p.add_argument("--all-subsets", type=int, default=None, metavar="T", help="audit every subset of size T")
    p.add_argument("--subset", default=None, help="comma-separated server indices")
    p.add_argument("--expect-leak", action="store_true", help="succeed only if some subset leaks")
    p.add_argument("--guard-limit", type=int, default=AUDIT_GUARD, help="largest enumeration allowed")
    p.add_argument("--mode", choices=("auto", "full", "composed"), default="auto")
    common(p, ("json",))

    p = sub.add_parser("rate-table", help="formula vs measured rates")
    p.add_argument("--field", type=int, default=11, help="field order")
    p.add_argument("--N", default="8", help="values, e.g. 8 or 5:8 or 5,7")
    p.add_argument("--K", default="1:8")
    p.add_argument("--T", default="1:7")
    p.add_argument("--G", default="1:4")
    common(p, ("csv", "json"))

    p = sub.add_parser("code-star", help="star product or power of codes")
    p.add_argument("--config", required=True)
    common(p, ("json",))

    p = sub.add_parser("encode", help="storage shares of a data matrix")
    p.add_argument("--config", required=True)
    common(p)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "run-replicated": lambda a: cmd_run(a, "replicated"),
        "run-systematic": lambda a: cmd_run(a, "systematic"),
        "audit": cmd_audit,
        "rate-table": cmd_rate_table,
        "code-star": cmd_code_star,
        "encode": cmd_encode,
    }
    try:
        return handlers[args.command](args)
    except EnumerationLimitError as exc:
        err = {"error": str(exc), "type": "EnumerationLimitError", "size": exc.size, "limit": exc.limit}
    except (ConfigurationError, CommandError, ValueError, TypeError) as exc:
        err = {"error": str(exc), "type": type(exc).__name__}
    sys.stdout.write(_dump(err))
    return 2


if __name__ == "__main__":
    sys.exit(main())
