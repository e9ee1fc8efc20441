"""Command-line front end: eval, verify, suite, catalog."""
from __future__ import annotations

import argparse
import fnmatch
import inspect
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Optional

import mpmath

from . import arith, bessel, classic
from . import identities as ids
from .precision import (ConvergenceError, DomainError, PrecisionContext, PrecisionError,
                        ValueWithError, parse_number)

EVAL_FUNCTIONS = {
    "gamma": classic.gamma,
    "rgamma": classic.rgamma,
    "digamma": classic.digamma,
    "zeta": classic.zeta,
    "zeta_prime": classic.zeta_prime,
    "bernoulli": classic.bernoulli,
    "ei": classic.ei,
    "shi": classic.shi,
    "sinh_shi_minus_cosh_chi": classic.sinh_shi_minus_cosh_chi,
    "tricomi_u": classic.tricomi_u,
    "psi_series_closed": classic.psi_series_closed,
    "besselj": bessel.besselj,
    "besseli": bessel.besseli,
    "besselk": bessel.besselk,
    "bessely": bessel.bessely,
    "watson_kernel": bessel.watson_kernel,
    "mu_k_nu": bessel.mu_k_nu,
    "mu_k_asymptotic": bessel.mu_k_asymptotic,
    "mu_k_half_closed": bessel.mu_k_half_closed,
    "onef2_integer_reduction": bessel.onef2_integer_reduction,
    "sigma": arith.sigma,
    "divisor_count": arith.divisor_count,
    "rk": arith.rk,
    "lattice_zeta": arith.lattice_zeta,
}

INT_ARGS = {"n", "k", "m"}
TABLE_DIGITS = 15

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass
class SuiteConfig:
    digits: int = 30
    include: list = field(default_factory=lambda: ["*"])
    exclude: list = field(default_factory=list)
    grids: dict = field(default_factory=dict)
    parallelism: int = 1
    output: Optional[str] = None

    def validate(self) -> "SuiteConfig":
        if not isinstance(self.digits, int) or self.digits < 10:
            raise ConfigError("digits must be an integer >= 10")
        if not isinstance(self.parallelism, int) or self.parallelism < 1:
            raise ConfigError("parallelism must be a positive integer")
        for key in ("include", "exclude"):
            v = getattr(self, key)
            if isinstance(v, str):
                setattr(self, key, [v])
            elif not isinstance(v, list) or not all(isinstance(x, str) for x in v):
                raise ConfigError(f"{key} must be a list of id patterns")
        known = {s.id for s in ids.list_identities()}
        for pat in self.include + self.exclude:
            if not fnmatch.filter(known, pat):
                raise ConfigError(f"pattern {pat!r} matches no identity")
        if not isinstance(self.grids, dict):
            raise ConfigError("grids must map identity ids to parameter lists")
        for key, grid in self.grids.items():
            if key not in known:
                raise ConfigError(f"unknown identity {key!r}")
            if not isinstance(grid, list) or not all(isinstance(g, dict) for g in grid):
                raise ConfigError(f"grid for {key} must be a list of parameter maps")
        return self

    @classmethod
    def load(cls, path: str) -> "SuiteConfig":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be an object")
        names = {f.name for f in fields(cls)}
        extra = set(data) - names
        if extra:
            raise ConfigError(f"unknown config keys {sorted(extra)}")
        return cls(**data).validate()

    def selected(self) -> list:
        out = []
        for spec in ids.list_identities():
            if not any(fnmatch.fnmatchcase(spec.id, p) for p in self.include):
                continue
            if any(fnmatch.fnmatchcase(spec.id, p) for p in self.exclude):
                continue
            out.append(spec.id)
        return out

    def tasks(self) -> list:
        out = []
        for i in self.selected():
            grid = self.grids.get(i) or ids.default_grid(i)
            out.extend((i, dict(g)) for g in grid)
        return out


# ---------------------------------------------------------------------------
# formatting


def _fmt(v, digits=TABLE_DIGITS) -> str:
    if isinstance(v, int):
        return str(v)
    return ids.format_number(v, digits)


def format_value(v) -> str:
    if isinstance(v, ValueWithError):
        return f"{_fmt(v.value)} ± {mpmath.nstr(v.abs_error, 3)} ({v.rigor})"
    return _fmt(v)


def report_table(reports) -> str:
    rows = [("id", "params", "lhs", "rhs", "abs_diff", "verdict")]
    for r in reports:
        params = ",".join(f"{k}={_fmt(v)}" for k, v in r.params.items())
        rows.append((r.id, params, _fmt(r.lhs.value), _fmt(r.rhs.value),
                     mpmath.nstr(r.abs_diff, 3), r.verdict))
    return _table(rows)


def _table(rows) -> str:
    widths = [max(len(str(row[i])) for row in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows)


def _parse_kv(items) -> dict:
    out = {}
    for item in items:
        for part in filter(None, item.split(",")):
            if "=" not in part:
                raise ConfigError(f"expected k=v, got {part!r}")
            k, v = part.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def _split_extra(extra) -> dict:
    """Turn ['--nu', '0.5', '--z', '3'] into {'nu': '0.5', 'z': '3'}."""
    out = {}
    it = iter(extra)
    for tok in it:
        if not tok.startswith("--"):
            raise ConfigError(f"unexpected argument {tok!r}")
        name = tok[2:]
        if "=" in name:
            name, val = name.split("=", 1)
        else:
            try:
                val = next(it)
            except StopIteration:
                raise ConfigError(f"missing value for {tok}") from None
        out[name.replace("-", "_")] = val
    return out


# ---------------------------------------------------------------------------
# commands


def cmd_eval(args, extra) -> int:
    fn = EVAL_FUNCTIONS.get(args.function)
    if fn is None:
        print(f"unknown function {args.function!r}", file=sys.stderr)
        return EXIT_USAGE
    try:
        named = _split_extra(extra)
        ctx = PrecisionContext(args.digits)
        params = [p for p in inspect.signature(fn).parameters if p != "ctx"]
        missing = [p for p in params if p not in named]
        unknown = set(named) - set(params)
        if missing or unknown:
            print(f"{args.function} takes {', '.join('--' + p for p in params)}", file=sys.stderr)
            return EXIT_USAGE
        with ctx.workdps():
            vals = [int(named[p]) if p in INT_ARGS else parse_number(named[p]) for p in params]
        takes_ctx = "ctx" in inspect.signature(fn).parameters
        res = fn(*vals, ctx) if takes_ctx else fn(*vals)
    except (ConfigError, PrecisionError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ValueError, ZeroDivisionError, ConvergenceError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if isinstance(res, ValueWithError):
        print(f"value: {ids.format_number(res.value, args.digits)}")
        print(f"error: {mpmath.nstr(res.abs_error, 3)}")
        print(f"rigor: {res.rigor}")
    else:
        print(f"value: {res}")
        print("error: 0")
        print("rigor: exact")
    return EXIT_OK


def _write_records(path, reports, mode="a"):
    with open(path, mode) as fh:
        for r in reports:
            fh.write(json.dumps(r.record(), sort_keys=False) + "\n")


def cmd_verify(args, extra) -> int:
    try:
        ids.get_identity(args.id)
    except ids.UnknownIdentity:
        print(f"unknown identity {args.id!r}", file=sys.stderr)
        return EXIT_USAGE
    try:
        params = _split_extra(extra)
        params.update(_parse_kv(args.params or []))
        ctx = PrecisionContext(args.digits)
        if args.limit:
            name, target = args.limit.split("=", 1)
            report = ids.verify_limit(args.id, params, name.strip(), target.strip(), ctx)
        else:
            report = ids.verify(args.id, params, ctx)
    except (ConfigError, PrecisionError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"constraint violation: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    print(report_table([report]))
    if args.out:
        _write_records(args.out, [report])
    return EXIT_OK if report.passed else EXIT_FAIL


def _run_task(task):
    identity_id, params, digits = task
    ctx = PrecisionContext(digits)
    try:
        return ids.verify(identity_id, params, ctx)
    except (DomainError, ConvergenceError, ZeroDivisionError) as exc:
        zero = ValueWithError(mpmath.mpf(0), 0)
        return ids.IdentityReport(identity_id, dict(params), zero, zero, mpmath.inf, mpmath.inf,
                                  "fail", 0, 0, 0.0, digits, [f"error: {exc}"])


def _sort_key(report):
    return (report.id, tuple(f"{k}={_fmt(v)}" for k, v in report.params.items()))


def run_suite(cfg: SuiteConfig) -> list:
    tasks = [(i, p, cfg.digits) for i, p in cfg.tasks()]
    if cfg.parallelism > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.parallelism) as pool:
            reports = list(pool.map(_run_task, tasks))
    else:
        reports = [_run_task(t) for t in tasks]
    return sorted(reports, key=_sort_key)


def cmd_suite(args, extra) -> int:
    try:
        if extra:
            raise ConfigError(f"unexpected arguments {extra}")
        cfg = SuiteConfig.load(args.config) if args.config else SuiteConfig()
        if args.digits is not None:
            cfg.digits = args.digits
        if args.include:
            cfg.include = list(args.include)
        if args.exclude:
            cfg.exclude = list(args.exclude)
        if args.jobs is not None:
            cfg.parallelism = args.jobs
        if args.out:
            cfg.output = args.out
        cfg.validate()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    reports = run_suite(cfg)
    print(report_table(reports))
    failed = [r for r in reports if not r.passed]
    print(f"\n{len(reports) - len(failed)}/{len(reports)} passed")
    if cfg.output:
        _write_records(cfg.output, reports, "w")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_catalog(args, extra) -> int:
    rows = [("id", "tier", "params", "description")]
    for s in ids.list_identities():
        params = "; ".join(f"{p.name}: {p.constraint}" if p.constraint else p.name for p in s.params)
        rows.append((s.id, s.tier, params, s.title))
    print(_table(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="modid", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    e = sub.add_parser("eval", help="evaluate a special or arithmetic function")
    e.add_argument("function")
    e.add_argument("--digits", type=int, default=30)
    v = sub.add_parser("verify", help="verify one identity")
    v.add_argument("id")
    v.add_argument("--digits", type=int, default=30)
    v.add_argument("--params", action="append", help="k=v,... parameter list")
    v.add_argument("--limit", help="name=target: reach the identity as a limit in that parameter")
    v.add_argument("--out", help="append the structured record to this file")
    s = sub.add_parser("suite", help="run the identity suite")
    s.add_argument("config", nargs="?", help="JSON file with SuiteConfig fields")
    s.add_argument("--digits", type=int)
    s.add_argument("--include", action="append")
    s.add_argument("--exclude", action="append")
    s.add_argument("--jobs", type=int)
    s.add_argument("--out")
    sub.add_parser("catalog", help="list the identities")
    return ap


COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "suite": cmd_suite, "catalog": cmd_catalog}


def main(argv=None) -> int:
    ap = build_parser()
    args, extra = ap.parse_known_args(argv)
    return COMMANDS[args.command](args, extra)


if __name__ == "__main__":
    sys.exit(main())
