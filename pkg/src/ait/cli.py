"""Command-line front end: ``ait <command> ...``.

Exit codes: 0 ok, 1 query failed (e.g. output not in table), 2 config
error, 3 resource limit, 4 a certified invariant was broken.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from . import __version__
from .bitcore import parse_bits
from .complexity import TableStore, k_hat, m_hat
from .config import ExperimentConfig, RunSpec, experiment_args, load_config
from .conservation import (
    ExperimentReport,
    all_triples,
    check_basic_inequality,
    check_coding_theorem,
    check_kraft,
    check_sum_identity,
    exp_thm1,
    exp_thm2,
    exp_thm3,
    exp_thm4,
    exp_thm5,
    exp_thm6,
    exp_thm7,
    export_csv,
    with_drift,
)
from .enumeration import atomic_write, enumerate_table, load_table, save_table, table_json
from .errors import AITError, CertifiedInvariantBroken, ConfigError, ResourceLimit, UnknownMachine
from .exact import frac_json, frac_str
from .machine import Budget, describe_machine, get_machine
from .mutual import default_support, mi_finite, mi_infinite_apriori, mi_infinite_sum, mi_infinite_sup
from .oracle import parse_optional_oracle, parse_oracle

EXIT_OK, EXIT_QUERY, EXIT_CONFIG, EXIT_RESOURCE, EXIT_BROKEN = 0, 1, 2, 3, 4

EXPERIMENTS = {
    "thm1": exp_thm1,
    "thm2": exp_thm2,
    "thm3": exp_thm3,
    "thm4": exp_thm4,
    "thm5": exp_thm5,
    "thm6": exp_thm6,
    "thm7": exp_thm7,
}


def cache_dir(arg: str | None) -> str | None:
    return arg or os.environ.get("AIT_CACHE_DIR") or None


def _emit(obj) -> None:
    print(json.dumps(obj, indent=1, sort_keys=True))


def _budget(args) -> Budget:
    try:
        return Budget(args.max_len, args.max_steps, args.max_output)
    except ValueError as exc:
        raise ConfigError(f"budget: {exc}") from None


def _store(args) -> TableStore:
    return TableStore(args.machine, _budget(args), workers=args.workers, cache_dir=cache_dir(args.cache_dir),
                      split_depth=args.split_depth)


def _oracle(text: str | None, field: str):
    try:
        return parse_optional_oracle(text) if text is not None else None
    except ValueError as exc:
        raise ConfigError(f"{field}: {exc}") from None


def _bits(text: str, field: str) -> str:
    try:
        return parse_bits(text)
    except ValueError as exc:
        raise ConfigError(f"{field}: {exc}") from None


def _table(path: str):
    try:
        return load_table(path)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"--table: {exc}") from None


# ---------------------------------------------------------------------------
# experiments


def run_experiment(cfg: ExperimentConfig, run: RunSpec, index: int, cache: str | None) -> ExperimentReport:
    kwargs = experiment_args(run.theorem, run.params, f"runs[{index}]", cfg.base_dir)
    store = TableStore(cfg.machine, cfg.budget, workers=cfg.workers, cache_dir=cache, split_depth=cfg.split_depth)
    fn = EXPERIMENTS[run.theorem]
    if cfg.drift:
        return with_drift(lambda s: fn(s, **kwargs), store)
    return fn(store, **kwargs)


def _rel(path: Path, base: Path) -> str:
    return Path(os.path.relpath(path, base)).as_posix()


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def run_config(path: str | Path, cache: str | None = None, only: str | None = None,
               out: str | None = None, csv_out: str | None = None) -> dict:
    """Run every experiment in a config and write reports, CSVs and the manifest.

    ``only`` restricts to one theorem; ``out``/``csv_out`` override the
    output paths of that run.
    """
    cfg, raw = load_config(path)
    runs = list(enumerate(cfg.runs))
    if only is not None:
        runs = [(i, r) for i, r in runs if r.theorem == only]
        if not runs:
            raise ConfigError(f"runs: no run with theorem {only!r}")
    outputs: dict[str, str] = {}
    reports = []
    for i, run in runs:
        report = run_experiment(cfg, run, i, cache)
        report_path = Path(out) if out else run.report
        csv_path = Path(csv_out) if csv_out else run.csv
        text = report.dumps()
        if report_path is not None:
            atomic_write(report_path, text)
            outputs[_rel(report_path, cfg.base_dir)] = _sha256(text.encode())
        if csv_path is not None:
            c = export_csv(report)
            atomic_write(csv_path, c)
            outputs[_rel(csv_path, cfg.base_dir)] = _sha256(c.encode())
        reports.append(report)
    manifest = {
        "semantics_version": get_machine(cfg.machine).id.semantics_version,
        "machine": cfg.machine,
        "budget": cfg.budget.fingerprint,
        "config_sha256": _sha256(raw),
        "outputs": outputs,
        "tool_version": __version__,
    }
    if cfg.manifest is not None:
        atomic_write(cfg.manifest, json.dumps(manifest, indent=1, sort_keys=True) + "\n")
    return {"manifest": manifest, "reports": reports}


# ---------------------------------------------------------------------------
# commands


def cmd_enumerate(args) -> int:
    t = enumerate_table(args.machine, _oracle(args.oracle, "--oracle"), _budget(args), workers=args.workers,
                        split_depth=args.split_depth, cache_dir=cache_dir(args.cache_dir))
    if args.out:
        save_table(t, args.out)
    summary = {"entries": len(t), "kraft": frac_json(t.kraft), "stats": t.stats, "budget": t.budget.fingerprint,
               "oracle": t.oracle, "machine": t.machine, "out": args.out}
    if args.json:
        print(table_json(t))
    else:
        _emit(summary)
    return EXIT_OK


def cmd_k(args) -> int:
    print(k_hat(_table(args.table), _bits(args.x, "X")))
    return EXIT_OK


def cmd_m(args) -> int:
    print(frac_str(m_hat(_table(args.table), _bits(args.x, "X"))))
    return EXIT_OK


def cmd_kcond(args) -> int:
    store = _store(args)
    print(store.k_cond(_bits(args.x, "--x"), _bits(args.y, "--y")))
    return EXIT_OK


def cmd_mi(args) -> int:
    print(mi_finite(_table(args.table), _bits(args.x, "X"), _bits(args.y, "Y")))
    return EXIT_OK


def cmd_mi_seq(args) -> int:
    store = _store(args)
    try:
        alpha, beta = parse_oracle(args.alpha), parse_oracle(args.beta)
    except ValueError as exc:
        raise ConfigError(f"--alpha/--beta: {exc}") from None
    if args.mode == "sup":
        v = mi_infinite_sup(store, alpha, beta, args.support_len)
        _emit({"mode": "sup", "value": None if v == float("-inf") else v, "max_prefix_len": args.support_len,
               "tables": store.provenance()})
        return EXIT_OK
    # All pairs up to n; this contains every pair of oracle prefixes up to n.
    support = default_support(args.support_len)
    fn = mi_infinite_sum if args.mode == "sum" else mi_infinite_apriori
    _emit(fn(store, alpha, beta, support).to_json())
    return EXIT_OK


def cmd_check(args) -> int:
    t = _table(args.table)
    if args.what == "kraft":
        _emit(check_kraft(t))
    elif args.what == "coding-theorem":
        _emit(check_coding_theorem(t))
    elif args.what == "sum-identity":
        _emit(check_sum_identity(t, args.max_len))
    else:
        _emit(check_basic_inequality(t, all_triples(args.max_len)))
    return EXIT_OK


def cmd_experiment(args) -> int:
    res = run_config(args.config, cache_dir(args.cache_dir), only=args.theorem, out=args.out, csv_out=args.csv)
    if not args.out:
        for r in res["reports"]:
            sys.stdout.write(r.dumps())
    return EXIT_OK


def cmd_run(args) -> int:
    res = run_config(args.config, cache_dir(args.cache_dir))
    _emit(res["manifest"])
    return EXIT_OK


def cmd_describe(args) -> int:
    try:
        sys.stdout.write(describe_machine(args.machine))
    except UnknownMachine as exc:
        raise ConfigError(f"machine: {exc.args[0]}") from None
    return EXIT_OK


def _add_budget(p: argparse.ArgumentParser, machine: bool = True) -> None:
    if machine:
        p.add_argument("--machine", required=True, choices=["TOK", "UVM"])
    p.add_argument("--max-len", type=int, required=True, help="max program length in bits")
    p.add_argument("--max-steps", type=int, required=True)
    p.add_argument("--max-output", type=int, default=16, help="max output length (default 16)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--split-depth", type=int, default=6)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ait", description="Budget-bounded prefix complexity and mutual information.")
    ap.add_argument("--version", action="version", version=f"ait {__version__}")
    ap.add_argument("--cache-dir", default=None, help="partition cache (default: $AIT_CACHE_DIR, else none)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="enumerate all programs into a complexity table")
    _add_budget(p)
    p.add_argument("--oracle", default=None, help="oracle spec, e.g. zeros, ez:011, per:1:10, tilde:01")
    p.add_argument("--out", default=None, help="write the table file here")
    p.add_argument("--json", action="store_true", help="print the full table as JSON")
    p.set_defaults(func=cmd_enumerate)

    for name, func, help_ in (("k", cmd_k, "k_hat of X"), ("m", cmd_m, "m_hat of X as num/den")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--table", required=True)
        p.add_argument("x", metavar="X", help="bit string, '-' for the empty string")
        p.set_defaults(func=func)

    p = sub.add_parser("kcond", help="K(x|y) via the tilde(y) oracle")
    _add_budget(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.set_defaults(func=cmd_kcond)

    p = sub.add_parser("mi", help="finite mutual information I(X:Y)")
    p.add_argument("--table", required=True)
    p.add_argument("x", metavar="X")
    p.add_argument("y", metavar="Y")
    p.set_defaults(func=cmd_mi)

    p = sub.add_parser("mi-seq", help="mutual information of two sequences over a finite support")
    _add_budget(p)
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--support-len", type=int, default=2)
    p.add_argument("--mode", choices=["sum", "apriori", "sup"], default="sum")
    p.set_defaults(func=cmd_mi_seq)

    p = sub.add_parser("check", help="exact checks over a table")
    p.add_argument("what", choices=["kraft", "coding-theorem", "sum-identity", "basic-ineq"])
    p.add_argument("--table", required=True)
    p.add_argument("--max-len", type=int, default=2, help="corpus length for identity checks")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("experiment", help="run one experiment from a config")
    p.add_argument("theorem", choices=sorted(EXPERIMENTS))
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("run", help="run every experiment in a config and write the manifest")
    p.add_argument("config")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("describe-machine", help="print the normative semantics of a machine")
    p.add_argument("machine")
    p.set_defaults(func=cmd_describe)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except CertifiedInvariantBroken as exc:
        print(f"certified invariant broken: {exc}", file=sys.stderr)
        return EXIT_BROKEN
    except AITError as exc:
        msg = exc.args[0] if exc.args else ""
        print(f"error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return EXIT_QUERY


if __name__ == "__main__":
    sys.exit(main())
