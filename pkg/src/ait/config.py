"""Experiment configuration: JSON parsing and validation.

A config names the machine and budget once and lists one or more
experiment runs.  Every validation failure raises :class:`ConfigError`
whose message starts with the offending field path, e.g.
``runs[0].params.alphas[1]: ...``.

Example::

    {
      "machine": "TOK",
      "budget": {"max_program_len": 12, "max_steps": 64, "max_output_len": 8},
      "drift": false,
      "runs": [
        {"theorem": "thm1",
         "params": {"transform": "identity", "corpus_x": "all<=2", "corpus_y": ["-", "0"]},
         "report": "thm1.json", "csv": "thm1.csv"}
      ],
      "manifest": "manifest.json"
    }
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .bitcore import is_bits, strings_up_to
from .conservation import FINITE_MAP, OPERATOR, TRANSFORM_SOURCES, Thm6Case, transform, transform_from_program
from .errors import ConfigError, UnknownMachine
from .machine import Budget, get_machine
from .measures import FiniteMeasure, MeasureFamily, family_from_description, uniform
from .oracle import OracleSpec, parse_oracle
from .uvm import assemble

THEOREMS = ("thm1", "thm2", "thm3", "thm4", "thm5", "thm6", "thm7")
_ALL_UP_TO = re.compile(r"^all<=(\d+)$")


@dataclass
class RunSpec:
    theorem: str
    params: dict[str, Any]
    report: Path | None = None
    csv: Path | None = None


@dataclass
class ExperimentConfig:
    machine: str
    budget: Budget
    runs: list[RunSpec] = field(default_factory=list)
    workers: int = 1
    split_depth: int = 6
    drift: bool = False
    manifest: Path | None = None
    base_dir: Path = Path(".")


def _req(d: dict, key: str, where: str) -> Any:
    if not isinstance(d, dict) or key not in d:
        raise ConfigError(f"{where}.{key}: missing" if where else f"{key}: missing")
    return d[key]


def parse_bits_field(v: Any, where: str) -> str:
    if not isinstance(v, str):
        raise ConfigError(f"{where}: expected a bit string, got {v!r}")
    v = "" if v == "-" else v
    if not is_bits(v):
        raise ConfigError(f"{where}: {v!r} is not a bit string")
    return v


def parse_corpus(v: Any, where: str) -> list[str]:
    """A list of bit strings (``-`` is the empty string) or ``"all<=n"``."""
    if isinstance(v, str):
        m = _ALL_UP_TO.match(v)
        if not m:
            raise ConfigError(f"{where}: expected a list or 'all<=n', got {v!r}")
        return strings_up_to(int(m.group(1)))
    if not isinstance(v, list):
        raise ConfigError(f"{where}: expected a list or 'all<=n', got {v!r}")
    return [parse_bits_field(x, f"{where}[{i}]") for i, x in enumerate(v)]


def parse_pair_corpus(v: Any, where: str) -> list[tuple[str, str]]:
    if isinstance(v, str):
        xs = parse_corpus(v, where)
        return [(u, w) for u in xs for w in xs]
    if not isinstance(v, list):
        raise ConfigError(f"{where}: expected a list of pairs or 'all<=n'")
    out = []
    for i, p in enumerate(v):
        if not isinstance(p, list) or len(p) != 2:
            raise ConfigError(f"{where}[{i}]: expected a pair [u, v]")
        out.append((parse_bits_field(p[0], f"{where}[{i}][0]"), parse_bits_field(p[1], f"{where}[{i}][1]")))
    return out


def parse_oracle_field(v: Any, where: str) -> OracleSpec:
    if not isinstance(v, str):
        raise ConfigError(f"{where}: expected an oracle spec string, got {v!r}")
    try:
        return parse_oracle(v)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def parse_oracles(v: Any, where: str) -> list[OracleSpec]:
    if not isinstance(v, list):
        raise ConfigError(f"{where}: expected a list of oracle specs")
    return [parse_oracle_field(s, f"{where}[{i}]") for i, s in enumerate(v)]


def parse_budget(v: Any, where: str = "budget") -> Budget:
    if not isinstance(v, dict):
        raise ConfigError(f"{where}: expected an object")
    fields = [_req(v, k, where) for k in ("max_program_len", "max_steps", "max_output_len")]
    try:
        return Budget(*(int(f) for f in fields))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from None


def parse_measure(v: Any, where: str, base_dir: Path) -> FiniteMeasure:
    """Inline ``{"atoms": [...]}``, ``{"uniform": [keys]}`` or a path to a measure file."""
    try:
        if isinstance(v, str):
            v = json.loads((base_dir / v).read_text())
        if isinstance(v, dict) and "uniform" in v:
            return uniform(v["uniform"])
        if isinstance(v, dict) and "atoms" in v:
            return FiniteMeasure.from_json(v)
    except (OSError, KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{where}: {exc}") from None
    raise ConfigError(f"{where}: expected a measure object or file path")


def parse_family(v: Any, where: str) -> MeasureFamily:
    if not isinstance(v, str):
        raise ConfigError(f"{where}: expected a family description")
    try:
        return family_from_description(v)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def parse_transform_program(v: Any, where: str) -> str:
    """Bits, or ``{"asm": source}``."""
    if isinstance(v, dict) and "asm" in v:
        try:
            return assemble(v["asm"])
        except ValueError as exc:
            raise ConfigError(f"{where}.asm: {exc}") from None
    return parse_bits_field(v, where)


def _int(v: Any, where: str, minimum: int = 0) -> int:
    if not isinstance(v, int) or isinstance(v, bool) or v < minimum:
        raise ConfigError(f"{where}: expected an integer >= {minimum}, got {v!r}")
    return v


def _path(v: Any, where: str, base_dir: Path) -> Path | None:
    if v is None:
        return None
    if not isinstance(v, str) or not v:
        raise ConfigError(f"{where}: expected a path")
    return base_dir / v


def load_config(path: str | Path) -> tuple[ExperimentConfig, bytes]:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"config: {exc}") from None
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON: {exc}") from None
    return parse_config(data, path.parent), raw


def parse_config(data: Any, base_dir: Path = Path(".")) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("config: expected a JSON object")
    machine = _req(data, "machine", "")
    try:
        get_machine(machine)
    except (UnknownMachine, TypeError):
        raise ConfigError(f"machine: unknown machine {machine!r}; expected TOK or UVM") from None
    cfg = ExperimentConfig(
        machine=machine,
        budget=parse_budget(_req(data, "budget", "")),
        workers=_int(data.get("workers", 1), "workers", 1),
        split_depth=_int(data.get("split_depth", 6), "split_depth", 0),
        drift=bool(data.get("drift", False)),
        manifest=_path(data.get("manifest"), "manifest", base_dir),
        base_dir=base_dir,
    )
    runs = data.get("runs", [])
    if not isinstance(runs, list):
        raise ConfigError("runs: expected a list")
    for i, r in enumerate(runs):
        where = f"runs[{i}]"
        theorem = _req(r, "theorem", where)
        if theorem not in THEOREMS:
            raise ConfigError(f"{where}.theorem: unknown experiment {theorem!r}")
        params = r.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError(f"{where}.params: expected an object")
        cfg.runs.append(RunSpec(theorem, params, _path(r.get("report"), f"{where}.report", base_dir),
                                _path(r.get("csv"), f"{where}.csv", base_dir)))
    return cfg


# ---------------------------------------------------------------------------
# per-experiment parameters


def experiment_args(theorem: str, params: dict, where: str, base_dir: Path) -> dict[str, Any]:
    """Validate ``params`` for one experiment and convert them to keyword arguments."""
    p = f"{where}.params"

    def get(key: str, default: Any = ...) -> Any:
        if key in params:
            return params[key]
        if default is ...:
            raise ConfigError(f"{p}.{key}: missing")
        return default

    def tr(key: str, kind: str):
        v = get(key)
        if isinstance(v, str):
            if v not in TRANSFORM_SOURCES:
                raise ConfigError(f"{p}.{key}: unknown transform {v!r}; known: {', '.join(sorted(TRANSFORM_SOURCES))}")
            t = transform(v)
        elif isinstance(v, dict):
            t = transform_from_program(str(v.get("name", "custom")), kind,
                                       parse_transform_program(_req(v, "program", f"{p}.{key}"), f"{p}.{key}.program"))
        else:
            raise ConfigError(f"{p}.{key}: expected a transform name or object")
        if t.kind != kind:
            raise ConfigError(f"{p}.{key}: transform {t.name!r} is a {t.kind}, expected {kind}")
        return t

    if theorem == "thm1":
        return {"A": tr("transform", FINITE_MAP), "corpus_x": parse_corpus(get("corpus_x"), f"{p}.corpus_x"),
                "corpus_y": parse_corpus(get("corpus_y"), f"{p}.corpus_y")}
    if theorem == "thm2":
        return {"family": parse_family(get("family"), f"{p}.family"),
                "corpus_x": parse_corpus(get("corpus_x"), f"{p}.corpus_x"),
                "corpus_y": parse_corpus(get("corpus_y"), f"{p}.corpus_y")}
    if theorem == "thm3":
        return {"corpus_uv": parse_pair_corpus(get("corpus_uv"), f"{p}.corpus_uv"),
                "support_len": _int(get("support_len", 2), f"{p}.support_len")}
    if theorem == "thm4":
        return {"corpus_u": parse_corpus(get("corpus_u"), f"{p}.corpus_u"),
                "beta": parse_oracle_field(get("beta"), f"{p}.beta"),
                "support_len": _int(get("support_len", 2), f"{p}.support_len")}
    if theorem == "thm5":
        inverse = tr("inverse", OPERATOR) if "inverse" in params else None
        return {"A": tr("transform", OPERATOR), "alphas": parse_oracles(get("alphas"), f"{p}.alphas"),
                "corpus_x": parse_corpus(get("corpus_x"), f"{p}.corpus_x"), "inverse": inverse,
                "gammas": parse_oracles(get("gammas", []), f"{p}.gammas"),
                "support_len": _int(get("support_len", 1), f"{p}.support_len")}
    if theorem == "thm6":
        cases = get("cases")
        if not isinstance(cases, list):
            raise ConfigError(f"{p}.cases: expected a list")
        parsed = []
        for i, c in enumerate(cases):
            w = f"{p}.cases[{i}]"
            measure = parse_measure(_req(c, "measure", w), f"{w}.measure", base_dir)
            for j, key in enumerate(measure.atoms):
                parse_oracle_field(key, f"{w}.measure.atoms[{j}].key")
            parsed.append(Thm6Case(parse_oracle_field(_req(c, "rho", w), f"{w}.rho"), measure,
                                   parse_oracle_field(_req(c, "alpha", w), f"{w}.alpha")))
        return {"cases": parsed, "support_len": _int(get("support_len", 1), f"{p}.support_len")}
    if theorem == "thm7":
        return {"p": parse_transform_program(get("program"), f"{p}.program"),
                "alpha": parse_oracle_field(get("alpha"), f"{p}.alpha"),
                "betas": parse_oracles(get("betas"), f"{p}.betas"),
                "support_len": _int(get("support_len", 1), f"{p}.support_len")}
    raise ConfigError(f"{where}.theorem: unknown experiment {theorem!r}")

