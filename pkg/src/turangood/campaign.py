"""Declarative experiment campaigns with an append-only, resumable result log.

A campaign file is YAML::

    cache: out/cache.jsonl      # append-only result log (also the resume cache)
    output: out/results.csv     # derived table, regenerated on every run
    jobs: 1
    experiments:
      - id: zykov
        kind: goodness          # goodness | ex | optimize | identity | spectral | k0
        H: K3
        F: K4
        n: [4, 8]               # or n_lo / n_hi, or a single integer
        options: {}

Relative paths resolve against the campaign file's directory. When no cache
is given, ``$TURANGOOD_CACHE_DIR/cache.jsonl`` is used if the variable is set.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable

import yaml

from . import __version__
from .counting import contains, count_copies, pair_count_slack
from .families import (
    FamilyError,
    as_graph,
    complete_multipartite,
    cycle,
    parse_family,
    path,
    turan,
    turan_plus_edge,
)
from .graph import Graph, canonical_form, chromatic_number, complete_graph, empty_graph
from .search import (
    MAX_EXHAUSTIVE,
    ex_generalized,
    enumerate_graphs,
    find_k0,
    nonincreasing_compositions,
    optimize_by_search,
    optimize_multipartite,
)
from .spectral import check_path_bound, spectral_radius

log = logging.getLogger(__name__)

KINDS = ("goodness", "ex", "optimize", "identity", "spectral", "k0")
EXHAUSTIVE_KINDS = ("goodness", "ex", "identity", "spectral")
NEEDS_H = ("goodness", "ex", "optimize", "k0")
NEEDS_F = ("goodness", "ex")
CACHE_ENV = "TURANGOOD_CACHE_DIR"
CSV_COLUMNS = ["experiment", "kind", "H", "F", "n", "status", "outputs", "timestamp", "version"]


class ConfigError(ValueError):
    pass


class CacheCorruptError(RuntimeError):
    pass


@dataclass
class Experiment:
    id: str
    kind: str
    H: str | None = None
    F: str | None = None
    n_lo: int | None = None
    n_hi: int | None = None
    options: dict = field(default_factory=dict)

    def ns(self) -> list[int | None]:
        if self.kind == "k0":
            return [None]
        return list(range(self.n_lo, self.n_hi + 1))


@dataclass
class CampaignConfig:
    experiments: list[Experiment]
    cache_path: Path | None = None
    output_path: Path | None = None
    jobs: int = 1


@dataclass
class ResultRow:
    experiment: str
    kind: str
    H: str | None
    F: str | None
    n: int | None
    outputs: dict
    status: str  # pass | fail | report-only
    timestamp: str
    version: str
    key: str

    def to_json(self) -> str:
        return json.dumps(self.__dict__, sort_keys=True)


# ---------------------------------------------------------------------------
# Config parsing
# ---------------------------------------------------------------------------


def _where(node) -> str:
    mark = node.start_mark
    return f"line {mark.line + 1}, column {mark.column + 1}"


def _mapping(node) -> dict[str, Any]:
    if not isinstance(node, yaml.MappingNode):
        raise ConfigError(f"expected a mapping at {_where(node)}")
    out = {}
    for k, v in node.value:
        out[k.value] = v
    return out


def _scalar(node, loader):
    return loader.construct_object(node, deep=True)


def parse_config(text: str, base_dir: Path | None = None) -> CampaignConfig:
    """Parse campaign YAML, reporting problems with their line and column."""
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as exc:
        raise ConfigError(f"YAML syntax error: {exc}") from None
    loader = yaml.SafeLoader("")
    if root is None:
        return CampaignConfig([])
    top = _mapping(root)
    unknown = set(top) - {"cache", "output", "jobs", "experiments"}
    if unknown:
        raise ConfigError(f"unknown top-level keys {sorted(unknown)} at {_where(root)}")

    def path_of(key):
        if key not in top:
            return None
        value = _scalar(top[key], loader)
        if not isinstance(value, str):
            raise ConfigError(f"{key} must be a path string at {_where(top[key])}")
        p = Path(value)
        return p if p.is_absolute() or base_dir is None else base_dir / p

    jobs = _scalar(top["jobs"], loader) if "jobs" in top else 1
    if not isinstance(jobs, int) or jobs < 1:
        raise ConfigError(f"jobs must be a positive integer at {_where(top['jobs'])}")
    experiments = []
    exp_node = top.get("experiments")
    if exp_node is not None:
        if not isinstance(exp_node, yaml.SequenceNode):
            raise ConfigError(f"experiments must be a list at {_where(exp_node)}")
        seen = set()
        for idx, node in enumerate(exp_node.value):
            exp = _parse_experiment(node, idx, loader)
            if exp.id in seen:
                raise ConfigError(f"duplicate experiment id {exp.id!r} at {_where(node)}")
            seen.add(exp.id)
            experiments.append(exp)
    return CampaignConfig(experiments, path_of("cache"), path_of("output"), jobs)


def _parse_experiment(node, idx: int, loader) -> Experiment:
    fields = _mapping(node)
    allowed = {"id", "kind", "H", "F", "n", "n_lo", "n_hi", "options"}
    unknown = set(fields) - allowed
    if unknown:
        raise ConfigError(f"unknown experiment keys {sorted(unknown)} at {_where(node)}")
    value = {k: _scalar(v, loader) for k, v in fields.items()}
    kind = value.get("kind")
    if kind not in KINDS:
        where = _where(fields["kind"]) if "kind" in fields else _where(node)
        raise ConfigError(f"kind must be one of {', '.join(KINDS)} at {where}")
    for key in ("H", "F"):
        if key in value:
            if not isinstance(value[key], str):
                raise ConfigError(f"{key} must be a family string at {_where(fields[key])}")
            try:
                parse_family(value[key])
            except FamilyError as exc:
                raise ConfigError(f"{key}: {exc} at {_where(fields[key])}") from None
    if kind in NEEDS_H and "H" not in value:
        raise ConfigError(f"experiment kind {kind} needs H at {_where(node)}")
    if kind in NEEDS_F and "F" not in value:
        raise ConfigError(f"experiment kind {kind} needs F at {_where(node)}")
    options = value.get("options") or {}
    if not isinstance(options, dict):
        raise ConfigError(f"options must be a mapping at {_where(fields['options'])}")
    n_lo = n_hi = None
    if kind != "k0":
        if "n" in value:
            n = value["n"]
            if isinstance(n, int):
                n_lo = n_hi = n
            elif isinstance(n, list) and len(n) == 2 and all(isinstance(x, int) for x in n):
                n_lo, n_hi = n
            else:
                raise ConfigError(f"n must be an integer or [lo, hi] at {_where(fields['n'])}")
        else:
            n_lo, n_hi = value.get("n_lo"), value.get("n_hi")
        if not isinstance(n_lo, int) or not isinstance(n_hi, int):
            raise ConfigError(f"experiment needs an n range at {_where(node)}")
        if n_lo > n_hi:
            raise ConfigError(f"n_lo > n_hi at {_where(node)}")
        if kind in EXHAUSTIVE_KINDS and n_hi > MAX_EXHAUSTIVE:
            raise ConfigError(f"n_hi={n_hi} exceeds {MAX_EXHAUSTIVE} for exhaustive kind {kind} at {_where(node)}")
        if kind == "optimize" and "r" not in options:
            raise ConfigError(f"optimize needs options.r at {_where(node)}")
    exp_id = value.get("id") or f"{idx}:{kind}:{value.get('H', '')}:{value.get('F', '')}"
    return Experiment(str(exp_id), kind, value.get("H"), value.get("F"), n_lo, n_hi, options)


def load_config(path: str | Path) -> CampaignConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    try:
        return parse_config(text, path.parent)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# Result log
# ---------------------------------------------------------------------------


def read_log(path: Path) -> dict[str, ResultRow]:
    """Load cached rows by key; refuses (raises) on any malformed record.

    A final line without a trailing newline is an interrupted write and is
    dropped from the file before appending resumes.
    """
    rows: dict[str, ResultRow] = {}
    if not path.exists():
        return rows
    data = path.read_bytes()
    complete, sep, partial = data.rpartition(b"\n")
    if partial:
        log.warning("dropping interrupted trailing record in %s", path)
        with open(path, "r+b") as fh:
            fh.truncate(len(complete) + len(sep))
    for lineno, line in enumerate(complete.decode("utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            row = ResultRow(**obj)
        except (json.JSONDecodeError, TypeError) as exc:
            raise CacheCorruptError(f"{path}:{lineno}: corrupt cache record ({exc}); refusing to continue") from None
        rows.setdefault(row.key, row)
    return rows


def _append(path: Path, row: ResultRow) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(row.to_json() + "\n")
        fh.flush()
        os.fsync(fh.fileno())


def rows_to_csv(rows: list[ResultRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([
            r.experiment,
            r.kind,
            r.H or "",
            r.F or "",
            "" if r.n is None else r.n,
            r.status,
            json.dumps(r.outputs, sort_keys=True),
            r.timestamp,
            r.version,
        ])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Experiment kinds
# ---------------------------------------------------------------------------


def _cache_key(exp: Experiment, n: int | None) -> str:
    def canon(spec):
        return canonical_form(as_graph(spec)).bytes.hex() if spec else None

    payload = json.dumps(
        {"id": exp.id, "kind": exp.kind, "H": canon(exp.H), "F": canon(exp.F), "n": n, "options": exp.options},
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def _status(hard_ok: bool, claim_holds: bool) -> str:
    if not hard_ok:
        return "fail"
    return "pass" if claim_holds else "report-only"


def _run_goodness(exp: Experiment, n: int, jobs: int) -> tuple[dict, str]:
    rec = ex_generalized(n, exp.H, exp.F, jobs=jobs)
    hard = bool(rec.turan_f_free) and rec.value >= rec.turan_value
    if exp.options.get("hard_equal"):
        hard = hard and rec.turan_is_extremal
    out = {
        "value": rec.value,
        "turan_value": rec.turan_value,
        "equal": rec.turan_is_extremal,
        "unique": rec.unique_extremal,
        "witness_count": rec.witness_count,
        "graphs_searched": rec.graphs_searched,
    }
    return out, _status(hard, bool(rec.turan_is_extremal))


REFERENCES: dict[str, Callable[[int, int], Graph]] = {
    "turan": turan,
    "turan_plus_edge": turan_plus_edge,
}


def reference_host(name: str, f: Graph, n: int) -> Graph:
    if name not in REFERENCES:
        raise ConfigError(f"unknown reference construction {name!r}")
    r = min(chromatic_number(f) - 1, n)
    return REFERENCES[name](r, n)


def _run_ex(exp: Experiment, n: int, jobs: int) -> tuple[dict, str]:
    rec = ex_generalized(n, exp.H, exp.F, jobs=jobs)
    f, h = as_graph(exp.F), as_graph(exp.H)
    ref_name = exp.options.get("reference", "turan")
    ref = reference_host(ref_name, f, n)
    ref_free = not contains(f, ref)
    ref_value = count_copies(h, ref) if h.n <= n else 0
    hard = ref_free and rec.value >= ref_value
    if exp.options.get("hard_equal"):
        hard = hard and rec.value == ref_value
    out = {
        "value": rec.value,
        "reference": ref_name,
        "reference_value": ref_value,
        "reference_f_free": ref_free,
        "equal": rec.value == ref_value,
        "unique": rec.unique_extremal,
        "witnesses": list(rec.witnesses[:8]),
        "witness_count": rec.witness_count,
        "graphs_searched": rec.graphs_searched,
    }
    return out, _status(hard, rec.value == ref_value)


def _run_optimize(exp: Experiment, n: int, jobs: int) -> tuple[dict, str]:
    r = int(exp.options["r"])
    opt = optimize_multipartite(exp.H, r, n)
    out = {
        "best": [list(cv.sizes) for cv in opt.best],
        "value": opt.value,
        "balanced_value": opt.balanced_value,
        "balanced_is_optimal": opt.balanced_is_optimal,
    }
    hard = True
    if n <= 12:
        cross = optimize_by_search(exp.H, r, n)
        out["cross_check"] = cross
        hard = cross == opt.value
    return out, _status(hard, opt.balanced_is_optimal)


def _run_identity(exp: Experiment, n: int, jobs: int) -> tuple[dict, str]:
    ks = [int(k) for k in exp.options.get("k", [2, 3])]
    slack_zero = True
    hosts = 0
    if n >= 3:
        for r in range(1, n + 1):
            for sizes in nonincreasing_compositions(n, r):
                hosts += 1
                if pair_count_slack(complete_multipartite(sizes)) != 0:
                    slack_zero = False
    k3k1 = pair_count_slack(complete_graph(3).disjoint_union(empty_graph(1)))
    path_cycle_ok = True
    bipartite_equal = True
    graphs = 0
    for g in enumerate_graphs(n, jobs=jobs):
        graphs += 1
        for k in ks:
            if 2 * k > n:
                continue
            if 2 * k * count_copies(cycle(2 * k), g) > count_copies(path(2 * k), g):
                path_cycle_ok = False
    for a in range(1, n):
        b = n - a
        if a < b:
            continue
        g = complete_multipartite((a, b))
        for k in ks:
            if 2 * k <= n and 2 * k * count_copies(cycle(2 * k), g) != count_copies(path(2 * k), g):
                bipartite_equal = False
    out = {
        "multipartite_hosts": hosts,
        "multipartite_slack_zero": slack_zero,
        "k3_plus_k1_slack": k3k1,
        "graphs": graphs,
        "path_cycle_inequality": path_cycle_ok,
        "bipartite_equality": bipartite_equal,
    }
    hard = slack_zero and k3k1 > 0 and path_cycle_ok and bipartite_equal
    return out, _status(hard, True)


def closed_form_radius_errors(n: int) -> dict[str, float]:
    """Largest deviation of the computed spectral radius from closed forms at order ``n``."""
    errs = {}
    if n >= 1:
        errs["K"] = abs(spectral_radius(complete_graph(n)).mu - (n - 1))
    if n >= 2:
        errs["Kab"] = max(
            abs(spectral_radius(complete_multipartite((a, n - a))).mu - math.sqrt(a * (n - a)))
            for a in range(1, n // 2 + 1)
        )
    if n >= 3:
        errs["C"] = abs(spectral_radius(cycle(n)).mu - 2.0)
    return errs


def _run_spectral(exp: Experiment, n: int, jobs: int) -> tuple[dict, str]:
    ls = [int(l) for l in exp.options.get("l", [3, 4, 5])]
    rel = float(exp.options.get("rel_slack", 1e-6))
    eig_tol = float(exp.options.get("closed_form_tol", 1e-8))
    violations = 0
    graphs = 0
    for g in enumerate_graphs(n, jobs=jobs):
        graphs += 1
        for l in ls:
            if not check_path_bound(g, l, rel_slack=rel).holds:
                violations += 1
    errs = closed_form_radius_errors(n)
    worst = max(errs.values()) if errs else 0.0
    out = {
        "graphs": graphs,
        "bound_violations": violations,
        "closed_form_max_error_ok": worst <= eig_tol,
    }
    return out, _status(violations == 0 and worst <= eig_tol, True)


def _run_k0(exp: Experiment, n: int | None, jobs: int) -> tuple[dict, str]:
    k_max = int(exp.options.get("k_max", 8))
    probes = [int(p) for p in exp.options.get("probes", [12, 24])]
    ev = find_k0(exp.H, k_max, probes)
    out = {"k0": ev.k0, "k_max": k_max, "probes": probes, "label": ev.label}
    expect = exp.options.get("expect")
    if expect is None:
        return out, "report-only"
    return out, _status(ev.k0 == expect, True)


RUNNERS = {
    "goodness": _run_goodness,
    "ex": _run_ex,
    "optimize": _run_optimize,
    "identity": _run_identity,
    "spectral": _run_spectral,
    "k0": _run_k0,
}


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------


@dataclass
class CampaignResult:
    rows: list[ResultRow]
    computed: int
    restored: int

    @property
    def failed(self) -> bool:
        return any(r.status == "fail" for r in self.rows)

    @property
    def exit_status(self) -> int:
        return 1 if self.failed else 0


def default_cache_path() -> Path | None:
    d = os.environ.get(CACHE_ENV)
    return Path(d) / "cache.jsonl" if d else None


def run_campaign(
    config: CampaignConfig,
    *,
    jobs: int | None = None,
    progress: Callable[[ResultRow, bool], None] | None = None,
) -> CampaignResult:
    """Run (or restore from cache) every experiment, then regenerate the CSV."""
    jobs = jobs or config.jobs
    cache_path = config.cache_path or default_cache_path()
    cached: dict[str, ResultRow] = {}
    if cache_path is not None:
        cache_path.parent.mkdir(parents=True, exist_ok=True)
        cached = read_log(cache_path)
    rows: list[ResultRow] = []
    computed = restored = 0
    for exp in config.experiments:
        for n in exp.ns():
            key = _cache_key(exp, n)
            if key in cached:
                row = cached[key]
                restored += 1
                fresh = False
            else:
                try:
                    outputs, status = RUNNERS[exp.kind](exp, n, jobs)
                except (ValueError, ArithmeticError) as exc:
                    outputs, status = {"error": str(exc)}, "fail"
                row = ResultRow(
                    experiment=exp.id,
                    kind=exp.kind,
                    H=exp.H,
                    F=exp.F,
                    n=n,
                    outputs=outputs,
                    status=status,
                    timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
                    version=__version__,
                    key=key,
                )
                if cache_path is not None:
                    _append(cache_path, row)
                cached[key] = row
                computed += 1
                fresh = True
            rows.append(row)
            if progress:
                progress(row, fresh)
    if config.output_path is not None:
        config.output_path.parent.mkdir(parents=True, exist_ok=True)
        config.output_path.write_text(rows_to_csv(rows))
    return CampaignResult(rows, computed, restored)
