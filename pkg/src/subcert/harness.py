"""Experiment harness: file loaders, synthetic generators, the runner that
sweeps (instance, algorithm, k) cells, and the CSV/JSON report emitter.

Reports are deterministic given the config and seeds: the CSV body carries
no timing columns, and JSON wall-time fields are the only thing that varies
between identical reruns.
"""

import csv
import hashlib
import io
import json
import time
import warnings
from dataclasses import dataclass, field
from math import inf

import numpy as np

from .benchmarks import (curvature_exact, curvature_heuristic, marginal_bound,
                         sharpness_guarantee, topk_bound)
from .bipartite import BipartiteGraph
from .dual_coverage import (additive_dual_bound, exact_max_coverage,
                            partition_dual_bound)
from .dual_submodular import default_pivots, dual, method3
from .maximizers import (DEFAULT_ENUM_CAP, brute_force_opt, greedy,
                         local_search, random_greedy, sample_greedy)
from .objectives import (CoverageOracle, additive_oracle, adversarial_instance,
                         coverage_oracle, counted,
                         entropy_oracle, facility_location_oracle,
                         movie_rec_oracle, movie_rec_power_oracle,
                         revenue_oracle, weighted_coverage_oracle)

BOUND_METHODS = ("method1", "method2", "method3", "dual", "topk", "marginal",
                 "curvature", "curvature-exact", "sharpness", "opt")
ALGORITHMS = ("greedy", "local-search", "sample-greedy", "random-greedy")


# --------------------------------------------------------------------------
# loaders
# --------------------------------------------------------------------------

class LoadError(ValueError):
    pass


def load_bipartite(path):
    """Parse a bipartite edge list: first line "|P| |D|", then "a b" pairs.

    '#' starts a comment; duplicate edges are dropped with a warning;
    isolated dual elements are rejected.
    """
    header = None
    edges = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise LoadError(f"{path}:{lineno}: expected two integers")
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError:
                raise LoadError(f"{path}:{lineno}: expected two integers") from None
            if header is None:
                header = (a, b)
            else:
                edges.append((a, b))
    if header is None:
        raise LoadError(f"{path}: empty file")
    if not edges:
        raise LoadError(f"{path}: no edges (every dual element is isolated)")
    graph = BipartiteGraph(header[0], header[1], edges)
    if graph.duplicate_count:
        warnings.warn(f"{path}: dropped {graph.duplicate_count} duplicate edge(s)")
    return graph


def load_matrix(path, header=False):
    """Parse a rectangular CSV of 64-bit floats; ``header`` skips one row."""
    rows = []
    with open(path) as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if header and lineno == 1:
                continue
            if not row:
                continue
            try:
                rows.append([float(c) for c in row])
            except ValueError:
                raise LoadError(f"{path}:{lineno}: non-numeric cell") from None
    if not rows:
        raise LoadError(f"{path}: empty matrix")
    width = len(rows[0])
    for i, r in enumerate(rows, start=1 + int(header)):
        if len(r) != width:
            raise LoadError(f"{path}:{i}: ragged row ({len(r)} != {width})")
    return np.array(rows, dtype=np.float64)


# --------------------------------------------------------------------------
# generators
# --------------------------------------------------------------------------

def random_bipartite(primal, dual, p=None, degree=None, seed=0):
    """Random bipartite graph; isolated duals get one extra random edge."""
    rng = np.random.default_rng(seed)
    if (p is None) == (degree is None):
        raise ValueError("give exactly one of p or degree")
    if p is not None:
        mask = rng.random((primal, dual)) < p
        a, b = np.nonzero(mask)
        edges = np.column_stack((a, b))
    else:
        degree = int(degree)
        a = np.repeat(np.arange(primal), degree)
        b = rng.integers(0, dual, size=a.size)
        edges = np.column_stack((a, b))
    present = np.zeros(dual, dtype=bool)
    if edges.size:
        present[edges[:, 1]] = True
    missing = np.flatnonzero(~present)
    if missing.size:
        extra = np.column_stack(
            (rng.integers(0, primal, size=missing.size), missing))
        edges = np.vstack((edges, extra)) if edges.size else extra
    return BipartiteGraph(primal, dual, edges)


def generate(family, params, seed=0):
    """Reproducible synthetic instance; returns (oracle, meta).

    Families: random-bipartite (coverage; ``weighted`` adds uniform dual
    weights), random-ratings (facility-location by default, or the
    recommendation objectives via ``objective``), random-revenue, and
    adversarial.
    """
    params = dict(params)
    rng = np.random.default_rng(seed)
    if family == "random-bipartite":
        graph = random_bipartite(int(params.get("primal", 50)),
                                 int(params.get("dual", 80)),
                                 p=params.get("p"),
                                 degree=params.get("degree"),
                                 seed=seed)
        if params.get("weighted"):
            w = rng.uniform(0.5, 2.0, size=graph.dual_count)
            return weighted_coverage_oracle(graph, w), {"graph": graph,
                                                        "weights": w}
        return coverage_oracle(graph), {"graph": graph}
    if family == "random-ratings":
        rows = int(params.get("rows", 40))
        cols = int(params.get("cols", 20))
        levels = int(params.get("levels", 6))
        ratings = rng.integers(0, levels, size=(rows, cols)).astype(np.float64)
        objective = params.get("objective", "facility")
        if objective == "facility":
            return facility_location_oracle(ratings), {"ratings": ratings}
        if objective == "movie-rec":
            thr = float(params.get("threshold", 4.5))
            return movie_rec_oracle(ratings, thr), {"ratings": ratings}
        if objective == "movie-rec-power":
            alpha = float(params.get("alpha", 0.8))
            return movie_rec_power_oracle(ratings, alpha), {"ratings": ratings}
        raise ValueError(f"unknown ratings objective {objective!r}")
    if family == "random-revenue":
        n = int(params.get("n", 20))
        alpha = float(params.get("alpha", 0.9))
        density = float(params.get("density", 0.3))
        w = rng.uniform(0.0, 1.0, size=(n, n))
        w *= rng.random((n, n)) < density
        return revenue_oracle(w, alpha), {"weights": w}
    if family == "adversarial":
        n = int(params.get("n", 50))
        c = float(params.get("c", 10.0))
        k = params.get("k")
        return adversarial_instance(n, c, k), {}
    raise ValueError(f"unknown generator family {family!r}")


# --------------------------------------------------------------------------
# objective spec strings (CLI surface)
# --------------------------------------------------------------------------

def parse_objective(spec, seed=0):
    """Build an oracle from a "family:key=value,..." spec string.

    File-backed: coverage:path=..., facility:path=...[,header=1],
    movie-rec:path=..., movie-rec-power:path=..., revenue:path=...,
    entropy:path=...[,label=1], weighted-coverage:path=...,weights=...,
    additive:values=a:b:c.  Synthetic: the ``generate`` families plus
    per-family size/shape parameters.
    """
    family, _, rest = spec.partition(":")
    family = family.strip()
    params = {}
    if rest:
        for item in rest.split(","):
            key, _, value = item.partition("=")
            if not _:
                raise ValueError(f"malformed objective parameter {item!r}")
            params[key.strip()] = value.strip()
    seed = int(params.pop("seed", seed))
    header = bool(int(params.pop("header", 0))) if "header" in params else False

    if family == "coverage":
        if "path" in params:
            graph = load_bipartite(params["path"])
            return coverage_oracle(graph), {"graph": graph}
        return generate("random-bipartite",
                        {k: float(v) if k == "p" else v
                         for k, v in params.items()}, seed)
    if family == "weighted-coverage":
        graph = load_bipartite(params["path"])
        w = load_matrix(params["weights"]).ravel()
        return weighted_coverage_oracle(graph, w), {"graph": graph, "weights": w}
    if family == "facility":
        if "path" in params:
            m = load_matrix(params["path"], header=header)
            return facility_location_oracle(m), {"ratings": m}
        return generate("random-ratings", dict(params, objective="facility"), seed)
    if family == "movie-rec":
        if "path" in params:
            m = load_matrix(params["path"], header=header)
            thr = float(params.get("threshold", 4.5))
            return movie_rec_oracle(m, thr), {"ratings": m}
        return generate("random-ratings", dict(params, objective="movie-rec"), seed)
    if family == "movie-rec-power":
        if "path" in params:
            m = load_matrix(params["path"], header=header)
            alpha = float(params.get("alpha", 0.8))
            return movie_rec_power_oracle(m, alpha), {"ratings": m}
        return generate("random-ratings",
                        dict(params, objective="movie-rec-power"), seed)
    if family == "revenue":
        if "path" in params:
            m = load_matrix(params["path"], header=header)
            return revenue_oracle(m, float(params.get("alpha", 0.9))), {}
        return generate("random-revenue", params, seed)
    if family == "entropy":
        if "path" not in params:
            raise ValueError("entropy objectives are file-backed (path=...)")
        m = load_matrix(params["path"], header=header)
        if params.get("label"):
            return entropy_oracle(m[:, :-1], labels=m[:, -1]), {}
        return entropy_oracle(m), {}
    if family == "additive":
        if "values" in params:
            vals = [float(x) for x in params["values"].split(":")]
            return additive_oracle(vals), {}
        n = int(params.get("n", 20))
        rng = np.random.default_rng(seed)
        return additive_oracle(rng.uniform(0.1, 10.0, size=n)), {}
    if family == "adversarial":
        return generate("adversarial", params, seed)
    raise ValueError(f"unknown objective family {family!r}")


# --------------------------------------------------------------------------
# configs and reports
# --------------------------------------------------------------------------

@dataclass
class InstanceSpec:
    name: str
    objective: str
    ks: list = None  # per-instance override of the global schedule


@dataclass
class ExperimentConfig:
    instances: list
    ks: list
    algorithms: list = field(default_factory=lambda: ["greedy"])
    bounds: list = field(default_factory=lambda: ["method3", "dual", "topk",
                                                  "marginal"])
    seeds: list = field(default_factory=lambda: [0, 1, 2, 3, 4])
    epsilon: float = 0.1
    cap: int = DEFAULT_ENUM_CAP
    pivot_dense: int = 20
    pivot_sparse: list = field(default_factory=lambda: [25, 30, 35, 40, 45, 50])
    out: str = None
    format: str = "json"

    @classmethod
    def from_dict(cls, raw):
        raw = dict(raw)
        instances = [InstanceSpec(name=i.get("name", i["objective"]),
                                  objective=i["objective"],
                                  ks=i.get("ks"))
                     for i in raw.pop("instances")]
        ks = [int(k) for k in raw.pop("ks", [])]
        cfg = cls(instances=instances, ks=ks)
        for key, value in raw.items():
            if not hasattr(cfg, key):
                raise ValueError(f"unknown config key {key!r}")
            setattr(cfg, key, value)
        for inst in cfg.instances:
            if not (inst.ks or cfg.ks):
                raise ValueError(f"instance {inst.name}: no k schedule")
            sched = inst.ks or cfg.ks
            if any(b <= a for a, b in zip(sched, sched[1:])):
                raise ValueError(f"instance {inst.name}: k schedule must be "
                                 "strictly increasing")
        unknown = set(cfg.bounds) - set(BOUND_METHODS)
        if unknown:
            raise ValueError(f"unknown bound methods {sorted(unknown)}")
        unknown = set(cfg.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms {sorted(unknown)}")
        return cfg

    def canonical(self):
        return {
            "instances": [{"name": i.name, "objective": i.objective,
                           "ks": i.ks} for i in self.instances],
            "ks": self.ks, "algorithms": list(self.algorithms),
            "bounds": list(self.bounds), "seeds": list(self.seeds),
            "epsilon": self.epsilon, "cap": self.cap,
            "pivot_dense": self.pivot_dense,
            "pivot_sparse": list(self.pivot_sparse),
        }


def load_config(path):
    text = open(path, "rb").read()
    if str(path).endswith(".toml"):
        try:
            import tomllib as toml_mod  # py311+
        except ImportError:
            import tomli as toml_mod
        raw = toml_mod.loads(text.decode())
    else:
        raw = json.loads(text.decode())
    return ExperimentConfig.from_dict(raw)


@dataclass
class ReportRow:
    instance: str
    n: int
    k: int
    algorithm: str
    seed: object          # None for deterministic algorithms / mean rows
    value: float
    evals: int
    wall_ms: float
    bounds: dict
    ratios: dict
    errors: dict = field(default_factory=dict)


@dataclass
class BoundTiming:
    instance: str
    k: int
    bound: str
    value: float
    wall_ms: float
    evals: int
    error: str = None


@dataclass
class BoundReport:
    config_hash: str
    instances: list                      # [(name, n)]
    rows: list = field(default_factory=list)
    bound_timings: list = field(default_factory=list)
    failed_cells: int = 0

    def to_json_dict(self):
        inst_out = []
        for name, n in self.instances:
            rows = [{
                "k": r.k, "algorithm": r.algorithm, "seed": r.seed,
                "value": r.value, "bounds": r.bounds, "ratio": r.ratios,
                "evals": r.evals, "wall_ms": r.wall_ms,
                **({"errors": r.errors} if r.errors else {}),
            } for r in self.rows if r.instance == name]
            timings = [{
                "k": t.k, "bound": t.bound, "value": t.value,
                "wall_ms": t.wall_ms, "evals": t.evals,
                **({"error": t.error} if t.error else {}),
            } for t in self.bound_timings if t.instance == name]
            inst_out.append({"name": name, "n": n, "rows": rows,
                             "bound_timings": timings})
        return {"config_hash": self.config_hash, "instances": inst_out}

    def to_csv_text(self):
        """Deterministic flat table: no timing columns, 10-significant-digit
        floats, stable column order."""
        bound_names = sorted({b for r in self.rows for b in r.bounds})
        cols = (["instance", "n", "k", "algorithm", "seed", "value", "evals"]
                + [f"bound_{b}" for b in bound_names]
                + [f"ratio_{b}" for b in bound_names])
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        meta = dict(self.instances)
        for r in self.rows:
            if r.seed is not None:
                continue  # per-seed rows live in the JSON emission only
            row = [r.instance, meta[r.instance], r.k, r.algorithm, "",
                   _fmt(r.value), r.evals]
            row += [_fmt(r.bounds.get(b)) for b in bound_names]
            row += [_fmt(r.ratios.get(b)) for b in bound_names]
            writer.writerow(row)
        return buf.getvalue()


def _fmt(x):
    if x is None:
        return ""
    return f"{float(x):.10g}"


def emit(report, fmt, path=None):
    """Serialize a report; returns the text, writing it to ``path`` if given."""
    if fmt == "json":
        text = json.dumps(report.to_json_dict(), indent=1, sort_keys=True)
    elif fmt == "csv":
        text = report.to_csv_text()
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


# --------------------------------------------------------------------------
# runner
# --------------------------------------------------------------------------

def _config_hash(config):
    blob = json.dumps(config.canonical(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _is_plain_coverage(oracle):
    inner = getattr(oracle, "inner", oracle)
    return isinstance(inner, CoverageOracle) and inner.unweighted


def _compute_bound(name, oracle, meta, trace, k, config):
    """One bound value for an (instance, k) cell; raises on infeasibility."""
    graph = meta.get("graph")
    if name in ("method1", "method2"):
        if graph is None:
            raise ValueError(f"{name} needs a coverage instance")
        if name == "method1":
            return float(additive_dual_bound(graph, k) - 1)
        return float(partition_dual_bound(graph, k))
    if name == "method3":
        return float(method3(oracle, k)[0])
    if name == "dual":
        pivots = default_pivots(trace, dense=config.pivot_dense,
                                sparse=tuple(config.pivot_sparse))
        values = [0.0 if not p else trace.value_at(len(p)) for p in pivots]
        if k <= trace.kmax and trace.prefix(k) not in pivots:
            pivots.append(trace.prefix(k))
            values.append(trace.value_at(k))
        return float(dual(oracle, k, pivots, pivot_values=values).bound)
    if name == "topk":
        return float(topk_bound(oracle, k))
    if name == "marginal":
        return float(marginal_bound(trace, k))
    if name == "curvature":
        est = curvature_heuristic(oracle, k)
        return trace.value_at(min(k, trace.kmax)) / est.guarantee
    if name == "curvature-exact":
        est = curvature_exact(oracle)
        return trace.value_at(min(k, trace.kmax)) / est.guarantee
    if name == "sharpness":
        prof = sharpness_guarantee(oracle, k, cap=config.cap)
        return trace.value_at(min(k, trace.kmax)) / prof.guarantee
    if name == "opt":
        if graph is not None and _is_plain_coverage(oracle):
            return float(exact_max_coverage(graph, k, cap=config.cap))
        return float(brute_force_opt(oracle, k, cap=config.cap)[1])
    raise ValueError(f"unknown bound method {name!r}")


def _check_referenced_files(config):
    import os

    for inst in config.instances:
        _, _, rest = inst.objective.partition(":")
        for item in rest.split(","):
            key, _, value = item.partition("=")
            if key.strip() in ("path", "weights") and value \
                    and not os.path.exists(value.strip()):
                raise FileNotFoundError(
                    f"instance {inst.name}: missing file {value.strip()!r}")


def run(config):
    """Execute a full experiment sweep and assemble the BoundReport.

    Referenced data files are checked up front; per-cell failures are
    recorded on the affected rows and counted in ``failed_cells``, and the
    sweep itself keeps going.
    """
    _check_referenced_files(config)
    report = BoundReport(config_hash=_config_hash(config), instances=[])
    for inst in config.instances:
        oracle_raw, meta = parse_objective(inst.objective)
        oracle, counter = counted(oracle_raw)
        report.instances.append((inst.name, oracle.n))
        ks = inst.ks or config.ks
        kmax = min(oracle.n, max(max(ks), 2,
                                 config.pivot_dense if "dual" in config.bounds
                                 or "marginal" in config.bounds else 0))
        before = counter.count
        trace = greedy(oracle, kmax)
        greedy_evals = counter.count - before

        bound_cells = {}
        for k in ks:
            for name in config.bounds:
                t0 = time.perf_counter()
                before = counter.count
                try:
                    val = _compute_bound(name, oracle, meta, trace, k, config)
                    err = None
                except Exception as exc:  # cell errors must not kill the run
                    val, err = None, f"{type(exc).__name__}: {exc}"
                    report.failed_cells += 1
                wall = (time.perf_counter() - t0) * 1e3
                report.bound_timings.append(BoundTiming(
                    inst.name, k, name, val, wall, counter.count - before, err))
                bound_cells[(k, name)] = (val, err)

        def emit_row(k, algorithm, seed, value, evals, wall):
            bounds, ratios, errors = {}, {}, {}
            for name in config.bounds:
                val, err = bound_cells[(k, name)]
                if err is not None:
                    errors[name] = err
                    continue
                bounds[name] = val
                ratios[name] = (value / val) if val and val > 0 else None
            report.rows.append(ReportRow(
                inst.name, oracle.n, k, algorithm, seed, value, evals, wall,
                bounds, ratios, errors))

        for algorithm in config.algorithms:
            if algorithm == "greedy":
                for k in ks:
                    kk = min(k, trace.kmax)
                    emit_row(k, "greedy", None, trace.value_at(kk),
                             greedy_evals, float(trace.step_ms[kk - 1]))
            elif algorithm == "local-search":
                for k in ks:
                    t0 = time.perf_counter()
                    before = counter.count
                    try:
                        sol = local_search(oracle, min(k, oracle.n))
                        value = float(oracle.eval(sol))
                    except Exception as exc:
                        report.failed_cells += 1
                        report.rows.append(ReportRow(
                            inst.name, oracle.n, k, algorithm, None, inf, 0,
                            0.0, {}, {}, {"algorithm": str(exc)}))
                        continue
                    emit_row(k, "local-search", None, value,
                             counter.count - before,
                             (time.perf_counter() - t0) * 1e3)
            else:  # randomized: per-seed rows plus a mean row
                for k in ks:
                    per_seed = []
                    for seed in config.seeds:
                        before = counter.count
                        t0 = time.perf_counter()
                        if algorithm == "sample-greedy":
                            tr = sample_greedy(oracle, min(k, oracle.n),
                                               config.epsilon, seed)
                        else:
                            tr = random_greedy(oracle, min(k, oracle.n), seed)
                        wall = (time.perf_counter() - t0) * 1e3
                        value = tr.value_at(min(k, tr.kmax))
                        evals = counter.count - before
                        per_seed.append((seed, value, evals, wall))
                        emit_row(k, algorithm, seed, value, evals, wall)
                    emit_row(k, algorithm, None,
                             float(np.mean([v for _, v, _, _ in per_seed])),
                             int(np.mean([e for _, _, e, _ in per_seed])),
                             float(np.mean([w for _, _, _, w in per_seed])))
    return report
