"""Command-line front end: reproducible check runs, degeneration sweeps, and
cross-ratio tables from a JSON experiment config.

Exit codes: 0 all checks pass, 1 any failure, 2 indeterminate only,
64 config error, 65 construction failure.  Identical config and seed give
byte-identical outputs.
"""

import argparse
import itertools
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .numlin import TolerancePolicy
from .groups import octagon_holonomy, schottky_holonomy, ConstructionFailed, \
    cyclically_ordered, DegenerateAngles
from .grassmann import cross_ratio_k_signlog, NotInDomain
from .reps import (
    MarkedRep, MarkedGroup, fuchsian_rep, sec71_family, DeformationPath,
    boundary_flag_samples,
)
from .checkers import CHECKS, SampleConfig, sweep_deformation

EXIT_PASS, EXIT_FAIL, EXIT_INDET = 0, 1, 2
EXIT_CONFIG, EXIT_CONSTRUCTION = 64, 65


class ConfigError(Exception):
    """Experiment config is malformed."""


def _holonomy(spec):
    if spec == "octagon" or spec is None:
        return octagon_holonomy()
    if isinstance(spec, dict) and spec.get("type") == "schottky":
        return schottky_holonomy(float(spec.get("spread", 3.0)))
    raise ConfigError(f"unknown holonomy spec {spec!r}")


def build_representation(rspec):
    """MarkedRep or DeformationPath from its config dict."""
    if not isinstance(rspec, dict) or "type" not in rspec:
        raise ConfigError("representation spec must be a dict with a 'type'")
    kind = rspec["type"]
    if kind == "fuchsian":
        mi = rspec.get("multiindex")
        if not mi:
            raise ConfigError("fuchsian spec needs a multiindex")
        if any(a < b for a, b in zip(mi, mi[1:])):
            raise ConfigError(f"multiindex must be non-increasing, got {mi}")
        return fuchsian_rep(mi, _holonomy(rspec.get("holonomy")))
    if kind == "sec71":
        return sec71_family(float(rspec.get("lam", 2.0)), int(rspec.get("n", 1)))
    if kind == "explicit":
        gens = [np.asarray(g, dtype=float) for g in rspec["generators"]]
        gspec = rspec.get("group", {"kind": "free", "rank": len(gens)})
        group = MarkedGroup(
            gspec["kind"], genus=gspec.get("genus", 0), rank=gspec.get("rank", 0)
        )
        return MarkedRep(group, gens[0].shape[0], gens, label=rspec.get("label", "explicit"))
    if kind == "scaling_path":
        split = rspec.get("multiindex_split")
        if not split or len(split) != 2:
            raise ConfigError("scaling_path needs multiindex_split = [mi1, mi2]")
        hol = _holonomy(rspec.get("holonomy"))
        eta1 = fuchsian_rep(split[0], hol)
        eta2 = fuchsian_rep(split[1], hol)
        chi = {int(g): float(v) for g, v in rspec.get("chi", {"1": 1.0}).items()}
        return DeformationPath(eta1, eta2, chi)
    raise ConfigError(f"unknown representation type {kind!r}")


def _sample_config(cspec, seed):
    kwargs = dict(cspec.get("cfg", {}))
    tol_kwargs = kwargs.pop("tol", None)
    if tol_kwargs:
        kwargs["tol"] = TolerancePolicy(**tol_kwargs)
    kwargs.setdefault("seed", seed)
    try:
        return SampleConfig(**kwargs)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"bad sample config: {e}") from e


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"not JSON serializable: {type(o)}")


def _write_json(path, obj):
    path.write_text(json.dumps(obj, sort_keys=True, indent=1, default=_json_default) + "\n")


def _verdict_exit(verdicts):
    if any(v == "fail" for v in verdicts):
        return EXIT_FAIL
    if any(v == "indeterminate" for v in verdicts):
        return EXIT_INDET
    return EXIT_PASS


def cmd_check(config, out_dir, seed, jobs=1):
    rep = build_representation(config["representation"])
    if isinstance(rep, DeformationPath):
        raise ConfigError("'check' expects a plain representation, not a path")
    checks = config.get("checks")
    if not checks:
        raise ConfigError("config has no checks")
    tasks = []
    for i, cspec in enumerate(checks):
        name = cspec.get("name")
        if name not in CHECKS:
            raise ConfigError(f"unknown check {name!r} (have {sorted(CHECKS)})")
        k = int(cspec.get("k", 1))
        cfg = _sample_config(cspec, seed)
        kwargs = {}
        if name == "hyperconvexity":
            if "partition" not in cspec:
                raise ConfigError("hyperconvexity check needs a partition")
            kwargs["partition"] = tuple(cspec["partition"])
        tasks.append((i, name, k, cfg, kwargs))

    def run(task):
        i, name, k, cfg, kwargs = task
        return i, CHECKS[name](rep, k, cfg=cfg, **kwargs)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            results = sorted(ex.map(run, tasks))
    else:
        results = [run(t) for t in tasks]

    verdicts = []
    summary = {"label": rep.label, "seed": seed, "reports": []}
    for (i, report), task in zip(results, tasks):
        name, k = task[1], task[2]
        fname = f"report_{i:02d}_{name}_k{k}.json"
        _write_json(out_dir / fname, report.to_dict())
        verdicts.append(report.verdict)
        summary["reports"].append({
            "file": fname, "check": name, "k": k, "verdict": report.verdict,
            "samples_tested": report.samples_tested,
            "failures": len(report.failures), "extremal": report.extremal,
        })
    _write_json(out_dir / "summary.json", summary)
    return _verdict_exit(verdicts)


def _t_grid(gspec):
    try:
        start, stop = float(gspec["start"]), float(gspec["stop"])
        step = float(gspec["step"])
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"bad t_grid spec: {e}") from e
    if step <= 0 or stop < start:
        raise ConfigError("t_grid needs step > 0 and stop >= start")
    n = int(round((stop - start) / step)) + 1
    grid = [start + i * step for i in range(n)]
    if not grid:
        raise ConfigError("empty t_grid")
    return grid


def cmd_sweep(config, out_dir, seed, jobs=1):
    path = build_representation(config["representation"])
    if not isinstance(path, DeformationPath):
        raise ConfigError("'sweep' expects a scaling_path representation")
    sspec = config.get("sweep", {})
    grid = _t_grid(sspec.get("t_grid", {"start": 0.0, "stop": 3.0, "step": 0.1}))
    k = int(sspec.get("k", 2))
    checks = sspec.get("checks", ["gaps"])
    for name in checks:
        if name not in CHECKS:
            raise ConfigError(f"unknown check {name!r}")
        if name == "hyperconvexity":
            raise ConfigError("hyperconvexity is not sweepable (needs a partition)")
    cfg = _sample_config(sspec, seed)
    check_cfgs = {
        name: _sample_config(sub, seed)
        for name, sub in sspec.get("check_cfgs", {}).items()
    }
    result = sweep_deformation(
        path, grid, checks, k, cfg, check_cfgs=check_cfgs,
        crossing_log_tol=sspec.get("crossing_log_tol"),
    )
    (out_dir / "sweep.csv").write_text("\n".join(result.to_csv_lines()) + "\n")
    _write_json(out_dir / "sweep_summary.json", result.summary)
    verdicts = [row[f"{name}_verdict"] for row in result.rows for name in checks]
    return _verdict_exit(verdicts)


def cmd_crosstable(config, out_dir, seed, jobs=1):
    rep = build_representation(config["representation"])
    if isinstance(rep, DeformationPath):
        raise ConfigError("'crosstable' expects a plain representation")
    cspec = config.get("crosstable", {})
    k = int(cspec.get("k", 1))
    cfg = _sample_config(cspec, seed)
    include_reversed = bool(cspec.get("include_reversed", False))
    d = rep.dim
    samples, _ = boundary_flag_samples(
        rep, cfg.word_length, {k, d - k}, n_samples=cfg.n_samples, tol=cfg.tol,
        min_separation=cfg.min_separation,
    )
    samples = sorted(samples, key=lambda s: s.angle)
    lines = ["theta1,theta2,theta3,theta4,ordered,sign,log_magnitude,value"]
    combos = list(itertools.combinations(samples, 4))
    rng = np.random.default_rng(seed)
    if len(combos) > cfg.max_tuples:
        keep = rng.choice(len(combos), size=cfg.max_tuples, replace=False)
        combos = [combos[i] for i in sorted(keep)]
    for combo in combos:
        orders = [combo]
        if include_reversed:
            orders.append(tuple(reversed(combo)))
        for quad in orders:
            x, y, z, w = quad
            try:
                ordered = cyclically_ordered([s.angle for s in quad])
            except DegenerateAngles:
                continue
            try:
                sign, logmag = cross_ratio_k_signlog(
                    x.flags[k], y.flags[d - k], z.flags[d - k], w.flags[k], cfg.tol
                )
                value = (
                    float("inf") if logmag == np.inf
                    else (0.0 if logmag == -np.inf else sign * float(np.exp(logmag)))
                )
            except NotInDomain:
                sign, logmag, value = 0, float("nan"), float("nan")
            lines.append(
                f"{x.angle:.17g},{y.angle:.17g},{z.angle:.17g},{w.angle:.17g},"
                f"{int(ordered)},{sign},{logmag:.17g},{value:.17g}"
            )
    (out_dir / "crosstable.csv").write_text("\n".join(lines) + "\n")
    return EXIT_PASS


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="posrep",
        description="Sampled certification of positivity and Anosov gap properties "
                    "for surface-group representations.",
    )
    parser.add_argument("--config", required=True, help="path to the JSON experiment config")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--out", default=None, help="output directory (default: config's 'out' or '.')")
    parser.add_argument("--jobs", type=int, default=1, help="parallel check execution")
    parser.add_argument("command", choices=["check", "sweep", "crosstable"])
    args = parser.parse_args(argv)

    try:
        config = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    seed = args.seed if args.seed is not None else config.get("seed")
    if seed is None:
        print("config error: a seed is mandatory (config 'seed' or --seed)", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = Path(args.out or config.get("out", "."))
    out_dir.mkdir(parents=True, exist_ok=True)

    try:
        handler = {"check": cmd_check, "sweep": cmd_sweep, "crosstable": cmd_crosstable}
        return handler[args.command](config, out_dir, int(seed), jobs=args.jobs)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ConstructionFailed as e:
        print(f"construction failed: {e}", file=sys.stderr)
        return EXIT_CONSTRUCTION


if __name__ == "__main__":
    sys.exit(main())
