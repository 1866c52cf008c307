"""Command-line front end: ``cfindex validate|build|regress|report``.

Exit codes: 0 success, 1 data or model failure, 2 usage or configuration failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from cfindex import errors
from cfindex.config import RunConfig, load_config
from cfindex.core import apply_prep, read_long_csv, validate_dataset
from cfindex.panel import (
    PanelSample, describe, describe_rows, fixed_effects, hausman, hausman_rows, pooled_ols,
    random_effects, regression_report, regression_rows, render_text, simulate_panel,
)
from cfindex.pipeline import build_composite, summarize
from cfindex.ssm import SsmReport

EXIT_OK, EXIT_DATA, EXIT_USAGE = 0, 1, 2


def _csv_text(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_all(out: Path, files: dict[str, str]) -> list[Path]:
    """Write every file or none: anything written before a failure is removed."""
    out.mkdir(parents=True, exist_ok=True)
    written = []
    try:
        for name, text in files.items():
            p = out / name
            p.write_text(text, encoding="utf-8", newline="\n")
            written.append(p)
    except OSError:
        for p in written:
            p.unlink(missing_ok=True)
        raise
    return written


def _out_dir(cfg: RunConfig, override) -> Path:
    out = Path(override) if override else cfg.output
    if out is None:
        raise errors.ConfigError("no output directory: pass --out or set 'output'")
    return out


def _load_dataset(cfg: RunConfig):
    if cfg.dataset is None or cfg.hierarchy is None:
        raise errors.ConfigError("configuration needs 'dataset' and 'hierarchy'")
    records = read_long_csv(cfg.dataset)
    return validate_dataset(records, cfg.hierarchy, cfg.entities, cfg.years)


def ssm_rows(reports: dict[str, SsmReport], pooled: SsmReport, decimals: int) -> list[list[str]]:
    rows = [["scope", "method", *map(str, pooled.years), "mean"]]
    for scope, rep in [*reports.items(), ("pooled", pooled)]:
        for row in rep.table(decimals)[1:]:
            rows.append([scope, *row])
    return rows


def run_build(cfg: RunConfig, out: Path, pooled_override: SsmReport | None = None) -> list[Path]:
    """Build every index table, the loss table and the manifest into ``out``."""
    ds = _load_dataset(cfg)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        result = build_composite(ds, cfg.hierarchy, cfg.options, pooled_override)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    nd = cfg.rounding.index
    files = {}
    for series in (*result.groups, result.top):
        files[f"{series.name.lower()}.csv"] = _csv_text(summarize(series).rows(nd))
    files["ssm.csv"] = _csv_text(ssm_rows(result.reports, result.pooled, cfg.rounding.ssm))
    manifest = {
        "config": cfg.resolved(),
        "inputs": {cfg.dataset.name: _sha256(cfg.dataset)},
        "selected_method": result.selected.value,
        "mean_loss": {m.value: round(float(v), 12)
                      for m, v in zip(result.pooled.methods, result.pooled.means)},
        "outputs": sorted(files),
        "warnings": sorted({str(w.message) for w in caught}),
    }
    files["manifest.json"] = json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    return _write_all(out, files)


def _regression_sample(cfg: RunConfig, seed: int) -> PanelSample:
    reg = cfg.regression
    if reg.data is not None:
        return PanelSample.from_csv(reg.data, reg.regressors, reg.response)
    if reg.simulate:
        sim = dict(reg.simulate)
        try:
            return simulate_panel(
                int(sim.get("entities", 50)), int(sim.get("periods", 10)),
                sim.get("beta", [0.5, -0.2, 1.0]), float(sim.get("sigma_u", 1.0)),
                float(sim.get("sigma_e", 1.0)), np.random.default_rng(seed),
                float(sim.get("intercept", 1.0)),
            )
        except (TypeError, ValueError) as exc:
            raise errors.ConfigError(f"invalid regression.simulate block: {exc}") from None
    raise errors.ConfigError("regression needs 'data' or a 'simulate' block")


def run_regress(cfg: RunConfig, out: Path, seed: int = 0) -> list[Path]:
    reg = cfg.regression
    sample = _regression_sample(cfg, seed)
    nd = cfg.rounding.regression
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        pooled = pooled_ols(sample, reg.time_effects)
        fe = fixed_effects(sample, reg.time_effects, reg.effects)
        re = random_effects(sample, reg.time_effects, reg.effects)
        label = "Cross-section random" if reg.effects == "entity" else "Period random"
        h = hausman(fe, re, reg.hausman_threshold, label)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    files = {
        "describe.csv": _csv_text(describe_rows(describe(sample), nd)),
        "hausman.txt": render_text(hausman_rows(h)) + f"Recommendation: {h.recommendation}\n",
        "regression.txt": regression_report([pooled, fe, re], h),
        "regression.csv": _csv_text(regression_rows([pooled, fe, re], nd)),
    }
    print(f"Hausman: statistic={h.statistic:.6f} df={h.df} p={h.pvalue:.4f} "
          f"-> {h.recommendation}")
    return _write_all(out, files)


def run_validate(cfg: RunConfig) -> bool:
    checks = []

    def check(name, fn):
        try:
            fn()
        except errors.CfiError as exc:
            checks.append((name, False, str(exc)))
            return False
        checks.append((name, True, ""))
        return True

    state = {}
    if cfg.dataset is not None:
        ok = check("dataset readable", lambda: state.update(records=read_long_csv(cfg.dataset)))
        if ok and cfg.hierarchy is not None:
            ok = check("dataset complete", lambda: state.update(ds=validate_dataset(
                state["records"], cfg.hierarchy, cfg.entities, cfg.years)))
            if ok:
                check("reciprocal inputs positive", lambda: apply_prep(state["ds"]))
    if cfg.regression.data is not None:
        check("regression data", lambda: PanelSample.from_csv(
            cfg.regression.data, cfg.regression.regressors, cfg.regression.response))
    for name, ok, msg in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {name}" + (f": {msg}" if msg else ""))
    return all(ok for _, ok, _ in checks)


def run_report(out: Path) -> str:
    parts = []
    for p in sorted(out.glob("*.csv")):
        with open(p, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh)]
        parts.append(f"== {p.name}\n" + render_text(rows))
    for p in sorted(out.glob("*.txt")):
        parts.append(f"== {p.name}\n" + p.read_text(encoding="utf-8"))
    manifest = out / "manifest.json"
    if manifest.exists():
        parts.append(f"selected method: {json.loads(manifest.read_text())['selected_method']}\n")
    if not parts:
        raise errors.DataError(f"no saved artifacts in {out}")
    return "\n".join(parts)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cfindex", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [("validate", "check the configuration and input data"),
                        ("build", "build the index tables and loss report"),
                        ("regress", "descriptive statistics, panel regressions, Hausman test"),
                        ("report", "re-render saved artifacts as text")]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=name != "report")
        p.add_argument("--out")
        p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "report":
            out = Path(args.out) if args.out else _out_dir(load_config(args.config), None)
            print(run_report(out), end="")
            return EXIT_OK
        cfg = load_config(args.config)
        if args.command == "validate":
            return EXIT_OK if run_validate(cfg) else EXIT_DATA
        out = _out_dir(cfg, args.out)
        if args.command == "build":
            written = run_build(cfg, out)
        else:
            written = run_regress(cfg, out, args.seed)
        for p in written:
            print(p)
        return EXIT_OK
    except errors.ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (errors.CfiError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
