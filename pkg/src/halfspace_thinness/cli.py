"""``halfspace-thinness`` command-line front end.

Exit codes: 0 pass, 1 usage or configuration error, 2 quantitative check
failure, 3 inconclusive verdict.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

import numpy as np

from . import kernels, montecarlo, thinness, verify
from .config import Config
from .errors import ConfigError, HalfspaceError
from .halfspace import HPoint

EXIT_OK, EXIT_USAGE, EXIT_FAILED, EXIT_INCONCLUSIVE = 0, 1, 2, 3

HITTING_HEADER = ["height", "estimate", "std_error", "n_hit", "n_exit", "n_censored", "seed",
                  "censored_flag"]
VERDICT_HEADER = ["criterion", "status", "value", "error_bound", "shells_used", "process_independent"]
RATIOS_HEADER = ["sweep", "x", "ratio", "spread", "bound", "asserted", "passed"]


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return kernels.format_float(x)


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


class _Outputs:
    """Output directory guard: refuses to overwrite without ``--force``."""

    def __init__(self, out_dir, force):
        self.dir = out_dir
        self.force = force

    def path(self, name):
        p = os.path.join(self.dir, name)
        if os.path.exists(p) and not self.force:
            raise ConfigError(f"{p} exists; pass --force to overwrite")
        return p

    def prepare(self, names):
        os.makedirs(self.dir, exist_ok=True)
        return [self.path(n) for n in names]


def _workers(cfg):
    return cfg.get("threads") or (os.cpu_count() or 1)


def run_kernels(cfg, out, stream=None):
    stream = stream or sys.stdout
    spec = cfg.process()
    grid = cfg.r_grid()
    q = cfg.quad()
    bound = cfg.get("grid.spread_bound")
    k_path, r_path = out.prepare(["kernels.csv", "ratios.csv"])
    w = _workers(cfg)
    table = kernels.RadialKernelTable.build(spec, grid, q, workers=w)
    reports = [
        kernels.verify_green_asymptotics(spec, grid, q, bound, w),
        kernels.verify_j_asymptotics(spec, grid, q, bound, w),
        kernels.verify_green_mass_ratio(spec, grid, q, bound, w),
        kernels.verify_green_renewal_ratio(spec, grid, q, bound, w),
    ]
    table.to_csv(k_path)
    rows = []
    for rep in reports:
        for x, ratio in zip(rep.grid, rep.ratios):
            rows.append([rep.name, float(x), float(ratio), rep.spread, float(rep.bound),
                         rep.asserted, rep.passed])
    _write_csv(r_path, RATIOS_HEADER, rows)
    print(f"process: {spec}", file=stream)
    for rep in reports:
        tag = "PASS" if rep.passed else "FAIL"
        note = "" if rep.asserted else " (not asserted)"
        print(f"  {rep.name:<22} spread {rep.spread:9.4g}  bound {rep.bound:g}  {tag}{note}", file=stream)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def run_thinness(cfg, out, stream=None):
    stream = stream or sys.stdout
    spec = cfg.process()
    set_spec = cfg.set_spec()
    (v_path,) = out.prepare(["verdict.csv"])
    try:
        record = thinness.minimal_thinness_verdict(set_spec, spec, cfg.get("thinness.max_shells"))
    except HalfspaceError as exc:
        raise ConfigError(str(exc)) from None
    rows = []
    undecided = record.status is thinness.Verdict.UNKNOWN
    for name, iv in record.integrals.items():
        converged = iv.status is thinness.Status.CONVERGES
        rows.append([name, iv.status.value, iv.value if converged else None,
                     iv.error_bound if converged else None, iv.shells_used,
                     record.process_independent])
        undecided |= iv.status is thinness.Status.INCONCLUSIVE
    _write_csv(v_path, VERDICT_HEADER, rows)
    print(f"process: {spec}", file=stream)
    print(f"set: {set_spec.kind.value}", file=stream)
    print(f"verdict: {record.status.value} ({record.semantics}, criterion {record.criterion})", file=stream)
    if record.note:
        print(f"note: {record.note}", file=stream)
    return EXIT_INCONCLUSIVE if undecided else EXIT_OK


def run_simulate(cfg, out, stream=None):
    stream = stream or sys.stdout
    spec = cfg.process()
    set_spec = cfg.set_spec()
    heights = cfg.get("mc.heights")
    if not heights:
        raise ConfigError("mc.heights must be a non-empty list")
    seed = cfg.get("mc.seed")
    d = spec.dimension
    try:
        mcs = [montecarlo.McConfig(seed, cfg.get("mc.n_paths"), cfg.get("mc.dt"), cfg.get("mc.max_time"),
                                   HPoint((0.0,) * (d - 1), float(h)), cfg.get("mc.refine_near_boundary"),
                                   _workers(cfg), cfg.get("mc.max_steps"))
               for h in heights]
    except HalfspaceError as exc:
        raise ConfigError(f"mc: {exc}") from None
    (h_path,) = out.prepare(["hitting.csv"])
    print(f"seed: {seed}", file=stream)
    rows = []
    for h, mc_cfg in zip(heights, mcs):
        rep = montecarlo.estimate_hitting_functional(spec, set_spec, mc_cfg)
        rows.append([float(h), rep.estimate, rep.std_error, rep.n_hit, rep.n_exited_without_hit,
                     rep.n_censored, int(seed), rep.censored_flag])
        flag = "  censored > 5%" if rep.censored_flag else ""
        print(f"  h={h:<8g} estimate {rep.estimate:.6f} +- {rep.std_error:.6f}{flag}", file=stream)
    _write_csv(h_path, HITTING_HEADER, rows)
    return EXIT_OK


def run_verify(cfg, out, stream=None):
    stream = stream or sys.stdout
    results = verify.run_property_suite(cfg.get("dimension"))
    print(verify.format_table(results), file=stream)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


VERBS = {"kernels": run_kernels, "thinness": run_thinness, "simulate": run_simulate, "verify": run_verify}


def build_parser():
    p = argparse.ArgumentParser(prog="halfspace-thinness",
                                description="Kernels, thinness tests and Monte Carlo for "
                                            "subordinate Brownian motion in a half-space.")
    p.add_argument("verb", choices=sorted(VERBS))
    p.add_argument("--config", required=True, help="JSON configuration file")
    p.add_argument("--out", required=True, help="output directory (created if absent)")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override a dotted configuration key; repeatable")
    p.add_argument("--force", action="store_true", help="overwrite existing output files")
    p.add_argument("--threads", type=int, help="worker threads (results do not depend on it)")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    overrides = list(args.set)
    if args.threads is not None:
        if args.threads < 1:
            print("error: --threads must be >= 1", file=sys.stderr)
            return EXIT_USAGE
        overrides.append(f"threads={args.threads}")
    try:
        cfg = Config.load(args.config, overrides)
        return VERBS[args.verb](cfg, _Outputs(args.out, args.force))
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HalfspaceError as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
