"""Batch experiment runner.

Reads an INI config describing a space and a task, dispatches the
computation, and writes CSV / JSON reports atomically.  Exit codes: 0 on
success, 1 on a config error, 2 when a verification check fails.

Config example::

    [space]
    group = U          ; U or SO
    n = 3
    subgroup = grassmann
    k = 1

    [task]
    kind = packing_curve   ; invariants | packing_curve | cover_curve |
                           ; verify_all | bounds
    epsilon_grid = 1.2 0.9 0.6 0.45
    budget = 2000
    probe_budget = 4000
    seed = 0
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import os
import sys
import tempfile

import numpy as np

from .groups import GroupSpec, HomSpace, SubgroupSpec
from .matcore import InvalidArgumentError
from .invariants import (
    diameter_known,
    kappa_known,
    kappa_lower,
    theta_known,
)
from .entropy import (
    certify_cover,
    greedy_net,
    greedy_packing,
    linearized_cover,
    theorem8_bounds,
)
from . import verify as verify_mod

CSV_COLUMNS = [
    "space_id",
    "epsilon",
    "quantity_kind",
    "count",
    "probe_max_dist",
    "seed",
    "budget",
    "dim_M",
    "theta",
    "diam",
    "kappa_lb",
]


class ConfigError(Exception):
    pass


def parse_space(cfg: configparser.ConfigParser):
    """Build the GroupSpec / HomSpace the config describes.  A trivial
    subgroup (or none) yields the bare group."""
    if "space" not in cfg:
        raise ConfigError("missing [space] section")
    sec = cfg["space"]
    try:
        group = GroupSpec(sec.get("group", "U").strip(), sec.getint("n"))
    except (TypeError, ValueError, InvalidArgumentError) as exc:
        raise ConfigError(f"bad group spec: {exc}") from exc
    kind = sec.get("subgroup", "trivial").strip()
    try:
        if kind == "trivial":
            sub = SubgroupSpec.trivial()
        elif kind == "special":
            sub = SubgroupSpec.special()
        elif kind == "grassmann":
            sub = SubgroupSpec.grassmann(sec.getint("k"))
        elif kind == "block_diagonal":
            sub = SubgroupSpec.block_diagonal(
                [int(b) for b in sec.get("partition", "").split()]
            )
        elif kind == "tensor_factor":
            sub = SubgroupSpec.tensor_factor(sec.getint("m"), sec.getint("k"))
        else:
            raise ConfigError(f"unknown subgroup kind {kind!r}")
        space = HomSpace(group, sub)
    except (TypeError, ValueError, InvalidArgumentError) as exc:
        raise ConfigError(f"bad subgroup spec: {exc}") from exc
    if kind == "trivial":
        return group, space
    return space, space


def parse_task(cfg: configparser.ConfigParser) -> dict:
    if "task" not in cfg:
        raise ConfigError("missing [task] section")
    sec = cfg["task"]
    kind = sec.get("kind", "").strip()
    if kind not in ("invariants", "packing_curve", "cover_curve", "verify_all", "bounds"):
        raise ConfigError(f"unknown task kind {kind!r}")
    grid = [float(e) for e in sec.get("epsilon_grid", "").split()]
    if kind in ("packing_curve", "cover_curve", "bounds"):
        if not grid:
            raise ConfigError("epsilon_grid required for this task")
        if any(e <= 0 for e in grid):
            raise ConfigError("epsilon_grid must be strictly positive")
        if any(a <= b for a, b in zip(grid, grid[1:])):
            raise ConfigError("epsilon_grid must be sorted descending")
    budget = sec.getint("budget", 2000)
    probe_budget = sec.getint("probe_budget", 4000)
    if budget <= 0 or probe_budget <= 0:
        raise ConfigError("budgets must be positive")
    return {
        "kind": kind,
        "epsilon_grid": grid,
        "budget": budget,
        "probe_budget": probe_budget,
        "seed": sec.getint("seed", 0),
        "samples": sec.getint("samples", 300),
    }


def _space_id(space_or_group) -> str:
    if isinstance(space_or_group, HomSpace):
        sub = space_or_group.subgroup
        extra = ""
        if sub.kind == "grassmann":
            extra = f"({sub.k})"
        elif sub.kind == "block_diagonal":
            extra = "(" + "+".join(map(str, sub.partition)) + ")"
        elif sub.kind == "tensor_factor":
            extra = f"({sub.m}x{sub.k})"
        g = space_or_group.group
        return f"{g.kind}{g.n}/{sub.kind}{extra}"
    return f"{space_or_group.kind}{space_or_group.n}"


def _atomic_write(path: str, data: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _invariant_row(space, seed: int, samples: int) -> dict:
    if isinstance(space, HomSpace):
        kl = kappa_lower(space, samples=samples, rng=seed)
        th = theta_known(space)
        dm = diameter_known(space)
        dim = space.dim
    else:
        kl, th, dm, dim = 1.0, None, diameter_known(space), space.dim
    return {
        "dim_M": dim,
        "theta": "" if th is None else f"{th:.12g}",
        "diam": "" if dm is None else f"{dm:.12g}",
        "kappa_lb": f"{kl:.12g}",
    }


def run_task(space_or_group, space: HomSpace, task: dict, out_dir: str) -> int:
    kind = task["kind"]
    seed = task["seed"]
    sid = _space_id(space_or_group)
    inv = _invariant_row(space_or_group, seed, task["samples"])

    if kind == "verify_all":
        n = space.n if isinstance(space, HomSpace) else space_or_group.n
        checks = [
            verify_mod.check_eq6(n, samples=200, rng=seed),
            verify_mod.check_lemma4(n, np.pi / 4, samples=500, rng=seed),
            verify_mod.check_lemma5(n, 0.5, samples=500, rng=seed),
            verify_mod.check_geodesic_minimality(min(n, 2), samples=20,
                                                 competitors=10, rng=seed),
        ]
        failed = False
        for rep in checks:
            _atomic_write(os.path.join(out_dir, f"check_{rep.name}.json"),
                          rep.to_json() + "\n")
            status = "PASS" if rep.passed else "FAIL"
            print(f"{status} {rep.name}: worst_violation={rep.worst_violation:.3e}")
            failed = failed or not rep.passed
        return 2 if failed else 0

    if kind == "invariants":
        rows = [dict(space_id=sid, epsilon="", quantity_kind="invariants",
                     count="", probe_max_dist="", seed=seed,
                     budget=task["samples"], **inv)]
        _write_csv(os.path.join(out_dir, "invariants.csv"), rows)
        return 0

    if kind == "bounds":
        if not isinstance(space_or_group, HomSpace):
            raise ConfigError("bounds task needs a nontrivial quotient")
        lines = []
        for eps in task["epsilon_grid"]:
            rep = theorem8_bounds(space_or_group, eps)
            lines.append(
                f"{sid},{eps},{rep.lower_bound},{rep.upper_bound},"
                f"{rep.lower_applicable},{rep.upper_applicable},{rep.c},{rep.C}"
            )
        _atomic_write(
            os.path.join(out_dir, "bounds.csv"),
            "space_id,epsilon,lower,upper,lower_applicable,upper_applicable,c,C\n"
            + "\n".join(lines) + "\n",
        )
        return 0

    # packing_curve / cover_curve
    rows = []
    prev_pack = None
    for eps in task["epsilon_grid"]:
        net = None
        if kind == "cover_curve":
            net = greedy_net(space_or_group, eps, task["budget"],
                             task["probe_budget"], rng=seed)
        # seed the packing with the matched net's centers and the packing at
        # the previous (larger) epsilon: both are epsilon-separated, so the
        # chain count comparisons hold by construction
        initial = list(net.points) if net is not None else []
        if prev_pack is not None:
            initial.extend(prev_pack.points)
        pack = greedy_packing(space_or_group, eps, task["budget"], rng=seed,
                              initial=initial or None)
        prev_pack = pack
        rows.append(dict(space_id=sid, epsilon=f"{eps:.12g}",
                         quantity_kind="Ntilde", count=pack.count,
                         probe_max_dist="", seed=seed,
                         budget=task["budget"], **inv))
        if net is not None:
            if net.count > pack.count:
                print(f"WARN chain: net count {net.count} > packing "
                      f"{pack.count} at eps={eps}", file=sys.stderr)
            rows.append(dict(space_id=sid, epsilon=f"{eps:.12g}",
                             quantity_kind="Npp_certified", count=net.count,
                             probe_max_dist=f"{net.probe_max_dist:.12g}",
                             seed=seed, budget=task["budget"], **inv))
    name = "packing_curve.csv" if kind == "packing_curve" else "cover_curve.csv"
    _write_csv(os.path.join(out_dir, name), rows)
    return 0


def _write_csv(path: str, rows) -> None:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    _atomic_write(path, buf.getvalue())


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="unicover", description="covering-number experiments on "
        "homogeneous spaces of U(n) and SO(n)"
    )
    sub = ap.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run the experiment a config describes")
    run_p.add_argument("config", help="path to the INI config file")
    run_p.add_argument("--seed", type=int, default=None,
                       help="override the seed in the config")
    run_p.add_argument("--out-dir", default=".", help="output directory")
    run_p.add_argument("--threads", type=int, default=0,
                       help="worker threads (0 = auto)")
    run_p.add_argument("--override-kappa-gate", action="store_true",
                       help="allow the linearized cover without kappa = 1")
    args = ap.parse_args(argv)

    cfg = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        if not cfg.read(args.config):
            raise ConfigError(f"cannot read config {args.config!r}")
        space_or_group, space = parse_space(cfg)
        task = parse_task(cfg)
    except (ConfigError, configparser.Error, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    if args.seed is not None:
        task["seed"] = args.seed
    try:
        return run_task(space_or_group, space, task, args.out_dir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
