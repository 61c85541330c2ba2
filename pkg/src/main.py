#!/usr/bin/env python3
"""
qci - quantum complete intersections from the command line

    python src/main.py algebra-info --config 2,2,5
    python src/main.py explore --config 2,2,5 --start k --radius 4 --seed 1 --out out/
    python src/main.py verify --config 3,2,7 --seed 1 --suite quick
    python src/main.py module-info --config 2,2,5 --module AmodSoc --seed 1
"""

import argparse
import json
import logging
import os
import sys
from typing import Dict, List, Optional

import linalg
from artranslate import classify_component, explore_component
from cache import FragmentCache, cache_key
from errors import BudgetError, BudgetExceeded, ConfigError, QCIError
from homology import free_module, rad_mod_soc, radical_module, socle_quotient
from modrep import ModuleRep, module_from_dict, simple_module
from qalgebra import Algebra, is_wild, nakayama_automorphism
from quiver_export import fragment_to_dict, to_dot, to_json
from rankvariety import jordan_type, probe_variety, rank_point
from runconfig import RunConfig
from verify import SUITES, run_suite

logger = logging.getLogger("qci")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_BUDGET = 3
EXIT_VERIFY = 4

NAMED_MODULES = {
    "k": simple_module,
    "radA": radical_module,
    "AmodSoc": socle_quotient,
    "radAmodSoc": rad_mod_soc,
    "A": lambda algebra: free_module(algebra, 1),
}


def status(symbol: str, message: str):
    print(f"{symbol} {message}", file=sys.stderr)


def named_module(algebra: Algebra, name: str) -> ModuleRep:
    """One of NAMED_MODULES, or a path to a module JSON file."""
    if name in NAMED_MODULES:
        return NAMED_MODULES[name](algebra)
    if os.path.isfile(name):
        with open(name) as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigError(f"{name} is not valid JSON: {e}") from e
        return module_from_dict(data, algebra)
    raise ConfigError(f"unknown module {name!r}: use one of {sorted(NAMED_MODULES)} or a JSON file")


def emit(cfg: RunConfig, stem: str, data: Dict, dot: bool = False):
    """Write <stem>.json (and <stem>.dot) under --out, or print to stdout."""
    outputs = []
    if cfg.fmt in ("json", "both") or not dot:
        outputs.append(("json", to_json(data)))
    if dot and cfg.fmt in ("dot", "both"):
        outputs.append(("dot", to_dot(data)))
    if cfg.out_dir is None:
        for _, text in outputs:
            sys.stdout.write(text)
        return
    os.makedirs(cfg.out_dir, exist_ok=True)
    for ext, text in outputs:
        path = os.path.join(cfg.out_dir, f"{stem}.{ext}")
        with open(path, "w") as f:
            f.write(text)
        status("✅", f"wrote {path}")


# --- commands -----------------------------------------------------------------

def cmd_algebra_info(cfg: RunConfig) -> int:
    algebra = cfg.load_algebra()
    nu = nakayama_automorphism(algebra)
    nondegenerate = linalg.is_invertible(algebra.gram(), algebra.p)
    info = {
        "config": algebra.config.to_dict(),
        "hash": algebra.digest(),
        "dim": algebra.dimension,
        "basis_size": len(algebra.basis),
        "nakayama": {"scalars": list(nu.generator_scalars), "order": nu.order()},
        "frobenius_nondegenerate": nondegenerate,
        "wild": is_wild(algebra.config),
    }
    status("✅", f"dim A = {algebra.dimension}, nu order {nu.order()}, "
                 f"{'wild' if info['wild'] else 'tame'}")
    emit(cfg, "algebra", info)
    return EXIT_OK


def _explore_data(cfg: RunConfig, algebra: Algebra, start: ModuleRep) -> Dict:
    frag = explore_component(start, cfg.radius, cfg.seed, cfg.max_sequences, cfg.period_bound,
                             cfg.decompose_retries, cfg.iso_trials)
    evidence = classify_component(frag)
    status("✅", f"{len(frag.vertices)} vertices, {len(frag.records)} sequences: {evidence.label()}")
    return fragment_to_dict(frag, evidence)


def cmd_explore(cfg: RunConfig, start_name: str) -> int:
    algebra = cfg.load_algebra()
    start = named_module(algebra, start_name)
    start_key = start_name if start_name in NAMED_MODULES else start.digest()
    cache = None
    if cfg.use_cache and cfg.cache_dir:
        cache = FragmentCache(cfg.cache_dir)
    key = cache_key(algebra.digest(), start_key, cfg.radius, cfg.seed)
    try:
        data = cache.get(key) if cache else None
        if data is not None:
            status("✅", "fragment read from cache")
        else:
            try:
                data = _explore_data(cfg, algebra, start)
            except BudgetExceeded as e:
                if e.partial is not None:
                    emit(cfg, "fragment.partial", fragment_to_dict(e.partial), dot=True)
                raise
            if cache:
                cache.put(key, algebra.digest(), start_key, cfg.radius, cfg.seed, data)
    finally:
        if cache:
            cache.close()
    emit(cfg, "fragment", data, dot=True)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, suite: str, only: Optional[List[int]]) -> int:
    algebra = cfg.load_algebra()
    report = run_suite(algebra, cfg.seed, suite, cfg.decompose_retries, cfg.iso_trials,
                       cfg.max_sequences, only)
    for c in report.checks:
        symbol = {"pass": "✅", "fail": "❌"}.get(c.status, "⚠️ ")
        status(symbol, f"[{c.id:2d}] {c.status:8s} {c.anchor}")
    emit(cfg, "report", report.to_dict())
    if not report.ok:
        status("❌", f"{len(report.failed)} check(s) failed")
        return EXIT_VERIFY
    return EXIT_OK


def cmd_module_info(cfg: RunConfig, module: str, lambdas: Optional[str], strategy: str) -> int:
    algebra = cfg.load_algebra()
    M = named_module(algebra, module)
    if strategy == "line_scan_c2" and algebra.c != 2:
        strategy = "random"
    report = probe_variety(M, strategy, seed=cfg.seed)
    data = report.to_dict()
    data["dim"] = M.dim
    if lambdas:
        try:
            lam = rank_point(algebra, [int(x) for x in lambdas.split(",")])
        except ValueError as e:
            raise ConfigError(f"cannot read --lambda {lambdas!r}: {e}") from e
        data["at"] = {"lambda": list(lam.lambdas), "jordan_type": jordan_type(M, lam).to_dict()}
    status("✅" if report.homogeneity_ok else "⚠️ ",
           f"{len(report.members)} of {len(report.directions)} directions in the rank variety")
    emit(cfg, "module", data)
    return EXIT_OK


# --- argument parsing ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", dest="algebra", required=True,
                        help="algebra config: JSON file, inline JSON, or 'a,c[,p]'")
    common.add_argument("--seed", type=int, help="master seed (or QCI_SEED)")
    common.add_argument("--radius", type=int, help="exploration radius (default QCI_RADIUS or 4)")
    common.add_argument("--out", dest="out_dir", help="output directory; stdout when omitted")
    common.add_argument("--format", dest="fmt", choices=("json", "dot", "both"), help="fragment output format")
    common.add_argument("--cache-dir", help="fragment cache directory (or QCI_CACHE_DIR)")
    common.add_argument("--no-cache", action="store_true", help="ignore the fragment cache")
    common.add_argument("--log-level", default=os.getenv("QCI_LOG_LEVEL", "WARNING"),
                        choices=("DEBUG", "INFO", "WARNING", "ERROR"))

    parser = argparse.ArgumentParser(prog="qci", description="Quantum complete intersection toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("algebra-info", parents=[common], help="dimension, Nakayama automorphism, Frobenius form")
    explore = sub.add_parser("explore", parents=[common], help="explore a stable AR-component")
    explore.add_argument("--start", default="k", help=f"{' | '.join(NAMED_MODULES)} | module JSON file")
    verify = sub.add_parser("verify", parents=[common], help="run the verification suite")
    verify.add_argument("--suite", choices=SUITES, default="paper")
    verify.add_argument("--only", type=int, nargs="+", help="run only these check ids")
    info = sub.add_parser("module-info", parents=[common], help="Jordan types and rank variety of a module")
    info.add_argument("--module", default="k", help=f"{' | '.join(NAMED_MODULES)} | module JSON file")
    info.add_argument("--lambda", dest="lambdas", help="comma separated point, e.g. 1,2")
    info.add_argument("--strategy", choices=("line_scan_c2", "random"), default="line_scan_c2")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level),
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")
    try:
        cfg = RunConfig.from_env(algebra=args.algebra, seed=args.seed, radius=args.radius,
                                 out_dir=args.out_dir, fmt=args.fmt, cache_dir=args.cache_dir)
        if args.no_cache:
            cfg.use_cache = False
        cfg.validate(need_seed=args.command != "algebra-info")
        if args.command == "algebra-info":
            return cmd_algebra_info(cfg)
        if args.command == "explore":
            return cmd_explore(cfg, args.start)
        if args.command == "verify":
            return cmd_verify(cfg, args.suite, args.only)
        return cmd_module_info(cfg, args.module, args.lambdas, args.strategy)
    except ConfigError as e:
        status("❌", f"{type(e).__name__}: {e}")
        return EXIT_CONFIG
    except BudgetError as e:
        status("⚠️ ", f"{type(e).__name__}: {e}")
        return EXIT_BUDGET
    except QCIError as e:
        status("❌", f"{type(e).__name__}: {e}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
