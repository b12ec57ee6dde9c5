"""Command-line harness: generate / simulate / verify / analyze.

Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 I/O error.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import formulas, verify
from .core import CreditNetworkError, write_edge_list
from .oracle import StateSpaceCapExceeded
from .rates import TransactionMatrix
from .sim import ConvergenceConfig, run_ensemble, sweep, write_csv
from .topology import TopologySpec, generate

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_IO = 3

_KIND_FLAGS = {
    "line": "line",
    "star": "star",
    "cycle": "cycle",
    "complete": "complete",
    "erdos-renyi": "erdos_renyi",
    "barabasi-albert": "barabasi_albert",
}
_INIT_FLAGS = {
    "random": "random_unidirectional",
    "balanced": "balanced",
    "low-id": "all_toward_low_id",
}


def _read_config(path: str) -> dict[str, str]:
    """Flat `key = value` file; '#' starts a comment."""
    values: dict[str, str] = {}
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise CreditNetworkError(f"{path}:{lineno}: expected 'key = value'")
            key, value = text.split("=", 1)
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def _apply_config(args: argparse.Namespace, casts: dict[str, type]) -> None:
    """Fill unset args from the config file; explicit flags win."""
    if not getattr(args, "config", None):
        return
    for key, raw in _read_config(args.config).items():
        if key not in casts:
            raise CreditNetworkError(f"unknown config key {key!r}")
        if getattr(args, key, None) is None:
            args.__dict__[key] = casts[key](raw)


def _spec_from(args: argparse.Namespace) -> TopologySpec:
    kind = _KIND_FLAGS[args.kind]
    init = _INIT_FLAGS[args.init]
    stochastic = kind in ("erdos_renyi", "barabasi_albert") or init == "random_unidirectional"
    if stochastic and args.seed is None:
        raise CreditNetworkError("--seed is mandatory for stochastic commands")
    return TopologySpec(
        kind=kind, n=args.n, c=args.c, p=args.p, d=args.d,
        init=init, seed=args.seed if args.seed is not None else 0,
    )


def _cmd_generate(args: argparse.Namespace) -> int:
    _apply_config(args, {"kind": str, "n": int, "c": int, "p": float, "d": int,
                         "init": str, "seed": int, "out": str})
    spec = _spec_from(args)
    _, state = generate(spec, connected=args.connected)
    if args.out:
        with open(args.out, "w") as f:
            write_edge_list(state, f)
    else:
        write_edge_list(state, sys.stdout)
    return EXIT_OK


def _cmd_simulate(args: argparse.Namespace) -> int:
    _apply_config(args, {"kind": str, "n": int, "c": int, "p": float, "d": int,
                         "init": str, "seed": int, "runs": int, "window": int,
                         "epsilon": float, "max_steps": int, "out": str,
                         "sweep": str, "grid": str, "np_const": float, "threads": int})
    if args.seed is None:
        raise CreditNetworkError("--seed is mandatory for stochastic commands")
    spec = _spec_from(args)
    conv = ConvergenceConfig(window=args.window, epsilon=args.epsilon, max_steps=args.max_steps)
    if args.sweep:
        if not args.grid:
            raise CreditNetworkError("--sweep requires --grid")
        grid = [float(x) if "." in x or "e" in x else int(x) for x in args.grid.split(",")]
        results = sweep(args.sweep.replace("-", "_"), grid, spec, runs=args.runs,
                        conv=conv, base_seed=args.seed, workers=args.threads,
                        np_const=args.np_const)
    else:
        results = [run_ensemble(spec, "uniform", conv, runs=args.runs,
                                base_seed=args.seed, workers=args.threads)]
    if args.out:
        with open(args.out, "w", newline="") as f:
            write_csv(results, f)
    else:
        write_csv(results, sys.stdout)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    try:
        checks = verify.run_suites(names)
    except StateSpaceCapExceeded as exc:
        print(f"SKIP instance beyond state-space cap: {exc}")
        return EXIT_OK
    failed = 0
    for check in checks:
        print(check.line())
        if not check.ok:
            failed += 1
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def _print_value(label: str, value) -> None:
    if isinstance(value, Fraction):
        print(f"{label} = {value} = {float(value):.10g}")
    else:
        print(f"{label} = {value:.10g}")


def _cmd_analyze(args: argparse.Namespace) -> int:
    name = args.formula
    if name == "centralized-failure":
        _print_value("failure", formulas.centralized_failure(args.n, args.C))
    elif name == "cycle-success":
        value = formulas.cycle_success(args.n, args.c)
        _print_value("success", value)
        central = formulas.centralized_failure(args.n, args.n * args.c)
        _print_value("equivalent centralized failure", central)
    elif name == "tree-success":
        spec = TopologySpec(kind=_KIND_FLAGS[args.kind], n=args.n, c=args.c,
                            init="all_toward_low_id")
        network, _ = generate(spec)
        value = formulas.tree_success(network, TransactionMatrix.uniform(args.n))
        _print_value("success", value)
        central = formulas.centralized_failure(args.n, network.total_credit())
        _print_value("equivalent centralized failure", central)
    elif name == "bankruptcy-bound":
        spec = TopologySpec(kind=_KIND_FLAGS[args.kind], n=args.n, c=args.c,
                            init="all_toward_low_id", seed=args.seed or 0,
                            p=args.p, d=args.d)
        network, _ = generate(spec)
        info = formulas.bankruptcy_bound(network)
        for v, bound in enumerate(info["bounds"]):
            _print_value(f"node {v} bound", bound)
        _print_value("harmonic mean", info["harmonic_mean"])
        _print_value("arithmetic mean", info["arithmetic_mean"])
    elif name == "cut-bound":
        _print_value("pairwise failure bound", formulas.complete_cut_bound(args.n, args.c))
    elif name == "reference":
        aliases = {"gnp": "gnp_conjecture"}
        kind = aliases.get(args.kind, (args.kind or "").replace("-", "_"))
        params = {k: v for k, v in (("n", args.n), ("p", args.p), ("d", args.d), ("c", args.c))
                  if v is not None}
        _print_value(kind, formulas.reference_curve(kind, **params))
    else:
        raise CreditNetworkError(f"unknown formula {name!r}")
    return EXIT_OK


def _add_topology_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kind", choices=sorted(_KIND_FLAGS), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--p", type=float, default=None, help="edge probability (erdos-renyi)")
    p.add_argument("--d", type=int, default=None, help="edges per arriving node (barabasi-albert)")
    p.add_argument("--init", choices=sorted(_INIT_FLAGS), default="random")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--config", default=None, help="flat key=value config file; flags win")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="creditnet",
                                     description="Credit-network liquidity toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="write a network as an edge list")
    _add_topology_flags(p_gen)
    p_gen.add_argument("--connected", action="store_true",
                       help="redraw disconnected erdos-renyi samples")
    p_gen.add_argument("--out", default=None)
    p_gen.set_defaults(func=_cmd_generate)

    p_sim = sub.add_parser("simulate", help="run ensembles to convergence, emit CSV")
    _add_topology_flags(p_sim)
    p_sim.add_argument("--runs", type=int, default=100)
    p_sim.add_argument("--window", type=int, default=1000)
    p_sim.add_argument("--epsilon", type=float, default=0.002)
    p_sim.add_argument("--max-steps", dest="max_steps", type=int, default=10_000_000)
    p_sim.add_argument("--sweep", choices=[a.replace("_", "-") for a in
                                           ("density", "capacity", "size", "size_fixed_np")],
                       default=None)
    p_sim.add_argument("--grid", default=None, help="comma-separated sweep values")
    p_sim.add_argument("--np-const", dest="np_const", type=float, default=None)
    p_sim.add_argument("--threads", type=int, default=None)
    p_sim.add_argument("--out", default=None)
    p_sim.set_defaults(func=_cmd_simulate)

    p_ver = sub.add_parser("verify", help="run oracle/formula cross-check suites")
    p_ver.add_argument("--suite", choices=sorted(verify.SUITES) + ["all"], default="all")
    p_ver.set_defaults(func=_cmd_verify)

    p_ana = sub.add_parser("analyze", help="evaluate closed-form formulas")
    p_ana.add_argument("formula", choices=["centralized-failure", "cycle-success",
                                           "tree-success", "bankruptcy-bound",
                                           "cut-bound", "reference"])
    p_ana.add_argument("--n", type=int, default=None)
    p_ana.add_argument("--C", type=int, default=None)
    p_ana.add_argument("--c", type=int, default=None)
    p_ana.add_argument("--p", type=float, default=None)
    p_ana.add_argument("--d", type=int, default=None)
    p_ana.add_argument("--kind", default=None,
                       help="topology kind (tree-success, bankruptcy-bound) or curve name (reference)")
    p_ana.add_argument("--seed", type=int, default=None)
    p_ana.add_argument("--regime", choices=["uniform"], default="uniform")
    p_ana.set_defaults(func=_cmd_analyze)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CreditNetworkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
