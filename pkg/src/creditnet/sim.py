"""Monte Carlo engine: repeated unit transactions with window convergence.

A run draws ordered pairs from the rate matrix, routes unit payments along
shortest feasible paths, and stops once the success rate of two consecutive
windows agrees within epsilon (or at the step cap). Ensembles aggregate many
independently generated networks; sweeps vary one parameter over a grid.
"""
from __future__ import annotations

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence, TextIO, Union

import numpy as np

from . import kernel
from ._pykernel import Xoshiro256StarStar, _sample_pair
from .arcs import ArcTable
from .core import CreditNetwork, CreditNetworkError, NetworkState, Transaction, transact
from .rates import TransactionMatrix
from .topology import TopologySpec, generate

SimRng = Xoshiro256StarStar


@dataclass(frozen=True)
class ConvergenceConfig:
    """Stop once two consecutive windows' success rates differ by <= epsilon."""

    window: int = 1000
    epsilon: float = 0.002
    max_steps: int = 10_000_000

    def __post_init__(self) -> None:
        if self.window < 1:
            raise CreditNetworkError(f"window must be >= 1, got {self.window}")
        if self.epsilon <= 0:
            raise CreditNetworkError(f"epsilon must be > 0, got {self.epsilon}")
        if self.max_steps < 1:
            raise CreditNetworkError(f"max_steps must be >= 1, got {self.max_steps}")


@dataclass(frozen=True)
class SimRunResult:
    steps: int
    successes: int
    success_rate: float
    converged: bool
    seed: int


@dataclass
class EnsembleResult:
    topology: str
    n: int
    param: Optional[Union[int, float]]  # p for G(n,p), d for BA, None otherwise
    c: int
    base_seed: int
    runs: list[SimRunResult] = field(default_factory=list)

    @property
    def mean(self) -> float:
        return float(np.mean([r.success_rate for r in self.runs]))

    @property
    def std(self) -> float:
        rates = [r.success_rate for r in self.runs]
        if len(rates) < 2:
            return 0.0
        return float(np.std(rates, ddof=1))

    @property
    def mean_steps(self) -> float:
        return float(np.mean([r.steps for r in self.runs]))

    @property
    def frac_converged(self) -> float:
        return float(np.mean([1.0 if r.converged else 0.0 for r in self.runs]))


def _rate_args(tm: TransactionMatrix) -> tuple[int, np.ndarray]:
    if tm.mode == "uniform":
        return 0, np.zeros(0, dtype=np.float64)
    return 1, tm.flat_cumulative().astype(np.float64)


def step(state: NetworkState, tm: TransactionMatrix, rng: SimRng) -> tuple[bool, NetworkState]:
    """One chain step: sample an ordered pair, attempt a unit payment."""
    mode, cum = _rate_args(tm)
    s, t = _sample_pair(rng, tm.n, mode, cum.tolist())
    return transact(state, Transaction(s, t, 1))


def run_to_convergence(
    network: CreditNetwork,
    state: NetworkState,
    tm: TransactionMatrix,
    conv: ConvergenceConfig = ConvergenceConfig(),
    seed: int = 0,
    check_invariants: bool = False,
) -> SimRunResult:
    """Run the chain until window convergence; the input state is not mutated."""
    if tm.n != network.n:
        raise CreditNetworkError("rate matrix size does not match the network")
    table = ArcTable(network)
    cap = table.caps_from(state)
    mode, cum = _rate_args(tm)
    steps, successes, converged = kernel.run_chain(
        network.n,
        table.indptr,
        table.arc_from,
        table.arc_to,
        table.arc_rev,
        cap,
        table.arc_total,
        mode,
        cum,
        seed,
        conv.window,
        conv.epsilon,
        conv.max_steps,
        check_invariants,
    )
    return SimRunResult(
        steps=int(steps),
        successes=int(successes),
        success_rate=successes / steps if steps else 0.0,
        converged=bool(converged),
        seed=seed,
    )


def simulate_steps(
    network: CreditNetwork,
    state: NetworkState,
    tm: TransactionMatrix,
    n_steps: int,
    seed: int = 0,
    check_every: Optional[int] = None,
) -> tuple[NetworkState, int]:
    """Run exactly n_steps (no convergence test); returns (final state, successes).

    With check_every set, conservation invariants are verified at that cadence.
    """
    table = ArcTable(network)
    cap = table.caps_from(state)
    mode, cum = _rate_args(tm)
    window = check_every if check_every else n_steps + 1
    _, successes, _ = kernel.run_chain(
        network.n,
        table.indptr,
        table.arc_from,
        table.arc_to,
        table.arc_rev,
        cap,
        table.arc_total,
        mode,
        cum,
        seed,
        window,
        -1.0,  # never satisfied: disables early convergence
        n_steps,
        check_every is not None,
    )
    return table.state_from(cap), int(successes)


def _default_workers() -> int:
    env = os.environ.get("CREDITNET_THREADS")
    if env:
        return max(1, int(env))
    return 1


def run_ensemble(
    spec: TopologySpec,
    tm: Union[str, TransactionMatrix] = "uniform",
    conv: ConvergenceConfig = ConvergenceConfig(),
    runs: int = 100,
    base_seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> EnsembleResult:
    """Run `runs` independent networks (seeds base_seed+i) to convergence.

    Erdős–Rényi samples are redrawn until connected, matching the simulation
    protocol's regime of connected graphs.
    """
    if runs < 1:
        raise CreditNetworkError(f"runs must be >= 1, got {runs}")
    if base_seed is None:
        base_seed = spec.seed
    if isinstance(tm, str):
        if tm != "uniform":
            raise CreditNetworkError(f"unknown rate regime {tm!r}")
        tm = TransactionMatrix.uniform(spec.n)
    connected = spec.kind == "erdos_renyi"

    def one(i: int) -> SimRunResult:
        seed_i = base_seed + i
        network, state = generate(replace(spec, seed=seed_i), connected=connected)
        return run_to_convergence(network, state, tm, conv, seed=seed_i)

    workers = workers if workers is not None else _default_workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, range(runs)))
    else:
        results = [one(i) for i in range(runs)]

    param: Optional[Union[int, float]]
    if spec.kind == "erdos_renyi":
        param = spec.p
    elif spec.kind == "barabasi_albert":
        param = spec.d
    else:
        param = None
    return EnsembleResult(
        topology=spec.kind, n=spec.n, param=param, c=spec.c,
        base_seed=base_seed, runs=results,
    )


SWEEP_AXES = ("density", "capacity", "size", "size_fixed_np")


def sweep(
    axis: str,
    grid: Sequence[Union[int, float]],
    base: TopologySpec,
    runs: int = 100,
    conv: ConvergenceConfig = ConvergenceConfig(),
    base_seed: Optional[int] = None,
    workers: Optional[int] = None,
    np_const: Optional[float] = None,
) -> list[EnsembleResult]:
    """One ensemble per grid point along the chosen axis.

    density varies p (Erdős–Rényi) or d (Barabási–Albert); capacity varies c;
    size varies n; size_fixed_np varies n with p = np_const / n.
    """
    if axis not in SWEEP_AXES:
        raise CreditNetworkError(f"unknown sweep axis {axis!r}")
    results = []
    for value in grid:
        if axis == "density":
            if base.kind == "erdos_renyi":
                spec = replace(base, p=float(value))
            elif base.kind == "barabasi_albert":
                spec = replace(base, d=int(value))
            else:
                raise CreditNetworkError(f"density sweep needs a random family, got {base.kind}")
        elif axis == "capacity":
            spec = replace(base, c=int(value))
        elif axis == "size":
            spec = replace(base, n=int(value))
        else:
            if base.kind != "erdos_renyi":
                raise CreditNetworkError("size_fixed_np applies to erdos_renyi only")
            const = np_const if np_const is not None else base.n * (base.p or 0.0)
            spec = replace(base, n=int(value), p=const / int(value))
        results.append(run_ensemble(spec, "uniform", conv, runs, base_seed, workers))
    return results


CSV_HEADER = ["topology", "n", "param", "c", "seed", "steps", "converged", "success_rate"]


def _fmt_param(param: Optional[Union[int, float]]) -> str:
    if param is None:
        return ""
    return repr(param)


def write_csv(ensembles: Iterable[EnsembleResult], f: TextIO) -> None:
    """Per-run rows plus mean/std summary rows for each ensemble."""
    writer = csv.writer(f)
    writer.writerow(CSV_HEADER)
    for ens in ensembles:
        prefix = [ens.topology, str(ens.n), _fmt_param(ens.param), str(ens.c)]
        for r in ens.runs:
            writer.writerow(
                prefix + [str(r.seed), str(r.steps), str(int(r.converged)), repr(r.success_rate)]
            )
        writer.writerow(prefix + ["mean", repr(ens.mean_steps), repr(ens.frac_converged), repr(ens.mean)])
        writer.writerow(prefix + ["std", "", "", repr(ens.std)])


def read_csv(f: TextIO) -> list[EnsembleResult]:
    """Parse write_csv output back into EnsembleResult records."""
    reader = csv.reader(f)
    header = next(reader)
    if header != CSV_HEADER:
        raise CreditNetworkError(f"unexpected CSV header: {header}")
    ensembles: list[EnsembleResult] = []
    current: Optional[EnsembleResult] = None
    for row in reader:
        topology, n_s, param_s, c_s, seed_s, steps_s, conv_s, rate_s = row
        if param_s == "":
            param = None
        elif "." in param_s or "e" in param_s or "E" in param_s:
            param = float(param_s)
        else:
            param = int(param_s)
        if seed_s == "mean":
            current = None
            continue
        if seed_s == "std":
            continue
        key = (topology, int(n_s), param, int(c_s))
        if current is None or (current.topology, current.n, current.param, current.c) != key:
            current = EnsembleResult(topology, int(n_s), param, int(c_s), base_seed=int(seed_s))
            ensembles.append(current)
        current.runs.append(
            SimRunResult(
                steps=int(steps_s),
                successes=round(int(steps_s) * float(rate_s)),
                success_rate=float(rate_s),
                converged=bool(int(conv_s)),
                seed=int(seed_s),
            )
        )
    return ensembles
