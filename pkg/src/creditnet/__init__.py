"""Credit-network liquidity: routing model, exact steady-state oracles,
closed-form results, and a Monte Carlo simulation engine."""

from .core import (
    CentralizedSystem,
    CreditNetwork,
    CreditNetworkError,
    NetworkState,
    Transaction,
    available_credit,
    build_network,
    equivalent_centralized,
    execute_payment,
    is_bankrupt,
    max_credit_flow,
    read_edge_list,
    score_vector,
    shortest_feasible_path,
    transact,
    write_edge_list,
)
from .kernel import IMPL as KERNEL_IMPL
from .rates import TransactionMatrix
from .sim import (
    ConvergenceConfig,
    EnsembleResult,
    SimRunResult,
    run_ensemble,
    run_to_convergence,
    simulate_steps,
    step,
    sweep,
)
from .topology import TopologySpec, centralized_chain, generate

__version__ = "0.1.0"

__all__ = [
    "CentralizedSystem",
    "ConvergenceConfig",
    "CreditNetwork",
    "CreditNetworkError",
    "EnsembleResult",
    "KERNEL_IMPL",
    "NetworkState",
    "SimRunResult",
    "TopologySpec",
    "Transaction",
    "TransactionMatrix",
    "available_credit",
    "build_network",
    "centralized_chain",
    "equivalent_centralized",
    "execute_payment",
    "generate",
    "is_bankrupt",
    "max_credit_flow",
    "read_edge_list",
    "run_ensemble",
    "run_to_convergence",
    "score_vector",
    "shortest_feasible_path",
    "simulate_steps",
    "step",
    "sweep",
    "transact",
    "write_edge_list",
    "__version__",
]
