"""Transaction rate matrices over ordered node pairs."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from .core import CreditNetworkError


class TransactionMatrix:
    """Rate matrix Λ over ordered pairs: zero diagonal, entries sum to 1.

    `uniform(n)` puts 1/(n(n-1)) on every ordered pair and carries exact
    rational rates; `explicit(rates)` takes an arbitrary dense float matrix.
    """

    __slots__ = ("mode", "n", "rates", "symmetric")

    def __init__(self, mode: str, n: int, rates: np.ndarray, symmetric: bool):
        self.mode = mode
        self.n = n
        self.rates = rates
        self.symmetric = symmetric

    @classmethod
    def uniform(cls, n: int) -> "TransactionMatrix":
        if n < 2:
            raise CreditNetworkError(f"uniform rates need n >= 2, got {n}")
        rates = np.full((n, n), 1.0 / (n * (n - 1)))
        np.fill_diagonal(rates, 0.0)
        return cls("uniform", n, rates, symmetric=True)

    @classmethod
    def explicit(cls, rates, symmetric: Optional[bool] = None) -> "TransactionMatrix":
        arr = np.asarray(rates, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise CreditNetworkError("rate matrix must be square")
        n = arr.shape[0]
        if n < 2:
            raise CreditNetworkError(f"rate matrix needs n >= 2, got {n}")
        if np.any(arr < 0):
            raise CreditNetworkError("rates must be nonnegative")
        if np.any(np.diagonal(arr) != 0):
            raise CreditNetworkError("rate matrix diagonal must be zero")
        total = float(arr.sum())
        if abs(total - 1.0) > 1e-9:
            raise CreditNetworkError(f"rates must sum to 1, got {total}")
        is_sym = bool(np.array_equal(arr, arr.T))
        if symmetric is True and not is_sym:
            raise CreditNetworkError("matrix flagged symmetric but is not")
        return cls("explicit", n, arr, symmetric=is_sym)

    @property
    def has_exact(self) -> bool:
        return self.mode == "uniform"

    def rate(self, s: int, t: int) -> float:
        return float(self.rates[s, t])

    def exact_rate(self, s: int, t: int) -> Fraction:
        """Exact rational rate; only the uniform regime carries one."""
        if not self.has_exact:
            raise CreditNetworkError("explicit rate matrices have no exact rational form")
        if s == t:
            return Fraction(0)
        return Fraction(1, self.n * (self.n - 1))

    def support(self) -> Iterator[tuple[int, int, float]]:
        """Ordered pairs with positive rate."""
        for s in range(self.n):
            for t in range(self.n):
                if s != t and self.rates[s, t] > 0.0:
                    yield s, t, float(self.rates[s, t])

    def flat_cumulative(self) -> np.ndarray:
        """Row-major cumulative sums for inverse-CDF pair sampling."""
        return np.cumsum(self.rates.ravel())

    def __repr__(self) -> str:
        return f"TransactionMatrix(mode={self.mode!r}, n={self.n}, symmetric={self.symmetric})"
