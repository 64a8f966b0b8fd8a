"""Budget and sketch configuration."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional

#: Sketch defaults: target dimension 300, oversampling 10, two power iterations.
DEFAULT_T = 300
DEFAULT_P = 10
DEFAULT_Q = 2


@dataclass(frozen=True)
class SketchConfig:
    """Parameters of the randomized range finder.

    ``t`` is the target dimension, ``p`` the oversampling, ``q`` the number
    of power iterations and ``seed`` a 64-bit seed for the Gaussian test
    matrix.
    """

    t: int = DEFAULT_T
    p: int = DEFAULT_P
    q: int = DEFAULT_Q
    seed: int = 0

    def __post_init__(self):
        for name in ("t", "p", "q", "seed"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise TypeError(f"{name} must be an integer, got {value!r}")
        if self.t < 1:
            raise ValueError(f"t must be >= 1, got {self.t}")
        if self.p < 0:
            raise ValueError(f"p must be >= 0, got {self.p}")
        if self.q < 0:
            raise ValueError(f"q must be >= 0, got {self.q}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")

    def subspace_size(self, n_rows: int, n_cols: int) -> int:
        """Sketch width actually used for an ``n_rows x n_cols`` matrix."""
        return min(self.t + self.p, n_rows, n_cols)


@dataclass(frozen=True)
class BudgetConfig:
    """Energy threshold and clamp range for a token budget.

    ``k_max=None`` means "number of rows of the matrix", resolved per input.
    When ``randomized`` is set the randomized path is used by :func:`budget`.
    """

    tau: float
    k_min: int = 1
    k_max: Optional[int] = None
    randomized: Optional[SketchConfig] = None

    def __post_init__(self):
        tau = float(self.tau)
        if not 0.0 < tau <= 1.0:
            raise ValueError(f"tau must lie in (0, 1], got {self.tau}")
        object.__setattr__(self, "tau", tau)
        if self.k_min < 1:
            raise ValueError(f"k_min must be >= 1, got {self.k_min}")
        if self.k_max is not None and self.k_max < self.k_min:
            raise ValueError(
                f"k_max ({self.k_max}) must be >= k_min ({self.k_min})"
            )

    def resolve(self, n_rows: int) -> "BudgetConfig":
        """Fill in ``k_max`` from the row count when it was omitted."""
        if self.k_max is not None:
            return self
        if n_rows < self.k_min:
            raise ValueError(
                f"k_min ({self.k_min}) exceeds the token count ({n_rows})"
            )
        return dataclasses.replace(self, k_max=n_rows)
