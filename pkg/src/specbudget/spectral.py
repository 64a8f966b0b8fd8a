"""Exact spectral energy analysis and adaptive rank selection.

A feature matrix with ``n_v`` token rows and ``d_v`` feature columns is
reduced to its singular values. The token budget is the smallest number of
leading components whose squared singular values reach a fraction ``tau``
of the total energy, clamped to ``[k_min, k_max]``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .config import BudgetConfig
from .errors import ConvergenceFailure, NonFiniteError, OutOfRangeError, ZeroEnergyError

__all__ = [
    "SingularSpectrum",
    "BudgetResult",
    "as_feature_matrix",
    "compute_singular_values",
    "cumulative_energy_ratio",
    "select_raw_rank",
    "finalize_budget",
    "budget_exact",
]

#: Singular values below this fraction of the largest are treated as zero.
NEGLIGIBLE_RATIO = 1e-12


@dataclass(frozen=True, eq=False)
class SingularSpectrum:
    """Descending singular values together with the reference energy.

    On the exact path ``total_energy`` is the sum of the squared values, so
    the cumulative ratio ends at exactly 1. On the randomized path it is the
    squared Frobenius norm of the original matrix and the ratio may stay
    below 1.
    """

    values: np.ndarray
    total_energy: float
    method: str = "exact"

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64).ravel()
        if values.size == 0:
            raise ValueError("spectrum must hold at least one value")
        if np.any(values < 0) or np.any(np.diff(values) > 0):
            raise ValueError("singular values must be non-negative and descending")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "total_energy", float(self.total_energy))

    @property
    def n(self) -> int:
        return self.values.size

    def cumulative(self) -> np.ndarray:
        """Cumulative energy ratio ``C(k)`` for ``k = 1..n`` (index ``k-1``)."""
        if not self.total_energy > 0:
            raise ZeroEnergyError("spectrum has zero total energy")
        return np.cumsum(self.values**2) / self.total_energy


@dataclass(frozen=True)
class BudgetResult:
    k_raw: int
    k_star: int
    rho: float
    achieved_ratio: float
    method: str
    elapsed: float
    saturated: bool = False


def as_feature_matrix(m) -> np.ndarray:
    """Validate ``m`` as a finite, non-empty 2-D float64 array."""
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"feature matrix must be 2-D, got shape {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"feature matrix must be non-empty, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise NonFiniteError("feature matrix contains NaN or Inf")
    return a


def _drop_negligible(values: np.ndarray, ratio: float = NEGLIGIBLE_RATIO) -> np.ndarray:
    if values.size and values[0] > 0:
        values = np.where(values < ratio * values[0], 0.0, values)
    return values


def compute_singular_values(m) -> SingularSpectrum:
    """All ``min(n_v, d_v)`` singular values of ``m`` (no singular vectors).

    >>> compute_singular_values(np.diag([3.0, 2.0, 1.0])).values
    array([3., 2., 1.])
    """
    a = as_feature_matrix(m)
    try:
        s = np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    s = _drop_negligible(s)
    # Summing in the same order as cumulative() makes C(n) exactly 1.
    total = float(np.cumsum(s**2)[-1])
    return SingularSpectrum(s, total, "exact")


def cumulative_energy_ratio(s: SingularSpectrum, k: int) -> float:
    """Fraction of ``s.total_energy`` held by the ``k`` leading components."""
    if not 1 <= k <= s.n:
        raise OutOfRangeError(f"k must lie in [1, {s.n}], got {k}")
    return float(s.cumulative()[k - 1])


def select_raw_rank(s: SingularSpectrum, tau: float) -> tuple[int, bool]:
    """Smallest ``k`` with ``C(k) >= tau``.

    Returns ``(k_raw, saturated)``. If no available ``k`` reaches ``tau``
    (only possible when the spectrum is an approximation), ``k_raw = s.n``
    and ``saturated`` is true.
    """
    if not 0.0 < tau <= 1.0:
        raise ValueError(f"tau must lie in (0, 1], got {tau}")
    c = s.cumulative()
    idx = int(np.searchsorted(c, tau, side="left"))
    if idx >= s.n:
        return s.n, True
    return idx + 1, False


def finalize_budget(k_raw: int, cfg: BudgetConfig) -> tuple[int, float]:
    """Clamp ``k_raw`` into ``[k_min, k_max]`` and derive the dropping ratio."""
    if k_raw < 1:
        raise ValueError(f"k_raw must be >= 1, got {k_raw}")
    if cfg.k_max is None:
        raise ValueError("finalize_budget needs a resolved k_max; call cfg.resolve()")
    k_star = max(cfg.k_min, min(int(k_raw), cfg.k_max))
    return k_star, 1.0 - k_star / cfg.k_max


def _assemble(spectrum, cfg, method, start) -> BudgetResult:
    k_raw, saturated = select_raw_rank(spectrum, cfg.tau)
    k_star, rho = finalize_budget(k_raw, cfg)
    achieved = float(spectrum.cumulative()[k_raw - 1])
    return BudgetResult(
        k_raw=k_raw,
        k_star=k_star,
        rho=rho,
        achieved_ratio=achieved,
        method=method,
        elapsed=time.perf_counter() - start,
        saturated=saturated,
    )


def budget_exact(m, cfg: BudgetConfig) -> BudgetResult:
    """Token budget from the exact singular value decomposition."""
    start = time.perf_counter()
    a = as_feature_matrix(m)
    cfg = cfg.resolve(a.shape[0])
    spectrum = compute_singular_values(a)
    return _assemble(spectrum, cfg, "exact", start)


def budget(m, cfg: BudgetConfig) -> BudgetResult:
    """Dispatch to the randomized path when ``cfg.randomized`` is set."""
    if cfg.randomized is not None:
        from .rsvd import budget_randomized

        return budget_randomized(m, cfg)
    return budget_exact(m, cfg)
