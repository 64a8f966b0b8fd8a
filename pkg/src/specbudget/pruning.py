"""Applying a budget to externally ranked tokens, and static-vs-adaptive control.

The budget decides *how many* tokens survive; an importance score supplied
by the caller (attention weights, feature norms, ...) decides *which*.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .config import BudgetConfig
from .errors import EmptyInputError, MisalignedInputError, OutOfRangeError
from .spectral import as_feature_matrix, budget, compute_singular_values

__all__ = [
    "truncate_top_k",
    "calibrate_static_budget",
    "clamp_ratio",
    "InstanceComparison",
    "PolicyComparison",
    "compare_policies",
    "random_scores",
    "row_norm_scores",
]


def truncate_top_k(scores, k: int) -> np.ndarray:
    """Indices of the ``k`` highest scores, in ascending index order.

    Equal scores favour the lower index.

    >>> truncate_top_k([0.1, 0.9, 0.5], 2)
    array([1, 2])
    """
    s = np.asarray(scores, dtype=np.float64).ravel()
    if not np.isfinite(s).all():
        raise ValueError("scores must be finite")
    if not 1 <= k <= s.size:
        raise OutOfRangeError(f"k must lie in [1, {s.size}], got {k}")
    order = np.argsort(-s, kind="stable")
    return np.sort(order[:k])


def calibrate_static_budget(budgets: Sequence[int]) -> int:
    """Mean of per-instance budgets, rounded half to even."""
    b = np.asarray(budgets, dtype=np.float64)
    if b.size == 0:
        raise EmptyInputError("no budgets to calibrate from")
    return int(round(float(b.mean())))


def clamp_ratio(rho: float, lo: float, hi: float) -> float:
    """Clamp a dropping ratio into ``[lo, hi]`` for multi-stage schedules."""
    if not 0.0 <= lo <= hi <= 1.0:
        raise ValueError(f"need 0 <= lo <= hi <= 1, got [{lo}, {hi}]")
    return min(max(float(rho), lo), hi)


def random_scores(n_tokens: int, seed: int) -> np.ndarray:
    """Uniform importance scores in [0, 1)."""
    return np.random.Generator(np.random.Philox(seed)).random(n_tokens)


def row_norm_scores(m) -> np.ndarray:
    """Squared row norms, a feature-norm style importance score."""
    a = as_feature_matrix(m)
    return np.einsum("ij,ij->i", a, a)


@dataclass(frozen=True)
class InstanceComparison:
    instance: int
    k_raw: int
    k_adaptive: int
    k_static: int
    retained_energy_adaptive: float
    retained_energy_static: float
    energy_deficit_adaptive: float
    energy_deficit_static: float
    wasted_tokens_adaptive: int
    wasted_tokens_static: int
    retained_score_mass_adaptive: float
    retained_score_mass_static: float


@dataclass(frozen=True)
class PolicyComparison:
    k_static: int
    records: list = field(default_factory=list)

    @property
    def mean_k_adaptive(self) -> float:
        return float(np.mean([r.k_adaptive for r in self.records]))

    def _mean(self, name):
        return float(np.mean([getattr(r, name) for r in self.records]))

    def aggregates(self) -> dict:
        return {
            "mean_k_adaptive": self.mean_k_adaptive,
            "k_static": self.k_static,
            "mean_retained_energy_adaptive": self._mean("retained_energy_adaptive"),
            "mean_retained_energy_static": self._mean("retained_energy_static"),
            "mean_energy_deficit_adaptive": self._mean("energy_deficit_adaptive"),
            "mean_energy_deficit_static": self._mean("energy_deficit_static"),
            "mean_wasted_tokens_adaptive": self._mean("wasted_tokens_adaptive"),
            "mean_wasted_tokens_static": self._mean("wasted_tokens_static"),
            "mean_retained_score_mass_adaptive": self._mean("retained_score_mass_adaptive"),
            "mean_retained_score_mass_static": self._mean("retained_score_mass_static"),
        }

    def to_dict(self) -> dict:
        return {
            "records": [asdict(r) for r in self.records],
            "aggregates": self.aggregates(),
        }


def _score_mass(scores, k):
    total = float(np.sum(scores))
    if total == 0:
        raise ValueError("scores sum to zero; retained mass is undefined")
    kept = truncate_top_k(scores, min(k, scores.size))
    return float(np.sum(scores[kept])) / total


def compare_policies(
    ensemble: Sequence, scores: Sequence, cfg: BudgetConfig
) -> PolicyComparison:
    """Adaptive per-instance budgets against their matched static mean.

    Retained energy under a budget ``k`` is ``C(min(k, k_raw))`` from the
    exact spectrum: components beyond ``k_raw`` are not needed to meet
    ``tau`` and are not credited. The energy deficit is ``C(k_raw)`` minus
    the retained energy; wasted tokens are ``max(0, k - k_raw)``.
    """
    if len(ensemble) == 0:
        raise EmptyInputError("ensemble is empty")
    if len(ensemble) != len(scores):
        raise MisalignedInputError(
            f"{len(ensemble)} matrices but {len(scores)} score vectors"
        )
    mats = [as_feature_matrix(m) for m in ensemble]
    vecs = []
    for i, (a, s) in enumerate(zip(mats, scores)):
        s = np.asarray(s, dtype=np.float64).ravel()
        if s.size != a.shape[0]:
            raise MisalignedInputError(
                f"instance {i}: {s.size} scores for {a.shape[0]} tokens"
            )
        vecs.append(s)

    results = [budget(a, cfg) for a in mats]
    k_static = calibrate_static_budget([r.k_star for r in results])

    records = []
    for i, (a, s, res) in enumerate(zip(mats, vecs, results)):
        c = compute_singular_values(a).cumulative()
        need = res.k_raw
        target = float(c[min(need, c.size) - 1])

        def kept(k):
            return float(c[min(k, need, c.size) - 1])

        e_ad, e_st = kept(res.k_star), kept(k_static)
        records.append(
            InstanceComparison(
                instance=i,
                k_raw=need,
                k_adaptive=res.k_star,
                k_static=k_static,
                retained_energy_adaptive=e_ad,
                retained_energy_static=e_st,
                energy_deficit_adaptive=target - e_ad,
                energy_deficit_static=target - e_st,
                wasted_tokens_adaptive=max(0, res.k_star - need),
                wasted_tokens_static=max(0, k_static - need),
                retained_score_mass_adaptive=_score_mass(s, res.k_star),
                retained_score_mass_static=_score_mass(s, k_static),
            )
        )
    return PolicyComparison(k_static=k_static, records=records)
