"""Randomized approximation of the spectrum and of the token budget.

The range of the feature matrix is captured by a Gaussian sketch sharpened
with power iterations. Singular values of the projected matrix
``B = basis.T @ m`` never exceed the true ones, so the approximate
cumulative energy ratio (taken against the exact Frobenius energy) can only
undershoot and the randomized budget can only overshoot.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .config import BudgetConfig, SketchConfig
from .errors import ConvergenceFailure, RankCollapseError, ZeroEnergyError
from .spectral import BudgetResult, SingularSpectrum, _assemble, as_feature_matrix

__all__ = [
    "RangeBasis",
    "frobenius_energy",
    "gaussian_test_matrix",
    "sketch_range",
    "approximate_spectrum",
    "budget_randomized",
]

# Energies recovered from a small Gram eigenproblem carry absolute error of
# order eps * sigma_1**2; shares below this floor are not resolvable.
GRAM_ENERGY_FLOOR = 1e-10


@dataclass(frozen=True, eq=False)
class RangeBasis:
    """Orthonormal ``n_v x k_sub`` basis of the sketched column space."""

    basis: np.ndarray

    @property
    def k_sub(self) -> int:
        return self.basis.shape[1]


def frobenius_energy(m) -> float:
    """Squared Frobenius norm, the reference energy of the randomized path."""
    a = as_feature_matrix(m)
    return float(np.vdot(a, a))


def gaussian_test_matrix(n_cols: int, k_sub: int, seed: int) -> np.ndarray:
    """Standard normal ``n_cols x k_sub`` matrix from a Philox stream.

    Philox is counter based, so the draw depends only on ``seed`` and shape.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    return rng.standard_normal((n_cols, k_sub))


def _orthonormalize(y: np.ndarray) -> np.ndarray:
    try:
        q, _ = scipy.linalg.qr(y, mode="economic", overwrite_a=True, check_finite=False)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceFailure(f"QR of the sketch failed: {exc}") from exc
    return q


def _prefer_gram(n_rows: int, n_cols: int, k_sub: int, q: int) -> bool:
    """Whether forming ``m @ m.T`` once is cheaper than multiplying by ``m``
    and ``m.T`` in every power iteration (flop estimate)."""
    direct = 4 * q * n_rows * n_cols * k_sub + 2 * n_rows * n_cols * k_sub
    direct += 2 * k_sub * k_sub * n_cols
    via_gram = n_rows * n_rows * n_cols + 2 * (q + 1) * n_rows * n_rows * k_sub
    via_gram += 2 * k_sub * k_sub * n_rows
    return via_gram < direct


def sketch_range(m, cfg: SketchConfig, gram: Optional[np.ndarray] = None) -> RangeBasis:
    """Orthonormal basis approximating the dominant column space of ``m``.

    ``Y = m @ omega`` is refined by ``cfg.q`` rounds of ``Y <- m (m.T Y)``,
    each followed by a QR orthonormalization. With ``q = 0`` the raw sketch is
    still orthonormalized. ``gram`` may carry a precomputed ``m @ m.T``.
    """
    return RangeBasis(_sketch(as_feature_matrix(m), cfg, gram))


def _sketch(a, cfg, gram):
    n_rows, n_cols = a.shape
    k_sub = cfg.subspace_size(n_rows, n_cols)
    omega = gaussian_test_matrix(n_cols, k_sub, cfg.seed)
    y = a @ omega

    col_norms = np.linalg.norm(y, axis=0)
    floor = np.finfo(np.float64).eps * np.sqrt(np.vdot(a, a)) * np.linalg.norm(omega, axis=0)
    if np.any(col_norms <= floor):
        raise RankCollapseError(
            f"{int(np.sum(col_norms <= floor))} of {k_sub} sketch columns are numerically zero"
        )

    if cfg.q == 0:
        return _orthonormalize(y)
    for _ in range(cfg.q):
        y = gram @ y if gram is not None else a @ (a.T @ y)
        y = _orthonormalize(y)
    return y


def approximate_spectrum(
    m,
    basis: RangeBasis,
    gram: Optional[np.ndarray] = None,
    total_energy: Optional[float] = None,
) -> SingularSpectrum:
    """Singular values of ``B = basis.T @ m`` with the Frobenius reference energy.

    The values come from the ``k_sub x k_sub`` eigenproblem ``B B.T``
    (computed as ``basis.T @ gram @ basis`` when ``gram`` is supplied).
    Squared values below ``GRAM_ENERGY_FLOOR`` times the largest are set to 0.
    """
    a = as_feature_matrix(m)
    q = basis.basis
    if q.shape[0] != a.shape[0]:
        raise ValueError(f"basis has {q.shape[0]} rows, matrix has {a.shape[0]}")
    if basis.k_sub > min(a.shape):
        raise ValueError(f"basis width {basis.k_sub} exceeds min{a.shape}")
    if total_energy is None:
        total_energy = float(np.vdot(a, a))
    return _ritz_spectrum(a, q, gram, total_energy)


def _ritz_spectrum(a, q, gram, total_energy):
    if gram is not None:
        small = q.T @ (gram @ q)
    else:
        b = q.T @ a
        small = b @ b.T
    small = 0.5 * (small + small.T)
    try:
        w = scipy.linalg.eigvalsh(small, check_finite=False)[::-1]
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    w = np.clip(w, 0.0, None)
    if w[0] > 0:
        w[w < GRAM_ENERGY_FLOOR * w[0]] = 0.0
    return SingularSpectrum(np.sqrt(w), total_energy, "randomized")


def budget_randomized(m, cfg: BudgetConfig) -> BudgetResult:
    """Token budget from the randomized spectrum.

    If the approximate energy never reaches ``tau`` within ``k_sub`` values
    the result is flagged ``saturated`` with ``k_raw = k_sub`` before clamping.
    """
    if cfg.randomized is None:
        raise ValueError("budget_randomized requires cfg.randomized")
    start = time.perf_counter()
    a = as_feature_matrix(m)
    cfg = cfg.resolve(a.shape[0])
    sketch = cfg.randomized
    energy = float(np.vdot(a, a))
    if energy == 0:
        raise ZeroEnergyError("matrix has zero Frobenius energy")
    n_rows, n_cols = a.shape
    k_sub = sketch.subspace_size(n_rows, n_cols)
    gram = a @ a.T if _prefer_gram(n_rows, n_cols, k_sub, sketch.q) else None
    basis = _sketch(a, sketch, gram)
    spectrum = _ritz_spectrum(a, basis, gram, energy)
    return _assemble(spectrum, cfg, "randomized", start)
