"""Matrices with prescribed singular spectra.

Steep spectra stand in for redundant, easy images and flat spectra for
information-dense ones. Because the singular values are known exactly,
every budget computed on these matrices has an analytic ground truth.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import BadDimsError, BadProfileError, EmptyInputError

__all__ = [
    "SpectrumProfile",
    "generate_spectrum",
    "random_orthonormal",
    "matrix_from_spectrum",
    "derive_seed",
    "make_ensemble",
    "mixed_profiles",
]

KINDS = ("power_law", "exponential", "flat", "low_rank_noise")


@dataclass(frozen=True)
class SpectrumProfile:
    """Shape of a synthetic spectrum of length ``n``.

    ``power_law`` uses ``exponent``; ``exponential`` uses ``ratio``;
    ``low_rank_noise`` uses ``rank`` and ``noise``; ``flat`` uses nothing.
    """

    kind: str
    n: int
    exponent: Optional[float] = None
    ratio: Optional[float] = None
    rank: Optional[int] = None
    noise: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BadProfileError(f"unknown profile kind {self.kind!r}; expected one of {KINDS}")
        if self.n < 1:
            raise BadProfileError(f"spectrum length must be >= 1, got {self.n}")
        if self.kind == "power_law":
            if self.exponent is None or not self.exponent > 0:
                raise BadProfileError(f"power_law needs exponent > 0, got {self.exponent}")
        elif self.kind == "exponential":
            if self.ratio is None or not 0 < self.ratio < 1:
                raise BadProfileError(f"exponential needs ratio in (0, 1), got {self.ratio}")
        elif self.kind == "low_rank_noise":
            if self.rank is None or self.rank < 1:
                raise BadProfileError(f"low_rank_noise needs rank >= 1, got {self.rank}")
            if not 0 <= self.noise <= 1:
                raise BadProfileError(f"noise must lie in [0, 1], got {self.noise}")

    @classmethod
    def power_law(cls, exponent, n):
        return cls("power_law", n, exponent=exponent)

    @classmethod
    def exponential(cls, ratio, n):
        return cls("exponential", n, ratio=ratio)

    @classmethod
    def flat(cls, n):
        return cls("flat", n)

    @classmethod
    def low_rank_noise(cls, rank, noise, n):
        return cls("low_rank_noise", n, rank=rank, noise=noise)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "n": self.n}
        if self.kind == "power_law":
            d["exponent"] = self.exponent
        elif self.kind == "exponential":
            d["ratio"] = self.ratio
        elif self.kind == "low_rank_noise":
            d["rank"] = self.rank
            d["noise"] = self.noise
        return d


def generate_spectrum(profile: SpectrumProfile) -> np.ndarray:
    """Descending singular values with ``sigma_1 = 1``.

    >>> generate_spectrum(SpectrumProfile.exponential(0.5, 4))
    array([1.   , 0.5  , 0.25 , 0.125])
    """
    i = np.arange(1, profile.n + 1, dtype=np.float64)
    if profile.kind == "power_law":
        return i ** (-profile.exponent)
    if profile.kind == "exponential":
        return profile.ratio ** (i - 1)
    if profile.kind == "flat":
        return np.ones(profile.n)
    values = np.full(profile.n, float(profile.noise))
    values[: profile.rank] = 1.0
    return values


def random_orthonormal(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """``rows x cols`` matrix with orthonormal columns (QR of a Gaussian).

    Column signs are fixed so the triangular factor has a non-negative
    diagonal, which makes the draw unique for a given Gaussian sample.
    """
    g = rng.standard_normal((rows, cols))
    q, r = np.linalg.qr(g)
    signs = np.where(np.diag(r) < 0, -1.0, 1.0)
    return q * signs


def matrix_from_spectrum(values, n_v: int, d_v: int, seed: int, normalize: bool = False) -> np.ndarray:
    """``U diag(values) V.T`` with seeded random orthonormal ``U`` and ``V``.

    With ``normalize`` the values are rescaled so the largest is 1.
    """
    values = np.asarray(values, dtype=np.float64).ravel()
    n = values.size
    if n < 1:
        raise BadDimsError("need at least one singular value")
    if n_v < 1 or d_v < 1:
        raise BadDimsError(f"matrix dimensions must be positive, got {n_v}x{d_v}")
    if n > min(n_v, d_v):
        raise BadDimsError(f"{n} singular values do not fit a {n_v}x{d_v} matrix")
    if np.any(values < 0) or np.any(np.diff(values) > 0):
        raise BadProfileError("singular values must be non-negative and descending")
    if normalize and values[0] > 0:
        values = values / values[0]
    rng = np.random.Generator(np.random.Philox(seed))
    u = random_orthonormal(n_v, n, rng)
    v = random_orthonormal(d_v, n, rng)
    return (u * values) @ v.T


def derive_seed(master: int, index: int) -> int:
    """Child seed for ensemble member ``index``."""
    ss = np.random.SeedSequence([master, index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def make_ensemble(
    profiles: Sequence[SpectrumProfile], n_v: int, d_v: int, seed: int
) -> list[np.ndarray]:
    """One matrix per profile, each with its own seed derived from ``seed``."""
    if len(profiles) == 0:
        raise EmptyInputError("ensemble needs at least one profile")
    return [
        matrix_from_spectrum(generate_spectrum(p), n_v, d_v, derive_seed(seed, i), normalize=True)
        for i, p in enumerate(profiles)
    ]


def mixed_profiles(count: int, n: int, seed: int, flat_share: float = 0.0) -> list[SpectrumProfile]:
    """Seeded mix of decay profiles resembling a heterogeneous image set.

    Draws are exponential (ratio 0.96 to 0.99), power-law (exponent 0.8 to
    1.1) or low-rank plus noise (rank up to 250, noise 0.002 to 0.01). A
    ``flat_share`` of the draws are instead slow-decay exponentials (ratio
    0.985 to 0.992), the regime where an unrefined sketch underestimates the
    captured energy.
    """
    if count < 1:
        raise EmptyInputError("count must be >= 1")
    if not 0 <= flat_share <= 1:
        raise ValueError(f"flat_share must lie in [0, 1], got {flat_share}")
    rng = np.random.Generator(np.random.Philox(seed))
    out = []
    for _ in range(count):
        if rng.random() < flat_share:
            out.append(SpectrumProfile.exponential(float(rng.uniform(0.985, 0.992)), n))
            continue
        kind = int(rng.integers(3))
        if kind == 0:
            out.append(SpectrumProfile.exponential(float(rng.uniform(0.96, 0.99)), n))
        elif kind == 1:
            out.append(SpectrumProfile.power_law(float(rng.uniform(0.8, 1.1)), n))
        else:
            rank = int(rng.integers(max(1, min(40, n // 4)), max(2, min(250, n)) + 1))
            rank = min(rank, n)
            out.append(SpectrumProfile.low_rank_noise(rank, float(rng.uniform(0.002, 0.01)), n))
    return out
