"""Pathwise Rademacher realization of the noise, used as an exact oracle.

The coefficient calculus never touches sample paths; this module rebuilds
everything pathwise for the fair-coin sign noise and compares.  With horizon
N the exhaustive space enumerates all 2**N sign paths with equal weight, so
expectations, conditional expectations and the classical predictable
representation become exact finite averages: every identity the coefficient
side claims can be measured here with no Monte Carlo error.

Path encoding: path index m has sign +1 at coordinate k iff bit k of m is
set, so paths come in ascending binary order.  All reductions run in fixed
order (ascending path index), which keeps results bit-stable regardless of
caller-side parallelism.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    HorizonTooLargeError,
    RequiresExhaustiveError,
    SupportExceedsHorizonError,
)
from .functional import FockFunctional, norm_p
from .operators import annihilate, cond_expect, expect

#: Exhaustive enumeration cap: 2**20 paths is the desk-scale ceiling.
MAX_EXHAUSTIVE_HORIZON = 20

#: All-pairs orthonormality sweeps square the lattice, so they cap earlier.
MAX_ORTHONORMALITY_HORIZON = 16


@dataclass(frozen=True, eq=False)
class PathSpace:
    """A finite weighted family of sign paths over ``horizon`` coordinates.

    ``signs`` holds one row per path with entries in {-1, +1} (stored as
    int8); ``weights`` sum to 1.  Exhaustive spaces carry all 2**horizon
    paths uniformly; sampled spaces are reproducible from (paths, seed).
    """

    horizon: int
    mode: str
    signs: np.ndarray
    weights: np.ndarray
    seed: Optional[int] = None

    @property
    def num_paths(self) -> int:
        return self.signs.shape[0]


@dataclass(frozen=True, eq=False)
class PathObservable:
    """One complex value per path of the generating space."""

    values: np.ndarray
    space: PathSpace


def build_space(
    N: int,
    mode: str = "exhaustive",
    M: Optional[int] = None,
    seed: Optional[int] = None,
) -> PathSpace:
    """Build the path space for horizon ``N``.

    Exhaustive mode enumerates all 2**N paths (N <= 20) in ascending binary
    order.  Sampled mode draws M paths from a seeded PCG64 stream; the sign
    matrix is a pure function of (N, M, seed).
    """
    if N < 1:
        raise ValueError(f"horizon must be >= 1, got {N}")
    if mode == "exhaustive":
        if N > MAX_EXHAUSTIVE_HORIZON:
            raise HorizonTooLargeError(
                f"exhaustive horizon {N} exceeds cap {MAX_EXHAUSTIVE_HORIZON}"
            )
        index = np.arange(1 << N, dtype=np.int64)
        signs = np.empty((1 << N, N), dtype=np.int8)
        for k in range(N):
            signs[:, k] = (((index >> k) & 1) * 2 - 1).astype(np.int8)
        weights = np.full(1 << N, 2.0 ** (-N))
        return PathSpace(horizon=N, mode="exhaustive", signs=signs, weights=weights)
    if mode == "sampled":
        if M is None or M < 1:
            raise ValueError("sampled mode needs a positive path count M")
        if seed is None:
            raise ValueError("sampled mode needs a seed")
        rng = np.random.Generator(np.random.PCG64(seed))
        signs = (rng.integers(0, 2, size=(M, N), dtype=np.int8) * 2 - 1).astype(np.int8)
        weights = np.full(M, 1.0 / M)
        return PathSpace(horizon=N, mode="sampled", signs=signs, weights=weights, seed=seed)
    raise ValueError(f"unknown mode {mode!r}")


def evaluate(phi: FockFunctional, space: PathSpace) -> PathObservable:
    """Realize the functional pathwise: sum of coef * product of member signs.

    Requires every support index to lie inside the horizon.
    """
    if phi.support_max >= space.horizon:
        raise SupportExceedsHorizonError(
            f"support reaches index {phi.support_max}, horizon is {space.horizon}"
        )
    values = np.zeros(space.num_paths, dtype=np.complex128)
    for sigma, coef in phi.items():
        if sigma.elements:
            prod = np.prod(space.signs[:, list(sigma.elements)], axis=1)
            values += coef * prod
        else:
            values += coef
    return PathObservable(values=values, space=space)


def path_expectation(obs: PathObservable) -> complex:
    """Weighted mean over paths; exact on exhaustive spaces.

    Both modes carry uniform weights, so the mean is the path sum divided by
    the path count; the division is exact where 1/M is not representable.
    """
    return complex(np.sum(obs.values) / obs.space.num_paths)


def path_cond_expect(obs: PathObservable, k: int) -> PathObservable:
    """Average over the paths sharing coordinates 0..k (exhaustive only).

    k = -1 returns the constant mean observable; k beyond the horizon
    conditions on everything and returns the values unchanged.
    """
    space = obs.space
    if space.mode != "exhaustive":
        raise RequiresExhaustiveError("pathwise conditioning needs the exhaustive space")
    if k < -1:
        raise ValueError(f"conditioning level must be >= -1, got {k}")
    if k >= space.horizon - 1:
        return PathObservable(values=obs.values.copy(), space=space)
    if k == -1:
        mean = path_expectation(obs)
        return PathObservable(
            values=np.full(space.num_paths, mean, dtype=np.complex128), space=space
        )
    n_low = 1 << (k + 1)
    n_high = space.num_paths // n_low
    # Path index m = high * n_low + low, where low holds coordinates 0..k.
    grouped = obs.values.reshape(n_high, n_low)
    means = grouped.mean(axis=0)
    return PathObservable(values=np.tile(means, n_high), space=space)


def check_orthonormality(N: int) -> float:
    """Max deviation of pathwise basis products from exact orthonormality.

    Sweeps every pair of subsets of {0..N-1}.  Since the product of two basis
    realizations is the realization of the symmetric difference, it suffices
    to transform the path weights once (a signed Hadamard butterfly) and read
    off the mean of every product realization in one pass.
    """
    if N < 1:
        raise ValueError(f"horizon must be >= 1, got {N}")
    if N > MAX_ORTHONORMALITY_HORIZON:
        raise HorizonTooLargeError(
            f"all-pairs sweep at horizon {N} exceeds cap {MAX_ORTHONORMALITY_HORIZON}"
        )
    space = build_space(N, "exhaustive")
    # means[mask] = weighted path mean of the product of the mask's signs.
    means = space.weights.astype(np.float64).copy()
    for bit in range(N):
        h = 1 << bit
        view = means.reshape(-1, 2, h)
        low, high = view[:, 0, :].copy(), view[:, 1, :].copy()
        view[:, 0, :] = low + high
        view[:, 1, :] = high - low
    return max(abs(means[0] - 1.0), float(np.max(np.abs(means[1:]))))


def classical_clark_ocone_check(phi: FockFunctional, N: int) -> float:
    """Pathwise residual of the classical predictable representation.

    Rebuilds the functional as its mean plus, per coordinate k, the k-th sign
    times the conditional mean (given coordinates before k) of the site-k
    annihilation — all realized pathwise on the exhaustive space.  Returns
    the max path deviation from the direct realization.
    """
    if N > MAX_ORTHONORMALITY_HORIZON:
        raise HorizonTooLargeError(
            f"horizon {N} exceeds cap {MAX_ORTHONORMALITY_HORIZON}"
        )
    space = build_space(N, "exhaustive")
    direct = evaluate(phi, space).values
    rebuilt = np.full(space.num_paths, path_expectation(evaluate(phi, space)))
    for k in range(N):
        gradient = evaluate(annihilate(phi, k), space)
        predictable = path_cond_expect(gradient, k - 1).values
        rebuilt = rebuilt + space.signs[:, k] * predictable
    return float(np.max(np.abs(direct - rebuilt)))


def check_intertwining(phi: FockFunctional, k: int, N: int) -> tuple[float, float, float]:
    """Crosswise gaps between coefficient operators and their path actions.

    Returns max-over-path gaps for (a) site-k annihilation versus the
    sign-flip finite difference (value at coordinate k forced to +1 minus
    forced to -1, halved), (b) the mean part versus the pathwise mean, and
    (c) level-k conditioning versus pathwise conditioning.
    """
    if not 0 <= k < N:
        raise ValueError(f"site {k} outside horizon {N}")
    space = build_space(N, "exhaustive")
    values = evaluate(phi, space).values

    index = np.arange(space.num_paths)
    flip_up = values[index | (1 << k)]
    flip_down = values[index & ~(1 << k)]
    finite_difference = 0.5 * (flip_up - flip_down)
    via_coefficients = evaluate(annihilate(phi, k), space).values
    gap_gradient = float(np.max(np.abs(finite_difference - via_coefficients)))

    mean_functional = evaluate(expect(phi), space).values
    mean_pathwise = path_expectation(PathObservable(values=values, space=space))
    gap_mean = float(np.max(np.abs(mean_functional - mean_pathwise)))

    cond_functional = evaluate(cond_expect(phi, k), space).values
    cond_pathwise = path_cond_expect(PathObservable(values=values, space=space), k).values
    gap_cond = float(np.max(np.abs(cond_functional - cond_pathwise)))
    return gap_gradient, gap_mean, gap_cond


def plancherel_check(phi: FockFunctional, space: PathSpace) -> float:
    """Gap between the pathwise second moment and the squared level-0 norm."""
    values = evaluate(phi, space).values
    second_moment = float(np.sum(np.abs(values) ** 2) / space.num_paths)
    return abs(second_moment - norm_p(phi, 0.0) ** 2)


def mc_estimate(phi: FockFunctional, space: PathSpace) -> tuple[complex, float]:
    """Weighted sample mean and standard error of the realized functional.

    Accumulation runs in path-index order, so results are reproducible from
    the space alone.  The standard error treats complex deviations by
    modulus; it is 0 for a single path or a constant functional.
    """
    values = evaluate(phi, space).values
    mean = complex(np.sum(values) / space.num_paths)
    m = space.num_paths
    if m < 2:
        return mean, 0.0
    spread = float(np.sum(np.abs(values - mean) ** 2))
    return mean, float(np.sqrt(spread / (m * (m - 1))))


def write_observable_csv(obs: PathObservable, path: str) -> None:
    """Export as rows of ``path_index, re, im``."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["path_index", "re", "im"])
        for i, v in enumerate(obs.values):
            writer.writerow([i, repr(float(v.real)), repr(float(v.imag))])
