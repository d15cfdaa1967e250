"""Rank correlation coefficients.

Five coefficients are provided: the rank correlation built from
consecutive rank differences (``xi_n``), its kernel-smoothed
copula-density variant (``xi_star_n``), and three degenerate rank-based
U-statistics of orders 5, 6, and 4 (``d_n_fast``, ``r_n``,
``taustar_n``).  Each U-statistic also ships a literal brute-force
evaluator used as an oracle in the test suite.

All fast paths accumulate integer counts and divide once at the end.
For tie-free data with ``n >= 6`` the three U-statistics satisfy
``12 * D + 24 * R = tau*`` to machine precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from . import _counting
from .errors import (
    DegenerateMarginal,
    InsufficientData,
    TiesRequireBruteForce,
    TiesUnsupported,
    TooLargeForBruteForce,
)
from .kernels import (
    KernelSpec,
    default_grid_resolution,
    simpson2d,
    simpson_weights,
    triweight_kernel,
)
from .ranks import PairedSample, RankArtifacts, compute_rank_artifacts

__all__ = [
    "CoefficientEstimate",
    "KernelSpec",
    "xi_n",
    "zeta_n",
    "xi_star_n",
    "d_n_fast",
    "d_n_brute",
    "taustar_n",
    "taustar_n_brute",
    "r_n",
    "r_n_brute",
]

# size caps for the literal evaluators (order-4, order-5, and order-6 sums)
TAUSTAR_BRUTE_MAX_N = 16
D_BRUTE_MAX_N = 14
R_BRUTE_MAX_N = 12
# tied data beyond this size would need the excluded large-n tie machinery
TIED_ANCHOR_MAX_N = 14


@dataclass(frozen=True)
class CoefficientEstimate:
    """A computed coefficient with the code path that produced it."""

    kind: str
    value: float
    n: int
    algorithm: str


def _require_n(n: int, minimum: int, what: str) -> None:
    if n < minimum:
        raise InsufficientData(f"{what} needs n >= {minimum}, got {n}")


def xi_n(artifacts: RankArtifacts) -> CoefficientEstimate:
    """Rank correlation from consecutive rank differences.

    Uses the tie-robust form
    ``1 - n * sum |r[i+1] - r[i]| / (2 * sum l (n - l))`` in general and
    the equivalent ``1 - 3 * sum |r[i+1] - r[i]| / (n^2 - 1)`` when the
    second coordinate is tie-free.
    """
    n = artifacts.n
    jumps = int(np.abs(np.diff(artifacts.r)).sum())
    if not artifacts.has_ties_x2:
        value = 1.0 - 3.0 * jumps / (n**2 - 1)
        return CoefficientEstimate("xi", value, n, "no-ties")
    l = artifacts.l
    denom = int((l * (n - l)).sum())
    if denom == 0:
        raise DegenerateMarginal("second coordinate is constant")
    value = 1.0 - n * jumps / (2.0 * denom)
    return CoefficientEstimate("xi", value, n, "ties")


def _zeta_table(
    artifacts: RankArtifacts, kernel: KernelSpec, u1: np.ndarray, u2: np.ndarray
) -> np.ndarray:
    """Tabulate the smoothed copula density on ``u1 x u2``."""
    n = artifacts.n
    positions = np.arange(1, n + 1) / n
    rank_positions = artifacts.r / n
    a = kernel.evaluate((u1[:, None] - positions[None, :]) / kernel.h1)
    b = kernel.cdf((u2[:, None] - rank_positions[None, :]) / kernel.h2)
    return (a @ b.T) / (n * kernel.h1)


def zeta_n(
    artifacts: RankArtifacts, kernel: KernelSpec, u1: float, u2: float
) -> float:
    """Smoothed copula-density estimate at a single point of the unit square."""
    table = _zeta_table(
        artifacts, kernel, np.array([float(u1)]), np.array([float(u2)])
    )
    return float(table[0, 0])


def xi_star_n(
    artifacts: RankArtifacts,
    kernel: KernelSpec | None = None,
    grid_m: int | None = None,
) -> CoefficientEstimate:
    """Kernel-smoothed copula-density coefficient.

    Evaluates ``6 * integral of zeta_n^2 - 2`` by composite Simpson
    quadrature on ``grid_m`` panels per axis.  Defaults: triweight
    kernel with bandwidths ``n**(-3/10)`` and the smallest even panel
    count at least ``n**(7/16)``.

    Requires a tie-free second coordinate.
    """
    n = artifacts.n
    if artifacts.has_ties_x2:
        raise TiesUnsupported("the smoothed coefficient requires tie-free x2")
    if kernel is None:
        kernel = triweight_kernel(n)
    m = default_grid_resolution(n) if grid_m is None else grid_m
    simpson_weights(m)  # validates m before the heavy evaluation
    u = np.linspace(0.0, 1.0, m + 1)
    table = _zeta_table(artifacts, kernel, u, u)
    value = 6.0 * simpson2d(table**2, m) - 2.0
    return CoefficientEstimate("xi_star", value, n, f"simpson-m{m}")


def _cell_total(n: int, u: np.ndarray, v: np.ndarray, w: np.ndarray) -> float:
    """Sum the per-anchor quadruple counts expressed through 2x2 cells.

    For an anchor with ``u``, ``v``, ``w`` weak-dominance counts, the
    remaining points fall in four cells by (below-or-at x1, below-or-at
    x2).  The signed quadruple sum over distinct points reduces to
    ``G^2 + 2 S2 - 4 sum(row^2)`` in those cell counts.
    """
    n11 = w
    n10 = u - w
    n01 = v - w
    n00 = (n - 1) - u - v + w
    ac = n11 * n00
    bd = n10 * n01
    g = 2 * (ac - bd)
    s2 = 2 * (ac + bd)
    rowsq = ac * (n11 + n00) + bd * (n10 + n01)
    t = g * g + 2 * s2 - 4 * rowsq
    return float(t.astype(np.float64).sum())


def d_n_fast(artifacts: RankArtifacts) -> CoefficientEstimate:
    """Order-5 squared-deviation coefficient via per-anchor cell counts.

    Handles ties in either coordinate exactly.  Runs in
    ``O(n log n)`` through a binary indexed tree sweep.
    """
    n = artifacts.n
    _require_n(n, 5, "the order-5 coefficient")
    x1s = artifacts.x1_sorted
    boundaries = np.flatnonzero(np.diff(x1s)) + 1
    ends = np.r_[boundaries, n]
    counts = np.diff(np.r_[0, ends])
    per_point_end = np.repeat(ends, counts).astype(np.int64)
    u = per_point_end - 1
    v = artifacts.r - 1
    ry = rankdata(artifacts.x2_sorted, method="dense").astype(np.int64)
    w = _counting.joint_le_counts(per_point_end, ry, int(ry.max()))
    total = _cell_total(n, u, v, w)
    value = total / (4.0 * math.perm(n, 5))
    return CoefficientEstimate("d", value, n, "cell-counts")


def d_n_brute(sample: PairedSample) -> CoefficientEstimate:
    """Literal evaluation of the order-5 sum; oracle for ``d_n_fast``."""
    n = sample.n
    _require_n(n, 5, "the order-5 coefficient")
    if n > D_BRUTE_MAX_N:
        raise TooLargeForBruteForce(
            f"direct order-5 evaluation is capped at n = {D_BRUTE_MAX_N}, got {n}"
        )
    total = _counting.d_brute_total(sample.x1, sample.x2)
    return CoefficientEstimate("d", total / math.perm(n, 5), n, "brute")


def taustar_n(sample: PairedSample) -> CoefficientEstimate:
    """Order-4 concordance-pattern coefficient.

    Tie-free samples use an ``O(n^2)`` separated-quadruple count; tied
    samples fall back to the literal evaluation, capped at ``n = 16``.
    """
    n = sample.n
    _require_n(n, 4, "the order-4 coefficient")
    tied = len(np.unique(sample.x1)) < n or len(np.unique(sample.x2)) < n
    if tied:
        if n > TAUSTAR_BRUTE_MAX_N:
            raise TiesRequireBruteForce(
                "tied data is only supported through the direct evaluation, "
                f"capped at n = {TAUSTAR_BRUTE_MAX_N}; got n = {n}"
            )
        est = taustar_n_brute(sample)
        return CoefficientEstimate("tau_star", est.value, n, "brute-ties")
    order1 = np.argsort(sample.x1)
    s = np.argsort(np.argsort(sample.x2))[order1].astype(np.int64)
    cs, co = _counting.separated_pair_counts(s)
    c4 = math.comb(n, 4)
    value = (3.0 * (int(cs) + int(co)) - c4) / (3.0 * c4)
    return CoefficientEstimate("tau_star", value, n, "pair-counts")


def taustar_n_brute(sample: PairedSample) -> CoefficientEstimate:
    """Literal evaluation of the order-4 sum; oracle for ``taustar_n``."""
    n = sample.n
    _require_n(n, 4, "the order-4 coefficient")
    if n > TAUSTAR_BRUTE_MAX_N:
        raise TooLargeForBruteForce(
            f"direct order-4 evaluation is capped at n = {TAUSTAR_BRUTE_MAX_N}, got {n}"
        )
    total = _counting.taustar_brute_total(sample.x1, sample.x2)
    return CoefficientEstimate("tau_star", total / math.perm(n, 4), n, "brute")


def _r_tied_anchor_cells(sample: PairedSample) -> float:
    """Order-6 sum via per-anchor-pair cell counts, exact under ties."""
    n = sample.n
    ix = rankdata(sample.x1, method="dense").astype(np.int64) - 1
    iy = rankdata(sample.x2, method="dense").astype(np.int64) - 1
    m1 = int(ix.max()) + 1
    m2 = int(iy.max()) + 1
    grid = np.zeros((m1 + 1, m2 + 1), dtype=np.int64)
    np.add.at(grid, (ix + 1, iy + 1), 1)
    joint = grid.cumsum(axis=0).cumsum(axis=1)
    cum1 = np.bincount(ix, minlength=m1).cumsum()
    cum2 = np.bincount(iy, minlength=m2).cumsum()
    total = 0.0
    for i5 in range(n):
        for i6 in range(n):
            if i6 == i5:
                continue
            a5 = ix[i5]
            b6 = iy[i6]
            self5 = 1 if iy[i5] <= b6 else 0
            self6 = 1 if ix[i6] <= a5 else 0
            n11 = int(joint[a5 + 1, b6 + 1]) - self5 - self6
            u = int(cum1[a5]) - 1 - self6
            v = int(cum2[b6]) - self5 - 1
            n10 = u - n11
            n01 = v - n11
            n00 = (n - 2) - u - v + n11
            ac = n11 * n00
            bd = n10 * n01
            g = 2 * (ac - bd)
            total += g * g + 2 * (2 * (ac + bd)) - 4 * (
                ac * (n11 + n00) + bd * (n10 + n01)
            )
    return total / (4.0 * math.perm(n, 6))


def r_n(
    sample: PairedSample, artifacts: RankArtifacts | None = None
) -> CoefficientEstimate:
    """Order-6 squared-deviation coefficient.

    Tie-free samples with ``n >= 6`` use the identity
    ``R = (tau* - 12 D) / 24``.  Tied samples use a direct per-anchor
    evaluation, capped at ``n = 14``.
    """
    n = sample.n
    _require_n(n, 6, "the order-6 coefficient")
    tied = len(np.unique(sample.x1)) < n or len(np.unique(sample.x2)) < n
    if tied:
        if n > TIED_ANCHOR_MAX_N:
            raise TiesRequireBruteForce(
                "tied data is only supported through the direct evaluation, "
                f"capped at n = {TIED_ANCHOR_MAX_N}; got n = {n}"
            )
        return CoefficientEstimate("r", _r_tied_anchor_cells(sample), n, "anchor-cells")
    if artifacts is None:
        artifacts = compute_rank_artifacts(sample)
    tau = taustar_n(sample).value
    d = d_n_fast(artifacts).value
    return CoefficientEstimate("r", (tau - 12.0 * d) / 24.0, n, "identity")


def r_n_brute(sample: PairedSample) -> CoefficientEstimate:
    """Literal evaluation of the order-6 sum; oracle for ``r_n``."""
    n = sample.n
    _require_n(n, 6, "the order-6 coefficient")
    if n > R_BRUTE_MAX_N:
        raise TooLargeForBruteForce(
            f"direct order-6 evaluation is capped at n = {R_BRUTE_MAX_N}, got {n}"
        )
    total = _counting.r_brute_total(sample.x1, sample.x2)
    return CoefficientEstimate("r", total / math.perm(n, 6), n, "brute")
