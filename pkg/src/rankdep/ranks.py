"""Paired samples and the rank artifacts shared by all coefficients.

Every estimator in this package consumes the output of
:func:`compute_rank_artifacts`: the sample reordered by the first
coordinate (equal values shuffled by a seeded tie-break), the counts
``r[i]`` of second-coordinate values at or below the i-th reordered
point, and the reverse counts ``l[i]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt
from scipy.stats import rankdata

from .errors import InsufficientData

# Tag mixed into the seed stream so the tie-break draw is decoupled from
# any other randomness derived from the same user seed.
_TIEBREAK_TAG = 0x7EB1


def _as_float_vector(values, name: str) -> npt.NDArray[np.float64]:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite entries")
    return arr


@dataclass(frozen=True)
class PairedSample:
    """An immutable bivariate sample of paired observations."""

    x1: npt.NDArray[np.float64]
    x2: npt.NDArray[np.float64]

    def __post_init__(self):
        x1 = _as_float_vector(self.x1, "x1")
        x2 = _as_float_vector(self.x2, "x2")
        if len(x1) != len(x2):
            raise ValueError(f"coordinate lengths differ: {len(x1)} vs {len(x2)}")
        if len(x1) < 2:
            raise InsufficientData(f"need at least 2 observations, got {len(x1)}")
        x1.flags.writeable = False
        x2.flags.writeable = False
        object.__setattr__(self, "x1", x1)
        object.__setattr__(self, "x2", x2)

    @property
    def n(self) -> int:
        return len(self.x1)


@dataclass(frozen=True)
class RankArtifacts:
    """Ranks of a paired sample after ordering by the first coordinate.

    Attributes
    ----------
    order
        Permutation of ``0..n-1`` sorting the sample by ``x1``, equal
        ``x1`` values shuffled uniformly by the seeded tie-break.
    r
        ``r[i]`` counts the ``x2`` values at or below ``x2_sorted[i]``,
        taken over the whole sample.  Values lie in ``1..n``; without
        ties in ``x2`` this is a permutation of ``1..n``.
    l
        Reverse counts, ``l[i]`` is the number of ``x2`` values at or
        above ``x2_sorted[i]``.  Without ties, ``l = n + 1 - r``.
    x1_sorted, x2_sorted
        The raw coordinates reordered by ``order``; kept so that
        downstream counting statistics can resolve ties exactly.
    """

    order: npt.NDArray[np.int64]
    r: npt.NDArray[np.int64]
    l: npt.NDArray[np.int64]
    has_ties_x1: bool
    has_ties_x2: bool
    x1_sorted: npt.NDArray[np.float64] = field(repr=False)
    x2_sorted: npt.NDArray[np.float64] = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.order)


def compute_rank_artifacts(sample: PairedSample, seed: int = 0) -> RankArtifacts:
    """Order a sample by its first coordinate and attach rank counts.

    Ties in the first coordinate are broken uniformly at random, driven
    by a generator derived from ``seed`` alone, so identical
    ``(sample, seed)`` pairs give identical artifacts.

    Parameters
    ----------
    sample
        The paired observations.
    seed
        Seed for the tie-break shuffle (and nothing else).
    """
    n = sample.n
    if n < 2:
        raise InsufficientData(f"need at least 2 observations, got {n}")
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), _TIEBREAK_TAG]))
    # lexsort is keyed last-first: primary x1, random keys break ties
    order = np.lexsort((rng.random(n), sample.x1)).astype(np.int64)
    x1s = sample.x1[order]
    x2s = sample.x2[order]
    r_all = rankdata(sample.x2, method="max").astype(np.int64)
    l_all = (n - rankdata(sample.x2, method="min") + 1).astype(np.int64)
    return RankArtifacts(
        order=order,
        r=r_all[order],
        l=l_all[order],
        has_ties_x1=len(np.unique(sample.x1)) < n,
        has_ties_x2=len(np.unique(sample.x2)) < n,
        x1_sorted=x1s,
        x2_sorted=x2s,
    )


def midranks(values) -> npt.NDArray[np.float64]:
    """Average ranks of a vector, ties sharing the mean of their span."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise InsufficientData("cannot rank an empty vector")
    return rankdata(arr, method="average")
