"""Null distributions used to calibrate the independence tests.

Four constructions are available: the exact normal limit of the scaled
rank correlation, simulated weighted chi-square limits for the three
degenerate U-statistics, Monte Carlo nulls for statistics without a
usable asymptotic distribution, and permutation nulls for discrete
data.  Simulated banks can be written to and read from a compact binary
format so that expensive builds are reused across runs.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
import numpy.typing as npt
from scipy.special import ndtri
from scipy.stats import norm

from .errors import (
    InvalidDrawCount,
    InvalidTruncation,
    TiesUnsupported,
)
from .kernels import default_bandwidth, default_grid_resolution
from .ranks import PairedSample, RankArtifacts, compute_rank_artifacts

__all__ = [
    "XI_LIMIT_VARIANCE",
    "EigenGrid",
    "NullModel",
    "normal_xi_null",
    "weighted_chisq_null",
    "monte_carlo_null",
    "permutation_null",
    "xi_star_null",
    "xi_projection_diagnostic",
    "save_bank",
    "load_bank",
]

# limit variance of sqrt(n) times the rank correlation under independence
XI_LIMIT_VARIANCE = 2.0 / 5.0

_BANK_MAGIC = b"RDNB"
_BANK_HEADER = struct.Struct("<4sHHQ")  # magic, kind code, V or n, draw count
_BLOCK = 65536

_TAG_WCHISQ = 0x5EED1
_TAG_MC = 0x5EED2
_TAG_PERM = 0x5EED3

_FAMILY_CODES = {"weighted_chisq": 1, "monte_carlo_empirical": 2, "permutation_empirical": 3}
_STAT_CODES = {"custom": 0, "xi": 1, "xi_star": 2, "d": 3, "r": 4, "tau_star": 5, "d_or_r": 6}
_FAMILY_NAMES = {v: k for k, v in _FAMILY_CODES.items()}
_STAT_NAMES = {v: k for k, v in _STAT_CODES.items()}


@dataclass(frozen=True)
class EigenGrid:
    """Truncated eigenvalue grid of the weighted chi-square limit.

    The limit of the scaled degenerate U-statistics is
    ``sum over v1, v2 of lam[v1, v2] * (Z^2 - 1)`` with independent
    standard normals ``Z``.  The weights are
    ``1 / (pi^4 v1^2 v2^2)`` for the order-5 and order-6 coefficients
    (they share one limit) and 36 times that for the order-4 one.
    """

    kind: str
    truncation: int
    weights: npt.NDArray[np.float64] = field(repr=False)

    @classmethod
    def build(cls, kind: str, truncation: int) -> "EigenGrid":
        if kind not in ("d_or_r", "tau_star"):
            raise ValueError(f"unknown eigenvalue grid kind {kind!r}")
        if not isinstance(truncation, (int, np.integer)) or isinstance(truncation, bool):
            raise InvalidTruncation(f"truncation must be an integer, got {truncation!r}")
        if truncation < 1:
            raise InvalidTruncation(f"truncation must be positive, got {truncation}")
        v = np.arange(1, truncation + 1, dtype=np.float64)
        base = 1.0 / (np.pi**4 * np.outer(v**2, v**2))
        scale = 36.0 if kind == "tau_star" else 1.0
        return cls(kind=kind, truncation=int(truncation), weights=scale * base)


@dataclass(frozen=True)
class NullModel:
    """A calibrated null distribution for one test statistic.

    ``kind`` selects the construction, ``statistic_kind`` records which
    coefficient the bank was built for, and ``bank`` holds the sorted
    simulated draws for the empirical kinds.
    """

    kind: str
    statistic_kind: str
    bank: npt.NDArray[np.float64] | None = field(default=None, repr=False)
    grid: EigenGrid | None = None
    n: int | None = None
    seed: int | None = None
    params: dict = field(default_factory=dict)

    @property
    def draws(self) -> int:
        return 0 if self.bank is None else len(self.bank)

    def quantile(self, p: float) -> float:
        """Lower empirical quantile (order statistic at ``ceil(p * B)``)."""
        if not 0.0 < p < 1.0:
            raise ValueError(f"quantile level must be in (0, 1), got {p}")
        if self.kind == "normal_xi":
            return float(math.sqrt(XI_LIMIT_VARIANCE) * ndtri(p))
        k = int(math.ceil(p * self.draws))
        k = min(max(k, 1), self.draws)
        return float(self.bank[k - 1])

    def p_value_upper(self, value: float) -> float:
        """Upper-tail probability of ``value`` under this null."""
        if self.kind == "normal_xi":
            return float(norm.sf(value / math.sqrt(XI_LIMIT_VARIANCE)))
        count_ge = self.draws - int(np.searchsorted(self.bank, value, side="left"))
        if self.kind == "permutation_empirical":
            return (1.0 + count_ge) / (self.draws + 1.0)
        return count_ge / self.draws


def normal_xi_null() -> NullModel:
    """Exact normal null for the scaled rank correlation, variance 2/5."""
    return NullModel(kind="normal_xi", statistic_kind="xi")


def weighted_chisq_null(kind: str, truncation: int = 100, draws: int = 10**6, seed: int = 0) -> NullModel:
    """Simulate the truncated weighted chi-square limit and bank it.

    Parameters
    ----------
    kind
        ``"d_or_r"`` for the shared order-5/order-6 limit or
        ``"tau_star"``.
    truncation
        Eigenvalue truncation order ``V``, at least 50.  Dropped terms
        are mean zero, and at ``V = 100`` their combined standard
        deviation is below ``1e-3`` of the limit's scale (the raw
        eigenvalue mass beyond the grid is about 1.2 percent, but it
        only enters through centered squares).
    draws
        Bank size ``B``, at least ``10**5``.
    seed
        Master seed.  Draws are generated in fixed blocks with
        per-block derived seeds, so the bank depends only on
        ``(kind, truncation, draws, seed)``, bit for bit.
    """
    grid = EigenGrid.build(kind, truncation)
    if truncation < 50:
        raise InvalidTruncation(f"truncation must be at least 50, got {truncation}")
    if not isinstance(draws, (int, np.integer)) or isinstance(draws, bool):
        raise InvalidDrawCount(f"draw count must be an integer, got {draws!r}")
    if draws < 10**5:
        raise InvalidDrawCount(f"draw count must be at least 1e5, got {draws}")
    vmax = int(truncation)
    lam = grid.weights
    lam_total = float(lam.sum())
    kind_code = _STAT_CODES[kind]
    bank = np.empty(draws)
    for block in range(math.ceil(draws / _BLOCK)):
        lo = block * _BLOCK
        count = min(_BLOCK, draws - lo)
        rng = np.random.default_rng(
            np.random.SeedSequence([int(seed), _TAG_WCHISQ, kind_code, block])
        )
        acc = np.full(count, -lam_total)
        for v1 in range(vmax):
            z = rng.standard_normal((count, vmax))
            acc += (z * z) @ lam[v1]
        bank[lo : lo + count] = acc
    bank.sort()
    return NullModel(
        kind="weighted_chisq",
        statistic_kind=kind,
        bank=bank,
        grid=grid,
        seed=int(seed),
    )


def monte_carlo_null(
    statistic: Callable[[PairedSample], float],
    n: int,
    reps: int,
    seed: int = 0,
    statistic_kind: str = "custom",
    params: dict | None = None,
) -> NullModel:
    """Bank a statistic simulated under independent standard uniform margins."""
    if not isinstance(reps, (int, np.integer)) or isinstance(reps, bool):
        raise InvalidDrawCount(f"replication count must be an integer, got {reps!r}")
    if reps < 100:
        raise InvalidDrawCount(f"need at least 100 replicates, got {reps}")
    values = np.empty(reps)
    for k in range(reps):
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), _TAG_MC, k]))
        sample = PairedSample(rng.random(n), rng.random(n))
        try:
            values[k] = statistic(sample)
        except Exception as exc:
            raise type(exc)(f"statistic failed at null replicate {k}: {exc}") from exc
    values.sort()
    return NullModel(
        kind="monte_carlo_empirical",
        statistic_kind=statistic_kind,
        bank=values,
        n=int(n),
        seed=int(seed),
        params=dict(params or {}),
    )


def permutation_null(
    sample: PairedSample,
    statistic: Callable[[PairedSample], float],
    permutations: int,
    seed: int = 0,
    statistic_kind: str = "custom",
) -> NullModel:
    """Bank a statistic over seeded uniform permutations of ``x2``.

    The observed pairing is not included in the bank; the matching
    p-value convention is ``(1 + #{permuted >= observed}) / (P + 1)``.
    """
    if not isinstance(permutations, (int, np.integer)) or isinstance(permutations, bool):
        raise InvalidDrawCount(f"permutation count must be an integer, got {permutations!r}")
    if permutations < 99:
        raise InvalidDrawCount(f"need at least 99 permutations, got {permutations}")
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), _TAG_PERM]))
    values = np.empty(permutations)
    for k in range(permutations):
        values[k] = statistic(PairedSample(sample.x1, rng.permutation(sample.x2)))
    values.sort()
    return NullModel(
        kind="permutation_empirical",
        statistic_kind=statistic_kind,
        bank=values,
        n=sample.n,
        seed=int(seed),
    )


def xi_star_null(
    n: int,
    reps: int = 1000,
    seed: int = 0,
    kernel=None,
    grid_m: int | None = None,
) -> NullModel:
    """Monte Carlo null of the smoothed coefficient at sample size ``n``.

    Records the kernel settings so a test can verify the null matches
    its own configuration.
    """
    from .coefficients import xi_star_n
    from .kernels import triweight_kernel

    kern = triweight_kernel(n) if kernel is None else kernel
    m = default_grid_resolution(n) if grid_m is None else grid_m

    def statistic(sample: PairedSample) -> float:
        artifacts = compute_rank_artifacts(sample, seed=0)
        return xi_star_n(artifacts, kernel=kern, grid_m=m).value

    return monte_carlo_null(
        statistic,
        n,
        reps,
        seed,
        statistic_kind="xi_star",
        params={"h1": kern.h1, "h2": kern.h2, "grid_m": m, "kernel": kern.name},
    )


def xi_projection_diagnostic(artifacts: RankArtifacts) -> float:
    """Plug-in projection approximating the null behavior of the rank correlation.

    With ``u[i] = r[i] / n`` the summands
    ``|u[i+1] - u[i]| + u[i+1](1 - u[i+1]) + u[i](1 - u[i]) - 2/3``
    each lie in ``[-1, 1]``; their sum over ``i < n`` divided by
    ``sqrt(n)`` tracks ``-sqrt(n) * xi_n / 3`` under independence.
    """
    if artifacts.has_ties_x2:
        raise TiesUnsupported("the projection diagnostic requires tie-free x2")
    u = artifacts.r / artifacts.n
    terms = np.abs(np.diff(u)) + u[1:] * (1.0 - u[1:]) + u[:-1] * (1.0 - u[:-1]) - 2.0 / 3.0
    return float(terms.sum() / math.sqrt(artifacts.n))


def save_bank(model: NullModel, path) -> None:
    """Write an empirical null bank to ``path`` in the flat binary format.

    Layout: 16-byte header (magic, kind code, truncation or sample
    size, draw count), then the sorted bank as little-endian 64-bit
    floats.
    """
    if model.kind == "normal_xi" or model.bank is None:
        raise ValueError("only bank-backed null models can be saved")
    family = _FAMILY_CODES[model.kind]
    stat = _STAT_CODES[model.statistic_kind]
    size_field = model.grid.truncation if model.kind == "weighted_chisq" else (model.n or 0)
    header = _BANK_HEADER.pack(_BANK_MAGIC, (family << 8) | stat, size_field, model.draws)
    payload = np.ascontiguousarray(model.bank, dtype="<f8").tobytes()
    Path(path).write_bytes(header + payload)


def load_bank(path) -> NullModel:
    """Read a bank written by :func:`save_bank`; seed is not recorded.

    Monte Carlo banks for the smoothed coefficient are tagged with the
    default kernel settings for their sample size, which is what
    :func:`xi_star_null` and the command line always build.
    """
    raw = Path(path).read_bytes()
    if len(raw) < _BANK_HEADER.size:
        raise ValueError(f"{path}: truncated bank file")
    magic, kind_code, size_field, draws = _BANK_HEADER.unpack_from(raw)
    if magic != _BANK_MAGIC:
        raise ValueError(f"{path}: not a null bank file")
    family = _FAMILY_NAMES.get(kind_code >> 8)
    stat = _STAT_NAMES.get(kind_code & 0xFF)
    if family is None or stat is None:
        raise ValueError(f"{path}: unknown bank kind code {kind_code}")
    expected = _BANK_HEADER.size + 8 * draws
    if len(raw) != expected:
        raise ValueError(f"{path}: expected {expected} bytes, found {len(raw)}")
    bank = np.frombuffer(raw, dtype="<f8", offset=_BANK_HEADER.size).astype(np.float64)
    if np.any(np.diff(bank) < 0.0):
        raise ValueError(f"{path}: bank entries are not sorted")
    grid = None
    n = None
    params: dict = {}
    if family == "weighted_chisq":
        grid = EigenGrid.build(stat, size_field)
    else:
        n = int(size_field)
        if stat == "xi_star":
            h = default_bandwidth(n)
            params = {
                "h1": h,
                "h2": h,
                "grid_m": default_grid_resolution(n),
                "kernel": "triweight",
            }
    return NullModel(
        kind=family, statistic_kind=stat, bank=bank, grid=grid, n=n, params=params
    )
