"""Samplers for local dependence alternatives.

Three families are provided: linear rotations of two independent
margins, contamination mixtures sampled by rejection, and generalized
rotations that shift the second margin by a map of the first.  Six
named presets cover the standard power-study configurations; each
pairs a model with a ``delta0 / sqrt(n)`` schedule.

Margin generators are maps from a uniform stream (``ndarray`` in
``[0, 1)`` to ``ndarray``), so a fixed seed yields identical data
across families that share margins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import ndtri

from .errors import EnvelopeViolation, InvalidDelta, UnknownPreset
from .ranks import PairedSample

__all__ = [
    "ROTATION",
    "MIXTURE",
    "GENERALIZED_ROTATION",
    "PRESET_NAMES",
    "AlternativeModel",
    "LocalSchedule",
    "gaussian_margin",
    "uniform_margin",
    "sample_rotation",
    "sample_mixture",
    "sample_generalized_rotation",
    "preset",
]

ROTATION = "rotation"
MIXTURE = "mixture"
GENERALIZED_ROTATION = "generalized_rotation"

PRESET_NAMES = ("a", "b", "c", "d", "e", "f")

_TAG_SAMPLER = 0xA171
# rejection sampling safety stop; presets accept half of all proposals
_MAX_REJECTION_ROUNDS = 10_000


def gaussian_margin(u: np.ndarray) -> np.ndarray:
    """Standard normal margin from a uniform stream.

    The stream's only problematic value, exactly 0, is lifted to the
    smallest positive value the stream can produce.
    """
    return ndtri(np.maximum(u, 2.0**-53))


def uniform_margin(u: np.ndarray) -> np.ndarray:
    """Uniform [-1, 1] margin from a uniform stream."""
    return 2.0 * u - 1.0


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), _TAG_SAMPLER]))


@dataclass(frozen=True)
class LocalSchedule:
    """Dependence scale ``delta0 / sqrt(n)`` shrinking with sample size.

    Constructed without ``n`` it acts as a template; :meth:`at` fills
    in a sample size.  For rotation models the resulting ``delta_n``
    must stay below 1, which the samplers enforce at draw time.
    """

    delta0: float
    n: int | None = None

    def __post_init__(self) -> None:
        if not self.delta0 > 0.0:
            raise ValueError(f"delta0 must be positive, got {self.delta0}")
        if self.n is not None and self.n < 1:
            raise ValueError(f"sample size must be positive, got {self.n}")

    def at(self, n: int) -> "LocalSchedule":
        return LocalSchedule(self.delta0, int(n))

    @property
    def delta_n(self) -> float:
        if self.n is None:
            raise ValueError("no sample size set; call .at(n) first")
        return self.delta0 / math.sqrt(self.n)


@dataclass(frozen=True)
class AlternativeModel:
    """One sampling family with its fixed ingredients; delta stays free.

    Rotation and generalized rotation use the margin generators
    ``f1_gen``/``f2_gen``; mixtures use an independence-component
    sampler plus the two densities and the rejection envelope constant.
    """

    family: str
    f1_gen: Callable[[np.ndarray], np.ndarray] | None = None
    f2_gen: Callable[[np.ndarray], np.ndarray] | None = None
    f0_sampler: Callable[[np.random.Generator, int], tuple] | None = None
    f0_density: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None
    g_density: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None
    envelope_c: float | None = None
    g_map: Callable[[np.ndarray], np.ndarray] | None = None
    label: str = ""

    def sample(self, delta: float, n: int, seed: int) -> PairedSample:
        if self.family == ROTATION:
            return sample_rotation(self.f1_gen, self.f2_gen, delta, n, seed)
        if self.family == MIXTURE:
            return sample_mixture(
                self.f0_sampler,
                self.g_density,
                self.f0_density,
                self.envelope_c,
                delta,
                n,
                seed,
            )
        if self.family == GENERALIZED_ROTATION:
            return sample_generalized_rotation(
                self.f1_gen, self.f2_gen, self.g_map, delta, n, seed
            )
        raise ValueError(f"unknown family {self.family!r}")


def sample_rotation(
    f1_gen: Callable[[np.ndarray], np.ndarray],
    f2_gen: Callable[[np.ndarray], np.ndarray],
    delta: float,
    n: int,
    seed: int = 0,
) -> PairedSample:
    """Linear rotation ``(Y1 + delta Y2, delta Y1 + Y2)`` of independent margins.

    ``delta = 0`` reproduces the margins unchanged.  The mixing matrix
    must stay invertible, so ``|delta| < 1`` is required.
    """
    if not abs(delta) < 1.0:
        raise InvalidDelta(f"rotation requires |delta| < 1, got {delta}")
    rng = _rng(seed)
    y1 = f1_gen(rng.random(n))
    y2 = f2_gen(rng.random(n))
    return PairedSample(y1 + delta * y2, delta * y1 + y2)


def sample_mixture(
    f0_sampler: Callable[[np.random.Generator, int], tuple],
    g_density: Callable[[np.ndarray, np.ndarray], np.ndarray],
    f0_density: Callable[[np.ndarray, np.ndarray], np.ndarray],
    envelope_c: float,
    delta: float,
    n: int,
    seed: int = 0,
) -> PairedSample:
    """Contamination mixture ``(1 - delta) F0 + delta G``.

    Each pair comes from the independence component with probability
    ``1 - delta`` and otherwise from ``G``, drawn by rejection: propose
    from ``F0``, accept with probability
    ``g(x) / (envelope_c * f0(x))``.  A proposal where that ratio
    exceeds 1 means the declared envelope is wrong and raises
    :class:`~rankdep.errors.EnvelopeViolation`.
    """
    if not 0.0 <= delta <= 1.0:
        raise InvalidDelta(f"mixture weight must be in [0, 1], got {delta}")
    rng = _rng(seed)
    from_g = rng.random(n) < delta
    x1 = np.empty(n)
    x2 = np.empty(n)
    k0 = int(n - from_g.sum())
    a1, a2 = f0_sampler(rng, k0)
    x1[~from_g] = a1
    x2[~from_g] = a2
    need = n - k0
    g1 = np.empty(need)
    g2 = np.empty(need)
    filled = 0
    rounds = 0
    while filled < need:
        rounds += 1
        if rounds > _MAX_REJECTION_ROUNDS:
            raise RuntimeError("rejection sampling made no progress; check densities")
        m = need - filled
        p1, p2 = f0_sampler(rng, m)
        base = np.asarray(f0_density(p1, p2), dtype=np.float64)
        if np.any(base <= 0.0):
            raise ValueError("proposal density must be positive at its own draws")
        ratio = np.asarray(g_density(p1, p2), dtype=np.float64) / (envelope_c * base)
        worst = float(ratio.max())
        if worst > 1.0:
            raise EnvelopeViolation(
                f"acceptance ratio {worst} exceeds 1; envelope constant "
                f"{envelope_c} is too small"
            )
        keep = rng.random(m) < ratio
        k = int(keep.sum())
        g1[filled : filled + k] = p1[keep]
        g2[filled : filled + k] = p2[keep]
        filled += k
    x1[from_g] = g1
    x2[from_g] = g2
    return PairedSample(x1, x2)


def sample_generalized_rotation(
    f1_gen: Callable[[np.ndarray], np.ndarray],
    f2_gen: Callable[[np.ndarray], np.ndarray],
    g_map: Callable[[np.ndarray], np.ndarray],
    delta: float,
    n: int,
    seed: int = 0,
) -> PairedSample:
    """Perturbed pairs ``(Y1, delta * g(Y1) + Y2)``.

    ``g_map`` must accept an array and return finite values on the
    support of the first margin.
    """
    rng = _rng(seed)
    y1 = f1_gen(rng.random(n))
    y2 = f2_gen(rng.random(n))
    shift = np.asarray(g_map(y1), dtype=np.float64)
    if shift.shape != y1.shape or not np.all(np.isfinite(shift)):
        raise ValueError("perturbation map must return finite values per point")
    return PairedSample(y1, float(delta) * shift + y2)


def _uniform_pair_sampler(rng: np.random.Generator, count: int) -> tuple:
    return uniform_margin(rng.random(count)), uniform_margin(rng.random(count))


def _uniform_square_density(x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    return np.full_like(np.asarray(x1, dtype=np.float64), 0.25)


def _farlie_density(x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    # density ratio to the uniform square is 1 + x1 * x2, at most 2
    return 0.25 * (1.0 + x1 * x2)


def _folded_density(x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    # density ratio to the uniform square is 1 - |x1| * x2, at most 2
    return 0.25 * (1.0 - np.abs(x1) * x2)


_STEP_EDGES = np.array([-0.5, 0.0, 0.5])
_STEP_VALUES = np.array([-3.0, 2.0, -4.0, -3.0])


def _step_map(t: np.ndarray) -> np.ndarray:
    """Piecewise constant on [-1,-0.5), [-0.5,0), [0,0.5), [0.5,1]."""
    return _STEP_VALUES[np.searchsorted(_STEP_EDGES, t, side="right")]


def _w_map(t: np.ndarray) -> np.ndarray:
    """W-shaped map |t+0.5| on t<0 and |t-0.5| on t>=0."""
    return np.where(t < 0.0, np.abs(t + 0.5), np.abs(t - 0.5))


def _cosine_map(t: np.ndarray) -> np.ndarray:
    return np.cos(2.0 * np.pi * t)


_PRESET_DELTA0 = {"a": 2.0, "b": 10.0, "c": 20.0, "d": 3.0, "e": 60.0, "f": 12.0}


def preset(name: str) -> tuple[AlternativeModel, LocalSchedule]:
    """Named power-study configuration: a model plus its delta schedule.

    - ``a``: Gaussian rotation, delta0 = 2.
    - ``b``: Farlie mixture on uniform [-1, 1] margins, delta0 = 10.
    - ``c``: folded-ratio mixture on the same margins, delta0 = 20.
    - ``d``: step-map generalized rotation, delta0 = 3.
    - ``e``: W-map generalized rotation, delta0 = 60.
    - ``f``: sinusoid generalized rotation, delta0 = 12.

    Presets ``d``-``f`` pair a uniform [-1, 1] first margin with a
    standard Gaussian second margin.
    """
    key = str(name).strip().lower()
    if key not in _PRESET_DELTA0:
        raise UnknownPreset(
            f"unknown preset {name!r}; choose one of {', '.join(PRESET_NAMES)}"
        )
    if key == "a":
        model = AlternativeModel(
            family=ROTATION,
            f1_gen=gaussian_margin,
            f2_gen=gaussian_margin,
            label="gaussian rotation",
        )
    elif key == "b":
        model = AlternativeModel(
            family=MIXTURE,
            f0_sampler=_uniform_pair_sampler,
            f0_density=_uniform_square_density,
            g_density=_farlie_density,
            envelope_c=2.0,
            label="farlie mixture",
        )
    elif key == "c":
        model = AlternativeModel(
            family=MIXTURE,
            f0_sampler=_uniform_pair_sampler,
            f0_density=_uniform_square_density,
            g_density=_folded_density,
            envelope_c=2.0,
            label="folded mixture",
        )
    else:
        g_map = {"d": _step_map, "e": _w_map, "f": _cosine_map}[key]
        model = AlternativeModel(
            family=GENERALIZED_ROTATION,
            f1_gen=uniform_margin,
            f2_gen=gaussian_margin,
            g_map=g_map,
            label={"d": "step shift", "e": "w shift", "f": "cosine shift"}[key],
        )
    return model, LocalSchedule(_PRESET_DELTA0[key])
