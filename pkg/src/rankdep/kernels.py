"""Smoothing kernel for the copula-density coefficient and its quadrature.

The shipped default is the triweight kernel, which is symmetric, has
compact support on ``[-1, 1]``, and is twice continuously differentiable
everywhere including the support boundary (its first and second
derivatives vanish at ``x = 1``).  The quadratic biweight kernel fails
that smoothness requirement, which is why it is not offered.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import numpy.typing as npt
from scipy.integrate import quad

from .errors import InvalidGrid


def triweight_density(x) -> npt.NDArray[np.float64]:
    """Triweight kernel, ``(35/32) (1 - x^2)^3`` on ``[-1, 1]``."""
    x = np.asarray(x, dtype=np.float64)
    inside = np.abs(x) <= 1.0
    out = np.zeros_like(x)
    x2 = x[inside] ** 2
    out[inside] = (35.0 / 32.0) * (1.0 - x2) ** 3
    return out


def triweight_cdf(x) -> npt.NDArray[np.float64]:
    """Antiderivative of the triweight kernel, clamped to ``[0, 1]``."""
    x = np.asarray(x, dtype=np.float64)
    xc = np.clip(x, -1.0, 1.0)
    # integral of (35/32)(1 - t^2)^3 from -1 to x
    poly = xc - xc**3 + 0.6 * xc**5 - xc**7 / 7.0
    return (35.0 / 32.0) * (poly + 16.0 / 35.0)


@dataclass(frozen=True)
class KernelSpec:
    """A smoothing kernel with its antiderivative and bandwidths.

    ``evaluate`` and ``cdf`` must accept numpy arrays.  ``h1`` smooths
    the first (grid position) coordinate, ``h2`` the rank coordinate.
    """

    name: str
    evaluate: Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]]
    cdf: Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]]
    h1: float
    h2: float

    def __post_init__(self):
        if not (self.h1 > 0.0 and self.h2 > 0.0):
            raise ValueError(f"bandwidths must be positive, got {self.h1}, {self.h2}")

    def validate(self, tol: float = 1e-8) -> None:
        """Numerically check symmetry, normalization, support, and the cdf.

        Raises ``ValueError`` on the first failed check.
        """
        grid = np.linspace(0.0, 1.0, 201)
        if not np.allclose(self.evaluate(grid), self.evaluate(-grid), atol=1e-12):
            raise ValueError("kernel is not symmetric")
        if np.any(self.evaluate(np.array([-1.5, 1.5, -2.0, 2.0])) != 0.0):
            raise ValueError("kernel support exceeds [-1, 1]")
        if np.any(self.evaluate(grid) < 0.0):
            raise ValueError("kernel takes negative values")
        mass, _ = quad(lambda t: float(self.evaluate(np.array([t]))[0]), -1.0, 1.0)
        if abs(mass - 1.0) > tol:
            raise ValueError(f"kernel mass is {mass}, expected 1")
        probe = np.linspace(-1.0, 1.0, 41)
        cdf_vals = self.cdf(probe)
        if np.any(np.diff(cdf_vals) < -1e-12):
            raise ValueError("kernel cdf is not monotone")
        for t in (-0.75, -0.25, 0.0, 0.4, 0.9):
            part, _ = quad(lambda s: float(self.evaluate(np.array([s]))[0]), -1.0, t)
            if abs(part - float(self.cdf(np.array([t]))[0])) > tol:
                raise ValueError(f"kernel cdf disagrees with integrated density at {t}")
        if abs(float(self.cdf(np.array([-1.0]))[0])) > tol or abs(
            float(self.cdf(np.array([1.0]))[0]) - 1.0
        ) > tol:
            raise ValueError("kernel cdf endpoints are not 0 and 1")


def default_bandwidth(n: int) -> float:
    """Bandwidth ``n**(-3/10)``, satisfying the rate window for both axes."""
    return float(n) ** -0.3


def triweight_kernel(
    n: int | None = None, h1: float | None = None, h2: float | None = None
) -> KernelSpec:
    """Triweight kernel with default bandwidths tied to the sample size."""
    if h1 is None or h2 is None:
        if n is None:
            raise ValueError("need a sample size when bandwidths are not given")
        h = default_bandwidth(n)
        h1 = h if h1 is None else h1
        h2 = h if h2 is None else h2
    return KernelSpec(
        name="triweight", evaluate=triweight_density, cdf=triweight_cdf, h1=h1, h2=h2
    )


def default_grid_resolution(n: int) -> int:
    """Smallest even number of Simpson panels at least ``n**(7/16)``."""
    m = int(np.ceil(float(n) ** (7.0 / 16.0)))
    if m % 2 == 1:
        m += 1
    return max(m, 4)


def simpson_weights(m: int) -> npt.NDArray[np.float64]:
    """Composite Simpson weights on ``m`` panels over ``[0, 1]``."""
    if not isinstance(m, (int, np.integer)) or isinstance(m, bool):
        raise InvalidGrid(f"grid resolution must be an integer, got {m!r}")
    if m < 4 or m % 2 != 0:
        raise InvalidGrid(f"grid resolution must be an even integer >= 4, got {m}")
    w = np.ones(m + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w / (3.0 * m)


def simpson2d(values: npt.NDArray[np.float64], m: int) -> float:
    """Integrate a function tabulated on the ``(m+1) x (m+1)`` Simpson grid."""
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (m + 1, m + 1):
        raise InvalidGrid(
            f"expected a {(m + 1, m + 1)} table for resolution {m}, got {values.shape}"
        )
    w = simpson_weights(m)
    return float(w @ values @ w)
