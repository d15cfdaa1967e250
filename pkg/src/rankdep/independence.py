"""Independence tests calibrated against the null distributions.

Four entry points: a two-sided normal test for the rank correlation,
a one-sided weighted chi-square test shared by the three degenerate
U-statistics, a Monte Carlo calibrated one-sided test for the smoothed
coefficient, and permutation tests for any of the five statistics.

Every test returns a :class:`TestResult` whose ``statistic`` is the
quantity actually compared with ``critical_value``: ``sqrt(n) * xi_n``
for the normal test, ``n * mu_n`` for the weighted chi-square tests,
and the raw coefficient for the empirical nulls.  All comparisons use
strict inequalities, so a statistic exactly at the boundary never
rejects.  For the one-sided empirical nulls the decision and the
p-value agree exactly: ``reject`` if and only if ``p_value <= alpha``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .coefficients import d_n_fast, r_n, taustar_n, xi_n, xi_star_n
from .errors import KindMismatch, NullMismatch, TiesUnsupported
from .kernels import KernelSpec, default_grid_resolution, triweight_kernel
from .nulls import NullModel, normal_xi_null, permutation_null
from .ranks import PairedSample, compute_rank_artifacts

__all__ = [
    "TestResult",
    "xi_test",
    "mu_test",
    "xi_star_test",
    "permutation_test",
]

MU_KINDS = ("d", "r", "tau_star")


@dataclass(frozen=True)
class TestResult:
    """Outcome of one independence test at level ``alpha``."""

    coefficient: str
    statistic: float
    critical_value: float
    p_value: float
    reject: bool
    alpha: float
    null_kind: str


def _check_alpha(alpha: float) -> float:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    return float(alpha)


def xi_test(sample: PairedSample, alpha: float = 0.05, seed: int = 0) -> TestResult:
    """Two-sided normal test on ``sqrt(n) * xi_n``.

    Rejects when ``sqrt(n) * |xi_n|`` exceeds ``sqrt(0.4)`` times the
    ``1 - alpha/2`` standard normal quantile; the p-value is
    ``2 * (1 - Phi(sqrt(n) |xi_n| / sqrt(0.4)))``.  Requires a
    tie-free second coordinate; ties route to :func:`permutation_test`.
    """
    alpha = _check_alpha(alpha)
    artifacts = compute_rank_artifacts(sample, seed=seed)
    if artifacts.has_ties_x2:
        raise TiesUnsupported(
            "the normal null requires tie-free x2; use permutation_test"
        )
    null = normal_xi_null()
    statistic = math.sqrt(sample.n) * xi_n(artifacts).value
    critical = null.quantile(1.0 - alpha / 2.0)
    p_value = 2.0 * null.p_value_upper(abs(statistic))
    return TestResult(
        coefficient="xi",
        statistic=statistic,
        critical_value=critical,
        p_value=p_value,
        reject=abs(statistic) > critical,
        alpha=alpha,
        null_kind=null.kind,
    )


def mu_test(
    sample: PairedSample,
    kind: str,
    null: NullModel,
    alpha: float = 0.05,
    seed: int = 0,
) -> TestResult:
    """One-sided test of ``n * mu_n`` against a weighted chi-square bank.

    ``kind`` selects the coefficient: ``"d"``, ``"r"``, or
    ``"tau_star"``.  The null bank must come from
    :func:`~rankdep.nulls.weighted_chisq_null` with the matching grid
    (``"d_or_r"`` serves both order-5 and order-6 coefficients).
    Requires tie-free data; the asymptotic null does not cover ties.
    """
    alpha = _check_alpha(alpha)
    kind = str(kind).lower()
    if kind not in MU_KINDS:
        raise ValueError(f"kind must be one of {MU_KINDS}, got {kind!r}")
    if null.kind != "weighted_chisq":
        raise KindMismatch(
            f"expected a weighted chi-square null, got kind {null.kind!r}"
        )
    expected_grid = "tau_star" if kind == "tau_star" else "d_or_r"
    if null.statistic_kind != expected_grid:
        raise KindMismatch(
            f"null bank was built for {null.statistic_kind!r}, "
            f"but coefficient {kind!r} needs {expected_grid!r}"
        )
    artifacts = compute_rank_artifacts(sample, seed=seed)
    if artifacts.has_ties_x1 or artifacts.has_ties_x2:
        raise TiesUnsupported(
            "the weighted chi-square null requires tie-free data; "
            "use permutation_test"
        )
    if kind == "d":
        value = d_n_fast(artifacts).value
    elif kind == "r":
        value = r_n(sample, artifacts).value
    else:
        value = taustar_n(sample).value
    statistic = sample.n * value
    critical = null.quantile(1.0 - alpha)
    p_value = null.p_value_upper(statistic)
    return TestResult(
        coefficient=kind,
        statistic=statistic,
        critical_value=critical,
        p_value=p_value,
        reject=statistic > critical,
        alpha=alpha,
        null_kind=null.kind,
    )


def xi_star_test(
    sample: PairedSample,
    null: NullModel,
    alpha: float = 0.05,
    kernel: KernelSpec | None = None,
    grid_m: int | None = None,
    seed: int = 0,
) -> TestResult:
    """One-sided Monte Carlo calibrated test on the smoothed coefficient.

    Rejects when the raw coefficient exceeds the ``1 - alpha`` quantile
    of a bank from :func:`~rankdep.nulls.xi_star_null`.  The bank must
    record the same sample size, kernel, bandwidths, and quadrature
    resolution as the test evaluation; any difference raises
    :class:`~rankdep.errors.NullMismatch`.
    """
    alpha = _check_alpha(alpha)
    if null.kind != "monte_carlo_empirical" or null.statistic_kind != "xi_star":
        raise NullMismatch(
            "expected a Monte Carlo bank for the smoothed coefficient, got "
            f"{null.kind!r} for {null.statistic_kind!r}"
        )
    if null.n != sample.n:
        raise NullMismatch(f"null bank was built for n={null.n}, sample has n={sample.n}")
    kern = triweight_kernel(sample.n) if kernel is None else kernel
    m = default_grid_resolution(sample.n) if grid_m is None else int(grid_m)
    recorded = null.params
    for key in ("h1", "h2", "grid_m", "kernel"):
        if key not in recorded:
            raise NullMismatch(f"null bank does not record kernel setting {key!r}")
    same = (
        recorded["kernel"] == kern.name
        and recorded["grid_m"] == m
        and math.isclose(recorded["h1"], kern.h1, rel_tol=1e-12)
        and math.isclose(recorded["h2"], kern.h2, rel_tol=1e-12)
    )
    if not same:
        raise NullMismatch(
            f"null bank settings {recorded} do not match the requested "
            f"kernel={kern.name!r} h1={kern.h1} h2={kern.h2} grid_m={m}"
        )
    artifacts = compute_rank_artifacts(sample, seed=seed)
    statistic = xi_star_n(artifacts, kernel=kern, grid_m=m).value
    critical = null.quantile(1.0 - alpha)
    p_value = null.p_value_upper(statistic)
    return TestResult(
        coefficient="xi_star",
        statistic=statistic,
        critical_value=critical,
        p_value=p_value,
        reject=statistic > critical,
        alpha=alpha,
        null_kind=null.kind,
    )


def _permutation_statistic(kind: str):
    """Map a coefficient name to the scalar statistic fed to the bank.

    The rank correlation enters through its absolute value, making the
    upper-tail permutation comparison a two-sided test; the other four
    coefficients are compared as-is since large values indicate
    dependence.
    """
    if kind == "xi":
        return lambda s: abs(xi_n(compute_rank_artifacts(s, seed=0)).value)
    if kind == "xi_star":
        return lambda s: xi_star_n(compute_rank_artifacts(s, seed=0)).value
    if kind == "d":
        return lambda s: d_n_fast(compute_rank_artifacts(s, seed=0)).value
    if kind == "r":
        return lambda s: r_n(s).value
    if kind == "tau_star":
        return lambda s: taustar_n(s).value
    raise ValueError(f"unknown coefficient kind {kind!r}")


def permutation_test(
    sample: PairedSample,
    kind: str,
    alpha: float = 0.05,
    permutations: int = 999,
    seed: int = 0,
) -> TestResult:
    """Permutation test for any coefficient, valid under ties.

    The second coordinate is permuted ``permutations`` times; the
    p-value is ``(1 + #{permuted >= observed}) / (permutations + 1)``
    and the test rejects exactly when ``p_value <= alpha``.  The
    reported critical value is the matching bank order statistic, so
    ``reject`` also equals ``statistic > critical_value``.
    """
    alpha = _check_alpha(alpha)
    kind = str(kind).lower()
    statistic_fn = _permutation_statistic(kind)
    observed = statistic_fn(sample)
    null = permutation_null(
        sample, statistic_fn, permutations, seed=seed, statistic_kind=kind
    )
    p_value = null.p_value_upper(observed)
    # Largest bank count still rejected: 1 + count <= alpha * (P + 1).
    m = int(math.floor(alpha * (permutations + 1)))
    critical = math.inf if m < 1 else float(null.bank[permutations - m])
    return TestResult(
        coefficient=kind,
        statistic=observed,
        critical_value=critical,
        p_value=p_value,
        reject=observed > critical,
        alpha=alpha,
        null_kind=null.kind,
    )
