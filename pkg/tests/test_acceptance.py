"""Acceptance gate: ten end-to-end checks at fixed seeds and tolerances.

Each test prints one uncaptured PASS/FAIL line so a full run yields a
ten-line scorecard.  Everything statistical is pinned to master seed 1;
simulated banks land in the session cache directory, so the power
studies here share their builds with the rest of the suite.
"""

import math
import time

import numpy as np
import pytest
from scipy import stats as sps

from rankdep import (
    PowerStudyConfig,
    d_n_brute,
    d_n_fast,
    permutation_test,
    r_n,
    r_n_brute,
    run_power_study,
    taustar_n,
    taustar_n_brute,
    xi_n,
    xi_star_n,
)
from rankdep.ranks import PairedSample, compute_rank_artifacts

SEED = 1


def _rng(criterion: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([SEED, 0xACC, criterion]))


@pytest.fixture
def announce(capsys):
    def _announce(number: int, label: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            verdict = "PASS" if ok else "FAIL"
            print(f"[criterion {number:02d}] {verdict} {label}: {detail}")
        assert ok, f"criterion {number}: {detail}"

    return _announce


def _normal_sample(rng, n: int) -> PairedSample:
    return PairedSample(rng.standard_normal(n), rng.standard_normal(n))


def test_criterion_01_fast_paths_match_brute_force(announce):
    rng = _rng(1)
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(5, 13))
        sample = _normal_sample(rng, n)
        artifacts = compute_rank_artifacts(sample, seed=0)
        worst = max(
            worst,
            abs(d_n_fast(artifacts).value - d_n_brute(sample).value),
            abs(taustar_n(sample).value - taustar_n_brute(sample).value),
        )
        if n >= 6:
            worst = max(
                worst, abs(r_n(sample, artifacts).value - r_n_brute(sample).value)
            )
        jumps = int(np.abs(np.diff(artifacts.r)).sum())
        l = artifacts.l
        tie_form = 1.0 - n * jumps / (2.0 * float((l * (n - l)).sum()))
        worst = max(worst, abs(xi_n(artifacts).value - tie_form))
    announce(
        1, "fast paths vs brute-force oracles", worst <= 1e-12,
        f"max |fast - brute| = {worst:.2e} over 200 samples (tol 1e-12)",
    )


def test_criterion_02_order_coefficient_identity(announce):
    rng = _rng(2)
    worst = 0.0
    for _ in range(500):
        n = int(rng.integers(6, 2001))
        sample = _normal_sample(rng, n)
        artifacts = compute_rank_artifacts(sample, seed=0)
        d = d_n_fast(artifacts).value
        r = r_n(sample, artifacts).value
        tau = taustar_n(sample).value
        worst = max(worst, abs(12.0 * d + 24.0 * r - tau))
    announce(
        2, "12D + 24R = tau* identity", worst <= 1e-12,
        f"max residual = {worst:.2e} over 500 samples, n in [6, 2000] (tol 1e-12)",
    )


def test_criterion_03_comonotone_checkpoints(announce):
    exact = []
    for n in (4, 10, 100):
        x = np.arange(1.0, n + 1)
        value = xi_n(compute_rank_artifacts(PairedSample(x, 2.0 * x), seed=0)).value
        exact.append(value == 1.0 - 3.0 / (n + 1))
    quad = np.arange(1.0, 5.0)
    up = taustar_n(PairedSample(quad, quad + 1.0)).value
    down = taustar_n(PairedSample(quad, -quad)).value
    ok = all(exact) and up == 2.0 / 3.0 and down == 2.0 / 3.0
    announce(
        3, "comonotone closed forms", ok,
        f"xi exact at n=4,10,100: {exact}; tau*_4 = {up}, reversed {down} (want 2/3)",
    )


def test_criterion_04_null_calibration(announce, bank_dir):
    table = run_power_study(
        PowerStudyConfig(
            presets=("a",),
            sizes=(1000,),
            replicates=2000,
            delta0=0.0,
            coefficients=("xi", "d", "r", "tau_star"),
            seed=SEED,
            bank_dir=bank_dir,
        )
    )
    sizes = {c: table.rate("a", 1000, c) for c in ("xi", "d", "r", "tau_star")}
    ok = all(0.03 <= v <= 0.07 for v in sizes.values())
    detail = ", ".join(f"{c}={v:.3f}" for c, v in sizes.items())
    announce(4, "empirical sizes in [0.03, 0.07]", ok, detail)


def test_criterion_05_normal_limit_of_the_scaled_coefficient(announce):
    rng = _rng(5)
    stats = np.array(
        [
            math.sqrt(2000)
            * xi_n(compute_rank_artifacts(_normal_sample(rng, 2000), seed=0)).value
            for _ in range(2000)
        ]
    )
    var = float(stats.var(ddof=1))
    ks_p = float(sps.kstest(stats, lambda x: sps.norm.cdf(x, scale=math.sqrt(0.4))).pvalue)
    ok = 0.36 <= var <= 0.44 and ks_p > 0.01
    announce(
        5, "sqrt(n) xi is N(0, 2/5) at the null", ok,
        f"var = {var:.4f} (want [0.36, 0.44]), KS p = {ks_p:.4f} (want > 0.01)",
    )


def test_criterion_06_smoothed_coefficient_degeneracy(announce):
    rng = _rng(6)
    plain, smoothed = [], []
    for _ in range(500):
        artifacts = compute_rank_artifacts(_normal_sample(rng, 500), seed=0)
        plain.append(abs(math.sqrt(500) * xi_n(artifacts).value))
        smoothed.append(abs(math.sqrt(500) * xi_star_n(artifacts).value))
    lhs = float(np.mean(smoothed))
    rhs = 0.75 * float(np.mean(plain))
    announce(
        6, "smoothed coefficient shrinks faster than root-n", lhs < rhs,
        f"mean |sqrt(n) xi*| = {lhs:.3f}, 0.75 * mean |sqrt(n) xi| = {rhs:.3f}",
    )


def test_criterion_07_power_table_spot_rows(announce, bank_dir):
    def sweep(preset, n, coefficients):
        return run_power_study(
            PowerStudyConfig(
                presets=(preset,),
                sizes=(n,),
                replicates=1000,
                coefficients=coefficients,
                seed=SEED,
                bank_dir=bank_dir,
            )
        )

    spot = {}
    table = sweep("a", 500, ("xi", "d"))
    spot[("a", "xi", 0.103)] = table.rate("a", 500, "xi")
    spot[("a", "d", 0.954)] = table.rate("a", 500, "d")
    table = sweep("e", 500, ("xi", "xi_star", "d"))
    spot[("e", "xi", 0.719)] = table.rate("e", 500, "xi")
    spot[("e", "xi_star", 1.000)] = table.rate("e", 500, "xi_star")
    spot[("e", "d", 0.654)] = table.rate("e", 500, "d")
    table = sweep("f", 1000, ("xi", "d"))
    spot[("f", "xi", 0.459)] = table.rate("f", 1000, "xi")
    spot[("f", "d", 0.669)] = table.rate("f", 1000, "d")
    ok = all(abs(got - want) <= 0.05 for (_, _, want), got in spot.items())
    detail = "; ".join(
        f"({p}) {c}: {got:.3f} vs {want:.3f}"
        for (p, c, want), got in spot.items()
    )
    announce(7, "benchmark power rows within 0.05", ok, detail)


def test_criterion_08_rate_gap_between_coefficients(announce, bank_dir):
    table = run_power_study(
        PowerStudyConfig(
            presets=("a",),
            sizes=(1000,),
            replicates=1000,
            coefficients=("xi", "d", "r", "tau_star"),
            seed=SEED,
            bank_dir=bank_dir,
        )
    )
    rates = {c: table.rate("a", 1000, c) for c in ("xi", "d", "r", "tau_star")}
    ok = rates["xi"] < 0.15 and all(rates[c] > 0.85 for c in ("d", "r", "tau_star"))
    detail = ", ".join(f"{c}={v:.3f}" for c, v in rates.items())
    announce(8, "xi powerless where the order-4/5/6 tests succeed", ok, detail)


def test_criterion_09_permutation_size_under_ties(announce):
    rng = _rng(9)
    rejections = {"xi": 0, "d": 0}
    datasets = 1000
    for k in range(datasets):
        sample = PairedSample(
            rng.integers(1, 4, 200).astype(float),
            rng.integers(1, 4, 200).astype(float),
        )
        for coeff in rejections:
            rejections[coeff] += permutation_test(
                sample, coeff, 0.05, 199, seed=k
            ).reject
    bound = 0.05 + 3.0 * math.sqrt(0.05 * 0.95 / datasets)
    sizes = {c: r / datasets for c, r in rejections.items()}
    ok = all(v <= bound for v in sizes.values())
    detail = ", ".join(f"{c}={v:.4f}" for c, v in sizes.items())
    announce(
        9, "permutation tests hold their level on tied data",
        ok, f"{detail} (bound {bound:.4f})",
    )


def test_criterion_10_benchmark_ratios(announce):
    def evaluate(name: str, sample: PairedSample) -> float:
        if name == "xi":
            return xi_n(compute_rank_artifacts(sample, seed=0)).value
        if name == "xi_star":
            return xi_star_n(compute_rank_artifacts(sample, seed=0)).value
        return d_n_fast(compute_rank_artifacts(sample, seed=0)).value

    def total(name: str, datasets) -> float:
        start = time.perf_counter()
        for sample in datasets:
            evaluate(name, sample)
        return time.perf_counter() - start

    rng = _rng(10)

    def make(n: int, count: int):
        return [_normal_sample(rng, n) for _ in range(count)]

    for name in ("xi", "xi_star", "d"):
        evaluate(name, make(512, 1)[0])

    batch_5k, batch_10k = make(5000, 30), make(10000, 30)
    star_batch = make(5000, 3)
    star_total = total("xi_star", star_batch)
    xi_on_star_batch = total("xi", star_batch)
    xi_ratio = total("xi", batch_10k) / total("xi", batch_5k)
    d_ratio = total("d", batch_10k) / total("d", batch_5k)
    star_over_xi = star_total / xi_on_star_batch
    ok = star_over_xi >= 10.0 and xi_ratio < 3.0 and d_ratio < 3.0
    announce(
        10, "estimator cost scaling", ok,
        f"xi*/xi at n=5000: {star_over_xi:.0f}x (want >= 10); "
        f"doubling n: xi {xi_ratio:.2f}x, d {d_ratio:.2f}x (want < 3)",
    )
