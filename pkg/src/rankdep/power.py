"""Monte Carlo power and size studies over the preset alternatives.

One dataset is generated per (preset, sample size, replicate) cell and
shared by every requested test, mirroring a paired comparison and
keeping column-to-column Monte Carlo noise down.  Replicate seeds are
derived from (master seed, preset index, n, replicate), so results are
identical for any worker count and any execution order.

A failing replicate is recorded against the affected coefficient and
never aborts the sweep; rates are always exact ratios of the stored
integer counts.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .alternatives import PRESET_NAMES, LocalSchedule, preset
from .coefficients import d_n_fast, taustar_n, xi_n, xi_star_n
from .nulls import (
    NullModel,
    load_bank,
    normal_xi_null,
    save_bank,
    weighted_chisq_null,
    xi_star_null,
)
from .ranks import compute_rank_artifacts

__all__ = [
    "ALL_COEFFICIENTS",
    "PowerStudyConfig",
    "CellResult",
    "ResultTable",
    "run_power_study",
    "weighted_bank",
    "xi_star_bank",
]

ALL_COEFFICIENTS = ("xi", "xi_star", "d", "r", "tau_star")

_TAG_POWER = 0xCE11


@dataclass(frozen=True)
class PowerStudyConfig:
    """Declarative description of one power or size sweep.

    ``delta0`` of ``None`` uses each preset's own scale; an explicit 0
    turns the sweep into a size study.  The smoothed coefficient is
    skipped at sample sizes of ``skip_xi_star_from`` and above, where it
    costs around a thousand times the plain coefficient per replicate;
    pass ``None`` to force it everywhere.
    """

    presets: tuple[str, ...]
    sizes: tuple[int, ...] = (500, 1000)
    replicates: int = 500
    alpha: float = 0.05
    seed: int = 0
    coefficients: tuple[str, ...] = ALL_COEFFICIENTS
    delta0: float | None = None
    truncation: int = 100
    bank_draws: int = 10**6
    bank_reps: int = 1000
    bank_dir: str | None = None
    workers: int = 1
    skip_xi_star_from: int | None = 5000

    def __post_init__(self) -> None:
        object.__setattr__(self, "presets", tuple(str(p).lower() for p in self.presets))
        object.__setattr__(self, "sizes", tuple(int(n) for n in self.sizes))
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        if not self.presets:
            raise ValueError("at least one preset is required")
        for p in self.presets:
            if p not in PRESET_NAMES:
                raise ValueError(f"unknown preset {p!r}")
        if not self.sizes:
            raise ValueError("at least one sample size is required")
        if any(n < 8 for n in self.sizes):
            raise ValueError(f"all sample sizes must be at least 8, got {self.sizes}")
        if self.replicates < 1:
            raise ValueError(f"replicates must be at least 1, got {self.replicates}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if not self.coefficients:
            raise ValueError("at least one coefficient is required")
        for c in self.coefficients:
            if c not in ALL_COEFFICIENTS:
                raise ValueError(f"unknown coefficient {c!r}")
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")

    def digest(self) -> str:
        """Stable fingerprint of every statistically relevant field."""
        fields = asdict(self)
        # execution placement does not affect the statistics
        fields.pop("workers")
        fields.pop("bank_dir")
        payload = json.dumps(fields, sort_keys=True, default=str)
        return hashlib.sha256(payload.encode()).hexdigest()[:12]


@dataclass(frozen=True)
class CellResult:
    """Rejection tally for one (preset, n, coefficient) cell."""

    preset: str
    n: int
    coefficient: str
    rejections: int
    replicates: int
    seconds: float
    error: str | None = None
    skipped: bool = False

    @property
    def rate(self) -> float:
        if self.replicates == 0:
            return math.nan
        return self.rejections / self.replicates


@dataclass(frozen=True)
class ResultTable:
    """All cells of a sweep plus the config that produced them.

    ``shared_seconds`` holds the sampling-and-ranking time per
    (preset, n), which is shared across coefficients and therefore not
    attributed to any single cell.
    """

    config: PowerStudyConfig
    digest: str
    cells: tuple[CellResult, ...]
    shared_seconds: tuple[tuple[str, int, float], ...] = ()

    def cell(self, preset_name: str, n: int, coefficient: str) -> CellResult:
        for c in self.cells:
            if (c.preset, c.n, c.coefficient) == (preset_name, n, coefficient):
                return c
        raise KeyError(f"no cell ({preset_name!r}, {n}, {coefficient!r})")

    def rate(self, preset_name: str, n: int, coefficient: str) -> float:
        return self.cell(preset_name, n, coefficient).rate

    def to_tsv(self, header: bool = True) -> str:
        cols = list(self.config.coefficients)
        lines = []
        if header:
            lines.append("\t".join(["preset", "n"] + cols))
        for p in self.config.presets:
            for n in self.config.sizes:
                row = [p, str(n)]
                for c in cols:
                    cell = self.cell(p, n, c)
                    row.append("NA" if cell.replicates == 0 else f"{cell.rate:.3f}")
                lines.append("\t".join(row))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {
                "config": asdict(self.config),
                "digest": self.digest,
                "cells": [asdict(c) for c in self.cells],
                "shared_seconds": [
                    {"preset": p, "n": n, "seconds": s}
                    for (p, n, s) in self.shared_seconds
                ],
            },
            indent=2,
            sort_keys=True,
        )


def _bank_file(bank_dir: str, name: str) -> Path:
    path = Path(bank_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path / name


def weighted_bank(
    kind: str,
    truncation: int = 100,
    draws: int = 10**6,
    seed: int = 0,
    bank_dir: str | None = None,
) -> NullModel:
    """Weighted chi-square bank, loaded from ``bank_dir`` when cached."""
    if bank_dir is not None:
        path = _bank_file(bank_dir, f"wchisq_{kind}_V{truncation}_B{draws}_seed{seed}.bank")
        if path.exists():
            return load_bank(path)
        model = weighted_chisq_null(kind, truncation, draws, seed)
        save_bank(model, path)
        return model
    return weighted_chisq_null(kind, truncation, draws, seed)


def xi_star_bank(
    n: int,
    reps: int = 1000,
    seed: int = 0,
    bank_dir: str | None = None,
) -> NullModel:
    """Monte Carlo bank for the smoothed coefficient at sample size ``n``."""
    if bank_dir is not None:
        path = _bank_file(bank_dir, f"mc_xi_star_n{n}_r{reps}_seed{seed}.bank")
        if path.exists():
            return load_bank(path)
        model = xi_star_null(n, reps, seed)
        save_bank(model, path)
        return model
    return xi_star_null(n, reps, seed)


def _cell_delta(schedule: LocalSchedule, delta0: float | None, n: int) -> float:
    if delta0 is None:
        return schedule.at(n).delta_n
    if delta0 == 0:
        return 0.0
    return LocalSchedule(delta0).at(n).delta_n


def _replicate_seed(master: int, preset_idx: int, n: int, rep: int) -> int:
    ss = np.random.SeedSequence([int(master), _TAG_POWER, preset_idx, int(n), int(rep)])
    return int(ss.generate_state(1, np.uint64)[0])


def _run_chunk(task: tuple) -> tuple:
    """Evaluate one block of replicates for one (preset, n) cell.

    Returns integer rejection and completion counts plus per
    coefficient timing and the earliest error seen per coefficient;
    everything aggregates order-independently.
    """
    (preset_name, n, delta, lo, hi, master, coefficients, crits, _alpha) = task
    model, _ = preset(preset_name)
    pidx = PRESET_NAMES.index(preset_name)
    wanted = set(coefficients)
    counts = {c: 0 for c in coefficients}
    completed = {c: 0 for c in coefficients}
    times = {c: 0.0 for c in coefficients}
    errors: dict[str, tuple[int, str]] = {}
    shared = 0.0
    sqrt_n = math.sqrt(n)

    def record(coeff: str, rep: int, exc: Exception) -> None:
        entry = (rep, f"replicate {rep}: {type(exc).__name__}: {exc}")
        if coeff not in errors or entry[0] < errors[coeff][0]:
            errors[coeff] = entry

    needs_artifacts = bool(wanted & {"xi", "xi_star", "d", "r"})
    for rep in range(lo, hi):
        seed_rep = _replicate_seed(master, pidx, n, rep)
        t0 = time.perf_counter()
        try:
            sample = model.sample(delta, n, seed_rep)
        except Exception as exc:
            for c in coefficients:
                record(c, rep, exc)
            continue
        artifacts = None
        art_exc: Exception | None = None
        if needs_artifacts:
            try:
                artifacts = compute_rank_artifacts(sample, seed=0)
            except Exception as exc:
                art_exc = exc
        shared += time.perf_counter() - t0

        if "xi" in wanted:
            if art_exc is not None:
                record("xi", rep, art_exc)
            else:
                try:
                    t0 = time.perf_counter()
                    stat = sqrt_n * xi_n(artifacts).value
                    times["xi"] += time.perf_counter() - t0
                    counts["xi"] += abs(stat) > crits["xi"]
                    completed["xi"] += 1
                except Exception as exc:
                    record("xi", rep, exc)

        dval = None
        d_exc = art_exc
        if wanted & {"d", "r"} and d_exc is None:
            try:
                t0 = time.perf_counter()
                dval = d_n_fast(artifacts).value
                times["d" if "d" in wanted else "r"] += time.perf_counter() - t0
            except Exception as exc:
                d_exc = exc
        if "d" in wanted:
            if d_exc is not None:
                record("d", rep, d_exc)
            else:
                counts["d"] += n * dval > crits["d"]
                completed["d"] += 1

        tauval = None
        tau_exc: Exception | None = None
        if wanted & {"tau_star", "r"}:
            try:
                t0 = time.perf_counter()
                tauval = taustar_n(sample).value
                times["tau_star" if "tau_star" in wanted else "r"] += (
                    time.perf_counter() - t0
                )
            except Exception as exc:
                tau_exc = exc
        if "tau_star" in wanted:
            if tau_exc is not None:
                record("tau_star", rep, tau_exc)
            else:
                counts["tau_star"] += n * tauval > crits["tau_star"]
                completed["tau_star"] += 1

        if "r" in wanted:
            exc = d_exc or tau_exc
            if exc is not None:
                record("r", rep, exc)
            elif artifacts.has_ties_x1 or artifacts.has_ties_x2:
                # the no-tie identity does not apply; float collisions
                # are practically impossible for the preset samplers
                record(
                    "r",
                    rep,
                    ValueError("tied replicate; identity path unavailable"),
                )
            else:
                rval = (tauval - 12.0 * dval) / 24.0
                counts["r"] += n * rval > crits["r"]
                completed["r"] += 1

        if "xi_star" in wanted:
            if art_exc is not None:
                record("xi_star", rep, art_exc)
            else:
                try:
                    t0 = time.perf_counter()
                    star = xi_star_n(artifacts).value
                    times["xi_star"] += time.perf_counter() - t0
                    counts["xi_star"] += star > crits["xi_star"]
                    completed["xi_star"] += 1
                except Exception as exc:
                    record("xi_star", rep, exc)

    return (preset_name, n, counts, completed, times, errors, shared)


def run_power_study(config: PowerStudyConfig) -> ResultTable:
    """Run the sweep described by ``config`` and tabulate rejection rates.

    Null banks are built (or loaded from ``config.bank_dir``) up front;
    per-replicate decisions then reduce to comparisons against fixed
    critical values, which is exactly what the tests themselves do.
    """
    alpha = config.alpha
    crits: dict[str, float] = {}
    if "xi" in config.coefficients:
        crits["xi"] = normal_xi_null().quantile(1.0 - alpha / 2.0)
    if {"d", "r"} & set(config.coefficients):
        bank = weighted_bank(
            "d_or_r", config.truncation, config.bank_draws, config.seed, config.bank_dir
        )
        crits["d"] = crits["r"] = bank.quantile(1.0 - alpha)
    if "tau_star" in config.coefficients:
        bank = weighted_bank(
            "tau_star", config.truncation, config.bank_draws, config.seed, config.bank_dir
        )
        crits["tau_star"] = bank.quantile(1.0 - alpha)

    skip_from = config.skip_xi_star_from
    star_sizes = [
        n
        for n in config.sizes
        if "xi_star" in config.coefficients and (skip_from is None or n < skip_from)
    ]
    star_crits = {
        n: xi_star_bank(n, config.bank_reps, config.seed, config.bank_dir).quantile(
            1.0 - alpha
        )
        for n in star_sizes
    }

    tasks = []
    for preset_name in config.presets:
        _, schedule = preset(preset_name)
        for n in config.sizes:
            delta = _cell_delta(schedule, config.delta0, n)
            cell_coeffs = tuple(
                c
                for c in config.coefficients
                if c != "xi_star" or n in star_crits
            )
            cell_crits = dict(crits)
            if n in star_crits:
                cell_crits["xi_star"] = star_crits[n]
            if not cell_coeffs:
                continue
            chunk = max(1, math.ceil(config.replicates / config.workers))
            for lo in range(0, config.replicates, chunk):
                hi = min(lo + chunk, config.replicates)
                tasks.append(
                    (
                        preset_name,
                        n,
                        delta,
                        lo,
                        hi,
                        config.seed,
                        cell_coeffs,
                        cell_crits,
                        alpha,
                    )
                )

    if config.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_run_chunk, tasks))
    else:
        results = [_run_chunk(t) for t in tasks]

    agg: dict[tuple[str, int], dict] = {}
    for preset_name, n, counts, completed, times, errors, shared in results:
        slot = agg.setdefault(
            (preset_name, n),
            {"counts": {}, "completed": {}, "times": {}, "errors": {}, "shared": 0.0},
        )
        for c, v in counts.items():
            slot["counts"][c] = slot["counts"].get(c, 0) + v
            slot["completed"][c] = slot["completed"].get(c, 0) + completed[c]
            slot["times"][c] = slot["times"].get(c, 0.0) + times[c]
        for c, entry in errors.items():
            if c not in slot["errors"] or entry[0] < slot["errors"][c][0]:
                slot["errors"][c] = entry
        slot["shared"] += shared

    cells = []
    shared_seconds = []
    for preset_name in config.presets:
        for n in config.sizes:
            slot = agg.get((preset_name, n))
            for c in config.coefficients:
                if slot is None or c not in slot["counts"]:
                    cells.append(
                        CellResult(preset_name, n, c, 0, 0, 0.0, skipped=True)
                    )
                    continue
                err = slot["errors"].get(c)
                cells.append(
                    CellResult(
                        preset=preset_name,
                        n=n,
                        coefficient=c,
                        rejections=slot["counts"][c],
                        replicates=slot["completed"][c],
                        seconds=slot["times"][c],
                        error=None if err is None else err[1],
                    )
                )
            if slot is not None:
                shared_seconds.append((preset_name, n, slot["shared"]))

    return ResultTable(
        config=config,
        digest=config.digest(),
        cells=tuple(cells),
        shared_seconds=tuple(shared_seconds),
    )
