"""Command-line front end.

Five subcommands: ``corr`` computes coefficients on CSV data, ``test``
runs one independence test, ``power`` reproduces the power and size
studies at desk scale, ``bench`` times the estimators, and
``null-bank`` builds and caches weighted chi-square banks.

Exit codes: 0 on success, 2 for usage or validation problems
(including CSV parse errors), 3 for data that the requested method
cannot handle, 4 for unexpected internal errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from .alternatives import preset
from .coefficients import d_n_fast, r_n, taustar_n, xi_n, xi_star_n
from .errors import (
    DegenerateMarginal,
    InsufficientData,
    InvalidDelta,
    InvalidDrawCount,
    InvalidGrid,
    InvalidTruncation,
    KindMismatch,
    NullMismatch,
    TiesRequireBruteForce,
    TiesUnsupported,
    TooLargeForBruteForce,
    UnknownPreset,
)
from .independence import mu_test, permutation_test, xi_star_test, xi_test
from .nulls import save_bank
from .power import (
    ALL_COEFFICIENTS,
    PowerStudyConfig,
    run_power_study,
    weighted_bank,
    xi_star_bank,
)
from .ranks import PairedSample, compute_rank_artifacts

_USAGE_ERRORS = (
    UnknownPreset,
    InvalidDelta,
    InvalidTruncation,
    InvalidDrawCount,
    InvalidGrid,
    KindMismatch,
    NullMismatch,
)
_DATA_ERRORS = (
    InsufficientData,
    DegenerateMarginal,
    TiesUnsupported,
    TiesRequireBruteForce,
    TooLargeForBruteForce,
)

# CLI bank defaults trade a little quantile accuracy for startup time;
# the library-level default bank size is 10**6
_CLI_BANK_DRAWS = 200_000


class _UsageError(Exception):
    """Bad flags or malformed input; maps to exit code 2."""


def _parse_coeffs(text: str) -> tuple[str, ...]:
    names = [t.strip().lower() for t in text.split(",") if t.strip()]
    if not names:
        raise _UsageError("empty coefficient set")
    if names == ["all"]:
        return ALL_COEFFICIENTS
    for name in names:
        if name not in ALL_COEFFICIENTS:
            raise _UsageError(
                f"unknown coefficient {name!r}; choose from "
                f"{', '.join(ALL_COEFFICIENTS)} or 'all'"
            )
    return tuple(dict.fromkeys(names))


def _parse_sizes(text: str) -> tuple[int, ...]:
    try:
        sizes = tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise _UsageError(f"bad sample size list {text!r}: {exc}") from exc
    if not sizes:
        raise _UsageError("empty sample size list")
    return sizes


def _check_alpha(alpha: float) -> float:
    if not 0.0 < alpha < 1.0:
        raise _UsageError(f"alpha must be in (0, 1), got {alpha}")
    return alpha


def _read_csv(path: str, no_header: bool) -> PairedSample:
    """Read a two-column numeric CSV; line numbers count from 1."""
    x1: list[float] = []
    x2: list[float] = []
    try:
        handle = open(path, newline="")
    except OSError as exc:
        raise _UsageError(f"cannot open {path}: {exc}") from exc
    with handle:
        reader = csv.reader(handle)
        for lineno, row in enumerate(reader, start=1):
            if lineno == 1 and not no_header:
                continue
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 2:
                raise _UsageError(
                    f"{path}: line {lineno}: expected 2 columns, found {len(row)}"
                )
            values = []
            for cell in row:
                try:
                    values.append(float(cell))
                except ValueError as exc:
                    raise _UsageError(
                        f"{path}: line {lineno}: could not parse {cell.strip()!r} "
                        "as a number"
                    ) from exc
            x1.append(values[0])
            x2.append(values[1])
    if not x1:
        raise _UsageError(f"{path}: no data rows")
    try:
        return PairedSample(np.array(x1), np.array(x2))
    except ValueError as exc:
        raise _UsageError(f"{path}: {exc}") from exc


def _emit(rows: list[dict], fmt: str, no_header: bool) -> None:
    if fmt == "json":
        print(json.dumps(rows, indent=2, sort_keys=True))
        return
    if not rows:
        return
    cols = list(rows[0].keys())
    if not no_header:
        print("\t".join(cols))
    for row in rows:
        print("\t".join(_format_cell(row[c]) for c in cols))


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _cmd_corr(args: argparse.Namespace) -> int:
    sample = _read_csv(args.input, args.no_header)
    coeffs = _parse_coeffs(args.coeff)
    artifacts = compute_rank_artifacts(sample, seed=args.seed)
    rows = []
    estimates = {}
    for name in coeffs:
        try:
            if name == "xi":
                est = xi_n(artifacts)
            elif name == "xi_star":
                est = xi_star_n(artifacts)
            elif name == "d":
                est = d_n_fast(artifacts)
            elif name == "r":
                est = r_n(sample, artifacts)
            else:
                est = taustar_n(sample)
        except (TiesUnsupported, TiesRequireBruteForce, TooLargeForBruteForce) as exc:
            rows.append(
                {
                    "coefficient": name,
                    "value": "NA",
                    "n": sample.n,
                    "ties_x1": artifacts.has_ties_x1,
                    "ties_x2": artifacts.has_ties_x2,
                    "algorithm": f"unavailable: {exc}",
                }
            )
            continue
        estimates[name] = est.value
        rows.append(
            {
                "coefficient": name,
                "value": est.value,
                "n": est.n,
                "ties_x1": artifacts.has_ties_x1,
                "ties_x2": artifacts.has_ties_x2,
                "algorithm": est.algorithm,
            }
        )
    if {"d", "r", "tau_star"} <= set(estimates):
        residual = (
            12.0 * estimates["d"] + 24.0 * estimates["r"] - estimates["tau_star"]
        )
        rows.append(
            {
                "coefficient": "identity_residual",
                "value": residual,
                "n": sample.n,
                "ties_x1": artifacts.has_ties_x1,
                "ties_x2": artifacts.has_ties_x2,
                "algorithm": "12*d + 24*r - tau_star",
            }
        )
    _emit(rows, args.format, args.no_header)
    return 0


def _asymptotic_supported(coeff: str, artifacts) -> bool:
    if coeff == "xi":
        return not artifacts.has_ties_x2
    if coeff == "xi_star":
        return not artifacts.has_ties_x2
    return not (artifacts.has_ties_x1 or artifacts.has_ties_x2)


def _cmd_test(args: argparse.Namespace) -> int:
    alpha = _check_alpha(args.alpha)
    sample = _read_csv(args.input, args.no_header)
    coeffs = _parse_coeffs(args.coeff)
    if len(coeffs) != 1:
        raise _UsageError("test runs one coefficient at a time; pass --coeff NAME")
    coeff = coeffs[0]
    artifacts = compute_rank_artifacts(sample, seed=args.seed)
    use_permutation = args.permutation is not None or not _asymptotic_supported(
        coeff, artifacts
    )
    if use_permutation:
        p = args.permutation if args.permutation is not None else 999
        result = permutation_test(sample, coeff, alpha, p, seed=args.seed)
    elif coeff == "xi":
        result = xi_test(sample, alpha, seed=args.seed)
    elif coeff == "xi_star":
        null = xi_star_bank(sample.n, reps=1000, seed=args.seed, bank_dir=args.bank_dir)
        result = xi_star_test(sample, null, alpha, seed=args.seed)
    else:
        kind = "tau_star" if coeff == "tau_star" else "d_or_r"
        null = weighted_bank(
            kind,
            truncation=args.truncation,
            draws=args.draws,
            seed=args.seed,
            bank_dir=args.bank_dir,
        )
        result = mu_test(sample, coeff, null, alpha, seed=args.seed)
    rows = [
        {
            "coefficient": result.coefficient,
            "n": sample.n,
            "statistic": result.statistic,
            "critical_value": result.critical_value,
            "p_value": result.p_value,
            "reject": result.reject,
            "alpha": result.alpha,
            "null_kind": result.null_kind,
        }
    ]
    _emit(rows, args.format, args.no_header)
    return 0


def _cmd_power(args: argparse.Namespace) -> int:
    alpha = _check_alpha(args.alpha)
    presets = tuple(
        p.strip().lower() for p in args.preset.split(",") if p.strip()
    )
    if presets == ("all",):
        presets = ("a", "b", "c", "d", "e", "f")
    coeffs = _parse_coeffs(args.coeff)
    # an explicit request for the smoothed coefficient lifts the
    # large-n skip; the default set keeps it
    skip_from = 5000 if args.coeff == "all" or "xi_star" not in coeffs else None
    try:
        config = PowerStudyConfig(
            presets=presets,
            sizes=_parse_sizes(args.n),
            replicates=args.reps,
            alpha=alpha,
            seed=args.seed,
            coefficients=coeffs,
            delta0=args.delta0,
            truncation=args.truncation,
            bank_draws=args.draws,
            bank_dir=args.bank_dir,
            workers=args.workers,
            skip_xi_star_from=skip_from,
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    table = run_power_study(config)
    if args.format == "json":
        print(table.to_json())
    else:
        sys.stdout.write(table.to_tsv(header=not args.no_header))
    prefix = Path(args.output)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    prefix.with_suffix(".tsv").write_text(table.to_tsv())
    prefix.with_suffix(".json").write_text(table.to_json())
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    sizes = _parse_sizes(args.n)
    if any(n < 2 for n in sizes):
        raise _UsageError(f"sizes must be at least 2, got {sizes}")
    coeffs = _parse_coeffs(args.coeff)
    if args.reps < 1:
        raise _UsageError(f"reps must be at least 1, got {args.reps}")

    def evaluate(name: str, sample: PairedSample) -> float:
        if name in ("xi", "xi_star", "d"):
            artifacts = compute_rank_artifacts(sample, seed=0)
            if name == "xi":
                return xi_n(artifacts).value
            if name == "xi_star":
                return xi_star_n(artifacts).value
            return d_n_fast(artifacts).value
        if name == "r":
            return r_n(sample).value
        return taustar_n(sample).value

    rng = np.random.default_rng(np.random.SeedSequence([args.seed, 0xBE7C]))
    warm = PairedSample(rng.random(64), rng.random(64))
    for name in coeffs:
        evaluate(name, warm)

    rows = []
    for name in coeffs:
        for n in sizes:
            datasets = [
                PairedSample(rng.random(n), rng.random(n)) for _ in range(args.reps)
            ]
            start = time.perf_counter()
            for sample in datasets:
                evaluate(name, sample)
            total = time.perf_counter() - start
            rows.append(
                {
                    "coefficient": name,
                    "n": n,
                    "reps": args.reps,
                    "total_seconds": round(total, 6),
                    "seconds_per_rep": round(total / args.reps, 9),
                }
            )
    _emit(rows, args.format, args.no_header)
    return 0


def _cmd_null_bank(args: argparse.Namespace) -> int:
    kind = args.coeff.strip().lower()
    if kind in ("d", "r", "d_or_r"):
        kind = "d_or_r"
    elif kind != "tau_star":
        raise _UsageError(
            f"bank kind must be d, r, d_or_r, or tau_star, got {args.coeff!r}"
        )
    bank_dir = args.bank_dir or "."
    model = weighted_bank(
        kind,
        truncation=args.truncation,
        draws=args.draws,
        seed=args.seed,
        bank_dir=None,
    )
    path = Path(bank_dir)
    path.mkdir(parents=True, exist_ok=True)
    target = path / (
        f"wchisq_{kind}_V{args.truncation}_B{args.draws}_seed{args.seed}.bank"
    )
    save_bank(model, target)
    rows = [
        {"alpha": a, "critical_value": model.quantile(1.0 - a)}
        for a in (0.10, 0.05, 0.01)
    ]
    _emit(rows, args.format, args.no_header)
    print(f"wrote {target}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankdep",
        description="Rank correlation coefficients and independence tests.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=0, help="master seed")
        p.add_argument(
            "--format", choices=("tsv", "json"), default="tsv", help="output format"
        )
        p.add_argument(
            "--no-header",
            action="store_true",
            help="input CSV has no header row; also omits the TSV output header",
        )

    p_corr = sub.add_parser("corr", help="compute coefficients on CSV data")
    p_corr.add_argument("--input", required=True, help="two-column CSV file")
    p_corr.add_argument(
        "--coeff", default="all", help="comma list of coefficients (default all)"
    )
    add_common(p_corr)
    p_corr.set_defaults(func=_cmd_corr)

    p_test = sub.add_parser("test", help="run one independence test")
    p_test.add_argument("--input", required=True, help="two-column CSV file")
    p_test.add_argument("--coeff", required=True, help="coefficient to test")
    p_test.add_argument("--alpha", type=float, default=0.05, help="test level")
    p_test.add_argument(
        "--permutation",
        type=int,
        metavar="P",
        default=None,
        help="force a permutation test with P permutations",
    )
    p_test.add_argument("--bank-dir", default=None, help="null bank cache directory")
    p_test.add_argument(
        "--truncation", type=int, default=100, help="eigenvalue truncation V"
    )
    p_test.add_argument(
        "--draws", type=int, default=_CLI_BANK_DRAWS, help="bank size B"
    )
    add_common(p_test)
    p_test.set_defaults(func=_cmd_test)

    p_power = sub.add_parser("power", help="power/size study over presets")
    p_power.add_argument(
        "--preset", default="all", help="comma list of presets a-f (default all)"
    )
    p_power.add_argument("--n", default="500,1000", help="comma list of sample sizes")
    p_power.add_argument("--reps", type=int, default=500, help="replicates per cell")
    p_power.add_argument("--alpha", type=float, default=0.05, help="test level")
    p_power.add_argument(
        "--coeff", default="all", help="comma list of coefficients (default all)"
    )
    p_power.add_argument(
        "--delta0",
        type=float,
        default=None,
        help="override the preset scale; 0 gives a size study",
    )
    p_power.add_argument("--workers", type=int, default=1, help="worker processes")
    p_power.add_argument("--bank-dir", default=None, help="null bank cache directory")
    p_power.add_argument(
        "--truncation", type=int, default=100, help="eigenvalue truncation V"
    )
    p_power.add_argument(
        "--draws", type=int, default=_CLI_BANK_DRAWS, help="bank size B"
    )
    p_power.add_argument(
        "--output",
        default="power_results",
        help="output path prefix for the TSV and JSON tables",
    )
    add_common(p_power)
    p_power.set_defaults(func=_cmd_power)

    p_bench = sub.add_parser("bench", help="time the estimators")
    p_bench.add_argument("--n", default="500,1000", help="comma list of sample sizes")
    p_bench.add_argument("--coeff", default="all", help="comma list of coefficients")
    p_bench.add_argument("--reps", type=int, default=20, help="datasets per size")
    add_common(p_bench)
    p_bench.set_defaults(func=_cmd_bench)

    p_bank = sub.add_parser("null-bank", help="build and cache a null bank")
    p_bank.add_argument(
        "--coeff", required=True, help="bank kind: d, r, d_or_r, or tau_star"
    )
    p_bank.add_argument(
        "--truncation", type=int, default=100, help="eigenvalue truncation V"
    )
    p_bank.add_argument("--draws", type=int, default=10**6, help="bank size B")
    p_bank.add_argument("--bank-dir", default=".", help="output directory")
    add_common(p_bank)
    p_bank.set_defaults(func=_cmd_null_bank)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _DATA_ERRORS as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
