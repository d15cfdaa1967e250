"""Power-study sweeps: determinism, table rendering, config validation."""

import json
import math

import pytest

from rankdep import CellResult, PowerStudyConfig, ResultTable, run_power_study


def small_config(bank_dir, **overrides):
    base = dict(
        presets=("a",),
        sizes=(64,),
        replicates=40,
        coefficients=("xi", "d", "r", "tau_star"),
        seed=5,
        bank_draws=10**5,
        bank_dir=None if bank_dir is None else str(bank_dir),
    )
    base.update(overrides)
    return PowerStudyConfig(**base)


def statistical_content(table: ResultTable):
    return [
        (c.preset, c.n, c.coefficient, c.rejections, c.replicates, c.error, c.skipped)
        for c in table.cells
    ]


class TestDeterminism:
    def test_worker_count_does_not_change_the_results(self, bank_dir):
        serial = run_power_study(small_config(bank_dir, workers=1))
        pooled = run_power_study(small_config(bank_dir, workers=2))
        assert statistical_content(serial) == statistical_content(pooled)
        assert serial.digest == pooled.digest

    def test_repeat_runs_are_identical(self, bank_dir):
        a = run_power_study(small_config(bank_dir))
        b = run_power_study(small_config(bank_dir))
        assert statistical_content(a) == statistical_content(b)

    def test_digest_tracks_statistical_fields_only(self, bank_dir):
        base = small_config(bank_dir)
        assert base.digest() == small_config(bank_dir, workers=3).digest()
        assert base.digest() == small_config(None).digest()
        assert base.digest() != small_config(bank_dir, seed=6).digest()
        assert base.digest() != small_config(bank_dir, replicates=41).digest()


class TestSizeStudy:
    def test_zero_delta_rejects_near_the_nominal_level(self, bank_dir):
        config = small_config(
            bank_dir,
            sizes=(100,),
            replicates=300,
            coefficients=("xi", "d"),
            delta0=0.0,
            seed=3,
        )
        table = run_power_study(config)
        for coeff in config.coefficients:
            assert 0.01 <= table.rate("a", 100, coeff) <= 0.12


class TestSkipRule:
    def test_large_sizes_skip_the_smoothed_coefficient(self, bank_dir):
        config = small_config(
            bank_dir,
            replicates=5,
            coefficients=("xi", "xi_star"),
            skip_xi_star_from=50,
        )
        table = run_power_study(config)
        cell = table.cell("a", 64, "xi_star")
        assert cell.skipped and cell.replicates == 0 and cell.rejections == 0
        assert math.isnan(cell.rate)
        assert not table.cell("a", 64, "xi").skipped

    def test_disabling_the_skip_forces_evaluation(self, bank_dir):
        config = small_config(
            bank_dir,
            replicates=5,
            coefficients=("xi_star",),
            skip_xi_star_from=None,
            bank_reps=200,
        )
        table = run_power_study(config)
        cell = table.cell("a", 64, "xi_star")
        assert not cell.skipped
        assert cell.replicates == 5


@pytest.fixture(scope="module")
def table(bank_dir):
    return run_power_study(
        small_config(
            bank_dir,
            replicates=5,
            coefficients=("xi", "xi_star"),
            skip_xi_star_from=50,
        )
    )


class TestResultTable:
    def test_tsv_rendering(self, table):
        lines = table.to_tsv().splitlines()
        assert lines[0] == "preset\tn\txi\txi_star"
        rate = table.rate("a", 64, "xi")
        assert lines[1] == f"a\t64\t{rate:.3f}\tNA"
        assert table.to_tsv(header=False).splitlines() == [lines[1]]

    def test_json_rendering(self, table):
        doc = json.loads(table.to_json())
        assert doc["digest"] == table.digest
        assert doc["config"]["presets"] == ["a"]
        by_coeff = {c["coefficient"]: c for c in doc["cells"]}
        assert by_coeff["xi_star"]["skipped"] is True
        assert by_coeff["xi"]["replicates"] == 5
        assert doc["shared_seconds"][0]["preset"] == "a"

    def test_missing_cells_raise(self, table):
        with pytest.raises(KeyError):
            table.cell("b", 64, "xi")
        with pytest.raises(KeyError):
            table.cell("a", 64, "d")


class TestCellResult:
    def test_rate_is_a_plain_ratio(self):
        cell = CellResult("a", 64, "xi", rejections=3, replicates=40, seconds=0.0)
        assert cell.rate == pytest.approx(0.075)

    def test_zero_replicates_give_nan(self):
        cell = CellResult("a", 64, "xi", rejections=0, replicates=0, seconds=0.0)
        assert math.isnan(cell.rate)


class TestConfigValidation:
    @pytest.mark.parametrize(
        "overrides",
        [
            {"presets": ()},
            {"presets": ("z",)},
            {"sizes": ()},
            {"sizes": (4,)},
            {"replicates": 0},
            {"alpha": 0.0},
            {"alpha": 1.0},
            {"coefficients": ()},
            {"coefficients": ("pearson",)},
            {"workers": 0},
        ],
    )
    def test_bad_configs_are_rejected(self, overrides):
        base = dict(presets=("a",), sizes=(64,), replicates=10)
        base.update(overrides)
        with pytest.raises(ValueError):
            PowerStudyConfig(**base)

    def test_preset_names_are_normalized(self):
        config = PowerStudyConfig(presets=("A", "b"), sizes=(64,), replicates=10)
        assert config.presets == ("a", "b")
