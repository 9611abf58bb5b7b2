import argparse
from dataclasses import replace

from naraforge.stages.settings_stage import RunConfig, SettingsStage
from naraforge.tools.dp_reduction import DEFAULT_BIG_M


def test_defaults_validate(run_config, console):
    stage = SettingsStage(run_config)
    success, config, errors, warnings = stage.validate()
    assert success, errors
    assert config["M"] == str(DEFAULT_BIG_M)
    stage.print_report(console)
    assert "All validations passed" in console.file.getvalue()


def test_range_errors_are_collected(run_config):
    bad = replace(run_config, base_min=5, base_max=3, precision_bits=64, output_format="xml", M=0)
    success, _, errors, _ = SettingsStage(bad).validate()
    assert not success
    assert len(errors) == 4


def test_base_above_digit_alphabet(run_config):
    success, _, errors, _ = SettingsStage(replace(run_config, base_max=65)).validate()
    assert not success
    assert "base_max must be at most 64" in errors[0]


def test_too_many_workers_is_a_warning(run_config):
    success, _, _, warnings = SettingsStage(replace(run_config, parallel_workers=100_000)).validate()
    assert success
    assert warnings


def test_config_from_args_and_dict_round_trip(output_dir):
    args = argparse.Namespace(base_min=3, base_max=7, n_max=None, precision=512, big_m=10 ** 20,
                              ordering=True, format="csv", workers=2, output_dir=str(output_dir))
    config = RunConfig.from_args(args)
    assert config.n_max == 600
    assert config.step3_base == "rho"
    assert list(config.bases) == [3, 4, 5, 6, 7]
    assert RunConfig.from_dict(config.to_dict()) == config
