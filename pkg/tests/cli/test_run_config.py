from pathlib import Path

import pytest
from pytest_cases import parametrize_with_cases

from genext.cli import Command, RunConfig, defaults_text, load_config, parse_config, serialize_config
from genext.core.errors import ConfigError
from genext.deformation import Seed, Sign
from genext.pipeline import Branch


def test_minimal_document_gives_defaults():
    config = parse_config('command = "verify"\n')
    assert config == RunConfig()
    assert config.family == "harmonic_oscillator"
    assert config.lam == 1.0
    assert config.grid.n == 2001
    assert config.tolerances.residual == 1e-2


def test_lambda_is_written_as_lambda():
    config = parse_config("lambda = 0.5\nalpha = 1.5\n")
    assert config.lam == 0.5
    assert config.alpha == 1.5


class InvalidConfigCases:
    """Generate invalid configuration documents.

    Each case returns:
    - the document
    - a message expected among the errors
    """

    def case_too_few_points(self):
        return "[grid]\nn = 2\n", "grid.n must be ≥ 3"

    def case_zero_step(self):
        return "alpha = 0.0\n", "μ ≠ λ"

    def case_unknown_family(self):
        return 'family = "square_well"\n', "square_well"

    def case_unknown_key(self):
        return "colour = 1\n", "colour"

    def case_reversed_grid(self):
        return "[grid]\na = 2.0\nb = 1.0\n", "grid.b must exceed grid.a"


@parametrize_with_cases("document, message", cases=InvalidConfigCases)
def test_invalid_configs_are_rejected(document, message):
    with pytest.raises(ConfigError) as error:
        parse_config(document)
    assert any(message in entry for entry in error.value.errors)


def test_every_error_is_reported():
    with pytest.raises(ConfigError) as error:
        parse_config("alpha = 0.0\neigenindex = -1\n[grid]\nn = 2\n")
    assert len(error.value.errors) == 3


def test_syntax_error_reports_its_line():
    with pytest.raises(ConfigError) as error:
        parse_config('family = "harmonic_oscillator"\nalpha = = 1\n')
    assert len(error.value.errors) == 1
    assert "syntax error" in error.value.errors[0]
    assert "line 2" in error.value.errors[0]


def test_serialized_config_reads_back_equal():
    config = RunConfig(
        command=Command.EXTEND,
        family="radial_oscillator",
        family_params=(2.0, 0.0),
        lam=0.5,
        alpha=1.5,
        stages=2,
        branch=Branch.L2,
        analytic=False,
        seed=Seed(x0=2.0, u0=1.0, du0=0.5),
        sign=Sign.PLUS,
        pole_window=0.05,
        output_dir=Path("elsewhere"),
    )
    assert parse_config(serialize_config(config)) == config


def test_defaults_text_reads_back_as_defaults():
    text = defaults_text()
    assert "lambda = 1.0" in text
    assert "[grid]" in text
    assert parse_config(text) == RunConfig()


def test_load_config(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text('command = "factorize"\n[grid]\nn = 501\n', encoding="utf-8")
    config = load_config(path)
    assert config.command is Command.FACTORIZE
    assert config.grid.n == 501
