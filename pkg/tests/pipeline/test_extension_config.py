import pytest
from pydantic import ValidationError

from genext.pipeline import Branch, ExtensionConfig


def test_defaults():
    config = ExtensionConfig(family="harmonic_oscillator")
    assert config.eigenindex == 1
    assert config.lam == 1.0
    assert config.mu == 2.0
    assert config.branch is Branch.L1
    assert config.analytic
    assert config.richardson


def test_alpha_must_not_vanish():
    with pytest.raises(ValidationError, match="μ ≠ λ"):
        ExtensionConfig(family="harmonic_oscillator", alpha=0)


def test_family_must_be_registered():
    with pytest.raises(ValidationError, match="Available families"):
        ExtensionConfig(family="square_well")


def test_eigenindex_is_not_negative():
    with pytest.raises(ValidationError):
        ExtensionConfig(family="harmonic_oscillator", eigenindex=-1)
