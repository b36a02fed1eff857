from pathlib import Path

import pytest

from genext.catalog import SuperpotentialFamily, lookup_family
from genext.core import Grid


@pytest.fixture
def repository_root() -> Path:
    return Path(__file__).parent.parent


@pytest.fixture
def line_grid() -> Grid:
    return Grid(a=-6, b=6, n=2001)


@pytest.fixture
def half_line_grid() -> Grid:
    return Grid(a=0, b=6, n=2001)


@pytest.fixture
def oscillator() -> SuperpotentialFamily:
    return lookup_family("harmonic_oscillator")


@pytest.fixture
def radial_oscillator() -> SuperpotentialFamily:
    return lookup_family("radial_oscillator")
