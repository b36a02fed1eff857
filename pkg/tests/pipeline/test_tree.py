import numpy as np
import pytest

from genext.core import Grid
from genext.pipeline import (
    Branch,
    ExtensionConfig,
    branch_operator,
    expand_tree,
    extend_stage,
    first_generation,
    gennext_si_residual,
    inverse_weight,
    root_node,
)


@pytest.fixture
def config() -> ExtensionConfig:
    return ExtensionConfig(family="harmonic_oscillator", eigenindex=1)


@pytest.fixture
def regular_grid() -> Grid:
    return Grid(a=0.5, b=6, n=2001)


def test_root_is_the_base_family(config, line_grid):
    root = root_node(config, line_grid)
    assert root.stage == 0
    assert root.path == ""
    assert root.branch is None
    assert root.params.values == (1.0,)
    assert np.allclose(root.g.values, np.exp(-(line_grid.x**2)))
    assert not root.v_tilde_plus.values.any()
    assert not root.has_poles


def test_root_of_half_line_family_is_clamped(half_line_grid):
    root = root_node(ExtensionConfig(family="radial_oscillator"), half_line_grid)
    assert root.grid.a > 0
    assert root.grid.n == half_line_grid.n


def test_first_generation(config, line_grid):
    node = first_generation(config, line_grid)
    assert node.stage == 1
    assert node.path == "L1"
    assert node.branch is Branch.L1
    assert node.params.values == (1.0, 2.0)
    assert node.K == 2.0
    assert node.parent is not None and node.parent.stage == 0
    assert node.has_poles
    assert node.pole_positions() == [pytest.approx(0.0, abs=line_grid.h)]


def test_first_generation_on_the_other_branch(config, line_grid):
    node = first_generation(config.model_copy(update={"branch": Branch.L2}), line_grid)
    assert node.path == "L2"
    assert node.branch is Branch.L2
    assert node.K == pytest.approx(2.0, abs=1e-3)


def test_branch_operator(config, line_grid):
    node = first_generation(config, line_grid)
    weight, potential = branch_operator(node, Branch.L1)
    assert weight is node.g
    assert potential is node.v_tilde_plus
    weight, potential = branch_operator(node, Branch.L2)
    assert np.allclose(weight.values * node.g.values, 1.0)
    assert potential is node.v_tilde_minus
    assert np.allclose(inverse_weight(node.g).derivative, -node.g.derivative / node.g.values**2)


def test_extend_stage_keeps_the_other_branch_when_one_fails():
    config = ExtensionConfig(family="poschl_teller", eigenindex=3)
    root = root_node(config, Grid(a=-8, b=8, n=801))
    child_l1, child_l2 = extend_stage(root, config)
    assert child_l1 is None
    assert child_l2 is not None
    assert child_l2.path == "L2"


def test_second_stage_has_four_partners(config, regular_grid):
    levels = expand_tree(config, regular_grid, stages=2)
    assert [len(level) for level in levels] == [1, 2, 4]
    leaves = levels[-1]
    assert sorted(leaf.path for leaf in leaves) == ["L1/L1", "L1/L2", "L2/L1", "L2/L2"]
    for leaf in leaves:
        assert leaf.stage == 2
        assert len(leaf.params) == 4
        assert leaf.params.stage == 2
        report, constant = gennext_si_residual(leaf.F, leaf.g, leaf.lam, leaf.mu, window=(0.5, 3.0))
        assert np.isfinite(report.max_abs)
        assert np.isfinite(constant)


def test_nodeless_seed_is_inert_at_every_stage(config, line_grid):
    levels = expand_tree(config.model_copy(update={"eigenindex": 0}), line_grid, stages=2)
    for node in (node for level in levels[1:] for node in level):
        assert node.K == pytest.approx(0.0, abs=1e-8)
        assert node.v_tilde_plus.max_abs() <= 1e-5
        assert node.v_tilde_minus.max_abs() <= 1e-5


def test_worker_pool_gives_the_same_tree(config, regular_grid):
    sequential = expand_tree(config, regular_grid, stages=2)
    pooled = expand_tree(config, regular_grid, stages=2, workers=2)
    assert [node.path for node in pooled[-1]] == [node.path for node in sequential[-1]]
    assert [node.K for node in pooled[-1]] == [node.K for node in sequential[-1]]


def test_no_stage_is_the_root_alone(config, line_grid):
    levels = expand_tree(config, line_grid, stages=0)
    assert len(levels) == 1
    with pytest.raises(ValueError):
        expand_tree(config, line_grid, stages=-1)


def test_node_serialization(config, line_grid):
    node = first_generation(config, line_grid)
    record = node.to_record()
    assert record["path"] == "L1"
    assert record["params"] == [1.0, 2.0]
    assert record["K"] == 2.0
    assert len(record["poles"]) == 1
    table = node.to_table()
    assert table.columns.tolist() == ["x", "F", "g", "v_tilde_plus", "v_tilde_minus", "pole", "tail"]
    assert len(table) == line_grid.n
