"""Execute a run configuration and write its report.

Exit statuses: 0 success, 1 invalid configuration or I/O error, 2 some gated residual exceeds its
tolerance, 3 solver failure.
"""

import argparse
import logging
from collections.abc import Callable
from pathlib import Path

import numpy as np
import pandas as pd

from genext.analysis import (
    MatchMode,
    extension_isospectrality,
    isospectral_compare,
    node_isospectrality,
    singularity_scan,
)
from genext.catalog import (
    ParameterPoint,
    SuperpotentialFamily,
    available_families,
    clamp_grid,
    describe_catalog,
    lookup_family,
    sample_weight,
)
from genext.cli.config import Command, RunConfig, defaults_text, load_config
from genext.cli.reports import RunReport, write_report
from genext.core.calculus import interpolate, rescale
from genext.core.errors import ConfigError, RouteMismatchError, SolverError
from genext.core.grid import Grid, GridFunction
from genext.deformation import (
    DeformationProblem,
    Seed,
    Sign,
    chi_residual,
    route_equivalence,
    scaled_superpotential,
    solve_chi,
)
from genext.operators import (
    base_shape_invariance_residual,
    discrete_partner_potentials,
    partner_potentials,
    similarity_residual,
)
from genext.pipeline import (
    Branch,
    ExtensionConfig,
    ExtensionNode,
    constraint_residual_F,
    expand_tree,
    first_generation,
    gennext_si_residual,
    qhj_residual,
    root_node,
)
from genext.spectral import eigenfunction_logderivative, solve_schrodinger, solve_weighted

logger = logging.getLogger(__name__)

SUCCESS = 0
INVALID = 1
GATE_FAILED = 2
SOLVER_FAILED = 3


def _family(config: RunConfig) -> tuple[SuperpotentialFamily, ParameterPoint, Grid]:
    family = lookup_family(config.family)
    grid = clamp_grid(family, Grid(a=config.grid.a, b=config.grid.b, n=config.grid.n))
    return family, ParameterPoint(values=family.parameters(config.family_params)), grid


def _extension(config: RunConfig) -> ExtensionConfig:
    return ExtensionConfig(
        family=config.family,
        family_params=config.family_params,
        lam=config.lam,
        alpha=config.alpha,
        eigenindex=config.eigenindex,
        branch=config.branch,
        analytic=config.analytic,
        richardson=config.solver.richardson,
        tail_floor=config.tail_floor,
    )


def _chain_extension(config: RunConfig) -> ExtensionConfig:
    return _extension(config).model_copy(update={"branch": Branch.L1})


def _is_analytic(config: RunConfig, family: SuperpotentialFamily) -> bool:
    return config.analytic and family.has_closed_form_eigenfunctions


def _xi_window(config: RunConfig) -> tuple[float, float]:
    ends = sorted((config.alpha * config.window.lo, config.alpha * config.window.hi))
    return ends[0], ends[1]


def _node_stem(prefix: str, node: ExtensionNode) -> str:
    return f"{prefix}_{node.path.replace('/', '_') or 'root'}"


def _partner_isospectrality(config: RunConfig, report: RunReport, family: SuperpotentialFamily, grid: Grid) -> None:
    """Gate the levels of -d² + V₋ against those of -d² + V₊ without its lowest one."""
    bundle = partner_potentials(family, ParameterPoint(values=family.parameters(config.family_params)), grid)
    k = config.solver.k_levels
    plus = solve_schrodinger(bundle.v_plus, k + 1, want_vectors=False, richardson=config.solver.richardson)
    minus = solve_schrodinger(bundle.v_minus, k, want_vectors=False, richardson=config.solver.richardson)
    match = isospectral_compare(
        plus, minus, mode=MatchMode.DROP_LOWEST_A, tol=config.tolerances.spectral, allow_shift=False
    )
    report.results["spectrum_plus"] = plus.to_record()
    report.results["spectrum_minus"] = minus.to_record()
    report.results["partner_isospectrality"] = match.to_record()
    report.tables["spectrum_plus"] = plus.to_table()
    report.tables["spectrum_minus"] = minus.to_table()
    gap = match.max_gap if len(match.pairs) == k else float("inf")
    report.gate("partner_isospectrality", gap, config.tolerances.spectral)


def run_catalog(config: RunConfig, report: RunReport) -> None:
    """Describe every registered family."""
    report.results["families"] = describe_catalog([lookup_family(name) for name in available_families()])


def run_factorize(config: RunConfig, report: RunReport) -> None:
    """Sample V± and gate the base shape invariance residual."""
    family, point, grid = _family(config)
    bundle = partner_potentials(family, point, grid)
    residual, constant = base_shape_invariance_residual(family, point, grid, margin=config.margin)
    report.gate_residual("base_shape_invariance", residual, config.tolerances.residual)
    report.results["base_shape_invariance_constant"] = constant
    report.tables["factorization"] = pd.DataFrame(
        {
            "x": grid.x,
            "v_plus": bundle.v_plus.values,
            "v_minus": bundle.v_minus.values,
            "f": bundle.f.values,
            "g": bundle.g.values,
        }
    )


def run_spectrum(config: RunConfig, report: RunReport) -> None:
    """Solve both partners and gate their isospectrality."""
    family, _, grid = _family(config)
    _partner_isospectrality(config, report, family, grid)


def _observe_node(config: RunConfig, node: ExtensionNode, analytic: bool) -> dict:
    record = node.to_record()
    window = None if analytic and node.stage == 1 and node.branch is Branch.L1 else config.window.bounds()
    try:
        residual, constant = gennext_si_residual(
            node.F, node.g, node.lam, node.mu, margin=config.margin, pole_window=config.pole_window, window=window
        )
        record["gennext_shape_invariance"] = {**residual.to_record(), "constant": constant}
    except ValueError as error:
        logger.warning("No gen-next residual for node '%s': %s", node.path, error)
        record["gennext_shape_invariance"] = None
    record["singularities"] = singularity_scan(node, pole_window=config.pole_window).to_record()
    try:
        record["isospectrality"] = node_isospectrality(
            node, k_levels=config.solver.k_levels, tol=config.tolerances.spectral
        ).to_record()
    except (SolverError, ValueError) as error:
        logger.warning("No isospectrality check for node '%s': %s", node.path, error)
        record["isospectrality"] = None
    try:
        record["base_isospectrality"] = extension_isospectrality(
            node, k_levels=config.solver.k_levels, tol=config.tolerances.spectral
        ).to_record()
    except (SolverError, ValueError) as error:
        logger.warning("No comparison with the base family for node '%s': %s", node.path, error)
        record["base_isospectrality"] = None
    return record


def _tree(config: RunConfig) -> tuple[list[list[ExtensionNode]], bool]:
    family, _, grid = _family(config)
    levels = expand_tree(_extension(config), grid, config.stages, workers=config.workers)
    return levels, _is_analytic(config, family)


def run_extend(config: RunConfig, report: RunReport) -> None:
    """Expand the tree and record every leaf, without gating."""
    levels, analytic = _tree(config)
    leaves = levels[-1]
    report.results["nodes"] = [_observe_node(config, node, analytic) for node in leaves]
    for node in leaves:
        report.tables[_node_stem("node", node)] = node.to_table()


def run_scan(config: RunConfig, report: RunReport) -> None:
    """Scan every extended node for poles, without gating."""
    levels, _ = _tree(config)
    scans = []
    for node in (node for level in levels[1:] for node in level):
        scan = singularity_scan(node, pole_window=config.pole_window)
        scans.append({"path": node.path, **scan.to_record()})
        report.tables[_node_stem("poles", node)] = scan.to_table()
    report.results["scans"] = scans


def _problem(config: RunConfig, node: ExtensionNode, grid: Grid, seed: Seed, sign: Sign) -> DeformationProblem:
    family, point, _ = _family(config)
    return DeformationProblem(
        superpotential=scaled_superpotential(family, point, config.alpha, grid),
        K=config.alpha**2 * node.K,
        sign=sign,
        seed=seed,
    )


def run_deform(config: RunConfig, report: RunReport) -> None:
    """Integrate the deformation constraint from the configured seed and gate its residual."""
    _, _, grid = _family(config)
    node = first_generation(_chain_extension(config), grid)
    problem = _problem(config, node, node.grid, config.seed, config.sign)
    chi = solve_chi(problem)
    window = config.window.bounds()
    residual = chi_residual(chi, problem, margin=config.margin, pole_window=config.pole_window, window=window)
    report.gate_residual("chi_residual", residual, config.tolerances.residual)
    difference, scale = route_equivalence(
        chi, node.F_bar, config.alpha, margin=config.margin, pole_window=config.pole_window, window=window
    )
    report.results["route_difference"] = {**difference.to_record(), "scale": scale}
    report.tables["chi"] = pd.DataFrame(
        {
            "x": chi.x,
            "w": problem.superpotential.values,
            "chi": chi.values,
            "pole": chi.pole_mask.astype(int),
        }
    )


def _construction_seed(config: RunConfig, node: ExtensionNode) -> Seed:
    """The seed whose χ is the one of the construction, u0 = 1 and du0 = α F̄(α x0)."""
    expected = rescale(node.F_bar, config.alpha, node.grid)
    values, valid = interpolate(expected, np.array([config.seed.x0]))
    if not valid[0]:
        raise RouteMismatchError(f"seed.x0={config.seed.x0} sits on a pole of the construction.")
    return Seed(x0=config.seed.x0, u0=1.0, du0=float(config.alpha * values[0]))


def _verify_similarity(config: RunConfig, report: RunReport) -> None:
    family, point, grid = _family(config)
    f, _ = sample_weight(family, point, grid)
    sample = GridFunction(grid=grid, values=np.sqrt(f.values))
    report.gate_residual("similarity", similarity_residual(f, sample, margin=config.margin), config.tolerances.residual)


def _verify_weighted_equivalence(config: RunConfig, report: RunReport, root: ExtensionNode) -> None:
    family, point, grid = _family(config)
    f, _ = sample_weight(family, point, grid)
    v_plus, _ = discrete_partner_potentials(f)
    zero = GridFunction(grid=grid, values=np.zeros(grid.n))
    k = config.solver.k_levels
    weighted = solve_weighted(root.g, zero, k, want_vectors=False).eigenvalues
    transformed = solve_schrodinger(v_plus, k, want_vectors=False).eigenvalues
    relative = float(np.max(np.abs(weighted - transformed) / np.maximum(1.0, np.abs(transformed))))
    report.gate("weighted_equivalence", relative, config.tolerances.spectral)


def _verify_qhj(config: RunConfig, report: RunReport, root: ExtensionNode) -> None:
    zero = GridFunction(grid=root.grid, values=np.zeros(root.grid.n))
    k = config.eigenindex
    spectrum = solve_weighted(root.g, zero, k + 1)
    omega_prime = eigenfunction_logderivative(spectrum.eigenfunctions[k])  # type: ignore[index]
    residual = qhj_residual(
        omega_prime,
        root.g,
        float(spectrum.eigenvalues[k]),
        margin=config.margin,
        pole_window=config.pole_window,
        window=config.window.bounds(),
    )
    report.gate_residual("qhj", residual, config.tolerances.residual)


def run_verify(config: RunConfig, report: RunReport) -> None:
    """Gate every identity of the construction on one configuration."""
    family, point, grid = _family(config)
    tolerance = config.tolerances.residual
    analytic = _is_analytic(config, family)
    window = None if analytic else config.window.bounds()
    xi_window = None if analytic else _xi_window(config)
    margin, pole_window = config.margin, config.pole_window

    _verify_similarity(config, report)
    base, constant = base_shape_invariance_residual(family, point, grid, margin=margin)
    report.gate_residual("base_shape_invariance", base, tolerance)
    report.results["base_shape_invariance_constant"] = constant

    extension = _chain_extension(config)
    root = root_node(extension, grid)
    node = first_generation(extension, grid, parent=root)
    report.results["node"] = node.to_record()
    constraint = constraint_residual_F(
        node.F_bar, node.g_bar, node.K, margin=margin, pole_window=pole_window, window=xi_window
    )
    report.gate_residual("constraint", constraint, tolerance)
    gennext, gennext_constant = gennext_si_residual(
        node.F,
        node.g,
        node.lam,
        node.mu,
        alpha=config.alpha,
        margin=margin,
        pole_window=pole_window,
        window=window,
    )
    report.gate_residual("gennext_shape_invariance", gennext, tolerance)
    report.results["gennext_shape_invariance_constant"] = gennext_constant
    _verify_qhj(config, report, root)

    problem = _problem(config, node, node.grid, _construction_seed(config, node), Sign.MINUS)
    chi = solve_chi(problem)
    route, scale = route_equivalence(
        chi,
        node.F_bar,
        config.alpha,
        problem=problem,
        K=node.K,
        margin=margin,
        pole_window=pole_window,
        window=config.window.bounds(),
    )
    report.gate_residual("route_equivalence", route, tolerance)
    report.results["route_scale"] = scale

    _partner_isospectrality(config, report, family, grid)
    _verify_weighted_equivalence(config, report, root)


_COMMANDS: dict[Command, Callable[[RunConfig, RunReport], None]] = {
    Command.CATALOG: run_catalog,
    Command.FACTORIZE: run_factorize,
    Command.SPECTRUM: run_spectrum,
    Command.EXTEND: run_extend,
    Command.DEFORM: run_deform,
    Command.VERIFY: run_verify,
    Command.SCAN: run_scan,
}


def _write(report: RunReport, output_dir: Path) -> bool:
    try:
        write_report(report, output_dir)
    except OSError as error:
        logger.error("Cannot write the report to %s: %s", output_dir, error)
        return False
    return True


def run(config: RunConfig) -> int:
    """Execute the command of a configuration and write `report.json` and its tables.

    Returns:
        the exit status
    """
    report = RunReport(command=config.command.value, config=config.model_dump(mode="json", by_alias=True))
    status = SUCCESS
    try:
        _COMMANDS[config.command](config, report)
    except SolverError as error:
        logger.error("Solver failure: %s", error)
        report.results["error"] = str(error)
        status = SOLVER_FAILED
    except ValueError as error:
        logger.error("Invalid run: %s", error)
        report.results["error"] = str(error)
        status = INVALID
    if not _write(report, config.output_dir):
        return INVALID
    if status == SUCCESS and report.failures:
        for gate in report.failures:
            logger.warning("Gate '%s' failed: %s > %s.", gate.name, gate.value, gate.tolerance)
        status = GATE_FAILED
    return status


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="genext", description="Build and check gen-next shape invariant extensions.")
    parser.add_argument("command", choices=[command.value for command in Command] + ["defaults"])
    parser.add_argument("--config", type=Path, help="TOML run configuration, defaults when missing")
    parser.add_argument("--output", type=Path, help="overrides output_dir")
    parser.add_argument("--verbose", action="store_true", help="log debug messages")
    return parser


def main(argv: list[str] | None = None) -> int:
    """Command-line entry point."""
    args = _parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    if args.command == "defaults":
        print(defaults_text(), end="")
        return SUCCESS

    try:
        config = load_config(args.config) if args.config else RunConfig()
    except OSError as error:
        logger.error("Cannot read %s: %s", args.config, error)
        return INVALID
    except ConfigError as error:
        for message in error.errors:
            logger.error("%s", message)
        return INVALID

    update: dict = {"command": Command(args.command)}
    if args.output is not None:
        update["output_dir"] = args.output
    return run(config.model_copy(update=update))
