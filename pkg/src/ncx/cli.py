"""Command-line front end: robustness, sweeps, facets, tables, oracles.

Angles are radians unless ``--deg`` is given.  Exit codes: 0 on success, 2 on
invalid input, 3 on solver failure.  CSV output uses a header row, LF line
endings and 9-significant-digit numbers, so identical flags produce identical
bytes; sweep rows come back in grid order even when evaluated in parallel.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .embedding import (
    EmbeddingStatus,
    NoiseMap,
    fragment_facets,
    min_noise_for_embedding,
)
from .errors import (
    InternalConsistencyError,
    InvalidNoiseError,
    NotParameterizableError,
    SolverStalledError,
    StructureError,
)
from .fragment import (
    apply_noise_to_effects,
    compute_inclusion_maps,
    fragment_from_json,
    validate_fragment,
)
from .scenarios import (
    MEASUREMENT_ROWS,
    PREPARATION_COLS,
    MesdParams,
    build_mesd,
    coherence_bound,
    data_table,
    p_threshold,
    r_deph_min_analytic,
    r_depol_min_analytic,
)

SWEEP_HEADER = "scenario,noise,eta,theta,alpha,p,r_min,status,analytic_r_min"

_SCENARIOS = ("original", "rotated", "depol-mg", "custom-json")
_NOISES = ("depolarizing", "dephasing")
_ORACLES = ("r-depol-min", "r-deph-min", "p-threshold", "coherence-bound")


class UsageError(ValueError):
    """Bad flag combination or bad input file (exit code 2)."""


def _fmt(x: float) -> str:
    x = float(x)
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return format(x, ".9g")


def _angle(value: float, deg: bool) -> float:
    return math.radians(value) if deg else value


def _scenario_params(args) -> MesdParams:
    scenario = args.scenario
    if scenario == "custom-json":
        raise UsageError("custom-json scenarios carry no theta/alpha/p parameters")
    if args.theta is None:
        raise UsageError(f"scenario {scenario!r} requires --theta")
    theta = _angle(args.theta, args.deg)
    alpha = 0.0
    p = 0.0
    if scenario == "original":
        if args.alpha is not None or args.p is not None:
            raise UsageError("scenario 'original' does not take --alpha or --p")
    elif scenario == "rotated":
        if args.alpha is None:
            raise UsageError("scenario 'rotated' requires --alpha")
        if args.p is not None:
            raise UsageError("scenario 'rotated' does not take --p")
        alpha = _angle(args.alpha, args.deg)
    elif scenario == "depol-mg":
        if args.p is None:
            raise UsageError("scenario 'depol-mg' requires --p")
        if args.alpha is not None:
            raise UsageError("scenario 'depol-mg' does not take --alpha")
        p = args.p
    try:
        return MesdParams(theta=theta, alpha=alpha, p=p, eta=_eta_of(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _eta_of(args) -> float:
    if getattr(args, "eta", None) is None:
        return math.pi / 2
    return _angle(args.eta, args.deg)


def _load_fragment(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read fragment file: {exc}") from exc
    try:
        fragment = fragment_from_json(text)
    except json.JSONDecodeError as exc:
        raise UsageError(
            f"malformed fragment JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    except StructureError as exc:
        raise UsageError(f"invalid fragment: {exc}") from exc
    report = validate_fragment(fragment, None)
    if not report.ok:
        listing = "; ".join(str(v) for v in report.violations)
        raise UsageError(f"fragment violates invariants: {listing}")
    return fragment


def _resolve_fragment(args):
    if args.scenario == "custom-json":
        if not args.fragment:
            raise UsageError("scenario 'custom-json' requires --fragment PATH")
        return _load_fragment(args.fragment)
    if args.fragment:
        raise UsageError("--fragment is only valid with --scenario custom-json")
    return build_mesd(_scenario_params(args))


def _resolve_noise(args, fragment) -> NoiseMap:
    if args.noise == "depolarizing":
        return NoiseMap.depolarizing(fragment)
    return NoiseMap.dephasing(_eta_of(args))


def _model_payload(model) -> dict:
    return {
        "mu": {label: [float(x) for x in mu] for label, mu in model.epistemic_states.items()},
        "xi": {label: [float(x) for x in xi] for label, xi in model.response_functions.items()},
    }


def cmd_robustness(args) -> int:
    fragment = _resolve_fragment(args)
    noise = _resolve_noise(args, fragment)
    solution = min_noise_for_embedding(fragment, noise)
    print(f"r_min={_fmt(solution.r_min)} status={solution.status.value}")
    if args.model:
        if solution.model is None:
            print("null")
        else:
            print(json.dumps(_model_payload(solution.model)))
    return 0


def _grid(spec: list[float] | None, fixed: float | None, default: float) -> list[float]:
    if spec is not None:
        lo, hi, step = spec
        if step <= 0:
            raise UsageError("grid step must be positive")
        if hi < lo:
            raise UsageError("grid upper bound is below its lower bound")
        count = int(math.floor((hi - lo) / step + 1e-9))
        return [lo + i * step for i in range(count + 1) if lo + i * step <= hi + step * 1e-9]
    if fixed is not None:
        return [fixed]
    return [default]


def _sweep_point(task: tuple) -> tuple[float, str]:
    scenario, noise_name, eta, theta, alpha, p = task
    fragment = build_mesd(MesdParams(theta=theta, alpha=alpha, p=p, eta=eta))
    noise = (
        NoiseMap.depolarizing(fragment)
        if noise_name == "depolarizing"
        else NoiseMap.dephasing(eta)
    )
    solution = min_noise_for_embedding(fragment, noise)
    return solution.r_min, solution.status.value


def _analytic_r_min(scenario, noise_name, eta, theta, alpha, p) -> float | None:
    if scenario not in ("original", "rotated", "depol-mg"):
        return None
    if alpha != 0.0 or p != 0.0:
        return None
    if noise_name == "depolarizing":
        return r_depol_min_analytic(theta)
    if abs(eta - math.pi / 2) <= 1e-12 and theta > 0.0:
        return r_deph_min_analytic(theta)
    return None


def cmd_sweep(args) -> int:
    scenario = args.scenario
    eta = _eta_of(args)
    deg = args.deg

    def angles(spec):
        return [_angle(v, deg) for v in spec] if spec is not None else None

    if scenario == "custom-json":
        raise UsageError("sweeps require a parametric scenario (original/rotated/depol-mg)")
    theta_grid = _grid(angles(args.theta_range), _angle(args.theta, deg) if args.theta is not None else None, None)
    if theta_grid == [None]:
        raise UsageError("sweeps require --theta or --theta-range")
    alpha_grid = [0.0]
    p_grid = [0.0]
    if scenario == "rotated":
        alpha_grid = _grid(angles(args.alpha_range), _angle(args.alpha, deg) if args.alpha is not None else None, None)
        if alpha_grid == [None]:
            raise UsageError("scenario 'rotated' requires --alpha or --alpha-range")
    elif args.alpha is not None or args.alpha_range is not None:
        raise UsageError(f"scenario {scenario!r} does not take alpha flags")
    if scenario == "depol-mg":
        p_grid = _grid(args.p_range, args.p, None)
        if p_grid == [None]:
            raise UsageError("scenario 'depol-mg' requires --p or --p-range")
    elif args.p is not None or args.p_range is not None:
        raise UsageError(f"scenario {scenario!r} does not take p flags")

    for theta in theta_grid:
        if not 0.0 <= theta <= math.pi / 2:
            raise UsageError(f"theta grid value {theta:.6g} outside [0, pi/2]")
    for p in p_grid:
        if not 0.0 <= p <= 1.0:
            raise UsageError(f"p grid value {p:.6g} outside [0, 1]")

    tasks = [
        (scenario, args.noise, eta, theta, alpha, p)
        for theta in theta_grid
        for alpha in alpha_grid
        for p in p_grid
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_point, tasks))
    else:
        results = [_sweep_point(task) for task in tasks]

    lines = [SWEEP_HEADER]
    for (scn, noise_name, eta_v, theta, alpha, p), (r_min, status) in zip(tasks, results):
        analytic = _analytic_r_min(scn, noise_name, eta_v, theta, alpha, p)
        lines.append(
            ",".join(
                [
                    scn,
                    noise_name,
                    _fmt(eta_v),
                    _fmt(theta),
                    _fmt(alpha),
                    _fmt(p),
                    _fmt(r_min),
                    status,
                    _fmt(analytic) if analytic is not None else "",
                ]
            )
        )
    try:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise UsageError(f"cannot write output file: {exc}") from exc
    return 0


def cmd_facets(args) -> int:
    fragment = _resolve_fragment(args)
    maps = compute_inclusion_maps(fragment, None)
    h_states, h_effects = fragment_facets(fragment, maps, None)
    facets = h_states if args.side == "states" else h_effects
    k = facets.generator_span_dim
    print(",".join(f"h{i}" for i in range(k)))
    for row in facets.normals:
        print(",".join(_fmt(x) for x in row))
    return 0


def cmd_embed(args) -> int:
    fragment = _resolve_fragment(args)
    noise = _resolve_noise(args, fragment)
    solution = min_noise_for_embedding(fragment, noise)
    payload = {
        "r_min": None if math.isnan(solution.r_min) else float(solution.r_min),
        "status": solution.status.value,
        "model": None if solution.model is None else _model_payload(solution.model),
    }
    print(json.dumps(payload))
    return 0


def cmd_table(args) -> int:
    fragment = _resolve_fragment(args)
    if args.r is not None:
        if args.noise is None:
            raise UsageError("--r requires --noise")
        noise = _resolve_noise(args, fragment)
        try:
            fragment = apply_noise_to_effects(fragment, noise, args.r)
        except (ValueError, InvalidNoiseError) as exc:
            raise UsageError(str(exc)) from exc
    elif args.noise is not None:
        raise UsageError("--noise requires --r for the table command")
    try:
        table = data_table(fragment)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc
    print("measurement," + ",".join(PREPARATION_COLS))
    for row_label, row in zip(MEASUREMENT_ROWS, table.probabilities):
        print(row_label + "," + ",".join(_fmt(x) for x in row))
    return 0


def cmd_oracle(args) -> int:
    name = args.name
    if name in ("r-depol-min", "r-deph-min", "p-threshold"):
        if args.theta is None:
            raise UsageError(f"oracle {name!r} requires --theta")
        theta = _angle(args.theta, args.deg)
        if not 0.0 <= theta <= math.pi / 2:
            raise UsageError(f"theta {theta:.6g} outside [0, pi/2]")
        fn = {
            "r-depol-min": r_depol_min_analytic,
            "r-deph-min": r_deph_min_analytic,
            "p-threshold": p_threshold,
        }[name]
        print(_fmt(fn(theta)))
    else:
        if args.p is None:
            raise UsageError("oracle 'coherence-bound' requires --p")
        try:
            print(_fmt(coherence_bound(args.p)))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    return 0


def cmd_model(args) -> int:
    fragment = _resolve_fragment(args)
    noise = _resolve_noise(args, fragment)
    solution = min_noise_for_embedding(fragment, noise)
    if solution.model is None:
        print("null")
    else:
        print(json.dumps(_model_payload(solution.model)))
    return 0


def _add_scenario_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scenario", choices=_SCENARIOS, default="original")
    parser.add_argument("--theta", type=float, default=None, help="state tilt angle")
    parser.add_argument("--alpha", type=float, default=None, help="discriminating-measurement rotation")
    parser.add_argument("--p", type=float, default=None, help="discriminating-measurement impurity")
    parser.add_argument("--eta", type=float, default=None, help="dephasing axis angle (default pi/2, the Z axis)")
    parser.add_argument("--fragment", default=None, help="fragment JSON path (custom-json scenario)")
    parser.add_argument("--deg", action="store_true", help="interpret angle flags in degrees")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncx",
        description="Simplex embeddability and noise robustness of GPT fragments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_rob = sub.add_parser("robustness", help="minimal noise weight for embeddability")
    _add_scenario_flags(p_rob)
    p_rob.add_argument("--noise", choices=_NOISES, required=True)
    p_rob.add_argument("--model", action="store_true", help="also print the extracted model JSON")
    p_rob.set_defaults(func=cmd_robustness)

    p_sweep = sub.add_parser("sweep", help="parameter sweep to CSV")
    _add_scenario_flags(p_sweep)
    p_sweep.add_argument("--noise", choices=_NOISES, required=True)
    p_sweep.add_argument("--theta-range", nargs=3, type=float, metavar=("MIN", "MAX", "STEP"))
    p_sweep.add_argument("--alpha-range", nargs=3, type=float, metavar=("MIN", "MAX", "STEP"))
    p_sweep.add_argument("--p-range", nargs=3, type=float, metavar=("MIN", "MAX", "STEP"))
    p_sweep.add_argument("--output", required=True, help="CSV output path")
    p_sweep.add_argument("--jobs", type=int, default=1, help="parallel workers (grid order is kept)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_facets = sub.add_parser("facets", help="facet rows of the state or effect cone")
    _add_scenario_flags(p_facets)
    p_facets.add_argument("--side", choices=("states", "effects"), required=True)
    p_facets.set_defaults(func=cmd_facets)

    p_embed = sub.add_parser("embed", help="full embedding result as JSON")
    _add_scenario_flags(p_embed)
    p_embed.add_argument("--noise", choices=_NOISES, required=True)
    p_embed.set_defaults(func=cmd_embed)

    p_table = sub.add_parser("table", help="outcome-0 data table as CSV")
    _add_scenario_flags(p_table)
    p_table.add_argument("--noise", choices=_NOISES, default=None)
    p_table.add_argument("--r", type=float, default=None, help="noise weight applied to the effects")
    p_table.set_defaults(func=cmd_table)

    p_oracle = sub.add_parser("oracle", help="closed-form values")
    p_oracle.add_argument("name", choices=_ORACLES)
    p_oracle.add_argument("--theta", type=float, default=None)
    p_oracle.add_argument("--p", type=float, default=None)
    p_oracle.add_argument("--deg", action="store_true")
    p_oracle.set_defaults(func=cmd_oracle)

    p_model = sub.add_parser("model", help="noncontextual model at the minimal noise weight")
    _add_scenario_flags(p_model)
    p_model.add_argument("--noise", choices=_NOISES, required=True)
    p_model.set_defaults(func=cmd_model)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (StructureError, NotParameterizableError, InvalidNoiseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SolverStalledError, InternalConsistencyError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
