import argparse
import sys
from typing import List, Optional

from pydantic import ValidationError

from processing_logic import EXIT_INVALID_INPUT, run
from core.files.file_schemas import RunConfig


def print_progress(value: float, maximum: float, message: str) -> None:
    print(f"[{value:g}/{maximum:g}] {message}")


def face_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated face indices, got '{text}'")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--solver", choices=["newton", "calabi"])
    common.add_argument("--tol", type=float)
    common.add_argument("--max-iter", type=int, dest="max_iter")
    common.add_argument("--t-max", type=float, dest="t_max")
    common.add_argument("--integrator", choices=["euler", "rk4"])
    common.add_argument("--feasibility", choices=["enumerate", "flow", "skip"])
    common.add_argument("--out", help="output directory")
    common.add_argument("--seed", type=int)
    common.add_argument("--chains", type=int, dest="chain_count", help="number of random arc chains to add")

    parser = argparse.ArgumentParser(
        prog="packing",
        description="Generalized hyperbolic circle packings: validate, solve, compare and draw.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    validate = commands.add_parser("validate", parents=[common], help="check the mesh and the target's feasibility")
    validate.add_argument("problem")

    solve = commands.add_parser("solve", parents=[common], help="solve for the packing realizing the target")
    solve.add_argument("problem")
    solve.add_argument("--cross-check", action="store_true", dest="cross_check", default=None,
                       help="run both solvers and require agreement")

    compare = commands.add_parser("compare", parents=[common], help="solve two boundary data sets and compare")
    compare.add_argument("problem")
    compare.add_argument("boundary_star")

    layout = commands.add_parser("layout", parents=[common], help="draw solved faces in the Poincare disk")
    layout.add_argument("result")
    layout.add_argument("--faces", type=face_list, help="comma-separated face indices, e.g. 0,3")
    layout.add_argument("--stroke-width", type=float, dest="stroke_width")
    layout.add_argument("--dual-stroke-width", type=float, dest="dual_stroke_width")

    fixture = commands.add_parser("fixture", parents=[common], help="write a seeded random annulus or wheel problem")
    fixture.add_argument("--kind", choices=["annulus", "wheel"])
    fixture.add_argument("--ring-size", type=int, dest="ring_size", help="vertices per ring (spokes for a wheel)")
    fixture.add_argument("--rings", type=int, help="number of interior rings")
    fixture.add_argument("--star-scale", type=float, dest="star_scale",
                         help="factor applied to the boundary curvatures in boundary_star.json")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    # unset flags fall back to the environment defaults in RunConfig
    values = {name: value for name, value in vars(args).items() if value is not None}
    try:
        config = RunConfig(**values)
    except ValidationError as e:
        for err in e.errors():
            location = ".".join(str(part) for part in err["loc"]) or "arguments"
            print(f"❌ {location}: {err['msg']}")
        return EXIT_INVALID_INPUT
    return run(config, print_progress)


if __name__ == "__main__":
    sys.exit(main())
