import argparse
import logging

from ..core.presets import COMPARE_PRESETS
from ..db.repositories.configs import config_repository
from ..services.compare_service import compare_service
from .run import add_config_arguments

logger = logging.getLogger(__name__)

def handle_compare(args: argparse.Namespace) -> int:
    preset = COMPARE_PRESETS[args.preset]
    agents = args.agents.split(",") if args.agents else preset["agents"]
    threshold = args.threshold if args.threshold is not None else preset["threshold"]
    base = config_repository.load(args.config, args.overrides, base=preset["base"])
    configs = [
        config_repository.build({**base.model_dump(), "agent": agent, "label": f"{agent}-{base.env}"})
        for agent in agents
    ]
    result = compare_service.compare(
        configs,
        list(range(args.seeds)),
        threshold,
        name=args.name or args.preset,
        output_root=args.output_root
    )
    for row in result.summary:
        print(
            f"{row.label}: median steps to {threshold:g} = {row.median_steps:.0f} "
            f"(IQR {row.q1_steps:.0f}-{row.q3_steps:.0f}, reached {row.reached}/{row.seeds})"
        )
    print(f"summary: {result.summary_path}")
    return 0

def register(subparsers) -> None:
    parser = subparsers.add_parser("compare", help="run several agents over seeds and summarise learning speed")
    parser.add_argument("--preset", choices=sorted(COMPARE_PRESETS), default="fig3")
    parser.add_argument("--seeds", type=int, default=5, help="number of seeds, 0..n-1")
    parser.add_argument("--agents", help="comma-separated agent kinds (default: the preset's)")
    parser.add_argument("--threshold", type=float, help="eval score that counts as learned")
    parser.add_argument("--name", help="experiment directory name under the output root")
    add_config_arguments(parser)
    parser.set_defaults(handler=handle_compare)
