import argparse
import logging

from ..core.presets import SWEEP_PRESETS
from ..db.repositories.configs import config_repository
from ..services.sweep_service import sweep_service
from .run import add_config_arguments

logger = logging.getLogger(__name__)

def handle_sweep(args: argparse.Namespace) -> int:
    preset = SWEEP_PRESETS[args.preset]
    capacities = [int(c) for c in args.capacities.split(",")] if args.capacities else preset["capacities"]
    base = config_repository.load(args.config, args.overrides, base=preset["base"])
    result = sweep_service.buffer_sweep(
        base,
        capacities,
        list(range(args.seeds)),
        name=args.name or args.preset,
        output_root=args.output_root
    )
    for row in result.snapshots:
        print(f"capacity {row.capacity} {row.phase} (step {row.step}): median {row.median:.2f}")
    print(f"snapshots: {result.snapshot_path}")
    return 0

def register(subparsers) -> None:
    parser = subparsers.add_parser("sweep", help="replay buffer capacity sweep")
    parser.add_argument("--preset", choices=sorted(SWEEP_PRESETS), default="fig45")
    parser.add_argument("--seeds", type=int, default=5, help="number of seeds, 0..n-1")
    parser.add_argument("--capacities", help="comma-separated buffer capacities (default: the preset's)")
    parser.add_argument("--name", help="experiment directory name under the output root")
    add_config_arguments(parser)
    parser.set_defaults(handler=handle_sweep)
