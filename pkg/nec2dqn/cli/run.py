import argparse
import logging

from ..db.repositories.configs import config_repository
from ..services.run_service import run_service

logger = logging.getLogger(__name__)

def add_config_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override one config key (repeatable)"
    )
    parser.add_argument("--output-root", help="overrides NEC2DQN_OUTPUT_ROOT")

def handle_run(args: argparse.Namespace) -> int:
    config = config_repository.load(args.config, args.overrides)
    result = run_service.run(config, resume=args.resume, output_root=args.output_root)
    last = result.rows[-1]
    print(f"{result.run_dir}: step {last.step}, eval mean {last.eval_mean:.2f}")
    return 0

def register(subparsers) -> None:
    parser = subparsers.add_parser("run", help="train one agent with periodic greedy evaluation")
    add_config_arguments(parser)
    parser.add_argument("--resume", action="store_true", help="continue from the run's checkpoint if present")
    parser.set_defaults(handler=handle_run)
