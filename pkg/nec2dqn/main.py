import argparse
import logging
import sys
from typing import Optional, Sequence

from .cli import compare as compare_cli
from .cli import run as run_cli
from .cli import sweep as sweep_cli
from .core.exceptions import ConfigError, Nec2DqnError
from .core.logging import configure_logging

logger = logging.getLogger(__name__)

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nec2dqn", description="NEC2DQN experiments at desk scale")
    parser.add_argument("--log-level", help="overrides NEC2DQN_LOG_LEVEL")
    subparsers = parser.add_subparsers(dest="command", required=True)

    # Include commands
    run_cli.register(subparsers)
    compare_cli.register(subparsers)
    sweep_cli.register(subparsers)
    return parser

def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except ConfigError as e:
        print(f"usage error: {e.field}: {e.message}", file=sys.stderr)
        return 2
    except Nec2DqnError as e:
        logger.error(f"{type(e).__name__}: {str(e)}")
        return 1
