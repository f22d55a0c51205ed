"""Main entry point for the feeder co-simulation pipeline."""

import logging
import sys

from src.cli import PipelineCLI
from src.utils.error_recovery import ErrorRecoveryContext


def configure_logging(level: str = "WARNING", verbose: bool = False) -> None:
    """Configure the root logger once for the whole process."""
    if verbose and logging.getLevelName(level) > logging.INFO:
        level = "INFO"
    logging.basicConfig(
        level=getattr(logging, level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def main(argv=None) -> int:
    """Parse the command line, configure logging and run the subcommand."""
    cli = PipelineCLI()
    args = cli.parse(argv)
    configure_logging(args.log_level, args.verbose)
    # Toolkit errors are handled inside execute(); anything else exits with 1
    with ErrorRecoveryContext(args.command, f"running {args.command}", reraise=False) as recovery:
        return cli.execute(args)
    print(recovery.get_user_message(), file=sys.stderr)
    return recovery.exit_code


if __name__ == "__main__":
    sys.exit(main())
