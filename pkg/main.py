import argparse
import logging
import sys
from typing import Literal

from atomspec import AtomSpecError, RunConfig, build_parser, run


class RunArguments(argparse.Namespace):
    command: Literal["check", "spectrum", "ideal", "verify", "triangular"]
    input: str | None
    format: str | None
    verbose: bool


def main():
    # Check Arguments
    parser = build_parser()
    args: RunArguments = parser.parse_args()
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    # Run command
    try:
        cfg = RunConfig.from_args(args)
    except AtomSpecError as e:
        logging.getLogger("atomspec").error("%s", e)
        sys.exit(e.exit_code)
    sys.exit(run(cfg))


if __name__ == "__main__":
    main()
