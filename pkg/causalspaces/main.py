import json
import logging
import sys
import time

from .core.errors import CausalError
from .core.logging_config import log_cli_command, setup_enhanced_logging
from .core.settings import settings
from .routes import build_parser

log = logging.getLogger("causal_cli")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 after --help
        return e.code if isinstance(e.code, int) else 2

    setup_enhanced_logging(logging.DEBUG if args.verbose or settings.DEBUG else None)
    command = " ".join(filter(None, [args.command, getattr(args, "action", None)]))
    started = time.monotonic()
    try:
        status = args.func(args)
    except CausalError as e:
        log.error(f"❌ {e}")
        if getattr(args, "json", False):
            print(json.dumps(e.to_dict(), indent=2))
        else:
            print(f"error: {e}", file=sys.stderr)
        status = e.exit_code
    except KeyboardInterrupt:
        log.warning("⏹️ interrupted")
        status = 130
    log_cli_command(command, status, (time.monotonic() - started) * 1000)
    return status


def run() -> None:
    sys.exit(main())
