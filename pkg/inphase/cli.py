# inphase/cli.py
import sys
import argparse
import io
from pathlib import Path
from typing import Callable, Dict, Optional

# Ensure inphase package is importable if running script directly
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import logging
import pyperclip
from pydantic import ValidationError

from inphase.config_system import NumericsConfig, load_config
from inphase.exceptions import InphaseError
from inphase.harness import CurveSpec, emit_curve, qfunc_grid, rmse_table, write_rmse_rows
from inphase.utils import USAGE_DOC, parse_methods, parse_params
from inphase.verify import verify_suite

# Setup logger for CLI - will be configured in main()
logger = logging.getLogger("inphase.cli")
DEBUG_LOG_FILENAME = "inphase_debug.log"


def configure_logging(debug: bool) -> None:
    """WARNING+ to stderr by default; --debug adds DEBUG to stderr and a log file."""
    stderr_handler = logging.StreamHandler(sys.stderr)
    stderr_handler.setLevel(logging.DEBUG if debug else logging.WARNING)
    stderr_handler.setFormatter(logging.Formatter('%(levelname)s:%(name)s:%(message)s'))

    root_logger = logging.getLogger()
    if root_logger.hasHandlers():
        root_logger.handlers.clear()
    root_logger.addHandler(stderr_handler)
    root_logger.setLevel(logging.DEBUG if debug else logging.INFO)

    if debug:
        try:
            file_handler = logging.FileHandler(DEBUG_LOG_FILENAME, mode='w')
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s'))
            root_logger.addHandler(file_handler)
            logger.debug(f"Also writing DEBUG logs to {DEBUG_LOG_FILENAME}")
        except Exception as e:
            logger.error(f"Failed to configure debug log file handler: {e}")


def build_config(args) -> NumericsConfig:
    overrides = {
        "cutoff": args.cutoff,
        "workers": args.workers,
        "endpoints": getattr(args, "endpoints", None),
        "table_range": getattr(args, "table_range", None),
    }
    config_path = Path(args.config) if args.config else None
    return load_config(config_path, overrides)


def deliver(content: bytes, args) -> None:
    """Writes to --out, or to stdout and (unless --no-copy) the clipboard."""
    if args.out:
        output_path = Path(args.out)
        try:
            output_path.parent.mkdir(parents=True, exist_ok=True)
            output_path.write_bytes(content)
        except OSError as e:
            print(f"Error writing output to file {args.out}: {e}", file=sys.stderr)
            sys.exit(1)
        print(f"Output successfully written to {args.out}", file=sys.stderr)
        return

    text = content.decode("utf-8")
    sys.stdout.write(text)
    sys.stdout.flush()
    if not args.no_copy:
        try:
            pyperclip.copy(text)
            logger.debug("Output successfully copied to clipboard.")
        except Exception as e:
            # Clipboard access depends on the desktop session
            logger.debug(f"Failed to copy output to clipboard: {e}")


# --- Command Handlers ---

def handle_usage_command(args) -> int:
    print(USAGE_DOC)
    return 0


def handle_tables_command(args) -> int:
    config = build_config(args)
    rows = rmse_table(args.which, config)
    sink = io.BytesIO()
    write_rmse_rows(rows, sink)
    deliver(sink.getvalue(), args)
    return 0


def handle_curve_command(args) -> int:
    config = build_config(args)
    spec = CurveSpec(
        kind=args.kind,
        params=parse_params(args.params),
        methods=parse_methods(args.methods),
        points=args.points,
    )
    sink = io.BytesIO()
    count = emit_curve(spec, sink, config)
    logger.debug(f"Curve {spec.kind}: {count} rows")
    deliver(sink.getvalue(), args)
    return 0


def handle_qfunc_command(args) -> int:
    config = build_config(args)
    sink = io.BytesIO()
    count = qfunc_grid(args.state, args.grid, sink, config)
    logger.debug(f"Q grid: {count} rows")
    deliver(sink.getvalue(), args)
    return 0


def handle_verify_command(args) -> int:
    config = build_config(args)
    report = verify_suite(args.level, args.checks or [], config)
    print(report.format())
    return 0 if report.passed else 1


HANDLERS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "usage": handle_usage_command,
    "tables": handle_tables_command,
    "curve": handle_curve_command,
    "qfunc": handle_qfunc_command,
    "verify": handle_verify_command,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="inphase",
        description="inphase: exact overlaps, in-phase superpositions and asymptotic approximations for coherent states.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  inphase tables --which I                          # Table I RMSE rows as CSV
  inphase tables --which II --range text            # Table II on the alternative interval
  inphase curve --kind fock_wavefn --params n=20    # exact and approximate <q0, pos|20>
  inphase qfunc --state cat:q0=0.4,theta=0 --grid=-3,3,-3,3,0.05 -o cat.csv
  inphase verify --level fast --check 'exact/*'     # run a subset of the checks
  inphase usage                                     # Display usage documentation
"""
    )

    # --- Shared Arguments ---
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="<file>", help="key = value configuration file (default: $INPHASE_CONFIG if set).")
    common.add_argument("--cutoff", type=int, default=None, metavar="N", help="Fock-space cutoff (overrides the configuration).")
    common.add_argument("--workers", type=int, default=None, metavar="N", help="Threads for grid evaluation; output is identical for any value.")
    common.add_argument("--debug", action="store_true", help="Log DEBUG to stderr and to inphase_debug.log.")

    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--out", "-o", metavar="<file>", help="Write CSV to a file instead of stdout.")
    output.add_argument("--no-copy", action="store_true", help="Do not copy stdout output to the clipboard.")

    subparsers = parser.add_subparsers(dest="command", metavar="<command>")
    subparsers.required = True

    subparsers.add_parser("usage", parents=[common], help="Display usage documentation.")

    tables = subparsers.add_parser("tables", parents=[common, output], help="Reproduce an RMSE table.")
    tables.add_argument("--which", required=True, choices=["I", "II", "III"])
    tables.add_argument("--range", dest="table_range", choices=["caption", "text"], default=None,
                        help="Table II interval: caption (eps, 2 sqrt(2m) - eps) or text (eps, 2 sqrt(2m) + eps).")
    tables.add_argument("--endpoints", choices=["inclusive", "open"], default=None,
                        help="Whether the grid includes the interval ends.")

    curve = subparsers.add_parser("curve", parents=[common, output], help="Emit a comparison curve as CSV.")
    curve.add_argument("--kind", required=True, choices=["fock_wavefn", "displacement_element", "q_radial", "q_grid", "two_source_fringes"])
    curve.add_argument("--params", default="", metavar="K=V,...")
    curve.add_argument("--methods", default="", metavar="LIST", help="Comma-separated method tags (default: all for the kind).")
    curve.add_argument("--points", type=int, default=512, metavar="N")

    qfunc = subparsers.add_parser("qfunc", parents=[common, output], help="Q function of a state on a grid.")
    qfunc.add_argument("--state", required=True, metavar="FAMILY:K=V,...")
    qfunc.add_argument("--grid", required=True, metavar="QMIN,QMAX,PMIN,PMAX,STEP")

    verify = subparsers.add_parser("verify", parents=[common], help="Run the verification checks.")
    verify.add_argument("--level", choices=["fast", "full"], default="fast")
    verify.add_argument("--check", dest="checks", action="append", metavar="<pattern>",
                        help="Select checks by gitignore-style pattern over '<module>/<check>'. Repeatable; '!' excludes.")
    return parser


def main(argv: Optional[list] = None) -> None:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.debug)

    try:
        status = HANDLERS[args.command](args)
    except InphaseError as e:
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(1)
    except ValidationError as e:
        print(f"Error: invalid curve parameters: {e.errors()[0].get('msg')}", file=sys.stderr)
        sys.exit(1)
    except Exception as e:
        print(f"An unexpected error occurred: {type(e).__name__}: {e}", file=sys.stderr)
        if args.debug:
            logger.error("Traceback:", exc_info=True)
        sys.exit(1)
    sys.exit(status)


if __name__ == "__main__":
    main()
