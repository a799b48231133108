# inphase/server.py
import sys
import json
import logging
import io
import argparse
from pathlib import Path
from typing import Any, List
from pydantic import Field

# Ensure inphase package is importable if running script directly
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

# Setup logger for the server
logger = logging.getLogger("inphase.server")
# Logs go to stderr; stdout carries the stdio transport
if not logger.handlers and not logging.getLogger().handlers:
    logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')

from mcp.server.fastmcp import FastMCP

from inphase.config_system import load_config
from inphase.exceptions import InphaseError
from inphase.harness import CurveSpec, emit_curve, qfunc_grid, rmse_table, write_rmse_rows
from inphase.utils import USAGE_DOC, parse_params
from inphase.verify import verify_suite


def _coerce_to_list(value: Any, param_name: str) -> List[str]:
    """
    Coerce a value to a list of strings.

    Some MCP hosts (notably Cursor) stringify list parameters; this undoes that.
    """
    if value is None:
        return []
    if isinstance(value, list):
        return [str(item) for item in value]
    if isinstance(value, str):
        stripped = value.strip()
        if stripped.startswith('['):
            try:
                parsed = json.loads(stripped)
                if isinstance(parsed, list):
                    logger.warning(f"Parameter '{param_name}' was stringified JSON; coerced to list")
                    return [str(item) for item in parsed]
            except json.JSONDecodeError:
                pass
        if stripped:
            logger.warning(f"Parameter '{param_name}' was a string; split on commas")
            return [item.strip() for item in stripped.split(",") if item.strip()]
        return []
    logger.warning(f"Parameter '{param_name}' has unexpected type {type(value)}; returning empty list")
    return []


# --- Server Definition ---
server = FastMCP("inphase")


@server.tool(description="Returns the inphase usage text: subcommands, curve kinds, state families and configuration keys.")
async def usage() -> str:
    logger.info("--- usage tool invoked ---")
    return USAGE_DOC


@server.tool(name="rmse_table", description=(
    "Reproduces one RMSE table comparing asymptotic approximations with exact values. "
    "Table I: Fock wavefunctions <q0, pos|n> for n = 20..50 (inphase, plancherel_rotach, wkb). "
    "Table II: diagonal displacement elements <m|D(d,0)|m>; Table III: off-diagonal <m|D(d,0)|n> "
    "(inphase, tricomi, dowling_wkb). Returns CSV with one row per (indices, method)."
))
async def rmse_table_tool(
    which: str = Field(description="Table to reproduce: 'I', 'II' or 'III'."),
    table_range: str = Field(default="caption", description="Table II interval: 'caption' or 'text'."),
    endpoints: str = Field(default="inclusive", description="Grid endpoints: 'inclusive' or 'open'."),
) -> str:
    logger.info(f"--- rmse_table tool invoked: which={which}, range={table_range}, endpoints={endpoints} ---")
    try:
        config = load_config(overrides={"table_range": table_range, "endpoints": endpoints})
        if which not in ("I", "II", "III"):
            raise ValueError(f"which must be 'I', 'II' or 'III', got {which!r}")
        sink = io.BytesIO()
        write_rmse_rows(rmse_table(which, config), sink)
        return sink.getvalue().decode("utf-8")
    except (InphaseError, ValueError) as e:
        logger.error(f"rmse_table failed: {e}")
        raise


@server.tool(description=(
    "Emits a comparison curve as CSV. Kinds: fock_wavefn (params n), displacement_element (m, n), "
    "q_radial (n), q_grid (n), two_source_fringes (q0, theta). params is 'k=v,k=v'; methods empty means all."
))
async def curve(
    kind: str = Field(description="Curve kind, e.g. 'fock_wavefn'."),
    params: str = Field(default="", description="Comma-separated key=value pairs, e.g. 'n=20' or 'm=30,n=10'."),
    methods: List[str] = Field(default_factory=list, description="Method tags to include, e.g. ['inphase', 'wkb']. Empty for all."),
    points: int = Field(default=512, description="Number of grid points (per axis for q_grid)."),
) -> str:
    methods = _coerce_to_list(methods, "methods")
    logger.info(f"--- curve tool invoked: kind={kind}, params={params}, methods={methods}, points={points} ---")
    try:
        spec = CurveSpec(kind=kind, params=parse_params(params), methods=methods, points=points)
        sink = io.BytesIO()
        emit_curve(spec, sink, load_config())
        return sink.getvalue().decode("utf-8")
    except (InphaseError, ValueError) as e:
        logger.error(f"curve failed: {e}")
        raise


@server.tool(description=(
    "Husimi Q function (per unit dq dp) of a state on a rectangular grid, as CSV with columns q, p, q_value. "
    "States: 'fock:n=5', 'cat:q0=0.4,theta=0', 'squeezed:mu=1', 'coherent:q=1,p=0'."
))
async def qfunc(
    state: str = Field(description="State as 'family:k=v,...'."),
    grid: str = Field(description="Grid as 'qmin,qmax,pmin,pmax,step'."),
) -> str:
    logger.info(f"--- qfunc tool invoked: state={state}, grid={grid} ---")
    try:
        sink = io.BytesIO()
        qfunc_grid(state, grid, sink, load_config())
        return sink.getvalue().decode("utf-8")
    except (InphaseError, ValueError) as e:
        logger.error(f"qfunc failed: {e}")
        raise


@server.tool(description=(
    "Runs the verification checks and returns a PASS/FAIL report with the measured deviations. "
    "checks selects by gitignore-style patterns over '<module>/<check>' names, e.g. ['exact/*', '!exact/propagator_*']."
))
async def verify(
    level: str = Field(default="fast", description="'fast' or 'full'."),
    checks: List[str] = Field(default_factory=list, description="Check name patterns. Empty runs every check."),
) -> str:
    checks = _coerce_to_list(checks, "checks")
    logger.info(f"--- verify tool invoked: level={level}, checks={checks} ---")
    report = verify_suite(level, checks, load_config())
    return report.format()


def run_server():
    """Parses arguments, configures logging, and runs the MCP server."""
    parser = argparse.ArgumentParser(description="inphase MCP Server")
    parser.add_argument(
        "--log-level",
        type=str,
        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'],
        default='INFO',
        help="Set the logging level for the server."
    )
    args = parser.parse_args()

    log_level = getattr(logging, args.log_level.upper(), logging.INFO)
    logging.getLogger().setLevel(log_level)
    logger.setLevel(log_level)
    for handler in logging.getLogger().handlers:
        handler.setLevel(log_level)
    logger.info(f"Server log level set to: {args.log_level.upper()}")

    logger.info("--- inphase MCP Server: About to call server.run() ---")
    try:
        server.run()
    except Exception as e:
        logger.critical(f"!!! Exception during server.run(): {e}", exc_info=True)
        sys.exit(1)
    logger.info("inphase MCP Server stopped.")


if __name__ == "__main__":
    run_server()
