import logging
import subprocess
import sys
from pathlib import Path
from typing import List, Tuple

import pytest

from mcp import ClientSession, StdioServerParameters
from mcp.client.stdio import stdio_client

from inphase.config_system import NumericsConfig

REPO_ROOT = Path(__file__).resolve().parents[1]
INPHASE_CLI_PATH = REPO_ROOT / "inphase" / "cli.py"
INTERPRETER = sys.executable

logger = logging.getLogger("inphase.tests")
if not logger.handlers and not logging.getLogger().handlers:
    logging.basicConfig(level=logging.DEBUG, format="%(asctime)s %(name)s %(levelname)s %(message)s")


# --- Subprocess helpers ---

def run_inphase_cli(args: List[str], check: bool = True, timeout: int = 300) -> Tuple[int, str, str]:
    """Runs the CLI in a subprocess and returns (returncode, stdout, stderr)."""
    try:
        proc = subprocess.run(
            [INTERPRETER, str(INPHASE_CLI_PATH), *args],
            capture_output=True,
            text=True,
            check=check,
            cwd=str(REPO_ROOT),
            timeout=timeout,
        )
    except subprocess.CalledProcessError as exc:
        logger.error(f"inphase {' '.join(args)} exited with {exc.returncode}\nstdout:\n{exc.stdout}\nstderr:\n{exc.stderr}")
        raise
    except subprocess.TimeoutExpired:
        logger.error(f"inphase {' '.join(args)} timed out after {timeout}s")
        raise
    if proc.stderr:
        sys.stderr.write(proc.stderr)
    return proc.returncode, proc.stdout, "\n".join(proc.stderr.splitlines())


async def run_mcp_tool_call(tool_name: str, **kwargs):
    """Starts the inphase MCP server over stdio, calls one tool and returns the raw result."""
    params = StdioServerParameters(
        command=INTERPRETER,
        args=["-m", "inphase.server", "--log-level", "WARNING"],
        cwd=str(REPO_ROOT),
    )
    try:
        async with stdio_client(params) as (read_stream, write_stream):
            async with ClientSession(read_stream, write_stream) as session:
                await session.initialize()
                logger.debug(f"MCP call {tool_name}({kwargs})")
                return await session.call_tool(tool_name, arguments=kwargs)
    except Exception as exc:
        logger.error(f"MCP call {tool_name} failed: {exc}", exc_info=True)
        raise


def result_text(result) -> str:
    """Joins the text content items of an MCP tool result."""
    return "\n".join(item.text for item in result.content if hasattr(item, "text"))


# --- Fixtures ---

@pytest.fixture
def config() -> NumericsConfig:
    return NumericsConfig()


@pytest.fixture
def small_config() -> NumericsConfig:
    """Cheaper numerics for tests that only need the shape of the output."""
    return NumericsConfig(cutoff=64, table_points=64, circle_samples=128, line_samples=801)


@pytest.fixture(autouse=True)
def _no_config_env(monkeypatch):
    monkeypatch.delenv("INPHASE_CONFIG", raising=False)
