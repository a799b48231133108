# inphase/utils.py
import logging
import math
from typing import Dict, List, Tuple

from inphase.exceptions import ConfigError

logger = logging.getLogger("inphase.utils")

# --- Constants ---
FLOAT_DIGITS = 17

USAGE_DOC = """\
inphase: coherent-state in-phase superpositions, exact overlaps and their asymptotics.

Subcommands
  tables  --which I|II|III [--range caption|text] [--endpoints inclusive|open]
      RMSE of the asymptotic approximations against the exact values.
      I:   <q0, pos|n> for n = 20, 30, 40, 50 (inphase, plancherel_rotach, wkb)
      II:  <m|D(d,0)|m> for m = 20, 30, 40, 50 (inphase, tricomi, dowling_wkb)
      III: <m|D(d,0)|n> for (30,20), (40,30), (50,40), (30,10)
  curve   --kind KIND --params K=V,... [--methods a,b] [--points N]
      fock_wavefn           n [lo hi]           methods: inphase plancherel_rotach wkb
      displacement_element  m n [lo hi]         methods: inphase inphase_equal tricomi dowling_wkb
      q_radial              n [rmax]            methods: closed_form circle
      q_grid                n [extent]          methods: closed_form circle (points per axis)
      two_source_fringes    q0 [theta q pmin pmax]
  qfunc   --state fock:n=5 | cat:q0=0.4,theta=0 | squeezed:mu=1 | coherent:q=1,p=0
          --grid=qmin,qmax,pmin,pmax,step
      Husimi Q (per unit dq dp) on a rectangular grid. Use '--grid=' when qmin is negative.
  verify  [--level fast|full] [--check PATTERN ...]
      Runs the named checks (<module>/<check>); exit status 1 on any failure.
      Patterns use gitignore syntax, '!' excludes: --check 'exact/*' --check '!exact/propagator_*'
  usage
      Prints this text.

Output
  CSV, UTF-8, comma separated, header first, floats with 17 significant digits.
  Written to --out FILE, else stdout (copied to the clipboard unless --no-copy).

Configuration (key = value, '#' comments), via --config FILE or INPHASE_CONFIG:
  cutoff, line_extent, line_samples, circle_samples, table_points,
  endpoints, table_range, workers, quad_tolerance, quad_max_nodes
  Command-line flags win over the file.
"""


def format_float(value: float) -> str:
    """17 significant digits, which round-trips any double."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{FLOAT_DIGITS}g}"


def parse_params(text: str, source: str = "--params") -> Dict[str, float]:
    """Parses 'k=v,k=v' into floats. An empty string gives an empty mapping."""
    params: Dict[str, float] = {}
    if not text or not text.strip():
        return params
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(source, f"expected key=value, got '{item}'")
        try:
            params[key] = float(raw)
        except ValueError:
            raise ConfigError(source, f"value for '{key}' is not a number: '{raw.strip()}'") from None
        if not math.isfinite(params[key]):
            raise ConfigError(source, f"value for '{key}' must be finite")
    return params


def parse_state(text: str) -> Tuple[str, Dict[str, float]]:
    """Splits 'family:k=v,...' into the family name and its parameters."""
    family, _, rest = text.partition(":")
    family = family.strip()
    if not family:
        raise ConfigError("--state", f"missing state family in '{text}'")
    return family, parse_params(rest, source="--state")


def parse_grid(text: str) -> Tuple[float, float, float, float, float]:
    """Parses 'qmin,qmax,pmin,pmax,step'."""
    parts = [part.strip() for part in text.split(",")]
    if len(parts) != 5:
        raise ConfigError("--grid", f"expected qmin,qmax,pmin,pmax,step, got '{text}'")
    try:
        q_min, q_max, p_min, p_max, step = (float(part) for part in parts)
    except ValueError:
        raise ConfigError("--grid", f"non-numeric entry in '{text}'") from None
    if step <= 0 or not q_min <= q_max or not p_min <= p_max:
        raise ConfigError("--grid", "need step > 0, qmin <= qmax and pmin <= pmax")
    return q_min, q_max, p_min, p_max, step


def parse_methods(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()] if text else []
