# inphase/harness.py
"""
Table reproduction and CSV emission.

rmse_table compares the asymptotic approximations against the exact values
on uniform grids; emit_curve and qfunc_grid write comparison curves and Q
function grids as CSV. Grid evaluations may run on a thread pool; results
are gathered in submission order so the bytes written never depend on the
number of workers.
"""

import csv
import io
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import BinaryIO, Callable, Dict, Iterable, List, Literal, Optional, Sequence, Tuple, TypeVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from inphase.asymptotics import (
    DISPLACEMENT_METHODS,
    HERMITE_METHODS,
    displacement_approx,
    fock_position_approx,
)
from inphase.config_system import NumericsConfig
from inphase.exact import MAX_FOCK_INDEX, SqueezeParam, displacement_element, fock_position_wavefn, squeeze_element
from inphase.exceptions import DomainError, TruncationError
from inphase.phasespace import PhasePoint
from inphase.states import (
    STATE_TAIL_LIMIT,
    FockVector,
    SuperpositionSpec,
    build_superposition,
    coherent_fock_coeffs,
    q_closed_form,
    q_function_grid,
    two_source_q,
)
from inphase.utils import format_float, parse_grid, parse_state

logger = logging.getLogger("inphase.harness")
if not logger.handlers and not logging.getLogger().handlers:
    logging.basicConfig(level=logging.INFO, format='%(levelname)s:%(name)s:%(message)s')

# --- Constants ---
EPSILON = 0.3
DELTA = 5.0
TABLE_I_INDICES = (20, 30, 40, 50)
TABLE_II_INDICES = (20, 30, 40, 50)
TABLE_III_PAIRS = ((30, 20), (40, 30), (50, 40), (30, 10))
TABLE_DISPLACEMENT_METHODS = ("inphase", "tricomi", "dowling_wkb")
CURVE_KINDS = ("fock_wavefn", "displacement_element", "q_radial", "q_grid", "two_source_fringes")
Q_METHODS = ("closed_form", "circle")
QFUNC_FAMILIES = ("fock", "cat", "squeezed", "coherent")

TableName = Literal["I", "II", "III"]
T = TypeVar("T")
R = TypeVar("R")


class RmseRow(BaseModel):
    """
    One table row. Table I stores the Fock index in m and leaves n empty.
    valid_points counts grid points inside the method's window; rmse averages those only.
    """
    model_config = ConfigDict(frozen=True)

    table: TableName
    m: int
    n: Optional[int] = None
    method: str
    grid_lo: float
    grid_hi: float
    points: int
    valid_points: int
    rmse: float


class CurveSpec(BaseModel):
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    kind: Literal["fock_wavefn", "displacement_element", "q_radial", "q_grid", "two_source_fringes"]
    params: Dict[str, float] = Field(default_factory=dict)
    methods: List[str] = Field(default_factory=list)
    points: int = Field(default=512, ge=2)


# --- Helpers ---

def ordered_map(function: Callable[[T], R], items: Sequence[T], workers: int = 1) -> List[R]:
    """map() on a thread pool when workers > 1; results keep the order of items."""
    if workers <= 1 or len(items) <= 1:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(function, items))


def table_grid(lo: float, hi: float, points: int, endpoints: Literal["inclusive", "open"] = "inclusive") -> np.ndarray:
    """Uniform grid on [lo, hi], or its interior when endpoints='open'."""
    if points < 2:
        raise DomainError("points", points, "points >= 2")
    if not lo < hi:
        raise DomainError("interval", (lo, hi), "lo < hi")
    if endpoints == "inclusive":
        return np.linspace(lo, hi, points)
    if endpoints == "open":
        return np.linspace(lo, hi, points + 2)[1:-1]
    raise DomainError("endpoints", endpoints, "'inclusive' or 'open'")


def write_csv(header: Sequence[str], rows: Iterable[Sequence[object]], sink: BinaryIO) -> int:
    """Writes UTF-8 CSV with '\\n' line ends; floats go through format_float. Returns the data row count."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    count = 0
    for row in rows:
        writer.writerow([_cell(value) for value in row])
        count += 1
    sink.write(buffer.getvalue().encode("utf-8"))
    return count


def _cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return str(value)


def _rmse(exact: np.ndarray, approx: np.ndarray) -> Tuple[int, float]:
    valid = np.isfinite(approx)
    count = int(np.count_nonzero(valid))
    if count == 0:
        return 0, math.nan
    residual = approx[valid] - exact[valid]
    return count, float(math.sqrt(math.fsum((residual * residual).tolist()) / count))


def _approx_array(evaluate: Callable[[float], "object"], grid: np.ndarray) -> np.ndarray:
    return np.array([evaluate(float(x)).value for x in grid], dtype=float)


# --- Tables ---

def table_interval(table: TableName, m: int, n: Optional[int] = None,
                   table_range: Literal["caption", "text"] = "caption") -> Tuple[float, float]:
    """Grid interval of one table row."""
    if table == "I":
        edge = math.sqrt(2.0 * m) - EPSILON
        return -edge, edge
    if table == "II":
        boundary = 2.0 * math.sqrt(2.0 * m)
        if table_range == "caption":
            return EPSILON, boundary - EPSILON
        if table_range == "text":
            return EPSILON, boundary + EPSILON
        raise DomainError("table_range", table_range, "'caption' or 'text'")
    if table == "III":
        if n is None:
            raise DomainError("n", n, "an index for Table III")
        root_m, root_n = math.sqrt(2.0 * m), math.sqrt(2.0 * n)
        return root_m - root_n + DELTA, root_m + root_n - EPSILON
    raise DomainError("table", table, "'I', 'II' or 'III'")


def _table_entry(table: TableName, m: int, n: Optional[int], config: NumericsConfig) -> List[RmseRow]:
    lo, hi = table_interval(table, m, n, config.table_range)
    grid = table_grid(lo, hi, config.table_points, config.endpoints)
    if table == "I":
        exact = np.array([fock_position_wavefn(m, float(x)) for x in grid])
        methods = HERMITE_METHODS
        evaluators = {method: (lambda x, method=method: fock_position_approx(method, m, x)) for method in methods}
    else:
        second = m if table == "II" else n
        exact = np.array([displacement_element(m, second, float(d), 0.0).real for d in grid])
        methods = TABLE_DISPLACEMENT_METHODS
        evaluators = {method: (lambda d, method=method: displacement_approx(method, m, second, d)) for method in methods}

    rows = []
    for method in methods:
        valid_points, rmse = _rmse(exact, _approx_array(evaluators[method], grid))
        if valid_points < grid.size:
            logger.warning(
                f"Table {table} ({m}, {n}) {method}: RMSE over {valid_points} of {grid.size} points "
                f"inside the method's window"
            )
        rows.append(RmseRow(
            table=table, m=m, n=n if table != "I" else None, method=method,
            grid_lo=lo, grid_hi=hi, points=int(grid.size), valid_points=valid_points, rmse=rmse,
        ))
    logger.debug(f"Table {table} ({m}, {n}) on [{lo:.4f}, {hi:.4f}]: " + ", ".join(f"{r.method}={r.rmse:.5f}" for r in rows))
    return rows


def rmse_table(which: TableName, config: Optional[NumericsConfig] = None) -> List[RmseRow]:
    """
    Reproduces one RMSE table: every (indices, method) pair, in table order.

    Grid points are config.table_points on the caption interval (Table II
    can switch to the text interval with config.table_range).
    """
    config = config or NumericsConfig()
    if which == "I":
        entries = [(m, None) for m in TABLE_I_INDICES]
    elif which == "II":
        entries = [(m, m) for m in TABLE_II_INDICES]
    elif which == "III":
        entries = list(TABLE_III_PAIRS)
    else:
        raise DomainError("which", which, "'I', 'II' or 'III'")

    logger.info(f"Computing Table {which} ({config.table_points} points, {config.endpoints} endpoints, {config.table_range} range)")
    per_entry = ordered_map(lambda entry: _table_entry(which, entry[0], entry[1], config), entries, config.workers)
    return [row for rows in per_entry for row in rows]


RMSE_HEADER = ("table", "m", "n", "method", "grid_lo", "grid_hi", "points", "valid_points", "rmse")


def write_rmse_rows(rows: Sequence[RmseRow], sink: BinaryIO) -> int:
    return write_csv(RMSE_HEADER, ([getattr(row, field) for field in RMSE_HEADER] for row in rows), sink)


# --- Curves ---

def _integer_param(params: Dict[str, float], key: str) -> int:
    if key not in params:
        raise DomainError("params", params, f"'{key}' is required")
    value = params[key]
    if value < 0 or value != int(value):
        raise DomainError(key, value, "a non-negative integer")
    return int(value)


def _methods(spec: CurveSpec, allowed: Sequence[str]) -> List[str]:
    methods = list(spec.methods) or list(allowed)
    unknown = [method for method in methods if method not in allowed]
    if unknown:
        raise DomainError("methods", unknown, f"methods for {spec.kind} from {', '.join(allowed)}")
    return methods


def _fock_wavefn_rows(spec: CurveSpec, config: NumericsConfig) -> Tuple[List[str], List[List[float]]]:
    n = _integer_param(spec.params, "n")
    methods = _methods(spec, HERMITE_METHODS)
    edge = math.sqrt(2.0 * n) - EPSILON
    grid = table_grid(spec.params.get("lo", -edge), spec.params.get("hi", edge), spec.points)

    def row(q0: float) -> List[float]:
        return [q0, fock_position_wavefn(n, q0)] + [fock_position_approx(m, n, q0).value for m in methods]

    return ["q0", "exact"] + methods, ordered_map(row, [float(x) for x in grid], config.workers)


def _displacement_rows(spec: CurveSpec, config: NumericsConfig) -> Tuple[List[str], List[List[float]]]:
    m = _integer_param(spec.params, "m")
    n = _integer_param(spec.params, "n")
    methods = _methods(spec, DISPLACEMENT_METHODS)
    if m == n:
        lo, hi = table_interval("II", m)
    else:
        root_m, root_n = math.sqrt(2.0 * m), math.sqrt(2.0 * n)
        lo, hi = abs(root_m - root_n) + EPSILON, root_m + root_n - EPSILON
    grid = table_grid(spec.params.get("lo", lo), spec.params.get("hi", hi), spec.points)

    def row(d: float) -> List[float]:
        exact = displacement_element(m, n, d, 0.0).real
        return [d, exact] + [displacement_approx(method, m, n, d).value for method in methods]

    return ["d", "exact"] + methods, ordered_map(row, [float(x) for x in grid], config.workers)


def _fock_circle_state(n: int, config: NumericsConfig) -> FockVector:
    return build_superposition(SuperpositionSpec(kind="fock_circle", params={"n": float(n)}), config=config)


def _q_radial_rows(spec: CurveSpec, config: NumericsConfig) -> Tuple[List[str], List[List[float]]]:
    n = _integer_param(spec.params, "n")
    methods = _methods(spec, Q_METHODS)
    r_max = spec.params.get("rmax", max(6.0, 2.0 * math.sqrt(2.0 * n)))
    radii = np.linspace(0.0, r_max, spec.points)
    columns: Dict[str, np.ndarray] = {}
    if "closed_form" in methods:
        columns["closed_form"] = np.array([q_closed_form("fock", n, PhasePoint(q=float(r), p=0.0)) for r in radii])
    if "circle" in methods:
        columns["circle"] = q_function_grid(_fock_circle_state(n, config), radii, [0.0])[:, 0]
    rows = [[float(r)] + [float(columns[m][i]) for m in methods] for i, r in enumerate(radii)]
    return ["r"] + methods, rows


def _q_grid_rows(spec: CurveSpec, config: NumericsConfig) -> Tuple[List[str], List[List[float]]]:
    n = _integer_param(spec.params, "n")
    methods = _methods(spec, Q_METHODS)
    extent = spec.params.get("extent", max(4.0, 2.0 * math.sqrt(2.0 * n)))
    axis = np.linspace(-extent, extent, spec.points)
    closed = circle = None
    if "closed_form" in methods:
        closed = np.array([[q_closed_form("fock", n, PhasePoint(q=float(q), p=float(p))) for p in axis] for q in axis])
    if "circle" in methods:
        circle = q_function_grid(_fock_circle_state(n, config), axis, axis)
    values = {"closed_form": closed, "circle": circle}
    rows = []
    for i, q in enumerate(axis):
        for j, p in enumerate(axis):
            rows.append([float(q), float(p)] + [float(values[m][i, j]) for m in methods])
    return ["q", "p"] + methods, rows


def _two_source_rows(spec: CurveSpec, config: NumericsConfig) -> Tuple[List[str], List[List[float]]]:
    if spec.methods:
        raise DomainError("methods", spec.methods, "no methods for two_source_fringes")
    if "q0" not in spec.params:
        raise DomainError("params", spec.params, "'q0' is required")
    q0 = spec.params["q0"]
    if q0 <= 0:
        raise DomainError("q0", q0, "q0 > 0")
    theta = spec.params.get("theta", 0.0)
    q_obs = spec.params.get("q", 0.0)
    span = 1.5 * 2.0 * math.pi / q0
    grid = table_grid(spec.params.get("pmin", -span), spec.params.get("pmax", span), spec.points)
    z1 = PhasePoint(q=-q0, p=0.0)
    z2 = PhasePoint(q=q0, p=0.0)

    def row(p: float) -> List[float]:
        parts = two_source_q(z1, z2, theta, PhasePoint(q=q_obs, p=p))
        return [p, parts.i1, parts.i2, parts.delta, math.cos(parts.delta), parts.q_value]

    return ["p", "i1", "i2", "delta", "fringe", "q_value"], ordered_map(row, [float(x) for x in grid], config.workers)


_CURVE_BUILDERS = {
    "fock_wavefn": _fock_wavefn_rows,
    "displacement_element": _displacement_rows,
    "q_radial": _q_radial_rows,
    "q_grid": _q_grid_rows,
    "two_source_fringes": _two_source_rows,
}


def emit_curve(spec: CurveSpec, sink: BinaryIO, config: Optional[NumericsConfig] = None) -> int:
    """Writes the curve as CSV to a byte stream and returns the number of data rows."""
    config = config or NumericsConfig()
    logger.info(f"Emitting {spec.kind} curve with {spec.points} points")
    header, rows = _CURVE_BUILDERS[spec.kind](spec, config)
    return write_csv(header, rows, sink)


# --- Q function grids ---

def qfunc_state(text: str, config: Optional[NumericsConfig] = None) -> FockVector:
    """
    Builds the state named by 'family:k=v,...'.

    fock:n; cat:q0[,theta] = |-q0,0> + e^{i theta}|q0,0>; squeezed:mu = S(mu)|0>;
    coherent:q,p.
    """
    config = config or NumericsConfig()
    family, params = parse_state(text)
    if family == "fock":
        n = _integer_param(params, "n")
        return FockVector.basis(n, n)
    if family == "cat":
        if "q0" not in params:
            raise DomainError("params", params, "cat needs q0")
        q0 = params["q0"]
        spec = SuperpositionSpec(kind="coherent_pair", params={
            "q1": -q0, "p1": 0.0, "q2": q0, "p2": 0.0, "theta": params.get("theta", 0.0),
        })
        return build_superposition(spec, config=config)
    if family == "squeezed":
        if "mu" not in params:
            raise DomainError("params", params, "squeezed needs mu")
        cutoff = min(config.cutoff, MAX_FOCK_INDEX)
        sq = SqueezeParam(mu=params["mu"])
        state = FockVector(coeffs=[squeeze_element(k, sq, 0) for k in range(cutoff + 1)])
        # odd entries vanish, so judge the tail on the last even index
        last_even = cutoff - (cutoff % 2)
        tail = abs(state.coeffs[last_even]) ** 2 / state.norm() ** 2
        if tail > STATE_TAIL_LIMIT:
            raise TruncationError(cutoff, tail, STATE_TAIL_LIMIT, context=f"squeezed vacuum mu={sq.mu}")
        return state
    if family == "coherent":
        point = PhasePoint(q=params.get("q", 0.0), p=params.get("p", 0.0))
        state = coherent_fock_coeffs(point, config.cutoff)
        if state.tail_mass() > STATE_TAIL_LIMIT:
            raise TruncationError(config.cutoff, state.tail_mass(), STATE_TAIL_LIMIT, context="coherent state")
        return state
    raise DomainError("state", family, f"one of {', '.join(QFUNC_FAMILIES)}")


def _grid_axis(lo: float, hi: float, step: float) -> np.ndarray:
    count = int(round((hi - lo) / step)) + 1
    return np.linspace(lo, lo + (count - 1) * step, count)


def qfunc_grid(state: str, grid: str, sink: BinaryIO, config: Optional[NumericsConfig] = None) -> int:
    """Q per unit dq dp on 'qmin,qmax,pmin,pmax,step'; rows run over p fastest."""
    config = config or NumericsConfig()
    vector = qfunc_state(state, config)
    q_min, q_max, p_min, p_max, step = parse_grid(grid)
    q_axis = _grid_axis(q_min, q_max, step)
    p_axis = _grid_axis(p_min, p_max, step)
    logger.info(f"Q function of {state} on a {q_axis.size} x {p_axis.size} grid")
    values = q_function_grid(vector, q_axis, p_axis)
    rows = ([float(q), float(p), float(values[i, j])] for i, q in enumerate(q_axis) for j, p in enumerate(p_axis))
    return write_csv(["q", "p", "q_value"], rows, sink)
