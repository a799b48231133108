# inphase/exceptions.py
"""Custom exceptions for the inphase numerics package."""

from typing import Any, Optional


class InphaseError(Exception):
    """Base class for every error raised by inphase."""


class DomainError(InphaseError, ValueError):
    """An argument lies outside the domain an operation supports."""
    def __init__(self, parameter: str, value: Any, constraint: str):
        self.parameter = parameter
        self.value = value
        self.constraint = constraint
        super().__init__(f"Invalid {parameter}={value!r}: requires {constraint}")


class CausticError(DomainError):
    """The oscillator propagator degenerates to a delta function at sin t = 0."""
    def __init__(self, t: float):
        self.t = t
        super().__init__("t", t, "|sin t| > 1e-9 (kernel is a delta function at a caustic)")


class NoIntersectionError(DomainError):
    """The two circles |m> and D(d,0)|n> do not cross, so no real saddle exists."""
    def __init__(self, m: int, n: int, d: float):
        self.m = m
        self.n = n
        self.d = d
        super().__init__(
            "d", d,
            f"|sqrt(2m) - sqrt(2n)| < d < sqrt(2m) + sqrt(2n) for m={m}, n={n}",
        )


class UnsupportedParameterError(DomainError):
    """The formula exists in principle but is not implemented for this parameter."""


class TruncationError(InphaseError):
    """The truncated Fock space is too small for the requested state or operator."""
    def __init__(self, cutoff: int, tail_mass: Optional[float] = None, limit: Optional[float] = None,
                 context: Optional[str] = None, required_cutoff: Optional[int] = None):
        self.cutoff = cutoff
        self.tail_mass = tail_mass
        self.limit = limit
        self.context = context
        self.required_cutoff = required_cutoff
        if required_cutoff is not None:
            message = f"Fock cutoff {cutoff} is below the required headroom {required_cutoff}"
        else:
            message = f"Fock cutoff {cutoff} is insufficient: tail {tail_mass:.3e} exceeds {limit:.1e}"
        if context:
            message += f" while building {context}"
        message += ". Increase the cutoff."
        super().__init__(message)


class QuadratureError(InphaseError):
    """Adaptive quadrature did not settle within the refinement limit."""
    def __init__(self, last_estimate: complex, last_delta: float, nodes: int):
        self.last_estimate = last_estimate
        self.last_delta = last_delta
        self.nodes = nodes
        super().__init__(
            f"Quadrature did not converge with {nodes} nodes per axis "
            f"(last estimate {last_estimate}, successive difference {last_delta:.3e})"
        )


class ConfigError(InphaseError, ValueError):
    """Configuration file or command-line parameter could not be understood."""
    def __init__(self, source: str, detail: str):
        self.source = source
        self.detail = detail
        super().__init__(f"Invalid configuration in {source}: {detail}")
