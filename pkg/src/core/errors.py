from __future__ import annotations
"""Exception hierarchy for the simulator.

Everything derives from `SimulationError` (itself a `RuntimeError`) so callers
that only care about "the run went wrong" can catch one type.
"""


class SimulationError(RuntimeError):
    """Base class for all simulator errors."""


class DimensionMismatch(SimulationError):
    """Two coordinates (or a coordinate and a network) disagree on N."""


class InvalidRequest(SimulationError):
    """A request or query names the same node twice or an unknown node."""


class TraceOrderError(SimulationError):
    """Trace records are out of order, repeat a time step, or are malformed."""


class ConfigError(SimulationError):
    """Configuration failed validation before any request was served."""


class StateCorruption(SimulationError):
    """Per-node algorithm state disagrees with itself or with the placement."""


class WitnessNotFound(SimulationError):
    """No far partner satisfies the working-set lower-bound threshold."""


class SelectionError(SimulationError):
    """Order-statistic selection called with empty input or L out of range."""
