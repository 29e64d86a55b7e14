"""Run-wide numerical settings.

Every threshold used by the library lives here; functions take them as
keyword arguments defaulting to :data:`DEFAULT`.
"""

from dataclasses import dataclass, replace

DEFAULT_ORDER = 128
SAFETY_RADIUS = 0.6


@dataclass(frozen=True)
class Tolerances:
    # coefficientwise comparison of unit-scale series
    coefficient: float = 1e-10
    # operator-identity residual pass threshold (before tail inflation)
    residual: float = 1e-8
    # certified blocks are chosen so that tail bound <= tail_fraction * residual
    tail_fraction: float = 0.1
    # sup |m| <= 1 + selfmap on the unit circle
    selfmap: float = 1e-10
    # |root| within boundary_band of 1 counts as a boundary point
    boundary_band: float = 1e-9
    # |ad - bc| after normalization
    degenerate: float = 1e-12
    # unimodularity and lambda*p = conj(p)
    unimodular: float = 1e-12
    # |b1| = 1 and base point equation residual
    basepoint: float = 1e-10
    # |b| = |c| test for the boundary-normal family
    normal_bc: float = 1e-10
    # phi o phi = id detection, constant-series detection
    involution: float = 1e-9
    constant: float = 1e-10
    # vanishing constant term for series_log
    log_zero: float = 1e-12
    # reconstruction tolerance for parameter matching
    match: float = 1e-9
    power_iterations: int = 100
    # residual values below this are treated as round-off
    roundoff_floor: float = 1e-13

    def with_(self, **changes):
        return replace(self, **changes)


DEFAULT = Tolerances()
