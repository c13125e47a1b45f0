"""Shared numerical tolerances."""

from dataclasses import dataclass

TOL = 1e-8
TOL_CLUSTER = 1e-6


@dataclass(frozen=True)
class Tolerances:
    tol: float = TOL
    tol_cluster: float = TOL_CLUSTER

    def __post_init__(self):
        for name in ("tol", "tol_cluster"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {value!r}")
