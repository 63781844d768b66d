"""Global tolerance configuration.

All modules draw their numerical thresholds from a single ``Tolerances``
object so that one override (``--tol`` on the command line or the
``QSPECTRA_TOL`` environment variable) rescales the whole pipeline
consistently.  ``base`` plays the role of the residual-level tolerance
(linear solves, quadrature targets, rank decisions); eigenvalue clustering
works at ``100 * base`` because computed eigenvalues of a nonsymmetric
matrix carry roughly that much noise relative to residuals.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

ENV_TOL = "QSPECTRA_TOL"


@dataclass(frozen=True)
class Tolerances:
    base: float = 1e-10
    cond_cap: float = 1e14       # refuse linear solves beyond this condition estimate
    quad_node_cap: int = 4096    # per-circle node ceiling for adaptive quadrature

    def __post_init__(self):
        if not (0.0 < self.base < 1.0):
            raise ValueError(f"tolerance base must be in (0, 1), got {self.base}")

    # residual-level thresholds
    @property
    def solve(self) -> float:
        return self.base

    @property
    def quad_rel(self) -> float:
        return self.base

    @property
    def near_spectrum_rel(self) -> float:
        return self.base

    @property
    def rank_rel(self) -> float:
        return self.base

    @property
    def projection(self) -> float:
        return self.base

    # eigenvalue-level threshold
    @property
    def cluster_rel(self) -> float:
        return 100.0 * self.base


def default_tolerances() -> Tolerances:
    """Tolerances from the environment, or the library defaults."""
    raw = os.environ.get(ENV_TOL)
    if raw is None:
        return Tolerances()
    return Tolerances(base=float(raw))


def resolve(tol: Tolerances | None) -> Tolerances:
    return tol if tol is not None else default_tolerances()
