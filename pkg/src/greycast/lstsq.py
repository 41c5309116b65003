"""Small dense least-squares solver shared by all grey model fits.

The mathematical contract is the normal-equation minimizer (B'B)^-1 B'Y, but
the solve goes through an orthogonal decomposition (numpy's SVD-backed
``lstsq``) for conditioning. Systems with condition estimate above 1e12 are
rejected rather than silently returning noise.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError, InvalidInputError, SingularSystemError

CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class LeastSquaresProblem:
    design: np.ndarray  # (m, p), m >= p
    targets: np.ndarray  # (m,)

    def __post_init__(self):
        b = np.asarray(self.design, dtype=float)
        y = np.asarray(self.targets, dtype=float)
        if b.ndim != 2 or y.ndim != 1 or b.shape[0] != y.size:
            raise InvalidInputError("design must be 2-d with one target per row")
        if b.shape[0] < b.shape[1]:
            raise InsufficientDataError(
                f"underdetermined system: {b.shape[0]} rows < {b.shape[1]} columns"
            )
        if not (np.isfinite(b).all() and np.isfinite(y).all()):
            raise InvalidInputError("least-squares entries must be finite")
        object.__setattr__(self, "design", b)
        object.__setattr__(self, "targets", y)


def solve_least_squares(problem: LeastSquaresProblem) -> np.ndarray:
    """Minimizer of ||B p - Y||_2 for a small dense full-rank system."""
    b, y = problem.design, problem.targets
    solution, _, rank, sv = np.linalg.lstsq(b, y, rcond=None)
    cond = float("inf") if sv[-1] == 0.0 else float(sv[0] / sv[-1])
    if rank < b.shape[1] or cond > CONDITION_LIMIT:
        raise SingularSystemError(
            f"near-singular system (condition estimate {cond:.3e})", condition=cond
        )
    return solution
