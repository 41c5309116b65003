import numpy as np
import pytest


def basic_form_series(a: float, b: float, x1: float, n: int) -> np.ndarray:
    """Generate data exactly satisfying x0(k) + a*z1(k) = b.

    The recursion x0(k) = (b - a*x1(k-1)) / (1 + a/2) makes the grey basic
    form hold identically, so fits must recover (a, b) to rounding error.
    """
    values = [float(x1)]
    acc = float(x1)
    for _ in range(n - 1):
        nxt = (b - a * acc) / (1.0 + a / 2.0)
        values.append(nxt)
        acc += nxt
    return np.array(values)


def normal_equations(design, targets) -> np.ndarray:
    """Independent least-squares oracle: solve (B'B) p = B'Y directly."""
    b = np.asarray(design, float)
    y = np.asarray(targets, float)
    return np.linalg.solve(b.T @ b, b.T @ y)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
