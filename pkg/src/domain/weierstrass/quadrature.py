"""
Adaptive Gauss-Legendre quadrature for vector-valued complex integrands.
"""
from collections.abc import Callable
from functools import lru_cache

import numpy as np
import numpy.typing as npt

from src.domain.shared.exceptions import QuadratureFailure

DEFAULT_TOLERANCE = 1e-10
DEFAULT_MAX_DEPTH = 40
NODES = 12

Integrand = Callable[[npt.NDArray[np.float64]], npt.NDArray[np.complex128]]


@lru_cache(maxsize=8)
def _rule(order: int) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def _gauss(func: Integrand, a: float, b: float) -> npt.NDArray[np.complex128]:
    nodes, weights = _rule(NODES)
    half = 0.5 * (b - a)
    tau = 0.5 * (a + b) + half * nodes
    return half * (weights @ func(tau))


def integrate(
    func: Integrand,
    a: float = 0.0,
    b: float = 1.0,
    tol: float = DEFAULT_TOLERANCE,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> npt.NDArray[np.complex128]:
    """
    Integrate ``func`` over ``[a, b]`` by interval halving.

    ``func`` maps an array of nodes of shape (k,) to values of shape (k, m).
    An interval is accepted once the two-half estimate and the one-panel
    estimate differ by less than its share of ``tol``.

    Args:
        func: Vectorized integrand
        a: Lower limit
        b: Upper limit
        tol: Absolute tolerance on the whole interval
        max_depth: Maximum number of halvings of any panel

    Returns:
        Integral of shape (m,)

    Raises:
        QuadratureFailure: If a panel at ``max_depth`` still misses its share
    """
    if a == b:
        return np.zeros(func(np.array([a])).shape[1], dtype=np.complex128)

    # Explicit stack of (left, right, coarse estimate, depth).
    stack = [(a, b, _gauss(func, a, b), 0)]
    width = b - a
    result: npt.NDArray[np.complex128] | None = None
    while stack:
        left, right, coarse, depth = stack.pop()
        middle = 0.5 * (left + right)
        first, second = _gauss(func, left, middle), _gauss(func, middle, right)
        fine = first + second
        share = tol * (right - left) / width
        if np.max(np.abs(fine - coarse)) <= share:
            result = fine if result is None else result + fine
            continue
        if depth + 1 >= max_depth:
            raise QuadratureFailure(
                "Adaptive quadrature did not reach its tolerance",
                {"interval": (left, right), "depth": depth + 1, "tolerance": tol},
            )
        stack.append((middle, right, second, depth + 1))
        stack.append((left, middle, first, depth + 1))
    assert result is not None
    return result
