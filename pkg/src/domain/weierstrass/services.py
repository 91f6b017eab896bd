"""
Weierstrass representation services.

Evaluates the null-curve integrand, immersions, periods, fluxes and Gauss
maps for rational Weierstrass data.
"""
import logging

import numpy as np
import numpy.typing as npt

from src.domain.shared.exceptions import (
    ConstantGauss,
    InvalidWeierstrassData,
    OpenPath,
    PoleAtPoint,
)
from src.domain.shared.types import Vec3R
from src.domain.weierstrass.entities import (
    POLE_DISTANCE,
    ComplexArray,
    Circle,
    HoloForm,
    PathC,
    WeierstrassData,
)
from src.domain.weierstrass.quadrature import (
    DEFAULT_MAX_DEPTH,
    DEFAULT_TOLERANCE,
    integrate,
)

logger = logging.getLogger(__name__)

CLOSURE_TOLERANCE = 1e-12


def _forms(data: WeierstrassData, z: ComplexArray) -> npt.NDArray[np.complex128]:
    g = np.asarray(data.g(z))
    h = np.asarray(data.eta(z))
    g2 = g * g
    return np.stack([(1 - g2) * h, 1j * (1 + g2) * h, 2 * g * h], axis=-1)


def eval_forms(data: WeierstrassData, z: complex) -> tuple[complex, complex, complex]:
    """
    Evaluate ``((1 - g^2) h, i(1 + g^2) h, 2 g h)`` where ``eta = h dz``.

    Args:
        data: Weierstrass data
        z: Evaluation point

    Returns:
        The three components of the integrand

    Raises:
        PoleAtPoint: If z is within the pole distance of a singularity
    """
    distance = data.distance_to_singularities(z)
    if distance <= POLE_DISTANCE:
        raise PoleAtPoint(
            f"Cannot evaluate forms at {z}", {"z": z, "distance": distance}
        )
    phi = _forms(data, np.asarray([z], dtype=np.complex128))[0]
    return complex(phi[0]), complex(phi[1]), complex(phi[2])


def _check_path(data: WeierstrassData, path: PathC) -> None:
    for point in data.singularities():
        if path.distance_to(complex(point)) <= POLE_DISTANCE:
            raise PoleAtPoint(
                "Integration path passes through a singularity",
                {"singularity": complex(point)},
            )


def path_integral(
    data: WeierstrassData,
    path: PathC,
    tol: float = DEFAULT_TOLERANCE,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> npt.NDArray[np.complex128]:
    """
    Complex integral of the three forms along ``path``.

    ``tol`` is an absolute tolerance per unit path length.
    """
    _check_path(data, path)
    total = np.zeros(3, dtype=np.complex128)
    for piece in path.pieces():
        if piece.length == 0:
            continue

        def integrand(tau: npt.NDArray[np.float64], piece=piece) -> ComplexArray:
            return _forms(data, piece.point(tau)) * piece.velocity(tau)[:, None]

        total += integrate(integrand, 0.0, 1.0, tol * piece.length, max_depth)
    return total


def immerse(
    data: WeierstrassData,
    path: PathC,
    tol: float = DEFAULT_TOLERANCE,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> Vec3R:
    """
    Position ``Re \\int_{p0}^{p} phi`` reached along ``path``.

    Args:
        data: Weierstrass data
        path: Path starting at the basepoint
        tol: Absolute quadrature tolerance per unit path length
        max_depth: Maximum panel halvings

    Returns:
        Point in R^3

    Raises:
        InvalidWeierstrassData: If the path does not start at the basepoint
        PoleAtPoint: If the path touches a singularity
        QuadratureFailure: If the tolerance is not reached
    """
    if abs(path.start - data.basepoint) > CLOSURE_TOLERANCE * max(1.0, abs(data.basepoint)):
        raise InvalidWeierstrassData(
            "Immersion paths must start at the basepoint",
            {"start": path.start, "basepoint": data.basepoint},
        )
    return path_integral(data, path, tol, max_depth).real


def _loop_integral(
    data: WeierstrassData, loop: PathC, tol: float, max_depth: int
) -> npt.NDArray[np.complex128]:
    gap = abs(loop.end - loop.start)
    if gap > CLOSURE_TOLERANCE:
        raise OpenPath("Loop is not closed", {"gap": gap})
    return path_integral(data, loop, tol, max_depth)


def period(
    data: WeierstrassData,
    loop: PathC,
    tol: float = DEFAULT_TOLERANCE,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> Vec3R:
    """Real part of the loop integral; zero exactly when the loop closes up."""
    return _loop_integral(data, loop, tol, max_depth).real


def flux(
    data: WeierstrassData,
    loop: PathC,
    tol: float = DEFAULT_TOLERANCE,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> Vec3R:
    """
    Weight vector of ``loop``: imaginary part of the loop integral.

    Counterclockwise loops give the sign convention used across the package.
    """
    return _loop_integral(data, loop, tol, max_depth).imag


def conjugate(data: WeierstrassData) -> WeierstrassData:
    """Replace ``eta`` by ``i * eta``; everything else is kept."""
    return WeierstrassData(
        g=data.g,
        eta=HoloForm(data.eta.coefficient.scaled(1j)),
        punctures=data.punctures,
        basepoint=data.basepoint,
        name=f"conjugate({data.name})" if data.name else "",
    )


def gauss_normal(data: WeierstrassData, z: complex) -> Vec3R:
    """
    Inverse stereographic projection of ``g(z)``.

    ``g = 0`` maps to (0, 0, -1) and ``g = infinity`` to (0, 0, 1).
    """
    denominator = complex(data.g.denominator_at(z))
    numerator = complex(data.g.numerator_at(z))
    if denominator == 0 or abs(numerator) > 1e150 * abs(denominator):
        return np.array([0.0, 0.0, 1.0])
    g = numerator / denominator
    modulus = abs(g) ** 2
    if modulus > 1e30:
        return np.array([0.0, 0.0, 1.0])
    normal = np.array([2 * g.real, 2 * g.imag, modulus - 1.0]) / (modulus + 1.0)
    return normal / np.linalg.norm(normal)


def gauss_degree(data: WeierstrassData) -> int:
    """
    Degree of the Gauss map as a rational function.

    Raises:
        ConstantGauss: If g is constant
    """
    if data.g.is_constant:
        raise ConstantGauss("Gauss map is constant", {"g": data.g})
    return data.g.degree


def puncture_fluxes(
    data: WeierstrassData, radius: float = 1e-2, tol: float = DEFAULT_TOLERANCE
) -> list[Vec3R]:
    """Flux over a small counterclockwise circle around every puncture."""
    fluxes = [flux(data, Circle(p, radius), tol) for p in data.punctures]
    logger.debug("Puncture fluxes of %s: %s", data.name or "data", fluxes)
    return fluxes
