"""
Weierstrass data entities.

Rational maps are stored as coefficient tuples, highest degree first, in the
convention of ``numpy.polyval``. Integration paths are small immutable
dataclasses that know how to parametrize themselves over ``[0, 1]``.
"""
from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass, field
from typing import TypeAlias

import numpy as np
import numpy.typing as npt

from src.domain.shared.exceptions import InvalidWeierstrassData

# Distance at which a point counts as sitting on a pole or puncture.
POLE_DISTANCE = 1e-9
# Common-root tolerance for the coprimality check.
COMMON_ROOT_TOLERANCE = 1e-12
# Relative remainder below which a puncture divides the eta denominator.
PUNCTURE_RESIDUE = 1e-9

ComplexArray: TypeAlias = npt.NDArray[np.complex128]


def _trim(coefficients: tuple[complex, ...]) -> tuple[complex, ...]:
    values = [complex(c) for c in coefficients]
    while len(values) > 1 and values[0] == 0:
        values.pop(0)
    return tuple(values) if values else (0j,)


@dataclass(frozen=True)
class RationalMap:
    """
    Quotient of two complex polynomials.

    Args:
        numerator: Coefficients, highest degree first
        denominator: Coefficients, highest degree first

    Raises:
        InvalidWeierstrassData: If the denominator vanishes identically or the
            two polynomials share a root
    """

    numerator: tuple[complex, ...]
    denominator: tuple[complex, ...] = (1 + 0j,)

    def __post_init__(self) -> None:
        object.__setattr__(self, "numerator", _trim(tuple(self.numerator)))
        object.__setattr__(self, "denominator", _trim(tuple(self.denominator)))
        if all(c == 0 for c in self.denominator):
            raise InvalidWeierstrassData("Denominator is identically zero")
        if self.is_zero:
            return
        zeros, poles = self.zeros(), self.poles()
        if zeros.size and poles.size:
            gaps = np.abs(zeros[:, None] - poles[None, :])
            if float(gaps.min()) <= COMMON_ROOT_TOLERANCE:
                raise InvalidWeierstrassData(
                    "Numerator and denominator share a root",
                    {"numerator": self.numerator, "denominator": self.denominator},
                )

    @classmethod
    def constant(cls, value: complex) -> RationalMap:
        """Create the constant map ``value``."""
        return cls((complex(value),))

    @classmethod
    def power(cls, k: int, scale: complex = 1.0) -> RationalMap:
        """Create ``scale * z**k`` for any integer ``k``."""
        monomial = (1 + 0j,) + (0j,) * abs(k)
        if k >= 0:
            return cls(tuple(scale * c for c in monomial))
        return cls((complex(scale),), monomial)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.numerator)

    @property
    def degree(self) -> int:
        """Rational degree, the larger of the two polynomial degrees."""
        return max(len(self.numerator), len(self.denominator)) - 1

    @property
    def is_constant(self) -> bool:
        return self.is_zero or self.degree == 0

    def zeros(self) -> ComplexArray:
        if len(self.numerator) < 2:
            return np.empty(0, dtype=np.complex128)
        return np.roots(np.asarray(self.numerator, dtype=np.complex128))

    def poles(self) -> ComplexArray:
        """Finite poles, found as eigenvalues of the companion matrix."""
        if len(self.denominator) < 2:
            return np.empty(0, dtype=np.complex128)
        return np.roots(np.asarray(self.denominator, dtype=np.complex128))

    def numerator_at(self, z: complex | ComplexArray) -> complex | ComplexArray:
        return np.polyval(np.asarray(self.numerator), z)

    def denominator_at(self, z: complex | ComplexArray) -> complex | ComplexArray:
        return np.polyval(np.asarray(self.denominator), z)

    def __call__(self, z: complex | ComplexArray) -> complex | ComplexArray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.numerator_at(z) / self.denominator_at(z)

    def scaled(self, factor: complex) -> RationalMap:
        return RationalMap(tuple(factor * c for c in self.numerator), self.denominator)


@dataclass(frozen=True)
class HoloForm:
    """The 1-form ``coefficient(z) dz``."""

    coefficient: RationalMap

    def __call__(self, z: complex | ComplexArray) -> complex | ComplexArray:
        return self.coefficient(z)

    def scaled(self, factor: complex) -> HoloForm:
        return HoloForm(self.coefficient.scaled(factor))


@dataclass(frozen=True)
class WeierstrassData:
    """
    Weierstrass data ``{g, eta}`` on the punctured plane.

    Args:
        g: Stereographic projection of the Gauss map
        eta: Holomorphic 1-form
        punctures: Removed points, one per end
        basepoint: Start of every immersion path
    """

    g: RationalMap
    eta: HoloForm
    punctures: tuple[complex, ...] = ()
    basepoint: complex = 0j
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "punctures", tuple(complex(p) for p in self.punctures))
        object.__setattr__(self, "basepoint", complex(self.basepoint))
        stray = self.stray_poles()
        if stray.size:
            raise InvalidWeierstrassData(
                "eta has a pole off the punctures",
                {"poles": stray.tolist(), "punctures": self.punctures},
            )
        if self.distance_to_singularities(self.basepoint) <= POLE_DISTANCE:
            raise InvalidWeierstrassData(
                "Basepoint sits on a puncture or pole", {"basepoint": self.basepoint}
            )
        g0, h0 = self.g(self.basepoint), self.eta(self.basepoint)
        metric = (1 + abs(g0) ** 2) * abs(h0)
        if not np.isfinite(metric) or metric == 0:
            raise InvalidWeierstrassData(
                "Metric degenerates at the basepoint", {"basepoint": self.basepoint}
            )

    def stray_poles(self) -> ComplexArray:
        """Poles of the eta coefficient left after dividing out every puncture."""
        remaining = np.asarray(self.eta.coefficient.denominator, dtype=np.complex128)
        for puncture in self.punctures:
            while len(remaining) > 1:
                quotient, remainder = np.polydiv(remaining, np.array([1.0, -puncture]))
                if np.abs(remainder).max() > PUNCTURE_RESIDUE * np.abs(remaining).max():
                    break
                remaining = quotient
        if len(remaining) < 2:
            return np.empty(0, dtype=np.complex128)
        return np.roots(remaining)

    def singularities(self) -> ComplexArray:
        """Punctures together with the poles of g and of the eta coefficient."""
        return np.concatenate(
            [
                np.asarray(self.punctures, dtype=np.complex128),
                self.g.poles(),
                self.eta.coefficient.poles(),
            ]
        )

    def distance_to_singularities(self, z: complex) -> float:
        points = self.singularities()
        if points.size == 0:
            return float("inf")
        return float(np.min(np.abs(points - z)))


# =============================================================================
# Integration paths
# =============================================================================


@dataclass(frozen=True)
class LineSegment:
    """Straight path from ``a`` to ``b``."""

    a: complex
    b: complex

    @property
    def start(self) -> complex:
        return complex(self.a)

    @property
    def end(self) -> complex:
        return complex(self.b)

    @property
    def length(self) -> float:
        return abs(self.b - self.a)

    def pieces(self) -> Iterator[LineSegment]:
        yield self

    def point(self, tau: npt.NDArray[np.float64]) -> ComplexArray:
        return self.a + (self.b - self.a) * tau

    def velocity(self, tau: npt.NDArray[np.float64]) -> ComplexArray:
        return np.full(tau.shape, self.b - self.a, dtype=np.complex128)

    def distance_to(self, z: complex) -> float:
        direction = self.b - self.a
        if direction == 0:
            return abs(z - self.a)
        tau = ((z - self.a) * direction.conjugate()).real / abs(direction) ** 2
        tau = min(max(tau, 0.0), 1.0)
        return abs(z - (self.a + tau * direction))

    def reversed(self) -> LineSegment:
        return LineSegment(self.b, self.a)


@dataclass(frozen=True)
class Polyline:
    """Chain of straight segments through ``points``."""

    points: tuple[complex, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(complex(p) for p in self.points))
        if len(self.points) < 2:
            raise InvalidWeierstrassData("A polyline needs at least two points")

    @property
    def start(self) -> complex:
        return self.points[0]

    @property
    def end(self) -> complex:
        return self.points[-1]

    @property
    def length(self) -> float:
        return sum(piece.length for piece in self.pieces())

    def pieces(self) -> Iterator[LineSegment]:
        for a, b in zip(self.points[:-1], self.points[1:]):
            yield LineSegment(a, b)

    def distance_to(self, z: complex) -> float:
        return min(piece.distance_to(z) for piece in self.pieces())

    def reversed(self) -> Polyline:
        return Polyline(self.points[::-1])


@dataclass(frozen=True)
class Circle:
    """
    Full circle ``center + radius * exp(i(phase + orientation * 2 pi tau))``.

    ``orientation`` is +1 for counterclockwise loops and -1 for clockwise ones.
    """

    center: complex
    radius: float
    orientation: int = 1
    phase: float = 0.0

    def __post_init__(self) -> None:
        if self.radius <= 0:
            raise InvalidWeierstrassData("Circle radius must be positive")
        if self.orientation not in (1, -1):
            raise InvalidWeierstrassData("Circle orientation must be +1 or -1")

    @property
    def start(self) -> complex:
        return complex(self.center + self.radius * np.exp(1j * self.phase))

    @property
    def end(self) -> complex:
        return self.start

    @property
    def length(self) -> float:
        return 2 * np.pi * self.radius

    def pieces(self) -> Iterator[Circle]:
        yield self

    def point(self, tau: npt.NDArray[np.float64]) -> ComplexArray:
        angle = self.phase + self.orientation * 2 * np.pi * tau
        return self.center + self.radius * np.exp(1j * angle)

    def velocity(self, tau: npt.NDArray[np.float64]) -> ComplexArray:
        angle = self.phase + self.orientation * 2 * np.pi * tau
        return 2j * np.pi * self.orientation * self.radius * np.exp(1j * angle)

    def distance_to(self, z: complex) -> float:
        return abs(abs(z - self.center) - self.radius)

    def reversed(self) -> Circle:
        return Circle(self.center, self.radius, -self.orientation, self.phase)


PathC: TypeAlias = LineSegment | Polyline | Circle
