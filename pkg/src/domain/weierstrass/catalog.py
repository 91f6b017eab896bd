"""
Reference Weierstrass data.

The Jorge-Meeks entry is a reference family used to exercise the module's
invariants (null identity, balancing, dihedral flux pattern); it is not a
construction source for the contour pipelines.
"""
from collections.abc import Callable

import numpy as np

from src.domain.shared.exceptions import InvalidParams
from src.domain.weierstrass.entities import HoloForm, RationalMap, WeierstrassData


def catenoid(weight: float = 2 * np.pi) -> WeierstrassData:
    """
    Vertical catenoid ``g = 1/z``, ``eta = (w / 4 pi) dz``.

    The neck radius is ``w / 2 pi``; the basepoint z = 1 lies on the neck.
    """
    return WeierstrassData(
        g=RationalMap.power(-1),
        eta=HoloForm(RationalMap.constant(weight / (4 * np.pi))),
        punctures=(0j,),
        basepoint=1 + 0j,
        name=f"catenoid(w={weight:g})",
    )


def helicoid(weight: float = 2 * np.pi) -> WeierstrassData:
    """Conjugate of :func:`catenoid`, ``eta = i (w / 4 pi) dz``."""
    return WeierstrassData(
        g=RationalMap.power(-1),
        eta=HoloForm(RationalMap.constant(1j * weight / (4 * np.pi))),
        punctures=(0j,),
        basepoint=1 + 0j,
        name=f"helicoid(w={weight:g})",
    )


def jorge_meeks(n: int) -> WeierstrassData:
    """
    Jorge-Meeks n-oid ``g = z^(n-1)``, ``eta = dz / (z^n - 1)^2``.

    Raises:
        InvalidParams: If n < 2
    """
    if n < 2:
        raise InvalidParams("Jorge-Meeks data need n >= 2", {"n": n})
    unity = np.zeros(n + 1, dtype=np.complex128)
    unity[0], unity[-1] = 1.0, -1.0
    return WeierstrassData(
        g=RationalMap.power(n - 1),
        eta=HoloForm(RationalMap((1 + 0j,), tuple(np.polymul(unity, unity)))),
        punctures=tuple(np.exp(2j * np.pi * k / n) for k in range(n)),
        basepoint=0j,
        name=f"jorge_meeks(n={n})",
    )


def enneper() -> WeierstrassData:
    """Enneper surface ``g = z``, ``eta = dz``; no punctures."""
    return WeierstrassData(
        g=RationalMap.power(1),
        eta=HoloForm(RationalMap.constant(1.0)),
        name="enneper",
    )


CATALOG: dict[str, Callable[[], WeierstrassData]] = {
    "catenoid": catenoid,
    "helicoid": helicoid,
    "enneper": enneper,
    "jorge_meeks_2": lambda: jorge_meeks(2),
    "jorge_meeks_3": lambda: jorge_meeks(3),
    "jorge_meeks_4": lambda: jorge_meeks(4),
}
