"""Dimensions of spaces of modular forms from the signature of a modular curve."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError


@dataclass(frozen=True)
class CurveData:
    """Genus, elliptic points of period 2 and 3, and cusps of ``H / Gamma``."""

    genus: int
    eps2: int
    eps3: int
    eps_inf: int

    def __post_init__(self):
        if min(self.genus, self.eps2, self.eps3, self.eps_inf) < 0:
            raise ParameterError("curve data must be nonnegative")


GAMMA1_2 = CurveData(0, 1, 0, 2)
SL2Z = CurveData(0, 1, 1, 1)


def _check_weight(k: int):
    if k < 2 or k % 2:
        raise ParameterError(f"weight must be even and at least 2, got {k}")


def cusp_dim(data: CurveData, k: int) -> int:
    _check_weight(k)
    if k == 2:
        return data.genus
    return ((k - 1) * (data.genus - 1) + (k // 4) * data.eps2 + (k // 3) * data.eps3
            + (k // 2 - 1) * data.eps_inf)


def eisenstein_dim(data: CurveData, k: int) -> int:
    _check_weight(k)
    return data.eps_inf if k >= 4 else max(data.eps_inf - 1, 0)


def cusp_dim_gamma12(k: int) -> int:
    _check_weight(k)
    return k // 4 - 1 if k >= 8 else 0


def eichler_shimura_dim(k: int, data: CurveData = GAMMA1_2) -> int:
    """Dimension of the first cohomology with coefficients in ``Sym^(k-2)``.

    Zero for odd ``k``; for even ``k`` it is two copies of the cusp forms plus
    the Eisenstein series.
    """
    if k < 2:
        raise ParameterError(f"weight must be at least 2, got {k}")
    if k % 2:
        return 0
    return 2 * cusp_dim(data, k) + eisenstein_dim(data, k)


def first_nonzero_cusp_weight(data: CurveData, limit: int = 200) -> int:
    for k in range(2, limit + 1, 2):
        if cusp_dim(data, k) > 0:
            return k
    raise ParameterError(f"no nonzero cusp forms of weight <= {limit}")
