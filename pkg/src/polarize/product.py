"""The polarization-formula product on an arbitrary complex normed space.

For non-zero ``x, y`` with unit directions ``xh = x/||x||`` and ``yh = y/||y||``::

    <x|y> = ||x|| ||y|| / 4 * [ ||xh+yh||^2 - ||xh-yh||^2
                                + i (||xh + i yh||^2 - ||xh - i yh||^2) ]

and ``<x|y> = 0`` when either vector is zero. For norms coming from a
Hermitian form the product is that form, linear in the first slot. For
general norms it is conjugate-symmetric and homogeneous for real and purely
imaginary scalars, but not for arbitrary phases.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Any, NamedTuple

import numpy as np

from .errors import ContractViolation
from .norms import NormDescriptor, as_cvector

#: Vectors whose norm falls below this are treated as the zero vector.
ZERO_NORM = 1e-300
#: Relative tolerance of the algebraic identity checks.
PROPERTY_TOL = 1e-9
SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class ProductValue:
    value: complex
    norm_x: float
    norm_y: float

    @property
    def ratio(self) -> float:
        """``|<x|y>| / (||x|| ||y||)``; 0 when either vector is zero."""
        denom = self.norm_x * self.norm_y
        return abs(self.value) / denom if denom > 0 else 0.0

    def to_json(self) -> dict[str, Any]:
        return {
            "value": [self.value.real, self.value.imag],
            "norm_x": self.norm_x,
            "norm_y": self.norm_y,
            "ratio": self.ratio,
        }


def unit_product(d: NormDescriptor, xh: np.ndarray, yh: np.ndarray) -> np.ndarray:
    """Bracket term of the product for (batches of) unit vectors.

    No validation and no normalization: callers pass ``(..., n)`` arrays whose
    rows already have norm one.
    """
    plus = d.evaluate(xh + yh)
    minus = d.evaluate(xh - yh)
    iplus = d.evaluate(xh + 1j * yh)
    iminus = d.evaluate(xh - 1j * yh)
    return 0.25 * ((plus * plus - minus * minus) + 1j * (iplus * iplus - iminus * iminus))


def _product(d: NormDescriptor, x: np.ndarray, y: np.ndarray) -> ProductValue:
    nx = float(d.evaluate(x))
    ny = float(d.evaluate(y))
    if nx < ZERO_NORM or ny < ZERO_NORM:
        return ProductValue(0j, nx, ny)
    bracket = complex(unit_product(d, x / nx, y / ny))
    return ProductValue(nx * ny * bracket, nx, ny)


def _prepare(d: NormDescriptor, *vectors: Any) -> list[np.ndarray]:
    d.check()
    return [as_cvector(v, d.dim) for v in vectors]


def _ensure_same_dim(x: np.ndarray, y: np.ndarray) -> None:
    if x.shape != y.shape:
        raise ContractViolation(f"dimension mismatch: {x.size} vs {y.size}")


def polarization_product(d: NormDescriptor, x: Any, y: Any) -> ProductValue:
    """Evaluate ``<x|y>`` under the norm ``d``.

    Raises:
        ContractViolation: dimensions disagree or inputs are not finite.
        DescriptorInvalid: ``d`` does not describe a norm.
    """
    xv, yv = _prepare(d, x, y)
    _ensure_same_dim(xv, yv)
    return _product(d, xv, yv)


@dataclass(frozen=True)
class PropertyReport:
    """Residual per identity, the scale each one is judged against, and the verdict.

    A residual passes when it is ``<= tol * scale``.
    """

    residuals: dict[str, float]
    scales: dict[str, float]
    tol: float = PROPERTY_TOL

    def passed_for(self, name: str) -> bool:
        return self.residuals[name] <= self.tol * self.scales[name]

    @property
    def failures(self) -> list[str]:
        return [k for k in self.residuals if not self.passed_for(k)]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "tol": self.tol,
            "checks": [
                {"name": k, "residual": self.residuals[k], "scale": self.scales[k],
                 "passed": self.passed_for(k)}
                for k in self.residuals
            ],
        }


def check_algebraic_properties(d: NormDescriptor, x: Any, y: Any, r: float) -> PropertyReport:
    """Residuals of conjugate symmetry, positivity, real and imaginary homogeneity, and ``||x|| = sqrt<x|x>``."""
    if not math.isfinite(r):
        raise ContractViolation("r must be finite")
    xv, yv = _prepare(d, x, y)
    _ensure_same_dim(xv, yv)

    def p(a: np.ndarray, b: np.ndarray) -> complex:
        return _product(d, a, b).value

    base = _product(d, xv, yv)
    xy = base.value
    nx, ny = base.norm_x, base.norm_y
    xx = p(xv, xv)

    res: dict[str, float] = {}
    res["conjugate_symmetry"] = abs(xy - p(yv, xv).conjugate())

    positivity = max(abs(xx.imag), max(0.0, -xx.real))
    if nx >= ZERO_NORM and not xx.real > 0:
        positivity = math.inf
    res["positive_definiteness"] = positivity

    rxy = r * xy
    res["real_homogeneity"] = max(abs(p(r * xv, yv) - rxy), abs(p(xv, r * yv) - rxy))
    rixy = 1j * r * xy
    res["imaginary_homogeneity"] = max(abs(p(1j * r * xv, yv) - rixy), abs(p(xv, -1j * r * yv) - rixy))
    res["norm_from_product"] = abs(nx - math.sqrt(max(xx.real, 0.0)))

    pair = (1.0 + abs(r)) * nx * ny
    scales = {
        "conjugate_symmetry": nx * ny,
        "positive_definiteness": nx * nx,
        "real_homogeneity": pair,
        "imaginary_homogeneity": pair,
        "norm_from_product": nx,
    }
    return PropertyReport(res, scales)


class UnitSquareMargins(NamedTuple):
    """``(max(|Re|, |Im|) - 1, |<x|y>| - sqrt 2)``; both should be <= 0."""

    box: float
    disc: float

    @property
    def passed(self) -> bool:
        return self.box <= PROPERTY_TOL and self.disc <= PROPERTY_TOL


def check_unit_square_bound(d: NormDescriptor, x: Any, y: Any) -> UnitSquareMargins:
    xv, yv = _prepare(d, x, y)
    _ensure_same_dim(xv, yv)
    for name, v in (("x", xv), ("y", yv)):
        if abs(float(d.evaluate(v)) - 1.0) > 1e-12:
            raise ContractViolation(f"{name} must be a unit vector")
    z = _product(d, xv, yv).value
    return UnitSquareMargins(max(abs(z.real), abs(z.imag)) - 1.0, abs(z) - SQRT2)


def check_phase_identities(d: NormDescriptor, x: Any, y: Any, phi: float) -> PropertyReport:
    """Residuals of the phase identities that hold for every norm.

    ``<e^{i phi} x | x> = e^{i phi} <x|x>``, ``<e^{i phi} x | e^{i phi} y> = <x|y>``, and
    the quarter-turn cases ``-x``, ``i x``, ``-i x`` in the first slot.
    """
    xv, yv = _prepare(d, x, y)
    _ensure_same_dim(xv, yv)
    u = cmath.exp(1j * phi)

    def p(a: np.ndarray, b: np.ndarray) -> complex:
        return _product(d, a, b).value

    base = _product(d, xv, yv)
    xy, nx, ny = base.value, base.norm_x, base.norm_y
    xx = p(xv, xv)
    res = {
        "self_phase": abs(p(u * xv, xv) - u * xx),
        "joint_phase": abs(p(u * xv, u * yv) - xy),
        "negate": abs(p(-xv, yv) + xy),
        "times_i": abs(p(1j * xv, yv) - 1j * xy),
        "times_minus_i": abs(p(-1j * xv, yv) + 1j * xy),
    }
    pair = nx * ny
    scales = {"self_phase": nx * nx, "joint_phase": pair, "negate": pair,
              "times_i": pair, "times_minus_i": pair}
    return PropertyReport(res, scales)


def phase_homogeneity_defect_at(d: NormDescriptor, x: Any, y: Any, phi: float) -> float:
    """``|<e^{i phi} x | y> - e^{i phi} <x|y>|``; zero for inner-product norms."""
    xv, yv = _prepare(d, x, y)
    _ensure_same_dim(xv, yv)
    u = cmath.exp(1j * phi)
    return abs(_product(d, u * xv, yv).value - u * _product(d, xv, yv).value)
