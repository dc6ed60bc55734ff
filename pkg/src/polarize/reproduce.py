"""Closed-form reference values and their recomputation.

Each row pairs a value known in closed form (radicals) with the same quantity
computed through the library, plus the tolerance the two must agree to.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .csb import (
    HALF_SQRT2,
    b_star,
    d_equality_locus,
    g_diagonal_minimum,
    inequality_D,
    r_function,
)
from .norms import PNorm
from .product import polarization_product

R3, R7, R15, R21, R45 = (math.sqrt(k) for k in (3, 7, 15, 21, 45))

#: Two unit vectors of (C^2, sup-norm) whose product is not phase-homogeneous.
SUP_X = np.array([1 + 1j * R15, 2 + 2j]) / 4
SUP_Y = np.array([2 + 1j, 3 + 1j * R7]) / 4
#: e^{i phi} with phi = pi/3.
SIXTH_ROOT = (1 + 1j * R3) / 2

SUP_PRODUCT = complex(19 + 4 * R7 + 2 * R15, 7 - 4 * R7 + 4 * R15) / 64
ROTATED_P = 11 + 2 * (R7 + R21 - R45) - 5 * R3 + R15
ROTATED_Q = 8 + 2 * (4 * R3 - R7 + R15 + R21) + R45
ROTATED_PRODUCT = complex(ROTATED_P, ROTATED_Q) / 64
ROTATED_X = np.array([1 - R45 + 1j * (R3 + R15), 2 - 2 * R3 + 1j * (2 + 2 * R3)]) / 8


@dataclass(frozen=True)
class Row:
    name: str
    reference: complex | float
    computed: complex | float
    tol: float
    kind: str = "abs_error"

    @property
    def error(self) -> float:
        return abs(self.computed - self.reference)

    @property
    def passed(self) -> bool:
        if self.kind == "greater_than":
            return float(self.computed) > float(self.reference)
        return self.error <= self.tol

    def to_json(self) -> dict[str, Any]:
        def enc(z: complex | float) -> Any:
            return [z.real, z.imag] if isinstance(z, complex) else float(z)

        return {"name": self.name, "reference": enc(self.reference), "computed": enc(self.computed),
                "error": self.error, "tol": self.tol, "kind": self.kind, "passed": self.passed}


def sup_norm_example() -> dict[str, complex | float]:
    """The sup-norm example recomputed through :func:`polarization_product`."""
    sup = PNorm(math.inf, 2)
    plain = polarization_product(sup, SUP_X, SUP_Y).value
    rotated = polarization_product(sup, SIXTH_ROOT * SUP_X, SUP_Y).value
    return {
        "product": plain,
        "rotated_outside": SIXTH_ROOT * plain,
        "rotated_inside": rotated,
        "modulus_gap": abs(rotated) - abs(plain),
        "ratio": polarization_product(sup, SUP_X, SUP_Y).ratio,
    }


def reproduce_rows(tol: float = 1e-12) -> list[Row]:
    ex = sup_norm_example()
    rows = [
        Row("<x|y> sup-norm example", SUP_PRODUCT, ex["product"], tol),
        Row("e^{i phi} <x|y> (3-decimal reference)", complex(0.130, 0.598), ex["rotated_outside"], 1e-3),
        Row("e^{i phi} x in radicals", 0.0, float(np.max(np.abs(SIXTH_ROOT * SUP_X - ROTATED_X))), tol),
        Row("<e^{i phi} x|y> = (p + iq)/64", ROTATED_PRODUCT, ex["rotated_inside"], tol),
        Row("<e^{i phi} x|y> (3-decimal reference)", complex(0.113, 0.628), ex["rotated_inside"], 1e-3),
        Row("|<e^{i phi} x|y>| - |<x|y>| exceeds 0.02", 0.02, ex["modulus_gap"], 0.0, kind="greater_than"),
    ]

    b1 = b_star(1.0)
    rows.append(Row("b_star(1) = (3 - sqrt 3)/6", (3 - R3) / 6, b1, tol))
    rows.append(Row("r_function(b_star(1), 1)^2 = 2 + sqrt 3", 2 + R3, r_function(b1, 1.0) ** 2, tol))

    gm = g_diagonal_minimum()
    rows.append(Row("M = sqrt(2 + sqrt 3) = (sqrt 2 + sqrt 6)/2", (math.sqrt(2) + math.sqrt(6)) / 2, gm.value, tol))
    rows.append(Row("M numeric diagonal minimum", gm.value, gm.numeric_value, 1e-8))
    rows.append(Row("diagonal minimum location numeric", gm.location, gm.numeric_location, 1e-8))
    rows.append(Row("M approx 1.932", 1.932, gm.value, 5e-4))

    t_eq = d_equality_locus(1.0)
    lhs, rhs = inequality_D(t_eq, 1.0)
    rows.append(Row("inequality D tight at w = 1, t = sqrt2/(sqrt3 - 1)", rhs, lhs, 1e-9))
    for w in (0.5, 1.0, 2.0, 5.0):
        lhs, rhs = inequality_D(HALF_SQRT2, w)
        rows.append(Row(f"inequality D gap at t = sqrt2/2, w = {w:g}", 1.0, rhs - lhs, 1e-9))
    return rows
