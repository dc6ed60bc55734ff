"""Complex vectors, a closed family of norm descriptors, and norm sampling.

A descriptor is an immutable value describing a norm on C^n. Every descriptor
can be evaluated on a batch of vectors (``evaluate`` works over the leading
axes of an ``(..., n)`` array) and serialized to JSON and back bit-exactly.

Variants::

    pnorm           (sum |x_k|^p)^(1/p), p in [1, inf]
    weighted_pnorm  p-norm of (w_k x_k)
    hermitian       sqrt(x^H A x), A Hermitian positive definite
    dual_max        max_k |f_k^H x| over spanning functionals f_k
    mixture         sum_i c_i ||x||_i
    max_of          max_i ||x||_i
    induced_c2      ||alpha a + beta b||_base on C^2
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, ClassVar, Sequence

import numpy as np

from .errors import ContractViolation, DescriptorInvalid
from .rng import complex_normal, stream

#: Relative tolerance used by :func:`validate_norm`.
AXIOM_TOL = 1e-9

FAMILIES = (
    "pnorm",
    "weighted_pnorm",
    "hermitian",
    "dual_max",
    "mixture",
    "max_of",
    "induced_c2",
)


def as_cvector(x: Any, dim: int | None = None) -> np.ndarray:
    """Coerce ``x`` into a finite 1-D complex128 array.

    ``x`` may be a sequence of complex numbers, of ``[re, im]`` pairs, or an
    ndarray. Raises :class:`ContractViolation` on shape or finiteness problems.
    """
    arr = np.asarray(x)
    if arr.dtype == object:
        raise ContractViolation("vector components must be numeric")
    if arr.ndim == 2 and arr.shape[1] == 2 and not np.iscomplexobj(arr):
        arr = arr[:, 0] + 1j * arr[:, 1]
    arr = np.asarray(arr, dtype=np.complex128)
    if arr.ndim != 1 or arr.size < 1:
        raise ContractViolation(f"expected a non-empty 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ContractViolation("vector has non-finite components")
    if dim is not None and arr.size != dim:
        raise ContractViolation(f"dimension mismatch: vector has {arr.size}, norm expects {dim}")
    return arr


def _rel_gap(a: np.ndarray, b: np.ndarray) -> float:
    denom = max(float(np.max(np.abs(a))), float(np.max(np.abs(b))), 1e-300)
    return float(np.max(np.abs(a - b))) / denom


def _pnorm_of_abs(absx: np.ndarray, p: float) -> np.ndarray:
    if p == math.inf:
        return absx.max(axis=-1)
    if p == 1.0:
        return absx.sum(axis=-1)
    # scale by the largest modulus so large p neither overflows nor underflows
    m = absx.max(axis=-1, keepdims=True)
    safe = np.where(m > 0, m, 1.0)
    return m[..., 0] * np.sum((absx / safe) ** p, axis=-1) ** (1.0 / p)


def _check_p(p: float) -> list[str]:
    if not isinstance(p, (int, float)) or math.isnan(p) or p < 1:
        return [f"p must be a real number in [1, inf], got {p!r}"]
    return []


class NormDescriptor:
    """Common interface of every norm variant."""

    kind: ClassVar[str]

    @property
    def dim(self) -> int | None:
        """Dimension the norm acts on, or None if it accepts any dimension."""
        raise NotImplementedError

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """Evaluate on an ``(..., n)`` complex array. No validation is done."""
        raise NotImplementedError

    def _problems(self) -> list[str]:
        raise NotImplementedError

    @cached_property
    def problems(self) -> tuple[str, ...]:
        """Reasons the parameters fail to define a norm (empty when valid)."""
        try:
            return tuple(self._problems())
        except (ValueError, TypeError, np.linalg.LinAlgError) as exc:
            return (f"{type(exc).__name__}: {exc}",)

    @property
    def is_valid(self) -> bool:
        return not self.problems

    def check(self) -> None:
        if self.problems:
            raise DescriptorInvalid(f"{self.kind}: " + "; ".join(self.problems))

    def to_json(self) -> dict[str, Any]:
        raise NotImplementedError

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _enc_c(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _dec_c(v: Any) -> complex:
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)):
        return complex(float(v), 0.0)
    raise DescriptorInvalid(f"cannot decode complex scalar from {v!r}")


def _enc_p(p: float) -> float | str:
    return "inf" if p == math.inf else float(p)


def _dec_p(v: Any) -> float:
    if isinstance(v, str):
        if v.lower() in ("inf", "infinity"):
            return math.inf
        raise DescriptorInvalid(f"bad p value {v!r}")
    return float(v)


def _ctuple(values: Any) -> tuple[complex, ...]:
    return tuple(complex(z) for z in np.asarray(values, dtype=np.complex128).ravel())


@dataclass(frozen=True)
class PNorm(NormDescriptor):
    p: float
    n: int | None = None

    kind: ClassVar[str] = "pnorm"

    @property
    def dim(self) -> int | None:
        return self.n

    def _problems(self) -> list[str]:
        out = _check_p(self.p)
        if self.n is not None and self.n < 1:
            out.append("dim must be >= 1")
        return out

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        return _pnorm_of_abs(np.abs(x), self.p)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind, "p": _enc_p(self.p)}
        if self.n is not None:
            out["dim"] = self.n
        return out


@dataclass(frozen=True)
class WeightedPNorm(NormDescriptor):
    p: float
    weights: tuple[float, ...]

    kind: ClassVar[str] = "weighted_pnorm"

    @property
    def dim(self) -> int:
        return len(self.weights)

    @cached_property
    def _w(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)

    def _problems(self) -> list[str]:
        out = _check_p(self.p)
        if not self.weights:
            out.append("weights must be non-empty")
        elif not all(math.isfinite(w) and w > 0 for w in self.weights):
            out.append("weights must be finite and > 0")
        return out

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        return _pnorm_of_abs(self._w * np.abs(x), self.p)

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "p": _enc_p(self.p), "weights": [float(w) for w in self.weights]}


@dataclass(frozen=True)
class HermitianQuadratic(NormDescriptor):
    """``sqrt(x^H A x)``; ``matrix`` is stored row-major as a flat tuple."""

    matrix: tuple[complex, ...]
    n: int

    kind: ClassVar[str] = "hermitian"

    @classmethod
    def from_matrix(cls, a: Any) -> "HermitianQuadratic":
        arr = np.asarray(a, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DescriptorInvalid(f"hermitian matrix must be square, got shape {arr.shape}")
        return cls(_ctuple(arr), arr.shape[0])

    @property
    def dim(self) -> int:
        return self.n

    @cached_property
    def A(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=np.complex128).reshape(self.n, self.n)

    def _problems(self) -> list[str]:
        if len(self.matrix) != self.n * self.n or self.n < 1:
            return ["matrix size does not match dim"]
        a = self.A
        if not np.all(np.isfinite(a)):
            return ["matrix has non-finite entries"]
        if _rel_gap(a, a.conj().T) > 1e-12:
            return ["matrix is not Hermitian"]
        eig = np.linalg.eigvalsh(a)
        if not eig[0] > 1e-12 * max(abs(eig[-1]), 1e-300):
            return [f"matrix is not positive definite (smallest eigenvalue {eig[0]:.3e})"]
        return []

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        quad = np.einsum("...i,...i->...", x.conj(), x @ self.A.T).real
        return np.sqrt(np.maximum(quad, 0.0))

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "matrix": [[_enc_c(z) for z in row] for row in self.A]}


@dataclass(frozen=True)
class DualMax(NormDescriptor):
    """``max_k |<f_k, x>|`` with the Hermitian pairing ``f^H x``."""

    functionals: tuple[tuple[complex, ...], ...]

    kind: ClassVar[str] = "dual_max"

    @classmethod
    def from_rows(cls, rows: Any) -> "DualMax":
        arr = np.asarray(rows, dtype=np.complex128)
        if arr.ndim != 2:
            raise DescriptorInvalid("functionals must form a 2-D array")
        return cls(tuple(_ctuple(r) for r in arr))

    @property
    def dim(self) -> int:
        return len(self.functionals[0]) if self.functionals else 0

    @cached_property
    def F(self) -> np.ndarray:
        return np.asarray(self.functionals, dtype=np.complex128)

    def _problems(self) -> list[str]:
        if not self.functionals or len({len(f) for f in self.functionals}) != 1 or self.dim < 1:
            return ["functionals must be a non-empty list of equal-length vectors"]
        f = self.F
        if not np.all(np.isfinite(f)):
            return ["functionals have non-finite entries"]
        if f.shape[0] < f.shape[1]:
            return [f"{f.shape[0]} functionals cannot span C^{f.shape[1]}"]
        sv = np.linalg.svd(f, compute_uv=False)
        if not sv[-1] > 1e-10 * sv[0]:
            return ["functionals do not span the space"]
        return []

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        return np.abs(x @ self.F.conj().T).max(axis=-1)

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "functionals": [[_enc_c(z) for z in f] for f in self.functionals]}


def _parts_dim(parts: Sequence[NormDescriptor]) -> tuple[int | None, list[str]]:
    dims = {p.dim for p in parts if p.dim is not None}
    if len(dims) > 1:
        return None, [f"parts have inconsistent dimensions {sorted(dims)}"]
    return (dims.pop() if dims else None), []


@dataclass(frozen=True)
class Mixture(NormDescriptor):
    parts: tuple[NormDescriptor, ...]
    coefficients: tuple[float, ...]

    kind: ClassVar[str] = "mixture"

    @property
    def dim(self) -> int | None:
        return _parts_dim(self.parts)[0]

    def _problems(self) -> list[str]:
        if not self.parts:
            return ["mixture needs at least one part"]
        if len(self.parts) != len(self.coefficients):
            return ["one coefficient per part is required"]
        out = _parts_dim(self.parts)[1]
        if not all(math.isfinite(c) and c >= 0 for c in self.coefficients):
            out.append("coefficients must be finite and >= 0")
        elif not any(c > 0 for c in self.coefficients):
            out.append("at least one coefficient must be positive")
        for i, part in enumerate(self.parts):
            out.extend(f"part {i}: {msg}" for msg in part.problems)
        return out

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        total = None
        for c, part in zip(self.coefficients, self.parts):
            term = c * part.evaluate(x)
            total = term if total is None else total + term
        return total

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "parts": [p.to_json() for p in self.parts],
            "coefficients": [float(c) for c in self.coefficients],
        }


@dataclass(frozen=True)
class MaxOf(NormDescriptor):
    parts: tuple[NormDescriptor, ...]

    kind: ClassVar[str] = "max_of"

    @property
    def dim(self) -> int | None:
        return _parts_dim(self.parts)[0]

    def _problems(self) -> list[str]:
        if not self.parts:
            return ["max_of needs at least one part"]
        out = _parts_dim(self.parts)[1]
        for i, part in enumerate(self.parts):
            out.extend(f"part {i}: {msg}" for msg in part.problems)
        return out

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        out = self.parts[0].evaluate(x)
        for part in self.parts[1:]:
            out = np.maximum(out, part.evaluate(x))
        return out

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "parts": [p.to_json() for p in self.parts]}


def independence_residual(a: np.ndarray, b: np.ndarray) -> float:
    """Euclidean norm of ``b`` after projecting out ``a``, relative to ``|b|_2``."""
    nb = float(np.linalg.norm(b))
    na2 = float(np.vdot(a, a).real)
    if nb == 0.0 or na2 == 0.0:
        return 0.0
    resid = b - (np.vdot(a, b) / na2) * a
    return float(np.linalg.norm(resid)) / nb


@dataclass(frozen=True)
class InducedOnC2(NormDescriptor):
    """Norm on C^2 given by ``(alpha, beta) -> ||alpha a + beta b||_base``."""

    base: NormDescriptor
    a: tuple[complex, ...]
    b: tuple[complex, ...]

    kind: ClassVar[str] = "induced_c2"

    @property
    def dim(self) -> int:
        return 2

    @cached_property
    def basis(self) -> tuple[np.ndarray, np.ndarray]:
        return (np.asarray(self.a, dtype=np.complex128), np.asarray(self.b, dtype=np.complex128))

    def _problems(self) -> list[str]:
        out = [f"base: {msg}" for msg in self.base.problems]
        if len(self.a) != len(self.b) or not self.a:
            return out + ["a and b must be non-empty and of equal length"]
        if self.base.dim is not None and len(self.a) != self.base.dim:
            out.append("a, b do not match the base dimension")
        a, b = self.basis
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            out.append("a, b must be finite")
        elif independence_residual(a, b) <= 1e-9:
            out.append("a and b are linearly dependent")
        return out

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        a, b = self.basis
        return self.base.evaluate(x[..., 0:1] * a + x[..., 1:2] * b)

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "base": self.base.to_json(),
            "a": [_enc_c(z) for z in self.a],
            "b": [_enc_c(z) for z in self.b],
        }


# --------------------------------------------------------------------------
# serialization


def from_json(obj: dict[str, Any] | str) -> NormDescriptor:
    """Inverse of ``descriptor.to_json()``; also accepts a JSON string."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "kind" not in obj:
        raise DescriptorInvalid("norm descriptor must be a JSON object with a 'kind'")
    kind = obj["kind"]
    try:
        if kind == "pnorm":
            dim = obj.get("dim")
            return PNorm(_dec_p(obj["p"]), None if dim is None else int(dim))
        if kind == "weighted_pnorm":
            return WeightedPNorm(_dec_p(obj["p"]), tuple(float(w) for w in obj["weights"]))
        if kind == "hermitian":
            rows = obj["matrix"]
            n = len(rows)
            flat = tuple(_dec_c(z) for row in rows for z in row)
            if any(len(row) != n for row in rows):
                raise DescriptorInvalid("hermitian matrix must be square")
            return HermitianQuadratic(flat, n)
        if kind == "dual_max":
            return DualMax(tuple(tuple(_dec_c(z) for z in f) for f in obj["functionals"]))
        if kind == "mixture":
            return Mixture(
                tuple(from_json(p) for p in obj["parts"]),
                tuple(float(c) for c in obj["coefficients"]),
            )
        if kind == "max_of":
            return MaxOf(tuple(from_json(p) for p in obj["parts"]))
        if kind == "induced_c2":
            return InducedOnC2(
                from_json(obj["base"]),
                tuple(_dec_c(z) for z in obj["a"]),
                tuple(_dec_c(z) for z in obj["b"]),
            )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DescriptorInvalid):
            raise
        raise DescriptorInvalid(f"malformed {kind} descriptor: {exc}") from exc
    raise DescriptorInvalid(f"unknown norm kind {kind!r}")


# --------------------------------------------------------------------------
# evaluation


def eval_norm(d: NormDescriptor, x: Any) -> float:
    """Return ``||x||`` under ``d``.

    Raises:
        DescriptorInvalid: ``d`` does not describe a norm.
        ContractViolation: ``x`` is not a finite vector of the right dimension.
    """
    d.check()
    vec = as_cvector(x, d.dim)
    return float(d.evaluate(vec))


# --------------------------------------------------------------------------
# sampling-based axiom validation


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    worst: float
    tolerance: float
    passed: bool
    note: str = ""

    def to_json(self) -> dict[str, Any]:
        return {"name": self.name, "worst": self.worst, "tolerance": self.tolerance,
                "passed": self.passed, "note": self.note}


@dataclass(frozen=True)
class NormValidation:
    passed: bool
    checks: tuple[AxiomCheck, ...]
    problems: tuple[str, ...] = field(default_factory=tuple)

    def check(self, name: str) -> AxiomCheck:
        return next(c for c in self.checks if c.name == name)

    def to_json(self) -> dict[str, Any]:
        return {"passed": self.passed, "problems": list(self.problems),
                "checks": [c.to_json() for c in self.checks]}


def _suspect_directions(d: NormDescriptor, dim: int) -> list[np.ndarray]:
    # vectors where a degenerate descriptor would vanish; random samples almost never hit them
    if isinstance(d, DualMax) and d.F.shape[1] == dim and np.all(np.isfinite(d.F)):
        # x -> conj(F) x vanishes on the last right-singular vector of conj(F)
        _, _, vh = np.linalg.svd(d.F.conj())
        return [vh[-1].conj()]
    if isinstance(d, HermitianQuadratic) and len(d.matrix) == dim * dim and np.all(np.isfinite(d.A)):
        _, vecs = np.linalg.eigh(0.5 * (d.A + d.A.conj().T))
        return [vecs[:, 0]]
    if isinstance(d, (Mixture, MaxOf)):
        return [v for p in d.parts for v in _suspect_directions(p, dim)]
    if isinstance(d, InducedOnC2):
        a, b = d.basis
        nb = np.vdot(b, b).real
        if nb > 0 and a.shape == b.shape:
            # (alpha, beta) with alpha a + beta b closest to zero in the Euclidean sense
            return [np.array([1.0, -np.vdot(b, a) / nb])]
    return []


def validate_norm(d: NormDescriptor, n_samples: int, seed: int, dim: int | None = None) -> NormValidation:
    """Check the norm axioms of ``d`` on ``n_samples`` random inputs.

    Homogeneity and the triangle inequality are measured as relative
    violations and pass at ``<= AXIOM_TOL``; definiteness records the smallest
    ``||x|| / ||x||_2`` seen and passes when it stays above ``AXIOM_TOL``.
    Structural problems with the descriptor are reported, never raised.
    ``dim`` is only needed for dimension-free descriptors such as a bare pnorm.
    """
    if n_samples < 1:
        raise ContractViolation("n_samples must be >= 1")
    n = d.dim if d.dim is not None else (dim or 2)
    rng = stream(seed, "validate", n)

    scales = 10.0 ** rng.uniform(-3, 3, size=(n_samples, 1))
    x = complex_normal(rng, (n_samples, n)) * scales
    y = complex_normal(rng, (n_samples, n)) * 10.0 ** rng.uniform(-3, 3, size=(n_samples, 1))
    z = complex_normal(rng, n_samples) * 10.0 ** rng.uniform(-3, 3, size=n_samples)

    with np.errstate(all="ignore"):
        nx = d.evaluate(x)
        ny = d.evaluate(y)
        nzx = d.evaluate(z[:, None] * x)
        nxy = d.evaluate(x + y)

        homog = np.abs(nzx - np.abs(z) * nx) / (1.0 + np.abs(z) * nx)
        tri = (nxy - nx - ny) / (nx + ny)

        probes = [x] + [v[None, :] for v in _suspect_directions(d, n)]
        probe = np.concatenate(probes, axis=0)
        ratio = d.evaluate(probe) / np.linalg.norm(probe, axis=-1)

    def worst(values: np.ndarray) -> float:
        return math.inf if np.any(np.isnan(values)) else float(np.max(values))

    h, t = worst(homog), worst(tri)
    r = math.nan if np.any(np.isnan(ratio)) else float(np.min(ratio))
    checks = (
        AxiomCheck("absolute_homogeneity", h, AXIOM_TOL, h <= AXIOM_TOL),
        AxiomCheck("triangle_inequality", t, AXIOM_TOL, t <= AXIOM_TOL),
        AxiomCheck("positive_definiteness", r, AXIOM_TOL, r > AXIOM_TOL,
                   note="smallest ||x||/||x||_2 over samples and degenerate directions"),
    )
    problems = tuple(d.problems)
    return NormValidation(all(c.passed for c in checks) and not problems, checks, problems)


# --------------------------------------------------------------------------
# random generation

_MAX_ATTEMPTS = 64


def _random_p(rng: np.random.Generator) -> float:
    u = rng.random()
    if u < 0.1:
        return math.inf
    if u < 0.2:
        return 1.0
    if u < 0.25:
        return 2.0
    return 1.0 + float(rng.exponential(1.5))


def _draw(family: str, dim: int, rng: np.random.Generator) -> NormDescriptor:
    if family == "pnorm":
        return PNorm(_random_p(rng), dim)
    if family == "weighted_pnorm":
        return WeightedPNorm(_random_p(rng), tuple(float(w) for w in np.exp(rng.normal(0, 0.7, dim))))
    if family == "hermitian":
        b = complex_normal(rng, (dim, dim))
        a = b.conj().T @ b + 1e-3 * np.eye(dim)
        return HermitianQuadratic.from_matrix(0.5 * (a + a.conj().T))
    if family == "dual_max":
        m = dim + int(rng.integers(0, 2 * dim + 1))
        return DualMax.from_rows(complex_normal(rng, (m, dim)))
    if family == "mixture":
        coeffs = rng.dirichlet(np.ones(2))
        parts = (_draw("pnorm", dim, rng), _draw("dual_max", dim, rng))
        return Mixture(parts, tuple(float(c) for c in coeffs))
    if family == "max_of":
        names = rng.choice(["pnorm", "weighted_pnorm", "hermitian", "dual_max"], size=2)
        return MaxOf(tuple(_draw(str(nm), dim, rng) for nm in names))
    if family == "induced_c2":
        base_family = str(rng.choice(["pnorm", "weighted_pnorm", "hermitian", "dual_max", "mixture", "max_of"]))
        base_dim = int(rng.integers(2, 5))
        base = _draw(base_family, base_dim, rng)
        return InducedOnC2(base, _ctuple(complex_normal(rng, base_dim)), _ctuple(complex_normal(rng, base_dim)))
    raise ContractViolation(f"unknown norm family {family!r}; expected one of {FAMILIES}")


def random_norm(family: str, dim: int, seed: int) -> NormDescriptor:
    """Draw a valid descriptor of ``family`` on C^dim, deterministically from ``seed``.

    ``induced_c2`` only exists for ``dim == 2``.
    """
    if dim < 1:
        raise ContractViolation("dim must be >= 1")
    if family == "induced_c2" and dim != 2:
        raise ContractViolation("induced_c2 norms live on C^2")
    for attempt in range(_MAX_ATTEMPTS):
        d = _draw(family, dim, stream(seed, "norm", family, dim, attempt))
        if d.is_valid:
            return d
    raise DescriptorInvalid(f"could not draw a valid {family} norm after {_MAX_ATTEMPTS} attempts")


def families_for_dim(dim: int) -> tuple[str, ...]:
    return FAMILIES if dim == 2 else tuple(f for f in FAMILIES if f != "induced_c2")
