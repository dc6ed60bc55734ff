"""Search-based stress tests for the polarization product.

``max_abs_product`` hunts for Cauchy-Schwarz violations, ``max_phase_defect``
measures how far the product is from phase homogeneity, and
``parallelogram_defect`` tells inner-product norms apart from the rest.
``explore_conjecture`` puts the last two side by side over sampled norms.

Searches run a multi-start pattern search on raw real coordinates. Each
restart owns a random stream derived from ``(seed, restart index)`` and the
restarts are advanced together as one batch, so reports depend only on the
inputs and the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .errors import ContractViolation
from .norms import FAMILIES, NormDescriptor, random_norm
from .product import polarization_product, unit_product
from .rng import child_seed, complex_normal, stream

#: Raw vectors below this norm are rejected by the search objectives.
MIN_RAW_NORM = 1e-6
STEP0 = 0.5
STEP_RTOL = 1e-10

PHASE_FLAT = 1e-8
PARALLELOGRAM_BENT = 1e-3


@dataclass
class PatternSearchResult:
    theta: np.ndarray
    value: float
    restart: int
    iterations: int
    converged: bool
    values: np.ndarray = field(repr=False)


def pattern_search(
    objective: Callable[[np.ndarray], np.ndarray],
    n_params: int,
    restarts: int,
    iters: int,
    seed: int,
    renormalize: Callable[[np.ndarray], np.ndarray] | None = None,
) -> PatternSearchResult:
    """Maximize ``objective`` with a multi-start rotating-basis pattern search.

    ``objective`` maps a ``(B, n_params)`` batch to ``B`` values and may
    return ``-inf`` for rejected points. Every iteration each live restart
    polls ``theta +/- step * q_k`` along the columns of a fresh random
    orthonormal basis; it moves to the best improving point (doubling the
    step) or halves the step. A restart stops once ``step <= STEP_RTOL *
    max(1, |theta|_inf)``.
    """
    if restarts < 1 or iters < 1:
        raise ContractViolation("restarts and iters must be >= 1")
    rngs = [stream(seed, "restart", r) for r in range(restarts)]
    theta = np.stack([g.standard_normal(n_params) for g in rngs])
    if renormalize is not None:
        theta = renormalize(theta)
    value = objective(theta)
    step = np.full(restarts, STEP0)
    live = np.ones(restarts, dtype=bool)
    used = np.zeros(restarts, dtype=int)

    for _ in range(iters):
        idx = np.flatnonzero(live)
        if idx.size == 0:
            break
        gauss = np.stack([rngs[r].standard_normal((n_params, n_params)) for r in idx])
        basis, _ = np.linalg.qr(gauss)
        dirs = np.concatenate([basis, -basis], axis=2).transpose(0, 2, 1)
        cand = theta[idx, None, :] + step[idx, None, None] * dirs
        vals = objective(cand.reshape(-1, n_params)).reshape(idx.size, -1)
        k = np.argmax(vals, axis=1)
        best = vals[np.arange(idx.size), k]
        better = best > value[idx]

        moved = idx[better]
        if moved.size:
            new = cand[better, k[better]]
            if renormalize is not None:
                new = renormalize(new)
            theta[moved] = new
            value[moved] = objective(new)
            step[moved] = np.minimum(2.0 * step[moved], STEP0)
        step[idx[~better]] *= 0.5
        used[idx] += 1
        live[idx] = step[idx] > STEP_RTOL * np.maximum(1.0, np.abs(theta[idx]).max(axis=1))

    best_r = int(np.argmax(value))
    return PatternSearchResult(theta[best_r].copy(), float(value[best_r]), best_r,
                               int(used[best_r]), bool(not live[best_r]), value.copy())


# --------------------------------------------------------------------------
# parameterizations


def _split_xy(theta: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    # x: first component real (the joint phase is fixed), y: fully free
    x = np.empty(theta.shape[:-1] + (n,), dtype=np.complex128)
    x[..., 0] = theta[..., 0]
    x[..., 1:] = theta[..., 1:2 * n - 1:2] + 1j * theta[..., 2:2 * n - 1:2]
    yr = theta[..., 2 * n - 1:4 * n - 1]
    y = yr[..., 0::2] + 1j * yr[..., 1::2]
    return x, y


def _join_xy(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    n = x.shape[-1]
    out = np.empty(x.shape[:-1] + (4 * n - 1,))
    out[..., 0] = x[..., 0].real
    out[..., 1:2 * n - 1:2] = x[..., 1:].real
    out[..., 2:2 * n - 1:2] = x[..., 1:].imag
    out[..., 2 * n - 1::2] = y.real
    out[..., 2 * n::2] = y.imag
    return out


def _unit_pair(d: NormDescriptor, theta: np.ndarray, n: int):
    x, y = _split_xy(theta, n)
    nx = d.evaluate(x)
    ny = d.evaluate(y)
    ok = (nx >= MIN_RAW_NORM) & (ny >= MIN_RAW_NORM)
    sx = np.where(ok, nx, 1.0)[..., None]
    sy = np.where(ok, ny, 1.0)[..., None]
    return x / sx, y / sy, ok


def _renormalizer(d: NormDescriptor, n: int, extra: int = 0) -> Callable[[np.ndarray], np.ndarray]:
    def renorm(theta: np.ndarray) -> np.ndarray:
        core = theta[..., : 4 * n - 1]
        x, y = _split_xy(core, n)
        nx = d.evaluate(x)[..., None]
        ny = d.evaluate(y)[..., None]
        x = np.where(nx >= MIN_RAW_NORM, x / np.where(nx > 0, nx, 1.0), x)
        y = np.where(ny >= MIN_RAW_NORM, y / np.where(ny > 0, ny, 1.0), y)
        out = theta.copy()
        out[..., : 4 * n - 1] = _join_xy(x, y)
        if extra:
            out[..., 4 * n - 1:] = np.mod(theta[..., 4 * n - 1:], 2 * np.pi)
        return out
    return renorm


def _enc_vec(v: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in v]


# --------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class SearchReport:
    objective: str
    best_value: float
    witnesses: dict[str, Any]
    norm: NormDescriptor
    seed: int
    restarts: int
    iterations: int
    converged: bool

    @property
    def x(self) -> np.ndarray:
        return np.array([complex(*z) for z in self.witnesses["x"]])

    @property
    def y(self) -> np.ndarray:
        return np.array([complex(*z) for z in self.witnesses["y"]])

    def to_json(self) -> dict[str, Any]:
        return {
            "objective": self.objective,
            "best_value": self.best_value,
            "witnesses": self.witnesses,
            "norm": self.norm.to_json(),
            "seed": self.seed,
            "restarts": self.restarts,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def _dim_of(norm: NormDescriptor) -> int:
    norm.check()
    if norm.dim is None:
        raise ContractViolation("the norm must have a fixed dimension for a search")
    return norm.dim


def max_abs_product(norm: NormDescriptor, restarts: int, iters: int, seed: int) -> SearchReport:
    """Largest ``|<x|y>|`` found over unit ``x, y``; the Cauchy-Schwarz bound says it is <= 1."""
    n = _dim_of(norm)

    def objective(theta: np.ndarray) -> np.ndarray:
        xh, yh, ok = _unit_pair(norm, theta, n)
        return np.where(ok, np.abs(unit_product(norm, xh, yh)), -np.inf)

    res = pattern_search(objective, 4 * n - 1, restarts, iters, seed, _renormalizer(norm, n))
    xh, yh, _ = _unit_pair(norm, res.theta, n)
    return SearchReport("max_abs_product", res.value, {"x": _enc_vec(xh), "y": _enc_vec(yh)},
                       norm, seed, restarts, res.iterations, res.converged)


def _phase_defect(norm: NormDescriptor, xh: np.ndarray, yh: np.ndarray, phi: np.ndarray) -> np.ndarray:
    u = np.exp(1j * phi)[..., None]
    rotated = unit_product(norm, u * xh, yh)
    return np.abs(rotated - u[..., 0] * unit_product(norm, xh, yh))


def max_phase_defect(norm: NormDescriptor, restarts: int, iters: int, seed: int) -> SearchReport:
    """Largest ``|<e^{i phi} x|y> - e^{i phi}<x|y>|`` found over unit ``x, y`` and ``phi``."""
    n = _dim_of(norm)

    def objective(theta: np.ndarray) -> np.ndarray:
        xh, yh, ok = _unit_pair(norm, theta[..., :-1], n)
        return np.where(ok, _phase_defect(norm, xh, yh, theta[..., -1]), -np.inf)

    res = pattern_search(objective, 4 * n, restarts, iters, seed, _renormalizer(norm, n, extra=1))
    xh, yh, _ = _unit_pair(norm, res.theta[:-1], n)
    witnesses = {"x": _enc_vec(xh), "y": _enc_vec(yh), "phi": float(res.theta[-1])}
    return SearchReport("max_phase_defect", res.value, witnesses, norm, seed, restarts,
                        res.iterations, res.converged)


def reevaluate(report: SearchReport) -> float:
    """Recompute a report's objective from its witnesses with the public product."""
    x, y = report.x, report.y
    if report.objective == "max_abs_product":
        return polarization_product(report.norm, x, y).ratio
    if report.objective == "max_phase_defect":
        from .product import phase_homogeneity_defect_at
        # the defect is homogeneous of degree 2, so unit witnesses give the objective
        return phase_homogeneity_defect_at(report.norm, x, y, report.witnesses["phi"])
    raise ValueError(f"unknown objective {report.objective!r}")


def parallelogram_defect(norm: NormDescriptor, n_samples: int, seed: int) -> float:
    """Worst ``|‖x+y‖² + ‖x-y‖² - 2‖x‖² - 2‖y‖²| / (‖x‖² + ‖y‖²)`` over sampled pairs.

    All pairs of standard basis vectors are always included.
    """
    if n_samples < 1:
        raise ContractViolation("n_samples must be >= 1")
    n = _dim_of(norm)
    rng = stream(seed, "parallelogram", n)
    eye = np.eye(n, dtype=np.complex128)
    bx = np.repeat(eye, n, axis=0)
    by = np.tile(eye, (n, 1))
    x = np.concatenate([bx, complex_normal(rng, (n_samples, n))])
    y = np.concatenate([by, complex_normal(rng, (n_samples, n))])
    nx, ny = norm.evaluate(x), norm.evaluate(y)
    npl, nmi = norm.evaluate(x + y), norm.evaluate(x - y)
    defect = np.abs(npl ** 2 + nmi ** 2 - 2 * nx ** 2 - 2 * ny ** 2) / (nx ** 2 + ny ** 2)
    return float(defect.max())


@dataclass(frozen=True)
class ConjectureRecord:
    trial: int
    family: str
    seed: int
    norm: NormDescriptor
    parallelogram_defect: float
    phase_defect: float
    flag: str | None

    def to_json(self) -> dict[str, Any]:
        return {
            "trial": self.trial,
            "family": self.family,
            "seed": self.seed,
            "norm": self.norm.to_json(),
            "parallelogram_defect": self.parallelogram_defect,
            "phase_defect": self.phase_defect,
            "flag": self.flag,
        }


@dataclass(frozen=True)
class ConjectureReport:
    records: tuple[ConjectureRecord, ...]

    @property
    def flagged(self) -> list[ConjectureRecord]:
        return [r for r in self.records if r.flag is not None]

    def to_json(self, include_all: bool = False) -> dict[str, Any]:
        body: dict[str, Any] = {
            "trials": len(self.records),
            "flag_count": len(self.flagged),
            "flagged": [r.to_json() for r in self.flagged],
            "summary": [
                {"trial": r.trial, "family": r.family,
                 "parallelogram_defect": r.parallelogram_defect, "phase_defect": r.phase_defect}
                for r in self.records
            ],
        }
        if include_all:
            body["records"] = [r.to_json() for r in self.records]
        return body


def classify(parallelogram: float, phase: float) -> str | None:
    """Flag pairs that disagree about whether the norm is an inner-product norm.

    ``phase_flat_but_bent``: phase-homogeneous to noise level yet the
    parallelogram law clearly fails (would contradict the open direction).
    ``inner_product_not_phase_flat``: parallelogram law holds but the product
    is not phase-homogeneous (would contradict the trivial direction).
    """
    if phase <= PHASE_FLAT and parallelogram >= PARALLELOGRAM_BENT:
        return "phase_flat_but_bent"
    if parallelogram <= PHASE_FLAT and phase >= PARALLELOGRAM_BENT:
        return "inner_product_not_phase_flat"
    return None


def conjecture_trial(family: str, trial: int, seed: int, restarts: int = 4, iters: int = 300,
                     n_samples: int = 256) -> ConjectureRecord:
    sub = child_seed(seed, "conjecture", trial)
    dim = 2 + int(stream(sub, "dim").integers(0, 2)) if family != "induced_c2" else 2
    norm = random_norm(family, dim, sub)
    para = parallelogram_defect(norm, n_samples, sub)
    phase = max_phase_defect(norm, restarts, iters, sub).best_value
    return ConjectureRecord(trial, family, sub, norm, para, phase, classify(para, phase))


def explore_conjecture(families: Sequence[str] | None, trials: int, seed: int, restarts: int = 4,
                       iters: int = 300) -> ConjectureReport:
    """Measure both defects on ``trials`` sampled norms, cycling through ``families``.

    Flags are evidence about an open question, not failures.
    """
    if trials < 1:
        raise ContractViolation("trials must be >= 1")
    fams = tuple(families) if families else FAMILIES
    records = tuple(conjecture_trial(fams[i % len(fams)], i, seed, restarts, iters) for i in range(trials))
    return ConjectureReport(records)


def brute_force_max_abs_product(norm: NormDescriptor, points_per_axis: Sequence[int] = (12, 12, 10, 10, 10, 10),
                                chunk: int = 200_000) -> tuple[float, np.ndarray, np.ndarray]:
    """Grid search of ``|<x|y>|`` over unit pairs in C^2.

    Uses six angles: ``x = (cos a, sin a e^{i p1}) e^{i p2}``,
    ``y = (cos b, sin b e^{i p3}) e^{i p4}``, normalized by the norm. This
    shares nothing with the pattern search beyond the bracket formula.
    """
    if norm.dim != 2:
        raise ContractViolation("the brute-force grid covers C^2 only")
    na, nb, n1, n2, n3, n4 = points_per_axis
    axes = [np.linspace(0.0, np.pi / 2, na), np.linspace(0.0, np.pi / 2, nb)] + [
        np.linspace(0.0, 2 * np.pi, k, endpoint=False) for k in (n1, n2, n3, n4)
    ]
    grids = np.meshgrid(*axes, indexing="ij")
    flat = [g.ravel() for g in grids]
    best, bx, by = -math.inf, None, None
    for start in range(0, flat[0].size, chunk):
        a, b, p1, p2, p3, p4 = (f[start:start + chunk] for f in flat)
        x = np.stack([np.cos(a) * np.exp(1j * p2), np.sin(a) * np.exp(1j * (p1 + p2))], axis=-1)
        y = np.stack([np.cos(b) * np.exp(1j * p4), np.sin(b) * np.exp(1j * (p3 + p4))], axis=-1)
        x = x / norm.evaluate(x)[:, None]
        y = y / norm.evaluate(y)[:, None]
        vals = np.abs(unit_product(norm, x, y))
        k = int(np.argmax(vals))
        if vals[k] > best:
            best, bx, by = float(vals[k]), x[k], y[k]
    return best, bx, by
