"""Adaptive quadrature over the real line.

A panel-bisection engine built on an embedded Gauss-Legendre pair (7/15
nodes).  It handles improper domains through the tail substitution
t = u/(1-u), grades panels toward declared integrable endpoint
singularities, enforces oscillation-aware panel caps so that sine terms
cannot alias past the error estimator, and refuses to return a number
when the integral diverges at a declared singular point.

Refinement is deterministic: panels are refined in a fixed priority
order and the final sum is accumulated in domain order, so repeated
calls are bitwise reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import HausError

__all__ = [
    "Integrand",
    "QuadResult",
    "QuadConvergenceError",
    "QuadDivergenceError",
    "integrate",
    "integrate_oscillatory",
    "DEFAULT_REL_TOL",
    "DEFAULT_ABS_TOL",
    "KERNEL_REL_TOL",
    "KERNEL_ABS_TOL",
]

DEFAULT_REL_TOL = 1e-10
DEFAULT_ABS_TOL = 1e-12
KERNEL_REL_TOL = 1e-8
KERNEL_ABS_TOL = 1e-10

MAX_EVALS = 10**6

# Panels whose total phase change exceeds this are split regardless of the
# error estimate; a 15-node rule resolves two full periods to ~1e-18.
_PHASE_CAP = 2.0 * math.pi

_X_LO, _W_LO = np.polynomial.legendre.leggauss(7)
_X_HI, _W_HI = np.polynomial.legendre.leggauss(15)
_X_ALL = np.concatenate([_X_LO, _X_HI])


class QuadConvergenceError(HausError):
    """Panel budget exhausted before reaching the requested tolerance."""

    def __init__(self, message: str, best: "QuadResult | None" = None):
        super().__init__(message)
        self.best = best


class QuadDivergenceError(QuadConvergenceError):
    """The integral diverges at a declared singular point or at infinity."""


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error_estimate: float
    panels_used: int


@dataclass(frozen=True)
class Integrand:
    """A scalar integrand with its support and known trouble spots.

    evaluator must accept a float ndarray and return one of the same
    shape, finite everywhere on the support except at singular_points.
    phase, when given, is the oscillation phase (in radians) as a
    monotone function of the abscissa on each support interval; it is
    used only by integrate_oscillatory to cap panel widths.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    support: tuple[tuple[float, float], ...]
    singular_points: tuple[float, ...] = ()
    phase: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        intervals = self.support
        if intervals and isinstance(intervals[0], (int, float)):
            intervals = (tuple(intervals),)
        intervals = tuple((float(a), float(b)) for a, b in intervals)
        for a, b in intervals:
            if not a < b:
                raise ValueError(f"empty support interval ({a}, {b})")
        object.__setattr__(self, "support", intervals)
        object.__setattr__(
            self, "singular_points", tuple(float(s) for s in self.singular_points)
        )

    @classmethod
    def on_interval(cls, evaluator, a, b, singular_points=(), phase=None):
        return cls(evaluator, ((a, b),), tuple(singular_points), phase)

    @classmethod
    def symmetric(cls, evaluator, inner, outer, singular_points=(), phase=None):
        """Support {inner < |t| < outer}, e.g. the |t|>1 weight families."""
        return cls(
            evaluator,
            ((-outer, -inner), (inner, outer)),
            tuple(singular_points),
            phase,
        )


class _Segment:
    """One finite or tail-mapped piece of the support, parametrized on [0,1]."""

    __slots__ = ("a", "b", "kind")

    def __init__(self, a: float, b: float):
        self.a = a
        self.b = b
        if math.isinf(a) and math.isinf(b):
            raise ValueError("doubly infinite segment must be split first")
        if math.isinf(b):
            self.kind = "right"
        elif math.isinf(a):
            self.kind = "left"
        else:
            self.kind = "finite"

    def to_t(self, u: np.ndarray) -> np.ndarray:
        if self.kind == "finite":
            return self.a + (self.b - self.a) * u
        if self.kind == "right":
            return self.a + u / (1.0 - u)
        return self.b - u / (1.0 - u)

    def jacobian(self, u: np.ndarray) -> np.ndarray:
        if self.kind == "finite":
            return np.full_like(u, self.b - self.a)
        return 1.0 / (1.0 - u) ** 2


def _build_segments(g: Integrand) -> list[_Segment]:
    segments = []
    for a, b in g.support:
        cuts = sorted(s for s in g.singular_points if a < s < b)
        if math.isinf(a) and math.isinf(b) and not cuts:
            cuts = [0.0]
        edges = [a, *cuts, b]
        for lo, hi in zip(edges[:-1], edges[1:]):
            segments.append(_Segment(lo, hi))
    return segments


def _probe_divergence(g: Integrand) -> None:
    """Fit the local growth exponent of |g| at singular points and infinite
    ends; exponents at or past -1 mean a divergent integral."""
    for a, b in g.support:
        probes = []
        for s in g.singular_points:
            span = min(abs(s - a), abs(b - s))
            if span == 0.0:
                span = min(x for x in (abs(s - a), abs(b - s)) if x > 0)
            if math.isinf(span):
                span = 1.0
            if a <= s < b or s == b:
                if s > a:
                    probes.append((s, -1.0, 0.5 * span))
                if s < b:
                    probes.append((s, +1.0, 0.5 * span))
        if math.isinf(b):
            probes.append((max(a, 0.0) if not math.isinf(a) else 0.0, +1.0, None))
        if math.isinf(a):
            probes.append((min(b, 0.0), -1.0, None))
        for point, direction, span in probes:
            if span is not None:
                d = span * 4.0 ** -np.arange(1.0, 15.0)
                x = point + direction * d
                r = d
            else:
                r = max(1.0, abs(point)) * 4.0 ** np.arange(1.0, 13.0)
                x = point + direction * r
            v = np.abs(np.asarray(g.evaluator(x), dtype=float))
            ok = np.isfinite(v) & (v > 0.0)
            if ok.sum() < 6:
                continue
            logs = np.log(v[ok])
            logr = np.log(r[ok])
            slope = np.polyfit(logr[-8:], logs[-8:], 1)[0]
            if span is not None and slope <= -0.995:
                raise QuadDivergenceError(
                    f"integrand grows like distance^{slope:.3f} at singular "
                    f"point {point:g}; the integral diverges"
                )
            if span is None and slope >= -1.005:
                raise QuadDivergenceError(
                    f"integrand decays like |t|^{slope:.3f} toward infinity; "
                    "the integral diverges"
                )


@dataclass
class _Panel:
    seg: int
    u0: float
    u1: float
    value: float = 0.0
    err: float = 0.0
    mass: float = 0.0
    phase_span: float = 0.0


def _evaluate_panels(
    g: Integrand,
    segments: Sequence[_Segment],
    panels: list[_Panel],
    phase: Callable | None,
) -> int:
    """Fill value/err/mass (and phase span) for freshly created panels."""
    nev = 0
    by_seg: dict[int, list[_Panel]] = {}
    for p in panels:
        by_seg.setdefault(p.seg, []).append(p)
    for seg_idx, group in by_seg.items():
        seg = segments[seg_idx]
        u0 = np.array([p.u0 for p in group])
        u1 = np.array([p.u1 for p in group])
        mid = 0.5 * (u0 + u1)
        half = 0.5 * (u1 - u0)
        u = mid[:, None] + half[:, None] * _X_ALL[None, :]
        t = seg.to_t(u)
        jac = seg.jacobian(u)
        vals = np.asarray(g.evaluator(t), dtype=float)
        nev += vals.size
        if not np.all(np.isfinite(vals)):
            bad = t[~np.isfinite(vals)]
            raise HausError(
                f"integrand returned a non-finite value near t={bad.flat[0]:g}; "
                "declare the point singular or shrink the support"
            )
        wv = vals * jac
        lo = (wv[:, :7] @ _W_LO) * half
        hi = (wv[:, 7:] @ _W_HI) * half
        mass = (np.abs(wv[:, 7:]) @ _W_HI) * half
        for i, p in enumerate(group):
            p.value = float(hi[i])
            p.err = float(abs(hi[i] - lo[i]) + 1e-16 * mass[i])
            p.mass = float(mass[i])
            if phase is not None:
                t0 = seg.to_t(np.array([p.u0]))[0]
                t1 = seg.to_t(np.array([min(p.u1, 1.0 - 1e-12)]))[0]
                ph = phase(np.array([t0, t1]))
                p.phase_span = float(abs(ph[1] - ph[0]))
    return nev


def _run(
    g: Integrand,
    rel_tol: float,
    abs_tol: float,
    phase: Callable | None,
    max_evals: int,
) -> QuadResult:
    segments = _build_segments(g)
    if not segments:
        return QuadResult(0.0, 0.0, 0)

    panels: list[_Panel] = []
    for i, seg in enumerate(segments):
        n0 = 8
        if phase is not None and seg.kind == "finite":
            t0, t1 = seg.a, seg.b
            span = float(abs(phase(np.array([t1]))[0] - phase(np.array([t0]))[0]))
            n0 = int(min(max(8, math.ceil(span / (0.75 * _PHASE_CAP))), 20000))
        edges = np.linspace(0.0, 1.0, n0 + 1)
        panels.extend(_Panel(i, edges[j], edges[j + 1]) for j in range(n0))

    nev = _evaluate_panels(g, segments, panels, phase)

    while True:
        panels.sort(key=lambda p: (p.seg, p.u0))
        total = math.fsum(p.value for p in panels)
        err = math.fsum(p.err for p in panels)
        tol = max(abs_tol, rel_tol * abs(total))
        must_split = [
            p
            for p in panels
            if phase is not None
            and p.phase_span > _PHASE_CAP
            and p.mass > 1e-3 * tol
        ]
        if err <= tol and not must_split:
            return QuadResult(total, err, len(panels))
        if nev >= max_evals:
            best = QuadResult(total, err, len(panels))
            raise QuadConvergenceError(
                f"no convergence within {max_evals} evaluations "
                f"(value={total:.6g}, error estimate={err:.3g})",
                best=best,
            )
        refine = set(id(p) for p in must_split)
        if err > tol:
            by_err = sorted(panels, key=lambda p: -p.err)
            budget = err - 0.25 * tol
            for p in by_err[:256]:
                if budget <= 0:
                    break
                refine.add(id(p))
                budget -= p.err
        new_panels = []
        kept = []
        for p in panels:
            if id(p) in refine:
                um = 0.5 * (p.u0 + p.u1)
                new_panels.append(_Panel(p.seg, p.u0, um))
                new_panels.append(_Panel(p.seg, um, p.u1))
            else:
                kept.append(p)
        nev += _evaluate_panels(g, segments, new_panels, phase)
        panels = kept + new_panels


def integrate(
    g: Integrand,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
    max_evals: int = MAX_EVALS,
) -> QuadResult:
    """Integrate g over its support with an embedded error estimate.

    Unbounded tails are mapped to (0,1) by t = u/(1-u); declared
    singular points become panel boundaries and are probed first: when
    |g| grows with local exponent <= -1 there (or decays with exponent
    >= -1 at an infinite end), the integral diverges and
    QuadDivergenceError is raised instead of fabricating a value.
    """
    if rel_tol <= 0 or abs_tol <= 0:
        raise ValueError("tolerances must be positive")
    _probe_divergence(g)
    return _run(g, rel_tol, abs_tol, None, max_evals)


def integrate_oscillatory(
    g: Integrand,
    frequency: float,
    rel_tol: float = KERNEL_REL_TOL,
    abs_tol: float = KERNEL_ABS_TOL,
    max_evals: int = MAX_EVALS,
) -> QuadResult:
    """Like integrate, but panel widths are capped by the local
    oscillation period so sine factors cannot alias past the estimator.

    frequency is the (maximal) linear phase rate; an Integrand.phase
    callable takes precedence and is the right tool for unbounded
    supports where the oscillation dies off in the tail.
    """
    if rel_tol <= 0 or abs_tol <= 0:
        raise ValueError("tolerances must be positive")
    if not math.isfinite(frequency):
        raise ValueError("frequency must be finite")
    phase = g.phase
    if phase is None and frequency != 0.0:
        w = float(frequency)
        phase = lambda t: w * t  # noqa: E731
    return _run(g, rel_tol, abs_tol, phase, max_evals)
