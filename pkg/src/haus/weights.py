"""Weight functions and the scale map of the averaged-dilation operator.

The four analytic families (all even, nonnegative, unit mass):

    power-tail(p), p > 1:         (p-1)/(2|t|^p)        on |t| > 1
    power-bump(p), p < 1/2:       (1-p)/(2|t|^p)        on 0 < |t| < 1
    adjoint-hardy:                power-bump with p = 0
    riemann-liouville(alpha>0):   (1+alpha)/2 (1-|t|)^alpha on 0 < |t| < 1

plus tabulated weights (linear interpolation on the table hull).  The
scale map is odd with |a| positive, strictly decreasing and bijective
on (0, inf); the built-in kind is the reciprocal map a(t) = 1/t.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import quad
from .errors import ConfigError, HausError
from .quad import Integrand, QuadDivergenceError

__all__ = [
    "WeightSpec",
    "ScaleSpec",
    "AdmissibilityReport",
    "power_tail",
    "power_bump",
    "adjoint_hardy",
    "riemann_liouville",
    "tabulated",
    "reciprocal_scale",
    "custom_scale",
    "eval_weight",
    "eval_scale",
    "check_admissibility",
    "scale_superlevel_measure",
    "weight_from_config",
    "weight_to_config",
    "OutOfRangeError",
    "UnsupportedScaleError",
]

FAMILIES = ("power-tail", "power-bump", "adjoint-hardy", "riemann-liouville", "tabulated")


class OutOfRangeError(HausError):
    pass


class UnsupportedScaleError(HausError):
    pass


@dataclass(frozen=True, eq=False)
class WeightSpec:
    family: str
    p: float | None = None
    alpha: float | None = None
    table_t: np.ndarray | None = None
    table_phi: np.ndarray | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown weight family {self.family!r}")
        if self.family == "power-tail":
            if self.p is None or not self.p > 1:
                raise ConfigError(f"power-tail requires p > 1, got p={self.p}")
        elif self.family == "power-bump":
            if self.p is None or not self.p < 0.5:
                raise ConfigError(f"power-bump requires p < 1/2, got p={self.p}")
        elif self.family == "adjoint-hardy":
            object.__setattr__(self, "p", 0.0)
        elif self.family == "riemann-liouville":
            if self.alpha is None or not self.alpha > 0:
                raise ConfigError(
                    f"riemann-liouville requires alpha > 0, got alpha={self.alpha}"
                )
        else:
            t = np.array(self.table_t, dtype=float)
            phi = np.array(self.table_phi, dtype=float)
            if t.ndim != 1 or t.size < 2 or phi.shape != t.shape:
                raise ConfigError("tabulated weight needs matching 1-D t/phi tables")
            if np.any(np.diff(t) <= 0):
                raise ConfigError("tabulated t values must be strictly increasing")
            if not (np.all(np.isfinite(t)) and np.all(np.isfinite(phi))):
                raise ConfigError("tabulated weight contains non-finite entries")
            if np.any(phi < 0):
                raise ConfigError("tabulated weight must be nonnegative")
            t.setflags(write=False)
            phi.setflags(write=False)
            object.__setattr__(self, "table_t", t)
            object.__setattr__(self, "table_phi", phi)

    def support(self) -> tuple[tuple[float, float], ...]:
        """Open intervals where the weight may be nonzero."""
        if self.family == "power-tail":
            return ((-math.inf, -1.0), (1.0, math.inf))
        if self.family in ("power-bump", "adjoint-hardy", "riemann-liouville"):
            return ((-1.0, 0.0), (0.0, 1.0))
        lo, hi = float(self.table_t[0]), float(self.table_t[-1])
        return ((lo, hi),)

    def singular_points(self) -> tuple[float, ...]:
        if self.family in ("power-bump", "adjoint-hardy") and self.p != 0.0:
            return (0.0,)
        return ()

    def label(self) -> str:
        if self.family == "power-tail" or self.family == "power-bump":
            return f"{self.family}(p={self.p:g})"
        if self.family == "riemann-liouville":
            return f"riemann-liouville(alpha={self.alpha:g})"
        return self.family


def power_tail(p: float) -> WeightSpec:
    return WeightSpec("power-tail", p=float(p))


def power_bump(p: float) -> WeightSpec:
    return WeightSpec("power-bump", p=float(p))


def adjoint_hardy() -> WeightSpec:
    return WeightSpec("adjoint-hardy", p=0.0)


def riemann_liouville(alpha: float) -> WeightSpec:
    return WeightSpec("riemann-liouville", alpha=float(alpha))


def tabulated(t, phi) -> WeightSpec:
    return WeightSpec("tabulated", table_t=t, table_phi=phi)


def eval_weight(w: WeightSpec, t) -> float | np.ndarray:
    """phi(t) by the family formula, 0 outside the support.

    Tabulated weights raise OutOfRangeError when queried outside the
    table hull.
    """
    scalar = np.isscalar(t)
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    at = np.abs(tt)
    if w.family == "power-tail":
        out = np.zeros_like(at)
        m = at > 1.0
        out[m] = (w.p - 1.0) / (2.0 * at[m] ** w.p)
    elif w.family in ("power-bump", "adjoint-hardy"):
        out = np.zeros_like(at)
        m = (at > 0.0) & (at < 1.0)
        out[m] = (1.0 - w.p) / (2.0 * at[m] ** w.p)
    elif w.family == "riemann-liouville":
        out = np.zeros_like(at)
        m = (at > 0.0) & (at < 1.0)
        out[m] = 0.5 * (1.0 + w.alpha) * (1.0 - at[m]) ** w.alpha
    else:
        lo, hi = w.table_t[0], w.table_t[-1]
        if np.any((tt < lo) | (tt > hi)):
            raise OutOfRangeError(
                f"tabulated weight queried outside its table [{lo:g}, {hi:g}]"
            )
        out = np.interp(tt, w.table_t, w.table_phi)
    return float(out[0]) if scalar else out


def _eval_weight_clipped(w: WeightSpec, t: np.ndarray) -> np.ndarray:
    """Like eval_weight but 0 (not an error) outside a tabulated hull;
    quadrature tails may probe there."""
    if w.family != "tabulated":
        return eval_weight(w, t)
    lo, hi = w.table_t[0], w.table_t[-1]
    out = np.zeros_like(np.asarray(t, dtype=float))
    m = (t >= lo) & (t <= hi)
    out[m] = np.interp(t[m], w.table_t, w.table_phi)
    return out


@dataclass(frozen=True, eq=False)
class ScaleSpec:
    """The scale map a(t): odd, with |a| decreasing and bijective on
    (0, inf).  abs_inverse is the inverse of |a| restricted to (0, inf).

    Whether a custom map pulls null sets back to null sets cannot be
    checked numerically; it is assumed.
    """

    kind: str
    a: Callable[[np.ndarray], np.ndarray] | None = None
    abs_inverse: Callable[[float], float] | None = None

    def __post_init__(self):
        if self.kind not in ("reciprocal", "custom"):
            raise ConfigError(f"unknown scale kind {self.kind!r}")
        if self.kind == "custom":
            if self.a is None:
                raise ConfigError("custom scale needs an evaluator")
            self._validate()

    def _validate(self):
        t = np.geomspace(1e-6, 1e6, 49)
        fwd = np.asarray(self.a(t), dtype=float)
        bwd = np.asarray(self.a(-t), dtype=float)
        if np.max(np.abs(fwd + bwd)) > 1e-12 * max(1.0, float(np.max(np.abs(fwd)))):
            raise ConfigError("scale map is not odd at sampled points")
        mag = np.abs(fwd)
        if np.any(mag <= 0) or np.any(np.diff(mag) >= 0):
            raise ConfigError("|a| must be positive and strictly decreasing on (0, inf)")


def reciprocal_scale() -> ScaleSpec:
    return ScaleSpec("reciprocal")


def custom_scale(a: Callable, abs_inverse: Callable | None = None) -> ScaleSpec:
    return ScaleSpec("custom", a=a, abs_inverse=abs_inverse)


def eval_scale(a: ScaleSpec, t) -> float | np.ndarray:
    scalar = np.isscalar(t)
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    if a.kind == "reciprocal":
        out = np.zeros_like(tt)
        nz = tt != 0.0
        out[nz] = 1.0 / tt[nz]
    else:
        out = np.asarray(a.a(tt), dtype=float)
    return float(out[0]) if scalar else out


def _abs_inverse(a: ScaleSpec, y: float) -> float:
    """The t > 0 with |a(t)| = y."""
    if a.kind == "reciprocal":
        return 1.0 / y
    if a.abs_inverse is None:
        raise UnsupportedScaleError(
            "custom scale map has no inverse for |a|; superlevel measures "
            "are unavailable"
        )
    return float(a.abs_inverse(y))


@dataclass(frozen=True)
class AdmissibilityReport:
    """Hypothesis check: unit mass and phi*|a|^(1/2) integrable.

    l1_phi_a additionally records the integral of |phi||a| when it
    converges (None when it diverges); the kernel value at the origin
    exists exactly in that case.
    """

    integral_phi: float
    l1_phi: float
    l1_phi_sqrt_a: float
    passed: bool
    l1_phi_a: float | None = None
    notes: tuple[str, ...] = ()


def _weight_integrand(w: WeightSpec, a: ScaleSpec, power: float) -> Integrand:
    """|phi(t)| |a(t)|^power as a quad Integrand."""

    def ev(t: np.ndarray) -> np.ndarray:
        v = np.abs(_eval_weight_clipped(w, t))
        if power != 0.0:
            v = v * np.abs(eval_scale(a, t)) ** power
        return v

    sing = set(w.singular_points())
    if power != 0.0 and a.kind == "reciprocal":
        for lo, hi in w.support():
            if lo < 0.0 < hi or lo == 0.0 or hi == 0.0:
                sing.add(0.0)
    return Integrand(ev, w.support(), tuple(sorted(sing)))


def check_admissibility(w: WeightSpec, a: ScaleSpec) -> AdmissibilityReport:
    """Compute int phi, int |phi|, int |phi||a|^(1/2) (and int |phi||a|)
    by adaptive quadrature; passed iff the mass is 1 within 1e-8 and the
    |a|^(1/2)-weighted integral is finite."""
    notes = []

    def ev_signed(t):
        return _eval_weight_clipped(w, t)

    integral_phi = quad.integrate(
        Integrand(ev_signed, w.support(), w.singular_points())
    ).value
    l1_phi = quad.integrate(_weight_integrand(w, a, 0.0)).value

    try:
        l1_phi_sqrt_a = quad.integrate(_weight_integrand(w, a, 0.5)).value
        sqrt_ok = True
    except QuadDivergenceError as exc:
        l1_phi_sqrt_a = math.inf
        sqrt_ok = False
        notes.append(f"integral of |phi||a|^(1/2) diverges: {exc}")

    l1_phi_a: float | None
    try:
        l1_phi_a = quad.integrate(_weight_integrand(w, a, 1.0)).value
    except QuadDivergenceError:
        l1_phi_a = None
        notes.append(
            "integral of |phi||a| diverges; the convolution kernel has no "
            "finite value at the origin"
        )

    passed = sqrt_ok and abs(integral_phi - 1.0) <= 1e-8
    return AdmissibilityReport(
        integral_phi=integral_phi,
        l1_phi=l1_phi,
        l1_phi_sqrt_a=l1_phi_sqrt_a,
        passed=passed,
        l1_phi_a=l1_phi_a,
        notes=tuple(notes),
    )


def scale_superlevel_measure(w: WeightSpec, a: ScaleSpec, x: float) -> float:
    """phi-measure of the superlevel set {t : |a(t)| > |x|}.

    Because |a| is decreasing on (0, inf) this is the integral of phi
    over {|t| < T} with T the inverse of |a| at |x|; the boundary set
    {|a(t)| = |x|} consists of at most two points and carries no mass.
    """
    ax = abs(float(x))
    if ax == 0.0:
        T = math.inf
    else:
        T = _abs_inverse(a, ax)
    pieces = []
    for lo, hi in w.support():
        lo2, hi2 = max(lo, -T), min(hi, T)
        if lo2 < hi2:
            pieces.append((lo2, hi2))
    if not pieces:
        return 0.0
    sing = tuple(s for s in (set(w.singular_points()) | {0.0}) if any(
        lo <= s <= hi for lo, hi in pieces
    ))
    g = Integrand(lambda t: _eval_weight_clipped(w, t), tuple(pieces), sing)
    return quad.integrate(g, rel_tol=1e-10, abs_tol=1e-12).value


def weight_from_config(cfg: dict | str) -> WeightSpec:
    """Weight config JSON: {"family": ..., "p": number?, "alpha": number?,
    "table": path?}; the table file is a two-column CSV `t,phi`."""
    if isinstance(cfg, str):
        try:
            cfg = json.loads(cfg)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"weight config is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict) or "family" not in cfg:
        raise ConfigError("weight config must be an object with a 'family' key")
    family = cfg["family"]
    if family == "tabulated":
        path = cfg.get("table")
        if not path:
            raise ConfigError("tabulated weight config needs a 'table' path")
        rows = Path(path).read_text().strip().splitlines()
        if rows and rows[0].replace(" ", "") == "t,phi":
            rows = rows[1:]
        try:
            data = np.array([[float(v) for v in r.split(",")] for r in rows])
        except ValueError as exc:
            raise ConfigError(f"bad weight table {path}: {exc}") from None
        return tabulated(data[:, 0], data[:, 1])
    kwargs = {}
    if "p" in cfg and cfg["p"] is not None:
        kwargs["p"] = float(cfg["p"])
    if "alpha" in cfg and cfg["alpha"] is not None:
        kwargs["alpha"] = float(cfg["alpha"])
    return WeightSpec(family, **kwargs)


def weight_to_config(w: WeightSpec) -> dict:
    cfg: dict = {"family": w.family}
    if w.family in ("power-tail", "power-bump"):
        cfg["p"] = w.p
    elif w.family == "riemann-liouville":
        cfg["alpha"] = w.alpha
    elif w.family == "tabulated":
        cfg["table"] = {
            "t": [float(v) for v in w.table_t],
            "phi": [float(v) for v in w.table_phi],
        }
    return cfg
