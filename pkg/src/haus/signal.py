"""Uniform-grid signals, Fourier transforms, norms, and test inputs.

The Fourier pair is the non-unitary convention used throughout the
package: forward without prefactor, inverse with 1/(2pi),

    fhat(xi) = int f(x) exp(-i x xi) dx,
    f(x)     = (1/2pi) int fhat(xi) exp(i x xi) dxi,

approximated by a periodized DFT scaled by the grid spacing.  Signals
are real-valued; complex data lives only in Spectrum.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import HausError, InputFormatError

__all__ = [
    "SampledSignal",
    "Spectrum",
    "Grid",
    "AtomSpec",
    "forward_fourier",
    "inverse_fourier",
    "lp_norm",
    "sinc_transform",
    "make_atom",
    "make_bandlimited",
    "spectral_leakage",
    "fft_convolve_same",
    "subtract",
    "add",
    "scale",
    "read_signal_csv",
    "write_signal_csv",
    "read_spectrum_csv",
    "write_spectrum_csv",
    "InvalidInputError",
    "SymmetryViolationError",
    "ResolutionError",
    "AliasingError",
]


class InvalidInputError(HausError):
    pass


class SymmetryViolationError(HausError):
    pass


class ResolutionError(HausError):
    pass


class AliasingError(HausError):
    pass


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """Real-valued function sampled on the uniform grid x0 + i*dx."""

    x0: float
    dx: float
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x0", float(self.x0))
        object.__setattr__(self, "dx", float(self.dx))
        object.__setattr__(self, "values", _frozen_array(self.values))
        if not (self.dx > 0 and math.isfinite(self.dx) and math.isfinite(self.x0)):
            raise InvalidInputError("grid origin/spacing must be finite, dx > 0")
        if self.values.ndim != 1 or self.values.size < 2:
            raise InvalidInputError("need a 1-D signal with at least 2 samples")
        if not np.all(np.isfinite(self.values)):
            raise InvalidInputError("signal contains non-finite values")

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    def interp(self, xq) -> np.ndarray:
        """Linear interpolation, zero outside the grid hull."""
        return np.interp(np.asarray(xq, dtype=float), self.x, self.values,
                         left=0.0, right=0.0)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Complex frequency-domain samples on the uniform grid xi0 + k*dxi."""

    xi0: float
    dxi: float
    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=complex)
        arr.setflags(write=False)
        object.__setattr__(self, "xi0", float(self.xi0))
        object.__setattr__(self, "dxi", float(self.dxi))
        object.__setattr__(self, "values", arr)
        if not (self.dxi > 0 and math.isfinite(self.dxi)):
            raise InvalidInputError("dxi must be positive and finite")
        if arr.ndim != 1 or arr.size < 2:
            raise InvalidInputError("need a 1-D spectrum with at least 2 samples")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("spectrum contains non-finite values")

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def xi(self) -> np.ndarray:
        return self.xi0 + self.dxi * np.arange(self.n)


@dataclass(frozen=True)
class Grid:
    """Grid parameters (x0, dx, n) for signal generators."""

    x0: float
    dx: float
    n: int

    @classmethod
    def centered(cls, halfwidth: float, n: int) -> "Grid":
        dx = 2.0 * halfwidth / n
        return cls(-halfwidth, dx, n)

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)


@dataclass(frozen=True)
class AtomSpec:
    """Mean-zero, compactly supported test input of unit size:
    supported in [center-halfwidth, center+halfwidth], bounded by
    1/(2*halfwidth)."""

    center: float
    halfwidth: float
    shape: str = "smooth-odd-bump"

    def __post_init__(self):
        if not self.halfwidth > 0:
            raise InvalidInputError("halfwidth must be positive")
        if self.shape not in ("smooth-odd-bump", "difference-of-bumps"):
            raise InvalidInputError(f"unknown atom shape {self.shape!r}")


def forward_fourier(f: SampledSignal) -> Spectrum:
    """DFT approximation of fhat(xi) = int f(x) exp(-i x xi) dx.

    The signal is zero-padded on the right to the next power of two;
    the frequency grid covers [-pi/dx, pi/dx).
    """
    if not np.all(np.isfinite(f.values)):
        raise InvalidInputError("signal contains non-finite values")
    n = 1 << (f.n - 1).bit_length()
    vals = f.values
    if n != f.n:
        vals = np.concatenate([vals, np.zeros(n - f.n)])
    dxi = 2.0 * math.pi / (n * f.dx)
    xi0 = -math.pi / f.dx
    xi = xi0 + dxi * np.arange(n)
    spec = f.dx * np.exp(-1j * f.x0 * xi) * np.fft.fftshift(np.fft.fft(vals))
    return Spectrum(xi0, dxi, spec)


def inverse_fourier(F: Spectrum, x0: float | None = None) -> SampledSignal:
    """Inverse transform (1/2pi) int F(xi) exp(i x xi) dxi on the window
    of length 2pi/dxi starting at x0 (default: centered at the origin).

    The input must be conjugate-symmetric (a real signal's spectrum); an
    imaginary residue above 1e-9 of the L2 norm raises
    SymmetryViolationError, smaller residues are discarded.
    """
    n = F.n
    dx = 2.0 * math.pi / (n * F.dxi)
    if x0 is None:
        x0 = -0.5 * n * dx
    xi = F.xi
    phased = F.values * np.exp(1j * x0 * xi)
    vals = np.fft.ifft(np.fft.ifftshift(phased)) / dx
    norm = float(np.linalg.norm(vals))
    resid = float(np.linalg.norm(vals.imag))
    if norm > 0 and resid > 1e-9 * norm:
        raise SymmetryViolationError(
            f"spectrum is not conjugate-symmetric: imaginary residue "
            f"{resid / norm:.3e} of the L2 norm"
        )
    return SampledSignal(x0, dx, vals.real)


def lp_norm(f: SampledSignal, p: float) -> float:
    """Trapezoid-rule approximation of the Lp norm, p >= 1."""
    if p < 1:
        raise ValueError(f"Lp norm needs p >= 1, got {p}")
    return float(np.trapz(np.abs(f.values) ** p, dx=f.dx) ** (1.0 / p))


def sinc_transform(x: float) -> float:
    """Fourier transform of sin(t)/t: pi inside (-1,1), pi/2 on the
    boundary, 0 outside."""
    ax = abs(x)
    if ax < 1.0:
        return math.pi
    if ax == 1.0:
        return 0.5 * math.pi
    return 0.0


# Max of u*exp(-1/(1-u^2)) on (0,1), attained at u^2 = sqrt(2)-... the
# positive root of (1-u^2)^2 = 2u^2, i.e. u = (sqrt(6)-sqrt(2))/2.
_U_STAR = (math.sqrt(6.0) - math.sqrt(2.0)) / 2.0
_ODD_BUMP_MAX = _U_STAR * math.exp(-1.0 / (1.0 - _U_STAR**2))


def _bump(u: np.ndarray) -> np.ndarray:
    """Standard C-infinity bump exp(-1/(1-u^2)) on (-1,1), 0 outside."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    ui = u[inside]
    out[inside] = np.exp(-1.0 / (1.0 - ui * ui))
    return out


def make_atom(spec: AtomSpec, grid: Grid) -> SampledSignal:
    """Generate a mean-zero atom on the grid.

    An explicit mean-correction step projects out the residual mean
    within the support (so compact support is preserved), then the
    amplitude is clamped to the 1/(2*halfwidth) size bound.
    """
    x = grid.x
    c, h = spec.center, spec.halfwidth
    pts_across = int(np.count_nonzero(np.abs(x - c) <= h))
    if pts_across < 64:
        raise ResolutionError(
            f"grid has {pts_across} points across the atom support; need >= 64"
        )
    u = (x - c) / h
    if spec.shape == "smooth-odd-bump":
        vals = u * _bump(u) / (_ODD_BUMP_MAX * 2.0 * h)
    else:
        vals = (_bump(2.0 * u + 1.0) - _bump(2.0 * u - 1.0)) / (
            math.e ** -1.0 * 2.0 * h
        )
    corrector = _bump(u)
    mean = np.trapz(vals, dx=grid.dx)
    cmass = np.trapz(corrector, dx=grid.dx)
    vals = vals - (mean / cmass) * corrector
    bound = 1.0 / (2.0 * h)
    peak = float(np.max(np.abs(vals)))
    if peak > bound:
        vals *= bound / peak
    return SampledSignal(grid.x0, grid.dx, vals)


def make_bandlimited(B: float, grid: Grid, seed: int | None = None) -> SampledSignal:
    """Real mean-zero signal whose spectrum is supported in [-B, B].

    Built by inverse transform of fhat(xi) = i*xi*bump(xi/B) (times a
    random smooth modulation when seed is given), normalized to unit L2.
    """
    if not B > 0:
        raise ValueError("bandwidth must be positive")
    nyquist = math.pi / grid.dx
    if B >= nyquist:
        raise AliasingError(
            f"bandwidth {B:g} reaches the grid Nyquist frequency {nyquist:g}"
        )
    n = 1 << (grid.n - 1).bit_length()
    dxi = 2.0 * math.pi / (n * grid.dx)
    xi0 = -math.pi / grid.dx
    xi = xi0 + dxi * np.arange(n)
    shape = 1j * xi * _bump(xi / B)
    if seed is not None:
        rng = np.random.default_rng(seed)
        coef = rng.standard_normal(4)
        mod = (
            coef[0]
            + coef[1] * np.cos(math.pi * xi / B)
            + coef[2] * np.sin(math.pi * xi / B) * 1j * np.sign(xi)
            + coef[3] * np.cos(2 * math.pi * xi / B)
        )
        shape = shape * mod
    f = inverse_fourier(Spectrum(xi0, dxi, shape), x0=grid.x0)
    vals = f.values[: grid.n]
    nrm = float(np.sqrt(np.trapz(vals**2, dx=grid.dx)))
    if nrm == 0.0:
        raise HausError("degenerate band-limited signal")
    return SampledSignal(grid.x0, grid.dx, vals / nrm)


def spectral_leakage(f: SampledSignal) -> float:
    """Diagnostic in [0,1]: relative L2 mass in the outer grid cells plus
    near-Nyquist spectral mass.  Values above ~1e-6 mean the grid is too
    small (or too coarse) for spectral evaluation to be trusted."""
    v = f.values
    total = float(np.sum(v * v))
    if total == 0.0:
        return 0.0
    m = max(2, f.n // 32)
    edge = float(np.sum(v[:m] ** 2) + np.sum(v[-m:] ** 2))
    F = forward_fourier(f)
    a = np.abs(F.values) ** 2
    k = max(2, F.n // 16)
    near_nyq = float(np.sum(a[:k]) + np.sum(a[-k:]))
    return max(edge / total, near_nyq / float(np.sum(a)))


def fft_convolve_same(x: np.ndarray, k: np.ndarray) -> np.ndarray:
    """Linear (zero-padded) convolution, 'same' alignment, via FFT."""
    n = x.size + k.size - 1
    m = 1 << (n - 1).bit_length()
    y = np.fft.irfft(np.fft.rfft(x, m) * np.fft.rfft(k, m), m)[:n]
    start = (k.size - 1) // 2
    return y[start : start + x.size]


def _same_grid(f: SampledSignal, g: SampledSignal) -> None:
    if f.n != g.n or abs(f.dx - g.dx) > 1e-12 * f.dx or abs(f.x0 - g.x0) > 1e-9 * f.dx:
        raise InvalidInputError("signals live on different grids")


def subtract(f: SampledSignal, g: SampledSignal) -> SampledSignal:
    _same_grid(f, g)
    return SampledSignal(f.x0, f.dx, f.values - g.values)


def add(f: SampledSignal, g: SampledSignal) -> SampledSignal:
    _same_grid(f, g)
    return SampledSignal(f.x0, f.dx, f.values + g.values)


def scale(f: SampledSignal, c: float) -> SampledSignal:
    return SampledSignal(f.x0, f.dx, c * f.values)


def write_signal_csv(f: SampledSignal, path: str | Path) -> None:
    """Signal CSV: header `x,value`, one row per grid point."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "value"])
        for xi, v in zip(f.x, f.values):
            w.writerow([repr(float(xi)), repr(float(v))])


def read_signal_csv(path: str | Path) -> SampledSignal:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["x", "value"]:
        raise InputFormatError(f"{path}: expected header 'x,value'")
    try:
        data = np.array([[float(a), float(b)] for a, b in rows[1:]])
    except (ValueError, TypeError) as exc:
        raise InputFormatError(f"{path}: malformed row ({exc})") from None
    if data.shape[0] < 2:
        raise InputFormatError(f"{path}: need at least 2 rows")
    x, v = data[:, 0], data[:, 1]
    d = np.diff(x)
    if np.any(d <= 0):
        raise InputFormatError(f"{path}: x must be strictly increasing")
    dx = (x[-1] - x[0]) / (x.size - 1)
    if np.max(np.abs(d - dx)) > 1e-9 * dx:
        raise InputFormatError(f"{path}: grid is not equispaced within 1e-9*dx")
    return SampledSignal(x[0], dx, v)


def write_spectrum_csv(F: Spectrum, path: str | Path) -> None:
    """Spectrum CSV: header `xi,re,im`."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["xi", "re", "im"])
        for xi, v in zip(F.xi, F.values):
            w.writerow([repr(float(xi)), repr(float(v.real)), repr(float(v.imag))])


def read_spectrum_csv(path: str | Path) -> Spectrum:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["xi", "re", "im"]:
        raise InputFormatError(f"{path}: expected header 'xi,re,im'")
    try:
        data = np.array([[float(a), float(b), float(c)] for a, b, c in rows[1:]])
    except (ValueError, TypeError) as exc:
        raise InputFormatError(f"{path}: malformed row ({exc})") from None
    if data.shape[0] < 2:
        raise InputFormatError(f"{path}: need at least 2 rows")
    xi = data[:, 0]
    d = np.diff(xi)
    dxi = (xi[-1] - xi[0]) / (xi.size - 1)
    if np.any(d <= 0) or np.max(np.abs(d - dxi)) > 1e-9 * dxi:
        raise InputFormatError(f"{path}: xi grid is not equispaced")
    return Spectrum(xi[0], dxi, data[:, 1] + 1j * data[:, 2])
