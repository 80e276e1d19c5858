"""Pure-numpy kernel quadrature (reference backend).

Evaluates, for the analytic weight families with the reciprocal scale
map, the kernel

    K(s) = (1/pi) int phi(t) sin(|a(t)| s) / s dt
         = (2/(pi s)) int_D g(u) sin(s u) du          (u = 1/t),

where g and D per family are

    power-tail(p):          g = (p-1)/2 * u^(p-2),            D = (0, 1)
    power-bump(p) / p=0:    g = (1-p)/2 * u^(p-2),            D = (1, inf)
    riemann-liouville(al):  g = (1+al)/2 (1-1/u)^al u^(-2),   D = (1, inf)

Strategy per |s| = sigma: an adaptive Gauss-Legendre 7/15 stage over the
first few half-periods (it owns all endpoint singularities), then exact
half-period cells aligned with the zeros of sin(sigma*u).  Long runs of
cells collapse to two 48-cell alternating series summed by iterated
averaging (Longman's method); for the finite-domain family the series
continues g analytically past u = 1 and the surplus is subtracted the
same way.  Everything is batched across the s array; refinement order
is deterministic.
"""

from __future__ import annotations

import math

import numpy as np

FAMILY_CODES = {
    "power-tail": 0,
    "power-bump": 1,
    "adjoint-hardy": 1,
    "riemann-liouville": 2,
}

_N_ACCEL = 48
_FRONT_HALF_PERIODS = 8
_SMALL_PHASE = 16.0 * math.pi
_MAX_DIRECT_CELLS = 20000
_MAX_ROUNDS = 90

_X7, _W7 = np.polynomial.legendre.leggauss(7)
_X15, _W15 = np.polynomial.legendre.leggauss(15)
_XALL = np.concatenate([_X7, _X15])


def _g_values(family: int, param: float, u: np.ndarray) -> np.ndarray:
    if family == 0:
        return (0.5 * (param - 1.0)) * u ** (param - 2.0)
    if family == 1:
        return (0.5 * (1.0 - param)) * u ** (param - 2.0)
    base = np.clip(1.0 - 1.0 / u, 0.0, None)
    return (0.5 * (1.0 + param)) * base**param * u**-2.0


def _mono_from(family: int, param: float) -> float:
    """g is monotone nonincreasing beyond this point (inf: never)."""
    if family == 0:
        return 0.0 if param <= 2.0 else math.inf
    if family == 1:
        return 1.0
    return 1.0 + 0.5 * param


def _pair(family, param, sigma, u0, u1):
    """7/15 pair on panels [u0,u1] of g(u)*sin(sigma*u); returns
    (value, error, mass)."""
    mid = 0.5 * (u0 + u1)
    half = 0.5 * (u1 - u0)
    u = mid[:, None] + half[:, None] * _XALL[None, :]
    v = _g_values(family, param, u) * np.sin(sigma[:, None] * u)
    lo = (v[:, :7] @ _W7) * half
    hi = (v[:, 7:] @ _W15) * half
    mass = (np.abs(v[:, 7:]) @ _W15) * half
    err = np.abs(hi - lo) + 1e-16 * mass
    return hi, err, mass


def _adaptive(family, param, sigma, lo, hi, tol, rel_tol):
    """Batched adaptive stage over per-sigma intervals [lo, hi].

    Returns per-sigma (value, error_estimate).  Panels whose phase span
    exceeds two periods are split regardless of their error estimate.
    """
    ns = sigma.size
    span = sigma * (hi - lo)
    n0 = np.clip(np.ceil(span / (1.5 * math.pi)).astype(int) + 4, 6, 64)
    sidx = np.repeat(np.arange(ns), n0)
    steps = np.concatenate([np.arange(k) for k in n0]).astype(float)
    widths = ((hi - lo) / n0)[sidx]
    u0 = lo[sidx] + steps * widths
    u1 = u0 + widths
    val, err, mass = _pair(family, param, sigma[sidx], u0, u1)

    for _ in range(_MAX_ROUNDS):
        vsum = np.bincount(sidx, weights=val, minlength=ns)
        esum = np.bincount(sidx, weights=err, minlength=ns)
        goal = np.maximum(tol, (0.5 * rel_tol) * np.abs(vsum))
        capped = (sigma[sidx] * (u1 - u0) > 4.0 * math.pi) & (
            mass > 1e-3 * goal[sidx]
        )
        active = esum > goal
        if not np.any(active) and not np.any(capped):
            return vsum, esum
        counts = np.bincount(sidx, minlength=ns).astype(float)
        split = capped | (active[sidx] & (err > 0.5 * goal[sidx] / counts[sidx]))
        # always make progress on every active sigma: split its worst panel
        worst = np.full(ns, -1.0)
        np.maximum.at(worst, sidx, err)
        split |= active[sidx] & (err >= worst[sidx]) & (worst[sidx] > 0)
        if not np.any(split):
            return vsum, esum
        if sidx.size + np.count_nonzero(split) > 4_000_000:
            raise RuntimeError("kernel quadrature panel budget exhausted")
        ks, ku0, ku1 = sidx[~split], u0[~split], u1[~split]
        kval, kerr, kmass = val[~split], err[~split], mass[~split]
        ss, s0, s1 = sidx[split], u0[split], u1[split]
        sm = 0.5 * (s0 + s1)
        cidx = np.concatenate([ss, ss])
        c0 = np.concatenate([s0, sm])
        c1 = np.concatenate([sm, s1])
        cval, cerr, cmass = _pair(family, param, sigma[cidx], c0, c1)
        sidx = np.concatenate([ks, cidx])
        u0 = np.concatenate([ku0, c0])
        u1 = np.concatenate([ku1, c1])
        val = np.concatenate([kval, cval])
        err = np.concatenate([kerr, cerr])
        mass = np.concatenate([kmass, cmass])

    return (
        np.bincount(sidx, weights=val, minlength=ns),
        np.bincount(sidx, weights=err, minlength=ns),
    )


def _cells(family, param, sigma, kstart, count):
    """Half-period cells k = kstart .. kstart+count-1 (ragged across
    sigma); returns per-sigma (sum, error)."""
    ns = sigma.size
    total = int(np.sum(count))
    if total == 0:
        return np.zeros(ns), np.zeros(ns)
    sidx = np.repeat(np.arange(ns), count)
    offs = np.concatenate([[0], np.cumsum(count)[:-1]])
    k = np.arange(total) - np.repeat(offs, count) + np.repeat(kstart, count)
    z = math.pi / sigma[sidx]
    val, err, _ = _pair(family, param, sigma[sidx], k * z, (k + 1) * z)
    return (
        np.bincount(sidx, weights=val, minlength=ns),
        np.bincount(sidx, weights=err, minlength=ns),
    )


def _accel_tail(family, param, sigma, kstart):
    """Sum_{k>=kstart} of half-period cells by iterated averaging of the
    alternating partial sums; returns (limit, residual estimate, cell
    quadrature error)."""
    ns = sigma.size
    k = kstart[:, None] + np.arange(_N_ACCEL)[None, :]
    z = (math.pi / sigma)[:, None]
    sig = np.repeat(sigma, _N_ACCEL)
    val, err, _ = _pair(
        family, param, sig, (k * z).ravel(), ((k + 1) * z).ravel()
    )
    a = val.reshape(ns, _N_ACCEL)
    qerr = err.reshape(ns, _N_ACCEL).sum(axis=1)
    t = np.cumsum(a, axis=1)
    prev = t[:, -1].copy()
    resid = np.abs(a[:, -1])
    while t.shape[1] > 1:
        t = 0.5 * (t[:, :-1] + t[:, 1:])
        resid = np.abs(t[:, -1] - prev)
        prev = t[:, -1]
    return prev, resid, qerr


def kernel_batch(family: int, param: float, s: np.ndarray,
                 rel_tol: float, abs_tol: float) -> np.ndarray:
    sigma = np.abs(np.asarray(s, dtype=float))
    if np.any(sigma == 0.0) or not np.all(np.isfinite(sigma)):
        raise ValueError("kernel quadrature needs finite s != 0")
    ns = sigma.size
    J = np.zeros(ns)
    # tolerance on J translated from the requested tolerance on K
    tolJ = np.maximum(abs_tol * 0.5 * math.pi * sigma, 1e-300)

    if family == 0:
        lo_dom, hi_dom = 0.0, 1.0
    else:
        lo_dom, hi_dom = 1.0, math.inf

    if family == 0:
        small = sigma * (hi_dom - lo_dom) <= _SMALL_PHASE
        if np.any(small):
            sg = sigma[small]
            v, _ = _adaptive(family, param, sg, np.zeros_like(sg),
                             np.ones_like(sg), tolJ[small], rel_tol)
            J[small] = v
        big = ~small
        if np.any(big):
            sg = sigma[big]
            z = math.pi / sg
            m_lo = np.full(sg.size, _FRONT_HALF_PERIODS)
            m_hi = np.floor(sg / math.pi).astype(int)
            v, _ = _adaptive(family, param, sg, np.zeros_like(sg),
                             m_lo * z, tolJ[big], rel_tol)
            n_mid = m_hi - m_lo
            increasing = param > 2.0
            if increasing and np.any(n_mid > _MAX_DIRECT_CELLS):
                raise RuntimeError(
                    "kernel cell budget exceeded for an increasing-envelope "
                    f"weight (p={param:g}); reduce |s|"
                )
            direct = n_mid <= (144 if not increasing else _MAX_DIRECT_CELLS)
            cv, _ = _cells(family, param, sg, m_lo,
                           np.where(direct, n_mid, 0))
            v = v + cv
            if np.any(~direct):
                idx = ~direct
                f_lim, _, _ = _accel_tail(family, param, sg[idx], m_lo[idx])
                b_lim, _, _ = _accel_tail(family, param, sg[idx], m_hi[idx])
                v[idx] += f_lim - b_lim
            # stub [m_hi*z, 1]
            stub0 = m_hi * z
            has_stub = stub0 < 1.0 - 1e-15
            if np.any(has_stub):
                sv, _, _ = _pair(family, param, sg[has_stub], stub0[has_stub],
                                 np.ones(int(has_stub.sum())))
                v[has_stub] += sv
            J[big] = v
    else:
        z = math.pi / sigma
        m_lo = np.ceil(lo_dom / z).astype(int) + _FRONT_HALF_PERIODS
        front_end = m_lo * z
        v, _ = _adaptive(family, param, sigma, np.full(ns, lo_dom),
                         front_end, tolJ, rel_tol)
        m_acc = m_lo.copy()
        mono = _mono_from(family, param)
        if mono > lo_dom:
            m_acc = np.maximum(m_lo, np.ceil(mono / z).astype(int) + 2)
        n_direct = m_acc - m_lo
        if np.any(n_direct > 10 * _MAX_DIRECT_CELLS):
            raise RuntimeError("kernel cell budget exceeded; reduce |s|")
        cv, _ = _cells(family, param, sigma, m_lo, n_direct)
        t_lim, _, _ = _accel_tail(family, param, sigma, m_acc)
        J = v + cv + t_lim

    return (2.0 / (math.pi * sigma)) * J
