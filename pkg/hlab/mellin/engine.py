"""
Multiplicative convolution (s⋆t)(z) = ∫ s(y) t(z/y) Π_j |y_j|^{-1} dy.

``convolve_fast`` works axis by axis on log-grids with an FFT; the
``convolve_oracle`` integrates the defining formula directly.
"""
import logging as log
import math

import numpy as np
from scipy import fft

from hlab.errors import GridTooCoarse
from hlab.mellin.grid import LogGrid, SampledDensity, SampledPiece, plan_grids
from hlab.quadrature import Integrator
from hlab.settings import resolve

# second-order rule: halving the step divides the error by four
RICHARDSON_DIVISOR = 3


def _count(width, h):
    return int(math.floor(width / h + 1e-9)) + 1


def conv1d(kf, kg, h, n):
    """Samples of ∫ F(u) G(w-u) du on w_k = kf.lower + kg.lower + k h, k < n.

    Trapezoid sums come from one FFT; both ends of every overlap window are
    corrected with exact kernel values, which keeps the rule second order for
    kernels that are only piecewise smooth.
    """
    nf, ng = _count(kf.width, h), _count(kg.width, h)
    total = nf + ng + 1
    if total > n:
        raise GridTooCoarse('{} samples do not fit a grid of {}'.format(total, n))
    uf = kf.lower + h * np.arange(nf)
    ug = kg.lower + h * np.arange(ng)
    F, G = kf(uf), kg(ug)
    R = fft.irfft(fft.rfft(F, n) * fft.rfft(G, n), n)[:total]

    k = np.arange(total)
    w = kf.lower + kg.lower + k * h
    L = np.maximum(kf.lower, w - kg.upper)
    U = np.minimum(kf.upper, w - kg.lower)
    i_lo = np.maximum(0, k - (ng - 1))
    i_hi = np.minimum(nf - 1, k)
    has = i_lo <= i_hi
    lo_c = np.clip(i_lo, 0, nf - 1)
    hi_c = np.clip(i_hi, 0, nf - 1)
    f_first = F[lo_c] * G[np.clip(k - lo_c, 0, ng - 1)]
    f_last = F[hi_c] * G[np.clip(k - hi_c, 0, ng - 1)]
    f_L = kf(L) * kg(w - L)
    f_U = kf(U) * kg(w - U)
    u_first = kf.lower + lo_c * h
    u_last = kf.lower + hi_c * h
    inner = h * (R - (f_first + f_last) / 2) \
        + (u_first - L) * (f_L + f_first) / 2 \
        + (U - u_last) * (f_last + f_U) / 2
    bare = np.where(U > L, (U - L) * (f_L + f_U) / 2, 0.0)
    out = np.zeros(n)
    out[:total] = np.where(has, inner, bare)
    return out, total


def _halved(plan):
    """The grid with twice the density whose even nodes are `plan`'s nodes."""
    return LogGrid(plan.quadrant, plan.origin, tuple(h / 2 for h in plan.h),
                   tuple(2 * n for n in plan.n))


def _convolve(plans, sp, tp, d):
    pieces = []
    for plan, (a, b) in zip(plans, [(a, b) for a in sp for b in tp]):
        values, counts = [], []
        for j in range(d):
            v, c = conv1d(a.kernels[j], b.kernels[j], plan.h[j], plan.n[j])
            values.append(v)
            counts.append(c)
        pieces.append(SampledPiece(a.weight * b.weight, plan, tuple(values), tuple(counts)))
    log.debug('fast convolution: %d piece pairs on n=%s', len(pieces),
              plans[0].n if plans else None)
    return SampledDensity(pieces, d)


def node_difference(coarse, fine):
    """Relative sup-difference of two samplings where `fine` halves every step.

    Node k of a coarse axis is node 2k of the fine one, so no interpolation
    enters. In d > 1 the tensor difference is bounded axis by axis through
    Πa - Πb = Σ_j (Π_{i<j} b_i)(a_j - b_j)(Π_{i>j} a_i).
    """
    err, scale = 0.0, 0.0
    for p, q in zip(coarse.pieces, fine.pieces):
        a = list(p.values)
        b = [v[::2] for v in q.values]
        top_a = [float(np.max(np.abs(v))) for v in a]
        top_b = [float(np.max(np.abs(v))) for v in b]
        gaps = [float(np.max(np.abs(u - v))) for u, v in zip(a, b)]
        w = abs(p.weight)
        bound = sum(np.prod(top_b[:j]) * gaps[j] * np.prod(top_a[j + 1:])
                    for j in range(len(a)))
        err = max(err, w * float(bound))
        scale = max(scale, w * float(np.prod(top_b)))
    if err == 0.0:
        return 0.0
    return err / scale if scale > 0 else math.inf


def convolve_fast(s, t, grid=None, settings=None, certify=True):
    """s⋆t sampled on log-grids; `grid` is a size n or plans from plan_grids.

    With `certify` the result is sampled on the grid of twice the density
    whose nodes contain the requested ones, and the two samplings are
    compared node by node. The rule is second order, so the error left in
    the finer samples is about a third of that difference; GridTooCoarse
    when it exceeds mellin_tol. The estimate is kept on `result.error`.
    """
    settings = resolve(settings)
    if grid is None or isinstance(grid, int):
        plans, sp, tp = plan_grids(s, t, grid or settings.grid_n, settings)
    else:
        plans = list(grid)
        if not plans:
            raise ValueError('no grid plans given')
        _, sp, tp = plan_grids(s, t, plans[0].n[0], settings)
    d = s.dimension
    coarse = _convolve(plans, sp, tp, d)
    if not certify:
        return coarse
    fine = _convolve([_halved(p) for p in plans], sp, tp, d)
    fine.error = node_difference(coarse, fine) / RICHARDSON_DIVISOR
    if fine.error > settings.mellin_tol:
        raise GridTooCoarse('n={} cannot certify s⋆t: estimated relative error {:.3e} > {:g}'
                            .format(plans[0].n[0], fine.error, settings.mellin_tol))
    return fine


def _floats(region):
    boxes = region.normalized().boxes
    lo = np.array([[iv.as_floats()[0] for iv in b] for b in boxes], dtype=float)
    hi = np.array([[iv.as_floats()[1] for iv in b] for b in boxes], dtype=float)
    return lo, hi


def convolve_oracle(s, t, zs, settings=None):
    """Direct adaptive quadrature of the induced density at every row of zs."""
    settings = resolve(settings)
    d = s.dimension
    zs = np.asarray(zs, dtype=float).reshape(-1, d)
    slo, shi = _floats(s.support_of())
    tlo, thi = _floats(t.support_of())
    if np.any((tlo <= 0) & (thi >= 0)):
        raise ValueError('the oracle needs supp t inside (R\\0)^d')
    z = zs[:, None, None, :]
    # y ∈ z / [c, d] for a fixed-sign t interval
    with np.errstate(divide='ignore', invalid='ignore'):
        a = z / tlo[None, None, :, :]
        b = z / thi[None, None, :, :]
    lo = np.where(z == 0, np.inf, np.minimum(a, b))
    hi = np.where(z == 0, -np.inf, np.maximum(a, b))
    lo = np.maximum(lo, slo[None, :, None, :])
    hi = np.minimum(hi, shi[None, :, None, :])
    ok = np.all(hi > lo, axis=-1)
    owner = np.nonzero(ok)[0]
    out = np.zeros(zs.shape[0])
    if len(owner) == 0:
        return out
    zrow = zs[owner]

    def func(y, comp):
        zz = zrow[comp]
        return s.kernel(y) * t.kernel(zz / y) / np.prod(np.abs(y), axis=1)

    values, _ = Integrator(func, lo[ok], hi[ok], settings).run()
    np.add.at(out, owner, values)
    return out


def richardson_check(s, t, n=None, settings=None, points=None):
    """Relative difference between the n-grid and the 2n-grid samplings of s⋆t.

    The comparison runs on the n-grid nodes unless `points` are given.
    GridTooCoarse above mellin_tol.
    """
    settings = resolve(settings)
    n = n or settings.grid_n
    plans, sp, tp = plan_grids(s, t, n, settings)
    d = s.dimension
    coarse = _convolve(plans, sp, tp, d)
    fine = _convolve([_halved(p) for p in plans], sp, tp, d)
    if points is None:
        diff = node_difference(coarse, fine)
    else:
        a, b = coarse.values_at(points), fine.values_at(points)
        scale = max(float(np.max(np.abs(b))), 1e-300)
        diff = float(np.max(np.abs(a - b))) / scale
    if diff > settings.mellin_tol:
        raise GridTooCoarse('n={} and n={} differ by {:.3e} (relative)'.format(n, 2 * n, diff))
    return diff
