"""Vectorised adaptive quadrature.

Three building blocks:

* ``integrate``: globally adaptive 21-point Gauss-Kronrod over finite or
  infinite intervals, with a tanh-sinh fallback when subdivision stalls.
* ``fourier_integral``: int_a^b f(t) exp(-i w t) dt.  Finite pieces are cut
  into one-period panels; infinite tails are either truncated where the
  envelope of ``f`` is negligible or summed half-period by half-period and
  accelerated with Wynn's epsilon algorithm (this also Abel-sums tails whose
  envelope does not decay).
* ``wynn_epsilon``: the sequence accelerator used above.

Integrands are called with 1-D float arrays and must return arrays of the
same length (real or complex).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError

__all__ = ["QuadResult", "integrate", "integrate_segments", "tanh_sinh",
           "fourier_integral", "wynn_epsilon"]

# 21-point Kronrod extension of the 10-point Gauss rule (non-negative half).
_XK = np.array([
    0.0,
    0.14887433898163121,
    0.29439286270146020,
    0.43339539412924719,
    0.56275713466860468,
    0.67940956829902441,
    0.78081772658641690,
    0.86506336668898451,
    0.93015749135570823,
    0.97390652851717172,
    0.99565716302580808,
])
_WK = np.array([
    0.14944555400291691,
    0.14773910490133849,
    0.14277593857706008,
    0.13470921731147333,
    0.12349197626206585,
    0.10938715880229764,
    0.093125454583697606,
    0.075039674810919953,
    0.054755896574351996,
    0.032558162307964727,
    0.011694638867371874,
])
_WG = np.array([
    0.29552422471475287,
    0.26926671930999636,
    0.21908636251598204,
    0.14945134915058059,
    0.066671344308688138,
])

_NODES = np.concatenate([-_XK[:0:-1], _XK])
_WK_FULL = np.concatenate([_WK[:0:-1], _WK])
_WG_FULL = np.zeros(21)
# Gauss nodes sit at odd positions of the positive Kronrod list
for _i, _w in zip(range(1, 11, 2), _WG):
    _WG_FULL[10 + _i] = _w
    _WG_FULL[10 - _i] = _w

_EPS = np.finfo(float).eps
_TINY = np.finfo(float).tiny


@dataclass(frozen=True)
class QuadResult:
    value: complex | float
    error: float
    n_eval: int
    converged: bool

    def require(self, what: str = "integral"):
        if not self.converged:
            raise ConvergenceError(
                f"{what} did not converge (error estimate {self.error:.3e})",
                value=self.value, estimate=self.error)
        return self.value


def _gk21(f, a, b):
    """Apply the G10/K21 pair on each interval [a_i, b_i]."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    x = c[:, None] + h[:, None] * _NODES[None, :]
    fx = np.asarray(f(x.ravel())).reshape(x.shape)
    resk = h * (fx @ _WK_FULL)
    resg = h * (fx @ _WG_FULL)
    afx = np.abs(fx)
    resabs = np.abs(h) * (afx @ _WK_FULL)
    mean = resk / np.where(h != 0, 2.0 * h, 1.0)
    resasc = np.abs(h) * (np.abs(fx - mean[:, None]) @ _WK_FULL)
    err = np.abs(resk - resg)
    with np.errstate(invalid="ignore", divide="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / np.where(resasc > 0, resasc, 1.0)) ** 1.5)
    err = np.where((resasc > 0) & (err > 0), scaled, err)
    err = np.where(resabs > _TINY / (10 * _EPS), np.maximum(10 * _EPS * resabs, err), err)
    if not np.all(np.isfinite(resk)):
        err = np.where(np.isfinite(resk), err, np.inf)
    return resk, err


def _map_infinite(f, a, b, scale):
    """Return (g, lo, hi, to_x) so that int_a^b f = int_lo^hi g."""
    if math.isfinite(a) and math.isfinite(b):
        return f, a, b, (lambda t: t)
    if math.isfinite(a):
        def g(x):
            u = 1.0 - x
            return f(a + scale * x / u) * (scale / (u * u))
        return g, 0.0, 1.0, (lambda t: (t - a) / (scale + t - a))
    if math.isfinite(b):
        def g(x):
            u = 1.0 - x
            return f(b - scale * x / u) * (scale / (u * u))
        return g, 0.0, 1.0, (lambda t: (b - t) / (scale + b - t))
    raise ValueError("doubly infinite interval must be split before mapping")


def integrate_segments(f, edges, *, rtol=1e-10, atol=0.0, limit=4000):
    """Adaptive GK21 over consecutive finite segments ``edges[i]..edges[i+1]``.

    Returns per-segment values, per-segment errors, evaluation count and a
    convergence flag.  The tolerance applies to the sum over all segments.
    """
    edges = np.asarray(edges, dtype=float)
    nseg = len(edges) - 1
    A = edges[:-1].copy()
    B = edges[1:].copy()
    owner = np.arange(nseg)
    vals, errs = _gk21(f, A, B)
    n_eval = 21 * len(A)
    converged = False
    while True:
        total = vals.sum()
        err = errs.sum()
        # panels that cancel cannot be resolved below roundoff in their magnitudes
        tol = max(atol, rtol * abs(total), 100 * _EPS * float(np.abs(vals).sum()))
        if err <= tol:
            converged = True
            break
        if len(A) >= limit:
            break
        width_ok = np.abs(B - A) > 64 * _EPS * np.maximum(np.abs(A), np.abs(B)) + _TINY
        cand = np.where(width_ok, errs, 0.0)
        if not np.any(cand > 0):
            break
        order = np.argsort(-cand)
        remaining = err - np.cumsum(cand[order])
        k = int(np.searchsorted(-remaining, -0.5 * tol)) + 1
        k = max(1, min(k, len(order), limit - len(A)))
        pick = order[:k]
        pick = pick[cand[pick] > 0]
        if len(pick) == 0:
            break
        mid = 0.5 * (A[pick] + B[pick])
        newA = np.concatenate([A[pick], mid])
        newB = np.concatenate([mid, B[pick]])
        nv, ne = _gk21(f, newA, newB)
        n_eval += 21 * len(newA)
        keep = np.ones(len(A), dtype=bool)
        keep[pick] = False
        A = np.concatenate([A[keep], newA])
        B = np.concatenate([B[keep], newB])
        owner = np.concatenate([owner[keep], owner[pick], owner[pick]])
        vals = np.concatenate([vals[keep], nv])
        errs = np.concatenate([errs[keep], ne])
    seg_vals = np.zeros(nseg, dtype=vals.dtype)
    seg_errs = np.zeros(nseg)
    np.add.at(seg_vals, owner, vals)
    np.add.at(seg_errs, owner, errs)
    return seg_vals, seg_errs, n_eval, converged


def _de_nodes(level):
    h = 2.0 ** -level
    k = np.arange(-int(6.0 / h), int(6.0 / h) + 1)
    s = k * h
    u = 0.5 * math.pi * np.sinh(s)
    x = np.tanh(u)
    w = h * 0.5 * math.pi * np.cosh(s) / np.cosh(u) ** 2
    keep = (np.abs(x) < 1.0) & (w > 1e-300)
    return x[keep], w[keep], np.abs(s[keep])


def tanh_sinh(f, a, b, *, rtol=1e-10, atol=0.0, max_level=8):
    """Double-exponential (tanh-sinh) rule on a finite interval.

    Tolerates integrable endpoint singularities.  The error estimate is the
    change between successive halvings of the step.
    """
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    prev = None
    n_eval = 0
    for level in range(1, max_level + 1):
        x, w, _ = _de_nodes(level)
        # nodes from the distance to the nearest endpoint avoid cancellation
        t = np.where(x < 0, a + h * (1.0 + x), b - h * (1.0 - x))
        t = np.clip(t, min(a, b), max(a, b))
        fx = np.asarray(f(t))
        fx = np.where(np.isfinite(fx), fx, 0.0)
        val = h * np.sum(w * fx)
        n_eval += len(x)
        if prev is not None:
            err = abs(val - prev)
            if err <= max(atol, rtol * abs(val)):
                return QuadResult(val, err, n_eval, True)
        prev = val
    return QuadResult(prev, abs(val - prev) if level > 1 else np.inf, n_eval, False)


def integrate(f, a, b, *, rtol=1e-10, atol=0.0, points=(), limit=4000, scale=1.0):
    """Adaptive integral of ``f`` over [a, b]; either end may be infinite.

    ``points`` are interior breakpoints (kinks, jumps, peaks).  ``scale`` is
    the characteristic width used by the tail mapping t = a + scale*x/(1-x).
    """
    if a == b:
        return QuadResult(0.0, 0.0, 0, True)
    if a > b:
        r = integrate(f, b, a, rtol=rtol, atol=atol, points=points, limit=limit, scale=scale)
        return QuadResult(-r.value, r.error, r.n_eval, r.converged)
    pts = sorted(p for p in points if a < p < b and math.isfinite(p))
    if not math.isfinite(a) and not math.isfinite(b):
        mid = pts[len(pts) // 2] if pts else 0.0
        left = integrate(f, a, mid, rtol=rtol, atol=0.5 * atol, points=pts, limit=limit, scale=scale)
        right = integrate(f, mid, b, rtol=rtol, atol=0.5 * atol, points=pts, limit=limit, scale=scale)
        val = left.value + right.value
        return QuadResult(val, left.error + right.error, left.n_eval + right.n_eval,
                          left.converged and right.converged)
    g, lo, hi, to_x = _map_infinite(f, a, b, scale)
    mapped = [to_x(p) for p in pts]
    if not math.isfinite(a) or not math.isfinite(b):
        # a few extra cuts so the decaying tail is resolved from the start
        mapped += [1 - 2.0 ** -k for k in range(1, 6)]
    edges = np.unique(np.clip(np.array([lo, hi] + mapped, dtype=float), lo, hi))
    vals, errs, n_eval, ok = integrate_segments(g, edges, rtol=rtol, atol=atol, limit=limit)
    val = vals.sum()
    err = float(errs.sum())
    if not isinstance(val, complex) and np.iscomplexobj(vals):
        val = complex(val)
    if ok:
        return QuadResult(val if np.iscomplexobj(vals) else float(val), err, n_eval, True)
    # fall back to tanh-sinh on each segment
    de_total = 0.0
    de_err = 0.0
    de_eval = 0
    de_ok = True
    for lo_i, hi_i in zip(edges[:-1], edges[1:]):
        r = tanh_sinh(g, lo_i, hi_i, rtol=rtol, atol=atol / max(len(edges) - 1, 1))
        de_total += r.value
        de_err += r.error
        de_eval += r.n_eval
        de_ok = de_ok and r.converged
    if de_ok or de_err < err:
        return QuadResult(de_total, de_err, n_eval + de_eval, de_ok)
    return QuadResult(val if np.iscomplexobj(vals) else float(val), err, n_eval, False)


def wynn_epsilon(seq):
    """Wynn epsilon extrapolation of the partial sums in ``seq``.

    Returns (estimate, error) where error compares the estimates obtained
    from the full sequence and the sequence minus its last element.
    """
    seq = list(seq)

    def _estimate(s):
        n = len(s)
        if n < 3:
            return s[-1]
        prev = [0.0] * (n + 1)
        cur = list(s)
        best = s[-1]
        col = 0
        while len(cur) > 1:
            nxt = []
            for k in range(len(cur) - 1):
                d = cur[k + 1] - cur[k]
                if d == 0:
                    # exact stagnation: the sequence has converged
                    return cur[k + 1] if col % 2 == 0 else best
                nxt.append(prev[k + 1] + 1.0 / d)
            prev, cur = cur, nxt
            col += 1
            if col % 2 == 0:
                best = cur[-1]
        return best

    est = _estimate(seq)
    if len(seq) < 4:
        return est, abs(seq[-1] - seq[-2]) if len(seq) > 1 else math.inf
    est_prev = _estimate(seq[:-1])
    return est, abs(est - est_prev)


def _probe_truncation(f, start, direction, floor, peak, scale, max_length):
    """First distance beyond ``start`` where the remaining tail mass of |f|
    (envelope times distance) is below floor*peak*scale, or None."""
    if peak == 0:
        return 0.0
    d = scale
    probe = np.array([0.9, 0.95, 1.0, 1.05, 1.1, 1.5, 2.0])
    while d <= max_length:
        t = start + direction * d * probe
        if np.all(np.abs(np.asarray(f(t))) * d * probe < floor * peak * scale):
            return d
        d *= 2.0
    return None


def _oscillatory_tail(g, start, direction, period, *, atol, max_panels=4000, chunk=16):
    """Sum half-period panels of g beyond ``start`` with epsilon acceleration."""
    partial = []
    total = 0.0
    n_eval = 0
    last_est = None
    stable = 0
    k = 0
    est, err = 0.0, math.inf
    while k < max_panels:
        edges = start + direction * period * np.arange(k, k + chunk + 1)
        if direction < 0:
            edges = edges[::-1]
        vals, errs, ne, _ = integrate_segments(g, edges, rtol=1e-13, atol=atol / 8, limit=64 * chunk)
        if direction < 0:
            vals = vals[::-1]
        n_eval += ne
        for v in vals:
            total = total + v
            partial.append(total)
        k += chunk
        est, err = wynn_epsilon(partial[-min(len(partial), 40):])
        if last_est is not None:
            err = max(err, abs(est - last_est))
        last_est = est
        if err <= atol:
            stable += 1
            if stable >= 2:
                return QuadResult(est, err, n_eval, True)
        else:
            stable = 0
    return QuadResult(est, err, n_eval, False)


def fourier_integral(f, omega, a=-math.inf, b=math.inf, *, rtol=1e-10, atol=1e-15,
                     points=(), scale=1.0, core=None, envelope_floor=1e-16,
                     max_truncated_panels=4000):
    """int_a^b f(t) exp(-i omega t) dt for real or complex ``f``.

    ``core`` is a finite interval (inside [a, b]) holding the structure of
    ``f``; tails beyond it are handled by truncation or acceleration.
    """
    omega = float(omega)
    if omega == 0.0:
        r = integrate(f, a, b, rtol=rtol, atol=atol, points=points, scale=scale)
        return QuadResult(complex(r.value), r.error, r.n_eval, r.converged)

    def g(t):
        return f(t) * np.exp(-1j * omega * t)

    period = 2.0 * math.pi / abs(omega)
    if abs(omega) * scale < 1e-3:
        # the phase barely turns over the structure of f: no panelling needed
        # halves of an odd f cancel, so the relative target must be near machine level
        r = integrate(g, a, b, rtol=min(rtol, 1e-13), atol=atol, points=points, scale=scale)
        return QuadResult(complex(r.value), r.error, r.n_eval, r.converged)
    pts = sorted(p for p in points if a < p < b and math.isfinite(p))
    if core is None:
        lo = max(a, min(pts[0] if pts else 0.0, 0.0) - 8.0 * scale)
        hi = min(b, max(pts[-1] if pts else 0.0, 0.0) + 8.0 * scale)
    else:
        lo, hi = max(a, core[0]), min(b, core[1])

    def finite_piece(u, v, target):
        if v <= u:
            return QuadResult(0j, 0.0, 0, True)
        n = int(math.ceil((v - u) / period))
        grid = np.linspace(u, v, n + 1) if n > 1 else np.array([u, v])
        inner = [p for p in pts if u < p < v]
        edges = np.unique(np.concatenate([grid, inner]))
        vals, errs, ne, ok = integrate_segments(g, edges, rtol=rtol, atol=target,
                                                limit=max(4000, 8 * len(edges)))
        return QuadResult(complex(vals.sum()), float(errs.sum()), ne, ok)

    core_res = finite_piece(lo, hi, atol)
    total = core_res.value
    err = core_res.error
    n_eval = core_res.n_eval
    ok = core_res.converged
    sample = np.linspace(lo, hi, 257)
    peak = float(np.max(np.abs(np.asarray(f(sample))))) if hi > lo else 0.0
    tail_atol = max(atol, rtol * abs(total)) / 4
    for edge, end, direction in ((hi, b, 1.0), (lo, a, -1.0)):
        if edge == end:
            continue
        if math.isfinite(end):
            r = finite_piece(min(edge, end), max(edge, end), tail_atol)
        else:
            max_len = max_truncated_panels * period / 2
            d = _probe_truncation(f, edge, direction, envelope_floor, peak, scale, max_len)
            if d is not None:
                u, v = sorted((edge, edge + direction * d))
                r = finite_piece(u, v, tail_atol)
            else:
                r = _oscillatory_tail(g, edge, direction, period / 2, atol=tail_atol)
        total += r.value
        err += r.error
        n_eval += r.n_eval
        ok = ok and r.converged
    tol = max(atol, rtol * abs(total))
    return QuadResult(total, err, n_eval, ok and err <= 4 * tol)
