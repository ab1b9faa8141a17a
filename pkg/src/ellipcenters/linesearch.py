"""One-dimensional minimization of a convex function on the ray v >= 0.

Bracket the minimum by doubling, shrink the bracket by golden-section, then
take parabolic-fit polish steps on a fixed stencil.  The polish matters: a
pure golden-section search bottoms out near sqrt(machine eps) because the
function values it compares become indistinguishable, while the parabola
vertex stays accurate well past that.
"""
from __future__ import annotations

import math

from .errors import NumericError

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_POLISH_SCALES = (1e-4, 1e-6)
_MACHEPS = 2.220446049250313e-16


def minimize_on_ray(h, v0: float = 1.0, rel_tol: float = 1e-8,
                    max_evals: int = 10_000, h0: float | None = None):
    """Minimize convex h over v >= 0, starting the bracket search at v0.

    Returns (v, h(v), evaluations).  Raises NumericError when the evaluation
    budget runs out or h turns up NaN.
    """
    evals = 0

    def call(v):
        nonlocal evals
        if evals >= max_evals:
            raise NumericError("one-dimensional search exceeded its evaluation budget")
        evals += 1
        val = float(h(v))
        if math.isnan(val):
            raise NumericError("one-dimensional search hit a NaN value")
        return val

    if h0 is None:
        h0 = call(0.0)
    best_v, best_h = 0.0, h0

    v1 = v0 if (v0 > 0.0 and math.isfinite(v0)) else 1.0
    h1 = call(v1)
    if h1 < best_h:
        best_v, best_h = v1, h1
    if h1 >= h0:
        lo, hi = 0.0, v1
    else:
        # double until the values turn upward; overflow to +inf also closes it
        a, b, hb = 0.0, v1, h1
        while True:
            c = 2.0 * b
            hc = call(c)
            if hc < best_h:
                best_v, best_h = c, hc
            if hc >= hb:
                lo, hi = a, c
                break
            a, b, hb = b, c, hc

    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = call(x1), call(x2)
    while hi - lo > rel_tol * (1.0 + hi):
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = call(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = call(x2)
    for v, fv in ((x1, f1), (x2, f2)):
        if fv < best_h:
            best_v, best_h = v, fv

    for scale in _POLISH_SCALES:
        delta = scale * (1.0 + abs(best_v))
        hm = call(best_v - delta)  # h must be defined slightly past v = 0
        hp = call(best_v + delta)
        denom = hp - 2.0 * best_h + hm
        if denom <= 0.0 or not math.isfinite(denom):
            continue
        cand = max(best_v + 0.5 * delta * (hm - hp) / denom, 0.0)
        hcand = call(cand)
        # accept through rounding noise: near the minimum the true values
        # differ by less than eps * |h|
        if hcand <= best_h + 4.0 * _MACHEPS * (1.0 + abs(hcand)):
            best_v, best_h = cand, min(hcand, best_h)
        elif hm < best_h and best_v - delta >= 0.0:
            best_v, best_h = best_v - delta, hm
        elif hp < best_h:
            best_v, best_h = best_v + delta, hp

    return best_v, best_h, evals
