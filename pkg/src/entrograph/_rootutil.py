"""Bracketed scalar root finding: bisection to a coarse width, then
secant polish with bracket projection.  Used for the monotone defining
equations of the incremental formulas and the primitive-cycle roots."""

from __future__ import annotations

from typing import Callable


def bracketed_root(fn: Callable[[float], float], lo: float, hi: float,
                   f_lo: float | None = None, f_hi: float | None = None,
                   coarse: float = 1e-2, xtol_rel: float = 1e-15,
                   max_iter: int = 240) -> tuple[float, float, int]:
    """Root of a continuous function with a sign change on [lo, hi].

    Returns (x, f(x), evaluations).  ``coarse`` bounds the relative width
    reached by pure bisection before secant steps take over; secant
    iterates falling outside the current bracket are replaced by
    midpoints.
    """
    evals = 0
    if f_lo is None:
        f_lo = fn(lo)
        evals += 1
    if f_hi is None:
        f_hi = fn(hi)
        evals += 1
    if f_lo == 0.0:
        return lo, 0.0, evals
    if f_hi == 0.0:
        return hi, 0.0, evals
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise ValueError(f"no sign change on [{lo}, {hi}]")

    scale = max(1.0, abs(lo), abs(hi))
    while hi - lo > coarse * scale and evals < max_iter:
        mid = 0.5 * (lo + hi)
        f_mid = fn(mid)
        evals += 1
        if f_mid == 0.0:
            return mid, 0.0, evals
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid

    x_prev, f_prev = lo, f_lo
    x_cur, f_cur = hi, f_hi
    if abs(f_lo) < abs(f_hi):
        x_prev, f_prev, x_cur, f_cur = hi, f_hi, lo, f_lo
    best = (x_cur, f_cur)
    while evals < max_iter:
        denom = f_cur - f_prev
        if denom != 0.0:
            x_next = x_cur - f_cur * (x_cur - x_prev) / denom
        else:
            x_next = 0.5 * (lo + hi)
        if not (lo < x_next < hi):
            x_next = 0.5 * (lo + hi)
        step = abs(x_next - x_cur)
        f_next = fn(x_next)
        evals += 1
        if (f_next > 0.0) == (f_lo > 0.0):
            lo, f_lo = x_next, f_next
        else:
            hi, f_hi = x_next, f_next
        x_prev, f_prev = x_cur, f_cur
        x_cur, f_cur = x_next, f_next
        if abs(f_cur) < abs(best[1]):
            best = (x_cur, f_cur)
        if f_next == 0.0 or step <= xtol_rel * max(1.0, abs(x_next)) \
                or hi - lo <= xtol_rel * max(1.0, abs(x_next)):
            break
    return best[0], best[1], evals
