"""Generic sign-change scanning and bracketed root refinement.

Shared by the analytic spectrum solver and the shooting oracle so both
find and polish roots with identical machinery.
"""

from __future__ import annotations

from .errors import ConvergenceError

__all__ = ["scan_sign_changes", "refine_bracket"]


def scan_sign_changes(fn, grid):
    """Evaluate fn on the grid and return (lo, hi) bracket pairs where the
    sign flips. Exact zeros on the grid become degenerate brackets."""
    brackets = []
    prev_x = grid[0]
    prev_f = fn(prev_x)
    for x in grid[1:]:
        fx = fn(x)
        if prev_f == 0.0:
            brackets.append((prev_x, prev_x))
        elif fx != 0.0 and (prev_f < 0.0) != (fx < 0.0):
            brackets.append((prev_x, x))
        prev_x, prev_f = x, fx
    if prev_f == 0.0:
        brackets.append((prev_x, prev_x))
    return brackets


def refine_bracket(fn, lo, hi, width_tol, max_iter):
    """Shrink a sign-change bracket to width_tol and return (root, f(root),
    iterations, (lo, hi)).

    Bisection with secant acceleration: the secant candidate is used only
    while it falls safely inside the current bracket, otherwise the step
    falls back to plain bisection, so the iterate can never leave the
    initial bracket. Raises ConvergenceError if the width tolerance is not
    reached within max_iter iterations.
    """
    if hi < lo:
        lo, hi = hi, lo
    f_lo = fn(lo)
    if f_lo == 0.0:
        return lo, 0.0, 0, (lo, lo)
    f_hi = fn(hi)
    if f_hi == 0.0:
        return hi, 0.0, 0, (hi, hi)
    if (f_lo < 0.0) == (f_hi < 0.0):
        raise ValueError(f"no sign change on bracket ({lo}, {hi})")

    it = 0
    while hi - lo > width_tol:
        if it >= max_iter:
            raise ConvergenceError(
                f"bracket width {hi - lo:.3e} still above {width_tol:.3e} "
                f"after {max_iter} iterations",
                bracket=(lo, hi),
            )
        mid = 0.5 * (lo + hi)
        # secant through the bracket endpoints, kept off the edges; every
        # other iteration bisect outright so the width provably halves at
        # least once per pair of steps
        denom = f_hi - f_lo
        if it % 2 == 0 and denom != 0.0:
            x = (lo * f_hi - hi * f_lo) / denom
            margin = 0.125 * (hi - lo)
            if not (lo + margin < x < hi - margin):
                x = mid
        else:
            x = mid
        fx = fn(x)
        it += 1
        if fx == 0.0:
            return x, 0.0, it, (x, x)
        if (fx < 0.0) == (f_lo < 0.0):
            lo, f_lo = x, fx
        else:
            hi, f_hi = x, fx

    root = 0.5 * (lo + hi)
    return root, fn(root), it, (lo, hi)
