from __future__ import annotations

from typing import Callable


def bisect_first_true(pred: Callable[[float], bool], lo: float, hi: float, xtol: float) -> float:
    """Locate ``inf{t in [lo, hi] : pred(t)}`` for a predicate that is monotone
    (false, then true). Requires ``pred(hi)``; returns ``lo`` when ``pred(lo)``.

    The returned point is the right end of the final bracket, so ``pred`` holds
    there and the true boundary lies within ``xtol`` to its left.
    """
    if pred(lo):
        return lo
    if not pred(hi):
        raise ValueError("predicate is false at the right end of the bracket")
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi
