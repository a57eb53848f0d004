"""Interval normal form for site sets on a ring ``Z/NZ``."""

from __future__ import annotations

from typing import Iterable


def arc_members(lo: int, hi: int, ring: int) -> frozenset:
    """Sites of the closed interval ``[lo, hi]`` reduced mod ``ring``."""
    if hi < lo:
        return frozenset()
    return frozenset(x % ring for x in range(lo, hi + 1))


def arc_of(members: Iterable[int], ring: int, origin: int = 0):
    """Write ``members - origin`` as a circular arc ``(a, b)``, or None.

    The representative is the one whose midpoint is closest to 0 (ties go
    to the left), so ``{N-2, N-1}`` reads as ``(-2, -1)``. The full ring is
    ``(0, N-1)``; the empty set gives None.
    """
    rel = sorted({(int(m) - origin) % ring for m in members})
    if not rel:
        return None
    if len(rel) == ring:
        return (0, ring - 1)
    # an arc has exactly one gap between consecutive members (cyclically)
    gaps = [i for i in range(len(rel)) if (rel[(i + 1) % len(rel)] - rel[i]) % ring != 1]
    if len(gaps) != 1:
        return None
    start = rel[(gaps[0] + 1) % len(rel)]
    length = len(rel)
    best = None
    for shift in (-ring, 0, ring):
        a = start + shift
        b = a + length - 1
        key = (abs(a + b), a + b)
        if best is None or key < best[0]:
            best = (key, (a, b))
    return best[1]


def ring_distance(x: int, y: int, ring: int) -> int:
    d = (x - y) % ring
    return min(d, ring - d)


def format_arc(arc) -> str:
    if arc is None:
        return "-"
    return f"[{arc[0]},{arc[1]}]"
