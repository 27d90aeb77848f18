"""Path-shaped segments of a Hasse diagram, their contraction, and reflections."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import HypothesisUnmet, NotExtremal, SegmentTooShort
from .poset import Mask, Poset, interval_key, poset_from_covers


@dataclass(frozen=True)
class AnSegment:
    """A path ``l_1 - ... - l_n`` of element ids inside some poset."""

    elements: tuple[int, ...]
    equioriented: bool

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def mask(self) -> Mask:
        return sum(1 << i for i in self.elements)

    def reversed(self) -> AnSegment:
        return AnSegment(self.elements[::-1], self.equioriented)

    def labels(self, poset: Poset) -> list[str]:
        return [poset.labels[i] for i in self.elements]


def _end_ok(poset: Poset, end: int, nxt: int) -> bool:
    # the end may only have its segment arrow on the side that arrow uses
    if nxt in poset.succ[end]:
        return poset.outdegree(end) == 1
    return poset.indegree(end) == 1


def _orientation(poset: Poset, path: tuple[int, ...]) -> int:
    """+1 if every arrow points along the path, -1 if every arrow points back, 0 otherwise."""
    ups = [b in poset.succ[a] for a, b in zip(path, path[1:])]
    if all(ups):
        return 1
    if not any(ups):
        return -1
    return 0


def is_segment(poset: Poset, path: tuple[int, ...]) -> bool:
    """Degree and end conditions plus the interval requirement."""
    n = len(path)
    if n < 2 or len(set(path)) != n:
        return False
    for a, b in zip(path, path[1:]):
        if b not in poset.succ[a] and a not in poset.succ[b]:
            return False
    if any(poset.degree(v) != 2 for v in path[1:-1]):
        return False
    if not (_end_ok(poset, path[0], path[1]) and _end_ok(poset, path[-1], path[-2])):
        return False
    if n > 2 and path[-1] in poset.neighbours(path[0]):
        return False
    mask = sum(1 << v for v in path)
    return poset.is_interval(mask)


def make_segment(poset: Poset, path: tuple[int, ...]) -> AnSegment:
    return AnSegment(tuple(path), _orientation(poset, tuple(path)) != 0)


def find_an_segments(poset: Poset, min_len: int = 2, maximal: bool = True) -> list[AnSegment]:
    """Segments with at least ``min_len`` elements, by default only the maximal ones.

    Equioriented segments are reported bottom to top; the others start at the
    end with the smaller id.
    """
    if min_len < 2:
        raise ValueError("min_len must be at least 2")
    found: dict[Mask, tuple[int, ...]] = {}
    for start in range(poset.n):
        for step in poset.neighbours(start):
            path = [start, step]
            while True:
                tup = tuple(path)
                if is_segment(poset, tup):
                    found.setdefault(sum(1 << v for v in tup), tup)
                last = path[-1]
                if poset.degree(last) != 2:
                    break
                nxt = [v for v in poset.neighbours(last) if v != path[-2]]
                if not nxt or nxt[0] in path:
                    break
                path.append(nxt[0])
    masks = list(found)
    if maximal:
        masks = [m for m in masks if not any(m != o and m & o == m for o in masks)]
    out = []
    for m in sorted(masks, key=interval_key):
        path = found[m]
        orient = _orientation(poset, path)
        if orient < 0 or (orient == 0 and path[-1] < path[0]):
            path = path[::-1]
        if len(path) >= min_len:
            out.append(AnSegment(path, orient != 0))
    return out


def contraction_case(poset: Poset, seg: AnSegment) -> str | None:
    """Which hypothesis licenses removing ``l_4..l_n``: 'equioriented', 'leaf' or None."""
    if not is_segment(poset, seg.elements):
        return None
    if _orientation(poset, seg.elements) != 0:
        return "equioriented"
    if poset.degree(seg.elements[-1]) == 1:
        return "leaf"
    return None


def contract_segment(poset: Poset, seg: AnSegment) -> Poset:
    """Full subposet with ``l_4, ..., l_n`` removed."""
    if seg.n < 4:
        raise SegmentTooShort(f"SegmentTooShort: segment has {seg.n} elements, need at least 4")
    if contraction_case(poset, seg) is None:
        raise HypothesisUnmet(
            "HypothesisUnmet: segment is neither equioriented nor ends in a leaf "
            f"({' '.join(seg.labels(poset))})"
        )
    drop = sum(1 << v for v in seg.elements[3:])
    return poset.subposet(poset.full & ~drop)


def contract_all(poset: Poset) -> tuple[Poset, list[list[str]]]:
    """Contract qualifying segments until none of length four or more is left.

    Returns the reduced poset and the labels removed at each step.
    """
    trace: list[list[str]] = []
    current = poset
    while True:
        # longest first, so one step removes as much as possible
        for seg in sorted(find_an_segments(current, 4, maximal=False), key=lambda g: -g.n):
            usable = [o for o in (seg, seg.reversed()) if contraction_case(current, o)]
            if usable:
                trace.append([current.labels[i] for i in usable[0].elements[3:]])
                current = contract_segment(current, usable[0])
                break
        else:
            return current, trace


def is_extremal(poset: Poset, a: int) -> bool:
    return poset.indegree(a) == 0 or poset.outdegree(a) == 0


def reflect(poset: Poset, a: int) -> Poset:
    """Reverse every Hasse arrow at the sink or source ``a``."""
    if not is_extremal(poset, a):
        raise NotExtremal(f"NotExtremal: {poset.labels[a]!r} is neither a sink nor a source")
    edges = []
    for x, y in poset.covers:
        if a in (x, y):
            x, y = y, x
        edges.append((poset.labels[x], poset.labels[y]))
    return poset_from_covers(poset.labels, edges, name=poset.name)


def reflection_preserves_gldim(poset: Poset, a: int) -> bool:
    """Hypothesis under which reflecting at ``a`` keeps the global dimension.

    ``a`` must be extremal with ``m`` arrows (``m`` in {1, 2}) whose removal
    leaves exactly ``m`` connected pieces of the Hasse diagram.
    """
    if not is_extremal(poset, a):
        return False
    m = poset.degree(a)
    if m not in (1, 2):
        return False
    rest = poset.full & ~(1 << a)
    return len(poset.components(rest)) == m


__all__ = [
    "AnSegment",
    "contract_all",
    "contract_segment",
    "contraction_case",
    "find_an_segments",
    "is_extremal",
    "is_segment",
    "make_segment",
    "reflect",
    "reflection_preserves_gldim",
]
