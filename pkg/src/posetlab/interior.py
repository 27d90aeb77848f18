"""Interior systems of a finite poset and the sets attached to them.

An interior system is a full subposet ``Q`` such that every ``x`` has a
largest element of ``Q`` below it.  That element is the floor of ``x`` and
the elements sharing a floor ``y`` form the fiber of ``y``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NotAligned, NotInteriorSystem
from .poset import Mask, Poset, bits


@dataclass(frozen=True)
class InteriorSystem:
    poset: Poset
    sub: Mask
    floor: tuple[int, ...]
    fibers: dict[int, Mask]
    aligned: bool
    nu: dict[int, int] | None
    qposet: Poset = field(repr=False)
    # Q-local id of each P element of Q, and the reverse table
    to_q: dict[int, int] = field(repr=False)
    to_p: tuple[int, ...] = field(repr=False)

    def fiber(self, y: int) -> Mask:
        return self.fibers[y]

    def down_fiber(self, y: int) -> Mask:
        """Elements whose floor lies below ``y``."""
        below = self.poset.down[y] & self.sub
        return sum(self.fibers[z] for z in bits(below))

    def ceil_preimage(self, mask: Mask) -> Mask:
        """Union of the fibers over ``mask`` (a subset of Q)."""
        return sum(self.fibers[y] for y in bits(mask & self.sub))

    def floor_image(self, mask: Mask) -> Mask:
        out = 0
        for x in bits(mask):
            out |= 1 << self.floor[x]
        return out

    def to_q_mask(self, mask: Mask) -> Mask:
        """Translate a subset of Q from P ids to Q-local ids."""
        return sum(1 << self.to_q[i] for i in bits(mask & self.sub))

    def to_p_mask(self, qmask: Mask) -> Mask:
        return sum(1 << self.to_p[j] for j in bits(qmask))

    def require_aligned(self) -> None:
        if not self.aligned:
            raise NotAligned("NotAligned: interior system is not aligned")


def _filtered(poset: Poset, mask: Mask) -> bool:
    """Every pair in ``mask`` has a common upper bound inside ``mask``."""
    ids = list(bits(mask))
    for k, a in enumerate(ids):
        for b in ids[k + 1 :]:
            if not poset.up[a] & poset.up[b] & mask:
                return False
    return True


def interior_system(poset: Poset, sub: Mask) -> InteriorSystem:
    """Floor function, fibers and both alignment tests for ``Q = sub``."""
    if not sub:
        raise ValueError("Q must be non-empty")
    floor = []
    for x in range(poset.n):
        below = poset.down[x] & sub
        if not below:
            raise NotInteriorSystem(poset.labels[x], "nothing of Q lies below")
        tops = poset.maximal(below)
        if tops & (tops - 1):
            raise NotInteriorSystem(poset.labels[x], "several maximal candidates")
        floor.append(tops.bit_length() - 1)
    fibers = {y: 0 for y in bits(sub)}
    for x, y in enumerate(floor):
        fibers[y] |= 1 << x

    def down_fiber(y: int) -> Mask:
        return sum(fibers[z] for z in bits(poset.down[y] & sub))

    by_filters = all(_filtered(poset, down_fiber(y)) for y in fibers)
    al1 = all(down_fiber(y) == poset.downset(fibers[y]) for y in fibers)
    al2 = all(_filtered(poset, fibers[y]) for y in fibers)
    if by_filters != (al1 and al2):
        raise AssertionError("alignment characterisations disagree")
    nu = None
    if by_filters:
        nu = {}
        for y, fib in fibers.items():
            top = poset.maximal(fib)
            assert top and not top & (top - 1), "aligned fiber without maximum"
            nu[y] = top.bit_length() - 1
    ids = tuple(bits(sub))
    return InteriorSystem(
        poset=poset,
        sub=sub,
        floor=tuple(floor),
        fibers=fibers,
        aligned=by_filters,
        nu=nu,
        qposet=poset.subposet(sub, name=f"{poset.name}|Q"),
        to_q={p: q for q, p in enumerate(ids)},
        to_p=ids,
    )


def tbar(system: InteriorSystem, t: Mask) -> Mask:
    """Elements ``x`` of Q whose fiber meets ``t`` in a non-empty upset of the fiber."""
    system.require_aligned()
    poset = system.poset
    out = 0
    for x, fib in system.fibers.items():
        part = t & fib
        if part and poset.upset(part) & fib == part:
            out |= 1 << x
    assert poset.hull(out) & system.sub == out, "tbar should be convex in Q"
    return out


__all__ = ["InteriorSystem", "interior_system", "tbar"]
