"""Finite posets, their Hasse diagrams and intervals.

Elements get dense ids ``0..n-1`` in input order.  Every subset is an ``int``
bitmask over those ids, so ``1 << i`` is the singleton ``{i}`` and set algebra
is plain bitwise arithmetic.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Iterator
from functools import cached_property

from .errors import CycleDetected, DuplicateLabel, UnknownLabel

Mask = int


def bits(mask: Mask) -> Iterator[int]:
    """Yield the ids set in ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: Mask) -> int:
    return bin(mask).count("1")


def interval_key(mask: Mask) -> tuple[int, tuple[int, ...]]:
    """Sort key of the canonical interval order: size, then sorted ids."""
    ids = tuple(bits(mask))
    return (len(ids), ids)


class Poset:
    """A finite poset stored through its up- and down-closures.

    ``up[i]`` is the mask of all ``x`` with ``i <= x`` (``i`` included) and
    ``down[i]`` the mask of all ``x <= i``.  Instances are treated as
    immutable; derived data is cached on first use.
    """

    def __init__(self, labels: Iterable[str], up: Iterable[Mask], name: str = "P") -> None:
        self.labels: tuple[str, ...] = tuple(labels)
        self.up: tuple[Mask, ...] = tuple(up)
        self.name = name
        n = len(self.labels)
        if len(self.up) != n:
            raise ValueError("one up-closure per element required")
        seen: set[str] = set()
        for lab in self.labels:
            if not lab or any(ch.isspace() for ch in lab):
                raise ValueError(f"invalid label {lab!r}")
            if lab in seen:
                raise DuplicateLabel(f"DuplicateLabel: {lab!r}")
            seen.add(lab)
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        down = [0] * n
        for i, u in enumerate(self.up):
            for j in bits(u):
                down[j] |= 1 << i
        self.down: tuple[Mask, ...] = tuple(down)
        for i in range(n):
            if not (self.up[i] >> i) & 1:
                raise ValueError("up-closures must be reflexive")
            if self.up[i] & self.down[i] != 1 << i:
                raise CycleDetected(f"CycleDetected: through {self.labels[i]!r}")
        succ: list[list[int]] = [[] for _ in range(n)]
        pred: list[list[int]] = [[] for _ in range(n)]
        for a in range(n):
            strict_up = self.up[a] & ~(1 << a)
            for b in bits(strict_up):
                between = strict_up & self.down[b] & ~(1 << b)
                if not between:
                    succ[a].append(b)
                    pred[b].append(a)
        self.succ: tuple[tuple[int, ...], ...] = tuple(tuple(s) for s in succ)
        self.pred: tuple[tuple[int, ...], ...] = tuple(tuple(p) for p in pred)
        self.covers: tuple[tuple[int, int], ...] = tuple((a, b) for a in range(n) for b in self.succ[a])
        for i in range(n):
            for j in bits(self.up[i]):
                if self.up[j] & ~self.up[i]:
                    raise ValueError("up-closures are not transitive")

    # basic accessors -----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> Mask:
        return (1 << self.n) - 1

    def leq(self, a: int, b: int) -> bool:
        return bool((self.up[a] >> b) & 1)

    def less(self, a: int, b: int) -> bool:
        return a != b and self.leq(a, b)

    def id_of(self, label: str) -> int:
        try:
            return self.index[label]
        except KeyError:
            raise UnknownLabel(f"UnknownLabel: {label!r}") from None

    def mask_of(self, labels: Iterable[str]) -> Mask:
        m = 0
        for lab in labels:
            m |= 1 << self.id_of(lab)
        return m

    def label_list(self, mask: Mask) -> list[str]:
        return [self.labels[i] for i in bits(mask)]

    def leq_matrix(self) -> list[list[bool]]:
        return [[self.leq(a, b) for b in range(self.n)] for a in range(self.n)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return self.labels == other.labels and self.up == other.up

    def __hash__(self) -> int:
        return hash((self.labels, self.up))

    def __repr__(self) -> str:
        edges = ", ".join(f"{self.labels[a]}<{self.labels[b]}" for a, b in self.covers)
        return f"Poset({self.name!r}: {edges or ' '.join(self.labels)})"

    # closures and subsets ---------------------------------------------------

    def upset(self, mask: Mask) -> Mask:
        out = 0
        for i in bits(mask):
            out |= self.up[i]
        return out

    def downset(self, mask: Mask) -> Mask:
        out = 0
        for i in bits(mask):
            out |= self.down[i]
        return out

    def hull(self, mask: Mask) -> Mask:
        """Smallest convex set containing ``mask``."""
        return self.upset(mask) & self.downset(mask)

    def minimal(self, mask: Mask) -> Mask:
        return sum(1 << i for i in bits(mask) if self.down[i] & mask == 1 << i)

    def maximal(self, mask: Mask) -> Mask:
        return sum(1 << i for i in bits(mask) if self.up[i] & mask == 1 << i)

    def is_convex(self, mask: Mask) -> bool:
        return self.hull(mask) == mask

    def components(self, mask: Mask) -> list[Mask]:
        """Connected components of ``mask`` under comparability, ordered by lowest id."""
        comps = []
        rest = mask
        while rest:
            seed = rest & -rest
            comp = seed
            frontier = seed
            while frontier:
                grow = 0
                for i in bits(frontier):
                    grow |= (self.up[i] | self.down[i]) & mask
                frontier = grow & ~comp
                comp |= grow
            comps.append(comp)
            rest &= ~comp
        return comps

    def is_connected(self, mask: Mask | None = None) -> bool:
        mask = self.full if mask is None else mask
        return len(self.components(mask)) <= 1

    def is_interval(self, mask: Mask) -> bool:
        return self.is_convex(mask) and self.is_connected(mask)

    def covers_above(self, mask: Mask) -> Mask:
        """Elements ``y`` with ``S ⋖ y``: outside S, above S, and minimal with that property."""
        above = self.upset(mask)
        out = 0
        for y in bits(above & ~mask):
            if self.down[y] & above & ~(1 << y) & ~mask == 0:
                out |= 1 << y
        return out

    def covers_below(self, mask: Mask) -> Mask:
        below = self.downset(mask)
        out = 0
        for y in bits(below & ~mask):
            if self.up[y] & below & ~(1 << y) & ~mask == 0:
                out |= 1 << y
        return out

    def bracket(self, a: Mask, b: Mask, kind: str = "closed") -> Mask:
        """The sets ``A↑∩B↓`` (closed), ``A↑∖B↑`` (left_open) and ``B↓∖A↓`` (right_open)."""
        if kind == "closed":
            return self.upset(a) & self.downset(b)
        if kind == "left_open":
            return self.upset(a) & ~self.upset(b)
        if kind == "right_open":
            return self.downset(b) & ~self.downset(a)
        raise ValueError(f"unknown bracket kind {kind!r}")

    # Hasse diagram ------------------------------------------------------------

    def indegree(self, i: int) -> int:
        return len(self.pred[i])

    def outdegree(self, i: int) -> int:
        return len(self.succ[i])

    def degree(self, i: int) -> int:
        return len(self.pred[i]) + len(self.succ[i])

    def degree_stats(self) -> dict[str, object]:
        degs = [(self.indegree(i), self.outdegree(i)) for i in range(self.n)]
        return {
            "degrees": {self.labels[i]: d for i, d in enumerate(degs)},
            "sources": [self.labels[i] for i, (ind, _) in enumerate(degs) if ind == 0],
            "sinks": [self.labels[i] for i, (_, out) in enumerate(degs) if out == 0],
            "leaves": [self.labels[i] for i, (ind, out) in enumerate(degs) if ind + out == 1],
        }

    def neighbours(self, i: int) -> tuple[int, ...]:
        return tuple(sorted(self.pred[i] + self.succ[i]))

    def leaves(self) -> Mask:
        return sum(1 << i for i in range(self.n) if self.degree(i) == 1)

    def is_tree(self) -> bool:
        return self.n >= 1 and len(self.covers) == self.n - 1 and self.is_connected()

    # intervals ------------------------------------------------------------------

    @cached_property
    def intervals(self) -> tuple[Mask, ...]:
        """All non-empty intervals in canonical order."""
        found: set[Mask] = set()
        queue: deque[Mask] = deque()
        for i in range(self.n):
            found.add(1 << i)
            queue.append(1 << i)
        while queue:
            s = queue.popleft()
            nbrs = 0
            for i in bits(s):
                for j in self.pred[i] + self.succ[i]:
                    nbrs |= 1 << j
            for j in bits(nbrs & ~s):
                t = self.hull(s | 1 << j)
                if t not in found:
                    found.add(t)
                    queue.append(t)
        return tuple(sorted(found, key=interval_key))

    @cached_property
    def interval_index(self) -> dict[Mask, int]:
        return {s: k for k, s in enumerate(self.intervals)}

    # derived posets ----------------------------------------------------------------

    def opposite(self) -> Poset:
        return Poset(self.labels, self.down, name=self.name)

    @cached_property
    def op(self) -> Poset:
        """Cached opposite poset, so its own caches are shared."""
        return self.opposite()

    def subposet(self, mask: Mask, name: str | None = None) -> Poset:
        """Full subposet on ``mask``; ids are renumbered in ascending order."""
        ids = list(bits(mask))
        pos = {old: new for new, old in enumerate(ids)}
        up = []
        for old in ids:
            up.append(sum(1 << pos[j] for j in bits(self.up[old] & mask)))
        return Poset([self.labels[i] for i in ids], up, name=name or self.name)

    def relabel(self, mapping: dict[str, str]) -> Poset:
        return Poset([mapping.get(lab, lab) for lab in self.labels], self.up, name=self.name)


def poset_from_covers(labels: Iterable[str], edges: Iterable[tuple[str, str]], name: str = "P") -> Poset:
    """Build the poset generated by ``a <= b`` for every edge ``(a, b)``.

    Redundant edges are dropped from the cover relation.
    """
    labels = list(labels)
    index: dict[str, int] = {}
    for i, lab in enumerate(labels):
        if lab in index:
            raise DuplicateLabel(f"DuplicateLabel: {lab!r}")
        index[lab] = i
    n = len(labels)
    out: list[set[int]] = [set() for _ in range(n)]
    indeg = [0] * n
    for a, b in edges:
        for lab in (a, b):
            if lab not in index:
                raise UnknownLabel(f"UnknownLabel: {lab!r}")
        ia, ib = index[a], index[b]
        if ia == ib:
            raise CycleDetected(f"CycleDetected: loop at {a!r}")
        if ib not in out[ia]:
            out[ia].add(ib)
            indeg[ib] += 1
    # Kahn's algorithm; leftover vertices lie on a cycle
    order = []
    ready = deque(i for i in range(n) if indeg[i] == 0)
    while ready:
        v = ready.popleft()
        order.append(v)
        for w in sorted(out[v]):
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    if len(order) < n:
        stuck = [labels[i] for i in range(n) if indeg[i] > 0]
        raise CycleDetected(f"CycleDetected: among {stuck}")
    up = [1 << i for i in range(n)]
    for v in reversed(order):
        for w in out[v]:
            up[v] |= up[w]
    return Poset(labels, up, name=name)


def chain(n: int, prefix: str = "c") -> Poset:
    labels = [f"{prefix}{i}" for i in range(n)]
    return poset_from_covers(labels, zip(labels, labels[1:]), name=f"chain{n}")


def antichain(n: int, prefix: str = "a") -> Poset:
    return poset_from_covers([f"{prefix}{i}" for i in range(n)], [], name=f"antichain{n}")


__all__ = [
    "Mask",
    "Poset",
    "antichain",
    "bits",
    "chain",
    "interval_key",
    "popcount",
    "poset_from_covers",
]
