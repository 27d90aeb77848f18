"""Named poset families and the diagram lists used for regression checks."""

from __future__ import annotations

import itertools
from collections.abc import Iterator

import numpy as np

from .diagram import Diagram, expand_diagram
from .errors import NotInteriorSystem
from .interior import interior_system
from .intres import gamma
from .linalg import GF, GF2
from .pmod import PersistenceModule, change_basis, cokernel, direct_sum, hom_basis, interval_module, kernel
from .poset import Mask, Poset, poset_from_covers


def a_type(orientation: str, prefix: str = "v") -> Poset:
    """Path ``v0 - v1 - ...`` with step ``i`` pointing right for ``>`` and left for ``<``."""
    labels = [f"{prefix}{i}" for i in range(len(orientation) + 1)]
    edges = [(labels[i], labels[i + 1]) if c == ">" else (labels[i + 1], labels[i]) for i, c in enumerate(orientation)]
    return poset_from_covers(labels, edges, name=f"A{len(labels)}{orientation}")


def all_a_type(n: int) -> Iterator[Poset]:
    if n == 1:
        yield poset_from_covers(["v0"], [], name="A1")
        return
    for steps in itertools.product("<>", repeat=n - 1):
        yield a_type("".join(steps))


def bipath(left: int, right: int) -> Poset:
    """Source and sink joined by two chains with ``left`` and ``right`` inner elements."""
    if left < 1 or right < 1:
        raise ValueError("both arms need an inner element")
    labels = ["s", "t"] + [f"l{i}" for i in range(left)] + [f"r{i}" for i in range(right)]
    edges = []
    for arm, k in (("l", left), ("r", right)):
        path = ["s"] + [f"{arm}{i}" for i in range(k)] + ["t"]
        edges.extend(zip(path, path[1:]))
    return poset_from_covers(labels, edges, name=f"bipath{left}{right}")


def star(k: int, outward: str | None = None) -> Poset:
    """Centre ``c`` with ``k`` leaves; ``outward[i]`` is ``>`` for ``c -> l_i``."""
    outward = outward or ">" * k
    labels = ["c"] + [f"l{i}" for i in range(k)]
    edges = [("c", f"l{i}") if o == ">" else (f"l{i}", "c") for i, o in enumerate(outward)]
    return poset_from_covers(labels, edges, name=f"star{k}")


def alternating_cycle(extrema: int, arms: tuple[int, ...] | None = None) -> Poset:
    """Cycle through ``extrema`` alternating sources and sinks.

    ``arms[i]`` inner elements sit on the equioriented arm after extremum ``t_i``.
    """
    if extrema < 2 or extrema % 2:
        raise ValueError("need an even number of extrema")
    arms = arms or (0,) * extrema
    labels = [f"t{i}" for i in range(extrema)]
    edges = []
    for i in range(extrema):
        inner = [f"t{i}_{j}" for j in range(arms[i])]
        labels.extend(inner)
        path = [f"t{i}", *inner, f"t{(i + 1) % extrema}"]
        if i % 2:
            path = path[::-1]
        edges.extend(zip(path, path[1:]))
    name = f"cycle{extrema}" + ("" if not any(arms) else "_" + "".join(map(str, arms)))
    return poset_from_covers(labels, edges, name=name)


def atilde_two_sinks(max_size: int) -> list[Poset]:
    """Single-cycle posets with two sinks and at most ``max_size`` elements, up to rotation and reflection."""
    seen = set()
    out = []
    for arms in itertools.product(range(max_size - 3), repeat=4):
        if 4 + sum(arms) > max_size:
            continue
        # rotations by two keep the source/sink pattern; reversal swaps arm order
        variants = [arms[k:] + arms[:k] for k in (0, 2)]
        variants += [tuple(reversed(v)) for v in variants]
        variants += [v[1:] + v[:1] for v in variants]
        key = min(variants)
        if key in seen:
            continue
        seen.add(key)
        try:
            out.append(alternating_cycle(4, arms))
        except Exception:
            continue
    return out


def random_tree(n: int, rng: np.random.Generator) -> Poset:
    """Uniform attachment tree with independently oriented edges."""
    labels = [f"x{i}" for i in range(n)]
    edges = []
    for i in range(1, n):
        j = int(rng.integers(0, i))
        edges.append((labels[j], labels[i]) if rng.random() < 0.5 else (labels[i], labels[j]))
    return poset_from_covers(labels, edges, name=f"tree{n}")


def random_connected_poset(n: int, rng: np.random.Generator, density: float = 0.35) -> Poset:
    """Random DAG on a shuffled order, re-drawn until its Hasse diagram is connected."""
    while True:
        order = rng.permutation(n)
        labels = [f"p{i}" for i in range(n)]
        edges = []
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < density:
                    edges.append((labels[order[i]], labels[order[j]]))
        poset = poset_from_covers(labels, edges, name=f"rand{n}")
        if poset.is_connected():
            return poset


def blown_up(q: Poset, fiber_sizes: list[int], name: str = "blowup") -> tuple[Poset, Mask]:
    """Replace each ``y`` of ``q`` by a chain ``y = y.0 < y.1 < ...`` ordered lexicographically.

    ``(y, i) <= (z, j)`` iff ``y < z`` or ``y == z and i <= j``; the bottoms
    form an aligned interior system whose fibers are the chains.
    """
    labels = []
    for y, k in zip(q.labels, fiber_sizes):
        labels += [y] + [f"{y}.{i}" for i in range(1, k)]
    edges = []
    tops = {}
    for y, k in zip(q.labels, fiber_sizes):
        chain = [y] + [f"{y}.{i}" for i in range(1, k)]
        edges += list(zip(chain, chain[1:]))
        tops[y] = chain[-1]
    for a, b in q.covers:
        edges.append((tops[q.labels[a]], q.labels[b]))
    poset = poset_from_covers(labels, edges, name=name)
    return poset, poset.mask_of(q.labels)


def random_aligned_system(rng: np.random.Generator, max_size: int = 7) -> tuple[Poset, Mask]:
    """Random aligned pair ``(P, Q)`` with ``|P| <= max_size``.

    Alternates between lexicographic blow-ups of a random ``Q`` and rejection
    sampling of ``Q`` inside a random connected ``P``.
    """
    while True:
        roll = rng.random()
        if roll < 0.5:
            if roll < 0.25:
                # shapes of positive global dimension, so Q carries non-interval modules
                q = [star(4, "".join(rng.choice(list("<>"), 4))), alternating_cycle(6), star(3, "".join(rng.choice(list("<>"), 3)))][int(rng.integers(0, 3))]
            else:
                q = random_connected_poset(int(rng.integers(2, max(3, max_size - 1))), rng)
            nq = q.n
            sizes = [1] * nq
            for _ in range(max(0, max_size - nq)):
                if rng.random() < 0.6:
                    sizes[int(rng.integers(0, nq))] += 1
            return blown_up(q, sizes)
        poset = random_connected_poset(int(rng.integers(3, max_size + 1)), rng)
        sub = poset.minimal(poset.full)
        for i in range(poset.n):
            if rng.random() < 0.4:
                sub |= 1 << i
        if sub == poset.full and rng.random() < 0.7:
            continue
        try:
            system = interior_system(poset, sub)
        except NotInteriorSystem:
            continue
        if system.aligned:
            return poset, sub


def random_interval_sum(poset: Poset, rng: np.random.Generator, field: GF = GF2, max_total: int = 6) -> PersistenceModule:
    """Direct sum of random interval modules in a random basis."""
    ivals = poset.intervals
    parts = []
    total = 0
    while True:
        s = ivals[int(rng.integers(0, len(ivals)))]
        size = bin(s).count("1")
        if parts and total + size > max_total:
            break
        parts.append(interval_module(poset, s, field))
        total += size
        if rng.random() < 0.35:
            break
    module = direct_sum(parts, poset, field)[0]
    bases = []
    for d in module.dims:
        while True:
            b = field.random(d, d, rng)
            if field.rank(b) == d:
                break
        bases.append(b)
    return change_basis(module, bases)


def random_module(poset: Poset, rng: np.random.Generator, field: GF = GF2, max_total: int = 10) -> PersistenceModule:
    """Random commutative module of total dimension at most ``max_total``.

    Draws are interval sums, kernels or cokernels of a random map between two
    interval sums, or ``Γ_S`` of a random interval (the last two are often
    not interval-decomposable).
    """
    while True:
        a = random_interval_sum(poset, rng, field, max_total=max(1, max_total // 2))
        roll = rng.random()
        if roll < 0.3:
            module = a
        elif roll < 0.6:
            picks = rng.integers(0, len(poset.intervals), size=4)
            module = max((gamma(poset, poset.intervals[int(k)], field) for k in picks), key=lambda g: g.total_dim)
        else:
            b = random_interval_sum(poset, rng, field, max_total=max(1, max_total // 2))
            basis = hom_basis(a, b)
            if not basis:
                module = a
            else:
                phi = basis[0].scaled(int(rng.integers(1, field.p)))
                for f in basis[1:]:
                    phi = phi + f.scaled(int(rng.integers(0, field.p)))
                module = (kernel(phi) if rng.random() < 0.5 else cokernel(phi))[0]
        if 0 < module.total_dim <= max_total:
            return module


# diagrams of posets with global dimension one (double edges expand to paths)
GLDIM1_DIAGRAMS: dict[str, Diagram] = {
    key: Diagram.build(f"gldim1_{key}", edges_text)
    for key, edges_text in {
        "1": "1=>4 1=>2 2=>5 4=>5 3==2",
        "2": "v->1 v->2 5->u 6->u 1=>5 2=>6 3==v 4==u",
        "3": "1=>5 1=>2 6=>2 6=>5 3==2 4==5",
        "4": "v->1 v->2 5->u 6->u 1=>5 2=>6 3==v 4==5",
        "5": "1->5 5->6 1=>2 2=>6 3==1 6==7 4==5",
        "6": "1->3 4=>6 1=>2 3->4 3=>5 5=>6 2=>4 1==7",
        "7": "1->3 4=>6 1=>2 3->4 3=>5 5=>6 2=>4 6==7",
        "8": "1->2 3=>u u=>4 1=>6 6=>3 6=>5 5=>u 2->4 2==7",
        "9": "1=>2 3->u u=>4 1=>6 6->3 6=>5 5=>u 2=>4 3==7",
        "10": "1=>3 4->6 1=>8 8=>2 3->4 3=>5 5=>6 4=>2 6==7",
        "11": "3=>1 4->6 2=>1 3->4 3=>5 5=>6 2=>4 6==7",
        "12": "1->4 1->5 4->3 4->2 5=>3 2==6 5=>2",
        "13": "1=>4 1=>5 4=>3 4->2 5->3 1==6 5=>2",
        "14": "1->4 1->5 4=>3 4->2 5->3 2==6 5=>2",
    }.items()
}


def gldim2_cycle(n: int) -> Diagram:
    """Alternating cycle ``1 -> n, 1 -> 2, 3 -> 2, ..., n-1 -> n`` on an even number of vertices."""
    if n < 4 or n % 2:
        raise ValueError("need an even n >= 4")
    edges = ["1->" + str(n)]
    for i in range(1, n):
        src, dst = (i, i + 1) if i % 2 else (i + 1, i)
        edges.append(f"{src}->{dst}")
    return Diagram.build(f"gldim2_ii_{n}", " ".join(edges))


def gldim2_double_fork(length: int) -> Diagram:
    """Zigzag path ``1 -> 2 <- 3 -> ...`` with two extra line-neighbours at each end."""
    if length < 2:
        raise ValueError("need length >= 2")
    edges = []
    for i in range(1, length):
        src, dst = (i, i + 1) if i % 2 else (i + 1, i)
        edges.append(f"{src}->{dst}")
    edges += ["a--1", "b--1", f"{length}--c", f"{length}--d"]
    return Diagram.build(f"gldim2_iv_{length}", " ".join(edges))


GLDIM2_DIAGRAMS: dict[str, Diagram] = {
    "i": Diagram.build("gldim2_i", "c--1 c--2 c--3 c--4"),
    "ii_4": gldim2_cycle(4),
    "ii_6": gldim2_cycle(6),
    "iii": Diagram.build("gldim2_iii", "1->5 5->2 1->4 3->2 3->4 5--6"),
    "iv_2": gldim2_double_fork(2),
    "v": Diagram.build("gldim2_v", "1->2 1->4 3->2 3->4 1->5 3->5"),
    "vi": Diagram.build("gldim2_vi", "1->2 1->4 2->3 4->3 2--5 4--6"),
    "vii": Diagram.build("gldim2_vii", "1->2 1->4 3->2 3->4 1--5 2--6"),
    "viii": Diagram.build("gldim2_viii", "1->2 1->4 3->2 3->4 5->4 3->6 5->6"),
    "ix": Diagram.build("gldim2_ix", "1->5 5->2 1->4 3->2 3->4 6->5 6->3"),
}


def instantiate(diagram: Diagram, length: int = 2, orientation: str = ">") -> Poset:
    """Every double edge at ``length`` elements, every line oriented by ``orientation``."""
    lengths = {k: length for k in diagram.double_edges()}
    return expand_diagram(diagram, lengths, default_orientation=orientation)


__all__ = [
    "GLDIM1_DIAGRAMS",
    "GLDIM2_DIAGRAMS",
    "a_type",
    "all_a_type",
    "alternating_cycle",
    "atilde_two_sinks",
    "bipath",
    "blown_up",
    "gldim2_cycle",
    "gldim2_double_fork",
    "instantiate",
    "random_aligned_system",
    "random_connected_poset",
    "random_interval_sum",
    "random_module",
    "random_tree",
    "star",
]
