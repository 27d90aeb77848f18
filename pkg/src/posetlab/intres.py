"""Interval covers, interval resolutions and interval global dimension.

The engine works with modules over a fixed poset.  A cover of ``M`` picks,
for every interval ``T``, morphisms ``I_T -> M`` whose classes form a basis of
``Hom(I_T, M)`` modulo the maps that factor through a non-invertible map out
of ``I_T``.  Iterating on kernels gives the interval resolution.
"""

from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import Disconnected, HypothesisUnmet, MaxLenExceeded, NonCommutativeModule, NotTree
from .interior import InteriorSystem
from .linalg import DTYPE, GF, GF2
from .pmod import (
    IntervalHom,
    ModuleMorphism,
    PersistenceModule,
    first_noncommuting_pair,
    induct,
    interval_hom,
    interval_module,
    kernel,
)
from .poset import Mask, Poset, bits, interval_key
from .segments import contract_all

# irreducible maps between interval modules ------------------------------------------


@dataclass(frozen=True)
class IrreducibleArrow:
    """Irreducible map ``I_source -> I_target``, identity on the overlap."""

    source: Mask
    target: Mask
    kind: str  # "surjective" or "injective"

    def morphism(self, poset: Poset, field: GF = GF2) -> ModuleMorphism:
        src = interval_module(poset, self.source, field)
        tgt = interval_module(poset, self.target, field)
        both = self.source & self.target
        comps = tuple(
            np.ones((1, 1), dtype=DTYPE) if (both >> x) & 1 else np.zeros((tgt.dims[x], src.dims[x]), dtype=DTYPE)
            for x in range(poset.n)
        )
        return ModuleMorphism(src, tgt, comps)


def irreducible_arrows(poset: Poset, s: Mask) -> list[IrreducibleArrow]:
    """Irreducible maps ending at ``I_s``: surjective ones first, each kind in canonical order."""
    cache = poset.__dict__.setdefault("_irreducible_into", {})
    hit = cache.get(s)
    if hit is not None:
        return hit
    below_s = poset.downset(s)
    surj = []
    for x in bits(poset.covers_above(s)):
        bigger = s | (poset.down[x] & ~below_s)
        assert poset.is_interval(bigger)
        surj.append(IrreducibleArrow(bigger, s, "surjective"))
    inj = []
    for z in bits(poset.minimal(s)):
        for part in poset.components(s & ~(1 << z)):
            if s == part | (poset.up[z] & ~poset.upset(part)):
                inj.append(IrreducibleArrow(part, s, "injective"))
    out = sorted(surj, key=lambda a: interval_key(a.source)) + sorted(inj, key=lambda a: interval_key(a.source))
    cache[s] = out
    return out


def irreducible_targets(poset: Poset, t: Mask) -> list[Mask]:
    """Intervals ``U`` with an irreducible map ``I_t -> I_U`` (read off the opposite poset)."""
    cache = poset.__dict__.setdefault("_irreducible_from", {})
    hit = cache.get(t)
    if hit is None:
        hit = [a.source for a in irreducible_arrows(poset.op, t)]
        cache[t] = hit
    return hit


def gamma(poset: Poset, s: Mask, field: GF = GF2) -> PersistenceModule:
    """Kernel of the sum of all irreducible maps into ``I_s``."""
    arrows = irreducible_arrows(poset, s)
    sources = [a.source for a in arrows]
    dims = [sum((src >> x) & 1 for src in sources) for x in range(poset.n)]
    slot = [{k: j for j, k in enumerate(k for k, src in enumerate(sources) if (src >> x) & 1)} for x in range(poset.n)]
    maps = {}
    for a, b in poset.covers:
        m = np.zeros((dims[b], dims[a]), dtype=DTYPE)
        for k, ja in slot[a].items():
            jb = slot[b].get(k)
            if jb is not None:
                m[jb, ja] = 1
        maps[(a, b)] = m
    total = PersistenceModule(poset, dims, maps, field)
    comps = tuple(
        np.ones((1, dims[x]), dtype=DTYPE) if (s >> x) & 1 else np.zeros((0, dims[x]), dtype=DTYPE)
        for x in range(poset.n)
    )
    phi = ModuleMorphism(total, interval_module(poset, s, field), comps)
    return kernel(phi)[0]


# covers ----------------------------------------------------------------------------------


@dataclass
class IntervalCover:
    """Minimal interval approximation ``V -> M`` with its kernel."""

    module: PersistenceModule
    multiplicities: dict[Mask, int]
    generators: list[tuple[Mask, np.ndarray]] = field(repr=False)
    cover: PersistenceModule = field(repr=False)
    cover_map: ModuleMorphism = field(repr=False)
    kernel: PersistenceModule = field(repr=False)
    kernel_inclusion: ModuleMorphism = field(repr=False)


def _interval_shape(module: PersistenceModule) -> Mask | None:
    """Support ``S`` when ``module`` is isomorphic to ``I_S``, else None."""
    P = module.poset
    if any(d > 1 for d in module.dims):
        return None
    s = module.support
    if not s or not P.is_interval(s):
        return None
    F = module.field
    # rescale along a spanning tree, then every cover inside s must agree
    start = (s & -s).bit_length() - 1
    scale = {start: 1}
    stack = [start]
    inner = [(a, b) for a, b in P.covers if (s >> a) & 1 and (s >> b) & 1]
    adj: dict[int, list[tuple[int, int, bool]]] = {x: [] for x in bits(s)}
    for a, b in inner:
        c = int(module.maps[(a, b)][0, 0])
        if c == 0:
            return None
        adj[a].append((b, c, True))
        adj[b].append((a, c, False))
    while stack:
        x = stack.pop()
        for y, c, forward in adj[x]:
            want = (scale[x] * c) % F.p if forward else (scale[x] * F.inverse_scalar(c)) % F.p
            if y not in scale:
                scale[y] = want
                stack.append(y)
            elif scale[y] != want:
                return None
    return s


class _HomCache:
    """Hom spaces ``Hom(I_T, M)`` for one module, computed on demand."""

    def __init__(self, module: PersistenceModule) -> None:
        self.module = module
        self.store: dict[Mask, IntervalHom] = {}

    def __call__(self, t: Mask) -> IntervalHom:
        h = self.store.get(t)
        if h is None:
            h = interval_hom(self.module, t)
            self.store[t] = h
        return h


def _radical_vectors(homs: _HomCache, t: Mask, mode: str) -> np.ndarray:
    """Span of maps ``I_t -> M`` that factor through a non-invertible map, at the minima of ``t``."""
    module = homs.module
    P = module.poset
    F = module.field
    h_t = homs(t)
    cols = []
    if mode == "irreducible":
        for u in irreducible_targets(P, t):
            h_u = homs(u)
            if not h_u.dim:
                continue
            at_mins = {m: h_u.value(h_u.basis, m) for m in h_t.mins if (u >> m) & 1}
            cols.append(h_t.restrict_to_mins(at_mins, h_u.dim))
    elif mode == "full":
        for u in P.intervals:
            if u == t:
                continue
            h_u = homs(u)
            if not h_u.dim:
                continue
            g = interval_hom(interval_module(P, u, F), t)
            for j in range(g.dim):
                g_col = g.basis[:, j : j + 1]
                at_mins = {}
                for m in h_t.mins:
                    if (u >> m) & 1:
                        scalar = int(g.value(g_col, m)[0, 0])
                        at_mins[m] = F.scale(scalar, h_u.value(h_u.basis, m))
                cols.append(h_t.restrict_to_mins(at_mins, h_u.dim))
    else:
        raise ValueError(f"unknown radical mode {mode!r}")
    return F.concat(cols, rows=h_t.offsets[-1])


def _top_generators(homs: _HomCache, t: Mask, mode: str) -> list[np.ndarray]:
    """Coset representatives of Hom modulo the radical, chosen greedily from the Hom basis."""
    F = homs.module.field
    h_t = homs(t)
    rad = _radical_vectors(homs, t, mode)
    rank = F.rank(rad)
    if rank == h_t.dim:
        return []
    chosen = []
    span = rad
    for j in range(h_t.dim):
        col = h_t.basis[:, j : j + 1]
        trial = np.hstack([span, col])
        r = F.rank(trial)
        if r > rank:
            chosen.append(col)
            span, rank = trial, r
            if rank == h_t.dim:
                break
    return chosen


def _assemble(module: PersistenceModule, homs: _HomCache, gens: list[tuple[Mask, np.ndarray]]) -> tuple:
    P = module.poset
    F = module.field
    members = [[k for k, (t, _) in enumerate(gens) if (t >> x) & 1] for x in range(P.n)]
    slot = [{k: j for j, k in enumerate(ks)} for ks in members]
    maps = {}
    for a, b in P.covers:
        m = np.zeros((len(members[b]), len(members[a])), dtype=DTYPE)
        for k, ja in slot[a].items():
            jb = slot[b].get(k)
            if jb is not None:
                m[jb, ja] = 1
        maps[(a, b)] = m
    cover = PersistenceModule(P, [len(ks) for ks in members], maps, F)
    comps = []
    for x in range(P.n):
        cols = [homs(gens[k][0]).value(gens[k][1], x) for k in members[x]]
        comps.append(F.concat(cols, rows=module.dims[x]))
    return cover, ModuleMorphism(cover, module, tuple(comps))


def interval_cover(module: PersistenceModule, radical: str = "irreducible", check: bool = False) -> IntervalCover:
    """Minimal interval cover of ``module``.

    ``radical="irreducible"`` factors only through irreducible maps out of each
    ``I_T``; ``radical="full"`` uses every map to every other interval module.
    Both span the same space; the second is kept as a slow cross-check.
    """
    if check and first_noncommuting_pair(module) is not None:
        raise NonCommutativeModule("NonCommutativeModule: structure maps do not commute")
    P = module.poset
    F = module.field
    homs = _HomCache(module)
    shape = None if module.is_zero() else _interval_shape(module)
    gens: list[tuple[Mask, np.ndarray]] = []
    if shape is not None:
        h = homs(shape)
        gens = [(shape, h.basis[:, :1])]
    elif not module.is_zero():
        supp = module.support
        for t in P.intervals:
            if not P.minimal(t) & supp:
                continue
            if not homs(t).dim:
                continue
            gens.extend((t, col) for col in _top_generators(homs, t, radical))
    cover, cover_map = _assemble(module, homs, gens)
    if not cover_map.is_surjective():
        raise AssertionError("interval cover is not surjective")
    if shape is not None:
        ker = PersistenceModule(P, [0] * P.n, {}, F)
        incl = ModuleMorphism.zero(ker, cover)
    else:
        ker, incl = kernel(cover_map)
    mult: dict[Mask, int] = {}
    for t, _ in gens:
        mult[t] = mult.get(t, 0) + 1
    return IntervalCover(module, mult, gens, cover, cover_map, ker, incl)


def cover_is_right_minimal(cover: IntervalCover, radical: str = "irreducible") -> bool:
    """Re-derive minimality: each block of generators stays independent modulo the radical."""
    homs = _HomCache(cover.module)
    F = cover.module.field
    for t in set(cover.multiplicities):
        cols = [v for s, v in cover.generators if s == t]
        rad = _radical_vectors(homs, t, radical)
        if F.rank(np.hstack([rad, *cols])) != F.rank(rad) + len(cols):
            return False
    return True


def cover_is_approximation(cover: IntervalCover) -> bool:
    """Every map from an interval module into M factors through the cover map."""
    homs_m = _HomCache(cover.module)
    homs_v = _HomCache(cover.cover)
    F = cover.module.field
    P = cover.module.poset
    for t in P.intervals:
        h_m = homs_m(t)
        if not h_m.dim:
            continue
        h_v = homs_v(t)
        # push Hom(I_t, V) forward, compare at the minima of t
        pushed = []
        for m in h_v.mins:
            vals = h_v.value(h_v.basis, m)
            pushed.append(F.mul(cover.cover_map.comps[m], vals))
        pushed_mat = F.stack(pushed, cols=h_v.dim) if h_v.dim else np.zeros((h_m.offsets[-1], 0), dtype=DTYPE)
        if not F.in_span(pushed_mat, h_m.basis):
            return False
    return True


# resolutions -------------------------------------------------------------------------


@dataclass
class IntervalResolution:
    module: PersistenceModule
    covers: list[IntervalCover]

    @property
    def dim(self) -> int:
        return max(len(self.covers) - 1, 0)

    @property
    def terms(self) -> list[dict[Mask, int]]:
        return [c.multiplicities for c in self.covers]


def interval_resolution(
    module: PersistenceModule, max_len: int | None = None, radical: str = "irreducible"
) -> IntervalResolution:
    """Iterate interval covers on kernels until the kernel vanishes."""
    if max_len is None:
        max_len = module.total_dim + 2
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    covers: list[IntervalCover] = []
    current = module
    while not current.is_zero():
        if len(covers) > max_len:
            raise MaxLenExceeded(f"MaxLenExceeded: resolution longer than {max_len}")
        # kernels of natural maps commute automatically; only the input needs checking
        cover = interval_cover(current, radical, check=not covers)
        covers.append(cover)
        current = cover.kernel
    return IntervalResolution(module, covers)


def intresdim(module: PersistenceModule, max_len: int | None = None) -> int:
    return interval_resolution(module, max_len).dim


@dataclass
class GldimReport:
    poset: Poset
    gldim: int
    witness: Mask
    per_interval: list[tuple[Mask, int]]
    timings_ms: dict[str, float] = field(default_factory=dict)


def _gamma_dim(args: tuple[Poset, Mask, int]) -> int:
    poset, s, p = args
    return intresdim(gamma(poset, s, GF(p)))


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("POSETLAB_THREADS", "1")))
    except ValueError:
        return 1


def gldim_report(poset: Poset, field: GF = GF2, threads: int | None = None) -> GldimReport:
    """Largest ``intresdim`` of ``Γ_S`` over all intervals ``S``, with the per-interval table."""
    if poset.n == 0:
        raise ValueError("empty poset")
    if not poset.is_connected():
        raise Disconnected(f"Disconnected: {poset.name} has {len(poset.components(poset.full))} components")
    threads = default_threads() if threads is None else threads
    start = time.perf_counter()
    intervals = poset.intervals
    if threads > 1 and len(intervals) > 1:
        jobs = [(poset, s, field.p) for s in intervals]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            dims = list(pool.map(_gamma_dim, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    else:
        dims = [intresdim(gamma(poset, s, field)) for s in intervals]
    best = max(dims)
    witness = intervals[dims.index(best)]
    elapsed = (time.perf_counter() - start) * 1000.0
    return GldimReport(poset, best, witness, list(zip(intervals, dims)), {"total": elapsed})


def intresgldim(poset: Poset, field: GF = GF2, threads: int | None = None) -> int:
    return gldim_report(poset, field, threads).gldim


# closed forms -----------------------------------------------------------------------------


def tree_gldim(poset: Poset) -> int:
    """Number of leaves minus two (zero for a chain)."""
    if not poset.is_tree():
        raise NotTree(f"NotTree: Hasse diagram of {poset.name} is not a tree")
    if poset.n == 1:
        return 0
    return max(bin(poset.leaves()).count("1") - 2, 0)


def cycle_shape(poset: Poset) -> int | None:
    """Number of sinks when the Hasse diagram is a single cycle, else None."""
    if poset.n < 4 or len(poset.covers) != poset.n or not poset.is_connected():
        return None
    if any(poset.degree(x) != 2 for x in range(poset.n)):
        return None
    return sum(1 for x in range(poset.n) if poset.outdegree(x) == 0)


def formula_gldim(poset: Poset) -> int:
    """Closed-form value for trees and single-cycle Hasse diagrams."""
    if poset.is_tree():
        return tree_gldim(poset)
    sinks = cycle_shape(poset)
    if sinks is None:
        raise HypothesisUnmet("HypothesisUnmet: no closed form for this poset (not a tree or a cycle)")
    return {1: 0, 2: 1}.get(sinks, 2)


# Koszul-type resolution on trees -----------------------------------------------------


@dataclass
class KoszulResolution:
    """Alternating-sum complex built from subsets of ``K``, truncated to resolve ``Γ_S``."""

    poset: Poset
    s: Mask
    index_set: tuple[int, ...]
    gamma: PersistenceModule
    terms: list[dict[Mask, int]]

    @property
    def dim(self) -> int:
        return max(len(self.terms) - 1, 0)


def _koszul_set(poset: Poset, s: Mask, sigma: tuple[int, ...], trimmed: set[int]) -> Mask:
    out = s
    below_s = poset.downset(s)
    for k in sigma:
        if k in trimmed:
            out &= ~(1 << k)
    for k in sigma:
        if k not in trimmed:
            out |= poset.down[k] & ~below_s
    return out


def tree_koszul_resolution(poset: Poset, s: Mask, field: GF = GF2) -> KoszulResolution:
    if not poset.is_tree():
        raise NotTree(f"NotTree: Hasse diagram of {poset.name} is not a tree")
    sub = poset.subposet(s)
    ids = list(bits(s))
    sub_leaves = {ids[i] for i in range(sub.n) if sub.degree(i) == 1}
    # a minimal leaf with an upper cover outside s gives a map that factors, so it is left out
    trimmed = {z for z in bits(poset.minimal(s)) if z in sub_leaves and not poset.covers_above(1 << z) & ~s}
    extended = set(bits(poset.covers_above(s)))
    index_set = tuple(sorted(trimmed | extended))
    m = len(index_set)
    if m == 0:
        raise HypothesisUnmet("HypothesisUnmet: the Koszul index set of this interval is empty")
    level = [[_koszul_set(poset, s, sigma, trimmed) for sigma in itertools.combinations(index_set, i)] for i in range(m + 1)]
    arrows = {a.source for a in irreducible_arrows(poset, s)}
    if sorted(level[1]) != sorted(arrows):
        # happens when a minimum splits s into several arms
        raise HypothesisUnmet("HypothesisUnmet: Koszul first term differs from the irreducible maps into I_s")
    modules, diffs = _koszul_complex(poset, index_set, level, trimmed, s, field)
    for i in range(1, m + 1):
        for x in range(poset.n):
            r_in = field.rank(diffs[i].comps[x])
            r_out = field.rank(diffs[i + 1].comps[x]) if i < m else 0
            if r_in + r_out != modules[i].dims[x] and not (i == 1 and m == 1):
                raise AssertionError(f"Koszul complex not exact in degree {i}")
        if not diffs[i].is_natural():
            raise AssertionError("Koszul differential is not natural")
    if extended and not diffs[1].is_surjective():
        raise AssertionError("first Koszul differential is not surjective")
    g, _ = kernel(diffs[1])
    if m == 1:
        terms = [] if g.is_zero() else [{g.support: 1}]
    else:
        terms = []
        for i in range(2, m + 1):
            t: dict[Mask, int] = {}
            for mask in level[i]:
                t[mask] = t.get(mask, 0) + 1
            terms.append(dict(sorted(t.items(), key=lambda kv: interval_key(kv[0]))))
    return KoszulResolution(poset, s, index_set, g, terms)


def _koszul_complex(poset, index_set, level, trimmed, s, field):
    from .pmod import direct_sum

    m = len(index_set)
    combos = [list(itertools.combinations(index_set, i)) for i in range(m + 1)]
    modules = [direct_sum([interval_module(poset, t, field) for t in level[i]], poset, field)[0] for i in range(m + 1)]
    diffs: dict[int, ModuleMorphism] = {}
    for i in range(1, m + 1):
        src, tgt = modules[i], modules[i - 1]
        pos_tgt = {sig: k for k, sig in enumerate(combos[i - 1])}
        comps = []
        for x in range(poset.n):
            mat = np.zeros((tgt.dims[x], src.dims[x]), dtype=DTYPE)
            col_of = _slots(level[i], x)
            row_of = _slots(level[i - 1], x)
            for k, sigma in enumerate(combos[i]):
                if k not in col_of:
                    continue
                for j, drop in enumerate(sigma):
                    face = tuple(e for e in sigma if e != drop)
                    r = row_of.get(pos_tgt[face])
                    if r is not None:
                        mat[r, col_of[k]] = (-1) ** j % field.p
            comps.append(mat)
        diffs[i] = ModuleMorphism(src, tgt, tuple(comps))
    return modules, diffs


def _slots(masks: list[Mask], x: int) -> dict[int, int]:
    return {k: j for j, k in enumerate(k for k, t in enumerate(masks) if (t >> x) & 1)}


# structural reductions and checks ---------------------------------------------------------


def gldim_via_contraction(poset: Poset, field: GF = GF2, threads: int | None = None) -> tuple[int, list[list[str]]]:
    """Shorten qualifying segments to three elements, then run the engine."""
    if not poset.is_connected():
        raise Disconnected(f"Disconnected: {poset.name} is not connected")
    current, trace = contract_all(poset)
    return intresgldim(current, field, threads), trace


@dataclass
class TransportReport:
    ok: bool
    dim_q: int
    dim_p: int
    transported_terms: list[dict[Mask, int]]
    direct_terms: list[dict[Mask, int]]


def verify_ind_preserves_resolution(system: InteriorSystem, module: PersistenceModule) -> TransportReport:
    """Compare Ind applied termwise to a resolution over Q with the resolution of Ind M."""
    system.require_aligned()
    res_q = interval_resolution(module)
    moved = []
    for term in res_q.terms:
        out: dict[Mask, int] = {}
        for t, mult in term.items():
            big = system.ceil_preimage(system.to_p_mask(t))
            out[big] = out.get(big, 0) + mult
        moved.append(out)
    res_p = interval_resolution(induct(system, module))
    ok = moved == res_p.terms and res_q.dim == res_p.dim
    return TransportReport(ok, res_q.dim, res_p.dim, moved, res_p.terms)


def is_minimal_M(poset: Poset, d: int | None = None, field: GF = GF2) -> bool:
    """Every deletion of one element lowers the global dimension below ``d``.

    Deletions that disconnect the poset are judged by their largest component.
    """
    full = intresgldim(poset, field)
    if d is None:
        d = full
    if full != d:
        return False
    for x in range(poset.n):
        rest = poset.full & ~(1 << x)
        if not rest:
            continue
        worst = max(intresgldim(poset.subposet(c), field) for c in poset.components(rest))
        if worst >= d:
            return False
    return True


__all__ = [
    "GldimReport",
    "IntervalCover",
    "IntervalResolution",
    "IrreducibleArrow",
    "KoszulResolution",
    "TransportReport",
    "cover_is_approximation",
    "cover_is_right_minimal",
    "cycle_shape",
    "default_threads",
    "formula_gldim",
    "gamma",
    "gldim_report",
    "gldim_via_contraction",
    "interval_cover",
    "interval_resolution",
    "intresdim",
    "intresgldim",
    "irreducible_arrows",
    "irreducible_targets",
    "is_minimal_M",
    "tree_gldim",
    "tree_koszul_resolution",
    "verify_ind_preserves_resolution",
]
