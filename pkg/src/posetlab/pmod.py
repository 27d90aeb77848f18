"""Persistence modules over finite posets and the functors between them.

A module stores one dimension per element and one matrix per Hasse cover
``a ⋖ b`` with shape ``(dims[b], dims[a])``.  Longer relations are evaluated
along a canonical path: from ``a`` always step to the smallest-id upper cover
that still lies below ``b``.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import FieldMismatch, NotComparable, NotInterval, ShapeMismatch
from .interior import InteriorSystem
from .linalg import DTYPE, GF, GF2
from .poset import Mask, Poset, bits

Cover = tuple[int, int]


class PersistenceModule:
    """Dimensions plus cover matrices over a fixed poset and field."""

    def __init__(
        self,
        poset: Poset,
        dims: Sequence[int],
        maps: dict[Cover, np.ndarray] | None = None,
        field: GF = GF2,
    ) -> None:
        self.poset = poset
        self.field = field
        self.dims: tuple[int, ...] = tuple(int(d) for d in dims)
        if len(self.dims) != poset.n or min(self.dims, default=0) < 0:
            raise ShapeMismatch("one non-negative dimension per element required")
        maps = dict(maps or {})
        cover_set = set(poset.covers)
        for key in maps:
            if key not in cover_set:
                raise ShapeMismatch(f"{key} is not a cover of {poset.name}")
        self.maps: dict[Cover, np.ndarray] = {}
        for a, b in poset.covers:
            shape = (self.dims[b], self.dims[a])
            mat = maps.get((a, b))
            if mat is None:
                mat = np.zeros(shape, dtype=DTYPE)
            else:
                mat = np.asarray(mat, dtype=DTYPE) % field.p
                if mat.shape != shape:
                    raise ShapeMismatch(
                        f"map {poset.labels[a]}->{poset.labels[b]} has shape {mat.shape}, expected {shape}"
                    )
            self.maps[(a, b)] = mat
        self._paths: dict[Cover, np.ndarray] = {}

    # basic data ----------------------------------------------------------------

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    @property
    def support(self) -> Mask:
        return sum(1 << i for i, d in enumerate(self.dims) if d)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def path_map(self, a: int, b: int) -> np.ndarray:
        """The structure map ``M(a <= b)``."""
        key = (a, b)
        cached = self._paths.get(key)
        if cached is not None:
            return cached
        P = self.poset
        if not P.leq(a, b):
            raise NotComparable(f"NotComparable: {P.labels[a]!r} is not below {P.labels[b]!r}")
        if a == b:
            out = np.eye(self.dims[a], dtype=DTYPE)
        else:
            step = next(c for c in P.succ[a] if P.leq(c, b))
            out = self.field.mul(self.path_map(step, b), self.maps[(a, step)])
        self._paths[key] = out
        return out

    def __repr__(self) -> str:
        dims = " ".join(f"{lab}:{d}" for lab, d in zip(self.poset.labels, self.dims) if d)
        return f"PersistenceModule({self.poset.name}; {dims or 'zero'})"

    def same_data(self, other: PersistenceModule) -> bool:
        return (
            self.poset == other.poset
            and self.field == other.field
            and self.dims == other.dims
            and all(np.array_equal(self.maps[c], other.maps[c]) for c in self.poset.covers)
        )

    @cached_property
    def dual(self) -> PersistenceModule:
        """Pointwise dual, a module over the opposite poset."""
        op = self.poset.op
        return PersistenceModule(op, self.dims, {(b, a): m.T.copy() for (a, b), m in self.maps.items()}, self.field)


def _same_ground(*mods: PersistenceModule) -> None:
    first = mods[0]
    for m in mods[1:]:
        if m.field != first.field:
            raise FieldMismatch(f"modules over GF({first.field.p}) and GF({m.field.p})")
        if m.poset != first.poset:
            raise ShapeMismatch("modules live over different posets")


@dataclass
class ModuleMorphism:
    """Natural transformation given by one matrix per element."""

    source: PersistenceModule
    target: PersistenceModule
    comps: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        _same_ground(self.source, self.target)
        comps = []
        for a, c in enumerate(self.comps):
            c = np.asarray(c, dtype=DTYPE).reshape(self.target.dims[a], self.source.dims[a])
            comps.append(c % self.source.field.p)
        self.comps = tuple(comps)

    @property
    def field(self) -> GF:
        return self.source.field

    def is_natural(self) -> bool:
        F = self.field
        for (a, b), m in self.source.maps.items():
            lhs = F.mul(self.comps[b], m)
            rhs = F.mul(self.target.maps[(a, b)], self.comps[a])
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def is_zero(self) -> bool:
        return all(not c.any() for c in self.comps)

    def is_iso(self) -> bool:
        F = self.field
        return all(c.shape[0] == c.shape[1] and F.rank(c) == c.shape[0] for c in self.comps)

    def is_surjective(self) -> bool:
        return all(self.field.rank(c) == c.shape[0] for c in self.comps)

    def is_injective(self) -> bool:
        return all(self.field.rank(c) == c.shape[1] for c in self.comps)

    def after(self, first: ModuleMorphism) -> ModuleMorphism:
        """Composite ``self ∘ first``."""
        F = self.field
        return ModuleMorphism(first.source, self.target, tuple(F.mul(s, f) for s, f in zip(self.comps, first.comps)))

    def __add__(self, other: ModuleMorphism) -> ModuleMorphism:
        F = self.field
        return ModuleMorphism(self.source, self.target, tuple(F.add(s, o) for s, o in zip(self.comps, other.comps)))

    def scaled(self, c: int) -> ModuleMorphism:
        return ModuleMorphism(self.source, self.target, tuple(self.field.scale(c, x) for x in self.comps))

    @classmethod
    def zero(cls, source: PersistenceModule, target: PersistenceModule) -> ModuleMorphism:
        return cls(source, target, tuple(np.zeros((t, s), dtype=DTYPE) for s, t in zip(source.dims, target.dims)))

    @classmethod
    def identity(cls, module: PersistenceModule) -> ModuleMorphism:
        return cls(module, module, tuple(np.eye(d, dtype=DTYPE) for d in module.dims))


# constructors --------------------------------------------------------------------


def interval_module(poset: Poset, s: Mask, field: GF = GF2, allow_convex: bool = False) -> PersistenceModule:
    """Indicator module of ``s``; convex but disconnected ``s`` needs ``allow_convex``."""
    if not s or not poset.is_convex(s) or (not allow_convex and not poset.is_connected(s)):
        raise NotInterval(f"NotInterval: {poset.label_list(s)} is not an interval of {poset.name}")
    dims = [(s >> i) & 1 for i in range(poset.n)]
    maps = {(a, b): np.ones((1, 1), dtype=DTYPE) for a, b in poset.covers if (s >> a) & 1 and (s >> b) & 1}
    return PersistenceModule(poset, dims, maps, field)


def convex_module(poset: Poset, s: Mask, field: GF = GF2) -> PersistenceModule:
    """Direct sum of the interval modules of the components of a convex set."""
    if not s:
        return zero_module(poset, field)
    return interval_module(poset, s, field, allow_convex=True)


def simple_module(poset: Poset, x: int, field: GF = GF2) -> PersistenceModule:
    return interval_module(poset, 1 << x, field)


def projective_module(poset: Poset, x: int, field: GF = GF2) -> PersistenceModule:
    return interval_module(poset, poset.up[x], field)


def injective_module(poset: Poset, x: int, field: GF = GF2) -> PersistenceModule:
    return interval_module(poset, poset.down[x], field)


def zero_module(poset: Poset, field: GF = GF2) -> PersistenceModule:
    return PersistenceModule(poset, [0] * poset.n, {}, field)


def direct_sum(
    modules: Sequence[PersistenceModule], poset: Poset | None = None, field: GF | None = None
) -> tuple[PersistenceModule, list[ModuleMorphism], list[ModuleMorphism]]:
    """Block-diagonal sum with its injections and projections."""
    if not modules:
        if poset is None:
            raise ValueError("an empty sum needs the poset")
        z = zero_module(poset, field or GF2)
        return z, [], []
    _same_ground(*modules)
    P = modules[0].poset
    F = modules[0].field
    dims = [sum(m.dims[a] for m in modules) for a in range(P.n)]
    maps = {c: F.block_diag([m.maps[c] for m in modules]) for c in P.covers}
    total = PersistenceModule(P, dims, maps, F)
    injections, projections = [], []
    offsets = [0] * P.n
    for m in modules:
        inj, proj = [], []
        for a in range(P.n):
            e = np.zeros((dims[a], m.dims[a]), dtype=DTYPE)
            e[offsets[a] : offsets[a] + m.dims[a]] = np.eye(m.dims[a], dtype=DTYPE)
            inj.append(e)
            proj.append(e.T.copy())
            offsets[a] += m.dims[a]
        injections.append(ModuleMorphism(m, total, tuple(inj)))
        projections.append(ModuleMorphism(total, m, tuple(proj)))
    return total, injections, projections


def change_basis(module: PersistenceModule, bases: Sequence[np.ndarray]) -> PersistenceModule:
    """Isomorphic copy with ``M'(a⋖b) = C_b M(a⋖b) C_a^{-1}`` for invertible ``C_a``."""
    F = module.field
    invs = []
    for c in bases:
        inv = F.inverse(c)
        if inv is None:
            raise ValueError("change of basis must be invertible")
        invs.append(inv)
    maps = {(a, b): F.mul(F.mul(bases[b], m), invs[a]) for (a, b), m in module.maps.items()}
    return PersistenceModule(module.poset, module.dims, maps, F)


# commutativity -----------------------------------------------------------------


def first_noncommuting_pair(module: PersistenceModule) -> tuple[int, int] | None:
    """First ``(a, b)`` where some first step disagrees with the canonical composite."""
    P = module.poset
    F = module.field
    for a in range(P.n):
        for b in bits(P.up[a] & ~(1 << a)):
            canon = module.path_map(a, b)
            for c in P.succ[a]:
                if P.leq(c, b) and not np.array_equal(F.mul(module.path_map(c, b), module.maps[(a, c)]), canon):
                    return (a, b)
    return None


def _all_path_composites(module: PersistenceModule, a: int, b: int) -> Iterable[np.ndarray]:
    P = module.poset
    F = module.field
    if a == b:
        yield np.eye(module.dims[a], dtype=DTYPE)
        return
    for c in P.succ[a]:
        if P.leq(c, b):
            for rest in _all_path_composites(module, c, b):
                yield F.mul(rest, module.maps[(a, c)])


def check_commutativity(module: PersistenceModule, exhaustive: bool | None = None) -> bool:
    """Whether every pair of cover paths with equal ends gives the same composite.

    ``exhaustive`` compares all maximal chains pairwise; by default that
    slower check only runs for posets with at most 8 elements, as a guard on
    the first-step criterion.
    """
    fast = first_noncommuting_pair(module) is None
    if exhaustive is None:
        exhaustive = module.poset.n <= 8
    if not exhaustive:
        return fast
    slow = True
    P = module.poset
    for a in range(P.n):
        for b in bits(P.up[a] & ~(1 << a)):
            composites = list(_all_path_composites(module, a, b))
            if any(not np.array_equal(composites[0], c) for c in composites[1:]):
                slow = False
                break
        if not slow:
            break
    if slow != fast:
        raise AssertionError("commutativity criteria disagree")
    return fast


# Hom spaces ----------------------------------------------------------------------


def hom_basis(source: PersistenceModule, target: PersistenceModule) -> list[ModuleMorphism]:
    """Basis of all natural transformations ``source -> target``."""
    _same_ground(source, target)
    P = source.poset
    F = source.field
    offsets = [0]
    for a in range(P.n):
        offsets.append(offsets[-1] + target.dims[a] * source.dims[a])
    nvars = offsets[-1]
    if nvars == 0:
        return []
    blocks = []
    for (a, b), m in source.maps.items():
        n_ab = target.maps[(a, b)]
        rows = target.dims[b] * source.dims[a]
        if rows == 0:
            continue
        block = np.zeros((rows, nvars), dtype=DTYPE)
        # row-major vec: vec(X M) = (I ⊗ M^T) vec X ; vec(N X) = (N ⊗ I) vec X
        if source.dims[b] and target.dims[b]:
            block[:, offsets[b] : offsets[b + 1]] += np.kron(np.eye(target.dims[b], dtype=DTYPE), m.T)
        if target.dims[a] and source.dims[a]:
            block[:, offsets[a] : offsets[a + 1]] -= np.kron(n_ab, np.eye(source.dims[a], dtype=DTYPE))
        blocks.append(block % F.p)
    system = F.stack(blocks, cols=nvars)
    kernel = F.nullspace_basis(system) if blocks else np.eye(nvars, dtype=DTYPE)
    out = []
    for j in range(kernel.shape[1]):
        vec = kernel[:, j]
        comps = tuple(
            vec[offsets[a] : offsets[a + 1]].reshape(target.dims[a], source.dims[a]) for a in range(P.n)
        )
        out.append(ModuleMorphism(source, target, comps))
    return out


@dataclass
class IntervalHom:
    """Hom from an interval module ``I_S`` into ``M``.

    A morphism is determined by its vectors at the minimal elements of ``S``;
    ``basis`` holds one such stacked vector per column, in ``mins`` order.
    """

    module: PersistenceModule
    s: Mask
    mins: tuple[int, ...]
    offsets: tuple[int, ...]
    basis: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def value(self, vectors: np.ndarray, x: int) -> np.ndarray:
        """Values at ``x`` of the morphisms whose min-vectors are the columns of ``vectors``."""
        P = self.module.poset
        if not (self.s >> x) & 1:
            return np.zeros((self.module.dims[x], vectors.shape[1]), dtype=DTYPE)
        for k, m in enumerate(self.mins):
            if P.leq(m, x):
                block = vectors[self.offsets[k] : self.offsets[k + 1]]
                return self.module.field.mul(self.module.path_map(m, x), block)
        raise AssertionError("element of an interval with no minimum below it")

    def restrict_to_mins(self, vectors_at: dict[int, np.ndarray], width: int) -> np.ndarray:
        """Stack given per-minimum blocks into the coordinates of ``basis``."""
        out = np.zeros((self.offsets[-1], width), dtype=DTYPE)
        for k, m in enumerate(self.mins):
            if m in vectors_at:
                out[self.offsets[k] : self.offsets[k + 1]] = vectors_at[m]
        return out

    def morphism(self, vector: np.ndarray) -> ModuleMorphism:
        P = self.module.poset
        src = interval_module(P, self.s, self.module.field)
        col = vector.reshape(-1, 1)
        comps = tuple(
            self.value(col, x) if (self.s >> x) & 1 else np.zeros((self.module.dims[x], 0), dtype=DTYPE)
            for x in range(P.n)
        )
        return ModuleMorphism(src, self.module, comps)


def interval_hom(module: PersistenceModule, s: Mask) -> IntervalHom:
    """Solve for ``Hom(I_s, module)`` in coordinates at the minima of ``s``."""
    P = module.poset
    F = module.field
    mins = tuple(bits(P.minimal(s)))
    offsets = [0]
    for m in mins:
        offsets.append(offsets[-1] + module.dims[m])
    nvars = offsets[-1]
    if nvars == 0:
        return IntervalHom(module, s, mins, tuple(offsets), np.zeros((0, 0), dtype=DTYPE))
    blocks = []
    outside = P.full & ~s
    for k, m in enumerate(mins):
        # leaving s from m must kill the vector
        for y in bits(P.minimal(P.up[m] & outside)):
            if module.dims[y] and module.dims[m]:
                row = np.zeros((module.dims[y], nvars), dtype=DTYPE)
                row[:, offsets[k] : offsets[k + 1]] = module.path_map(m, y)
                blocks.append(row)
        # two minima must agree wherever they first meet inside s
        for k2 in range(k + 1, len(mins)):
            m2 = mins[k2]
            for y in bits(P.minimal(P.up[m] & P.up[m2] & s)):
                if module.dims[y]:
                    row = np.zeros((module.dims[y], nvars), dtype=DTYPE)
                    row[:, offsets[k] : offsets[k + 1]] = module.path_map(m, y)
                    row[:, offsets[k2] : offsets[k2 + 1]] = F.neg(module.path_map(m2, y))
                    blocks.append(row)
    if blocks:
        basis = F.nullspace_basis(F.stack(blocks))
    else:
        basis = np.eye(nvars, dtype=DTYPE)
    return IntervalHom(module, s, mins, tuple(offsets), basis)


def interval_hom_basis(module: PersistenceModule, s: Mask) -> list[ModuleMorphism]:
    h = interval_hom(module, s)
    return [h.morphism(h.basis[:, j]) for j in range(h.dim)]


def hom_to_interval_basis(module: PersistenceModule, s: Mask) -> list[ModuleMorphism]:
    """Basis of ``Hom(module, I_s)``, computed through the dual module."""
    h = interval_hom(module.dual, s)
    P = module.poset
    target = interval_module(P, s, module.field)
    out = []
    for j in range(h.dim):
        col = h.basis[:, j : j + 1]
        comps = tuple(
            h.value(col, x).T if (s >> x) & 1 else np.zeros((0, module.dims[x]), dtype=DTYPE) for x in range(P.n)
        )
        out.append(ModuleMorphism(module, target, comps))
    return out


# kernels, cokernels, images -----------------------------------------------------


def _kernel_basis(F: GF, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Null space basis and the free coordinates where it is the identity."""
    rows, cols = a.shape
    if rows == 0 or cols == 0:
        return np.eye(cols, dtype=DTYPE), list(range(cols))
    r, pivots = F.row_reduce(a)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = np.zeros((cols, len(free)), dtype=DTYPE)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-r[i, f]) % F.p
    return basis, free


def _image_basis(F: GF, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Column echelon image basis and its pivot coordinates (identity rows)."""
    rows, cols = a.shape
    if rows == 0 or cols == 0:
        return np.zeros((rows, 0), dtype=DTYPE), []
    r, pivots = F.row_reduce(a.T)
    return r[: len(pivots)].T.copy(), pivots


def _quotient(F: GF, a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Projection onto ``codomain / im(a)`` and a section of it."""
    rows = a.shape[0]
    img, pivots = _image_basis(F, a)
    keep = [i for i in range(rows) if i not in set(pivots)]
    proj = np.zeros((len(keep), rows), dtype=DTYPE)
    for j, i in enumerate(keep):
        proj[j, i] = 1
    if pivots:
        # v - C v[pivots] vanishes on the image since C is the identity on pivot rows
        proj[:, pivots] = F.neg(img[keep])
    section = np.zeros((rows, len(keep)), dtype=DTYPE)
    for j, i in enumerate(keep):
        section[i, j] = 1
    return proj % F.p, section


def kernel(phi: ModuleMorphism) -> tuple[PersistenceModule, ModuleMorphism]:
    M = phi.source
    F = M.field
    P = M.poset
    bases, frees = [], []
    for c in phi.comps:
        b, f = _kernel_basis(F, c)
        bases.append(b)
        frees.append(f)
    maps = {}
    for (a, b), m in M.maps.items():
        moved = F.mul(m, bases[a])
        maps[(a, b)] = moved[frees[b]]
    K = PersistenceModule(P, [b.shape[1] for b in bases], maps, F)
    return K, ModuleMorphism(K, M, tuple(bases))


def image(phi: ModuleMorphism) -> tuple[PersistenceModule, ModuleMorphism]:
    N = phi.target
    F = N.field
    P = N.poset
    bases, pivs = [], []
    for c in phi.comps:
        b, p = _image_basis(F, c)
        bases.append(b)
        pivs.append(p)
    maps = {}
    for (a, b), m in N.maps.items():
        moved = F.mul(m, bases[a])
        maps[(a, b)] = moved[pivs[b]]
    im = PersistenceModule(P, [b.shape[1] for b in bases], maps, F)
    return im, ModuleMorphism(im, N, tuple(bases))


def cokernel(phi: ModuleMorphism) -> tuple[PersistenceModule, ModuleMorphism]:
    N = phi.target
    F = N.field
    P = N.poset
    projs, sections = [], []
    for c in phi.comps:
        q, s = _quotient(F, c)
        projs.append(q)
        sections.append(s)
    maps = {(a, b): F.mul(F.mul(projs[b], m), sections[a]) for (a, b), m in N.maps.items()}
    C = PersistenceModule(P, [q.shape[0] for q in projs], maps, F)
    return C, ModuleMorphism(N, C, tuple(projs))


# restriction and the functors of an interior system ---------------------------------


def restrict(module: PersistenceModule, sub: Mask) -> PersistenceModule:
    """Module over the full subposet on ``sub``."""
    P = module.poset
    Q = P.subposet(sub)
    ids = list(bits(sub))
    maps = {(a, b): module.path_map(ids[a], ids[b]) for a, b in Q.covers}
    return PersistenceModule(Q, [module.dims[i] for i in ids], maps, module.field)


def _check_over_q(system: InteriorSystem, module: PersistenceModule) -> None:
    if module.poset != system.qposet:
        raise ShapeMismatch("module must live over the subposet Q")


def induct(system: InteriorSystem, module: PersistenceModule) -> PersistenceModule:
    """Pull back along the floor function."""
    _check_over_q(system, module)
    P = system.poset
    fl = [system.to_q[system.floor[x]] for x in range(P.n)]
    maps = {(a, b): module.path_map(fl[a], fl[b]) for a, b in P.covers}
    return PersistenceModule(P, [module.dims[fl[x]] for x in range(P.n)], maps, module.field)


def contract(system: InteriorSystem, module: PersistenceModule, method: str = "aligned") -> PersistenceModule:
    """Left adjoint of induction.

    ``method="aligned"`` pulls back along the fiber maxima and needs an
    aligned system; ``method="colimit"`` evaluates the colimit over each down
    fiber and works for any interior system.
    """
    if module.poset != system.poset:
        raise ShapeMismatch("module must live over the ambient poset")
    Q = system.qposet
    F = module.field
    if method == "aligned":
        system.require_aligned()
        nu = [system.nu[system.to_p[j]] for j in range(Q.n)]
        maps = {(x, y): module.path_map(nu[x], nu[y]) for x, y in Q.covers}
        return PersistenceModule(Q, [module.dims[nu[j]] for j in range(Q.n)], maps, F)
    if method != "colimit":
        raise ValueError(f"unknown contraction method {method!r}")
    data = [_colimit_data(module, system.down_fiber(system.to_p[j])) for j in range(Q.n)]
    maps = {}
    for x, y in Q.covers:
        proj_y, _, pos_y = data[y]
        _, sec_x, pos_x = data[x]
        incl = _block_inclusion(module, pos_x, pos_y)
        maps[(x, y)] = F.mul(F.mul(proj_y, incl), sec_x)
    return PersistenceModule(Q, [d[0].shape[0] for d in data], maps, F)


def _positions(module: PersistenceModule, mask: Mask) -> dict[int, tuple[int, int]]:
    pos = {}
    off = 0
    for a in bits(mask):
        pos[a] = (off, off + module.dims[a])
        off += module.dims[a]
    return pos


def _block_inclusion(module: PersistenceModule, small: dict, big: dict) -> np.ndarray:
    rows = max((e for _, e in big.values()), default=0)
    cols = max((e for _, e in small.values()), default=0)
    out = np.zeros((rows, cols), dtype=DTYPE)
    for a, (s0, s1) in small.items():
        b0, b1 = big[a]
        out[b0:b1, s0:s1] = np.eye(s1 - s0, dtype=DTYPE)
    return out


def _relations(poset: Poset, mask: Mask) -> list[Cover]:
    """Covers of the induced order on ``mask``."""
    out = []
    for a in bits(mask):
        above = poset.up[a] & mask & ~(1 << a)
        for b in bits(above):
            if not above & poset.down[b] & ~(1 << b):
                out.append((a, b))
    return out


def _colimit_data(module: PersistenceModule, mask: Mask) -> tuple[np.ndarray, np.ndarray, dict]:
    """Projection from ``⊕_{a in mask} M(a)`` onto the colimit, a section, block positions."""
    F = module.field
    pos = _positions(module, mask)
    total = max((e for _, e in pos.values()), default=0)
    cols = []
    for a, b in _relations(module.poset, mask):
        if not module.dims[a]:
            continue
        col = np.zeros((total, module.dims[a]), dtype=DTYPE)
        b0, b1 = pos[b]
        a0, a1 = pos[a]
        col[b0:b1] = module.path_map(a, b)
        col[a0:a1] = (col[a0:a1] - np.eye(module.dims[a], dtype=DTYPE)) % F.p
        cols.append(col)
    boundary = F.concat(cols, rows=total)
    proj, section = _quotient(F, boundary)
    return proj, section, pos


def _limit_data(module: PersistenceModule, mask: Mask) -> tuple[np.ndarray, list[int], dict]:
    """Basis of the limit inside ``⊕_{a in mask} M(a)``, its free rows, block positions."""
    F = module.field
    pos = _positions(module, mask)
    total = max((e for _, e in pos.values()), default=0)
    rows = []
    for a, b in _relations(module.poset, mask):
        if not module.dims[b]:
            continue
        row = np.zeros((module.dims[b], total), dtype=DTYPE)
        a0, a1 = pos[a]
        b0, b1 = pos[b]
        row[:, a0:a1] = module.path_map(a, b)
        row[:, b0:b1] = (row[:, b0:b1] - np.eye(module.dims[b], dtype=DTYPE)) % F.p
        rows.append(row)
    system = F.stack(rows, cols=total)
    basis, free = _kernel_basis(F, system)
    return basis, free, pos


def colimit(module: PersistenceModule) -> tuple[int, dict[int, np.ndarray]]:
    """Dimension of the colimit and the cocone maps ``M(a) -> colim``."""
    proj, _, pos = _colimit_data(module, module.poset.full)
    return proj.shape[0], {a: proj[:, s0:s1] for a, (s0, s1) in pos.items()}


def limit(module: PersistenceModule) -> tuple[int, dict[int, np.ndarray]]:
    """Dimension of the limit and the cone maps ``lim -> M(a)``."""
    basis, _, pos = _limit_data(module, module.poset.full)
    return basis.shape[1], {a: basis[s0:s1] for a, (s0, s1) in pos.items()}


def coinduct(system: InteriorSystem, module: PersistenceModule) -> PersistenceModule:
    """Right adjoint of restriction: pointwise limits over ``Q ∩ a↑``."""
    _check_over_q(system, module)
    P = system.poset
    F = module.field
    data = [_limit_data(module, system.to_q_mask(P.up[a] & system.sub)) for a in range(P.n)]
    maps = {}
    for a, b in P.covers:
        basis_a, _, pos_a = data[a]
        _, free_b, pos_b = data[b]
        proj = _block_inclusion(module, pos_b, pos_a).T
        maps[(a, b)] = F.mul(proj, basis_a)[free_b]
    return PersistenceModule(P, [d[0].shape[1] for d in data], maps, F)


def in_essential_image(system: InteriorSystem, module: PersistenceModule) -> bool:
    """Whether every ``M(floor(a) <= a)`` is invertible."""
    F = module.field
    for a in range(system.poset.n):
        m = module.path_map(system.floor[a], a)
        if m.shape[0] != m.shape[1] or F.rank(m) != m.shape[0]:
            return False
    return True


# isomorphism and interval summands ---------------------------------------------------


def find_isomorphism(
    source: PersistenceModule, target: PersistenceModule, max_enumerate: int = 4096, trials: int = 2000, seed: int = 0
) -> ModuleMorphism | None:
    """Search Hom(source, target) for a pointwise invertible morphism.

    Every combination is tried when there are at most ``max_enumerate`` of
    them; otherwise ``trials`` seeded random combinations are tested, so a
    ``None`` answer is then only probable, not certain.
    """
    _same_ground(source, target)
    if source.dims != target.dims:
        return None
    if source.is_zero():
        return ModuleMorphism.zero(source, target)
    basis = hom_basis(source, target)
    if not basis:
        return None
    F = source.field
    r = len(basis)

    def combine(coeffs: Sequence[int]) -> ModuleMorphism:
        comps = []
        for a in range(source.poset.n):
            acc = np.zeros_like(basis[0].comps[a])
            for c, f in zip(coeffs, basis):
                if c:
                    acc = acc + c * f.comps[a]
            comps.append(acc % F.p)
        return ModuleMorphism(source, target, tuple(comps))

    if F.p**r <= max_enumerate:
        candidates: Iterable[Sequence[int]] = itertools.product(range(F.p), repeat=r)
    else:
        rng = np.random.default_rng(seed)
        candidates = (rng.integers(0, F.p, size=r) for _ in range(trials))
    for coeffs in candidates:
        f = combine(coeffs)
        if f.is_iso():
            return f
    return None


def is_isomorphic(source: PersistenceModule, target: PersistenceModule) -> bool:
    return find_isomorphism(source, target) is not None


@dataclass
class SummandList:
    """Interval summands with multiplicities and the rest of the module."""

    summands: dict[Mask, int]
    residual: PersistenceModule

    def items(self) -> list[tuple[Mask, int]]:
        return list(self.summands.items())


def _pairing(f_hom: IntervalHom, g_hom: IntervalHom, x: int) -> np.ndarray:
    """Matrix of scalars ``g_j ∘ f_i`` read off at ``x``; rows index g, columns f."""
    f_vals = f_hom.value(f_hom.basis, x)
    g_vals = g_hom.value(g_hom.basis, x)
    return f_hom.module.field.mul(g_vals.T, f_vals)


def split_interval_summands(module: PersistenceModule) -> SummandList:
    """Peel off interval summands greedily, in canonical interval order."""
    P = module.poset
    F = module.field
    residual = module
    found: dict[Mask, int] = {}
    for s in P.intervals:
        while True:
            if any(residual.dims[x] == 0 for x in bits(s)):
                break
            f_hom = interval_hom(residual, s)
            if not f_hom.dim:
                break
            g_hom = interval_hom(residual.dual, s)
            if not g_hom.dim:
                break
            x = f_hom.mins[0]
            pairing = _pairing(f_hom, g_hom, x)
            hits = np.argwhere(pairing.T % F.p)
            if not len(hits):
                break
            i, j = (int(v) for v in hits[0])  # f index, g index
            scale = F.inverse_scalar(pairing[j, i])
            g_col = g_hom.basis[:, j : j + 1]
            target = interval_module(P, s, F)
            comps = tuple(
                F.scale(scale, g_hom.value(g_col, y).T)
                if (s >> y) & 1
                else np.zeros((0, residual.dims[y]), dtype=DTYPE)
                for y in range(P.n)
            )
            g = ModuleMorphism(residual, target, comps)
            residual, _ = kernel(g)
            found[s] = found.get(s, 0) + 1
    return SummandList(found, residual)


def is_interval_decomposable(module: PersistenceModule) -> bool:
    return split_interval_summands(module).residual.is_zero()


__all__ = [
    "IntervalHom",
    "ModuleMorphism",
    "PersistenceModule",
    "SummandList",
    "change_basis",
    "check_commutativity",
    "coinduct",
    "cokernel",
    "colimit",
    "contract",
    "convex_module",
    "direct_sum",
    "find_isomorphism",
    "first_noncommuting_pair",
    "hom_basis",
    "hom_to_interval_basis",
    "image",
    "in_essential_image",
    "induct",
    "injective_module",
    "interval_hom",
    "interval_hom_basis",
    "interval_module",
    "is_interval_decomposable",
    "is_isomorphic",
    "kernel",
    "limit",
    "projective_module",
    "restrict",
    "simple_module",
    "split_interval_summands",
    "zero_module",
]
