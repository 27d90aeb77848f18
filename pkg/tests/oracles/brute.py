"""Slow reference implementation used to freeze expected values.

Shares no code with ``posetlab``: plain lists of ints mod p, orders given as
labelled cover lists, every relation stored explicitly.  Minimal interval
covers are built straight from the definition: the radical of
``Hom(I_S, M)`` is spanned by composites through every other interval.
"""

from __future__ import annotations

import itertools

# linear algebra mod p on lists of rows ------------------------------------------


def rref(rows, ncols, p):
    m = [list(r) for r in rows]
    piv = []
    r = 0
    for c in range(ncols):
        k = next((i for i in range(r, len(m)) if m[i][c] % p), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [v * inv % p for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] % p:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        piv.append(c)
        r += 1
    return m[:r], piv


def rank(rows, ncols, p):
    return len(rref(rows, ncols, p)[1])


def nullspace(rows, ncols, p):
    red, piv = rref(rows, ncols, p)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, c in zip(red, piv):
            v[c] = -row[f] % p
        basis.append(v)
    return basis


def matmul(a, b, p, inner, cols):
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) % p for j in range(cols)] for i in range(len(a))]


def zeros(r, c):
    return [[0] * c for _ in range(r)]


def eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


# orders ------------------------------------------------------------------------------


class Order:
    def __init__(self, labels, covers):
        self.labels = list(labels)
        n = len(self.labels)
        idx = {lab: i for i, lab in enumerate(self.labels)}
        leq = [[i == j for j in range(n)] for i in range(n)]
        for a, b in covers:
            leq[idx[a]][idx[b]] = True
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    if leq[i][k] and leq[k][j]:
                        leq[i][j] = True
        self.n = n
        self.leq = leq
        self.pairs = [(i, j) for i in range(n) for j in range(n) if i != j and leq[i][j]]

    def is_convex(self, s):
        return all(z in s for x in s for y in s for z in range(self.n) if self.leq[x][z] and self.leq[z][y])

    def is_connected(self, s):
        s = list(s)
        if not s:
            return False
        seen = {s[0]}
        stack = [s[0]]
        while stack:
            x = stack.pop()
            for y in s:
                if y not in seen and (self.leq[x][y] or self.leq[y][x]):
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(s)

    def intervals(self):
        out = []
        for k in range(1, self.n + 1):
            for combo in itertools.combinations(range(self.n), k):
                s = frozenset(combo)
                if self.is_convex(s) and self.is_connected(s):
                    out.append(s)
        return out


# modules: every relation a <= b carries its matrix ------------------------------------------


class Rep:
    def __init__(self, order, dims, rel, p):
        self.order = order
        self.dims = list(dims)
        self.rel = rel  # (a, b) -> dims[b] x dims[a] for every a < b
        self.p = p

    def at(self, a, b):
        return eye(self.dims[a]) if a == b else self.rel[(a, b)]

    def total(self):
        return sum(self.dims)


def indicator(order, s, p):
    dims = [int(x in s) for x in range(order.n)]
    rel = {(a, b): [[1]] if a in s and b in s else zeros(dims[b], dims[a]) for a, b in order.pairs}
    return Rep(order, dims, rel, p)


def hom(src, tgt):
    """Basis of natural maps as lists of per-element matrices."""
    order, p = src.order, src.p
    offs, k = [], 0
    for x in range(order.n):
        offs.append(k)
        k += tgt.dims[x] * src.dims[x]
    rows = []
    for a, b in order.pairs:
        # tgt(a<=b) f_a - f_b src(a<=b) = 0, entrywise
        for i in range(tgt.dims[b]):
            for j in range(src.dims[a]):
                row = [0] * k
                for t in range(tgt.dims[a]):
                    row[offs[a] + t * src.dims[a] + j] += tgt.at(a, b)[i][t]
                for t in range(src.dims[b]):
                    row[offs[b] + i * src.dims[b] + t] -= src.at(a, b)[t][j]
                rows.append([v % p for v in row])
    out = []
    for v in nullspace(rows, k, p):
        comps = []
        for x in range(order.n):
            r, c = tgt.dims[x], src.dims[x]
            comps.append([v[offs[x] + i * c : offs[x] + (i + 1) * c] for i in range(r)])
        out.append(comps)
    return out


def flatten(comps):
    return [v for m in comps for row in m for v in row]


def compose(g, f, order, src, mid, p):
    return [matmul(g[x], f[x], p, mid.dims[x], src.dims[x]) for x in range(order.n)]


def cover(mod):
    """Multiplicities and the chosen generators of the minimal interval cover."""
    order, p = mod.order, mod.p
    ivals = order.intervals()
    ind = {s: indicator(order, s, p) for s in ivals}
    to_m = {s: hom(ind[s], mod) for s in ivals}
    chosen = []
    mult = {}
    for s in ivals:
        if not to_m[s]:
            continue
        width = len(flatten(to_m[s][0]))
        rad = []
        for t in ivals:
            if t == s or not to_m[t]:
                continue
            for g in hom(ind[s], ind[t]):
                for h in to_m[t]:
                    rad.append(flatten(compose(h, g, order, ind[s], ind[t], p)))
        base = rank(rad, width, p) if rad else 0
        kept = list(rad)
        for f in to_m[s]:
            trial = kept + [flatten(f)]
            if rank(trial, width, p) > base + (len(kept) - len(rad)):
                kept = trial
                chosen.append((s, f))
                mult[s] = mult.get(s, 0) + 1
    return mult, chosen


def kernel_of_cover(mod, chosen):
    """The kernel module of ``⊕ I_S -> M`` given by the chosen maps."""
    order, p = mod.order, mod.p
    slots = [[k for k, (s, _) in enumerate(chosen) if x in s] for x in range(order.n)]
    phi = []
    for x in range(order.n):
        cols = [[chosen[k][1][x][i][0] for i in range(mod.dims[x])] for k in slots[x]]
        phi.append([[cols[j][i] for j in range(len(cols))] for i in range(mod.dims[x])])
    kers = []
    for x in range(order.n):
        kers.append(nullspace(phi[x], len(slots[x]), p))
    dims = [len(k) for k in kers]
    rel = {}
    for a, b in order.pairs:
        # cover map a -> b keeps the summands whose interval contains both
        images = []
        for v in kers[a]:
            w = [0] * len(slots[b])
            for j, k in enumerate(slots[a]):
                if k in slots[b] and v[j]:
                    w[slots[b].index(k)] = v[j]
            images.append(w)
        mat = zeros(dims[b], dims[a])
        if dims[b]:
            basis_t = [list(col) for col in kers[b]]  # rows are basis vectors
            for j, w in enumerate(images):
                coeffs = solve_combination(basis_t, w, p)
                for i in range(dims[b]):
                    mat[i][j] = coeffs[i]
        rel[(a, b)] = mat
    return Rep(order, dims, rel, p)


def solve_combination(basis, target, p):
    n = len(basis)
    if not n:
        return []
    m = len(target)
    rows = [[basis[i][r] for i in range(n)] + [target[r]] for r in range(m)]
    red, piv = rref(rows, n + 1, p)
    if n in piv:
        raise AssertionError("vector outside the kernel")
    out = [0] * n
    for row, c in zip(red, piv):
        out[c] = row[n]
    return out


def resolution(mod, limit=20):
    terms = []
    cur = mod
    while cur.total():
        mult, chosen = cover(cur)
        terms.append(mult)
        cur = kernel_of_cover(cur, chosen)
        if len(terms) > limit:
            raise AssertionError("runaway resolution")
    return terms


def gamma(order, s, p):
    """Kernel of ``⊕ I_U -> I_S`` over representatives of the irreducible maps.

    Irreducible maps into ``I_S`` are counted by ``Hom(I_U, I_S)`` modulo the
    span of composites through a third interval.
    """
    ivals = order.intervals()
    ind = {u: indicator(order, u, p) for u in ivals}
    target = ind[s]
    chosen = []
    for u in ivals:
        if u == s:
            continue
        direct = hom(ind[u], target)
        if not direct:
            continue
        width = len(flatten(direct[0]))
        through = []
        for t in ivals:
            if t in (u, s):
                continue
            for g in hom(ind[u], ind[t]):
                for h in hom(ind[t], target):
                    through.append(flatten(compose(h, g, order, ind[u], ind[t], p)))
        kept = list(through)
        for f in direct:
            trial = kept + [flatten(f)]
            if rank(trial, width, p) > rank(kept, width, p):
                kept = trial
                chosen.append((u, f))
    return kernel_of_cover(target, chosen), [u for u, _ in chosen]


def gldim(labels, covers, p=2):
    order = Order(labels, covers)
    best = 0
    for s in order.intervals():
        g, _ = gamma(order, s, p)
        best = max(best, len(resolution(g)) - 1 if g.total() else 0)
    return best
