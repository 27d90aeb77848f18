"""Acceptance criteria, one test each; every test records a PASS/FAIL line.

The lines are echoed in the terminal summary (see ``conftest.py``) and
printed immediately when running with ``-s``.
"""

import time

import numpy as np

from posetlab.catalog import (
    GLDIM1_DIAGRAMS,
    GLDIM2_DIAGRAMS,
    all_a_type,
    alternating_cycle,
    atilde_two_sinks,
    bipath,
    blown_up,
    instantiate,
    random_aligned_system,
    random_connected_poset,
    random_module,
    random_tree,
    star,
)
from posetlab.errors import HypothesisUnmet
from posetlab.interior import interior_system, tbar
from posetlab.intres import (
    gamma,
    interval_resolution,
    intresgldim,
    irreducible_arrows,
    is_minimal_M,
    tree_gldim,
    tree_koszul_resolution,
    verify_ind_preserves_resolution,
)
from posetlab.linalg import GF2
from posetlab.pmod import (
    PersistenceModule,
    coinduct,
    colimit,
    contract,
    convex_module,
    find_isomorphism,
    hom_basis,
    induct,
    interval_module,
    is_interval_decomposable,
    restrict,
    split_interval_summands,
)
from posetlab.poset import poset_from_covers
from posetlab.segments import contract_segment, make_segment
from tests.conftest import ACCEPTANCE_LINES
from tests.shapes import corpus


def record(number, ok, detail, seconds=None, limit=None):
    timing = "" if seconds is None else f" [{seconds:.1f}s" + ("" if limit is None else f" / limit {limit}s") + "]"
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}{timing}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def over_q(system, module):
    """Rewrap a restricted module so it lives on the system's own Q."""
    return PersistenceModule(system.qposet, module.dims, module.maps, module.field)


def test_criterion_1_dimension_zero():
    start = time.perf_counter()
    posets = [P for n in range(1, 9) for P in all_a_type(n)]
    posets += [bipath(a, b) for a in range(1, 4) for b in range(1, 4)]
    bad = [P.name for P in posets if intresgldim(P) != 0]
    elapsed = time.perf_counter() - start
    record(1, not bad and elapsed < 10, f"{len(posets)} A-type and bipath posets have gldim 0, offenders {bad}", elapsed, 10)


def test_criterion_2_trees():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    bad = []
    for _ in range(100):
        P = random_tree(int(rng.integers(2, 11)), rng)
        if intresgldim(P) != tree_gldim(P):
            bad.append(P)
    pairs = 0
    termwise = 0
    while pairs < 30:
        P = random_tree(int(rng.integers(3, 9)), rng)
        s = P.intervals[int(rng.integers(0, len(P.intervals)))]
        if not irreducible_arrows(P, s):
            continue
        try:
            kos = tree_koszul_resolution(P, s)
        except HypothesisUnmet:
            continue
        pairs += 1
        g = gamma(P, s)
        engine = interval_resolution(g).terms if not g.is_zero() else []
        termwise += engine == kos.terms
    elapsed = time.perf_counter() - start
    ok = not bad and termwise == 30 and elapsed < 120
    record(2, ok, f"100 trees match leaves-2 ({len(bad)} off); Koszul termwise {termwise}/30", elapsed, 120)


def test_criterion_3_atilde():
    start = time.perf_counter()
    two = atilde_two_sinks(8)
    bad = [P.name for P in two if intresgldim(P) != 1]
    three = [alternating_cycle(6), alternating_cycle(6, (1, 0, 1, 0, 0, 0))]
    dims = [intresgldim(P) for P in three]
    elapsed = time.perf_counter() - start
    ok = not bad and dims == [2, 2] and elapsed < 120
    record(3, ok, f"{len(two)} two-sink cycles give 1 (offenders {bad}); three-sink cycles of size 6 and 8 give {dims}", elapsed, 120)


def test_criterion_4_duality():
    start = time.perf_counter()
    rng = np.random.default_rng(44)
    bad = 0
    for _ in range(50):
        P = random_connected_poset(int(rng.integers(2, 8)), rng)
        bad += intresgldim(P) != intresgldim(P.op)
    elapsed = time.perf_counter() - start
    record(4, bad == 0 and elapsed < 300, f"50 random posets, {bad} duality violations", elapsed, 300)


def test_criterion_5_segment_contraction():
    start = time.perf_counter()
    rows = []
    for P, labels, case in corpus():
        seg = make_segment(P, tuple(P.id_of(x) for x in labels))
        Q = contract_segment(P, seg)
        rows.append((P.name, case, intresgldim(P), intresgldim(Q), P.n - Q.n))
    bad = [r for r in rows if r[2] != r[3]]
    cases = {r[1] for r in rows}
    ok = not bad and len(rows) == 20 and cases == {"equioriented", "leaf"}
    record(5, ok, f"{len(rows)} posets over both cases keep gldim, offenders {bad}", time.perf_counter() - start)


def aligned_instances(count=50, seed=606):
    """(system, N over Q, M over P) triples; every third one carries a non-interval Γ on Q."""
    rng = np.random.default_rng(seed)
    out = []
    shapes = [star(4), alternating_cycle(6), star(4, "<>><")]
    while len(out) < count:
        if len(out) % 3 == 2:
            q = shapes[int(rng.integers(0, len(shapes)))]
            sizes = [1 + int(rng.random() < 0.3) for _ in range(q.n)]
            P, sub = blown_up(q, sizes)
            system = interior_system(P, sub)
            Q = system.qposet
            candidates = [gamma(Q, s) for s in Q.intervals]
            candidates = [g for g in candidates if 0 < g.total_dim <= 10 and not is_interval_decomposable(g)]
            if not candidates:
                continue
            N = candidates[int(rng.integers(0, len(candidates)))]
        else:
            P, sub = random_aligned_system(rng)
            system = interior_system(P, sub)
            N = random_module(system.qposet, rng, GF2, max_total=10)
        M = random_module(P, rng, GF2, max_total=10)
        out.append((system, N, M))
    return out


INSTANCES = None


def instances():
    global INSTANCES
    if INSTANCES is None:
        INSTANCES = aligned_instances()
    return INSTANCES


def test_criterion_6_functor_laws():
    start = time.perf_counter()
    failures = []
    for k, (system, N, M) in enumerate(instances()):
        P, Q = system.poset, system.qposet
        if find_isomorphism(contract(system, induct(system, N)), N) is None:
            failures.append((k, "cont-ind"))
        for s in Q.intervals:
            big = system.ceil_preimage(system.to_p_mask(s))
            if find_isomorphism(induct(system, interval_module(Q, s)), interval_module(P, big)) is None:
                failures.append((k, "ind-interval"))
        for t in P.intervals:
            small = system.to_q_mask(tbar(system, t))
            if find_isomorphism(contract(system, interval_module(P, t)), convex_module(Q, small)) is None:
                failures.append((k, "cont-interval"))
        res_m = over_q(system, restrict(M, system.sub))
        checks = [
            (len(hom_basis(contract(system, M), N)), len(hom_basis(M, induct(system, N)))),
            (len(hom_basis(induct(system, N), M)), len(hom_basis(N, res_m))),
            (len(hom_basis(res_m, N)), len(hom_basis(M, coinduct(system, N)))),
        ]
        if any(a != b for a, b in checks):
            failures.append((k, "adjunction", checks))
    record(6, not failures, f"50 aligned instances, failures {failures[:3]}", time.perf_counter() - start)


def test_criterion_7_transport():
    start = time.perf_counter()
    bad = []
    longest = 0
    for k, (system, N, _) in enumerate(instances()):
        rep = verify_ind_preserves_resolution(system, N)
        longest = max(longest, rep.dim_q)
        if not rep.ok or rep.dim_q != rep.dim_p:
            bad.append(k)
    record(7, not bad, f"50 instances transport their resolutions (longest {longest}), offenders {bad}", time.perf_counter() - start)


def test_criterion_8_unaligned_counterexample():
    P = poset_from_covers(
        ["x", "y", "z", "w", "x'"],
        [("x", "z"), ("y", "z"), ("z", "w"), ("x", "x'"), ("x'", "w")],
        name="unaligned",
    )
    system = interior_system(P, P.full & ~P.mask_of(["x'"]))
    S = P.mask_of(["y", "z", "w", "x'"])
    C = contract(system, interval_module(P, S), method="colimit")
    Q = system.qposet
    dims = tuple(C.dims[Q.id_of(lab)] for lab in ("x", "y", "z", "w"))
    split = split_interval_summands(C)
    ok = not system.aligned and dims == (1, 1, 2, 1) and not split.residual.is_zero()
    record(8, ok, f"Cont of I_S has dims {dims}, residual dim {split.residual.total_dim}, aligned={system.aligned}")


def test_criterion_9_tables():
    start = time.perf_counter()
    off1 = []
    for key, d in GLDIM1_DIAGRAMS.items():
        for m in (2, 3):
            g = intresgldim(instantiate(d, m))
            if g != 1:
                off1.append((key, m, g))
    off2 = []
    for key, d in GLDIM2_DIAGRAMS.items():
        g = intresgldim(instantiate(d, 2))
        if g != 2:
            off2.append((key, g))
    minimal = {key: is_minimal_M(instantiate(GLDIM2_DIAGRAMS[key], 2), 2) for key in ("i", "iii", "v")}
    elapsed = time.perf_counter() - start
    ok = not off1 and not off2 and all(minimal.values()) and elapsed < 900
    detail = f"table 1 offenders {off1}; table 2 offenders {off2}; minimality {minimal}"
    record(9, ok, detail, elapsed, 900)


def test_criterion_10_properties():
    # the detailed checks live in the unit suites; this re-runs a compact version of each
    from tests.test_pmod import square
    from tests.test_poset import reference_intervals
    from posetlab.intres import cover_is_right_minimal, interval_cover
    from posetlab.pmod import change_basis, check_commutativity, direct_sum

    rng = np.random.default_rng(10)
    failures = []
    for n in (4, 8, 12):
        P = random_connected_poset(n, rng, density=0.25)
        if set(P.intervals) != reference_intervals(P):
            failures.append(("intervals", n))
    for _ in range(30):
        P = random_connected_poset(int(rng.integers(3, 9)), rng)
        M = PersistenceModule(P, [1] * P.n, {c: rng.integers(0, 2, size=(1, 1)) for c in P.covers})
        check_commutativity(M, exhaustive=True)
    for _ in range(15):
        P = random_connected_poset(int(rng.integers(2, 6)), rng)
        if not cover_is_right_minimal(interval_cover(random_module(P, rng, GF2, 8)), "full"):
            failures.append(("minimality", P.name))
    for _ in range(15):
        P = random_connected_poset(int(rng.integers(2, 7)), rng)
        parts = [P.intervals[int(k)] for k in rng.integers(0, len(P.intervals), size=3)]
        M = direct_sum([interval_module(P, s) for s in parts])[0]
        shuffled = change_basis(M, [np.eye(d, dtype=np.int64) if d < 2 else GF2.matrix(np.tril(np.ones((d, d)))) for d in M.dims])
        got = split_interval_summands(shuffled).summands
        if sum(got.values()) != 3 or set(got) != set(parts):
            failures.append(("summands", P.name))
    sq = square()
    if colimit(interval_module(sq, sq.full))[0] != 1 or colimit(interval_module(sq, sq.mask_of(["a", "b"])))[0] != 0:
        failures.append(("colimit", "square"))
    record(10, not failures, f"interval enumeration, commutativity, minimality, summands, colimits; failures {failures}")
