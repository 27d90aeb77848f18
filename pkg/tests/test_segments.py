import numpy as np
import pytest

from posetlab.catalog import a_type, alternating_cycle, random_connected_poset, star
from posetlab.errors import HypothesisUnmet, NotExtremal, SegmentTooShort
from posetlab.intres import intresgldim
from posetlab.poset import chain, poset_from_covers
from posetlab.segments import (
    contract_all,
    contract_segment,
    contraction_case,
    find_an_segments,
    is_segment,
    make_segment,
    reflect,
    reflection_preserves_gldim,
)
from tests.shapes import corpus, equioriented


def seg_of(P, labels):
    return make_segment(P, tuple(P.id_of(x) for x in labels))


def test_standalone_chain_is_one_equioriented_segment():
    P = chain(5)
    segs = find_an_segments(P)
    assert len(segs) == 1
    assert segs[0].equioriented and segs[0].labels(P) == ["c0", "c1", "c2", "c3", "c4"]


def test_star_arms_fail_the_end_condition_at_the_centre():
    assert find_an_segments(star(3)) == []


def test_cycle_segments_stop_one_short_of_closing():
    P = alternating_cycle(4, (1, 1, 1, 1))
    segs = find_an_segments(P)
    assert segs and all(s.n == P.n - 1 and not s.equioriented for s in segs)


def test_branching_end_is_rejected():
    P = poset_from_covers(["a", "b", "c", "x"], [("a", "b"), ("b", "c"), ("a", "x")])
    assert not is_segment(P, (0, 1, 2))
    assert is_segment(P, (1, 2))


def test_contracting_a_six_chain_leaves_a_three_chain():
    P = chain(6)
    Q = contract_segment(P, find_an_segments(P)[0])
    assert Q.labels == ("c0", "c1", "c2")
    assert len(Q.covers) == 2


def test_contraction_errors():
    P = chain(3)
    with pytest.raises(SegmentTooShort):
        contract_segment(P, find_an_segments(P)[0])
    # zigzag segment whose far end is not a leaf
    Z = poset_from_covers(
        ["s0", "s1", "l1", "l2", "l3", "l4", "t"],
        [("s0", "l1"), ("s1", "l1"), ("l1", "l2"), ("l3", "l2"), ("l3", "l4"), ("l4", "t")],
    )
    seg = seg_of(Z, ["l1", "l2", "l3", "l4"])
    with pytest.raises(HypothesisUnmet):
        contract_segment(Z, seg)


def test_figure_pair_has_equal_dimension():
    P = equioriented(5, ["s0", "s1", "s2"], ["t0", "t1", "t2"], "figure")
    seg = seg_of(P, ["l1", "l2", "l3", "l4", "l5"])
    Q = contract_segment(P, seg)
    assert Q.n == P.n - 2
    assert intresgldim(P) == intresgldim(Q)


def test_tree_arm_is_truncated():
    P = leafy = poset_from_covers(
        ["c", "a", "b", "l2", "l3", "l4", "l5"],
        [("a", "c"), ("b", "c"), ("c", "l2"), ("l3", "l2"), ("l3", "l4"), ("l5", "l4")],
    )
    seg = seg_of(P, ["c", "l2", "l3", "l4", "l5"])
    assert contraction_case(P, seg) == "leaf"
    assert contract_segment(leafy, seg).labels == ("c", "a", "b", "l2", "l3")


@pytest.mark.parametrize("P, labels, case", corpus(), ids=lambda v: getattr(v, "name", None))
def test_corpus_segments_qualify(P, labels, case):
    seg = seg_of(P, labels)
    assert is_segment(P, seg.elements)
    assert contraction_case(P, seg) == case


def test_contract_all_reaches_a_fixed_point():
    P = equioriented(6, ["s0", "s1"], ["t0", "t1"], "eq")
    Q, trace = contract_all(P)
    assert trace == [["l4", "l5", "l6"]]
    assert contract_all(Q)[1] == []


def test_reflection_reverses_arrows_at_a_sink():
    P = a_type(">>")
    R = reflect(P, P.id_of("v2"))
    assert {(R.labels[a], R.labels[b]) for a, b in R.covers} == {("v0", "v1"), ("v2", "v1")}
    assert reflect(R, R.id_of("v2")) == P
    with pytest.raises(NotExtremal):
        reflect(P, P.id_of("v1"))


def test_reflection_keeps_dimension_under_the_hypothesis():
    rng = np.random.default_rng(4)
    tried = 0
    for _ in range(60):
        P = random_connected_poset(int(rng.integers(3, 7)), rng)
        for a in range(P.n):
            if reflection_preserves_gldim(P, a):
                assert intresgldim(P) == intresgldim(reflect(P, a))
                tried += 1
    assert tried > 20
