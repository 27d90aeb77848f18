import numpy as np
import pytest

from posetlab.catalog import bipath, random_connected_poset, star
from posetlab.errors import CycleDetected, DuplicateLabel, ParseError, UnknownLabel
from posetlab.formats import format_poset, parse_poset, to_dot
from posetlab.poset import antichain, bits, chain, poset_from_covers
from tests.oracles import brute


def reference_intervals(poset):
    """All convex connected subsets by subset enumeration, from an independent closure."""
    order = brute.Order(poset.labels, [(poset.labels[a], poset.labels[b]) for a, b in poset.covers])
    n = order.n
    between = [[0] * n for _ in range(n)]
    comp = [0] * n
    for x in range(n):
        for y in range(n):
            if order.leq[x][y]:
                between[x][y] = sum(1 << z for z in range(n) if order.leq[x][z] and order.leq[z][y])
            if order.leq[x][y] or order.leq[y][x]:
                comp[x] |= 1 << y
    out = set()
    for mask in range(1, 1 << n):
        ids = list(bits(mask))
        if any(between[x][y] & ~mask for x in ids for y in ids if order.leq[x][y]):
            continue
        seen = frontier = mask & -mask
        while frontier:
            grow = 0
            for x in bits(frontier):
                grow |= comp[x] & mask
            frontier = grow & ~seen
            seen |= grow
        if seen == mask:
            out.add(mask)
    return out


def test_transitive_edges_are_reduced():
    P = poset_from_covers(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])
    assert [(P.labels[a], P.labels[b]) for a, b in P.covers] == [("a", "b"), ("b", "c")]
    assert P.leq(0, 2)


def test_construction_errors():
    with pytest.raises(CycleDetected):
        poset_from_covers(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(CycleDetected):
        poset_from_covers(["a"], [("a", "a")])
    with pytest.raises(DuplicateLabel):
        poset_from_covers(["a", "a"], [])
    with pytest.raises(UnknownLabel):
        poset_from_covers(["a"], [("a", "b")])
    with pytest.raises(UnknownLabel):
        chain(2).id_of("zz")


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_chain_interval_count(n):
    assert len(chain(n).intervals) == n * (n + 1) // 2


def test_antichain_intervals_are_singletons():
    assert antichain(4).intervals == (1, 2, 4, 8)
    assert not antichain(4).is_connected()


def test_square_has_eleven_intervals():
    assert len(bipath(1, 1).intervals) == 11


def test_intervals_agree_with_subset_enumeration():
    rng = np.random.default_rng(11)
    posets = [random_connected_poset(int(rng.integers(2, 9)), rng) for _ in range(25)]
    posets += [random_connected_poset(12, rng, density=d) for d in (0.2, 0.3)]
    posets += [star(5), bipath(3, 3)]
    for P in posets:
        assert set(P.intervals) == reference_intervals(P), P


def test_interval_order_is_canonical():
    P = bipath(1, 2)
    keys = [(len(list(bits(s))), tuple(bits(s))) for s in P.intervals]
    assert keys == sorted(keys)


def test_opposite_is_an_involution():
    P = star(3, "><>")
    assert P.op.op == P
    assert set(P.op.covers) == {(b, a) for a, b in P.covers}


def test_covers_above_and_brackets():
    P = chain(4)
    s = P.mask_of(["c1"])
    assert P.label_list(P.covers_above(s)) == ["c2"]
    assert P.label_list(P.covers_below(s)) == ["c0"]
    a, b = P.mask_of(["c1"]), P.mask_of(["c2"])
    assert P.label_list(P.bracket(a, b)) == ["c1", "c2"]
    assert P.label_list(P.bracket(a, b, "left_open")) == ["c1"]
    assert P.label_list(P.bracket(a, b, "right_open")) == ["c2"]


def test_subposet_renumbers():
    P = star(4)
    sub = P.subposet(P.mask_of(["c", "l2", "l3"]))
    assert sub.labels == ("c", "l2", "l3")
    assert len(sub.covers) == 2


def test_degree_stats_of_star():
    stats = star(3, "><>").degree_stats()
    assert stats["sources"] == ["l1"]
    assert stats["sinks"] == ["l0", "l2"]
    assert set(stats["leaves"]) == {"l0", "l1", "l2"}


def test_text_round_trip():
    P = poset_from_covers(["x", "y", "z", "w"], [("x", "z"), ("y", "z"), ("z", "w"), ("x", "w")], name="demo")
    text = format_poset(P)
    assert "cover x w" not in text
    again = parse_poset(text)
    assert again == P and again.name == "demo"
    assert format_poset(again) == text


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError) as err:
        parse_poset("poset p\nelements: a b\n# note\ncover a c\n")
    assert err.value.line == 4
    with pytest.raises(ParseError) as err:
        parse_poset("elements: a\n")
    assert err.value.line == 1


def test_dot_edges_point_upwards():
    dot = to_dot(chain(3))
    assert '"c0" -> "c1";' in dot and '"c1" -> "c2";' in dot
    assert "rankdir=BT" in dot
