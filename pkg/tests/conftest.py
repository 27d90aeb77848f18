import json
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

from posetlab.linalg import GF
from posetlab.pmod import PersistenceModule
from posetlab.poset import Poset, poset_from_covers
from tests.oracles import brute

DATA = Path(__file__).parent / "data"


@lru_cache(maxsize=None)
def derived() -> dict:
    return json.loads((DATA / "derived.json").read_text())


def poset_of(record: dict, name: str = "P") -> Poset:
    return poset_from_covers(record["labels"], [tuple(c) for c in record["covers"]], name=record.get("name", name))


def module_of(record: dict, poset: Poset) -> PersistenceModule:
    field = GF(record["field"])
    data = record["module"]
    maps = {}
    for key, mat in data["maps"].items():
        a, b = key.split()
        maps[(poset.id_of(a), poset.id_of(b))] = np.array(mat, dtype=np.int64).reshape(
            data["dims"][poset.id_of(b)], data["dims"][poset.id_of(a)]
        )
    return PersistenceModule(poset, data["dims"], maps, field)


def terms_as_labels(poset: Poset, terms: list[dict[int, int]]) -> list[list]:
    return [sorted([poset.label_list(s), m] for s, m in t.items()) for t in terms]


@pytest.fixture
def rng():
    return np.random.default_rng(7)


def as_rep(module):
    """The module in the reference oracle's format, with a matrix on every relation."""
    P = module.poset
    order = brute.Order(P.labels, [(P.labels[a], P.labels[b]) for a, b in P.covers])
    rel = {(a, b): module.path_map(a, b).tolist() for a, b in order.pairs}
    return brute.Rep(order, module.dims, rel, module.field.p)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
