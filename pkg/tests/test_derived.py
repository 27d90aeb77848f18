"""Frozen values from the brute-force reference in ``tests/oracles``."""

import pytest

from posetlab.intres import gamma, interval_resolution, intresgldim, irreducible_arrows
from tests.conftest import derived, module_of, poset_of, terms_as_labels

GLDIM = derived()["gldim"]
RESOLUTIONS = derived()["resolutions"]
GAMMA = derived()["gamma"]


@pytest.mark.parametrize("record", GLDIM, ids=[r["name"] for r in GLDIM])
def test_global_dimension(record):
    assert intresgldim(poset_of(record)) == record["gldim"]


@pytest.mark.parametrize("record", RESOLUTIONS, ids=[r["name"] for r in RESOLUTIONS])
def test_resolution_terms(record):
    P = poset_of(record)
    M = module_of(record, P)
    res = interval_resolution(M)
    expected = [sorted([sorted(labels), mult] for labels, mult in term) for term in record["terms"]]
    got = [sorted([sorted(labels), mult] for labels, mult in term) for term in terms_as_labels(P, res.terms)]
    assert got == expected


@pytest.mark.parametrize("record", GAMMA, ids=[f"{r['poset']}-{'.'.join(r['S'])}" for r in GAMMA])
def test_gamma(record):
    P = poset_of(record)
    s = P.mask_of(record["S"])
    sources = sorted(sorted(P.label_list(a.source)) for a in irreducible_arrows(P, s))
    assert sources == sorted(sorted(a) for a in record["arrows"])
    g = gamma(P, s)
    assert [g.dims[P.id_of(lab)] for lab in record["labels"]] == record["dims"]
