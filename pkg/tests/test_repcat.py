import json
from fractions import Fraction

import pytest

from chi_forge.exact.cyclotomic import cyclo
from chi_forge.groups import abelian_group, direct_product
from chi_forge.metric import MetricGroup, pointed_braided
from chi_forge.repcat import (BraidedFusionData, FusionRing, RankCapError, character_table,
                              deligne_product, fusion_coefficients, fusion_ring_isomorphic,
                              group_ses_check, modularity_test, restrict_quotient)

DIMS = {"S3": [1, 1, 2], "D4": [1, 1, 1, 1, 2], "Q8": [1, 1, 1, 1, 2], "A4": [1, 1, 1, 3],
        "S4": [1, 1, 2, 3, 3], "A5": [1, 3, 3, 4, 5], "S5": [1, 1, 4, 4, 5, 5, 6],
        "A6": [1, 5, 5, 8, 8, 9, 10]}


@pytest.mark.parametrize("name", sorted(DIMS))
def test_degrees(groups, name):
    t = character_table(groups[name])
    t.verify()
    assert sorted(t.dims) == DIMS[name]
    assert t.dims[0] == 1 and all(v == 1 for v in t.characters[0])


@pytest.mark.parametrize("name", ["S4", "A5", "S5", "A6"])
def test_permutation_character_decomposes(groups, name):
    """The natural permutation character has non-negative integer multiplicities."""
    g = groups[name]
    t = character_table(g)
    perm = [cyclo(sum(1 for i in range(g.degree) if g.elements[c[0]][i] == i)) for c in t.classes]
    mults = [t.inner_product(perm, row) for row in t.characters]
    assert all(m.denominator == 1 and m >= 0 for m in mults)
    assert mults[0] == 1  # transitive action
    assert sum(m * d for m, d in zip(mults, t.dims)) == g.degree


def test_abelian_table_is_dual(groups):
    t = character_table(groups["C12"])
    assert t.rank == 12 and all(d == 1 for d in t.dims)
    assert all(v.as_root_of_unity() is not None for row in t.characters for v in row)


def test_table_is_deterministic(groups):
    a = character_table(groups["S4"]).to_json()
    b = character_table(groups["S4"]).to_json()
    assert json.dumps(a) == json.dumps(b)


@pytest.mark.parametrize("name", ["S3", "Q8", "A4", "A5"])
def test_fusion_ring_axioms(groups, name):
    ring = fusion_coefficients(character_table(groups[name]))
    ring.verify()
    n = ring.coefficients
    for i in range(ring.rank):
        for j in range(ring.rank):
            assert sum(int(n[i, j, k]) * ring.dims[k] for k in range(ring.rank)) \
                == ring.dims[i] * ring.dims[j]


def test_a5_fusion_known_rule(groups):
    # 3 x 3 = 1 + 3 + 5 for one of the two three-dimensional irreducibles
    ring = fusion_coefficients(character_table(groups["A5"]))
    three = [i for i, d in enumerate(ring.dims) if d == 3]
    prod = ring.coefficients[three[0], three[0], :]
    assert sorted(ring.dims[k] for k in range(ring.rank) if prod[k]) == [1, 3, 5]


def test_fusion_json_round_trip(groups):
    ring = fusion_coefficients(character_table(groups["S4"]))
    again = FusionRing.from_json(json.loads(json.dumps(ring.to_json())))
    assert fusion_ring_isomorphic(ring, again) == list(range(ring.rank))


def test_ring_isomorphism(groups):
    d4 = fusion_coefficients(character_table(groups["D4"]))
    q8 = fusion_coefficients(character_table(groups["Q8"]))
    assert fusion_ring_isomorphic(d4, q8) is not None
    a5 = fusion_coefficients(character_table(groups["A5"]))
    a6 = fusion_coefficients(character_table(groups["A6"]))
    assert fusion_ring_isomorphic(a5, a6) is None
    v4 = fusion_coefficients(character_table(groups["V4"]))
    c4 = fusion_coefficients(character_table(groups["C4"]))
    assert fusion_ring_isomorphic(v4, c4) is None


def test_rank_cap_only_when_searching(groups):
    c12 = fusion_coefficients(character_table(groups["C12"]))
    with pytest.raises(RankCapError):
        fusion_ring_isomorphic(c12, c12, cap=4)
    a6 = fusion_coefficients(character_table(groups["A6"]))
    assert fusion_ring_isomorphic(c12, a6, cap=4) is None


def test_deligne_product(groups):
    t = deligne_product(character_table(groups["C2"]), character_table(groups["S3"]))
    ring = fusion_coefficients(t)
    ring.verify()
    assert ring.rank == 6
    direct = fusion_coefficients(character_table(direct_product(groups["C2"], groups["S3"])))
    assert fusion_ring_isomorphic(ring, direct) is not None


def test_restrict_quotient(groups, catalog):
    inst = {n: (g, h) for n, g, h in catalog.ses_instances()}
    g, n = inst["s3-a3"]
    assert restrict_quotient(g, n) == ([0, 1], [0, 1])
    g, n = inst["q8-center"]
    sel, match = restrict_quotient(g, n)
    assert len(sel) == 4 and sorted(match) == [0, 1, 2, 3]


@pytest.mark.parametrize("name", ["S3", "D4", "A4", "A5"])
def test_rep_g_not_modular(groups, name):
    rep = modularity_test(BraidedFusionData.from_table(character_table(groups[name])))
    assert rep.verdict == "SYMMETRIC" and rep.s_rank == 1
    assert rep.to_text() == "SYMMETRIC, s-rank 1, not modular"


def test_pointed_modularity():
    semion = MetricGroup([2], {(0,): 0, (1,): Fraction(1, 4)})
    assert modularity_test(pointed_braided(semion)).verdict == "MODULAR"
    boson = MetricGroup([2], {(0,): 0, (1,): 0})
    assert modularity_test(pointed_braided(boson)).verdict == "SYMMETRIC"


@pytest.mark.parametrize("inst", ["s3-a3", "c4-c2", "q8-center"])
@pytest.mark.parametrize("section", ["min", "max"])
def test_group_exact_sequence(catalog, inst, section):
    found = {n: (g, h) for n, g, h in catalog.ses_instances()}
    g, n = found[inst]
    rep = group_ses_check(g, n, section=section)
    assert rep.exact
    unliftable = [ev for ev in rep.evidence if ev.invariant and not ev.liftable]
    assert bool(unliftable) == (inst == "q8-center")


def test_group_sequence_independent_of_section(catalog):
    found = {n: (g, h) for n, g, h in catalog.ses_instances()}
    g, n = found["q8-center"]
    a = group_ses_check(g, n, "min")
    b = group_ses_check(g, n, "max")
    assert [ev.liftable for ev in a.evidence] == [ev.liftable for ev in b.evidence]
    assert a.liftable == b.liftable
