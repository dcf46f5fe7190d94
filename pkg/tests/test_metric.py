import cmath
import itertools
import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chi_forge.metric import (MetricError, MetricGroup, MetricValidationError, NotTannakianError,
                              SizeCapError, condense, count_unit_structures, enumerate_isotropic,
                              equivariantize, gauss_milgram, make_isotropic, metric_from_function,
                              metric_iso_test, pointed_ses_check, radical_and_muger)

TORIC = MetricGroup([2, 2], {(0, 0): 0, (1, 0): 0, (0, 1): 0, (1, 1): Fraction(1, 2)})
SEMION = MetricGroup([2], {(0,): 0, (1,): Fraction(1, 4)})


def numeric_gauss(m):
    return sum(cmath.exp(2j * math.pi * float(m.q[x])) for x in m.elements)


def small_metrics(metrics, bound=16):
    return [(n, m) for n, m in sorted(metrics.items()) if m.order <= bound]


def test_catalog_covers_required_forms(metrics):
    nondeg = {}
    for m in metrics.values():
        if radical_and_muger(m).nondegenerate:
            nondeg.setdefault(m.factors, set()).add(tuple(m.q[x] for x in m.elements))
    assert len(nondeg[(2,)]) == 2        # semion, anti-semion
    assert len(nondeg[(3,)]) == 2
    assert len(nondeg[(4,)]) == 4
    assert len(nondeg[(2, 2)]) >= 3
    assert len(small_metrics(metrics)) >= 30


def test_validation_witness():
    with pytest.raises(MetricValidationError) as err:
        MetricGroup([2], {(0,): 0, (1,): Fraction(1, 3)})
    assert err.value.witness == ((1,), (1,), (1,))
    with pytest.raises(MetricValidationError) as err:
        MetricGroup([3], {(0,): 0, (1,): Fraction(1, 3), (2,): 0})
    assert err.value.witness == ((1,),)
    with pytest.raises(MetricValidationError):
        MetricGroup([2], {(0,): 0})


def test_all_forms_on_z4_enumerated_by_brute_force(metrics):
    """Every q: Z/4 -> Q/Z with q(x) = a x^2 / 8 is valid; nothing else is."""
    valid = []
    for vals in itertools.product([Fraction(k, 8) for k in range(8)], repeat=3):
        table = {(0,): Fraction(0), (1,): vals[0], (2,): vals[1], (3,): vals[2]}
        try:
            valid.append(MetricGroup([4], table))
        except MetricValidationError:
            pass
    assert len(valid) == 8
    cat = {tuple(m.q[x] for x in m.elements) for m in metrics.values() if m.factors == (4,)}
    assert {tuple(m.q[x] for x in m.elements) for m in valid} == cat


def test_radical():
    assert radical_and_muger(TORIC).nondegenerate
    z = MetricGroup([2, 2], {x: 0 for x in itertools.product(range(2), repeat=2)})
    rep = radical_and_muger(z)
    assert len(rep.radical) == 4 and rep.muger_symmetric and rep.tannakian
    fermion = MetricGroup([2], {(0,): 0, (1,): Fraction(1, 2)})
    assert not radical_and_muger(fermion).tannakian


def test_gauss_sums_known():
    total, sigma = gauss_milgram(SEMION)
    assert sigma == 1
    assert abs(complex(total) - (1 + 1j)) < 1e-12
    total, sigma = gauss_milgram(TORIC)
    assert total == 2 and sigma == 0


def test_gauss_sum_against_numeric(metrics):
    for name, m in metrics.items():
        total, sigma = gauss_milgram(m)
        z = numeric_gauss(m)
        assert abs(complex(total) - z) < 1e-9, name
        if sigma is not None:
            assert abs(abs(z) ** 2 - m.order) < 1e-9
            angle = round(cmath.phase(z) / (2 * math.pi) * 8) % 8
            assert sigma == angle, name


def brute_isotropic(m):
    """All subsets containing 0, closed under addition, with q = 0 on them."""
    els = [x for x in m.elements if m.q[x] == 0 and x != m.zero]
    found = set()
    for r in range(len(els) + 1):
        for subset in itertools.combinations(els, r):
            s = set(subset) | {m.zero}
            if all(m.add(a, b) in s for a in s for b in s):
                found.add(frozenset(s))
    return found


def test_isotropic_against_brute_force(metrics):
    for name, m in small_metrics(metrics, 8):
        ours = {h.members for h in enumerate_isotropic(m)}
        assert ours == brute_isotropic(m), name
        rad = set(radical_and_muger(m).radical)
        transparent = {h.members for h in enumerate_isotropic(m, require_transparent=True)}
        assert transparent == {h for h in ours if h <= rad}


def test_toric_isotropic():
    subs = enumerate_isotropic(TORIC)
    assert sorted(len(h) for h in subs) == [1, 2, 2]
    zero_form = MetricGroup([2, 2], {x: 0 for x in itertools.product(range(2), repeat=2)})
    assert len(enumerate_isotropic(zero_form, require_transparent=True)) == 5


def test_make_isotropic_rejects():
    with pytest.raises(MetricError):
        make_isotropic(TORIC, [(1, 1)])


def test_condense_toric_electric():
    h = make_isotropic(TORIC, [(1, 0)])
    theory = condense(TORIC, h)
    assert len(theory.objects) == 2
    assert theory.check_grading_multiplicative()
    assert len(theory.grading_group) == 2
    res = equivariantize(theory)
    assert res.simple_count == 4 and res.unit_structures == 2
    assert metric_iso_test(res.metric, TORIC) is not None


@pytest.mark.parametrize("representative", ["min", "max"])
def test_round_trip_every_isotropic_subgroup(metrics, representative):
    for name, m in small_metrics(metrics):
        for h in enumerate_isotropic(m):
            theory = condense(m, h, representative)
            assert theory.check_grading_multiplicative()
            assert len(theory.objects) * len(h) == m.order
            res = equivariantize(theory)
            assert res.simple_count == m.order
            assert metric_iso_test(res.metric, m) is not None, (name, sorted(h.members))


def test_representative_choice_does_not_change_data():
    m = MetricGroup([4], {(0,): 0, (1,): Fraction(1, 8), (2,): Fraction(1, 2), (3,): Fraction(1, 8)})
    zero = MetricGroup([4, 2], {x: 0 for x in itertools.product(range(4), range(2))})
    for mm in (m, zero):
        for h in enumerate_isotropic(mm):
            a, b = condense(mm, h, "min"), condense(mm, h, "max")
            grade_a = sorted(a.grading[x] for x in a.objects)
            grade_b = sorted(b.grading[x] for x in b.objects)
            assert grade_a == grade_b
            assert sorted(a.twist.values()) == sorted(b.twist.values())


def test_unit_structures_equal_dual_order(metrics):
    for name, m in small_metrics(metrics):
        for h in enumerate_isotropic(m, require_transparent=True):
            theory = condense(m, h)
            assert count_unit_structures(theory) == len(h)


@pytest.mark.parametrize("representative", ["min", "max"])
def test_pointed_exact_sequence(metrics, representative):
    for name, m in small_metrics(metrics):
        for h in enumerate_isotropic(m, require_transparent=True):
            rep = pointed_ses_check(m, h, representative)
            assert rep.exact, (name, sorted(h.members))
            assert len(rep.kernel) == len(h)


def test_pointed_sequence_rejects_non_tannakian():
    with pytest.raises(NotTannakianError):
        pointed_ses_check(TORIC, make_isotropic(TORIC, [(1, 0)]))


def test_iso():
    anti = MetricGroup([2], {(0,): 0, (1,): Fraction(3, 4)})
    assert metric_iso_test(SEMION, anti) is None
    swapped = MetricGroup([2, 2], {(0, 0): 0, (1, 0): 0, (0, 1): 0, (1, 1): Fraction(1, 2)})
    iso = metric_iso_test(TORIC, swapped)
    assert iso is not None
    for x in TORIC.elements:
        assert swapped.q[iso[x]] == TORIC.q[x]
    big = MetricGroup([2] * 7, {x: 0 for x in itertools.product(range(2), repeat=7)})
    with pytest.raises(SizeCapError):
        metric_iso_test(big, big)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 7), st.integers(0, 7), st.integers(0, 3))
def test_forms_from_quadratic_functions(a, c, bcoef):
    """q(x, y) = a x^2/8 + b x y/4 + c y^2/8 on Z/4 x Z/4 ... when well defined."""
    def form(x):
        return Fraction(a * x[0] ** 2, 8) + Fraction(bcoef * x[0] * x[1], 4) \
            + Fraction(c * x[1] ** 2, 8)
    m = metric_from_function([4, 4], form)
    for x in m.elements:
        for y in m.elements:
            assert m.b(x, y) == m.b(y, x)
    rt = MetricGroup.from_json(json.loads(json.dumps(m.to_json())))
    assert rt.q == m.q
