import cmath
import itertools
import math
from fractions import Fraction

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf
from sympy.polys.domains import ZZ
from hypothesis import given, settings
from hypothesis import strategies as st

from chi_forge.exact.cyclotomic import (Cyclotomic, CyclotomicParseError, QmodZ, cyclo,
                                        embed_numeric, mod1, sqrt_rational, zeta)
from chi_forge.exact.matrices import CycloMatrix, nullspace, rank, solve_linear
from chi_forge.exact.modp import PrimeField, choose_prime, simultaneous_eigenvectors
from chi_forge.exact.smith import det_int, smith_normal_form, solve_affine_mod

ORDERS = [1, 2, 3, 4, 5, 6, 8, 9, 12, 15]

coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def cyclotomics(draw):
    e = draw(st.sampled_from(ORDERS))
    terms = draw(st.dictionaries(st.integers(0, e - 1), coeff, max_size=4))
    return Cyclotomic.from_exponents(e, terms), e, terms


def numeric(e, terms):
    """Independent float evaluation of sum c_k exp(2 pi i k / e)."""
    return sum(float(c) * cmath.exp(2j * math.pi * k / e) for k, c in terms.items())


@settings(max_examples=150, deadline=None)
@given(cyclotomics())
def test_canonical_form_matches_numeric_value(data):
    x, e, terms = data
    assert abs(complex(x) - numeric(e, terms)) < 1e-9


@settings(max_examples=100, deadline=None)
@given(cyclotomics(), cyclotomics())
def test_ring_operations_agree_with_numeric(a, b):
    x, y = a[0], b[0]
    assert abs(complex(x + y) - (complex(x) + complex(y))) < 1e-9
    assert abs(complex(x * y) - complex(x) * complex(y)) < 1e-8
    assert abs(complex(x - y) - (complex(x) - complex(y))) < 1e-9


@settings(max_examples=100, deadline=None)
@given(cyclotomics(), cyclotomics(), cyclotomics())
def test_field_axioms(a, b, c):
    x, y, z = a[0], b[0], c[0]
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    if x:
        assert x * x.inverse() == 1


@settings(max_examples=100, deadline=None)
@given(cyclotomics())
def test_literal_round_trip_and_hash(data):
    x = data[0]
    y = Cyclotomic.parse(x.literal())
    assert y == x and hash(y) == hash(x)


@settings(max_examples=100, deadline=None)
@given(cyclotomics(), cyclotomics())
def test_conjugation_is_multiplicative(a, b):
    x, y = a[0], b[0]
    assert (x * y).conjugate() == x.conjugate() * y.conjugate()
    assert abs(complex(x.conjugate()) - complex(x).conjugate()) < 1e-9


def test_order_lowering():
    assert zeta(4, 2) == -1
    assert zeta(6, 2) == zeta(3)
    assert (zeta(8) ** 2) == zeta(4)
    assert zeta(3) + zeta(3, 2) == -1
    assert (zeta(5) + zeta(5, 4)).order in (5, 10)


def test_roots_of_unity():
    for e in (1, 2, 3, 4, 5, 8, 12):
        for k in range(e):
            assert zeta(e, k).as_root_of_unity() == Fraction(k, e)
    assert cyclo(2).as_root_of_unity() is None
    assert (1 + zeta(4)).as_root_of_unity() is None


def test_galois_action_on_zeta():
    assert zeta(5).galois(2) == zeta(5, 2)
    assert zeta(4).galois(3) == zeta(4).conjugate()


@pytest.mark.parametrize("x", [Fraction(2), Fraction(3), Fraction(5), Fraction(1, 2),
                               Fraction(12), Fraction(7, 3), Fraction(60), Fraction(0)])
def test_sqrt_rational(x):
    r = sqrt_rational(x)
    assert r * r == x
    assert abs(complex(r) - math.sqrt(x)) < 1e-9


def test_sqrt_rational_negative():
    with pytest.raises(ValueError):
        sqrt_rational(-1)


def test_parse_errors():
    for bad in ["c(0)[1]=1", "c(3)[x]=1", "hello", "c(4)[1]=1/0"]:
        with pytest.raises((CyclotomicParseError, ZeroDivisionError)):
            Cyclotomic.parse(bad)


def test_embed_numeric_high_precision():
    assert abs(embed_numeric(zeta(7), 30) - cmath.exp(2j * math.pi / 7)) < 1e-14


def test_qmodz():
    assert mod1(Fraction(5, 4)) == Fraction(1, 4)
    assert mod1(Fraction(-1, 3)) == Fraction(2, 3)
    assert QmodZ(Fraction(3, 2)) == Fraction(1, 2)


# -- matrices ---------------------------------------------------------------

small = st.integers(-3, 3)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=5))
def test_rank_agrees_with_sympy(rows):
    ours = rank([[cyclo(a) for a in r] for r in rows])
    assert ours == sympy.Matrix(rows).rank()


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=4))
def test_nullspace_vectors_are_killed(rows):
    crows = [[cyclo(a) for a in r] for r in rows]
    ns = nullspace(crows, 4)
    assert len(ns) == 4 - sympy.Matrix(rows).rank()
    for v in ns:
        for r in crows:
            assert sum((a * b for a, b in zip(r, v)), cyclo(0)) == 0


def test_solve_linear():
    a = [[cyclo(1), cyclo(1)], [cyclo(1), cyclo(-1)]]
    x = solve_linear(a, [cyclo(3), cyclo(1)])
    assert x == [cyclo(2), cyclo(1)]


def test_cyclomatrix_unitary_and_inverse():
    h = CycloMatrix([[1, 1], [1, -1]]).scale(sqrt_rational(Fraction(1, 2)))
    assert h.is_unitary()
    f = CycloMatrix([[1, 1, 1], [1, zeta(3), zeta(3, 2)], [1, zeta(3, 2), zeta(3)]])
    assert (f @ f.inverse()).is_identity()
    assert CycloMatrix.parse(f.literal()) == f


# -- Smith normal form ----------------------------------------------------------

@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_smith_normal_form(rows, cols, data):
    m = data.draw(st.lists(st.lists(st.integers(-6, 6), min_size=cols, max_size=cols),
                           min_size=rows, max_size=rows))
    d, u, v = smith_normal_form(m)
    prod = sympy.Matrix(u) * sympy.Matrix(m) * sympy.Matrix(v)
    assert prod == sympy.Matrix(d)
    assert abs(sympy.Matrix(u).det()) == 1 and abs(sympy.Matrix(v).det()) == 1
    diag = [d[i][i] for i in range(min(rows, cols))]
    for i in range(rows):
        for j in range(cols):
            if i != j:
                assert d[i][j] == 0
    nonzero = [x for x in diag if x]
    for a, b in zip(nonzero, nonzero[1:]):
        assert b % a == 0
    # invariant factors agree with sympy's
    ref = [abs(x) for x in sympy_snf(sympy.Matrix(m), domain=ZZ).diagonal()]
    assert sorted(x for x in ref if x) == sorted(nonzero)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3))
def test_det_int(m):
    assert det_int(m) == sympy.Matrix(m).det()


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 6), st.integers(1, 3), st.integers(1, 3), st.data())
def test_solve_affine_mod_against_brute_force(mod, rows, cols, data):
    a = data.draw(st.lists(st.lists(st.integers(0, mod - 1), min_size=cols, max_size=cols),
                           min_size=rows, max_size=rows))
    b = data.draw(st.lists(st.integers(0, mod - 1), min_size=rows, max_size=rows))
    x = solve_affine_mod(a, b, mod)
    brute = any(all(sum(ai * xi for ai, xi in zip(r, cand)) % mod == bi % mod
                    for r, bi in zip(a, b))
                for cand in itertools.product(range(mod), repeat=cols))
    assert (x is not None) == brute
    if x is not None:
        assert all(sum(ai * xi for ai, xi in zip(r, x)) % mod == bi for r, bi in zip(a, b))


# -- modular arithmetic ------------------------------------------------------------

def test_choose_prime_and_field():
    p = choose_prime(12, 30)
    assert sympy.isprime(p) and p % 12 == 1 and p > 30
    f = PrimeField(p, 12)
    assert pow(f.zeta(12), 12, p) == 1 and pow(f.zeta(12), 6, p) != 1
    assert f.cyclo(zeta(12, 3)) == f.zeta(12, 3)
    assert f.cyclo(zeta(3) + zeta(3, 2)) == p - 1


def test_simultaneous_eigenvectors_diagonal():
    f = PrimeField(13, 4)
    mats = [[[1, 0], [0, 2]], [[3, 0], [0, 3]]]
    vecs = simultaneous_eigenvectors(f, mats, 2)
    assert len(vecs) == 2
