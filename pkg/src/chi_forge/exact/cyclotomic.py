"""Exact arithmetic in cyclotomic fields.

A value lives in Q(zeta_e) and is stored on the tensor-product basis

    prod_i zeta_{q_i}^{k_i},    e = prod_i q_i,  q_i = p_i^{a_i},  0 <= k_i < phi(q_i)

so every element has exactly one coordinate vector.  After every operation
the order is lowered to the conductor (with the convention that an order is
never 2 mod 4).  Membership in a subfield can be read off the support:

* for ``a_i >= 2`` the value lies in the subfield with ``q_i -> q_i/p_i`` iff
  every exponent ``k_i`` is divisible by ``p_i``;
* for ``a_i == 1`` the prime can be dropped iff every ``k_i`` is zero.
"""
from __future__ import annotations

import cmath
import math
import re
from fractions import Fraction
from functools import lru_cache
from itertools import product
from numbers import Rational as _RationalABC

import sympy

__all__ = [
    "Cyclotomic",
    "CyclotomicParseError",
    "zeta",
    "cyclo",
    "cyclo_canonical",
    "embed_numeric",
    "sqrt_rational",
    "QmodZ",
    "mod1",
]


class CyclotomicParseError(ValueError):
    pass


def mod1(x) -> Fraction:
    """Reduce a rational into ``[0, 1)``."""
    x = Fraction(x)
    return x - math.floor(x)


class QmodZ(Fraction):
    """A rational number taken modulo 1, kept in ``[0, 1)``."""

    def __new__(cls, value=0, denominator=None):
        v = Fraction(value) if denominator is None else Fraction(value, denominator)
        v = v - math.floor(v)
        return super().__new__(cls, v.numerator, v.denominator)

    def __add__(self, other):
        return QmodZ(Fraction(self) + Fraction(other))

    __radd__ = __add__

    def __sub__(self, other):
        return QmodZ(Fraction(self) - Fraction(other))

    def __rsub__(self, other):
        return QmodZ(Fraction(other) - Fraction(self))

    def __neg__(self):
        return QmodZ(-Fraction(self))

    def __mul__(self, other):
        if isinstance(other, int):
            return QmodZ(Fraction(self) * other)
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        return f"QmodZ({Fraction(self)})"


@lru_cache(maxsize=None)
def _factor(e: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(sympy.factorint(e).items()))


@lru_cache(maxsize=None)
def _reduce_component(p: int, a: int, k: int) -> tuple[tuple[int, int], ...]:
    """Express zeta_{p^a}^k on the power basis ``k' < phi(p^a)``."""
    q = p**a
    k %= q
    phi = (p - 1) * p ** (a - 1)
    if k < phi:
        return ((k, 1),)
    r = k - phi
    step = p ** (a - 1)
    return tuple((j * step + r, -1) for j in range(p - 1))


@lru_cache(maxsize=200_000)
def _reduce_key(factors: tuple[tuple[int, int], ...], raw: tuple[int, ...]):
    parts = [_reduce_component(p, a, k) for (p, a), k in zip(factors, raw)]
    if all(len(x) == 1 for x in parts):
        return ((tuple(x[0][0] for x in parts), math.prod(x[0][1] for x in parts)),)
    out = []
    for combo in product(*parts):
        out.append((tuple(c[0] for c in combo), math.prod(c[1] for c in combo)))
    return tuple(out)


@lru_cache(maxsize=None)
def _lift_map(src: int, dst: int):
    """Exponent-tuple transformer from the basis of Q(zeta_src) to Q(zeta_dst)."""
    sf = dict(_factor(src))
    df = _factor(dst)
    plan = []
    for idx, (p, a) in enumerate(df):
        if p in sf:
            src_pos = [q for q, _ in _factor(src)].index(p)
            plan.append((src_pos, p ** (a - sf[p])))
        else:
            plan.append((None, 0))
    return df, tuple(plan)


def _norm_order(e: int) -> int:
    return e // 2 if e % 4 == 2 else e


class Cyclotomic:
    """An element of a cyclotomic field, always in canonical form.

    Instances are immutable and hashable; equality is structural on the
    canonical representation.
    """

    __slots__ = ("_order", "_terms", "_hash")

    def __init__(self, order: int, terms: dict | None = None, *, _canonical=False):
        if order < 1:
            raise ValueError("order must be positive")
        if _canonical:
            self._order = order
            self._terms = terms
        else:
            order2, terms2 = _canonicalize(order, terms or {})
            self._order = order2
            self._terms = terms2
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def rational(cls, x) -> "Cyclotomic":
        x = Fraction(x)
        if x == 0:
            return _ZERO
        return cls(1, {(): x}, _canonical=True)

    @classmethod
    def from_exponents(cls, e: int, coeffs: dict[int, object]) -> "Cyclotomic":
        """Build ``sum c_k zeta_e^k`` from single-integer exponents."""
        fac = _factor(e) if e > 1 else ()
        acc: dict = {}
        for k, c in coeffs.items():
            c = Fraction(c)
            if c == 0:
                continue
            raw = _split_exponent(e, fac, k)
            for key, s in _reduce_key(fac, raw):
                acc[key] = acc.get(key, 0) + s * c
        return cls(e, acc)

    # -- basic accessors ----------------------------------------------------
    @property
    def order(self) -> int:
        return self._order

    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return self._order == 1

    def to_fraction(self) -> Fraction:
        if self._order != 1:
            raise ValueError(f"{self} is not rational")
        return self._terms.get((), Fraction(0))

    def exponent_coefficients(self) -> dict[int, Fraction]:
        """Coefficients on ``zeta_order^k`` keyed by the single exponent k."""
        e = self._order
        fac = _factor(e) if e > 1 else ()
        out = {}
        for key, c in self._terms.items():
            k = sum(ki * (e // (p**a)) for ki, (p, a) in zip(key, fac)) % e if fac else 0
            out[k] = c
        return out

    # -- arithmetic ---------------------------------------------------------
    def _lifted(self, e: int) -> dict:
        if e == self._order:
            return self._terms
        df, plan = _lift_map(self._order, e)
        out = {}
        for key, c in self._terms.items():
            new = tuple(key[src] * mult if src is not None else 0 for src, mult in plan)
            out[new] = c
        return out

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        e = math.lcm(self._order, other._order)
        a = dict(self._lifted(e))
        for k, c in other._lifted(e).items():
            v = a.get(k, 0) + c
            if v:
                a[k] = v
            else:
                a.pop(k, None)
        return Cyclotomic(e, a)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self._order, {k: -c for k, c in self._terms.items()}, _canonical=True)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return _ZERO
            return Cyclotomic(self._order, {k: c * other for k, c in self._terms.items()},
                              _canonical=True)
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not self._terms or not other._terms:
            return _ZERO
        if other._order == 1:
            return self * other._terms[()]
        if self._order == 1:
            return other * self._terms[()]
        e = math.lcm(self._order, other._order)
        fac = _factor(e)
        a = self._lifted(e)
        b = other._lifted(e)
        acc: dict = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                raw = tuple(x + y for x, y in zip(ka, kb))
                c = ca * cb
                for key, s in _reduce_key(fac, raw):
                    acc[key] = acc.get(key, 0) + (c if s == 1 else -c)
        return Cyclotomic(e, acc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = _ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def galois(self, a: int) -> "Cyclotomic":
        """Apply the automorphism zeta_e -> zeta_e^a (gcd(a, e) = 1)."""
        e = self._order
        if e == 1:
            return self
        if math.gcd(a, e) != 1:
            raise ValueError("Galois exponent must be a unit modulo the order")
        fac = _factor(e)
        acc: dict = {}
        for key, c in self._terms.items():
            raw = tuple(k * a for k in key)
            for k2, s in _reduce_key(fac, raw):
                acc[k2] = acc.get(k2, 0) + s * c
        return Cyclotomic(e, acc)

    def conjugate(self) -> "Cyclotomic":
        return self.galois(-1)

    def inverse(self) -> "Cyclotomic":
        if not self._terms:
            raise ZeroDivisionError("inverse of zero cyclotomic")
        e = self._order
        if e == 1:
            return Cyclotomic.rational(1 / self._terms[()])
        if len(self._terms) == 1:
            (key, c), = self._terms.items()
            fac = _factor(e)
            raw = tuple(-k for k in key)
            acc = {}
            for k2, s in _reduce_key(fac, raw):
                acc[k2] = acc.get(k2, 0) + s / c
            return Cyclotomic(e, acc)
        # product of the non-trivial Galois conjugates divided by the norm
        others = _ONE
        for a in range(2, e):
            if math.gcd(a, e) == 1:
                others = others * self.galois(a)
        norm = self * others
        if not norm.is_rational():
            raise ArithmeticError("norm is not rational; internal error")
        return others / norm.to_fraction()

    # -- comparison / hashing -------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Cyclotomic):
            return self._order == other._order and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self._terms
            return self._order == 1 and self._terms.get(()) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self._order == 1:
                self._hash = hash(self._terms.get((), Fraction(0)))
            else:
                self._hash = hash((self._order, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def sort_key(self):
        """Deterministic total order used for stable output."""
        items = sorted(self.exponent_coefficients().items())
        return (self._order, tuple((k, c.numerator, c.denominator) for k, c in items))

    # -- root of unity / numeric ----------------------------------------------
    def as_root_of_unity(self) -> Fraction | None:
        """Return ``r`` in [0, 1) with ``self == exp(2 pi i r)``, or None."""
        e = self._order
        big = math.lcm(2, e)
        if self._order == 1:
            v = self._terms.get((), 0)
            if v == 1:
                return Fraction(0)
            if v == -1:
                return Fraction(1, 2)
            return None
        if len(self._terms) > _max_root_terms(e):
            return None
        for k in range(big):
            if zeta(big, k) == self:
                return Fraction(k, big)
        return None

    def __complex__(self):
        return embed_numeric(self, 15)

    def __repr__(self):
        return f"Cyclotomic({self.literal()!r})"

    def __str__(self):
        return self.literal()

    def literal(self) -> str:
        """The canonical text literal ``c(e)[k]=a/b,...``."""
        if self._order == 1:
            return _frac_str(self._terms.get((), Fraction(0)))
        items = sorted(self.exponent_coefficients().items())
        body = ",".join(f"[{k}]={_frac_str(c)}" for k, c in items)
        return f"c({self._order}){body}"

    @classmethod
    def parse(cls, text) -> "Cyclotomic":
        """Parse ``c(e)[k1]=a1/b1,[k2]=a2/b2`` or a bare integer/fraction."""
        if isinstance(text, (int, Fraction)):
            return cls.rational(text)
        if isinstance(text, Cyclotomic):
            return text
        s = str(text).strip().replace(" ", "")
        m = re.fullmatch(r"c\((\d+)\)(.*)", s)
        if m is None:
            try:
                return cls.rational(Fraction(s))
            except (ValueError, ZeroDivisionError) as exc:
                raise CyclotomicParseError(f"bad cyclotomic literal {text!r}") from exc
        e = int(m.group(1))
        if e < 1:
            raise CyclotomicParseError(f"bad order in {text!r}")
        body = m.group(2)
        coeffs: dict[int, Fraction] = {}
        if body:
            for part in body.split(","):
                pm = re.fullmatch(r"\[(-?\d+)\]=(-?\d+(?:/\d+)?)", part)
                if pm is None:
                    raise CyclotomicParseError(f"bad term {part!r} in {text!r}")
                k = int(pm.group(1))
                coeffs[k] = coeffs.get(k, Fraction(0)) + Fraction(pm.group(2))
        return cls.from_exponents(e, coeffs)


def _max_root_terms(e: int) -> int:
    # zeta_e^k expands to at most prod_i (p_i - 1) basis terms
    return math.prod(p - 1 if p > 2 else 1 for p, _ in _factor(e)) if e > 1 else 1


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _split_exponent(e, fac, k):
    """Per-prime-power exponents (k_i) with zeta_e^k = prod zeta_{q_i}^{k_i}."""
    raw = []
    for p, a in fac:
        q = p**a
        cof = e // q
        raw.append((k * pow(cof, -1, q)) % q)
    return tuple(raw)


def _canonicalize(e: int, terms: dict):
    terms = {k: Fraction(c) for k, c in terms.items() if c != 0}
    if e == 1:
        return 1, terms
    fac = list(_factor(e))
    keys = list(terms)
    # drop/lower components while the support allows it
    changed = True
    while changed and fac:
        changed = False
        for i, (p, a) in enumerate(fac):
            if a == 1:
                if all(k[i] == 0 for k in keys):
                    fac.pop(i)
                    terms = {k[:i] + k[i + 1:]: c for k, c in terms.items()}
                    keys = list(terms)
                    changed = True
                    break
            else:
                if all(k[i] % p == 0 for k in keys):
                    fac[i] = (p, a - 1)
                    terms = {k[:i] + (k[i] // p,) + k[i + 1:]: c for k, c in terms.items()}
                    keys = list(terms)
                    changed = True
                    break
    order = math.prod(p**a for p, a in fac) if fac else 1
    if not terms:
        return 1, {}
    return order, terms


def _coerce(x):
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, (int, Fraction)) or isinstance(x, _RationalABC):
        return Cyclotomic.rational(x)
    return None


_ZERO = Cyclotomic(1, {}, _canonical=True)
_ONE = Cyclotomic(1, {(): Fraction(1)}, _canonical=True)


def zeta(e: int, k: int = 1) -> Cyclotomic:
    """The root of unity ``exp(2 pi i k / e)``."""
    return Cyclotomic.from_exponents(e, {k % e: 1})


def cyclo(x) -> Cyclotomic:
    """Coerce an int, Fraction, literal string or Cyclotomic."""
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, str):
        return Cyclotomic.parse(x)
    return Cyclotomic.rational(x)


def cyclo_canonical(order: int, coefficients) -> Cyclotomic:
    """Canonical form of ``sum_k coefficients[k] zeta_order^k``.

    ``coefficients`` may be a length-``order`` sequence or a mapping.
    """
    if not isinstance(coefficients, dict):
        coefficients = dict(enumerate(coefficients))
    return Cyclotomic.from_exponents(order, coefficients)


def embed_numeric(x: Cyclotomic, digits: int = 15) -> complex:
    """Numeric value of ``x``; for diagnostics only, never used in decisions."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    x = cyclo(x)
    if digits <= 14:
        total = 0j
        for k, c in x.exponent_coefficients().items():
            total += float(c) * cmath.exp(2j * math.pi * k / x.order)
        return total
    import mpmath

    with mpmath.workdps(digits + 10):
        total = mpmath.mpc(0)
        for k, c in x.exponent_coefficients().items():
            total += mpmath.mpf(c.numerator) / c.denominator * mpmath.expjpi(
                mpmath.mpf(2 * k) / x.order)
        return complex(total)


@lru_cache(maxsize=None)
def _sqrt_prime(p: int) -> Cyclotomic:
    if p == 2:
        return zeta(8, 1) + zeta(8, 7)
    g = Cyclotomic.from_exponents(p, {x: sympy.legendre_symbol(x, p) for x in range(1, p)})
    if p % 4 == 3:
        g = g * zeta(4, 3)
    return g


def sqrt_rational(x) -> Cyclotomic:
    """Exact positive square root of a non-negative rational as a cyclotomic."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative radicand")
    if x == 0:
        return _ZERO
    n = x.numerator * x.denominator
    square, free = 1, 1
    for p, a in sympy.factorint(n).items():
        square *= p ** (a // 2)
        if a % 2:
            free *= p
    root = Cyclotomic.rational(Fraction(square, x.denominator))
    for p in sympy.factorint(free):
        root = root * _sqrt_prime(p)
    return root
