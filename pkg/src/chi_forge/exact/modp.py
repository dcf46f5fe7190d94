"""Linear algebra over a prime field and reduction of cyclotomics modulo p.

Used by the character-table algorithm and by the block decomposition of
crossed products: both reduce to splitting a commutative split-semisimple
algebra into one-dimensional simultaneous eigenspaces.
"""
from __future__ import annotations

import math
from fractions import Fraction

import sympy

from .cyclotomic import Cyclotomic, _factor

__all__ = [
    "PrimeField",
    "choose_prime",
    "simultaneous_eigenvectors",
    "SplittingError",
]


class SplittingError(ArithmeticError):
    """The algebra does not split into linear factors over the chosen prime."""


def choose_prime(exponent: int, lower_bound: float) -> int:
    """Smallest prime ``p = 1 (mod exponent)`` with ``p > lower_bound``."""
    k = max(1, int(lower_bound) // exponent)
    while True:
        p = k * exponent + 1
        if p > lower_bound and sympy.isprime(p):
            return p
        k += 1


class PrimeField:
    """F_p together with a fixed primitive ``e``-th root of unity."""

    def __init__(self, p: int, e: int = 1):
        if (p - 1) % e:
            raise ValueError(f"p={p} is not 1 mod {e}")
        self.p = p
        self.e = e
        g = sympy.primitive_root(p)
        self.root = pow(g, (p - 1) // e, p)

    def zeta(self, order: int, k: int = 1) -> int:
        if self.e % order:
            raise ValueError(f"order {order} does not divide {self.e}")
        return pow(self.root, (self.e // order) * k % self.e, self.p)

    def frac(self, x) -> int:
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise ZeroDivisionError(f"denominator divisible by {self.p}")
        return x.numerator * pow(x.denominator, -1, self.p) % self.p

    def cyclo(self, x: Cyclotomic) -> int:
        """Image of a cyclotomic under zeta_order -> root^(e/order)."""
        if x.order == 1:
            return self.frac(x.to_fraction()) if x else 0
        total = 0
        fac = _factor(x.order)
        for key, c in x.terms().items():
            val = self.frac(c)
            for k, (pr, a) in zip(key, fac):
                if k:
                    val = val * self.zeta(pr**a, k) % self.p
            total += val
        return total % self.p

    def inv(self, a: int) -> int:
        return pow(a, -1, self.p)

    def sqrt_small(self, a: int) -> int | None:
        """A square root r of a with r <= (p-1)/2, by search."""
        a %= self.p
        for r in range(0, self.p // 2 + 1):
            if r * r % self.p == a:
                return r
        return None

    # -- matrices ---------------------------------------------------------------
    def rref(self, rows, ncols=None):
        p = self.p
        m = [[x % p for x in r] for r in rows]
        if not m:
            return [], []
        ncols = len(m[0]) if ncols is None else ncols
        piv = []
        r = 0
        for c in range(ncols):
            k = next((i for i in range(r, len(m)) if m[i][c]), None)
            if k is None:
                continue
            m[r], m[k] = m[k], m[r]
            inv = pow(m[r][c], -1, p)
            m[r] = [x * inv % p for x in m[r]]
            for i in range(len(m)):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
            piv.append(c)
            r += 1
            if r == len(m):
                break
        return m, piv

    def nullspace(self, rows, ncols):
        if not rows:
            return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
        red, piv = self.rref(rows, ncols)
        pset = set(piv)
        out = []
        for f in range(ncols):
            if f in pset:
                continue
            v = [0] * ncols
            v[f] = 1
            for i, pc in enumerate(piv):
                v[pc] = (-red[i][f]) % self.p
            out.append(v)
        return out

    def solve(self, a_rows, b):
        n = len(a_rows[0])
        red, piv = self.rref([list(r) + [bi] for r, bi in zip(a_rows, b)], n + 1)
        if n in piv:
            return None
        x = [0] * n
        for i, pc in enumerate(piv):
            x[pc] = red[i][n]
        return x

    def matvec(self, m, v):
        p = self.p
        return [sum(a * b for a, b in zip(row, v)) % p for row in m]

    def charpoly(self, m):
        """Characteristic polynomial (monic, highest degree first), Faddeev-LeVerrier."""
        p = self.p
        n = len(m)
        if n >= p:
            raise SplittingError("matrix too large for Faddeev-LeVerrier mod p")
        coeffs = [1]
        mk = [[0] * n for _ in range(n)]
        c = 1
        for k in range(1, n + 1):
            # M_k = A (M_{k-1} + c_{k-1} I)
            base = [[(mk[i][j] + (c if i == j else 0)) % p for j in range(n)] for i in range(n)]
            mk = [[sum(m[i][t] * base[t][j] for t in range(n)) % p for j in range(n)]
                  for i in range(n)]
            tr = sum(mk[i][i] for i in range(n)) % p
            c = (-tr * pow(k, -1, p)) % p
            coeffs.append(c)
        return coeffs

    def roots(self, coeffs):
        p = self.p
        out = []
        for x in range(p):
            acc = 0
            for c in coeffs:
                acc = (acc * x + c) % p
            if acc == 0:
                out.append(x)
        return out


def simultaneous_eigenvectors(field: PrimeField, mats, dim: int):
    """Split F_p^dim into common eigenvectors of the commuting matrices ``mats``.

    Returns a list of vectors (one per one-dimensional common eigenspace).
    Raises :class:`SplittingError` if the matrices are not simultaneously
    diagonalisable over F_p with one-dimensional joint eigenspaces.
    """
    p = field.p
    spaces = [[[1 if i == j else 0 for i in range(dim)] for j in range(dim)]]
    for m in mats:
        if all(len(s) == 1 for s in spaces):
            break
        new_spaces = []
        for basis in spaces:
            w = len(basis)
            if w == 1:
                new_spaces.append(basis)
                continue
            # restriction R of m to span(basis): m b_k = sum_l R[l][k] b_l
            images = [field.matvec(m, b) for b in basis]
            cols_t = [list(col) for col in zip(*basis)]  # dim x w
            r = []
            for img in images:
                sol = field.solve(cols_t, img)
                if sol is None:
                    raise SplittingError("subspace not invariant; matrices do not commute")
                r.append(sol)
            rmat = [[r[k][l] for k in range(w)] for l in range(w)]
            lambdas = field.roots(field.charpoly(rmat))
            pieces = []
            for lam in lambdas:
                shifted = [[(rmat[i][j] - (lam if i == j else 0)) % p for j in range(w)]
                           for i in range(w)]
                ns = field.nullspace(shifted, w)
                vecs = [[sum(c * basis[k][i] for k, c in enumerate(coeff)) % p for i in range(dim)]
                        for coeff in ns]
                pieces.append(vecs)
            if sum(len(x) for x in pieces) != w:
                raise SplittingError(f"no splitting over F_{p}")
            new_spaces.extend(pieces)
        spaces = new_spaces
    if any(len(s) != 1 for s in spaces):
        raise SplittingError("joint eigenspaces are not one-dimensional")
    return [s[0] for s in spaces]


def lcm_all(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v)
    return out
