"""Dense exact matrices over Q and cyclotomic fields.

Entries are either :class:`fractions.Fraction` or :class:`Cyclotomic`; the
elimination routines only need ring operations, division and a zero test.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .cyclotomic import Cyclotomic, cyclo

__all__ = [
    "CycloMatrix",
    "rref",
    "nullspace",
    "rank",
    "solve_linear",
    "mat_mul",
    "mat_inverse",
]

_ONE = cyclo(1)
_ZERO = cyclo(0)


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form.  Returns ``(matrix, pivot_columns)``."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c] if not isinstance(m[r][c], Cyclotomic) else m[r][c].inverse()
        row = [x * inv if x else x for x in m[r]]
        m[r] = row
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                mi = m[i]
                m[i] = [a - f * b if b else a for a, b in zip(mi, row)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows, ncols: int | None = None, zero=_ZERO, one=_ONE) -> list[list]:
    """Basis of ``{x : rows @ x = 0}`` (one vector per free column)."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[one if i == j else zero for i in range(ncols)] for j in range(ncols)]
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for i, pc in enumerate(piv):
            if red[i][f]:
                v[pc] = -red[i][f]
        basis.append(v)
    return basis


def solve_linear(a_rows, b, zero=_ZERO):
    """One solution of ``A x = b`` or ``None`` if inconsistent."""
    n = len(a_rows[0]) if a_rows else 0
    aug = [list(r) + [bi] for r, bi in zip(a_rows, b)]
    red, piv = rref(aug, n + 1)
    if n in piv:
        return None
    x = [zero] * n
    for i, pc in enumerate(piv):
        x[pc] = red[i][n]
    return x


def mat_mul(a, b):
    nk = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [_ZERO] * cols
        for k in range(nk):
            x = row[k]
            if not x:
                continue
            bk = b[k]
            for j in range(cols):
                if bk[j]:
                    acc[j] = acc[j] + x * bk[j]
        out.append(acc)
    return out


def mat_inverse(a):
    n = len(a)
    aug = [list(row) + [_ONE if i == j else _ZERO for j in range(n)] for i, row in enumerate(a)]
    red, piv = rref(aug, n)
    if piv != list(range(n)):
        return None
    return [row[n:] for row in red]


class CycloMatrix:
    """Immutable rectangular matrix with cyclotomic entries."""

    __slots__ = ("rows", "shape")

    def __init__(self, entries):
        rows = tuple(tuple(cyclo(x) for x in r) for r in entries)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        self.rows = rows
        self.shape = (len(rows), len(rows[0]) if rows else 0)

    @classmethod
    def identity(cls, n: int) -> "CycloMatrix":
        return cls([[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int) -> "CycloMatrix":
        return cls([[_ZERO] * c for _ in range(r)])

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "CycloMatrix":
        return cls([[_ONE if (a, b) == (i, j) else _ZERO for b in range(n)] for a in range(n)])

    @classmethod
    def parse(cls, data) -> "CycloMatrix":
        return cls([[cyclo(x) for x in row] for row in data])

    def literal(self):
        return [[x.literal() for x in r] for r in self.rows]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "CycloMatrix") -> "CycloMatrix":
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return CycloMatrix(mat_mul(self.rows, other.rows))

    def __add__(self, other):
        return CycloMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return CycloMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return CycloMatrix([[-a for a in r] for r in self.rows])

    def scale(self, c) -> "CycloMatrix":
        c = cyclo(c)
        return CycloMatrix([[c * a for a in r] for r in self.rows])

    def adjoint(self) -> "CycloMatrix":
        return CycloMatrix([[self.rows[i][j].conjugate() for i in range(self.shape[0])]
                            for j in range(self.shape[1])])

    def transpose(self) -> "CycloMatrix":
        return CycloMatrix([[self.rows[i][j] for i in range(self.shape[0])]
                            for j in range(self.shape[1])])

    def trace(self) -> Cyclotomic:
        t = _ZERO
        for i in range(min(self.shape)):
            t = t + self.rows[i][i]
        return t

    def kron(self, other: "CycloMatrix") -> "CycloMatrix":
        r1, c1 = self.shape
        r2, c2 = other.shape
        return CycloMatrix([[self.rows[i // r2][j // c2] * other.rows[i % r2][j % c2]
                             for j in range(c1 * c2)] for i in range(r1 * r2)])

    def is_zero(self) -> bool:
        return all(not x for r in self.rows for x in r)

    def is_identity(self) -> bool:
        n, m = self.shape
        return n == m and all((x == 1) if i == j else (not x)
                              for i, r in enumerate(self.rows) for j, x in enumerate(r))

    def is_unitary(self) -> bool:
        return self.shape[0] == self.shape[1] and (self @ self.adjoint()).is_identity()

    def rank(self) -> int:
        return rank(self.rows)

    def inverse(self) -> "CycloMatrix | None":
        inv = mat_inverse(self.rows)
        return None if inv is None else CycloMatrix(inv)

    def flat(self) -> list:
        return [x for r in self.rows for x in r]

    def __eq__(self, other):
        return isinstance(other, CycloMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"CycloMatrix({self.literal()})"


def as_fraction_matrix(m) -> list[list[Fraction]]:
    return [[Fraction(x) for x in r] for r in m]
