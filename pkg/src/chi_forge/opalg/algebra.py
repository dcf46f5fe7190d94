"""Multimatrix algebras, automorphisms given by unitaries and block permutations,
and exact structure computations (centre, fixed points, block sizes, innerness).

Trace convention used everywhere: on (+)_i M_{n_i},
``tr(x) = sum_i (n_i / D) Tr(x_i)`` with ``D = sum_j n_j^2``.  This is the
left-regular trace divided by the dimension, so ``tr(1) = 1`` and the same
formula restricted to the identity coefficient gives the trace of a
crossed product.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from ..exact.cyclotomic import Cyclotomic, cyclo, sqrt_rational
from ..exact.matrices import CycloMatrix, nullspace, rref
from ..exact.modp import PrimeField, SplittingError, choose_prime, simultaneous_eigenvectors
from ..groups import FiniteGroup

__all__ = [
    "AlgebraError",
    "NormalizationError",
    "MultiMatrix",
    "Automorphism",
    "AlgAction",
    "FixedPoints",
    "InnerResult",
    "fixed_points_and_expectation",
    "inner_test",
    "center_basis",
    "block_sizes",
]

_ZERO = cyclo(0)
_ONE = cyclo(1)


class AlgebraError(ValueError):
    pass


class NormalizationError(ArithmeticError):
    """An exact unitary normalisation would need a non-cyclotomic square root."""


class MultiMatrix:
    """The algebra (+)_i M_{n_i}; elements are tuples of square CycloMatrix blocks."""

    def __init__(self, blocks):
        self.blocks = tuple(int(n) for n in blocks)
        if not self.blocks or any(n < 1 for n in self.blocks):
            raise AlgebraError("block sizes must be positive")
        self.dim = sum(n * n for n in self.blocks)

    def __repr__(self):
        return f"MultiMatrix({list(self.blocks)})"

    def __eq__(self, other):
        return isinstance(other, MultiMatrix) and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    # -- elements -------------------------------------------------------------
    def one(self):
        return tuple(CycloMatrix.identity(n) for n in self.blocks)

    def zero(self):
        return tuple(CycloMatrix.zeros(n, n) for n in self.blocks)

    def scalar(self, c):
        c = cyclo(c)
        return tuple(CycloMatrix.identity(n).scale(c) for n in self.blocks)

    def unit(self, block: int, i: int, j: int):
        return tuple(CycloMatrix.unit(n, i, j) if k == block else CycloMatrix.zeros(n, n)
                     for k, n in enumerate(self.blocks))

    def block_identity(self, block: int):
        return tuple(CycloMatrix.identity(n) if k == block else CycloMatrix.zeros(n, n)
                     for k, n in enumerate(self.blocks))

    def basis(self):
        return [self.unit(k, i, j) for k, n in enumerate(self.blocks)
                for i in range(n) for j in range(n)]

    def generators(self):
        """A generating set of the algebra: E_{0j} and E_{j0} in every block."""
        out = []
        for k, n in enumerate(self.blocks):
            out.append(self.unit(k, 0, 0))
            for j in range(1, n):
                out.append(self.unit(k, 0, j))
                out.append(self.unit(k, j, 0))
        return out

    def mul(self, x, y):
        return tuple(a @ b for a, b in zip(x, y))

    def add(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def sub(self, x, y):
        return tuple(a - b for a, b in zip(x, y))

    def scale(self, x, c):
        return tuple(a.scale(c) for a in x)

    def adjoint(self, x):
        return tuple(a.adjoint() for a in x)

    def is_zero(self, x) -> bool:
        return all(a.is_zero() for a in x)

    def equal(self, x, y) -> bool:
        return all(a == b for a, b in zip(x, y))

    def is_unitary(self, x) -> bool:
        return all(a.is_unitary() for a in x)

    def trace(self, x) -> Cyclotomic:
        total = _ZERO
        for n, a in zip(self.blocks, x):
            total = total + a.trace() * Fraction(n, self.dim)
        return total

    def to_vector(self, x) -> list:
        return [e for a in x for e in a.flat()]

    def from_vector(self, v):
        out = []
        pos = 0
        for n in self.blocks:
            out.append(CycloMatrix([v[pos + i * n:pos + (i + 1) * n] for i in range(n)]))
            pos += n * n
        return tuple(out)

    def check_element(self, x):
        if len(x) != len(self.blocks) or any(a.shape != (n, n) for a, n in zip(x, self.blocks)):
            raise AlgebraError("element does not match the block structure")
        return x

    def parse_element(self, data):
        """Scalar literal, a single matrix (one block) or a list of block matrices."""
        if isinstance(data, (str, int)):
            return self.scalar(cyclo(data))
        if len(self.blocks) == 1 and data and isinstance(data[0], list) and data[0] \
                and not isinstance(data[0][0], list):
            return self.check_element((CycloMatrix.parse(data),))
        if len(data) != len(self.blocks):
            raise AlgebraError(f"expected {len(self.blocks)} block matrices")
        return self.check_element(tuple(
            CycloMatrix.parse(b) if isinstance(b, list) else CycloMatrix.identity(n).scale(cyclo(b))
            for b, n in zip(data, self.blocks)))

    def element_literal(self, x):
        return [a.literal() for a in x]


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Automorphism:
    """x -> U . P(x) . U* where P(x)_{perm[i]} = x_i; unitaries indexed by target block."""

    algebra: MultiMatrix
    perm: tuple
    unitaries: tuple

    def __post_init__(self):
        blocks = self.algebra.blocks
        r = len(blocks)
        if sorted(self.perm) != list(range(r)):
            raise AlgebraError(f"block_perm {list(self.perm)} is not a permutation")
        for i in range(r):
            if blocks[self.perm[i]] != blocks[i]:
                raise AlgebraError("block permutation does not preserve block sizes")
        if len(self.unitaries) != r:
            raise AlgebraError("one unitary per block is required")
        for u, n in zip(self.unitaries, blocks):
            if u.shape != (n, n):
                raise AlgebraError("unitary has the wrong size")
            if not u.is_unitary():
                raise AlgebraError("block unitary is not unitary")

    @classmethod
    def identity(cls, algebra: MultiMatrix) -> "Automorphism":
        return cls(algebra, tuple(range(len(algebra.blocks))), algebra.one())

    @classmethod
    def inner(cls, algebra: MultiMatrix, u) -> "Automorphism":
        return cls(algebra, tuple(range(len(algebra.blocks))), tuple(u))

    def apply(self, x):
        out = [None] * len(x)
        for i, a in enumerate(x):
            t = self.perm[i]
            u = self.unitaries[t]
            out[t] = u @ a @ u.adjoint()
        return tuple(out)

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self o other."""
        r = len(self.perm)
        perm = tuple(self.perm[other.perm[i]] for i in range(r))
        moved = [None] * r
        for j in range(r):
            moved[self.perm[j]] = other.unitaries[j]
        unit = tuple(self.unitaries[t] @ moved[t] for t in range(r))
        return Automorphism(self.algebra, perm, unit)

    def same_map(self, other: "Automorphism") -> bool:
        alg = self.algebra
        return self.perm == other.perm and all(
            alg.equal(self.apply(b), other.apply(b)) for b in alg.generators())

    def is_block_trivial(self) -> bool:
        return self.perm == tuple(range(len(self.perm)))

    def to_json(self) -> dict:
        return {"block_perm": list(self.perm),
                "unitaries": [u.literal() for u in self.unitaries]}


class AlgAction:
    """A group action on a multimatrix algebra, given on generators and
    extended to every element along the enumeration tree of the group."""

    def __init__(self, group: FiniteGroup, algebra: MultiMatrix, generator_maps, *, verify=True):
        self.group = group
        self.algebra = algebra
        gens = list(generator_maps)
        if len(gens) != len(group.generators):
            raise AlgebraError(f"{len(gens)} automorphisms for {len(group.generators)} generators")
        self.generator_maps = tuple(gens)
        maps = [Automorphism.identity(algebra)]
        for i in range(1, group.order):
            s, j = group.parent[i]
            maps.append(gens[s].compose(maps[j]))
        self.maps = maps
        if verify:
            self.verify()

    def __call__(self, g: int, x):
        return self.maps[g].apply(x)

    def verify(self):
        g = self.group
        alg = self.algebra
        gens = alg.generators()
        images = [[self.maps[a].apply(b) for b in gens] for a in range(g.order)]
        for a in range(g.order):
            for b in range(g.order):
                ab = g.mul(a, b)
                for k, x in enumerate(gens):
                    if not alg.equal(self.maps[a].apply(images[b][k]), images[ab][k]):
                        raise AlgebraError(f"psi_{a} psi_{b} != psi_{ab}: not a group action")
        for m in self.maps:
            for x in gens:
                if alg.trace(m.apply(x)) != alg.trace(x):
                    raise AlgebraError("automorphism does not preserve the trace")

    def block_orbits(self) -> list[list[int]]:
        r = len(self.algebra.blocks)
        seen = [False] * r
        out = []
        for i in range(r):
            if seen[i]:
                continue
            orb = sorted({m.perm[i] for m in self.maps})
            for j in orb:
                seen[j] = True
            out.append(orb)
        return out

    def stabilizer(self, block: int) -> list[int]:
        return [g for g, m in enumerate(self.maps) if m.perm[block] == block]

    def to_json(self) -> dict:
        return {"group": self.group.to_json(), "blocks": list(self.algebra.blocks),
                "generators": [m.to_json() for m in self.generator_maps]}

    @classmethod
    def from_json(cls, data, group: FiniteGroup) -> "AlgAction":
        alg = MultiMatrix(data["blocks"])
        maps = []
        for gen in data["generators"]:
            perm = tuple(int(x) for x in gen.get("block_perm", range(len(alg.blocks))))
            unit = gen.get("unitaries")
            if unit is None:
                unit = [CycloMatrix.identity(n) for n in alg.blocks]
            else:
                unit = [CycloMatrix.parse(u) for u in unit]
            maps.append(Automorphism(alg, perm, tuple(unit)))
        return cls(group, alg, maps)


def amplify(action: AlgAction, d: int) -> AlgAction:
    """The action id (x) psi on B(C^d) (x) M (block n_i becomes d n_i)."""
    alg = MultiMatrix([d * n for n in action.algebra.blocks])
    eye = CycloMatrix.identity(d)
    maps = [Automorphism(alg, m.perm, tuple(eye.kron(u) for u in m.unitaries))
            for m in action.generator_maps]
    return AlgAction(action.group, alg, maps)


# ---------------------------------------------------------------------------
# exact linear structure

def _span_coordinates(vectors):
    """RREF basis of the span plus pivots, for reading off coordinates."""
    red, piv = rref([list(v) for v in vectors])
    return red[:len(piv)], piv


def center_basis(alg) -> list:
    """Basis (as elements) of the centre of an algebra with ``generators()``."""
    dim = alg.dim
    basis = alg.basis()
    rows = []
    for a in alg.generators():
        cols = [alg.to_vector(alg.sub(alg.mul(b, a), alg.mul(a, b))) for b in basis]
        for r in range(dim):
            row = [cols[c][r] for c in range(dim)]
            if any(row):
                rows.append(row)
    ns = nullspace(rows, dim) if rows else [[_ONE if i == j else _ZERO for i in range(dim)]
                                            for j in range(dim)]
    return [alg.from_vector(v) for v in ns]


def block_sizes(alg, basis=None) -> list[int]:
    """Matrix-block sizes of the finite-dimensional C*-algebra spanned by ``basis``.

    The centre of the algebra is computed exactly; its minimal idempotents
    are located modulo a prime that splits all cyclotomic data, and the
    size of each block is read off as the square root of the rank of
    multiplication by that idempotent.  The result is checked against the
    dimension.
    """
    if basis is None:
        basis = alg.basis()
    vecs = [alg.to_vector(b) for b in basis]
    red, piv = _span_coordinates(vecs)
    n = len(red)
    elems = [alg.from_vector(v) for v in red]

    def coords(x):
        v = alg.to_vector(x)
        return [v[p] for p in piv]

    # centre of the span
    rows = []
    for s in elems:
        cols = [coords(alg.sub(alg.mul(b, s), alg.mul(s, b))) for b in elems]
        for r in range(n):
            row = [cols[c][r] for c in range(n)]
            if any(row):
                rows.append(row)
    zc = nullspace(rows, n) if rows else [[_ONE if i == j else _ZERO for i in range(n)]
                                          for j in range(n)]
    c = len(zc)
    if c == 1:
        root = math.isqrt(n)
        if root * root != n:
            raise AlgebraError("one-dimensional centre but dimension is not a square")
        return [root]
    zred, zpiv = rref([list(v) for v in zc])
    zred = zred[:c]
    zel = [_combine(alg, elems, v) for v in zred]
    left = [[coords(alg.mul(z, b)) for b in elems] for z in zel]  # left[k][col][row]
    struct = []
    for a in range(c):
        row = []
        for b in range(c):
            v = coords(alg.mul(zel[a], zel[b]))
            row.append([v[p] for p in zpiv])
        struct.append(row)  # struct[a][b][k]
    order = 1
    for mat in left:
        for col in mat:
            for x in col:
                order = math.lcm(order, x.order)
    for a in struct:
        for b in a:
            for x in b:
                order = math.lcm(order, x.order)
    p = choose_prime(order, max(n, 2 * c, 50))
    while True:
        try:
            return _split(c, n, struct, left, PrimeField(p, order))
        except (SplittingError, ZeroDivisionError):
            p = choose_prime(order, p)


def _combine(alg, elems, coeffs):
    out = None
    for e, c in zip(elems, coeffs):
        if not c:
            continue
        term = alg.scale(e, c)
        out = term if out is None else alg.add(out, term)
    return out if out is not None else alg.scale(elems[0], 0)


def _split(c, n, struct, left, field):
    p = field.p
    red = lambda x: field.cyclo(x)  # noqa: E731
    mats = [[[red(struct[a][b][k]) for b in range(c)] for k in range(c)] for a in range(c)]
    vecs = simultaneous_eigenvectors(field, mats, c)
    lm = [[[red(x) for x in col] for col in mat] for mat in left]
    sizes = []
    for v in vecs:
        sq = [sum(v[a] * v[b] * mats[a][k][b] for a in range(c) for b in range(c)) % p
              for k in range(c)]
        k0 = next(k for k in range(c) if v[k])
        kappa = sq[k0] * pow(v[k0], -1, p) % p
        if kappa == 0:
            raise SplittingError("eigenvector is nilpotent")
        e = [x * pow(kappa, -1, p) % p for x in v]
        mat = [[sum(e[k] * lm[k][col][row] for k in range(c)) % p for col in range(n)]
               for row in range(n)]
        rk = len(field.rref(mat, n)[1])
        root = math.isqrt(rk)
        if root * root != rk:
            raise SplittingError("block dimension is not a square")
        sizes.append(root)
    if sum(s * s for s in sizes) != n:
        raise SplittingError("block sizes do not account for the dimension")
    return sorted(sizes)


# ---------------------------------------------------------------------------

@dataclass
class FixedPoints:
    algebra: MultiMatrix
    action: AlgAction
    basis: list

    @property
    def dim(self) -> int:
        return len(self.basis)

    def expectation(self, x):
        alg = self.algebra
        total = alg.zero()
        for g in range(self.action.group.order):
            total = alg.add(total, self.action(g, x))
        return alg.scale(total, Fraction(1, self.action.group.order))

    def contains(self, x) -> bool:
        alg = self.algebra
        return all(alg.equal(m.apply(x), x) for m in self.action.generator_maps)

    @cached_property
    def blocks(self) -> list[int]:
        return block_sizes(self.algebra, self.basis)


def fixed_points_and_expectation(action: AlgAction) -> FixedPoints:
    alg = action.algebra
    basis = alg.basis()
    dim = alg.dim
    rows = []
    for m in action.generator_maps:
        cols = [alg.to_vector(alg.sub(m.apply(b), b)) for b in basis]
        for r in range(dim):
            row = [cols[c][r] for c in range(dim)]
            if any(row):
                rows.append(row)
    ns = nullspace(rows, dim) if rows else [[_ONE if i == j else _ZERO for i in range(dim)]
                                            for j in range(dim)]
    return FixedPoints(alg, action, [alg.from_vector(v) for v in ns])


# ---------------------------------------------------------------------------
# innerness

@dataclass
class InnerResult:
    unitary: tuple | None
    intertwiner_dim: int

    @property
    def inner(self) -> bool:
        return self.unitary is not None


def intertwiner_space(alg: MultiMatrix, alpha) -> list:
    """Basis of {x : x m = alpha(m) x for all m}."""
    dim = alg.dim
    basis = alg.basis()
    rows = []
    for m in alg.generators():
        am = alpha(m)
        cols = [alg.to_vector(alg.sub(alg.mul(b, m), alg.mul(am, b))) for b in basis]
        for r in range(dim):
            row = [cols[c][r] for c in range(dim)]
            if any(row):
                rows.append(row)
    ns = nullspace(rows, dim)
    return [alg.from_vector(v) for v in ns]


def normalize_unitary(alg: MultiMatrix, x, anchor: str = "first"):
    """Rescale each block of x (with x_i x_i* scalar) to a unitary whose first
    (or last) nonzero entry is positive real."""
    out = []
    for a in x:
        s = (a @ a.adjoint())
        n = a.shape[0]
        scal = s[0, 0]
        if not (s == CycloMatrix.identity(n).scale(scal)):
            raise NormalizationError("x x* is not scalar on a block")
        if not scal.is_rational() or scal.to_fraction() <= 0:
            raise NormalizationError("x x* is not a positive rational scalar")
        entries = a.flat()
        nz = [e for e in entries if e]
        lead = nz[0] if anchor == "first" else nz[-1]
        mod2 = lead * lead.conjugate()
        if not mod2.is_rational():
            raise NormalizationError("modulus of the anchor entry is not a rational square root")
        modulus = sqrt_rational(mod2.to_fraction())
        factor = lead.conjugate() / (modulus * sqrt_rational(scal.to_fraction()))
        out.append(a.scale(factor))
    u = tuple(out)
    if not alg.is_unitary(u):
        raise NormalizationError("normalised element is not unitary")
    return u


def inner_test(alg: MultiMatrix, alpha, anchor: str = "first") -> InnerResult:
    """Return an implementing unitary for the automorphism ``alpha`` or OUTER.

    ``alpha`` is an :class:`Automorphism` or any callable on elements.
    """
    apply = alpha.apply if isinstance(alpha, Automorphism) else alpha
    space = intertwiner_space(alg, apply)
    if not space:
        return InnerResult(None, 0)
    # an inner automorphism fixes every central projection
    for k in range(len(alg.blocks)):
        e = alg.block_identity(k)
        if not alg.equal(apply(e), e):
            return InnerResult(None, len(space))
    total = space[0]
    for x in space[1:]:
        total = alg.add(total, x)
    if any(a.rank() < a.shape[0] for a in total):
        return InnerResult(None, len(space))
    u = normalize_unitary(alg, total, anchor)
    for m in alg.generators():
        if not alg.equal(alg.mul(alg.mul(u, m), alg.adjoint(u)), apply(m)):
            raise AssertionError("implementing unitary failed verification")
    return InnerResult(u, len(space))
