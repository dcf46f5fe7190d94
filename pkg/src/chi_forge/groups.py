"""Finite permutation groups, quotients, duals and U(1)-valued 2-cochains."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product

import numpy as np

from .exact.cyclotomic import mod1
from .exact.smith import smith_normal_form, solve_affine_mod

__all__ = [
    "GroupError",
    "FiniteGroup",
    "Subgroup",
    "DualGroup",
    "TwoCochain",
    "Coboundary",
    "enumerate_group",
    "conjugacy_classes",
    "quotient",
    "direct_product",
    "abelian_structure",
    "abelianization_and_dual",
    "two_cocycle_verify",
    "two_coboundary_test",
    "cyclic_group",
    "abelian_group",
]

DEFAULT_CAP = 10_000
_TABLE_LIMIT = 2048


class GroupError(ValueError):
    pass


def _compose(g, h):
    # (g h)(i) = g(h(i))
    return tuple(g[i] for i in h)


class FiniteGroup:
    """A permutation group with its elements enumerated.

    Elements are numbered in breadth-first order over generator words,
    the identity first.  ``mul(i, j)`` multiplies indices with the
    convention ``(g h)(x) = g(h(x))``.
    """

    def __init__(self, degree: int, generators, *, name: str | None = None, cap: int = DEFAULT_CAP):
        gens = []
        for g in generators:
            g = tuple(int(x) for x in g)
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise GroupError(f"generator {list(g)} is not a permutation of 0..{degree - 1}")
            gens.append(g)
        self.degree = degree
        self.generators = tuple(gens)
        self.name = name
        ident = tuple(range(degree))
        elements = [ident]
        index = {ident: 0}
        parent = [None]  # element i = generators[s] * elements[j]
        queue = deque([0])
        while queue:
            j = queue.popleft()
            x = elements[j]
            for s, g in enumerate(gens):
                y = _compose(g, x)
                if y not in index:
                    if len(elements) >= cap:
                        raise GroupError(f"group order exceeds cap {cap}")
                    index[y] = len(elements)
                    elements.append(y)
                    parent.append((s, j))
                    queue.append(index[y])
        self.elements = elements
        self.index = index
        self.parent = parent
        self.order = len(elements)
        self.generator_indices = tuple(index[g] for g in gens)
        self._table = None
        if self.order <= _TABLE_LIMIT:
            n = self.order
            tab = np.empty((n, n), dtype=np.int64)
            for i, g in enumerate(elements):
                for j, h in enumerate(elements):
                    tab[i, j] = index[_compose(g, h)]
            self._table = tab
        self._inverse = [index[self._perm_inverse(g)] for g in elements]

    @staticmethod
    def _perm_inverse(g):
        inv = [0] * len(g)
        for i, x in enumerate(g):
            inv[x] = i
        return tuple(inv)

    def __len__(self):
        return self.order

    def __repr__(self):
        label = self.name or f"degree {self.degree}"
        return f"FiniteGroup({label}, order={self.order})"

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            n = self.order
            self._table = np.array([[self.mul(i, j) for j in range(n)] for i in range(n)],
                                   dtype=np.int64)
        return self._table

    def mul(self, i: int, j: int) -> int:
        if self._table is not None:
            return int(self._table[i, j])
        return self.index[_compose(self.elements[i], self.elements[j])]

    def inv(self, i: int) -> int:
        return self._inverse[i]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1"""
        return self.mul(self.mul(g, x), self.inv(g))

    def power(self, i: int, k: int) -> int:
        r = 0
        base = i
        if k < 0:
            base, k = self.inv(i), -k
        while k:
            if k & 1:
                r = self.mul(r, base)
            base = self.mul(base, base)
            k >>= 1
        return r

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != 0:
            x = self.mul(x, i)
            k += 1
        return k

    @cached_property
    def exponent(self) -> int:
        e = 1
        for i in range(self.order):
            e = math.lcm(e, self.element_order(i))
        return e

    def is_abelian(self) -> bool:
        gi = self.generator_indices
        return all(self.mul(a, b) == self.mul(b, a) for a in gi for b in gi)

    def word_to_element(self, word) -> int:
        x = 0
        for s in word:
            x = self.mul(self.generator_indices[s], x)
        return x

    def closure(self, gens) -> frozenset:
        """Subgroup generated by the given element indices."""
        members = {0}
        frontier = [0]
        gens = [g for g in gens if g != 0]
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = self.mul(g, x)
                    if y not in members:
                        members.add(y)
                        new.append(y)
            frontier = new
        return frozenset(members)

    def subgroup(self, gens) -> "Subgroup":
        return Subgroup(self, self.closure(gens))

    def center(self) -> "Subgroup":
        gi = self.generator_indices
        return Subgroup(self, frozenset(x for x in range(self.order)
                                        if all(self.mul(x, g) == self.mul(g, x) for g in gi)))

    def normal_closure(self, gens) -> "Subgroup":
        members = set(self.closure(gens))
        changed = True
        while changed:
            changed = False
            extra = {self.conj(g, x) for g in self.generator_indices for x in members} - members
            if extra:
                members = set(self.closure(list(members) + list(extra)))
                changed = True
        return Subgroup(self, frozenset(members))

    def derived_subgroup(self) -> "Subgroup":
        gi = self.generator_indices
        comms = []
        for a in gi:
            for b in gi:
                comms.append(self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b))))
        return self.normal_closure(comms)

    def to_json(self) -> dict:
        out = {"degree": self.degree, "generators": [list(g) for g in self.generators]}
        if self.name:
            out["name"] = self.name
        return out


def enumerate_group(degree: int, generators, cap: int = DEFAULT_CAP, name=None) -> FiniteGroup:
    return FiniteGroup(degree, generators, name=name, cap=cap)


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    members: frozenset

    def __post_init__(self):
        g = self.parent
        if 0 not in self.members:
            raise GroupError("subgroup must contain the identity")
        for a in self.members:
            if g.inv(a) not in self.members:
                raise GroupError("subset not closed under inverses")
            for b in self.members:
                if g.mul(a, b) not in self.members:
                    raise GroupError("subset not closed under products")

    def __len__(self):
        return len(self.members)

    def __contains__(self, i):
        return i in self.members

    def sorted_members(self) -> list[int]:
        return sorted(self.members)

    def is_normal(self) -> bool:
        g = self.parent
        return all(g.conj(x, n) in self.members for x in range(g.order) for n in self.members)

    def as_group(self, name=None) -> tuple[FiniteGroup, list[int]]:
        """The subgroup as a standalone permutation group plus the embedding."""
        g = self.parent
        gens = []
        span = {0}
        for x in self.sorted_members():
            if x not in span:
                gens.append(x)
                span = set(g.closure(gens))
        if not gens:
            gens = []
        h = FiniteGroup(g.degree, [g.elements[x] for x in gens], name=name)
        embed = [g.index[e] for e in h.elements]
        return h, embed


def conjugacy_classes(g: FiniteGroup) -> list[list[int]]:
    """Classes ordered by their smallest element index; identity class first."""
    seen = [False] * g.order
    classes = []
    for x in range(g.order):
        if seen[x]:
            continue
        orbit = {x}
        frontier = [x]
        while frontier:
            new = []
            for y in frontier:
                for s in g.generator_indices:
                    z = g.conj(s, y)
                    if z not in orbit:
                        orbit.add(z)
                        new.append(z)
            frontier = new
        for y in orbit:
            seen[y] = True
        classes.append(sorted(orbit))
    return classes


def quotient(g: FiniteGroup, n: Subgroup, name=None):
    """Return ``(G/N, projection)`` where projection[i] is the image of element i."""
    if n.parent is not g:
        raise GroupError("subgroup belongs to a different group")
    if not n.is_normal():
        raise GroupError("subgroup is not normal")
    coset_of = [-1] * g.order
    reps = []
    for x in range(g.order):
        if coset_of[x] < 0:
            k = len(reps)
            reps.append(x)
            for m in n.members:
                coset_of[g.mul(x, m)] = k
    ncos = len(reps)

    def action(x):
        return tuple(coset_of[g.mul(x, r)] for r in reps)

    gens = [action(s) for s in g.generator_indices]
    if not gens:
        gens = [tuple(range(ncos))]
    q = FiniteGroup(ncos, gens, name=name)
    proj = [q.index[action(x)] for x in range(g.order)]
    return q, proj


def direct_product(g1: FiniteGroup, g2: FiniteGroup, name=None) -> FiniteGroup:
    d1, d2 = g1.degree, g2.degree
    gens = []
    for s in g1.generators:
        gens.append(tuple(s) + tuple(d1 + i for i in range(d2)))
    for s in g2.generators:
        gens.append(tuple(range(d1)) + tuple(d1 + x for x in s))
    if not gens:
        gens = [tuple(range(d1 + d2))]
    return FiniteGroup(d1 + d2, gens, name=name or _prod_name(g1, g2),
                       cap=max(DEFAULT_CAP, g1.order * g2.order))


def _prod_name(g1, g2):
    if g1.name and g2.name:
        return f"{g1.name}x{g2.name}"
    return None


def split_product_element(gp: FiniteGroup, g1: FiniteGroup, g2: FiniteGroup, i: int):
    perm = gp.elements[i]
    d1 = g1.degree
    a = perm[:d1]
    b = tuple(x - d1 for x in perm[d1:])
    return g1.index[a], g2.index[b]


def cyclic_group(n: int, name=None) -> FiniteGroup:
    return FiniteGroup(n, [tuple((i + 1) % n for i in range(n))], name=name or f"C{n}")


def abelian_group(factors, name=None) -> FiniteGroup:
    """Regular permutation representation of (+)_i Z/d_i (identity if empty)."""
    factors = [int(d) for d in factors if int(d) > 1]
    n = math.prod(factors) if factors else 1
    coords = list(product(*[range(d) for d in factors])) if factors else [()]
    index = {c: i for i, c in enumerate(coords)}
    gens = []
    for k, d in enumerate(factors):
        perm = []
        for c in coords:
            c2 = list(c)
            c2[k] = (c2[k] + 1) % d
            perm.append(index[tuple(c2)])
        gens.append(tuple(perm))
    if not gens:
        gens = [tuple(range(n))]
    return FiniteGroup(n, gens, name=name)


# ---------------------------------------------------------------------------
# finite abelian groups from generators

@dataclass
class AbelianStructure:
    """Invariant factors plus a coordinate map into (+)_i Z/d_i."""

    factors: list[int]
    coords: dict
    transform: list[list[int]]

    @property
    def order(self) -> int:
        return math.prod(self.factors) if self.factors else 1


def abelian_structure(identity, generators, op) -> AbelianStructure:
    """Decompose the abelian group generated by ``generators`` under ``op``.

    Breadth-first search over the Cayley graph collects the relation lattice
    of Z^k -> A; its Smith form gives the invariant factors and a change of
    basis ``v -> v V`` sending every element to canonical coordinates.
    """
    k = len(generators)
    vec = {identity: (0,) * k}
    order = [identity]
    rels = []
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        vx = vec[x]
        for i, g in enumerate(generators):
            y = op(x, g)
            vy = tuple(a + (1 if j == i else 0) for j, a in enumerate(vx))
            if y in vec:
                diff = [a - b for a, b in zip(vy, vec[y])]
                if any(diff):
                    rels.append(diff)
            else:
                vec[y] = vy
                order.append(y)
                queue.append(y)
    if k == 0:
        return AbelianStructure([], {identity: ()}, [])
    rels = _hermite_reduce(rels, k)
    if not rels:
        raise GroupError("generators do not generate a finite group")
    d, u, v = smith_normal_form(rels)
    diag = [d[i][i] if i < len(d) else 0 for i in range(k)]
    if any(x == 0 for x in diag):
        raise GroupError("relation lattice does not have full rank")
    keep = [i for i, x in enumerate(diag) if x != 1]
    factors = [diag[i] for i in keep]
    coords = {}
    for x, vx in vec.items():
        w = [sum(vx[r] * v[r][c] for r in range(k)) for c in range(k)]
        coords[x] = tuple(w[i] % diag[i] for i in keep)
    return AbelianStructure(factors, coords, [[v[r][c] for c in keep] for r in range(k)])


def _hermite_reduce(rels, k):
    """Row-reduce an integer relation list to at most k rows (same lattice)."""
    rows = [list(r) for r in rels if any(r)]
    out = []
    col = 0
    while rows and col < k:
        rows = [r for r in rows if any(r)]
        nz = [r for r in rows if r[col]]
        if not nz:
            col += 1
            continue
        while len([r for r in rows if r[col]]) > 1:
            nz = sorted([r for r in rows if r[col]], key=lambda r: abs(r[col]))
            piv = nz[0]
            for r in nz[1:]:
                q = r[col] // piv[col]
                for j in range(k):
                    r[j] -= q * piv[j]
        piv = next(r for r in rows if r[col])
        out.append(piv)
        rows = [r for r in rows if r is not piv]
        col += 1
    return out


@dataclass
class DualGroup:
    """Characters chi(g) = exp(2 pi i t(g)) of a finite group."""

    group: FiniteGroup
    invariant_factors: list[int]
    coordinates: list[tuple]  # element index -> coordinates in G^ab

    def __len__(self):
        return math.prod(self.invariant_factors) if self.invariant_factors else 1

    def labels(self) -> list[tuple]:
        return list(product(*[range(d) for d in self.invariant_factors]))

    def value(self, label, g: int) -> Fraction:
        w = self.coordinates[g]
        return mod1(sum(Fraction(a * x, d) for a, x, d in zip(label, w, self.invariant_factors)))

    def character(self, label) -> tuple[Fraction, ...]:
        return tuple(self.value(label, g) for g in range(self.group.order))

    def characters(self) -> list[tuple[Fraction, ...]]:
        return [self.character(a) for a in self.labels()]

    def is_trivial(self) -> bool:
        return not self.invariant_factors


def abelianization_and_dual(g: FiniteGroup):
    """Return ``(invariant factors of G/[G,G], DualGroup)``."""
    d = g.derived_subgroup()
    coset_key = {}
    for x in range(g.order):
        if x not in coset_key:
            key = min(g.mul(x, m) for m in d.members)
            for m in d.members:
                coset_key[g.mul(x, m)] = key

    def op(a, b):
        return coset_key[g.mul(a, b)]

    gens = [coset_key[s] for s in g.generator_indices]
    st = abelian_structure(coset_key[0], gens, op)
    coords = [st.coords[coset_key[x]] for x in range(g.order)]
    return list(st.factors), DualGroup(g, list(st.factors), coords)


# ---------------------------------------------------------------------------
# 2-cochains with values in Z/m  (c(g,h) stands for exp(2 pi i c(g,h)/m))

@dataclass
class TwoCochain:
    modulus: int
    table: np.ndarray  # |G| x |G| integers mod modulus

    def __post_init__(self):
        self.table = np.asarray(self.table, dtype=np.int64) % self.modulus

    def is_normalized(self) -> bool:
        return not self.table[0, :].any() and not self.table[:, 0].any()

    @classmethod
    def zero(cls, n: int, modulus: int = 2) -> "TwoCochain":
        return cls(modulus, np.zeros((n, n), dtype=np.int64))

    @classmethod
    def from_phases(cls, phases) -> "TwoCochain":
        """Build from a table of Q/Z values."""
        ph = [[mod1(x) for x in row] for row in phases]
        m = 1
        for row in ph:
            for x in row:
                m = math.lcm(m, x.denominator)
        m = max(m, 2)
        return cls(m, np.array([[int(x * m) for x in row] for row in ph], dtype=np.int64))

    def with_modulus(self, modulus: int) -> "TwoCochain":
        if modulus % self.modulus:
            raise ValueError("new modulus must be a multiple of the old one")
        return TwoCochain(modulus, self.table * (modulus // self.modulus))

    def antisymmetrization(self) -> np.ndarray:
        return (self.table - self.table.T) % self.modulus


@dataclass
class Coboundary:
    """rho with c(g,h) = rho(g) + rho(h) - rho(gh), values mod ``modulus``."""

    modulus: int
    values: list[int] = field(default_factory=list)


def two_cocycle_verify(g: FiniteGroup, c: TwoCochain) -> bool:
    t = g.table
    n = g.order
    if c.table.shape != (n, n):
        raise ValueError("cochain table has the wrong shape")
    m = c.modulus
    tab = c.table
    idx = np.arange(n)
    lhs = tab[:, :, None] + tab[t[:, :], :]            # c(g,h) + c(gh,k)
    rhs = tab[None, :, :] + tab[idx[:, None, None], t[None, :, :]]  # c(h,k) + c(g,hk)
    return bool(((lhs - rhs) % m == 0).all())


def coboundary_of(g: FiniteGroup, rho, modulus: int) -> TwoCochain:
    rho = np.asarray(rho, dtype=np.int64)
    t = g.table
    return TwoCochain(modulus, rho[:, None] + rho[None, :] - rho[t])


def two_coboundary_test(g: FiniteGroup, c: TwoCochain, coefficients: str = "U1"):
    """Decide whether the cocycle ``c`` is a coboundary.

    With ``coefficients="U1"`` the question is asked in H^2(G, U(1)): the
    cochain is embedded into Z/(m * exp G), which is large enough for any
    U(1)-valued trivialisation.  ``coefficients="Zm"`` asks in H^2(G, Z/m).
    Returns a :class:`Coboundary` or ``None``.
    """
    if not two_cocycle_verify(g, c):
        raise ValueError("input is not a 2-cocycle")
    if coefficients == "U1":
        big = c.modulus * g.exponent
        work = c.with_modulus(big)
    elif coefficients == "Zm":
        work = c
    else:
        raise ValueError(f"unknown coefficient group {coefficients!r}")
    m = work.modulus
    n = g.order
    t = g.table
    rows = []
    rhs = []
    for a in range(n):
        for b in range(n):
            row = [0] * n
            row[a] += 1
            row[b] += 1
            row[int(t[a, b])] -= 1
            rows.append(row)
            rhs.append(int(work.table[a, b]))
    # rho(e) stays free: c(e,e) = rho(e) for a non-normalised cochain
    a_rows, b_vals = _dedupe_rows(rows, rhs)
    sol = solve_affine_mod(a_rows, b_vals, m)
    if sol is None:
        return None
    rho = list(sol)
    if not np.array_equal(coboundary_of(g, rho, m).table, work.table):
        raise ArithmeticError("coboundary solver returned an invalid trivialisation")
    return Coboundary(m, rho)


def _dedupe_rows(rows, rhs):
    seen = {}
    out_r, out_b = [], []
    for r, b in zip(rows, rhs):
        key = tuple(r)
        if key in seen:
            if seen[key] != b:
                # inconsistent duplicate equations; keep both so the solver reports it
                out_r.append(r)
                out_b.append(b)
            continue
        seen[key] = b
        out_r.append(r)
        out_b.append(b)
    return out_r, out_b
