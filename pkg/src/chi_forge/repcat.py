"""Representation categories of finite groups at the level of characters.

Character tables are computed with the Dixon-Schneider method: the class
sums span the centre of the group algebra, the irreducible characters are
its simultaneous eigenvectors, and those are found over a prime field that
contains the relevant roots of unity before being lifted back to exact
cyclotomic values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exact.cyclotomic import Cyclotomic, cyclo, zeta
from .exact.matrices import rank as exact_rank
from .exact.modp import PrimeField, SplittingError, choose_prime, simultaneous_eigenvectors
from .groups import (
    FiniteGroup,
    GroupError,
    Subgroup,
    TwoCochain,
    abelianization_and_dual,
    conjugacy_classes,
    direct_product,
    quotient,
    split_product_element,
    two_coboundary_test,
)

__all__ = [
    "TableError",
    "CharacterTable",
    "FusionRing",
    "BraidedFusionData",
    "ModularityReport",
    "GroupSESReport",
    "character_table",
    "fusion_coefficients",
    "restrict_quotient",
    "deligne_product",
    "modularity_test",
    "fusion_ring_isomorphic",
    "group_ses_check",
]

MAX_TABLE_ORDER = 1000
MAX_ISO_RANK = 12

_ZERO = cyclo(0)
_ONE = cyclo(1)


class TableError(ArithmeticError):
    """A computed table failed its exact verification."""


@dataclass
class CharacterTable:
    group: FiniteGroup
    classes: list[list[int]]
    characters: list[list[Cyclotomic]]
    class_of: list[int]
    factors: tuple = ()

    @property
    def rank(self) -> int:
        return len(self.characters)

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    @property
    def representatives(self) -> list[int]:
        return [c[0] for c in self.classes]

    @property
    def dims(self) -> list[int]:
        return [int(row[0].to_fraction()) for row in self.characters]

    def value(self, irrep: int, element: int) -> Cyclotomic:
        return self.characters[irrep][self.class_of[element]]

    def inner_product(self, a, b) -> Fraction:
        """<a, b> = (1/|G|) sum_g a(g) conj(b(g)) for class functions a, b."""
        total = _ZERO
        for size, x, y in zip(self.sizes, a, b):
            if x and y:
                total = total + x * y.conjugate() * size
        if not total.is_rational():
            raise TableError("inner product is not rational")
        return total.to_fraction() / self.group.order

    def verify(self) -> None:
        """Exact row and column orthogonality plus the degree sum."""
        k = len(self.classes)
        if len(self.characters) != k:
            raise TableError(f"{len(self.characters)} characters for {k} classes")
        for i in range(k):
            for j in range(i, k):
                ip = self.inner_product(self.characters[i], self.characters[j])
                if ip != (1 if i == j else 0):
                    raise TableError(f"rows {i},{j} not orthonormal: {ip}")
        order = self.group.order
        for a in range(k):
            for b in range(a, k):
                total = _ZERO
                for row in self.characters:
                    if row[a] and row[b]:
                        total = total + row[a] * row[b].conjugate()
                want = Fraction(order, self.sizes[a]) if a == b else 0
                if total != want:
                    raise TableError(f"columns {a},{b} not orthogonal")
        if sum(d * d for d in self.dims) != order:
            raise TableError("degree squares do not sum to the group order")
        if any(d <= 0 for d in self.dims):
            raise TableError("non-positive degree")

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "classes": [{"representative": c[0], "size": len(c)} for c in self.classes],
            "characters": [[x.literal() for x in row] for row in self.characters],
        }

    def to_text(self) -> str:
        lines = [f"order {self.group.order}, {self.rank} classes",
                 "sizes: " + " ".join(str(s) for s in self.sizes)]
        for i, row in enumerate(self.characters):
            lines.append(f"chi{i}: " + "  ".join(x.literal() for x in row))
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Dixon-Schneider

def _class_matrix(g: FiniteGroup, classes, class_of, j: int, p: int):
    """Matrix of multiplication by the j-th class sum: entry [k][l] = a_{j k l}."""
    k = len(classes)
    m = [[0] * k for _ in range(k)]
    cj = classes[j]
    for l, cl in enumerate(classes):
        target = cl[0]
        for x in cj:
            m[class_of[g.mul(g.inv(x), target)]][l] += 1
    return [[v % p for v in row] for row in m]


def character_table(g: FiniteGroup) -> CharacterTable:
    """Exact character table with verified orthogonality."""
    if g.order > MAX_TABLE_ORDER:
        raise GroupError(f"group order {g.order} exceeds {MAX_TABLE_ORDER}")
    classes = conjugacy_classes(g)
    class_of = [0] * g.order
    for i, c in enumerate(classes):
        for x in c:
            class_of[x] = i
    k = len(classes)
    sizes = [len(c) for c in classes]
    e = g.exponent
    inverse_class = [class_of[g.inv(c[0])] for c in classes]
    bound = 2 * math.sqrt(g.order)
    p = choose_prime(e, bound)
    while True:
        try:
            field_ = PrimeField(p, e)
            mats = (_class_matrix(g, classes, class_of, j, p) for j in range(1, k))
            vectors = simultaneous_eigenvectors(field_, mats, k) if k > 1 else [[1]]
            break
        except SplittingError:
            p = choose_prime(e, p)
    rows = []
    for vec in vectors:
        inv0 = pow(vec[0], -1, p)
        omega = [x * inv0 % p for x in vec]
        denom = sum(omega[j] * omega[inverse_class[j]] * pow(sizes[j], -1, p)
                    for j in range(k)) % p
        dsq = g.order * pow(denom, -1, p) % p
        d = field_.sqrt_small(dsq)
        if d is None or d == 0:
            raise TableError("degree has no square root modulo p")
        values_p = [omega[j] * d * pow(sizes[j], -1, p) % p for j in range(k)]
        rows.append(_lift_row(g, field_, classes, class_of, values_p, d))
    rows.sort(key=_row_key)
    table = CharacterTable(g, classes, rows, class_of)
    table.verify()
    return table


def _row_key(row):
    dim = row[0].to_fraction()
    nontrivial = any(x != 1 for x in row)
    return (dim, nontrivial, tuple(x.sort_key() for x in row))


def _lift_row(g, field_, classes, class_of, values_p, degree):
    p = field_.p
    out = []
    for cl in classes:
        x = cl[0]
        o = g.element_order(x)
        powers = [values_p[class_of[g.power(x, t)]] for t in range(o)]
        inv_o = pow(o, -1, p)
        coeffs = {}
        for l in range(o):
            s = sum(powers[t] * field_.zeta(o, (-l * t) % o) for t in range(o)) * inv_o % p
            if s > degree:
                raise TableError("eigenvalue multiplicity out of range")
            if s:
                coeffs[l] = s
        out.append(Cyclotomic.from_exponents(o, coeffs) if coeffs else _ZERO)
    return out


# ---------------------------------------------------------------------------
# fusion rings

@dataclass
class FusionRing:
    labels: list[str]
    coefficients: np.ndarray  # N[i, j, k]
    dual: list[int]
    unit: int
    dims: list[Fraction]

    @property
    def rank(self) -> int:
        return len(self.labels)

    def verify(self) -> None:
        n = self.coefficients
        r = self.rank
        if (n < 0).any():
            raise TableError("negative fusion coefficient")
        eye = np.eye(r, dtype=np.int64)
        if not (np.array_equal(n[:, self.unit, :], eye) and np.array_equal(n[self.unit, :, :], eye)):
            raise TableError("unit axiom fails")
        left = np.einsum("ijm,mkl->ijkl", n, n)
        right = np.einsum("jkm,iml->ijkl", n, n)
        if not np.array_equal(left, right):
            raise TableError("fusion rules are not associative")
        d = self.dual
        for i in range(r):
            for j in range(r):
                for k in range(r):
                    if n[i, j, k] != n[d[j], d[i], d[k]]:
                        raise TableError("duality symmetry fails")
                    if n[i, j, k] != n[k, d[j], i]:
                        raise TableError("Frobenius reciprocity fails")

    def invertible(self) -> list[int]:
        return [i for i in range(self.rank) if self.dims[i] == 1]

    def to_json(self) -> dict:
        r = self.rank
        return {
            "labels": self.labels,
            "unit": self.unit,
            "dual": self.dual,
            "dims": [str(d) for d in self.dims],
            "fusion": [[i, j, k, int(self.coefficients[i, j, k])]
                       for i in range(r) for j in range(r) for k in range(r)
                       if self.coefficients[i, j, k]],
        }

    @classmethod
    def from_json(cls, data) -> "FusionRing":
        r = len(data["labels"])
        n = np.zeros((r, r, r), dtype=np.int64)
        for i, j, k, v in data["fusion"]:
            n[i, j, k] = v
        ring = cls(list(data["labels"]), n, list(data["dual"]), int(data["unit"]),
                   [Fraction(d) for d in data["dims"]])
        ring.verify()
        return ring

    def to_text(self) -> str:
        lines = [f"rank {self.rank}, dims " + " ".join(str(d) for d in self.dims)]
        r = self.rank
        for i in range(r):
            for j in range(i, r):
                parts = []
                for k in range(r):
                    c = int(self.coefficients[i, j, k])
                    if c:
                        parts.append(self.labels[k] if c == 1 else f"{c}{self.labels[k]}")
                lines.append(f"{self.labels[i]} x {self.labels[j]} = " + " + ".join(parts))
        return "\n".join(lines)


def fusion_coefficients(t: CharacterTable) -> FusionRing:
    """Tensor-product multiplicities of irreducible characters."""
    if t.factors:
        return _kron_rings([fusion_coefficients(f) for f in t.factors])
    r = t.rank
    chars = t.characters
    conj = [[x.conjugate() for x in row] for row in chars]
    n = np.zeros((r, r, r), dtype=np.int64)
    for i in range(r):
        for j in range(i, r):
            prod = [a * b for a, b in zip(chars[i], chars[j])]
            for k in range(r):
                v = t.inner_product(prod, chars[k])
                if v.denominator != 1 or v < 0:
                    raise TableError(f"fusion coefficient {v} is not a natural number")
                n[i, j, k] = n[j, i, k] = int(v)
    dual = [chars.index(conj[i]) for i in range(r)]
    unit = next(i for i, row in enumerate(chars) if all(x == 1 for x in row))
    ring = FusionRing([f"chi{i}" for i in range(r)], n, dual, unit,
                      [row[0].to_fraction() for row in chars])
    ring.verify()
    return ring


def _kron_rings(rings) -> FusionRing:
    out = rings[0]
    for other in rings[1:]:
        r1, r2 = out.rank, other.rank
        n = np.einsum("ace,bdf->abcdef", out.coefficients, other.coefficients)
        n = n.reshape(r1 * r2, r1 * r2, r1 * r2)
        labels = [f"{a}*{b}" for a in out.labels for b in other.labels]
        dual = [out.dual[i // r2] * r2 + other.dual[i % r2] for i in range(r1 * r2)]
        dims = [out.dims[i // r2] * other.dims[i % r2] for i in range(r1 * r2)]
        out = FusionRing(labels, n, dual, out.unit * r2 + other.unit, dims)
    return out


def restrict_quotient(g: FiniteGroup, n: Subgroup, table: CharacterTable | None = None):
    """Irreps of G that factor through G/N, matched with the table of G/N.

    Returns ``(selected_rows, matching)`` where ``matching[i]`` is the row of
    the quotient table whose pullback equals ``selected_rows[i]``.
    """
    if not n.is_normal():
        raise GroupError("subgroup is not normal")
    t = table or character_table(g)
    n_classes = sorted({t.class_of[x] for x in n.members})
    selected = [i for i, row in enumerate(t.characters)
                if all(row[c] == row[0] for c in n_classes)]
    q, proj = quotient(g, n)
    tq = character_table(q)
    pulled = [[tq.value(i, proj[c[0]]) for c in t.classes] for i in range(tq.rank)]
    matching = []
    for i in selected:
        hits = [j for j, row in enumerate(pulled) if row == t.characters[i]]
        if len(hits) != 1:
            raise TableError("pullback does not match the selected irreps")
        matching.append(hits[0])
    if sorted(matching) != list(range(tq.rank)):
        raise TableError("selected irreps are not in bijection with irreps of G/N")
    return selected, matching


def deligne_product(t1: CharacterTable, t2: CharacterTable) -> CharacterTable:
    """Table of G1 x G2; row (i1, i2) sits at index i1 * rank2 + i2."""
    gp = direct_product(t1.group, t2.group)
    k2 = len(t2.classes)
    class_of = [0] * gp.order
    members = [[] for _ in range(len(t1.classes) * k2)]
    for x in range(gp.order):
        a, b = split_product_element(gp, t1.group, t2.group, x)
        c = t1.class_of[a] * k2 + t2.class_of[b]
        class_of[x] = c
        members[c].append(x)
    classes = [sorted(m) for m in members]
    chars = [[x * y for x in r1 for y in r2] for r1 in t1.characters for r2 in t2.characters]
    factors = (t1.factors or (t1,)) + (t2.factors or (t2,))
    return CharacterTable(gp, classes, chars, class_of, factors=factors)


# ---------------------------------------------------------------------------
# braided data and modularity

@dataclass
class BraidedFusionData:
    ring: FusionRing
    kind: str  # "symmetric_from_group" or "pointed"
    s_matrix: list[list[Cyclotomic]]
    source: object = None

    def __post_init__(self):
        s = self.s_matrix
        r = self.ring.rank
        for i in range(r):
            for j in range(r):
                if s[i][j] != s[j][i]:
                    raise TableError("s-matrix is not symmetric")
            if s[self.ring.unit][i] != self.ring.dims[i]:
                raise TableError("s(unit, j) differs from dim(j)")

    @classmethod
    def from_table(cls, t: CharacterTable) -> "BraidedFusionData":
        ring = fusion_coefficients(t)
        s = [[cyclo(a * b) for b in ring.dims] for a in ring.dims]
        return cls(ring, "symmetric_from_group", s, t)

    @classmethod
    def pointed(cls, elements, add, bilinear, labels=None) -> "BraidedFusionData":
        """Pointed data on an abelian group: s(x, y) = exp(2 pi i b(x, y))."""
        r = len(elements)
        pos = {x: i for i, x in enumerate(elements)}
        n = np.zeros((r, r, r), dtype=np.int64)
        for i, x in enumerate(elements):
            for j, y in enumerate(elements):
                n[i, j, pos[add(x, y)]] = 1
        zero = next(i for i, x in enumerate(elements) if all(add(x, y) == y for y in elements))
        dual = [next(j for j in range(r) if n[i, j, zero]) for i in range(r)]
        ring = FusionRing(labels or [",".join(map(str, x)) if isinstance(x, tuple) else str(x)
                                     for x in elements],
                          n, dual, zero, [Fraction(1)] * r)
        s = []
        for x in elements:
            row = []
            for y in elements:
                v = Fraction(bilinear(x, y))
                row.append(zeta(v.denominator, v.numerator))
            s.append(row)
        return cls(ring, "pointed", s)


@dataclass
class ModularityReport:
    verdict: str  # MODULAR, SYMMETRIC or NEITHER
    s_rank: int
    rank: int
    symmetric: bool

    def to_text(self) -> str:
        tail = "modular" if self.verdict == "MODULAR" else "not modular"
        return f"{self.verdict}, s-rank {self.s_rank}, {tail}"


def modularity_test(b: BraidedFusionData) -> ModularityReport:
    s = b.s_matrix
    r = b.ring.rank
    dims = b.ring.dims
    symmetric = all(s[i][j] == dims[i] * dims[j] for i in range(r) for j in range(r))
    sr = exact_rank([list(row) for row in s])
    if sr == r:
        verdict = "MODULAR"
    elif symmetric:
        verdict = "SYMMETRIC"
    else:
        verdict = "NEITHER"
    return ModularityReport(verdict, sr, r, symmetric)


class RankCapError(ValueError):
    pass


def fusion_ring_isomorphic(r1: FusionRing, r2: FusionRing, cap: int = MAX_ISO_RANK):
    """A label bijection ``phi`` with N2[phi i, phi j, phi k] = N1[i, j, k], or None.

    Cheap invariants are compared first; the exhaustive search only runs
    (and only enforces the rank cap) when they all agree.
    """
    if r1.rank != r2.rank:
        return None
    if sorted(r1.dims) != sorted(r2.dims):
        return None
    selfdual1 = sorted(r1.dims[i] for i in range(r1.rank) if r1.dual[i] == i)
    selfdual2 = sorted(r2.dims[i] for i in range(r2.rank) if r2.dual[i] == i)
    if selfdual1 != selfdual2:
        return None
    n1, n2 = r1.coefficients, r2.coefficients
    sig1 = [_label_signature(r1, i) for i in range(r1.rank)]
    sig2 = [_label_signature(r2, i) for i in range(r2.rank)]
    if sorted(sig1) != sorted(sig2):
        return None
    if r1.rank > cap:
        raise RankCapError(f"rank {r1.rank} exceeds the isomorphism search cap {cap}")
    r = r1.rank
    order = sorted(range(r), key=lambda i: (i != r1.unit, sig1[i]))
    phi = [-1] * r
    used = [False] * r

    def consistent(upto):
        assigned = order[:upto + 1]
        i = order[upto]
        for j in assigned:
            for k in assigned:
                a, b, c = phi[i], phi[j], phi[k]
                if (n1[i, j, k] != n2[a, b, c] or n1[j, i, k] != n2[b, a, c]
                        or n1[j, k, i] != n2[b, c, a]):
                    return False
        d = r1.dual[i]
        if phi[d] >= 0 and r2.dual[phi[i]] != phi[d]:
            return False
        return True

    def search(pos):
        if pos == r:
            return True
        i = order[pos]
        for cand in range(r):
            if used[cand] or sig2[cand] != sig1[i]:
                continue
            if i == r1.unit and cand != r2.unit:
                continue
            phi[i] = cand
            used[cand] = True
            if consistent(pos) and search(pos + 1):
                return True
            used[cand] = False
            phi[i] = -1
        return False

    return list(phi) if search(0) else None


def _label_signature(ring: FusionRing, i: int):
    n = ring.coefficients
    row = sorted(int(x) for x in n[i, i, :])
    return (ring.dims[i], ring.dual[i] == i, tuple(row), int(n[i, ring.dual[i], :].sum()))


# ---------------------------------------------------------------------------
# group-theoretic short exact sequence 0 -> (G/N)^ -> G^ -> (N^)_lift -> 0

@dataclass
class LiftEvidence:
    character: tuple  # values on N members (sorted)
    invariant: bool
    obstruction: TwoCochain | None
    liftable: bool


@dataclass
class GroupSESReport:
    quotient_dual: list[int]
    middle_dual: list[int]
    kernel_order: int
    image: list[tuple]
    liftable: list[tuple]
    evidence: list[LiftEvidence] = field(default_factory=list)
    kernel_matches: bool = False
    image_matches: bool = False

    @property
    def exact(self) -> bool:
        return self.kernel_matches and self.image_matches

    def to_json(self) -> dict:
        return {
            "quotient_dual": self.quotient_dual,
            "middle_dual": self.middle_dual,
            "kernel_order": self.kernel_order,
            "image_size": len(self.image),
            "liftable_size": len(self.liftable),
            "exact": self.exact,
            "characters": [
                {"values": [str(v) for v in ev.character], "invariant": ev.invariant,
                 "liftable": ev.liftable,
                 "obstruction_trivial": None if ev.obstruction is None else ev.liftable}
                for ev in self.evidence
            ],
        }


def coset_section(g: FiniteGroup, proj, q: FiniteGroup, kind: str = "min"):
    """A set-theoretic section G/N -> G (identity coset always sent to e)."""
    sec = {}
    for x in range(g.order):
        c = proj[x]
        if c not in sec or (x < sec[c] if kind == "min" else x > sec[c]):
            sec[c] = x
    sec[proj[0]] = 0
    return [sec[c] for c in range(q.order)]


def group_ses_check(g: FiniteGroup, n: Subgroup, section: str = "min") -> GroupSESReport:
    if n.parent is not g:
        raise GroupError("subgroup belongs to a different group")
    if not n.is_normal():
        raise GroupError("subgroup is not normal")
    q, proj = quotient(g, n)
    qfactors, qdual = abelianization_and_dual(q)
    gfactors, gdual = abelianization_and_dual(g)
    members = n.sorted_members()
    g_chars = gdual.characters()
    kernel = [c for c in g_chars if all(c[x] == 0 for x in members)]
    pulled = {tuple(chi[proj[x]] for x in range(g.order)) for chi in qdual.characters()}
    kernel_matches = set(kernel) == pulled and len(kernel) == len(qdual)
    image = sorted({tuple(c[x] for x in members) for c in g_chars})

    sub, embed = n.as_group()
    _, ndual = abelianization_and_dual(sub)
    pos = {e: i for i, e in enumerate(embed)}
    sec = coset_section(g, proj, q, section)
    evidence = []
    liftable = []
    for nu_sub in ndual.characters():
        nu = {x: nu_sub[pos[x]] for x in members}
        values = tuple(nu[x] for x in members)
        invariant = all(nu[g.conj(s, x)] == nu[x] for s in g.generator_indices for x in members)
        obstruction = None
        ok = False
        if invariant:
            phases = [[nu[g.mul(g.mul(sec[a], sec[b]), g.inv(sec[q.mul(a, b)]))]
                       for b in range(q.order)] for a in range(q.order)]
            obstruction = TwoCochain.from_phases(phases)
            ok = two_coboundary_test(q, obstruction) is not None
        evidence.append(LiftEvidence(values, invariant, obstruction, ok))
        if ok:
            liftable.append(values)
    liftable.sort()
    image_matches = image == liftable and len(kernel) * len(image) == len(g_chars)
    return GroupSESReport(qfactors, gfactors, len(kernel), image, liftable, evidence,
                          kernel_matches, image_matches)
