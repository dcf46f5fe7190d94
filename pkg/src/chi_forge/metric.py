"""Pointed braided categories modelled by metric groups (A, q).

Condensing a transparent null subgroup H produces a crossed pointed theory
graded by the dual of H; equivariantizing it reassembles the original
metric group.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product

from .exact.cyclotomic import Cyclotomic, cyclo, mod1, sqrt_rational, zeta
from .groups import FiniteGroup, TwoCochain, abelian_structure, two_coboundary_test
from .repcat import BraidedFusionData

__all__ = [
    "MetricError",
    "MetricValidationError",
    "NotTannakianError",
    "SizeCapError",
    "MetricGroup",
    "IsotropicSubgroup",
    "CrossedPointedTheory",
    "EquivariantResult",
    "SESReport",
    "validate_metric",
    "radical_and_muger",
    "gauss_milgram",
    "enumerate_isotropic",
    "condense",
    "equivariantize",
    "pointed_ses_check",
    "metric_iso_test",
]

MAX_ORDER = 4096
MAX_ISOTROPIC_ORDER = 1024
MAX_ISO_ORDER = 64


class MetricError(ValueError):
    pass


class MetricValidationError(MetricError):
    """The table does not define a quadratic form; ``witness`` names the failure."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotTannakianError(MetricError):
    """The subgroup does not span a Tannakian subcategory (not transparent, or q nonzero)."""


class SizeCapError(MetricError):
    pass


def _parse_fraction(v) -> Fraction:
    return mod1(Fraction(v))


class MetricGroup:
    """A = (+)_i Z/d_i with a quadratic form q.  Elements are coordinate tuples."""

    def __init__(self, factors, q, *, _checked=False):
        self.factors = tuple(int(d) for d in factors)
        if any(d < 2 for d in self.factors):
            raise MetricError("invariant factors must be at least 2")
        self.elements = list(product(*[range(d) for d in self.factors]))
        if len(self.elements) > MAX_ORDER:
            raise SizeCapError(f"|A| = {len(self.elements)} exceeds {MAX_ORDER}")
        self.q = {x: mod1(v) for x, v in q.items()}
        if not _checked:
            self._validate()

    # -- group structure ------------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def zero(self) -> tuple:
        return (0,) * len(self.factors)

    def add(self, x, y) -> tuple:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.factors))

    def neg(self, x) -> tuple:
        return tuple((-a) % d for a, d in zip(x, self.factors))

    def scale(self, n: int, x) -> tuple:
        return tuple((n * a) % d for a, d in zip(x, self.factors))

    def element_order(self, x) -> int:
        o = 1
        for a, d in zip(x, self.factors):
            o = math.lcm(o, d // math.gcd(a, d))
        return o

    @property
    def generators(self) -> list[tuple]:
        k = len(self.factors)
        return [tuple(1 if i == j else 0 for i in range(k)) for j in range(k)]

    def b(self, x, y) -> Fraction:
        return self.bilinear[(x, y)]

    @cached_property
    def bilinear(self) -> dict:
        q = self.q
        return {(x, y): mod1(q[self.add(x, y)] - q[x] - q[y])
                for x in self.elements for y in self.elements}

    def _validate(self):
        missing = [x for x in self.elements if x not in self.q]
        if missing:
            raise MetricValidationError(f"q table incomplete: missing {missing[0]}", (missing[0],))
        extra = [x for x in self.q if x not in set(self.elements)]
        if extra:
            raise MetricValidationError(f"q table has entry outside the group: {extra[0]}",
                                        (extra[0],))
        for x in self.elements:
            if self.q[self.neg(x)] != self.q[x]:
                raise MetricValidationError(f"q(-x) != q(x) at x={x}", (x,))
        b = self.bilinear
        # additivity in the first slot for all x, z and generator y, plus symmetry,
        # is equivalent to bi-additivity
        for x in self.elements:
            for y in self.generators:
                xy = self.add(x, y)
                for z in self.elements:
                    if mod1(b[(xy, z)] - b[(x, z)] - b[(y, z)]) != 0:
                        raise MetricValidationError(
                            f"b(x+y,z) != b(x,z)+b(y,z) at x={x}, y={y}, z={z}", (x, y, z))

    # -- io -------------------------------------------------------------------
    def to_json(self) -> dict:
        return {"invariant_factors": list(self.factors),
                "q": {",".join(map(str, x)): str(self.q[x]) for x in self.elements}}

    @classmethod
    def from_json(cls, data) -> "MetricGroup":
        try:
            factors = [int(d) for d in data["invariant_factors"]]
            raw = data["q"]
        except (KeyError, TypeError) as exc:
            raise MetricError(f"metric file missing field: {exc}") from exc
        q = {}
        for key, v in raw.items():
            key = key.strip()
            coords = tuple(int(a) for a in key.split(",")) if key else ()
            if len(coords) != len(factors):
                raise MetricError(f"coordinate {key!r} has the wrong length")
            q[tuple(a % d for a, d in zip(coords, factors))] = _parse_fraction(v)
        return validate_metric(factors, q)

    def __repr__(self):
        return f"MetricGroup({list(self.factors)})"


def validate_metric(factors, q) -> MetricGroup:
    return MetricGroup(factors, q)


def metric_from_function(factors, form) -> MetricGroup:
    els = product(*[range(int(d)) for d in factors])
    return MetricGroup(factors, {x: form(x) for x in els})


# ---------------------------------------------------------------------------

@dataclass
class RadicalReport:
    radical: list[tuple]
    muger_symmetric: bool
    tannakian: bool

    @property
    def nondegenerate(self) -> bool:
        return len(self.radical) == 1


def radical_and_muger(m: MetricGroup) -> RadicalReport:
    rad = [x for x in m.elements if all(m.b(x, y) == 0 for y in m.elements)]
    return RadicalReport(rad, len(rad) == m.order, all(m.q[x] == 0 for x in rad))


def _phase(v: Fraction) -> Cyclotomic:
    v = mod1(v)
    return zeta(v.denominator, v.numerator)


def gauss_milgram(m: MetricGroup):
    """Return ``(sum_x exp(2 pi i q(x)), signature mod 8 or None)``."""
    total = cyclo(0)
    for x in m.elements:
        total = total + _phase(m.q[x])
    if not radical_and_muger(m).nondegenerate:
        return total, None
    if total * total.conjugate() != m.order:
        raise ArithmeticError("Gauss-Milgram modulus identity failed")
    root = sqrt_rational(m.order)
    for sigma in range(8):
        if total == root * zeta(8, sigma):
            return total, sigma
    raise ArithmeticError("Gauss sum is not sqrt|A| times an eighth root of unity")


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IsotropicSubgroup:
    parent: MetricGroup
    members: frozenset
    transparent: bool
    tannakian: bool

    def __len__(self):
        return len(self.members)

    def sorted_members(self) -> list[tuple]:
        return sorted(self.members)


def _span(m: MetricGroup, gens) -> frozenset:
    out = {m.zero}
    frontier = [m.zero]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = m.add(x, g)
                if y not in out:
                    out.add(y)
                    new.append(y)
        frontier = new
    return frozenset(out)


def make_isotropic(m: MetricGroup, members) -> IsotropicSubgroup:
    members = _span(m, list(members))
    if any(m.q[h] != 0 for h in members):
        raise MetricError("subgroup is not isotropic: q does not vanish on it")
    rad = set(radical_and_muger(m).radical)
    transparent = members <= rad
    return IsotropicSubgroup(m, members, transparent, transparent)


def enumerate_isotropic(m: MetricGroup, require_transparent: bool = False):
    if m.order > MAX_ISOTROPIC_ORDER:
        raise SizeCapError(f"|A| = {m.order} exceeds {MAX_ISOTROPIC_ORDER}")
    rad = set(radical_and_muger(m).radical)
    pool = [x for x in m.elements if m.q[x] == 0 and (not require_transparent or x in rad)]
    start = frozenset([m.zero])
    seen = {start}
    queue = deque([start])
    while queue:
        h = queue.popleft()
        for x in pool:
            if x in h or any(m.b(x, y) != 0 for y in h):
                continue
            bigger = _span(m, list(h) + [x])
            if bigger not in seen:
                seen.add(bigger)
                queue.append(bigger)
    out = []
    for h in sorted(seen, key=lambda s: (len(s), sorted(s))):
        transparent = h <= rad
        out.append(IsotropicSubgroup(m, h, transparent, transparent))
    return out


# ---------------------------------------------------------------------------
# condensation

@dataclass
class CrossedPointedTheory:
    """Condensed data.  Objects are cosets a+H named by a representative.

    ``grading[X]`` is the character h -> b(r(X), h) of H, stored as the
    tuple of its values on ``subgroup`` (sorted members).  The grading group
    is the dual of H; the action of every grade on objects is trivial.
    """

    parent: MetricGroup
    subgroup: list[tuple]
    objects: list[tuple]
    coset_of: dict
    grading: dict
    grading_group: list[tuple]
    twist: dict
    trivial_sector: MetricGroup | None
    trivial_sector_objects: list[tuple]

    def tensor(self, x, y) -> tuple:
        return self.coset_of[self.parent.add(x, y)]

    def tensorator(self, x, y) -> tuple:
        """r(X) + r(Y) - r(X Y), an element of H."""
        m = self.parent
        return m.add(m.add(x, y), m.neg(self.tensor(x, y)))

    def action(self, gamma, x) -> tuple:
        return x

    def crossed_braiding(self, x, y) -> Fraction:
        return self.parent.b(x, y)

    def grade_add(self, g1, g2) -> tuple:
        return tuple(mod1(a + b) for a, b in zip(g1, g2))

    def check_grading_multiplicative(self) -> bool:
        return all(self.grading[self.tensor(x, y)] == self.grade_add(self.grading[x], self.grading[y])
                   for x in self.objects for y in self.objects)

    def to_json(self) -> dict:
        return {
            "subgroup": [list(h) for h in self.subgroup],
            "objects": [{"representative": list(x),
                         "grade": [str(v) for v in self.grading[x]],
                         "twist": str(self.twist[x])} for x in self.objects],
            "trivial_sector": None if self.trivial_sector is None
            else self.trivial_sector.to_json(),
        }


def condense(m: MetricGroup, h: IsotropicSubgroup, representative: str = "min") -> CrossedPointedTheory:
    members = sorted(h.members)
    if any(m.q[x] != 0 for x in members):
        raise MetricError("subgroup is not isotropic")
    coset_of = {}
    objects = []
    for x in m.elements:
        if x in coset_of:
            continue
        coset = [m.add(x, y) for y in members]
        rep = min(coset) if representative == "min" else max(coset)
        objects.append(rep)
        for y in coset:
            coset_of[y] = rep
    objects.sort()
    grading = {x: tuple(m.b(x, y) for y in members) for x in objects}
    twist = {x: m.q[x] for x in objects}
    grading_group = sorted(_dual_characters(m, members))
    trivial_grade = tuple(Fraction(0) for _ in members)
    sector = [x for x in objects if grading[x] == trivial_grade]
    for x in sector:
        for y in members:
            if m.q[m.add(x, y)] != m.q[x]:
                raise AssertionError("q is not constant on a coset of H inside H-perp")
    theory = CrossedPointedTheory(m, members, objects, coset_of, grading, grading_group, twist,
                                  None, sector)
    theory.trivial_sector = _sector_metric(theory, sector)
    return theory


def _dual_characters(m: MetricGroup, members):
    """All characters of H as tuples of values on ``members``."""
    st = abelian_structure(m.zero, _minimal_generators(m, members), m.add)
    chars = set()
    for label in product(*[range(d) for d in st.factors]):
        chars.add(tuple(mod1(sum(Fraction(a * w, d) for a, w, d in
                                 zip(label, st.coords[y], st.factors))) for y in members))
    return chars


def _minimal_generators(m: MetricGroup, members):
    gens = []
    span = frozenset([m.zero])
    for x in sorted(members):
        if x not in span:
            gens.append(x)
            span = _span(m, gens)
    return gens


def _sector_metric(theory: CrossedPointedTheory, sector) -> MetricGroup | None:
    if len(sector) == 1:
        return None
    gens = []
    zero = theory.coset_of[theory.parent.zero]
    span = {zero}

    def close(gs):
        out = {zero}
        frontier = [zero]
        while frontier:
            new = []
            for x in frontier:
                for g in gs:
                    y = theory.tensor(x, g)
                    if y not in out:
                        out.add(y)
                        new.append(y)
            frontier = new
        return out

    for x in sector:
        if x not in span:
            gens.append(x)
            span = close(gens)
    st = abelian_structure(zero, gens, theory.tensor)
    q = {st.coords[x]: theory.twist[x] for x in sector}
    return MetricGroup(st.factors, q)


# ---------------------------------------------------------------------------
# equivariantization

@dataclass
class EquivariantResult:
    metric: MetricGroup | None
    braided: BraidedFusionData | None
    simple_count: int
    unit_structures: int
    dual_grading_order: int
    pairs: list = field(default_factory=list)


def count_unit_structures(theory: CrossedPointedTheory) -> int:
    """Brute-force count of homomorphisms u from the grading group to U(1).

    An equivariant structure on the unit with trivial action is a family of
    scalars u_g with u_{gh} = u_g u_h.  Scalars are searched in Z/N with N
    the exponent of the grading group, and every candidate on generators is
    checked for well-definedness and multiplicativity over all pairs.
    """
    grp = theory.grading_group
    zero = tuple(Fraction(0) for _ in theory.subgroup)
    add = theory.grade_add
    exp_ = 1
    for g in grp:
        for v in g:
            exp_ = math.lcm(exp_, v.denominator)
    gens = []
    span = {zero}

    def close(gs):
        out = {zero: ()}
        frontier = [zero]
        while frontier:
            new = []
            for x in frontier:
                for i, g in enumerate(gs):
                    y = add(x, g)
                    if y not in out:
                        out[y] = out[x] + (i,)
                        new.append(y)
            frontier = new
        return out

    for g in grp:
        if g not in span:
            gens.append(g)
            span = set(close(gens))
    words = close(gens)
    count = 0
    for images in product(range(exp_), repeat=len(gens)):
        u = {g: sum(images[i] for i in w) % exp_ for g, w in words.items()}
        if all((u[a] + u[b] - u[add(a, b)]) % exp_ == 0 for a in grp for b in grp):
            count += 1
    return count


def equivariantize(theory: CrossedPointedTheory) -> EquivariantResult:
    """Equivariant simples are pairs (X, h) with h in H = dual of the grading group.

    Product (X, h)(Y, k) = (XY, h + k + tensorator(X, Y)); quadratic form
    twist(X) + grade(X)(h).
    """
    m = theory.parent
    members = theory.subgroup
    idx = {y: i for i, y in enumerate(members)}
    pairs = [(x, y) for x in theory.objects for y in members]

    def op(p1, p2):
        (x, h), (y, k) = p1, p2
        s = m.add(m.add(h, k), theory.tensorator(x, y))
        return (theory.tensor(x, y), s)

    def qform(p):
        x, h = p
        return mod1(theory.twist[x] + theory.grading[x][idx[h]])

    # (X, h) stands for r(X) + h, so the unit is (r0, -r0)
    r0 = theory.coset_of[m.zero]
    zero = (r0, m.neg(r0))
    gens = []
    span = {zero}

    def close(gs):
        out = {zero}
        frontier = [zero]
        while frontier:
            new = []
            for a in frontier:
                for g in gs:
                    c = op(a, g)
                    if c not in out:
                        out.add(c)
                        new.append(c)
            frontier = new
        return out

    for p in pairs:
        if p not in span:
            gens.append(p)
            span = close(gens)
    if len(span) != len(pairs):
        raise AssertionError("equivariant simples do not close under the product")
    unit_count = count_unit_structures(theory)
    if not gens:
        metric = None
        braided = BraidedFusionData.pointed([()], lambda a, b: (), lambda a, b: 0)
        return EquivariantResult(metric, braided, 1, unit_count, len(theory.grading_group), pairs)
    st = abelian_structure(zero, gens, op)
    q = {st.coords[p]: qform(p) for p in pairs}
    metric = MetricGroup(st.factors, q)
    braided = pointed_braided(metric)
    return EquivariantResult(metric, braided, len(pairs), unit_count,
                             len(theory.grading_group), pairs)


def pointed_braided(m: MetricGroup) -> BraidedFusionData:
    data = BraidedFusionData.pointed(m.elements, m.add, m.b)
    data.source = m
    return data


# ---------------------------------------------------------------------------
# pointed short exact sequence

@dataclass
class ObjectEvidence:
    object: tuple
    fixed: bool
    obstruction: TwoCochain | None
    liftable: bool


@dataclass
class SESReport:
    kernel: list[tuple]
    kernel_factors: list[int]
    dual_factors: list[int]
    middle_factors: list[int]
    image: list[tuple]
    liftable: list[tuple]
    evidence: list[ObjectEvidence]
    kernel_matches: bool
    image_matches: bool

    @property
    def exact(self) -> bool:
        return self.kernel_matches and self.image_matches

    def to_json(self) -> dict:
        return {
            "kernel": [list(x) for x in self.kernel],
            "kernel_factors": self.kernel_factors,
            "dual_factors": self.dual_factors,
            "middle_factors": self.middle_factors,
            "image_size": len(self.image),
            "liftable_size": len(self.liftable),
            "exact": self.exact,
            "objects": [{"object": list(ev.object), "fixed": ev.fixed, "liftable": ev.liftable}
                        for ev in self.evidence],
        }


def _factors_of(elements, zero, add):
    if len(elements) == 1:
        return []
    gens = []
    span = {zero}
    for x in sorted(elements):
        if x not in span:
            gens.append(x)
            span = set(abelian_structure(zero, gens, add).coords)
    return list(abelian_structure(zero, gens, add).factors)


def pointed_ses_check(m: MetricGroup, h: IsotropicSubgroup, representative: str = "min") -> SESReport:
    """0 -> dual(Gamma) -> A -> (A/H)_lift -> 0 with Gamma the dual of H."""
    rad = set(radical_and_muger(m).radical)
    if not h.members <= rad:
        raise NotTannakianError("subgroup is not transparent")
    if any(m.q[x] != 0 for x in h.members):
        raise NotTannakianError("q does not vanish on the subgroup (super-Tannakian)")
    theory = condense(m, h, representative)
    zero_obj = theory.coset_of[m.zero]
    kernel = sorted(x for x in m.elements if theory.coset_of[x] == zero_obj)
    kernel_factors = _factors_of(kernel, m.zero, m.add)
    gzero = tuple(Fraction(0) for _ in theory.subgroup)
    grp = theory.grading_group
    dual_factors = _dual_group_factors(grp, gzero, theory.grade_add)
    kernel_matches = set(kernel) == h.members and kernel_factors == dual_factors
    image = sorted({theory.coset_of[x] for x in m.elements})

    # independent liftability: trivialise the composition of the
    # isomorphisms T_gamma(X) -> X, acting on the summand r(X)+h by gamma(h)
    gpos = {g: i for i, g in enumerate(grp)}
    mult = [[gpos[theory.grade_add(a, b)] for b in grp] for a in grp]
    perm_gens = [tuple(mult[i][j] for j in range(len(grp))) for i in range(len(grp))]
    gamma = FiniteGroup(len(grp), perm_gens)
    to_gamma = [gamma.index[perm_gens[i]] for i in range(len(grp))]
    from_gamma = {v: i for i, v in enumerate(to_gamma)}
    idx = {y: i for i, y in enumerate(theory.subgroup)}
    evidence = []
    liftable = []
    for x in theory.objects:
        fixed = all(theory.action(g, x) == x for g in grp)
        obstruction = None
        ok = False
        if fixed:
            phases = []
            for a in range(gamma.order):
                row = []
                ga = grp[from_gamma[a]]
                for b in range(gamma.order):
                    gb = grp[from_gamma[b]]
                    gab = grp[from_gamma[gamma.mul(a, b)]]
                    values = {mod1(ga[idx[y]] + gb[idx[y]] - gab[idx[y]]) for y in theory.subgroup}
                    if len(values) != 1:
                        raise AssertionError("composite of equivariant isomorphisms is not scalar")
                    row.append(values.pop())
                phases.append(row)
            obstruction = TwoCochain.from_phases(phases)
            ok = two_coboundary_test(gamma, obstruction) is not None
        evidence.append(ObjectEvidence(x, fixed, obstruction, ok))
        if ok:
            liftable.append(x)
    image_matches = image == sorted(liftable) and len(kernel) * len(image) == m.order
    return SESReport(kernel, kernel_factors, dual_factors, list(m.factors), image, sorted(liftable),
                     evidence, kernel_matches, image_matches)


def _dual_group_factors(grp, zero, add):
    """Invariant factors of the dual of the grading group (isomorphic to it)."""
    return _factors_of(grp, zero, add)


# ---------------------------------------------------------------------------
# isometry search

def metric_iso_test(m1: MetricGroup, m2: MetricGroup):
    """An isometry A1 -> A2 as a dict, or None."""
    if max(m1.order, m2.order) > MAX_ISO_ORDER:
        raise SizeCapError(f"isometry search limited to |A| <= {MAX_ISO_ORDER}")
    if m1.order != m2.order or m1.factors != m2.factors:
        return None
    if sorted(m1.q.values()) != sorted(m2.q.values()):
        return None
    if gauss_milgram(m1)[0] != gauss_milgram(m2)[0]:
        return None
    gens = m1.generators
    cands = []
    for g in gens:
        o = m1.element_order(g)
        cands.append([y for y in m2.elements if m2.element_order(y) == o and m2.q[y] == m1.q[g]])
    chosen = []

    def extend(i):
        if i == len(gens):
            return _build_map(m1, m2, chosen)
        for y in cands[i]:
            if any(m2.b(y, z) != m1.b(gens[i], gens[j]) for j, z in enumerate(chosen)):
                continue
            chosen.append(y)
            res = extend(i + 1)
            if res is not None:
                return res
            chosen.pop()
        return None

    return extend(0)


def _build_map(m1, m2, images):
    phi = {}
    for x in m1.elements:
        y = m2.zero
        for a, img in zip(x, images):
            y = m2.add(y, m2.scale(a, img))
        phi[x] = y
    if len(set(phi.values())) != m2.order:
        return None
    if any(m2.q[phi[x]] != m1.q[x] for x in m1.elements):
        return None
    return phi
