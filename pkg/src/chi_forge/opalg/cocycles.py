"""Unitary 1-cocycles for finite group actions on multimatrix algebras.

A cocycle is a family of unitaries with ``w_g psi_g(w_h) = w_gh``.  It is a
coboundary when ``w_g = t* psi_g(t)`` for a unitary ``t``.  Three
independent decisions are offered and cross-checked:

(a) the trace criterion: on every orbit of blocks, the section of the
    inner part of the stabiliser satisfies tr(w_h v_h) = tr(v_h);
(b) the averaged projections p_w and p_1 of the crossed product have the
    same centre-valued trace;
(c) a unitary t is constructed directly and verified.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from ..exact.cyclotomic import cyclo, sqrt_rational, zeta
from ..exact.matrices import CycloMatrix, nullspace
from ..groups import FiniteGroup, Subgroup, TwoCochain, two_cocycle_verify
from .algebra import (
    AlgAction,
    AlgebraError,
    Automorphism,
    MultiMatrix,
    NormalizationError,
    inner_test,
)
from .crossed import CrossedProduct, averaged_projection

__all__ = [
    "CocycleError",
    "RouteDisagreement",
    "UCocycle",
    "CocycleReport",
    "CharacteristicInvariant",
    "CoboundaryReport",
    "cocycle_check",
    "characteristic_invariant",
    "coboundary_test",
]

LATTICE_LIMIT = 6


class CocycleError(ValueError):
    pass


class RouteDisagreement(AssertionError):
    """The coboundary routes returned different verdicts: an implementation fault."""


@dataclass
class UCocycle:
    algebra: MultiMatrix
    values: list  # indexed by group element

    @classmethod
    def scalar(cls, algebra: MultiMatrix, phases) -> "UCocycle":
        return cls(algebra, [algebra.scalar(c) for c in phases])

    @classmethod
    def trivial(cls, algebra: MultiMatrix, order: int) -> "UCocycle":
        return cls(algebra, [algebra.one() for _ in range(order)])

    @classmethod
    def from_json(cls, data, algebra: MultiMatrix, group: FiniteGroup) -> "UCocycle":
        raw = data.get("values")
        if not isinstance(raw, dict):
            raise CocycleError("cocycle file needs a 'values' object")
        vals = [None] * group.order
        for key, v in raw.items():
            g = int(key)
            if not 0 <= g < group.order:
                raise CocycleError(f"group element {g} out of range")
            vals[g] = algebra.parse_element(v)
        if vals[0] is None:
            vals[0] = algebra.one()
        missing = [g for g, v in enumerate(vals) if v is None]
        if missing:
            raise CocycleError(f"cocycle value missing for element {missing[0]}")
        return cls(algebra, vals)

    def to_json(self) -> dict:
        return {"values": {str(g): self.algebra.element_literal(v)
                           for g, v in enumerate(self.values)}}


@dataclass
class CocycleReport:
    valid: bool
    projection: dict | None
    failures: list = field(default_factory=list)


def cocycle_check(action: AlgAction, w: UCocycle, n: CrossedProduct | None = None) -> CocycleReport:
    alg = action.algebra
    grp = action.group
    if len(w.values) != grp.order:
        raise CocycleError("cocycle must have one value per group element")
    for g, v in enumerate(w.values):
        if not alg.is_unitary(v):
            raise CocycleError(f"w_{g} is not unitary")
    failures = []
    for g in range(grp.order):
        for h in range(grp.order):
            lhs = alg.mul(w.values[g], action(g, w.values[h]))
            if not alg.equal(lhs, w.values[grp.mul(g, h)]):
                failures.append((g, h))
    if failures:
        return CocycleReport(False, None, failures)
    n = n or CrossedProduct(action)
    p = averaged_projection(n, w.values)
    if not n.equal(p, n.adjoint(p)):
        raise AssertionError("averaged projection is not self-adjoint")
    if not n.equal(n.mul(p, p), p):
        raise AssertionError("averaged projection is not idempotent")
    if n.trace(p) != Fraction(1, grp.order):
        raise AssertionError("averaged projection has the wrong trace")
    return CocycleReport(True, p, [])


# ---------------------------------------------------------------------------
# characteristic invariant

@dataclass
class CharacteristicInvariant:
    inner_part: list[int]
    subgroup: FiniteGroup
    embedding: list[int]
    section: dict  # G index -> unitary
    mu: tuple  # one TwoCochain on ``subgroup`` per block
    lam: dict  # (g, h) -> tuple of Q/Z values per block

    @property
    def mu_single(self) -> TwoCochain:
        if len(self.mu) != 1:
            raise ValueError("mu has one cochain per block; algebra is not a factor")
        return self.mu[0]

    def to_json(self) -> dict:
        return {
            "inner_part": self.inner_part,
            "mu": [{"modulus": c.modulus, "table": c.table.tolist()} for c in self.mu],
            "lambda": {f"{g},{h}": [str(v) for v in vals] for (g, h), vals in self.lam.items()},
        }


def _block_scalar(mat: CycloMatrix):
    n = mat.shape[0]
    c = mat[0, 0]
    if mat != CycloMatrix.identity(n).scale(c):
        return None
    return c


def _central_phase(alg: MultiMatrix, x, what: str):
    out = []
    for a in x:
        c = _block_scalar(a)
        if c is None:
            raise CocycleError(f"{what} is not central")
        r = c.as_root_of_unity()
        if r is None:
            raise CocycleError(f"{what} value {c.literal()} is not a root of unity")
        out.append(r)
    return tuple(out)


def characteristic_invariant(action: AlgAction, anchor: str = "first") -> CharacteristicInvariant:
    alg = action.algebra
    grp = action.group
    section = {}
    for g in range(grp.order):
        res = inner_test(alg, action.maps[g], anchor)
        if res.inner:
            section[g] = res.unitary
    section[0] = alg.one()
    inner = sorted(section)
    sub = Subgroup(grp, frozenset(inner))
    if not sub.is_normal():
        raise AssertionError("inner part is not a normal subgroup")
    sgrp, embed = sub.as_group()
    r = len(alg.blocks)
    phases = [[[None] * sgrp.order for _ in range(sgrp.order)] for _ in range(r)]
    for a in range(sgrp.order):
        for b in range(sgrp.order):
            h, k, hk = embed[a], embed[b], embed[sgrp.mul(a, b)]
            x = alg.mul(alg.mul(section[h], section[k]), alg.adjoint(section[hk]))
            vals = _central_phase(alg, x, "mu")
            for blk in range(r):
                phases[blk][a][b] = vals[blk]
    mu = tuple(TwoCochain.from_phases(ph) for ph in phases)
    for c in mu:
        if not two_cocycle_verify(sgrp, c):
            raise AssertionError("mu fails the cocycle identity")
    lam = {}
    for g in range(grp.order):
        gi = grp.inv(g)
        for h in inner:
            conj = grp.mul(grp.mul(gi, h), g)
            x = alg.mul(action(g, section[conj]), alg.adjoint(section[h]))
            lam[(g, h)] = _central_phase(alg, x, "lambda")
    return CharacteristicInvariant(inner, sgrp, embed, section, mu, lam)


# ---------------------------------------------------------------------------
# coboundary test

@dataclass
class CoboundaryReport:
    trivialization: tuple | None
    routes: dict  # name -> bool (True = coboundary)

    @property
    def is_coboundary(self) -> bool:
        return all(self.routes.values())

    def to_text(self, algebra: MultiMatrix | None = None) -> str:
        names = ",".join(sorted(self.routes))
        if not self.is_coboundary:
            return f"NONE (routes {names} agree)"
        if self.trivialization is None:
            return f"COBOUNDARY (routes {names} agree)"
        return f"COBOUNDARY t={element_text(self.trivialization)} (routes {names} agree)"


def element_text(x) -> str:
    """Compact text for a multimatrix element: diag(...) when every block is 1x1."""
    if all(m.shape == (1, 1) for m in x):
        return "diag(" + ",".join(str(m[0, 0]) for m in x) + ")"
    parts = []
    for m in x:
        rows = ["[" + ",".join(str(m[i, j]) for j in range(m.shape[1])) + "]"
                for i in range(m.shape[0])]
        parts.append("[" + ",".join(rows) + "]")
    return " + ".join(parts)


def _orbit_data(action: AlgAction, block: int):
    """Stabiliser of ``block`` as a standalone group, with the restricted action
    on the factor M_{n_block}."""
    grp = action.group
    stab = Subgroup(grp, frozenset(action.stabilizer(block)))
    sgrp, embed = stab.as_group()
    n = action.algebra.blocks[block]
    factor = MultiMatrix([n])
    gens = [Automorphism.inner(factor, (action.maps[embed[sgrp.generator_indices[i]]]
                                        .unitaries[block],))
            for i in range(len(sgrp.generators))]
    sub_action = AlgAction(sgrp, factor, gens)
    return sgrp, embed, factor, sub_action


def route_trace_criterion(action: AlgAction, w: UCocycle) -> bool:
    for orbit in action.block_orbits():
        i = orbit[0]
        sgrp, embed, factor, sub_action = _orbit_data(action, i)
        inv = characteristic_invariant(sub_action)
        for a in inv.inner_part:
            v = inv.section[a][0]
            wv = w.values[embed[a]][i] @ v
            if wv.trace() != v.trace():
                return False
    return True


def route_projection_equivalence(n: CrossedProduct, w: UCocycle) -> bool:
    p_w = averaged_projection(n, w.values)
    p_1 = averaged_projection(n, [n.base.one()] * n.group.order)
    return n.center_valued_trace_vector(p_w) == n.center_valued_trace_vector(p_1)


_PHASES = [cyclo(0), cyclo(1), cyclo(-1), zeta(4, 1), zeta(4, 3)]


def _scaled_unitary(x: CycloMatrix):
    """x / sqrt(c) when x x* = c 1 with c a positive rational, else None."""
    n = x.shape[0]
    s = x @ x.adjoint()
    c = s[0, 0]
    if not c or s != CycloMatrix.identity(n).scale(c):
        return None
    if not c.is_rational() or c.to_fraction() <= 0:
        return None
    return x.scale(sqrt_rational(c.to_fraction()).inverse())


def _partial_isometry_scale(x: CycloMatrix):
    """1/sqrt(c) when x x* x = c x for a positive rational c, else None."""
    if x.is_zero():
        return None
    y = x @ x.adjoint() @ x
    n = x.shape[0]
    pos = next((i, j) for i in range(n) for j in range(n) if x[i, j])
    c = y[pos] * x[pos].inverse()
    if not c.is_rational() or c.to_fraction() <= 0 or y != x.scale(c):
        return None
    return sqrt_rational(c.to_fraction()).inverse()


def _greedy_unitary(pieces):
    """Sum scaled partial isometries with mutually orthogonal ranges and domains."""
    total = None
    for p in pieces:
        k = _partial_isometry_scale(p)
        if k is None:
            continue
        v = p.scale(k)
        if total is None:
            total = v
        elif (total.adjoint() @ v).is_zero() and (total @ v.adjoint()).is_zero():
            total = total + v
        else:
            continue
        if total.is_unitary():
            return total
    return None


def _factor_trivialization(sgrp, embed, block, action: AlgAction, w: UCocycle):
    """Unitary t_i on block i with U_s t_i U_s* = t_i w_s,i for s in the stabiliser."""
    n = action.algebra.blocks[block]
    units = [(action.maps[embed[s]].unitaries[block], w.values[embed[s]][block])
             for s in range(sgrp.order)]
    # solution space X
    rows = []
    size = n * n
    for u, ws in units:
        cols = []
        for r in range(size):
            e = CycloMatrix.unit(n, r // n, r % n)
            diff = u @ e @ u.adjoint() - e @ ws
            cols.append(diff.flat())
        for k in range(size):
            row = [cols[c][k] for c in range(size)]
            if any(row):
                rows.append(row)
    space = nullspace(rows, size) if rows else [
        [cyclo(1) if i == j else cyclo(0) for i in range(size)] for j in range(size)]
    if not space:
        return None
    basis = [CycloMatrix([v[i * n:(i + 1) * n] for i in range(n)]) for v in space]
    # averaged candidates t_y = sum_s psi_s(y) w_s*
    cands = []
    for r in range(size):
        y = CycloMatrix.unit(n, r // n, r % n)
        t = CycloMatrix.zeros(n, n)
        for u, ws in units:
            t = t + u @ y @ u.adjoint() @ ws.adjoint()
        if not t.is_zero():
            cands.append(t)
    for t in cands:
        res = _scaled_unitary(t)
        if res is not None:
            return res
    for a in range(len(cands)):
        for b in range(a + 1, len(cands)):
            for ph in _PHASES[1:]:
                res = _scaled_unitary(cands[a] + cands[b].scale(ph))
                if res is not None:
                    return res
    res = _greedy_unitary(cands + basis)
    if res is not None:
        return res
    if len(basis) <= LATTICE_LIMIT:
        for coeffs in product(_PHASES, repeat=len(basis)):
            if not any(coeffs):
                continue
            x = CycloMatrix.zeros(n, n)
            for c, b in zip(coeffs, basis):
                if c:
                    x = x + b.scale(c)
            res = _scaled_unitary(x)
            if res is not None:
                return res
    return None


def route_direct(action: AlgAction, w: UCocycle):
    alg = action.algebra
    grp = action.group
    t = [None] * len(alg.blocks)
    for orbit in action.block_orbits():
        i = orbit[0]
        sgrp, embed, _, _ = _orbit_data(action, i)
        ti = _factor_trivialization(sgrp, embed, i, action, w)
        if ti is None:
            return None
        t[i] = ti
        for j in orbit[1:]:
            g = next(g for g in range(grp.order) if action.maps[g].perm[i] == j)
            u = action.maps[g].unitaries[j]
            t[j] = u @ ti @ u.adjoint() @ w.values[g][j].adjoint()
    t = tuple(t)
    if not alg.is_unitary(t):
        raise AssertionError("constructed trivialisation is not unitary")
    for g in range(grp.order):
        if not alg.equal(alg.mul(alg.adjoint(t), action(g, t)), w.values[g]):
            raise AssertionError("constructed trivialisation fails w_g = t* psi_g(t)")
    return t


def coboundary_test(action: AlgAction, w: UCocycle, n: CrossedProduct | None = None,
                    routes=("a", "b", "c")) -> CoboundaryReport:
    n = n or CrossedProduct(action)
    rep = cocycle_check(action, w, n)
    if not rep.valid:
        raise CocycleError("input is not a cocycle")
    verdicts = {}
    t = None
    if "a" in routes:
        verdicts["a"] = route_trace_criterion(action, w)
    if "b" in routes:
        verdicts["b"] = route_projection_equivalence(n, w)
    if "c" in routes:
        try:
            t = route_direct(action, w)
        except NormalizationError:
            t = None
        verdicts["c"] = t is not None
    if len(set(verdicts.values())) > 1:
        raise RouteDisagreement(f"coboundary routes disagree: {verdicts}")
    return CoboundaryReport(t, verdicts)
