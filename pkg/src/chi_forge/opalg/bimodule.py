"""Induced bimodules H (x) (M x| G) of unitary representations, their
Pimsner-Popa bases, and the exact braiding-compatibility square.

A vector of the bimodule X_H is stored as the list ``[A_0, ..., A_{d-1}]``
of crossed-product elements, meaning ``sum_k eta_k (x) A_k`` for the
standard basis ``eta_k`` of H.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..exact.cyclotomic import cyclo
from ..exact.matrices import CycloMatrix
from ..groups import FiniteGroup
from .algebra import AlgAction, AlgebraError, MultiMatrix, amplify
from .cocycles import UCocycle, coboundary_test
from .crossed import CrossedProduct

__all__ = [
    "Representation",
    "AlgBimodule",
    "BimoduleReport",
    "induce_bimodule",
    "find_trivialization",
    "braiding_square_check",
]


class Representation:
    """A unitary representation given on generators, extended along the group's
    enumeration tree and verified to be a homomorphism."""

    def __init__(self, group: FiniteGroup, generator_matrices, *, name=None):
        mats = [m if isinstance(m, CycloMatrix) else CycloMatrix.parse(m)
                for m in generator_matrices]
        if len(mats) != len(group.generators):
            raise AlgebraError(f"{len(mats)} matrices for {len(group.generators)} generators")
        if not mats:
            dim = 1
        else:
            dim = mats[0].shape[0]
        if any(m.shape != (dim, dim) for m in mats):
            raise AlgebraError("representation matrices must all be square of the same size")
        for m in mats:
            if not m.is_unitary():
                raise AlgebraError("representation matrix is not unitary")
        self.group = group
        self.dim = dim
        self.name = name
        values = [CycloMatrix.identity(dim)]
        for i in range(1, group.order):
            s, j = group.parent[i]
            values.append(mats[s] @ values[j])
        self.values = values
        for a in range(group.order):
            for b in range(group.order):
                if values[a] @ values[b] != values[group.mul(a, b)]:
                    raise AlgebraError("matrices do not define a representation")

    def __call__(self, g: int) -> CycloMatrix:
        return self.values[g]

    @classmethod
    def trivial(cls, group: FiniteGroup, dim: int = 1) -> "Representation":
        return cls(group, [CycloMatrix.identity(dim) for _ in group.generators])

    @classmethod
    def from_json(cls, data, group: FiniteGroup) -> "Representation":
        return cls(group, data["generators"], name=data.get("name"))

    def to_json(self) -> dict:
        gens = [self.values[i].literal() for i in self.group.generator_indices]
        return {"group": self.group.to_json(), "generators": gens}


@dataclass
class AlgBimodule:
    algebra: CrossedProduct
    rep: Representation

    @property
    def dim_h(self) -> int:
        return self.rep.dim

    def vector(self, k: int, a: dict) -> list:
        out = [{} for _ in range(self.dim_h)]
        out[k] = a
        return out

    def add(self, x, y):
        return [self.algebra.add(a, b) for a, b in zip(x, y)]

    def right(self, x, c):
        n = self.algebra
        return [n.mul(a, c) for a in x]

    def left(self, c, x):
        """(sum_h b_h u_h) . x, with u_h acting on H through pi_h."""
        n = self.algebra
        d = self.dim_h
        out = [{} for _ in range(d)]
        for h, b in c.items():
            bu = {h: b}
            pi = self.rep(h)
            moved = [n.mul(bu, a) for a in x]
            for k in range(d):
                for i in range(d):
                    coef = pi[k, i]
                    if coef and moved[i]:
                        out[k] = n.add(out[k], n.scale(moved[i], coef))
        return out

    def inner(self, x, y) -> dict:
        """<x|y> = sum_i A_i* B_i, linear in the right slot."""
        n = self.algebra
        total = {}
        for a, b in zip(x, y):
            if a and b:
                total = n.add(total, n.mul(n.adjoint(a), b))
        return total

    def equal(self, x, y) -> bool:
        return all(self.algebra.equal(a, b) for a, b in zip(x, y))

    def standard_basis(self) -> list:
        return [self.vector(k, self.algebra.one()) for k in range(self.dim_h)]

    def spanning_set(self) -> list:
        return [self.vector(k, b) for k in range(self.dim_h) for b in self.algebra.basis()]

    def pp_expand(self, basis, x):
        total = [{} for _ in range(self.dim_h)]
        for b in basis:
            total = self.add(total, self.right(b, self.inner(b, x)))
        return total


@dataclass
class BimoduleReport:
    bimodule: AlgBimodule
    pimsner_popa: bool
    commuting: bool
    module_axioms: bool
    adjointable: bool
    right_dimension: int

    @property
    def ok(self) -> bool:
        return self.pimsner_popa and self.commuting and self.module_axioms and self.adjointable

    def to_json(self) -> dict:
        return {"pimsner_popa": self.pimsner_popa, "actions_commute": self.commuting,
                "module_axioms": self.module_axioms, "adjointable": self.adjointable,
                "right_dimension": self.right_dimension}


def induce_bimodule(n: CrossedProduct, rep: Representation) -> BimoduleReport:
    if rep.group is not n.group and rep.group.order != n.group.order:
        raise AlgebraError("representation is for a different group")
    x = AlgBimodule(n, rep)
    span = x.spanning_set()
    gens = n.generators()
    basis = x.standard_basis()
    pp = all(x.equal(x.pp_expand(basis, v), v) for v in span)
    commuting = all(x.equal(x.right(x.left(a, v), b), x.left(a, x.right(v, b)))
                    for a in gens for b in gens for v in span)
    axioms = all(x.equal(x.left(n.mul(a, b), v), x.left(a, x.left(b, v)))
                 for a in gens for b in gens for v in span)
    axioms = axioms and all(x.equal(x.left(n.one(), v), v) for v in span)
    adjointable = all(n.equal(x.inner(x.left(a, v), y), x.inner(v, x.left(n.adjoint(a), y)))
                      for a in gens for v in span for y in span)
    adjointable = adjointable and all(
        n.equal(x.inner(v, x.right(y, b)), n.mul(x.inner(v, y), b))
        for b in gens for v in span for y in span)
    return BimoduleReport(x, pp, commuting, axioms, adjointable, len(basis))


# ---------------------------------------------------------------------------
# trivialisations in B(H) (x) M

def to_entries(action: AlgAction, d: int, t) -> list:
    """Split an element of B(C^d) (x) M into the d x d array of its M-entries."""
    base = action.algebra
    out = [[None] * d for _ in range(d)]
    for a in range(d):
        for b in range(d):
            blocks = []
            for blk, n in zip(t, base.blocks):
                blocks.append(CycloMatrix([[blk[a * n + p, b * n + q] for q in range(n)]
                                           for p in range(n)]))
            out[a][b] = tuple(blocks)
    return out


def representation_cocycle(amplified: AlgAction, rep: Representation, base: MultiMatrix) -> UCocycle:
    """w_g = pi_g (x) 1 in B(H) (x) M."""
    alg = amplified.algebra
    vals = [tuple(rep(g).kron(CycloMatrix.identity(n)) for n in base.blocks)
            for g in range(rep.group.order)]
    return UCocycle(alg, vals)


def find_trivialization(action: AlgAction, rep: Representation):
    """A unitary t in B(H) (x) M with pi_g (x) 1 = t* psi~_g(t), or None."""
    amp = amplify(action, rep.dim)
    w = representation_cocycle(amp, rep, action.algebra)
    report = coboundary_test(amp, w)
    return report.trivialization, report


def verify_trivialization(action: AlgAction, rep: Representation, t) -> bool:
    amp = amplify(action, rep.dim)
    alg = amp.algebra
    w = representation_cocycle(amp, rep, action.algebra)
    if not alg.is_unitary(t):
        return False
    return all(alg.equal(alg.mul(alg.adjoint(t), amp(g, t)), w.values[g])
               for g in range(action.group.order))


# ---------------------------------------------------------------------------
# braiding square

@dataclass
class SquareReport:
    defect_zero: bool
    checked: int
    pp_h: bool
    pp_v: bool
    basis_central: bool

    def to_json(self) -> dict:
        return {"defect": "0" if self.defect_zero else "nonzero", "checked_vectors": self.checked,
                "pimsner_popa_h": self.pp_h, "pimsner_popa_v": self.pp_v,
                "inner_basis_central": self.basis_central}


class _Tensor:
    """Symbolic elements of X (x)_N Y as lists of (x, y) pairs."""

    def __init__(self, xm: AlgBimodule, ym: AlgBimodule):
        self.xm = xm
        self.ym = ym

    def inner(self, s, t) -> dict:
        # <x (x) y | x' (x) y'> = <y | <x|x'> . y'>
        n = self.xm.algebra
        total = {}
        for x, y in s:
            for x2, y2 in t:
                total = n.add(total, self.ym.inner(y, self.ym.left(self.xm.inner(x, x2), y2)))
        return total


def _exact_basis(x: AlgBimodule, t_entries) -> list:
    """x_i = sum_j eta_j (x) t_ij* u_1."""
    n = x.algebra
    base = n.base
    d = x.dim_h
    return [[n.embed(base.adjoint(t_entries[i][j])) for j in range(d)] for i in range(d)]


def _f2(xm: AlgBimodule, ym: AlgBimodule, pairs):
    """F^2(x (x) y) = sum_k eta_k (x) (A_k . y), an array [k][l] of N-elements."""
    n = xm.algebra
    dh, dv = xm.dim_h, ym.dim_h
    out = [[{} for _ in range(dv)] for _ in range(dh)]
    for x, y in pairs:
        for k in range(dh):
            if not x[k]:
                continue
            moved = ym.left(x[k], y)
            for l in range(dv):
                out[k][l] = n.add(out[k][l], moved[l])
    return out


def braiding_square_check(n: CrossedProduct, rep_h: Representation, rep_v: Representation,
                          t_h, t_v) -> SquareReport:
    action = n.action
    if not verify_trivialization(action, rep_h, t_h):
        raise AlgebraError("t_H does not trivialise the representation cocycle of H")
    if not verify_trivialization(action, rep_v, t_v):
        raise AlgebraError("t_V does not trivialise the representation cocycle of V")
    xh = AlgBimodule(n, rep_h)
    xv = AlgBimodule(n, rep_v)
    # exactly inner basis on the H side, standard basis xi_j (x) u_1 on the V side
    bh = _exact_basis(xh, to_entries(action, rep_h.dim, t_h))
    bv = xv.standard_basis()
    pp_h = all(xh.equal(xh.pp_expand(bh, v), v) for v in xh.spanning_set())
    pp_v = all(xv.equal(xv.pp_expand(bv, v), v) for v in xv.spanning_set())
    central = all(xh.equal(xh.left(a, b), xh.right(b, a)) for a in n.generators() for b in bh)
    hv = _Tensor(xh, xv)
    checked = 0
    ok = True
    for xv_vec in xh.standard_basis():
        for yv_vec in xv.spanning_set():
            z = [(xv_vec, yv_vec)]
            # u(z) = sum_{i,j} (y_j (x) x_i) . <x_i (x) y_j | z>
            swapped = []
            for xi in bh:
                for yj in bv:
                    c = hv.inner([(xi, yj)], z)
                    if c:
                        swapped.append((yj, xh.right(xi, c)))
            lhs = _f2(xv, xh, swapped)
            rhs = _f2(xh, xv, z)
            flipped = [[rhs[k][l] for k in range(xh.dim_h)] for l in range(xv.dim_h)]
            checked += 1
            if not all(n.equal(a, b) for ra, rb in zip(lhs, flipped) for a, b in zip(ra, rb)):
                ok = False
    if not ok:
        raise AssertionError("braiding square has a nonzero defect")
    return SquareReport(ok, checked, pp_h, pp_v, central)
