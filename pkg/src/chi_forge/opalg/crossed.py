"""Crossed products of multimatrix algebras by finite group actions.

An element is stored as a dict ``g -> a_g`` standing for ``sum_g a_g u_g``;
missing keys are zero.  Multiplication follows
``(a u_g)(b u_h) = a psi_g(b) u_{gh}``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property

from ..exact.cyclotomic import cyclo
from .algebra import AlgAction, AlgebraError, block_sizes, center_basis

__all__ = ["CrossedProduct", "crossed_product", "MAX_CROSSED_DIM"]

MAX_CROSSED_DIM = 4096


class CrossedProduct:
    def __init__(self, action: AlgAction):
        self.action = action
        self.group = action.group
        self.base = action.algebra
        self.dim = self.group.order * self.base.dim
        if self.dim > MAX_CROSSED_DIM:
            raise AlgebraError(f"crossed product dimension {self.dim} exceeds {MAX_CROSSED_DIM}")

    def __repr__(self):
        return f"CrossedProduct({self.base!r} x |G|={self.group.order})"

    # -- elements -------------------------------------------------------------
    def embed(self, a) -> dict:
        return {0: a}

    def u(self, g: int) -> dict:
        return {g: self.base.one()}

    def element(self, a, g: int) -> dict:
        return {g: a}

    def one(self) -> dict:
        return {0: self.base.one()}

    def zero(self) -> dict:
        return {}

    def _clean(self, x: dict) -> dict:
        return {g: a for g, a in x.items() if not self.base.is_zero(a)}

    def add(self, x, y) -> dict:
        out = dict(x)
        for g, b in y.items():
            out[g] = self.base.add(out[g], b) if g in out else b
        return self._clean(out)

    def sub(self, x, y) -> dict:
        return self.add(x, self.scale(y, -1))

    def scale(self, x, c) -> dict:
        c = cyclo(c)
        if not c:
            return {}
        return {g: self.base.scale(a, c) for g, a in x.items()}

    def mul(self, x, y) -> dict:
        base = self.base
        grp = self.group
        out = {}
        for g, a in x.items():
            for h, b in y.items():
                term = base.mul(a, self.action(g, b))
                k = grp.mul(g, h)
                out[k] = base.add(out[k], term) if k in out else term
        return self._clean(out)

    def adjoint(self, x) -> dict:
        # (a u_g)* = u_{g^-1} a* = psi_{g^-1}(a*) u_{g^-1}
        out = {}
        for g, a in x.items():
            gi = self.group.inv(g)
            out[gi] = self.action(gi, self.base.adjoint(a))
        return self._clean(out)

    def equal(self, x, y) -> bool:
        return not self.sub(x, y)

    def is_zero(self, x) -> bool:
        return not self._clean(x)

    def trace(self, x):
        """tr(sum a_g u_g) = tr(a_e)."""
        return self.base.trace(x[0]) if 0 in x else cyclo(0)

    def basis(self) -> list:
        return [{g: b} for g in range(self.group.order) for b in self.base.basis()]

    def generators(self) -> list:
        gens = [{0: b} for b in self.base.generators()]
        gens += [self.u(s) for s in self.group.generator_indices]
        return gens

    def to_vector(self, x) -> list:
        out = []
        zero_vec = None
        for g in range(self.group.order):
            if g in x:
                out.extend(self.base.to_vector(x[g]))
            else:
                if zero_vec is None:
                    zero_vec = [cyclo(0)] * self.base.dim
                out.extend(zero_vec)
        return out

    def from_vector(self, v) -> dict:
        d = self.base.dim
        return self._clean({g: self.base.from_vector(v[g * d:(g + 1) * d])
                            for g in range(self.group.order)})

    # -- structure ------------------------------------------------------------
    @cached_property
    def center(self) -> list:
        return center_basis(self)

    @cached_property
    def blocks(self) -> list[int]:
        return block_sizes(self)

    def check_relations(self) -> bool:
        """u_g u_h = u_gh, u_g* = u_{g^-1}, u_g x u_g* = psi_g(x) on generators."""
        grp = self.group
        for g in range(grp.order):
            ug = self.u(g)
            if not self.equal(self.adjoint(ug), self.u(grp.inv(g))):
                return False
            for h in range(grp.order):
                if not self.equal(self.mul(ug, self.u(h)), self.u(grp.mul(g, h))):
                    return False
            for b in self.base.generators():
                lhs = self.mul(self.mul(ug, self.embed(b)), self.adjoint(ug))
                if not self.equal(lhs, self.embed(self.action(g, b))):
                    return False
        return True

    def center_valued_trace_vector(self, p) -> list:
        """(tr(p z_k))_k over the centre basis; equal vectors iff equivalent projections."""
        return [self.trace(self.mul(p, z)) for z in self.center]


def crossed_product(action: AlgAction) -> CrossedProduct:
    return CrossedProduct(action)


def averaged_projection(n: CrossedProduct, w: dict) -> dict:
    """p = (1/|G|) sum_g w_g u_g."""
    order = n.group.order
    return n._clean({g: n.base.scale(w[g], Fraction(1, order)) for g in range(order)})
