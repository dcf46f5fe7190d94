"""The catalog-wide verification suite run by ``chi-forge verify-all``.

Each check returns a :class:`CheckResult`; a check passes only when every
instance it sweeps is exact.  Wall-clock limits are part of the verdict for
the checks that carry one.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product

from .catalog import Catalog
from .exact.cyclotomic import cyclo, zeta
from .exact.matrices import rank as exact_rank
from .groups import abelianization_and_dual, direct_product, quotient, two_coboundary_test
from .metric import (condense, enumerate_isotropic, equivariantize, gauss_milgram,
                     metric_iso_test, pointed_braided, pointed_ses_check, radical_and_muger)
from .repcat import (BraidedFusionData, character_table, deligne_product, fusion_coefficients,
                     fusion_ring_isomorphic, group_ses_check, modularity_test)

__all__ = ["CheckResult", "CHECKS", "run_checks", "SkipCheck"]


class SkipCheck(Exception):
    """The catalog lacks the entries a check is about."""


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    limit: float | None = None
    failures: list = field(default_factory=list)
    skipped: bool = False

    def line(self) -> str:
        status = "SKIP" if self.skipped else ("PASS" if self.passed else "FAIL")
        limit = f" (limit {self.limit:.0f}s)" if self.limit else ""
        return f"[{status}] {self.number:>2}. {self.title}: {self.detail} [{self.seconds:.2f}s{limit}]"

    def to_json(self) -> dict:
        return {"check": self.number, "title": self.title, "passed": self.passed,
                "detail": self.detail, "seconds": round(self.seconds, 3),
                "limit_seconds": self.limit, "skipped": self.skipped,
                "failures": [str(f) for f in self.failures]}


# ---------------------------------------------------------------------------

def check_character_tables(cat: Catalog):
    failures = []
    count = 0
    for name, g in cat.groups():
        if g.order > 360:
            continue
        try:
            t = character_table(g)
            t.verify()
        except Exception as exc:  # noqa: BLE001 - any failure is recorded
            failures.append(f"{name}: {exc}")
            continue
        if sum(d * d for d in t.dims) != g.order:
            failures.append(f"{name}: degree sum")
        count += 1
    return failures, f"{count} tables exact"


def check_a5_a6(cat: Catalog):
    failures = []
    if any(cat.find(n, "group") is None for n in ("A5", "A6", "C2", "C6")):
        raise SkipCheck("catalog lacks A5, A6, C2 or C6")
    a5, a6 = cat.group("A5"), cat.group("A6")
    t5, t6 = character_table(a5), character_table(a6)
    for name, g in (("A5", a5), ("A6", a6)):
        if abelianization_and_dual(g)[0]:
            failures.append(f"dual of {name} is not trivial")
    r5, r6 = fusion_coefficients(t5), fusion_coefficients(t6)
    if (r5.rank, r6.rank) != (5, 7):
        failures.append(f"ranks {r5.rank}, {r6.rank}")
    if fusion_ring_isomorphic(r5, r6) is not None:
        failures.append("Rep(A5) and Rep(A6) rings isomorphic")
    for cname in ("C2", "C6"):
        c = cat.group(cname)
        tc = character_table(c)
        duals = []
        for g in (a5, a6):
            prod_group = direct_product(c, g)
            duals.append(abelianization_and_dual(prod_group)[0])
        want = [c.order]
        if duals[0] != want or duals[1] != want:
            failures.append(f"{cname}: duals {duals}")
        p5 = fusion_coefficients(deligne_product(tc, t5))
        p6 = fusion_coefficients(deligne_product(tc, t6))
        if fusion_ring_isomorphic(p5, p6) is not None:
            failures.append(f"{cname}: product rings isomorphic")
    return failures, "duals trivial / cyclic, rings distinct (ranks 5 vs 7)"


def check_nonmodularity(cat: Catalog):
    failures = []
    nonabelian = 0
    for name, g in cat.groups():
        if g.is_abelian() or g.order > 360:
            continue
        rep = modularity_test(BraidedFusionData.from_table(character_table(g)))
        nonabelian += 1
        if rep.s_rank != 1 or rep.verdict != "SYMMETRIC":
            failures.append(f"{name}: {rep.to_text()}")
    metrics = 0
    for name, m in cat.metrics():
        if m.order > 16:
            continue
        metrics += 1
        verdict = modularity_test(pointed_braided(m)).verdict
        if (verdict == "MODULAR") != radical_and_muger(m).nondegenerate:
            failures.append(f"{name}: {verdict} against radical")
    if metrics < 30:
        failures.append(f"only {metrics} metric groups with |A| <= 16")
    return failures, f"{nonabelian} nonabelian groups s-rank 1, {metrics} metric groups"


def check_gauss_milgram(cat: Catalog):
    failures = []
    count = 0
    sig = {}
    for name, m in cat.metrics():
        if not radical_and_muger(m).nondegenerate:
            continue
        try:
            total, sigma = gauss_milgram(m)
        except ArithmeticError as exc:
            failures.append(f"{name}: {exc}")
            continue
        count += 1
        if total * total.conjugate() != cyclo(m.order) or sigma is None:
            failures.append(f"{name}: modulus or signature")
        sig[name] = sigma
    if cat.find("semion", "metric") is not None and sig.get("semion") != 1:
        failures.append(f"semion signature {sig.get('semion')}")
    if cat.find("toric", "metric") is not None and sig.get("toric") != 0:
        failures.append(f"toric code signature {sig.get('toric')}")
    return failures, f"{count} nondegenerate forms, semion 1, toric 0"


def _tannakian_instances(cat: Catalog, max_order=16):
    for name, m in cat.metrics():
        if m.order > max_order:
            continue
        for h in enumerate_isotropic(m, require_transparent=True):
            yield name, m, h


def check_round_trip(cat: Catalog):
    failures = []
    count = 0
    for name, m, h in _tannakian_instances(cat):
        theory = condense(m, h)
        tag = f"{name}/H={sorted(h.members)}"
        if not theory.check_grading_multiplicative():
            failures.append(f"{tag}: grading not multiplicative")
        if len(theory.objects) * len(h) != m.order:
            failures.append(f"{tag}: {len(theory.objects)} simples")
        res = equivariantize(theory)
        if res.metric is None or metric_iso_test(res.metric, m) is None:
            failures.append(f"{tag}: round trip not isometric")
        count += 1
    return failures, f"{count} (A, q, H) instances isometric"


def check_exact_sequence(cat: Catalog):
    failures = []
    count = 0
    for name, m, h in _tannakian_instances(cat):
        rep = pointed_ses_check(m, h)
        count += 1
        if not rep.exact:
            failures.append(f"{name}/H={sorted(h.members)}: not exact")
    q8_witness = False
    groups = 0
    for name, g, n in cat.ses_instances():
        rep = group_ses_check(g, n)
        groups += 1
        if not rep.exact:
            failures.append(f"{name}: not exact")
        if name == "q8-center":
            q = quotient(g, n)[0]
            for ev in rep.evidence:
                if ev.invariant and not ev.liftable and ev.obstruction is not None \
                        and two_coboundary_test(q, ev.obstruction) is None:
                    q8_witness = True
    has_q8 = cat.find("q8-center", "ses-instance") is not None
    if has_q8 and not q8_witness:
        failures.append("Q8: no invariant unliftable character")
    tail = ", Q8 obstruction nontrivial" if has_q8 else ""
    return failures, f"{count} pointed + {groups} group instances exact{tail}"


def check_unit_structures(cat: Catalog):
    failures = []
    count = 0
    for name, m, h in _tannakian_instances(cat):
        theory = condense(m, h)
        res = equivariantize(theory)
        count += 1
        if res.unit_structures != len(theory.grading_group):
            failures.append(f"{name}/H={sorted(h.members)}: {res.unit_structures} structures")
    return failures, f"{count} condensed theories"


# -- operator algebra checks -------------------------------------------------

def _permutation_actions(group, blocks):
    """Every action of ``group`` permuting equal-size blocks with identity unitaries."""
    from .exact.matrices import CycloMatrix
    from .opalg.algebra import AlgAction, AlgebraError, Automorphism, MultiMatrix
    from itertools import permutations
    alg = MultiMatrix(list(blocks))
    perms = [p for p in permutations(range(len(blocks)))
             if all(blocks[p[i]] == blocks[i] for i in range(len(blocks)))]
    units = tuple(CycloMatrix.identity(n) for n in blocks)
    out = []
    for choice in product(perms, repeat=len(group.generators)):
        maps = [Automorphism(alg, p, units) for p in choice]
        try:
            out.append(AlgAction(group, alg, maps))
        except AlgebraError:
            continue
    return out


def check_cocycles(cat: Catalog):
    from .opalg.cocycles import RouteDisagreement, UCocycle, coboundary_test, cocycle_check
    failures = []
    algebras = sorted({tuple(a.algebra.blocks) for _, a in cat.actions()
                       if len(a.algebra.blocks) <= 3 and max(a.algebra.blocks) <= 2})
    groups = [(n, g) for n, g in cat.groups() if g.order <= 4]
    instances = []
    for gname, g in groups:
        for blocks in algebras:
            for act in _permutation_actions(g, blocks):
                instances.append((f"{gname} on {list(blocks)}", act))
    for aname, act in cat.actions():
        if act.group.order <= 4 and len(act.algebra.blocks) <= 3 and max(act.algebra.blocks) <= 2:
            instances.append((aname, act))
    swept = 0
    for tag, act in instances:
        _, dual = abelianization_and_dual(act.group)
        for chi in dual.characters():
            w = UCocycle.scalar(act.algebra, [zeta(v.denominator, v.numerator) for v in chi])
            try:
                cocycle_check(act, w)
                coboundary_test(act, w)
            except RouteDisagreement as exc:
                failures.append(f"{tag} chi={chi}: {exc}")
            except AssertionError as exc:
                failures.append(f"{tag} chi={chi}: projection law {exc}")
            swept += 1
    # the named fixtures
    fixtures = {name: (action, data) for name, action, data in cat.cocycles()}
    if "minus-one" in fixtures:
        act = cat.action(fixtures["minus-one"][0])
        w = UCocycle.from_json(fixtures["minus-one"][1], act.algebra, act.group)
        rep = coboundary_test(act, w)
        if rep.is_coboundary:
            failures.append("trivial action with -1 reported a coboundary")
    if "flip-minus-one" in fixtures:
        act = cat.action(fixtures["flip-minus-one"][0])
        alg = act.algebra
        w = UCocycle.from_json(fixtures["flip-minus-one"][1], alg, act.group)
        rep = coboundary_test(act, w)
        want = alg.parse_element(["1", "-1"])
        if not rep.is_coboundary or rep.trivialization is None \
                or not alg.equal(rep.trivialization, want):
            failures.append("flip with -1 did not give t = diag(1, -1)")
    for name, (action, data) in fixtures.items():
        act = cat.action(action)
        w = UCocycle.from_json(data, act.algebra, act.group)
        if not cocycle_check(act, w).valid:
            failures.append(f"fixture {name} is not a cocycle")
    return failures, f"{swept} scalar cocycles over {len(instances)} actions, routes agree"


def _brute_center_dim(n) -> int:
    """Dimension of {x : xb = bx for every basis element b}, by one big exact rank."""
    basis = n.basis()
    dim = n.dim
    rows = []
    for a in basis:
        cols = [n.to_vector(n.sub(n.mul(b, a), n.mul(a, b))) for b in basis]
        for r in range(dim):
            row = [cols[c][r] for c in range(dim)]
            if any(row):
                rows.append(row)
    return dim - (exact_rank(rows) if rows else 0)


def check_crossed_products(cat: Catalog):
    from .opalg.cocycles import characteristic_invariant
    from .opalg.crossed import CrossedProduct
    failures = []
    count = 0
    for name, act in cat.actions():
        n = CrossedProduct(act)
        count += 1
        if n.dim != act.group.order * act.algebra.dim:
            failures.append(f"{name}: dimension")
        if not n.check_relations():
            failures.append(f"{name}: covariance relations")
        if len(n.center) != _brute_center_dim(n):
            failures.append(f"{name}: centre dimension {len(n.center)}")
        if sum(b * b for b in n.blocks) != n.dim:
            failures.append(f"{name}: block sizes {n.blocks}")
        if name == "c2-flip" and n.blocks != [2]:
            failures.append(f"flip gives {n.blocks}")
        if name == "m2-adz" and n.blocks != [2, 2]:
            failures.append(f"Ad sigma_z gives {n.blocks}")
        if name == "pauli":
            inv = characteristic_invariant(act)
            if two_coboundary_test(inv.subgroup, inv.mu_single) is not None:
                failures.append("Pauli mu class is trivial")
    return failures, f"{count} actions, centres match brute force"


def check_bimodules(cat: Catalog):
    from .opalg.bimodule import braiding_square_check, find_trivialization, induce_bimodule
    from .opalg.crossed import CrossedProduct
    failures = []
    reps = cat.representations()
    pp = 0
    squares = 0
    flip_instance = False
    for aname, act in cat.actions():
        gname = act.group.name
        mine = [(rn, r) for rn, rg, r in reps if rg == gname]
        if not mine:
            continue
        n = CrossedProduct(act)
        trivs = {}
        for rn, r in mine:
            r = r if r.group is act.group else _rebind(r, act.group)
            if not induce_bimodule(n, r).ok:
                failures.append(f"{aname}/{rn}: bimodule checks")
            pp += 1
            t, _ = find_trivialization(act, r)
            if t is not None:
                trivs[rn] = (r, t)
        for (hn, (rh, th)), (vn, (rv, tv)) in product(trivs.items(), repeat=2):
            try:
                braiding_square_check(n, rh, rv, th, tv)
            except AssertionError as exc:
                failures.append(f"{aname}/{hn},{vn}: {exc}")
            squares += 1
            if aname == "c2-flip" and hn == vn == "c2-sign":
                want = n.base.parse_element(["1", "-1"])
                if n.base.equal(th, want):
                    flip_instance = True
    wanted = cat.find("c2-flip", "algebra-action") and cat.find("c2-sign", "representation")
    if wanted and not flip_instance:
        failures.append("flip/sign/sign instance with t = diag(1,-1) missing")
    return failures, f"{pp} Pimsner-Popa bases, {squares} squares with zero defect"


def _rebind(rep, group):
    from .opalg.bimodule import Representation
    return Representation(group, [rep(i) for i in rep.group.generator_indices], name=rep.name)


CHECKS = [
    (1, "character tables", check_character_tables, 60.0),
    (2, "A5/A6 duals and fusion rings", check_a5_a6, 120.0),
    (3, "non-modularity of Rep(G), pointed modularity", check_nonmodularity, None),
    (4, "Gauss-Milgram", check_gauss_milgram, None),
    (5, "condense/equivariantize round trip", check_round_trip, 60.0),
    (6, "invertible-object exact sequence", check_exact_sequence, None),
    (7, "equivariant structures on the unit", check_unit_structures, None),
    (8, "cocycle and coboundary routes", check_cocycles, None),
    (9, "crossed products", check_crossed_products, None),
    (10, "bimodules and braiding square", check_bimodules, None),
]


def run_check(number: int, cat: Catalog) -> CheckResult:
    for num, title, fn, limit in CHECKS:
        if num == number:
            start = time.perf_counter()
            try:
                failures, detail = fn(cat)
            except SkipCheck as exc:
                return CheckResult(num, title, True, str(exc), time.perf_counter() - start,
                                   limit, [], skipped=True)
            except Exception as exc:  # noqa: BLE001 - reported as a failed check
                failures, detail = [f"{type(exc).__name__}: {exc}"], "raised"
            secs = time.perf_counter() - start
            if limit is not None and secs > limit:
                failures.append(f"took {secs:.1f}s, limit {limit:.0f}s")
            return CheckResult(num, title, not failures,
                               detail if not failures else "; ".join(map(str, failures[:5])),
                               secs, limit, failures)
    raise KeyError(number)


def run_checks(cat: Catalog, numbers=None) -> list[CheckResult]:
    numbers = numbers or [c[0] for c in CHECKS]
    return [run_check(k, cat) for k in numbers]
