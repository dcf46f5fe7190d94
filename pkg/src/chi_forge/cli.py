"""Command-line front end: ``chi-forge <command> ...``.

Exit codes: 0 success or positive verdict, 1 negative verdict, 2 input
error, 3 internal fault.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .catalog import Catalog, CatalogError, group_from_json, subgroup_from_json
from .groups import GroupError, abelianization_and_dual, quotient
from .metric import (MetricError, MetricGroup, MetricValidationError, condense,
                     enumerate_isotropic, equivariantize, gauss_milgram, make_isotropic,
                     metric_iso_test, pointed_braided, pointed_ses_check, radical_and_muger)
from .opalg.algebra import NormalizationError
from .repcat import (BraidedFusionData, FusionRing, character_table, deligne_product,
                     fusion_coefficients, fusion_ring_isomorphic, group_ses_check, modularity_test,
                     restrict_quotient)

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_FAULT = 0, 1, 2, 3


class InputError(Exception):
    """Bad file, unknown name, or malformed payload."""


class Outcome:
    def __init__(self, text: str, data, code: int = EXIT_OK):
        self.text = text
        self.data = data
        self.code = code


# ---------------------------------------------------------------------------
# input resolution

def _catalog(args) -> Catalog:
    if getattr(args, "_catalog", None) is None:
        args._catalog = Catalog()
    return args._catalog


def _load_json(ref: str, cat: Catalog | None, kind: str | None):
    """Payload from an existing file, an inline JSON object, or a catalog name."""
    path = Path(ref)
    if path.is_file():
        try:
            return json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise InputError(f"{ref}: not valid JSON ({exc})") from exc
    if ref.lstrip().startswith(("{", "[")):
        try:
            return json.loads(ref)
        except json.JSONDecodeError as exc:
            raise InputError(f"inline JSON does not parse: {exc}") from exc
    if cat is not None:
        entry = cat.find(ref, kind) or cat.find(Path(ref).stem, kind)
        if entry is None and kind is not None:
            entry = cat.find(ref) or cat.find(Path(ref).stem)
        if entry is not None:
            return entry.payload()
    raise InputError(f"no file or catalog {kind or 'entry'} named {ref!r}")


def _group(args, ref):
    data = _load_json(ref, _catalog(args), "group")
    if isinstance(data, dict) and "degree" not in data and isinstance(data.get("group"), dict):
        data = data["group"]  # an exported table or action carries its group
    if isinstance(data, dict) and isinstance(data.get("group"), str):
        return _catalog(args).group(data["group"])
    return group_from_json(data, Path(ref).stem)


def _subgroup(args, g, ref):
    data = _load_json(ref, _catalog(args), "ses-instance")
    if "normal" in data:
        data = data["normal"]
    return subgroup_from_json(g, data)


def _metric(args, ref) -> MetricGroup:
    data = _load_json(ref, _catalog(args), "metric")
    if "metric" in data and "q" not in data:
        data = data["metric"]
    return MetricGroup.from_json(data)


def _metric_subgroup(m: MetricGroup, ref: str):
    """Generators as ``"1,0;0,1"``, or JSON with "members"/"generators"."""
    path = Path(ref)
    if path.is_file() or ref.lstrip().startswith("{"):
        data = json.loads(path.read_text()) if path.is_file() else json.loads(ref)
        elems = data.get("generators", data.get("members"))
        if elems is None:
            raise InputError("subgroup needs 'generators' or 'members'")
        gens = [tuple(int(a) for a in e) for e in elems]
    else:
        try:
            gens = [tuple(int(a) for a in part.split(",")) for part in ref.split(";") if part.strip()]
        except ValueError as exc:
            raise InputError(f"cannot parse subgroup {ref!r}") from exc
    for x in gens:
        if len(x) != len(m.factors):
            raise InputError(f"element {x} has the wrong number of coordinates")
    gens = [tuple(a % d for a, d in zip(x, m.factors)) for x in gens]
    return make_isotropic(m, gens)


def _action(args, ref):
    cat = _catalog(args)
    data = _load_json(ref, cat, "algebra-action")
    grp = data.get("group")
    g = cat.group(grp) if isinstance(grp, str) else group_from_json(grp)
    from .opalg.algebra import AlgAction
    return AlgAction.from_json(data, g)


def _rep(args, ref, group):
    from .opalg.bimodule import Representation
    data = _load_json(ref, _catalog(args), "representation")
    return Representation(group, data["generators"], name=data.get("name"))


def _cocycle(args, ref, action):
    from .opalg.cocycles import UCocycle
    data = _load_json(ref, _catalog(args), "cocycle")
    return UCocycle.from_json(data, action.algebra, action.group)


def _ring(args, ref) -> FusionRing:
    if ref.startswith("rep-"):
        return fusion_coefficients(character_table(_group(args, ref[4:])))
    data = _load_json(ref, _catalog(args), None)
    if "fusion" in data and "labels" in data:
        return FusionRing.from_json(data)
    if "invariant_factors" in data:
        return pointed_braided(MetricGroup.from_json(data)).ring
    return fusion_coefficients(character_table(_group(args, ref)))


def _factors_text(factors) -> str:
    return "trivial" if not factors else " x ".join(f"Z/{d}" for d in factors)


# ---------------------------------------------------------------------------
# group and representation-category commands

def cmd_chartable(args):
    t = character_table(_group(args, args.group))
    t.verify()
    return Outcome(t.to_text(), t.to_json())


def cmd_fusion(args):
    ring = fusion_coefficients(character_table(_group(args, args.group)))
    ring.verify()
    return Outcome(ring.to_text(), ring.to_json())


def cmd_dual(args):
    factors, dual = abelianization_and_dual(_group(args, args.group))
    return Outcome(_factors_text(factors), {"invariant_factors": factors, "order": len(dual)})


def cmd_restrict(args):
    g = _group(args, args.group)
    n = _subgroup(args, g, args.normal)
    if not n.is_normal():
        raise InputError("subgroup is not normal")
    q, _ = quotient(g, n)
    selected, matching = restrict_quotient(g, n)
    text = (f"{len(selected)} of {len(character_table(g).characters)} irreducibles factor through "
            f"G/N (order {q.order}): rows {selected} -> quotient rows {matching}")
    return Outcome(text, {"quotient_order": q.order, "rows": selected, "quotient_rows": matching})


def cmd_deligne(args):
    t1 = character_table(_group(args, args.g1))
    t2 = character_table(_group(args, args.g2))
    t = deligne_product(t1, t2)
    ring = fusion_coefficients(t)
    ring.verify()
    text = f"rank {ring.rank} = {t1.rank} x {t2.rank}, dims " + " ".join(str(d) for d in ring.dims)
    return Outcome(text, {"rank": ring.rank, "dims": [str(d) for d in ring.dims],
                          "ring": ring.to_json()})


def cmd_modular(args):
    ref = args.input
    if ref.startswith("rep-"):
        data = BraidedFusionData.from_table(character_table(_group(args, ref[4:])))
    else:
        payload = _load_json(ref, _catalog(args), None)
        if "invariant_factors" in payload:
            data = pointed_braided(MetricGroup.from_json(payload))
        else:
            data = BraidedFusionData.from_table(character_table(_group(args, ref)))
    rep = modularity_test(data)
    return Outcome(rep.to_text(), {"verdict": rep.verdict, "s_rank": rep.s_rank, "rank": rep.rank,
                                   "symmetric": rep.symmetric})


def cmd_ring_iso(args):
    r1, r2 = _ring(args, args.r1), _ring(args, args.r2)
    phi = fusion_ring_isomorphic(r1, r2)
    if phi is None:
        return Outcome("NOT ISOMORPHIC", {"isomorphic": False}, EXIT_NEGATIVE)
    text = "ISOMORPHIC " + " ".join(f"{r1.labels[i]}->{r2.labels[j]}" for i, j in enumerate(phi))
    return Outcome(text, {"isomorphic": True, "map": phi})


def cmd_ses_group(args):
    g = _group(args, args.gamma)
    n = _subgroup(args, g, args.normal)
    rep = group_ses_check(g, n)
    if not rep.exact:
        raise AssertionError("group exact sequence failed to be exact")
    unliftable = sum(1 for ev in rep.evidence if ev.invariant and not ev.liftable)
    text = (f"EXACT: kernel {_factors_text(rep.quotient_dual)}, middle {_factors_text(rep.middle_dual)}, "
            f"image {len(rep.image)} liftable of {len(rep.evidence)} characters of N "
            f"({unliftable} invariant but unliftable)")
    return Outcome(text, rep.to_json())


# ---------------------------------------------------------------------------
# metric commands

def cmd_metric(args):
    m = _metric(args, args.files[0])
    op = args.op
    if op == "validate":
        return Outcome(f"VALID: |A| = {m.order}, factors {m.factors}", {"valid": True, **m.to_json()})
    if op == "radical":
        rep = radical_and_muger(m)
        text = (f"radical {[list(x) for x in rep.radical]}; "
                f"{'nondegenerate' if rep.nondegenerate else 'degenerate'}; "
                f"{'Tannakian' if rep.tannakian else 'not Tannakian'} radical")
        return Outcome(text, {"radical": [list(x) for x in rep.radical],
                              "nondegenerate": rep.nondegenerate, "tannakian": rep.tannakian})
    if op == "gauss":
        total, sigma = gauss_milgram(m)
        text = f"sum {total.literal()}" + (f", signature {sigma} mod 8" if sigma is not None
                                           else ", degenerate (no signature)")
        return Outcome(text, {"sum": total.literal(), "signature": sigma})
    if op == "isotropic":
        subs = enumerate_isotropic(m, require_transparent=args.transparent)
        lines = [f"{'T' if h.transparent else '-'} {sorted(map(list, h.members))}" for h in subs]
        return Outcome(f"{len(subs)} isotropic subgroups\n" + "\n".join(lines),
                       [{"members": [list(x) for x in h.sorted_members()],
                         "transparent": h.transparent} for h in subs])
    if op == "iso":
        m2 = _metric(args, _need(args.files, 2, "metric iso needs two metric groups"))
        iso = metric_iso_test(m, m2)
        if iso is None:
            return Outcome("NOT ISOMETRIC", {"isometric": False}, EXIT_NEGATIVE)
        pairs = {",".join(map(str, a)): list(b) for a, b in sorted(iso.items())}
        return Outcome("ISOMETRIC " + " ".join(f"({k})->{tuple(v)}" for k, v in pairs.items()),
                       {"isometric": True, "map": pairs})
    h = _metric_subgroup(m, _need(args.files, 2, f"metric {op} needs a subgroup"))
    if op == "condense":
        theory = condense(m, h)
        if not theory.check_grading_multiplicative():
            raise AssertionError("grading is not multiplicative")
        text = (f"{len(theory.objects)} condensed simples, grading group of order "
                f"{len(theory.grading_group)}, trivial sector "
                f"{len(theory.trivial_sector_objects)} simples")
        return Outcome(text, theory.to_json())
    if op == "equivariantize":
        theory = condense(m, h)
        res = equivariantize(theory)
        iso = metric_iso_test(res.metric, m) if res.metric is not None else None
        text = (f"{res.simple_count} equivariant simples, {res.unit_structures} unit structures; "
                f"{'isometric to input' if iso is not None else 'NOT isometric to input'}")
        data = {"simple_count": res.simple_count, "unit_structures": res.unit_structures,
                "metric": res.metric.to_json() if res.metric is not None else None,
                "isometric_to_input": iso is not None}
        return Outcome(text, data, EXIT_OK if iso is not None else EXIT_FAULT)
    if op == "ses":
        rep = pointed_ses_check(m, h)
        if not rep.exact:
            raise AssertionError("pointed exact sequence failed to be exact")
        text = (f"EXACT: kernel {_factors_text(rep.kernel_factors)}, middle "
                f"{_factors_text(rep.middle_factors)}, image {len(rep.image)} liftable objects")
        return Outcome(text, rep.to_json())
    raise InputError(f"unknown metric operation {op!r}")


def _need(items, k, message):
    if len(items) < k:
        raise InputError(message)
    return items[k - 1]


# ---------------------------------------------------------------------------
# operator-algebra commands

def cmd_alg(args):
    from .opalg.algebra import fixed_points_and_expectation, inner_test
    from .opalg.bimodule import braiding_square_check, find_trivialization, induce_bimodule
    from .opalg.cocycles import characteristic_invariant, coboundary_test, cocycle_check
    from .opalg.crossed import CrossedProduct
    from .groups import two_coboundary_test

    op = args.op
    act = _action(args, args.files[0])
    alg = act.algebra
    if op == "crossed":
        n = CrossedProduct(act)
        text = f"dim {n.dim}, centre dim {len(n.center)}, blocks {n.blocks}"
        return Outcome(text, {"dim": n.dim, "center_dim": len(n.center), "blocks": n.blocks})
    if op == "fixed":
        fp = fixed_points_and_expectation(act)
        blocks = fp.blocks
        return Outcome(f"fixed-point dim {fp.dim}, blocks {blocks}", {"dim": fp.dim, "blocks": blocks})
    if op == "inner":
        rows = []
        for g in range(act.group.order):
            res = inner_test(alg, act.maps[g])
            rows.append({"element": g, "inner": res.inner,
                         "unitary": alg.element_literal(res.unitary) if res.inner else None})
        inner = [r["element"] for r in rows if r["inner"]]
        lines = [f"g{r['element']}: " + (f"INNER u={r['unitary']}" if r["inner"] else "OUTER")
                 for r in rows]
        return Outcome("\n".join(lines), {"inner_part": inner, "elements": rows})
    if op == "charinv":
        inv = characteristic_invariant(act)
        trivial = [two_coboundary_test(inv.subgroup, mu) is not None for mu in inv.mu]
        text = (f"inner part {inv.inner_part}; mu class per block: "
                + ", ".join("trivial" if t else "NONTRIVIAL" for t in trivial))
        return Outcome(text, {**inv.to_json(), "mu_trivial": trivial})
    if op in ("cocycle-check", "coboundary"):
        w = _cocycle(args, _need(args.files, 2, f"alg {op} needs a cocycle"), act)
        if op == "cocycle-check":
            rep = cocycle_check(act, w)
            if not rep.valid:
                return Outcome(f"NOT A COCYCLE: fails at {rep.failures[:4]}",
                               {"valid": False, "failures": rep.failures}, EXIT_NEGATIVE)
            n = CrossedProduct(act)
            return Outcome(f"COCYCLE: p = p* = p^2, tr p = {n.trace(rep.projection).literal()}",
                           {"valid": True, "trace": n.trace(rep.projection).literal()})
        routes = tuple(r for r in args.routes.split(",") if r)
        rep = coboundary_test(act, w, routes=routes)
        data = {"coboundary": rep.is_coboundary, "routes": rep.routes,
                "trivialization": alg.element_literal(rep.trivialization)
                if rep.trivialization is not None else None}
        return Outcome(rep.to_text(alg), data, EXIT_OK if rep.is_coboundary else EXIT_NEGATIVE)
    if op == "bimodule":
        rep = _rep(args, _need(args.files, 2, "alg bimodule needs a representation"), act.group)
        report = induce_bimodule(CrossedProduct(act), rep)
        if not report.ok:
            raise AssertionError(f"bimodule checks failed: {report.to_json()}")
        return Outcome(f"BIMODULE OK: Pimsner-Popa exact, right dimension {report.right_dimension}",
                       report.to_json())
    if op == "braid-square":
        rh = _rep(args, _need(args.files, 2, "alg braid-square needs two representations"), act.group)
        rv = _rep(args, _need(args.files, 3, "alg braid-square needs two representations"), act.group)
        th, _ = find_trivialization(act, rh)
        tv, _ = find_trivialization(act, rv)
        if th is None or tv is None:
            return Outcome("NO TRIVIALIZATION: a representation cocycle is not a coboundary",
                           {"trivialized": False}, EXIT_NEGATIVE)
        rep = braiding_square_check(CrossedProduct(act), rh, rv, th, tv)
        return Outcome(f"SQUARE COMMUTES: defect 0 on {rep.checked} vectors", rep.to_json())
    raise InputError(f"unknown alg operation {op!r}")


# ---------------------------------------------------------------------------
# batch runner

def cmd_verify_all(args):
    from .acceptance import run_checks
    try:
        cat = Catalog(args.catalog) if args.catalog else Catalog()
    except CatalogError as exc:
        raise InputError(str(exc)) from exc
    if len(cat) == 0:
        return Outcome("warning: empty catalog, 0 checks run", {"checks": [], "count": 0})
    # every entry must parse and validate before anything runs
    for e in cat.entries:
        if e.kind == "metric":
            MetricGroup.from_json(e.payload())
        elif e.kind == "group":
            cat.group(e.name)
        elif e.kind == "algebra-action":
            cat.action(e.name)
        elif e.kind == "representation":
            cat.representation(e.name)
    results = run_checks(cat, args.only or None)
    lines = [r.line() for r in results]
    passed = sum(r.passed for r in results)
    skipped = sum(r.skipped for r in results)
    lines.append(f"{passed - skipped}/{len(results)} checks passed"
                 + (f", {skipped} skipped" if skipped else ""))
    code = EXIT_OK if passed == len(results) else EXIT_NEGATIVE
    return Outcome("\n".join(lines), {"checks": [r.to_json() for r in results],
                                      "count": len(results)}, code)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="accepted for driver compatibility; all computations are deterministic")

    p = argparse.ArgumentParser(prog="chi-forge", description="Exact gauging, crossed products "
                                "and braided categorical data for finite groups.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=None)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *positional, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        for arg in positional:
            sp.add_argument(arg)
        sp.set_defaults(func=fn)
        return sp

    add("chartable", cmd_chartable, "group", help="character table (Dixon-Schneider, exact)")
    add("fusion", cmd_fusion, "group", help="fusion ring of Rep(G)")
    add("dual", cmd_dual, "group", help="dual group Hom(G, U(1))")
    add("restrict", cmd_restrict, "group", "normal", help="irreducibles factoring through G/N")
    add("deligne", cmd_deligne, "g1", "g2", help="Deligne product Rep(G1) x Rep(G2)")
    add("modular", cmd_modular, "input", help="modularity of rep-<group> or a metric group")
    add("ring-iso", cmd_ring_iso, "r1", "r2", help="fusion ring isomorphism")

    ses = sub.add_parser("ses", parents=[common], help="exact sequence checks")
    ses_sub = ses.add_subparsers(dest="ses_kind", required=True)
    sg = ses_sub.add_parser("group", parents=[common])
    sg.add_argument("gamma")
    sg.add_argument("normal")
    sg.set_defaults(func=cmd_ses_group)

    mp = add("metric", cmd_metric, help="metric-group (pointed braided) operations")
    mp.add_argument("op", choices=("validate", "radical", "gauss", "isotropic", "condense",
                                   "equivariantize", "ses", "iso"))
    mp.add_argument("files", nargs="+")
    mp.add_argument("--transparent", action="store_true",
                    help="isotropic: only subgroups inside the radical")

    ap = add("alg", cmd_alg, help="finite-dimensional operator-algebra operations")
    ap.add_argument("op", choices=("crossed", "fixed", "inner", "cocycle-check", "coboundary",
                                   "charinv", "bimodule", "braid-square"))
    ap.add_argument("files", nargs="+")
    ap.add_argument("--routes", default="a,b,c", help="coboundary routes to run")

    vp = add("verify-all", cmd_verify_all, help="run the catalog-wide acceptance checks")
    vp.add_argument("--catalog", default=None)
    vp.add_argument("--only", type=int, action="append", help="run only this check number")
    return p


def _emit(outcome: Outcome, fmt: str, stream=None):
    stream = stream or sys.stdout
    if fmt == "json":
        stream.write(json.dumps(outcome.data, indent=1, sort_keys=True, default=str) + "\n")
    else:
        stream.write(outcome.text + "\n")


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    fmt = getattr(args, "format", "text")
    try:
        outcome = args.func(args)
    except MetricValidationError as exc:
        witness = exc.witness
        _emit(Outcome(f"INVALID: {exc} witness {witness}",
                      {"error": str(exc), "witness": [list(w) for w in witness] if witness else None}),
              fmt, sys.stderr if fmt == "text" else sys.stdout)
        return EXIT_INPUT
    except AssertionError as exc:
        print(f"internal fault: {exc}", file=sys.stderr)
        return EXIT_FAULT
    except (InputError, CatalogError, MetricError, GroupError, NormalizationError, KeyError,
            ValueError, TypeError, OSError) as exc:
        print(f"input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - the exit code reports the fault class
        print(f"internal fault: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAULT
    _emit(outcome, fmt)
    return outcome.code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
