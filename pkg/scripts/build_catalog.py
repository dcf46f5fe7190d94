"""Regenerate the bundled catalog under src/chi_forge/catalog/."""
from __future__ import annotations

import json
from fractions import Fraction
from itertools import product
from pathlib import Path

from chi_forge.metric import MetricGroup, MetricValidationError

ROOT = Path(__file__).resolve().parents[1] / "src" / "chi_forge" / "catalog"


def cyclic(n):
    return [[(i + 1) % n for i in range(n)]]


def quaternion():
    units = ["1", "i", "j", "k"]
    table = {("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
             ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
             ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")}
    for u in units:
        table[("1", u)] = (1, u)
        table[(u, "1")] = (1, u)
    els = [(s, u) for s in (1, -1) for u in units]

    def mul(a, b):
        s, u = table[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    def left(g):
        return [els.index(mul(g, x)) for x in els]

    return [left((1, "i")), left((1, "j"))], left((-1, "1"))


GROUPS = {f"C{n}": (n, cyclic(n)) for n in range(2, 13)}
GROUPS.update({
    "V4": (4, [[1, 0, 3, 2], [2, 3, 0, 1]]),
    "S3": (3, [[1, 0, 2], [1, 2, 0]]),
    "D4": (4, [[1, 2, 3, 0], [0, 3, 2, 1]]),
    "A4": (4, [[1, 2, 0, 3], [0, 2, 3, 1]]),
    "S4": (4, [[1, 0, 2, 3], [1, 2, 3, 0]]),
    "A5": (5, [[1, 2, 0, 3, 4], [1, 2, 3, 4, 0]]),
    "S5": (5, [[1, 0, 2, 3, 4], [1, 2, 3, 4, 0]]),
    "A6": (6, [[1, 2, 0, 3, 4, 5], [0, 2, 3, 4, 5, 1]]),
})
Q8_GENS, Q8_MINUS_ONE = quaternion()
GROUPS["Q8"] = (8, Q8_GENS)


def forms(factors, denominators):
    """All valid quadratic forms whose values on generators and pairings lie in the given grid."""
    els = list(product(*[range(d) for d in factors]))
    k = len(factors)
    found = {}
    grid = [Fraction(a, denominators) for a in range(denominators)]
    for diag in product(grid, repeat=k):
        for off in product(grid, repeat=k * (k - 1) // 2):
            def q(x):
                v = sum(x[i] * x[i] * diag[i] for i in range(k))
                pos = 0
                for i in range(k):
                    for j in range(i + 1, k):
                        v += x[i] * x[j] * off[pos]
                        pos += 1
                return v - (v.numerator // v.denominator)
            table = {x: q(x) for x in els}
            try:
                m = MetricGroup(factors, table)
            except MetricValidationError:
                continue
            key = tuple(table[x] for x in els)
            found.setdefault(key, m)
    return list(found.values())


def slug(m: MetricGroup) -> str:
    vals = "-".join(f"{v.numerator}_{v.denominator}" if v else "0" for v in
                    (m.q[x] for x in m.elements[1:]))
    return "z" + "x".join(map(str, m.factors)) + "-" + vals


def main():
    entries = []

    def write(kind, name, rel, payload):
        path = ROOT / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, indent=1) + "\n")
        entries.append({"name": name, "kind": kind, "path": rel})

    for name, (deg, gens) in GROUPS.items():
        write("group", name, f"groups/{name.lower()}.json",
              {"name": name, "degree": deg, "generators": gens})

    metrics = []
    metrics += forms([2], 4)
    metrics += forms([3], 3)
    metrics += forms([4], 8)
    metrics += forms([2, 2], 4)
    metrics += [m for m in forms([8], 16) if m.q[(1,)] in (Fraction(1, 16), 0)]
    extra = {
        "toric": MetricGroup([2, 2], {(0, 0): 0, (1, 0): 0, (0, 1): 0, (1, 1): Fraction(1, 2)}),
        "semion": MetricGroup([2], {(0,): 0, (1,): Fraction(1, 4)}),
        "z2x4-zero": MetricGroup([2, 4], {x: 0 for x in product(range(2), range(4))}),
        "z4x4-toric": MetricGroup([4, 4], {x: Fraction(x[0] * x[1] % 4, 4)
                                           for x in product(range(4), range(4))}),
        "double-toric": MetricGroup([2, 2, 2, 2], {
            x: Fraction((x[0] * x[1] + x[2] * x[3]) % 2, 2) for x in product(range(2), repeat=4)}),
        "z2cubed-zero": MetricGroup([2, 2, 2], {x: 0 for x in product(range(2), repeat=3)}),
        "toric-plus-z2": MetricGroup([2, 2, 2], {
            x: Fraction(x[0] * x[1] % 2, 2) for x in product(range(2), repeat=3)}),
    }
    for m in metrics:
        write("metric", slug(m), f"metric/{slug(m)}.json", m.to_json())
    for name, m in extra.items():
        write("metric", name, f"metric/{name}.json", m.to_json())

    def unit(n):
        return [["1" if i == j else "0" for j in range(n)] for i in range(n)]

    actions = {
        "c2-flip": ("C2", [1, 1], [{"block_perm": [1, 0], "unitaries": [unit(1), unit(1)]}]),
        "m2-adz": ("C2", [2], [{"block_perm": [0], "unitaries": [[["1", "0"], ["0", "-1"]]]}]),
        "pauli": ("V4", [2], [{"block_perm": [0], "unitaries": [[["0", "1"], ["1", "0"]]]},
                              {"block_perm": [0], "unitaries": [[["1", "0"], ["0", "-1"]]]}]),
        "trivial-action": ("C2", [1], [{"block_perm": [0], "unitaries": [unit(1)]}]),
        "m2xm2-swap": ("C2", [2, 2], [{"block_perm": [1, 0], "unitaries": [unit(2), unit(2)]}]),
        "c3-cycle": ("C3", [1, 1, 1],
                     [{"block_perm": [1, 2, 0], "unitaries": [unit(1)] * 3}]),
        "c1c1c1-swap": ("C2", [1, 1, 1],
                        [{"block_perm": [1, 0, 2], "unitaries": [unit(1)] * 3}]),
        "c4-phase": ("C4", [2], [{"block_perm": [0],
                                  "unitaries": [[["1", "0"], ["0", "c(4)[1]=1"]]]}]),
        "v4-swap-adz": ("V4", [2, 2], [
            {"block_perm": [1, 0], "unitaries": [unit(2), unit(2)]},
            {"block_perm": [0, 1], "unitaries": [[["1", "0"], ["0", "-1"]]] * 2}]),
        "s3-perm": ("S3", [1, 1, 1], [
            {"block_perm": [1, 0, 2], "unitaries": [unit(1)] * 3},
            {"block_perm": [1, 2, 0], "unitaries": [unit(1)] * 3}]),
    }
    for name, (grp, blocks, gens) in actions.items():
        write("algebra-action", name, f"actions/{name}.json",
              {"name": name, "group": grp, "blocks": blocks, "generators": gens})

    cocycles = {
        "unit": ("trivial-action", {"0": "1", "1": "1"}),
        "minus-one": ("trivial-action", {"0": "1", "1": "-1"}),
        "flip-minus-one": ("c2-flip", {"0": "1", "1": "-1"}),
    }
    for name, (action, values) in cocycles.items():
        write("cocycle", name, f"cocycles/{name}-cocycle.json", {"action": action, "values": values})

    reps = {
        "c2-trivial": ("C2", [[["1"]]]),
        "c2-sign": ("C2", [[["-1"]]]),
        "c2-regular": ("C2", [[["0", "1"], ["1", "0"]]]),
        "v4-sign": ("V4", [[["-1"]], [["1"]]]),
        "c3-omega": ("C3", [[["c(3)[1]=1"]]]),
    }
    for name, (grp, gens) in reps.items():
        write("representation", name, f"reps/{name}.json",
              {"name": name, "group": grp, "generators": gens})

    ses = {
        "s3-a3": ("S3", {"generators": [[1, 2, 0]]}),
        "c4-c2": ("C4", {"generators": [[2, 3, 0, 1]]}),
        "q8-center": ("Q8", {"generators": [Q8_MINUS_ONE]}),
    }
    for name, (grp, normal) in ses.items():
        write("ses-instance", name, f"ses/{name}.json", {"group": grp, "normal": normal})

    (ROOT / "index.json").write_text(json.dumps({"entries": entries}, indent=1) + "\n")
    print(f"{len(entries)} catalog entries, {len(metrics) + len(extra)} metric groups")


if __name__ == "__main__":
    main()
