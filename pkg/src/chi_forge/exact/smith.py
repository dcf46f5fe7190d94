"""Smith normal form over the integers and linear congruences."""
from __future__ import annotations

from math import gcd

__all__ = ["smith_normal_form", "solve_affine_mod", "det_int", "IntMatrix"]

IntMatrix = list  # list[list[int]]


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(m: IntMatrix):
    """Return ``(d, u, v)`` with ``d == u @ m @ v`` diagonal and ``d_1 | d_2 | ...``.

    ``u`` and ``v`` are unimodular.  Classical elimination with the row
    operations recorded in ``u`` and the column operations in ``v``.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [[int(x) for x in r] for r in m]
    u = _identity(rows)
    v = _identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        if f:
            a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
            u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        if f:
            for r in a:
                r[dst] += f * r[src]
            for r in v:
                r[dst] += f * r[src]

    t = 0
    while t < min(rows, cols):
        # smallest nonzero entry of the remaining block as pivot
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            done = True
            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // p
                    add_row(i, t, -q)
                    if a[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // p
                    add_col(j, t, -q)
                    if a[t][j]:
                        done = False
            if done:
                # divisibility of the remaining block by the pivot
                bad = None
                for i in range(t + 1, rows):
                    for j in range(t + 1, cols):
                        if a[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(t, bad, 1)
                continue
            # move the smallest remainder into pivot position
            best = None
            for i in range(t, rows):
                if a[i][t] and (best is None or abs(a[i][t]) < abs(a[best][t])):
                    best = i
            swap_rows(t, best)
            bestc = None
            for j in range(t, cols):
                if a[t][j] and (bestc is None or abs(a[t][j]) < abs(a[t][bestc])):
                    bestc = j
            swap_cols(t, bestc)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return a, u, v


def det_int(m: IntMatrix) -> int:
    """Exact integer determinant (Bareiss)."""
    n = len(m)
    if n == 0:
        return 1
    a = [[int(x) for x in r] for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def solve_affine_mod(a: IntMatrix, b, modulus: int):
    """Solve ``a @ x == b (mod modulus)``; return a solution list or ``None``."""
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    rows = len(a)
    if len(b) != rows:
        raise ValueError(f"dimension mismatch: {rows} equations, {len(b)} right-hand sides")
    cols = len(a[0]) if rows else 0
    if any(len(r) != cols for r in a):
        raise ValueError("ragged coefficient matrix")
    if cols == 0:
        return [] if all(int(x) % modulus == 0 for x in b) else None
    d, u, v = smith_normal_form([[x % modulus for x in r] for r in a])
    c = [sum(ui * int(bi) for ui, bi in zip(urow, b)) % modulus for urow in u]
    z = [0] * cols
    for i in range(rows):
        di = d[i][i] if i < cols else 0
        if di % modulus == 0:
            if c[i] % modulus:
                return None
            continue
        g = gcd(di, modulus)
        if c[i] % g:
            return None
        mg = modulus // g
        z[i] = (c[i] // g) * pow(di // g, -1, mg) % mg
    x = [sum(vr[j] * z[j] for j in range(cols)) % modulus for vr in v]
    return x
