"""Pure-Python sparse integer elimination (reference kernel)."""
from __future__ import annotations

import heapq
from math import gcd


def normalize_diagonal(diag: list[int]) -> list[int]:
    """Invariant factors of a diagonal matrix: each divides the next."""
    units = [d for d in diag if d == 1]
    rest = sorted(d for d in diag if d > 1)
    for i in range(len(rest)):
        for j in range(i + 1, len(rest)):
            a, b = rest[i], rest[j]
            g = gcd(a, b)
            rest[i], rest[j] = g, a // g * b
    return units + sorted(rest)


def invariant_factors(nrows: int, ncols: int, entries) -> list[int]:
    """Smallest-|pivot| elimination, ties broken by (row, col)."""
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    heap = []
    for r, c, v in entries:
        if v:
            rows.setdefault(r, {})[c] = v
            cols.setdefault(c, set()).add(r)
            heap.append((abs(v), r, c))
    heapq.heapify(heap)
    push = heapq.heappush
    diag = []
    while heap:
        a, r, c = heapq.heappop(heap)
        prow = rows.get(r)
        if prow is None:
            continue
        p = prow.get(c)
        if p is None or abs(p) != a:
            continue
        residual = False
        for r2 in sorted(cols[c]):
            if r2 == r:
                continue
            row2 = rows[r2]
            q = row2[c] // p
            for c2, v in prow.items():
                nv = row2.get(c2, 0) - q * v
                if nv:
                    if c2 not in row2:
                        cols[c2].add(r2)
                    row2[c2] = nv
                    push(heap, (abs(nv), r2, c2))
                else:
                    del row2[c2]
                    cols[c2].discard(r2)
            if c in row2:
                residual = True
        if residual:
            push(heap, (a, r, c))
            continue
        for c2 in list(prow):
            if c2 == c:
                continue
            nv = prow[c2] % p
            if nv:
                prow[c2] = nv
                push(heap, (abs(nv), r, c2))
                residual = True
            else:
                del prow[c2]
                cols[c2].discard(r)
        if residual:
            push(heap, (a, r, c))
            continue
        diag.append(a)
        del rows[r]
        del cols[c]
    return normalize_diagonal(diag)
