#!/usr/bin/env python3
"""Generate the bundled 46x68 5G-style base graph asset.

Structure mirrors 5G base graph 1: 22 systematic columns (the first two
punctured and high-degree), a 4-column core parity block whose column sums
reduce to a single circulant (encodable by row summation), and 42 extension
rows that each add one degree-1 identity column. Extension rows connect only
to systematic/core columns so every row prefix is a valid rate-adapted code.

Shifts are assigned greedily from a seeded RNG, scoring candidate values by
the number of length-4 cycles they would close in the lifted graphs at Z=32
and Z=384. Dense core rows share too many columns for a 4-cycle-free draw to
exist at small Z, so the count is minimized rather than forced to zero.
"""

import random
import sys

ROWS, COLS, INFO, ZMAX = 46, 68, 22, 384
CORE = [22, 23, 24, 25]


def build_adjacency(rng):
    adj = [[False] * COLS for _ in range(ROWS)]

    # Core rows 0..3: dense over systematic columns.
    core_info_deg = [17, 17, 16, 16]
    for r in range(4):
        cols = [0, 1] + rng.sample(range(2, INFO), core_info_deg[r] - 2)
        for c in cols:
            adj[r][c] = True
    # Every systematic column must appear in the core rows so the highest-rate
    # prefix leaves no isolated variable node.
    for c in range(2, INFO):
        if not any(adj[r][c] for r in range(4)):
            r = min(range(4), key=lambda r: sum(adj[r]))
            adj[r][c] = True

    # Core parity block: col22 weight 3 (rows 0,1,2), double diagonal 23..25.
    adj[0][22] = adj[1][22] = adj[2][22] = True
    adj[0][23] = adj[1][23] = True
    adj[1][24] = adj[2][24] = True
    adj[2][25] = adj[3][25] = True
    adj[3][22] = False
    # Row 3 needs punctured coverage and its own parity tie-in.
    adj[3][0] = adj[3][1] = True

    # Extension rows 4..45: degree decays from ~9 to 3 (plus identity col).
    for r in range(4, ROWS):
        frac = (r - 4) / (ROWS - 5)
        deg = max(3, round(9 - 6 * frac))
        pool = list(range(0, INFO)) + CORE
        # Punctured columns stay well connected, as in 5G designs.
        cols = []
        if r % 3 != 2:
            cols.append(rng.choice([0, 1]))
        while len(cols) < deg:
            c = rng.choice(pool)
            if c not in cols:
                cols.append(c)
        for c in cols:
            adj[r][c] = True
        adj[r][26 + r - 4] = True

    return adj


def cycle_score(sh, r, c, cand):
    """4-cycles closed by setting sh[r][c]=cand, against already-set entries."""
    score = 0
    for r2 in range(ROWS):
        if r2 == r or sh[r2][c] < 0:
            continue
        for b in range(COLS):
            if b == c or sh[r][b] < 0 or sh[r2][b] < 0:
                continue
            for z, wt in ((384, 1), (32, 4)):
                d1 = (cand - sh[r][b]) % z
                d2 = (sh[r2][c] - sh[r2][b]) % z
                if d1 == d2:
                    score += wt
    return score


FIXED_SHIFTS = {  # 5G-style core parity: weight-3 accumulate column plus
    (0, 22): 1, (1, 22): 0, (2, 22): 0,  # shift-0 double diagonals
    (0, 23): 0, (1, 23): 0,
    (1, 24): 0, (2, 24): 0,
    (2, 25): 0, (3, 25): 0,
}


def draw_shifts(rng, adj):
    sh = [[-1] * COLS for _ in range(ROWS)]
    for (r, c), v in FIXED_SHIFTS.items():
        sh[r][c] = v
    for r in range(4, ROWS):
        sh[r][26 + r - 4] = 0  # identity extension column
    for r in range(ROWS):
        for c in range(COLS):
            if not adj[r][c] or sh[r][c] >= 0:
                continue
            best, best_score = None, None
            for _ in range(48):
                cand = rng.randrange(ZMAX)
                s = cycle_score(sh, r, c, cand)
                if best_score is None or s < best_score:
                    best, best_score = cand, s
                if s == 0:
                    break
            sh[r][c] = best
    return sh


def total_cycles(sh, z):
    total = 0
    for r1 in range(ROWS):
        for r2 in range(r1 + 1, ROWS):
            shared = [c for c in range(COLS) if sh[r1][c] >= 0 and sh[r2][c] >= 0]
            for i in range(len(shared)):
                for j in range(i + 1, len(shared)):
                    a, b = shared[i], shared[j]
                    if (sh[r1][a] - sh[r1][b]) % z == (sh[r2][a] - sh[r2][b]) % z:
                        total += 1
    return total


def main():
    rng = random.Random(20240817)
    adj = build_adjacency(rng)
    sh = draw_shifts(rng, adj)
    out = [f"{ROWS} {COLS} {INFO} {ZMAX}", "punctured 0 1"]
    for r in range(ROWS):
        out.append(" ".join(str(v) for v in sh[r]))
    print("\n".join(out))
    print(f"4-cycle pairs: Z=384: {total_cycles(sh, 384)}  Z=32: {total_cycles(sh, 32)}",
          file=sys.stderr)


if __name__ == "__main__":
    main()
