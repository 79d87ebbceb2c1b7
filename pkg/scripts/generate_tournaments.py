#!/usr/bin/env python3
"""Generate the tournament collections used by the classification tests.

Produces, under data/tournaments/:
  general_{2..7}.trn        all tournaments up to isomorphism
  regular_{3,5,7,9}.trn     regular tournaments up to isomorphism
  doubly_regular_{3,7,11,15}.trn

General classes come from iterative one-vertex extension with isomorphism
dedup (invariant buckets + VF2). Regular 9-tournaments are obtained by
extending the 8-vertex classes whose score sequence forces a regular
completion. Doubly regular tournaments are Paley for 3, 7, 11; for 15 no
circulant representative exists, so the two classes are the skew-Hadamard
doubling of the Paley-7 matrix and its reversal.

Class counts are asserted against the published tables before writing.
"""

from __future__ import annotations

import sys
import time
from pathlib import Path

import networkx as nx

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from flagwedge.digraph import Digraph
from flagwedge.formats import write_tournaments

OUT_DIR = Path(__file__).resolve().parents[1] / "data" / "tournaments"

GENERAL_COUNTS = {1: 1, 2: 1, 3: 2, 4: 4, 5: 12, 6: 56, 7: 456, 8: 6880}
REGULAR_COUNTS = {3: 1, 5: 1, 7: 3, 9: 15}
DOUBLY_REGULAR_COUNTS = {3: 1, 7: 1, 11: 1, 15: 2}


def cyclic_triangle_profile(T):
    out = T.out_sets
    counts = []
    for v in range(T.n):
        c = 0
        for u in out[v]:
            c += len(out[u] & T.in_sets[v])
        counts.append(c)
    return counts


def bucket_key(T):
    out = T.out_degrees()
    local = sorted(
        (
            out[v],
            tuple(sorted(out[u] for u in T.out_sets[v])),
            tuple(sorted(out[u] for u in T.in_sets[v])),
        )
        for v in range(T.n)
    )
    return (tuple(sorted(out)), tuple(local), tuple(sorted(cyclic_triangle_profile(T))))


def to_nx(T):
    g = nx.DiGraph()
    g.add_nodes_from(range(T.n))
    g.add_edges_from(T.edges)
    return g


def isomorphic(T1, T2):
    return nx.is_isomorphic(to_nx(T1), to_nx(T2))


def dedup(candidates):
    buckets = {}
    reps = []
    for cand in candidates:
        key = bucket_key(cand)
        bucket = buckets.setdefault(key, [])
        if not any(isomorphic(cand, rep) for rep in bucket):
            bucket.append(cand)
            reps.append(cand)
    return reps


def extend_by_one(classes):
    """All isomorphism classes on n+1 vertices from the classes on n."""
    candidates = []
    for T in classes:
        v = T.n
        for bits in range(1 << T.n):
            edges = set(T.edges)
            for u in range(T.n):
                if bits >> u & 1:
                    edges.add((u, v))
                else:
                    edges.add((v, u))
            candidates.append(Digraph(T.n + 1, frozenset(edges)))
    return dedup(candidates)


def enumerate_general(n_max):
    classes = {1: [Digraph(1, frozenset())]}
    for n in range(2, n_max + 1):
        t0 = time.time()
        classes[n] = extend_by_one(classes[n - 1])
        print(f"n={n}: {len(classes[n])} classes ({time.time() - t0:.1f}s)")
        assert len(classes[n]) == GENERAL_COUNTS[n], (n, len(classes[n]))
    return classes


def regular_nine(classes8):
    """Regular 9-tournaments: the new vertex must beat exactly the vertices of
    score 4 in an 8-tournament with score sequence (3,3,3,3,4,4,4,4)."""
    candidates = []
    for T in classes8:
        degs = T.out_degrees()
        if sorted(degs) != [3, 3, 3, 3, 4, 4, 4, 4]:
            continue
        v = T.n
        edges = set(T.edges)
        for u in range(T.n):
            if degs[u] == 4:
                edges.add((v, u))
            else:
                edges.add((u, v))
        cand = Digraph(9, frozenset(edges))
        assert cand.is_regular_tournament()
        candidates.append(cand)
    return dedup(candidates)


def paley(q):
    qr = {(x * x) % q for x in range(1, q)}
    edges = {(i, j) for i in range(q) for j in range(q) if i != j and (j - i) % q in qr}
    return Digraph(q, frozenset(edges))


def doubly_regular_15():
    """Two classes from the order-16 skew-Hadamard doubling of Paley-7."""
    q = 7
    qr = {(x * x) % q for x in range(1, q)}
    core = [
        [0 if i == j else (1 if (j - i) % q in qr else -1) for j in range(q)]
        for i in range(q)
    ]
    S8 = [[0] + [1] * q] + [[-1] + core[i] for i in range(q)]
    H8 = [[S8[i][j] + (i == j) for j in range(8)] for i in range(8)]
    S = [[H8[i][j] - (i == j) for j in range(8)] for i in range(8)]
    H = [[0] * 16 for _ in range(16)]
    for i in range(8):
        for j in range(8):
            H[i][j] = S[i][j] + (i == j)
            H[i][j + 8] = S[i][j] + (i == j)
            H[i + 8][j] = S[i][j] - (i == j)
            H[i + 8][j + 8] = -S[i][j] + (i == j)
    # normalise the first row to +1 by simultaneous row/column negation
    for k in range(1, 16):
        if H[0][k] == -1:
            for i in range(16):
                H[i][k] = -H[i][k]
            for j in range(16):
                H[k][j] = -H[k][j]
    size = 16
    assert all(
        sum(H[i][k] * H[j][k] for k in range(size)) == (size if i == j else 0)
        for i in range(size)
        for j in range(size)
    ), "not Hadamard"
    assert all(
        H[i][j] + H[j][i] == (2 if i == j else 0) for i in range(size) for j in range(size)
    ), "not skew"
    edges = frozenset(
        (i - 1, j - 1)
        for i in range(1, 16)
        for j in range(1, 16)
        if i != j and H[i][j] == 1
    )
    T = Digraph(15, edges)
    R = T.reverse()
    assert T.is_doubly_regular_tournament() and R.is_doubly_regular_tournament()
    assert not isomorphic(T, R), "doubling and its reversal should be distinct"
    return [T, R]


def main():
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    classes = enumerate_general(8)

    for n in range(2, 8):
        path = OUT_DIR / f"general_{n}.trn"
        path.write_text(write_tournaments(classes[n]))
        print(f"wrote {path} ({len(classes[n])} tournaments)")

    regular = {n: [T for T in classes[n] if T.is_regular_tournament()] for n in (3, 5, 7)}
    regular[9] = regular_nine(classes[8])
    for n, items in sorted(regular.items()):
        assert len(items) == REGULAR_COUNTS[n], (n, len(items))
        path = OUT_DIR / f"regular_{n}.trn"
        path.write_text(write_tournaments(items))
        print(f"wrote {path} ({len(items)} tournaments)")

    doubly = {3: [paley(3)], 7: [paley(7)], 11: [paley(11)], 15: doubly_regular_15()}
    for n, items in sorted(doubly.items()):
        for T in items:
            assert T.is_doubly_regular_tournament()
        assert len(items) == DOUBLY_REGULAR_COUNTS[n], (n, len(items))
        path = OUT_DIR / f"doubly_regular_{n}.trn"
        path.write_text(write_tournaments(items))
        print(f"wrote {path} ({len(items)} tournaments)")


if __name__ == "__main__":
    main()
