"""Directed graphs with a fixed vertex numbering, plus the degree-signature
refinement used to pin down the automorphism group.

Vertex ids are dense and 0-based. The id assignment is treated as meaningful
input (collapse pipelines are sensitive to it), so nothing here ever re-sorts
vertices.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property

__all__ = [
    "Digraph",
    "random_digraph",
    "degree_signature_partition",
    "automorphisms",
    "describe_group",
]


@dataclass(frozen=True)
class Digraph:
    """Simple directed graph: no loops, no multi-edges, reciprocal pairs allowed.

    ``names`` optionally records the label of each vertex id (provenance for
    graphs read from data files).
    """

    n: int
    edges: frozenset = field(default_factory=frozenset)
    names: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range for n={self.n}")
        if self.names is not None:
            object.__setattr__(self, "names", tuple(self.names))
            if len(self.names) != self.n:
                raise ValueError("names length must equal vertex count")

    @cached_property
    def out_sets(self):
        out = [set() for _ in range(self.n)]
        for u, v in self.edges:
            out[u].add(v)
        return out

    @cached_property
    def in_sets(self):
        ins = [set() for _ in range(self.n)]
        for u, v in self.edges:
            ins[v].add(u)
        return ins

    def has_edge(self, u, v):
        return (u, v) in self.edges

    def reverse(self):
        """Graph with every edge reversed; vertex numbering unchanged."""
        return Digraph(self.n, frozenset((v, u) for u, v in self.edges), self.names)

    def undirected_pairs(self):
        """Sorted pairs (u, v) with u < v joined by an edge in either direction."""
        return {(min(u, v), max(u, v)) for u, v in self.edges}

    def reciprocal_pairs(self):
        return {
            (u, v) for u, v in self.edges if u < v and (v, u) in self.edges
        }

    def is_tournament(self):
        if 2 * len(self.edges) != self.n * (self.n - 1):
            return False
        return all(
            ((u, v) in self.edges) != ((v, u) in self.edges)
            for u, v in itertools.combinations(range(self.n), 2)
        )

    def out_degrees(self):
        return [len(s) for s in self.out_sets]

    def is_regular_tournament(self):
        if not self.is_tournament():
            return False
        degs = self.out_degrees()
        return len(set(degs)) == 1

    def is_doubly_regular_tournament(self):
        if not self.is_regular_tournament():
            return False
        out = self.out_sets
        common = {
            len(out[u] & out[v]) for u, v in itertools.combinations(range(self.n), 2)
        }
        return len(common) == 1


def random_digraph(n, p, seed):
    """Directed Erdos-Renyi graph: each ordered pair (u, v), u != v, is an edge
    independently with probability ``p``. Deterministic for a fixed seed; the
    pairs are drawn in row-major order (u ascending, then v)."""
    if not 0 <= p <= 1:
        raise ValueError("p must be a probability")
    rng = random.Random(seed)
    edges = set()
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < p:
                edges.add((u, v))
    return Digraph(n, frozenset(edges))


def degree_signature_partition(G):
    """Group vertices by bidegree plus the sets of bidegrees of in- and
    out-neighbours (one refinement round).

    Returns the classes as sorted vertex lists, ordered by smallest member.
    Any automorphism preserves these signatures, so the partition bounds the
    automorphism group from above.
    """
    bideg = [(len(G.in_sets[v]), len(G.out_sets[v])) for v in range(G.n)]
    classes = {}
    for v in range(G.n):
        sig = (
            bideg[v],
            frozenset(bideg[u] for u in G.in_sets[v]),
            frozenset(bideg[u] for u in G.out_sets[v]),
        )
        classes.setdefault(sig, []).append(v)
    return sorted((sorted(vs) for vs in classes.values()), key=lambda c: c[0])


def automorphisms(G, candidate_limit=10**6):
    """All automorphisms of ``G``, found by explicit check over the candidate
    maps allowed by the degree-signature partition.

    Raises if the candidate space (product of class factorials) exceeds
    ``candidate_limit``; the intended use is graphs the signature refinement
    almost pins down.
    """
    partition = degree_signature_partition(G)
    total = 1
    for cls in partition:
        for k in range(2, len(cls) + 1):
            total *= k
        if total > candidate_limit:
            raise ValueError(
                f"candidate space exceeds limit ({total} > {candidate_limit})"
            )
    edge_set = G.edges
    found = []
    for assignment in itertools.product(
        *[itertools.permutations(cls) for cls in partition]
    ):
        perm = [0] * G.n
        for cls, images in zip(partition, assignment):
            for v, w in zip(cls, images):
                perm[v] = w
        if all((perm[u], perm[v]) in edge_set for u, v in edge_set):
            found.append(tuple(perm))
    return found


def describe_group(perms):
    """Short name for the permutation group given by its full element list.

    Covers the orders that occur in practice here; anything else is reported
    by order alone.
    """
    order = len(perms)
    if order == 1:
        return "trivial"
    if order == 2:
        return "Z2"
    if order == 3:
        return "Z3"
    if order == 4:
        identity = tuple(range(len(perms[0])))
        if all(_compose(p, p) == identity for p in perms):
            return "Z2 x Z2"
        return "Z4"
    return f"order {order}"


def _compose(p, q):
    return tuple(p[q[i]] for i in range(len(p)))
