"""Flag complex builders: directed flag complexes, undirected flag complexes
and flag tournaplexes, plus the tournaplex filtration scaffolding.

The clique enumeration grows cliques vertex by vertex inside the common
out-neighbourhood (respectively, the common neighbourhood above the current
last vertex), so each clique is produced exactly once and already in its own
vertex order.
"""

from __future__ import annotations

import hashlib
import itertools

from .digraph import Digraph
from .simplex import Complex

__all__ = [
    "directed_flag_complex",
    "undirected_flag_complex",
    "Tournaplex",
    "flag_tournaplex",
    "filtration_stage",
    "graph_with_3cycle_triangles",
    "stage_matches_graph_with_3cycles",
    "WeightUnavailableError",
    "WEIGHTS",
    "register_weight",
    "transitive_indicator_weight",
]


def directed_flag_complex(G):
    """All directed cliques of ``G`` as an ordered simplicial complex.

    A tuple (v0, ..., vn) is a directed clique when vi -> vj is an edge for
    every i < j; the complex is downward closed by construction.
    """
    out = G.out_sets
    simplices = []

    def grow(prefix, cands):
        for u in sorted(cands):
            s = prefix + (u,)
            simplices.append(s)
            grow(s, cands & out[u])

    for v in range(G.n):
        simplices.append((v,))
        grow((v,), out[v])
    return Complex(simplices)


def undirected_flag_complex(G):
    """Clique complex of the underlying undirected graph of ``G``.

    Reciprocal edge pairs count as a single undirected edge; simplices are
    stored with ascending vertex tuples.
    """
    above = [set() for _ in range(G.n)]
    for u, v in G.undirected_pairs():
        above[u].add(v)
    simplices = []

    def grow(prefix, cands):
        for u in sorted(cands):
            s = prefix + (u,)
            simplices.append(s)
            grow(s, cands & above[u])

    for v in range(G.n):
        simplices.append((v,))
        grow((v,), above[v])
    return Complex(simplices)


def _pair_index(i, j, size):
    # pairs (i, j), i < j, over positions 0..size-1 in lexicographic order
    return i * (size - 1) - i * (i - 1) // 2 + (j - i - 1)


class Tournaplex:
    """Semisimplicial complex whose d-simplices are tournaments on d+1 vertices.

    A simplex is a pair (verts, mask): ``verts`` is the ascending vertex tuple
    and ``mask`` packs one orientation bit per vertex pair in lexicographic
    pair order, bit 1 meaning verts[i] -> verts[j] for the pair (i, j). Faces
    are induced subtournaments.
    """

    __slots__ = ("by_dim", "graph")

    def __init__(self, simplices, graph=None):
        by_dim = {}
        for verts, mask in simplices:
            verts = tuple(verts)
            if list(verts) != sorted(set(verts)):
                raise ValueError(f"vertex tuple must be ascending: {verts}")
            d = len(verts) - 1
            npairs = d * (d + 1) // 2
            if not 0 <= mask < (1 << npairs):
                raise ValueError(f"mask {mask} out of range for {verts}")
            by_dim.setdefault(d, set()).add((verts, mask))
        self.by_dim = {
            d: tuple(sorted(cells)) for d, cells in sorted(by_dim.items())
        }
        self.graph = graph

    @property
    def dim(self):
        return max(self.by_dim) if self.by_dim else -1

    def cells(self, d):
        return self.by_dim.get(d, ())

    def __len__(self):
        return sum(len(c) for c in self.by_dim.values())

    def __contains__(self, cell):
        verts, mask = cell
        return (tuple(verts), mask) in set(self.by_dim.get(len(verts) - 1, ()))

    def __eq__(self, other):
        return isinstance(other, Tournaplex) and self.by_dim == other.by_dim

    def f_vector(self):
        return [len(self.by_dim.get(d, ())) for d in range(self.dim + 1)]

    @staticmethod
    def face(cell, p):
        """The face obtained by deleting the vertex at position ``p``."""
        verts, mask = cell
        size = len(verts)
        new_verts = verts[:p] + verts[p + 1:]
        new_mask = 0
        for i, j in itertools.combinations(range(size - 1), 2):
            oi = i + (i >= p)
            oj = j + (j >= p)
            if mask >> _pair_index(oi, oj, size) & 1:
                new_mask |= 1 << _pair_index(i, j, size - 1)
        return (new_verts, new_mask)

    @staticmethod
    def out_scores(cell):
        """Out-degree of each position inside the simplex's tournament."""
        verts, mask = cell
        size = len(verts)
        scores = [0] * size
        for i, j in itertools.combinations(range(size), 2):
            if mask >> _pair_index(i, j, size) & 1:
                scores[i] += 1
            else:
                scores[j] += 1
        return scores

    @staticmethod
    def is_transitive(cell):
        scores = Tournaplex.out_scores(cell)
        return sorted(scores) == list(range(len(scores)))

    @staticmethod
    def to_ordered(cell):
        """Vertex tuple in domination order; only defined for transitive cells."""
        verts, _ = cell
        scores = Tournaplex.out_scores(cell)
        if sorted(scores) != list(range(len(verts))):
            raise ValueError(f"cell is not transitive: {cell}")
        order = sorted(range(len(verts)), key=lambda p: -scores[p])
        return tuple(verts[p] for p in order)

    def transitive_subcomplex(self):
        """The ordered simplicial complex of transitive cells."""
        return Complex(
            self.to_ordered(c) for cells in self.by_dim.values() for c in cells
        )

    def is_closed(self):
        for d, cells in self.by_dim.items():
            if d == 0:
                continue
            lower = set(self.by_dim.get(d - 1, ()))
            for cell in cells:
                for p in range(d + 1):
                    if self.face(cell, p) not in lower:
                        return False
        return True

    def closure(self):
        closed = {cell for cells in self.by_dim.values() for cell in cells}
        stack = list(closed)
        while stack:
            cell = stack.pop()
            if len(cell[0]) == 1:
                continue
            for p in range(len(cell[0])):
                f = self.face(cell, p)
                if f not in closed:
                    closed.add(f)
                    stack.append(f)
        return Tournaplex(closed, graph=self.graph)

    def digest(self):
        h = hashlib.sha256()
        for d in sorted(self.by_dim):
            for verts, mask in self.by_dim[d]:
                h.update(f"{' '.join(map(str, verts))} {mask}\n".encode())
        return h.hexdigest()

    def __repr__(self):
        return f"Tournaplex(f_vector={self.f_vector()})"


def flag_tournaplex(G):
    """All subtournaments of ``G`` as a tournaplex.

    The transitive cells, taken in domination order, are exactly the directed
    flag complex of ``G``.
    """
    above = [set() for _ in range(G.n)]
    for u, v in G.undirected_pairs():
        above[u].add(v)
    edges = G.edges
    cells = []

    def grow(verts, dirs, cands):
        size = len(verts)
        mask = 0
        for (i, j), bit in dirs.items():
            if bit:
                mask |= 1 << _pair_index(i, j, size)
        cells.append((verts, mask))
        for u in sorted(cands):
            k = size
            options = []
            for i, w in enumerate(verts):
                opts = []
                if (w, u) in edges:
                    opts.append(1)
                if (u, w) in edges:
                    opts.append(0)
                options.append(opts)
            for bits in itertools.product(*options):
                new_dirs = dict(dirs)
                for i, b in enumerate(bits):
                    new_dirs[(i, k)] = b
                grow(verts + (u,), new_dirs, cands & above[u])

    for v in range(G.n):
        grow((v,), {}, above[v])
    return Tournaplex(cells, graph=G)


class WeightUnavailableError(NotImplementedError):
    pass


def transitive_indicator_weight(graph, verts, mask):
    """0 for transitive cells, 1 otherwise; a smoke-test filtration weight."""
    return 0 if Tournaplex.is_transitive((verts, mask)) else 1


def _local_directionality_placeholder(graph, verts, mask):
    raise WeightUnavailableError(
        "the local-directionality weight is defined in an external reference; "
        "register an implementation with register_weight('local-directionality', fn)"
    )


WEIGHTS = {
    "transitive-indicator": transitive_indicator_weight,
    "local-directionality": _local_directionality_placeholder,
}


def register_weight(name, fn):
    """Register (or replace) a filtration weight plug-in.

    ``fn(graph, verts, mask)`` must return a nonnegative integer.
    """
    WEIGHTS[name] = fn


def filtration_stage(T, weight, d):
    """Cells of weight at most ``d``, closed downward.

    ``weight`` is a callable ``fn(graph, verts, mask)`` or the name of a
    registered plug-in. Closing downward corrects plug-ins that are not
    monotone with respect to faces.
    """
    fn = WEIGHTS[weight] if isinstance(weight, str) else weight
    kept = [
        cell
        for cells in T.by_dim.values()
        for cell in cells
        if fn(T.graph, cell[0], cell[1]) <= d
    ]
    return Tournaplex(kept, graph=T.graph).closure()


def graph_with_3cycle_triangles(G):
    """The tournaplex made of ``G`` itself plus one triangle per directed
    3-cycle. This is the structural description of the low local-directionality
    stages and serves as the gate for trusting a plugged-in weight."""
    cells = [((v,), 0) for v in range(G.n)]
    for u, v in G.edges:
        if u < v:
            cells.append(((u, v), 1))
        else:
            cells.append(((v, u), 0))
    out, ins = G.out_sets, G.in_sets
    seen = set()
    for a in range(G.n):
        for b in out[a]:
            for c in out[b] & ins[a]:
                if a != min(a, b, c):
                    continue  # canonical rotation of the cycle a->b->c->a
                cycle_edges = {(a, b), (b, c), (c, a)}
                verts = tuple(sorted((a, b, c)))
                mask = 0
                for bit, (i, j) in enumerate(itertools.combinations(range(3), 2)):
                    if (verts[i], verts[j]) in cycle_edges:
                        mask |= 1 << bit
                if (verts, mask) not in seen:
                    seen.add((verts, mask))
                    cells.append((verts, mask))
    return Tournaplex(cells, graph=G)


def stage_matches_graph_with_3cycles(stage, G):
    """Structural sanity gate: does this filtration stage consist of exactly
    the graph with a triangle glued in for every directed 3-cycle?"""
    return stage == graph_with_3cycle_triangles(G)
