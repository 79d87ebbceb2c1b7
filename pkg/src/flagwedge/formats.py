"""Data ingestion and text serialization: connectome CSV, edge lists,
tournament collections, and the complex/tournaplex piping formats.

Parsing is locale-independent and byte-deterministic; identical files give
identical graphs. All formats round-trip exactly.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .digraph import Digraph
from .flag import Tournaplex
from .simplex import Complex

__all__ = [
    "InputFormatError",
    "ConnectomeRecord",
    "read_connectome_records",
    "connectome_graph",
    "load_connectome",
    "preprocess_celegans",
    "named_edges",
    "read_edge_list",
    "write_edge_list",
    "read_tournaments",
    "write_tournaments",
    "tournament_from_bits",
    "tournament_to_bits",
    "write_complex",
    "read_complex",
    "write_tournaplex",
    "read_tournaplex",
]


class InputFormatError(ValueError):
    pass


CONNECTION_TYPES = {"S", "SP", "R", "RP", "EJ", "NMJ"}


@dataclass(frozen=True)
class ConnectomeRecord:
    neuron1: str
    neuron2: str
    kind: str  # one of S, SP, R, RP, EJ, NMJ (normalised uppercase)
    nbr: int


def read_connectome_records(source):
    """Parse a connectome CSV: neuron1, neuron2, type, nbr per row.

    Neuron names are matched case-insensitively (the data mixes avfl with
    AVFL) and are normalised to uppercase. A single header row is tolerated.
    """
    if isinstance(source, str):
        text = source
    else:
        text = source.read()
    records = []
    rows = list(csv.reader(io.StringIO(text)))
    for rowno, row in enumerate(rows, 1):
        cells = [c.strip() for c in row]
        if not any(cells):
            continue
        if len(cells) < 4:
            raise InputFormatError(f"row {rowno}: expected 4 columns, got {len(cells)}")
        kind = cells[2].upper()
        if kind not in CONNECTION_TYPES:
            if rowno == 1:
                continue  # header row
            raise InputFormatError(f"row {rowno}: unknown connection type {cells[2]!r}")
        try:
            nbr = int(cells[3])
        except ValueError:
            raise InputFormatError(f"row {rowno}: bad synapse count {cells[3]!r}") from None
        records.append(ConnectomeRecord(cells[0].upper(), cells[1].upper(), kind, nbr))
    if not records:
        raise InputFormatError("no records")
    return records


def connectome_graph(records, mode="S"):
    """Digraph from chemical-synapse records.

    mode "S": rows of type S/Sp contribute the edge first -> second.
    mode "R": rows of type R/Rp contribute the edge second -> first.
    Duplicate edges merge. Vertex ids follow the first occurrence of each
    neuron name over the (first, second) pairs of the selected rows.
    """
    mode = mode.upper().removesuffix("-SIDE")
    if mode not in ("S", "R"):
        raise ValueError("mode must be 'S' or 'R'")
    kinds = {"S", "SP"} if mode == "S" else {"R", "RP"}
    selected = [r for r in records if r.kind in kinds]
    if not selected:
        raise InputFormatError(f"no records of type {mode}/{mode}p")
    order = {}
    for r in selected:
        for name in (r.neuron1, r.neuron2):
            if name not in order:
                order[name] = len(order)
    edges = set()
    for r in selected:
        u, v = order[r.neuron1], order[r.neuron2]
        edges.add((u, v) if mode == "S" else (v, u))
    names = tuple(sorted(order, key=order.get))
    return Digraph(len(order), frozenset(edges), names)


def load_connectome(source, mode="S"):
    return connectome_graph(read_connectome_records(source), mode)


def named_edges(G):
    """Edge set over vertex names, for comparing graphs across numberings."""
    if G.names is None:
        raise ValueError("graph carries no vertex names")
    return {(G.names[u], G.names[v]) for u, v in G.edges}


def preprocess_celegans(G, records):
    """Renumber vertices by first occurrence over the S/Sp record pairs, then
    reverse every edge.

    The resulting vertex order is the one under which the downstream collapse
    pipeline is known to terminate; it is treated as sacred input and never
    re-sorted. Reversal changes neither the vertex order nor the homotopy type
    of the directed flag complex.
    """
    order = {}
    for r in records:
        if r.kind in ("S", "SP"):
            for name in (r.neuron1, r.neuron2):
                if name not in order:
                    order[name] = len(order)
    if G.names is None or set(G.names) != set(order):
        raise ValueError("graph names do not match the S/Sp records")
    relabel = {old: order[name] for old, name in enumerate(G.names)}
    edges = frozenset((relabel[v], relabel[u]) for u, v in G.edges)
    names = tuple(sorted(order, key=order.get))
    return Digraph(G.n, edges, names)


def read_edge_list(text):
    """Edge list: one `u v` pair per line, `#` comments, 0-based ids.

    A `# n=<count>` comment fixes the vertex count so graphs with isolated
    trailing vertices round-trip; otherwise the count is one past the largest
    id seen.
    """
    edges = set()
    n_declared = None
    max_id = -1
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("n="):
                try:
                    n_declared = int(body[2:])
                except ValueError:
                    raise InputFormatError(f"line {lineno}: bad vertex count") from None
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InputFormatError(f"line {lineno}: expected 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise InputFormatError(f"line {lineno}: bad vertex id") from None
        if u == v:
            raise InputFormatError(f"line {lineno}: loop at {u}")
        if u < 0 or v < 0:
            raise InputFormatError(f"line {lineno}: negative vertex id")
        if (u, v) in edges:
            raise InputFormatError(f"line {lineno}: duplicate edge {u} {v}")
        edges.add((u, v))
        max_id = max(max_id, u, v)
    n = n_declared if n_declared is not None else max_id + 1
    return Digraph(n, frozenset(edges))


def write_edge_list(G):
    lines = [f"# n={G.n}"]
    lines.extend(f"{u} {v}" for u, v in sorted(G.edges))
    return "\n".join(lines) + "\n"


def tournament_from_bits(line, n=None):
    """Tournament from a bit string: pair (i, j), i < j, in lexicographic
    order; '1' means i -> j."""
    line = line.strip()
    length = len(line)
    if n is None:
        n = int((1 + (1 + 8 * length) ** 0.5) / 2 + 0.5)
    if n * (n - 1) // 2 != length:
        raise InputFormatError(f"bit string of length {length} does not fit n={n}")
    edges = set()
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            c = line[k]
            if c == "1":
                edges.add((i, j))
            elif c == "0":
                edges.add((j, i))
            else:
                raise InputFormatError(f"bad character {c!r} in tournament line")
            k += 1
    return Digraph(n, frozenset(edges))


def tournament_to_bits(T):
    if not T.is_tournament():
        raise ValueError("not a tournament")
    bits = []
    for i in range(T.n):
        for j in range(i + 1, T.n):
            bits.append("1" if (i, j) in T.edges else "0")
    return "".join(bits)


def read_tournaments(text, n=None):
    """One tournament per line in the bit-string encoding."""
    tournaments = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            tournaments.append(tournament_from_bits(line, n))
        except InputFormatError as exc:
            raise InputFormatError(f"line {lineno}: {exc}") from None
    return tournaments


def write_tournaments(tournaments):
    return "\n".join(tournament_to_bits(T) for T in tournaments) + "\n"


def write_complex(X, n_vertices=None):
    if n_vertices is None:
        n_vertices = X.max_vertex() + 1 if len(X) else 0
    lines = [f"COMPLEX {n_vertices}"]
    lines.extend("S " + " ".join(map(str, s)) for s in X.simplices)
    return "\n".join(lines) + "\n"


def read_complex(text):
    simplices = []
    n_vertices = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split()
        if not tokens:
            continue
        if tokens[0] == "COMPLEX":
            if n_vertices is not None:
                raise InputFormatError(f"line {lineno}: duplicate header")
            try:
                n_vertices = int(tokens[1])
            except (IndexError, ValueError):
                raise InputFormatError(f"line {lineno}: bad header") from None
        elif tokens[0] == "S":
            if n_vertices is None:
                raise InputFormatError(f"line {lineno}: missing COMPLEX header")
            try:
                simplices.append(tuple(int(t) for t in tokens[1:]))
            except ValueError:
                raise InputFormatError(f"line {lineno}: bad vertex id") from None
        else:
            raise InputFormatError(f"line {lineno}: unknown line kind {tokens[0]!r}")
    if n_vertices is None:
        raise InputFormatError("missing COMPLEX header")
    X = Complex(simplices)
    if len(X) and X.max_vertex() >= n_vertices:
        raise InputFormatError("vertex id exceeds declared vertex count")
    return X


def write_tournaplex(T, n_vertices=None):
    if n_vertices is None:
        n_vertices = T.graph.n if T.graph is not None else (
            max((c[0][-1] for d in T.by_dim.values() for c in d), default=-1) + 1
        )
    lines = [f"TOURNAPLEX {n_vertices}"]
    for d in sorted(T.by_dim):
        for verts, mask in T.by_dim[d]:
            lines.append("T " + " ".join(map(str, verts)) + f" {mask}")
    return "\n".join(lines) + "\n"


def read_tournaplex(text):
    """Parse a tournaplex; the underlying graph is rebuilt from the 1-skeleton
    so filtration weights that consult the ambient graph keep working."""
    cells = []
    n_vertices = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split()
        if not tokens:
            continue
        if tokens[0] == "TOURNAPLEX":
            try:
                n_vertices = int(tokens[1])
            except (IndexError, ValueError):
                raise InputFormatError(f"line {lineno}: bad header") from None
        elif tokens[0] == "T":
            if n_vertices is None:
                raise InputFormatError(f"line {lineno}: missing TOURNAPLEX header")
            if len(tokens) < 3:
                raise InputFormatError(f"line {lineno}: need vertices and mask")
            try:
                verts = tuple(int(t) for t in tokens[1:-1])
                mask = int(tokens[-1])
            except ValueError:
                raise InputFormatError(f"line {lineno}: bad integer") from None
            cells.append((verts, mask))
        else:
            raise InputFormatError(f"line {lineno}: unknown line kind {tokens[0]!r}")
    if n_vertices is None:
        raise InputFormatError("missing TOURNAPLEX header")
    edges = set()
    for verts, mask in cells:
        if len(verts) == 2:
            u, v = verts
            edges.add((u, v) if mask & 1 else (v, u))
    graph = Digraph(n_vertices, frozenset(edges))
    return Tournaplex(cells, graph=graph)
