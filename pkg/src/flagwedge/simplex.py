"""Ordered simplicial complexes as short-lex sorted simplex lists.

An ordered simplex is a tuple of distinct nonnegative vertex ids. A complex is
a finite collection of such simplices, kept in short-lex order; it is *not*
required to be downward closed, so a list of maximal faces is itself a valid
complex spanning its downward closure.
"""

from __future__ import annotations

import hashlib
from itertools import combinations

Simplex = tuple

__all__ = [
    "Simplex",
    "short_lex_key",
    "short_lex_compare",
    "faces",
    "proper_subtuples",
    "is_subsequence",
    "Complex",
    "pop",
    "cone",
]


def short_lex_key(s):
    """Sort key realising the short-lex order: length first, then lexicographic."""
    return (len(s), s)


def short_lex_compare(s1, s2):
    """Compare two simplices in short-lex order; returns -1, 0 or 1."""
    k1, k2 = short_lex_key(s1), short_lex_key(s2)
    if k1 < k2:
        return -1
    if k1 > k2:
        return 1
    return 0


def faces(s):
    """All codimension-1 faces of ``s`` in deletion order (delete index 0, 1, ...).

    A 0-simplex has no faces; the empty list is returned rather than an error so
    generic loops need no special case.
    """
    if len(s) <= 1:
        return []
    return [s[:i] + s[i + 1:] for i in range(len(s))]


def proper_subtuples(s):
    """Yield every nonempty proper ordered subtuple of ``s``."""
    n = len(s)
    for k in range(1, n):
        for c in combinations(s, k):
            yield c


def is_subsequence(a, b):
    """True if ``a`` is an ordered subtuple of ``b`` (not necessarily proper)."""
    if len(a) > len(b):
        return False
    it = iter(b)
    return all(v in it for v in a)


def _validate_simplex(s):
    if not isinstance(s, tuple) or len(s) == 0:
        raise ValueError(f"simplex must be a nonempty tuple, got {s!r}")
    for v in s:
        if not isinstance(v, int) or v < 0:
            raise ValueError(f"vertex ids must be nonnegative integers, got {s!r}")
    if len(set(s)) != len(s):
        raise ValueError(f"simplex entries must be pairwise distinct, got {s!r}")


class Complex:
    """Immutable ordered simplicial complex, canonically short-lex sorted.

    The simplex list is deduplicated and sorted on construction. The complex is
    interpreted as spanning the downward closure of its simplices; use
    :meth:`closure` to materialise that closure.
    """

    __slots__ = ("simplices", "_set", "_closure", "_maximal")

    def __init__(self, simplices=()):
        sims = set()
        for s in simplices:
            s = tuple(s)
            _validate_simplex(s)
            sims.add(s)
        object.__setattr__(self, "simplices", tuple(sorted(sims, key=short_lex_key)))
        object.__setattr__(self, "_set", sims)
        object.__setattr__(self, "_closure", None)
        object.__setattr__(self, "_maximal", None)

    def __setattr__(self, name, value):
        raise AttributeError("Complex is immutable")

    @classmethod
    def _from_canonical(cls, sorted_simplices):
        # internal: caller guarantees validity, sortedness and uniqueness
        obj = object.__new__(cls)
        object.__setattr__(obj, "simplices", tuple(sorted_simplices))
        object.__setattr__(obj, "_set", set(obj.simplices))
        object.__setattr__(obj, "_closure", None)
        object.__setattr__(obj, "_maximal", None)
        return obj

    def __len__(self):
        return len(self.simplices)

    def __iter__(self):
        return iter(self.simplices)

    def __contains__(self, s):
        return tuple(s) in self._set

    def __eq__(self, other):
        return isinstance(other, Complex) and self.simplices == other.simplices

    def __hash__(self):
        return hash(self.simplices)

    def __repr__(self):
        if len(self) > 8:
            shown = ", ".join(map(str, self.simplices[:8]))
            return f"Complex([{shown}, ... {len(self)} simplices])"
        return f"Complex([{', '.join(map(str, self.simplices))}])"

    @property
    def dim(self):
        """Largest simplex dimension; -1 for the empty complex."""
        if not self.simplices:
            return -1
        return len(self.simplices[-1]) - 1

    def vertices(self):
        """Sorted tuple of vertex ids occurring in any simplex."""
        vs = set()
        for s in self.simplices:
            vs.update(s)
        return tuple(sorted(vs))

    def max_vertex(self):
        if not self.simplices:
            raise ValueError("empty complex has no vertices")
        return max(max(s) for s in self.simplices)

    def f_vector(self):
        """Simplex counts per dimension. Meaningful for downward-closed input;
        callers close first when the complex is given by maximal faces."""
        counts = [0] * (self.dim + 1)
        for s in self.simplices:
            counts[len(s) - 1] += 1
        return counts

    def closure(self):
        """Smallest downward-closed complex containing this one."""
        if self._closure is not None:
            return self._closure
        closed = set(self._set)
        for s in self.simplices:
            for k in range(1, len(s)):
                closed.update(combinations(s, k))
        result = Complex._from_canonical(sorted(closed, key=short_lex_key))
        object.__setattr__(result, "_closure", result)
        object.__setattr__(self, "_closure", result)
        return result

    def is_closed(self):
        """True if every codimension-1 face of every simplex is present."""
        return all(f in self._set for s in self.simplices for f in faces(s))

    def maximal_faces(self):
        """Simplices that are not proper ordered subtuples of any other simplex."""
        if self._maximal is not None:
            return self._maximal
        by_vertex = {}
        for i, s in enumerate(self.simplices):
            for v in s:
                by_vertex.setdefault(v, []).append(i)
        sims = self.simplices
        maximal = []
        for i, s in enumerate(sims):
            # candidates must contain every vertex of s; scan the rarest vertex
            pool = min((by_vertex[v] for v in s), key=len)
            if not any(
                len(sims[j]) > len(s) and is_subsequence(s, sims[j]) for j in pool
            ):
                maximal.append(s)
        result = Complex._from_canonical(maximal)
        object.__setattr__(self, "_maximal", result)
        return result

    def free_faces(self):
        """All pairs (tau, sigma) with tau a proper subtuple of exactly one
        simplex of this complex, sorted short-lex by tau.

        The complex is expected to be a maximal-face list; no codimension
        restriction is imposed on the pair.
        """
        count = {}
        witness = {}
        for sigma in self.simplices:
            for tau in proper_subtuples(sigma):
                count[tau] = count.get(tau, 0) + 1
                witness[tau] = sigma
        return sorted(
            ((tau, witness[tau]) for tau, c in count.items() if c == 1),
            key=lambda p: short_lex_key(p[0]),
        )

    def components(self):
        """Partition of the simplices by vertex connectivity.

        Returns a list of Complex objects ordered so that their sorted vertex
        sets are short-lex ordered.
        """
        parent = {}

        def find(v):
            root = v
            while parent[root] != root:
                root = parent[root]
            while parent[v] != root:
                parent[v], v = root, parent[v]
            return root

        for s in self.simplices:
            for v in s:
                parent.setdefault(v, v)
            r = find(s[0])
            for v in s[1:]:
                parent[find(v)] = r
        groups = {}
        for s in self.simplices:
            groups.setdefault(find(s[0]), []).append(s)
        comps = [Complex._from_canonical(g) for g in groups.values()]
        comps.sort(key=lambda c: short_lex_key(c.vertices()))
        return comps

    def digest(self):
        """Stable hex digest of the canonical simplex list."""
        h = hashlib.sha256()
        for s in self.simplices:
            h.update(" ".join(map(str, s)).encode())
            h.update(b"\n")
        return h.hexdigest()


def pop(S, T):
    """Remove the simplices of ``T`` from ``S``, add their codimension-1 faces
    back, and return the maximal faces of the result.

    Every element of ``T`` must occur in ``S``.
    """
    S = S if isinstance(S, Complex) else Complex(S)
    removed = set()
    for t in T:
        t = tuple(t)
        if t not in S:
            raise ValueError(f"pop target absent: {t}")
        removed.add(t)
    spanning = [s for s in S.simplices if s not in removed]
    for t in sorted(removed, key=short_lex_key):
        spanning.extend(faces(t))
    return Complex(spanning).maximal_faces()


def cone(S, G):
    """Cone off the subcomplexes ``G`` of ``S`` and return the maximal faces.

    ``G`` is a list of complexes (or simplex iterables), each contained in the
    downward closure of ``S``. The i-th apex is ``m + 1 + i`` where ``m`` is the
    largest vertex of ``S``; this numbering is a hard contract relied on by
    certificate verification.
    """
    S = S if isinstance(S, Complex) else Complex(S)
    bases = [list(g) for g in G]
    if not bases:
        return S.maximal_faces()
    closed = S.closure()
    m = S.max_vertex()
    spanning = list(S.simplices)
    for i, base in enumerate(bases):
        if not base:
            raise ValueError("cone base must be nonempty")
        apex = m + 1 + i
        for g in base:
            g = tuple(g)
            if g not in closed:
                raise ValueError(f"cone base not a subcomplex: {g}")
            spanning.append(g + (apex,))
    return Complex(spanning).maximal_faces()
