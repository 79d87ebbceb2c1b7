"""Simplicial boundary matrices and integral homology for ordered complexes
and tournaplexes.

Reporting follows the unreduced convention (degree 0 included, beta_0 counts
connected components) and torsion is given as the invariant factor chain of
the relevant boundary matrix, so Z3 appears as the factor 3.
"""

from __future__ import annotations

from dataclasses import dataclass

from .flag import Tournaplex
from .intlinalg import IntMatrix, rank, smith_normal_form
from .simplex import Complex, faces

__all__ = [
    "HomologyProfile",
    "boundary_matrix",
    "integral_homology",
    "betti_only",
    "format_profile",
    "parse_profile",
]


@dataclass(frozen=True)
class HomologyProfile:
    """Per-degree Betti numbers and sorted torsion coefficient lists."""

    betti: tuple
    torsion: tuple

    def __post_init__(self):
        if len(self.betti) != len(self.torsion):
            raise ValueError("betti and torsion must cover the same degrees")
        if self.torsion and self.torsion[0]:
            raise ValueError("degree 0 cannot carry torsion")

    @property
    def dim(self):
        return len(self.betti) - 1

    def reduced_betti(self):
        """Reduced Betti numbers: degree 0 drops by one."""
        return (self.betti[0] - 1,) + self.betti[1:]

    def is_torsion_free(self):
        return all(not t for t in self.torsion)

    def lines(self):
        return [
            f"{d}: betti={self.betti[d]} torsion=[{','.join(map(str, self.torsion[d]))}]"
            for d in range(len(self.betti))
        ]

    def __str__(self):
        return "\n".join(self.lines())


def format_profile(profile):
    return str(profile) + "\n"


def parse_profile(text):
    betti = []
    torsion = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        try:
            head, rest = line.split(":", 1)
            d = int(head)
            b_part, t_part = rest.split("torsion=")
            b = int(b_part.strip().removeprefix("betti="))
            t_body = t_part.strip()
            if not (t_body.startswith("[") and t_body.endswith("]")):
                raise ValueError
            inner = t_body[1:-1].strip()
            t = tuple(int(x) for x in inner.split(",")) if inner else ()
        except ValueError as exc:
            raise ValueError(f"bad profile line {lineno}: {line!r}") from exc
        if d != len(betti):
            raise ValueError(f"profile degrees out of order at line {lineno}")
        betti.append(b)
        torsion.append(t)
    return HomologyProfile(tuple(betti), tuple(torsion))


def _chain_cells(X, d):
    """Canonically ordered d-cells of a closed complex or tournaplex."""
    if isinstance(X, Complex):
        return [s for s in X.simplices if len(s) == d + 1]
    if isinstance(X, Tournaplex):
        return list(X.cells(d))
    raise TypeError(f"unsupported complex type: {type(X).__name__}")


def _cell_boundary(X, cell):
    """Signed codimension-1 faces of a cell: (face, (-1)^i) per deleted index."""
    if isinstance(X, Complex):
        return [(f, 1 if i % 2 == 0 else -1) for i, f in enumerate(faces(cell))]
    size = len(cell[0])
    if size == 1:
        return []
    return [
        (Tournaplex.face(cell, p), 1 if p % 2 == 0 else -1) for p in range(size)
    ]


def _require_closed(X):
    if not X.is_closed():
        raise ValueError("complex must be downward closed; call closure() first")


def boundary_matrix(X, d):
    """Boundary operator in degree ``d`` as an exact integer matrix.

    Rows are the (d-1)-cells and columns the d-cells of the downward-closed
    complex ``X``, both in short-lex order; the entry for the i-th face of a
    cell is (-1)^i.
    """
    if not 1 <= d <= X.dim:
        raise ValueError(f"degree {d} out of range for a {X.dim}-dimensional complex")
    _require_closed(X)
    row_index = {c: i for i, c in enumerate(_chain_cells(X, d - 1))}
    cols = []
    for cell in _chain_cells(X, d):
        col = {}
        for f, sign in _cell_boundary(X, cell):
            i = row_index[f]
            col[i] = col.get(i, 0) + sign
        cols.append(col)
    return IntMatrix.from_columns(len(row_index), cols)


_profile_cache = {}


def integral_homology(X, use_cache=True):
    """Unreduced integral homology: Betti numbers plus torsion coefficients.

    betti_d = #d-cells - rank(boundary_d) - rank(boundary_{d+1}), and
    torsion_d is the invariant-factor chain (entries > 1) of boundary_{d+1}.
    """
    if len(X) == 0:
        raise ValueError("homology of the empty complex is undefined")
    _require_closed(X)
    key = (type(X).__name__, X.digest())
    if use_cache and key in _profile_cache:
        return _profile_cache[key]
    dim = X.dim
    counts = [len(_chain_cells(X, d)) for d in range(dim + 1)]
    snfs = [None] + [smith_normal_form(boundary_matrix(X, d)) for d in range(1, dim + 1)]
    betti = []
    torsion = []
    for d in range(dim + 1):
        r_d = snfs[d].rank if d >= 1 else 0
        r_up = snfs[d + 1].rank if d + 1 <= dim else 0
        betti.append(counts[d] - r_d - r_up)
        torsion.append(snfs[d + 1].torsion() if d + 1 <= dim else ())
    profile = HomologyProfile(tuple(betti), tuple(torsion))
    if use_cache:
        _profile_cache[key] = profile
    return profile


def betti_only(X, field="Q"):
    """Rational Betti numbers via exact ranks; the fast path for probe loops.

    Agrees with :func:`integral_homology` whenever torsion is empty (and on
    the free ranks always). Only rational coefficients are supported.
    """
    if field not in ("Q", None):
        raise ValueError("only the rational fast path is supported")
    if len(X) == 0:
        raise ValueError("homology of the empty complex is undefined")
    _require_closed(X)
    dim = X.dim
    counts = [len(_chain_cells(X, d)) for d in range(dim + 1)]
    ranks = [0] + [rank(boundary_matrix(X, d)) for d in range(1, dim + 1)] + [0]
    return [counts[d] - ranks[d] - ranks[d + 1] for d in range(dim + 1)]
