"""Deterministic collapse machinery: greedy sequential collapse, the
collapsibility test, greedy sphere-cell selection and the pop-everything
wedge detector.

The greedy policy is fixed: always collapse the short-lex-first free face.
A free face is a simplex contained in exactly one maximal simplex, with no
codimension restriction; collapsing removes the whole interval between the
free face and its maximal coface, which for a free face equals the star of
the free face.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import combinations
from math import gcd

from .homology import HomologyProfile, betti_only, boundary_matrix, integral_homology
from .simplex import Complex, faces, pop, proper_subtuples, short_lex_key

__all__ = [
    "CollapseStep",
    "CollapseState",
    "seq_collapse",
    "seq_collapsible",
    "select_cells",
    "SelectCellsError",
    "pop_everything",
]


@dataclass(frozen=True)
class CollapseStep:
    tau: tuple
    sigma: tuple


class CollapseState:
    """Incremental state for a run of elementary collapses.

    Tracks the closed simplex set, codimension-1 coface links, the maximal
    faces, and for every simplex the number of maximal faces properly
    containing it (1 means free). A lazy heap yields the short-lex-first
    free face; stale entries are discarded on pop.
    """

    def __init__(self, S):
        X = (S if isinstance(S, Complex) else Complex(S)).closure()
        self.sims = set(X.simplices)
        self.cofaces = {s: set() for s in self.sims}
        for s in self.sims:
            for f in faces(s):
                self.cofaces[f].add(s)
        self.maximal = {s for s in self.sims if not self.cofaces[s]}
        self.mcount = {s: 0 for s in self.sims}
        for sigma in self.maximal:
            for tau in proper_subtuples(sigma):
                self.mcount[tau] += 1
        self.heap = [short_lex_key(s) for s, c in self.mcount.items() if c == 1]
        heapq.heapify(self.heap)
        self.steps = []

    def next_free_face(self):
        while self.heap:
            _, tau = heapq.heappop(self.heap)
            if tau in self.sims and self.mcount.get(tau) == 1:
                return tau
        return None

    def unique_maximal_coface(self, tau):
        # any upward chain ends at the unique maximal simplex containing tau
        rho = tau
        while self.cofaces[rho]:
            rho = next(iter(self.cofaces[rho]))
        return rho

    def collapse(self, tau):
        """Collapse the free face ``tau`` along its unique maximal coface."""
        sigma = self.unique_maximal_coface(tau)
        tau_set = set(tau)
        extra = [v for v in sigma if v not in tau_set]
        interval = []
        for k in range(len(extra) + 1):
            for chosen in combinations(extra, k):
                keep = tau_set.union(chosen)
                interval.append(tuple(v for v in sigma if v in keep))

        push = self.heap
        for rho in interval:
            self.sims.discard(rho)
            self.maximal.discard(rho)
            self.mcount.pop(rho, None)
        newly_maximal = []
        for rho in interval:
            for f in faces(rho):
                if f in self.sims:
                    cf = self.cofaces[f]
                    cf.discard(rho)
                    if not cf:
                        newly_maximal.append(f)
            self.cofaces.pop(rho, None)
        for tp in proper_subtuples(sigma):
            if tp in self.sims:
                c = self.mcount[tp] - 1
                self.mcount[tp] = c
                if c == 1:
                    heapq.heappush(push, short_lex_key(tp))
        for f in newly_maximal:
            self.maximal.add(f)
            for tp in proper_subtuples(f):
                if tp in self.sims:
                    c = self.mcount[tp] + 1
                    self.mcount[tp] = c
                    if c == 1:
                        heapq.heappush(push, short_lex_key(tp))
        self.steps.append(CollapseStep(tau, sigma))

    def run(self):
        while True:
            tau = self.next_free_face()
            if tau is None:
                break
            self.collapse(tau)
        return self.maximal_complex()

    def maximal_complex(self):
        return Complex(self.maximal)


def seq_collapse(S):
    """Greedy collapse loop; returns the final maximal faces and the step log.

    Fully deterministic: at each step the short-lex-first free face of the
    current complex is collapsed along its unique maximal coface.
    """
    state = CollapseState(S)
    M = state.run()
    return M, state.steps


def seq_collapsible(S):
    """True iff the greedy collapse ends at a single vertex."""
    M, _ = seq_collapse(S)
    return len(M) == 1 and len(M.simplices[0]) == 1


class SelectCellsError(RuntimeError):
    """The final integral check after cell selection failed."""


def select_cells(M, d, probe="kernel", verify_integral=True):
    """Greedy scan of the maximal d-cells of ``M``: a cell is kept iff popping
    it from the current complex drops beta_d by one and preserves every other
    Betti number. Output order is the scan (short-lex) order.

    ``probe="kernel"`` decides each pop by whether the cell's boundary column
    lies in the span of the remaining ones, tracked on an exact integer kernel
    basis; this is equivalent to the literal Betti-vector comparison offered
    by ``probe="betti"`` but does one elimination instead of one homology
    computation per candidate. A single integral check at the end re-verifies
    that torsion was preserved as well.
    """
    M = M if isinstance(M, Complex) else Complex(M)
    X = M.closure()
    if d < 0:
        raise ValueError("degree must be nonnegative")
    scan = [s for s in M.simplices if len(s) == d + 1]
    if not scan or d > X.dim:
        return []
    if d == 0:
        # popping an isolated vertex always drops beta_0 by one
        selected = list(scan)
    elif probe == "kernel":
        selected = _select_by_kernel(X, scan, d)
    elif probe == "betti":
        selected = _select_by_betti(M, scan, d)
    else:
        raise ValueError(f"unknown probe {probe!r}")
    if verify_integral and selected:
        before = integral_homology(X)
        popped = pop(M, selected)
        after = (
            integral_homology(popped.closure())
            if len(popped)
            else HomologyProfile((), ())
        )
        if not _popped_profile_matches(before, after, d, len(selected)):
            raise SelectCellsError(
                f"integral homology after popping {len(selected)} cells in degree "
                f"{d} does not match the probe decisions"
            )
    return selected


def _popped_profile_matches(before, after, d, k):
    nb = len(before.betti)
    betti_after = list(after.betti) + [0] * (nb - len(after.betti))
    torsion_after = list(after.torsion) + [()] * (nb - len(after.torsion))
    if len(betti_after) != nb:
        return False
    expect = list(before.betti)
    expect[d] -= k
    return betti_after == expect and tuple(torsion_after) == before.torsion


def _select_by_betti(M, scan, d):
    selected = []
    current = pop(M, [])
    before = betti_only(current.closure())
    for s in scan:
        probe = pop(current, [s]).closure()
        after = betti_only(probe)
        if _betti_dropped_once(before, after, d):
            selected.append(s)
            current = pop(M, selected)
            before = betti_only(current.closure())
    return selected


def _betti_dropped_once(before, after, d):
    nb = max(len(before), len(after))
    b = before + [0] * (nb - len(before))
    a = after + [0] * (nb - len(after))
    expect = list(b)
    expect[d] -= 1
    return a == expect


def _select_by_kernel(X, scan, d):
    cells_d = [s for s in X.simplices if len(s) == d + 1]
    col_of = {s: j for j, s in enumerate(cells_d)}
    bd = boundary_matrix(X, d)
    columns = [dict() for _ in range(bd.ncols)]
    for i, row in enumerate(bd.rows):
        for j, v in row.items():
            columns[j][i] = v
    kernel = _column_kernel(columns)
    selected = []
    for s in scan:
        j = col_of[s]
        hits = [v for v in kernel if v.get(j)]
        if not hits:
            continue
        pivot = hits[0]
        a = pivot[j]
        for v in hits[1:]:
            b = v[j]
            g = gcd(a, b)
            _combine_into(v, a // g, b // g, pivot)
        kernel.remove(pivot)
        selected.append(s)
    return selected


def _column_kernel(columns):
    """Integer basis of the kernel of the matrix with the given sparse columns,
    as combination dicts over column indices."""
    pivots = {}
    kernel = []
    for j, col in enumerate(columns):
        vec = dict(col)
        comb = {j: 1}
        while vec:
            r = min(vec)
            if r not in pivots:
                pivots[r] = (vec, comb)
                break
            pvec, pcomb = pivots[r]
            a, b = vec[r], pvec[r]
            g = gcd(a, b)
            ca, cb = b // g, a // g
            vec = _lin(ca, vec, cb, pvec)
            comb = _lin(ca, comb, cb, pcomb)
            cont = 0
            for v in vec.values():
                cont = gcd(cont, v)
            for v in comb.values():
                cont = gcd(cont, v)
            if cont > 1:
                vec = {k: v // cont for k, v in vec.items()}
                comb = {k: v // cont for k, v in comb.items()}
        else:
            kernel.append(comb)
    return kernel


def _lin(ca, x, cb, y):
    """ca*x - cb*y on sparse dicts, zeros dropped."""
    out = {k: ca * v for k, v in x.items()}
    for k, v in y.items():
        new = out.get(k, 0) - cb * v
        if new:
            out[k] = new
        else:
            out.pop(k, None)
    return out


def _combine_into(v, ca, cb, pivot):
    """v <- ca*v - cb*pivot in place, with content normalisation."""
    merged = _lin(ca, v, cb, pivot)
    cont = 0
    for val in merged.values():
        cont = gcd(cont, val)
    v.clear()
    for k, val in merged.items():
        v[k] = val // cont if cont > 1 else val


def pop_everything(S):
    """Wedge-of-spheres detector based on popping cells and collapsing.

    Collapse, select per-degree cells whose count must match the Betti
    numbers, pop them all, and test collapsibility of the rest. True means
    the complex is homotopy equivalent to a wedge of spheres whose dimensions
    are those of the returned witness cells (component-wise for disconnected
    input, with the usual basepoint caveat for wedges).

    False is a non-answer: nothing can be concluded from it.
    """
    X = (S if isinstance(S, Complex) else Complex(S)).closure()
    if len(X) == 0:
        return True, []
    witness = []
    for comp in X.components():
        ok, w = _pop_everything_component(comp)
        if not ok:
            return False, []
        witness.extend(w)
    return True, witness


def _pop_everything_component(comp):
    M, _ = seq_collapse(comp)
    profile = integral_homology(comp)
    witness = []
    for i in range(1, comp.dim + 1):
        b = profile.betti[i]
        if b:
            try:
                cells = select_cells(M, i)
            except SelectCellsError:
                return False, []
            if len(cells) != b:
                return False, []
            witness.extend(cells)
    A = pop(M, witness) if witness else M
    if not seq_collapsible(A):
        return False, []
    # a successful run certifies the wedge, so the homology must be free
    assert profile.is_torsion_free(), "collapsible remainder with torsion present"
    return True, witness
