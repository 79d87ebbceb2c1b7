"""Cone-and-collapse pipeline: find coneable cycles or components, cone them
off, recollapse, and iterate, recording a replayable certificate of every
operation.

The engine always cones (it never pops the qualifying cells from the ambient
complex); popping is still a first-class certificate operation so that
verification covers it. A terminal single vertex certifies that the initial
complex is homotopy equivalent to a wedge of spheres whose dimension multiset
is recoverable from the coned subcomplexes; a non-vertex terminal complex is
a partial simplification and a supported outcome.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

from .collapse import pop_everything, seq_collapse, seq_collapsible
from .homology import boundary_matrix, integral_homology
from .intlinalg import nullspace
from .simplex import Complex, cone, is_subsequence, pop, short_lex_key

logger = logging.getLogger(__name__)

__all__ = [
    "CollapseOp",
    "PopOp",
    "ConeOp",
    "Certificate",
    "CertificateParseError",
    "CertificateError",
    "ReplayReport",
    "find_good_cycles",
    "unique_simplices",
    "find_good_components",
    "cone_and_collapse",
    "ConeAndCollapseResult",
    "replay_certificate",
    "verify_certificate",
    "wedge_summary",
]


@dataclass(frozen=True)
class CollapseOp:
    tau: tuple
    sigma: tuple


@dataclass(frozen=True)
class PopOp:
    simplex: tuple


@dataclass(frozen=True)
class ConeOp:
    apex: int
    bases: tuple


class CertificateParseError(ValueError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class CertificateError(RuntimeError):
    pass


@dataclass(frozen=True)
class Certificate:
    """Replayable log of a homotopy-equivalence recipe.

    Embeds the full initial simplex list; the final complex is recorded by its
    maximal-face count in the file footer (the in-memory maximal face list is
    kept when the certificate was produced rather than parsed).
    """

    n_vertices: int
    initial: tuple
    ops: tuple
    final_count: int
    final_maximal: tuple | None = field(default=None, compare=False)

    def initial_complex(self):
        return Complex(self.initial)

    def digest(self):
        return self.initial_complex().digest()

    def to_text(self):
        lines = [f"DFL {self.n_vertices}"]
        for s in self.initial:
            lines.append("S " + " ".join(map(str, s)))
        for op in self.ops:
            if isinstance(op, CollapseOp):
                lines.append(
                    "X "
                    + " ".join(map(str, op.tau))
                    + " ; "
                    + " ".join(map(str, op.sigma))
                )
            elif isinstance(op, PopOp):
                lines.append("P " + " ".join(map(str, op.simplex)))
            elif isinstance(op, ConeOp):
                body = " ; ".join(" ".join(map(str, b)) for b in op.bases)
                lines.append(f"C {op.apex} {{ {body} }}")
            else:
                raise TypeError(f"unknown operation {op!r}")
        lines.append(f"END {self.final_count}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        n_vertices = None
        initial = []
        ops = []
        final_count = None
        seen_op = False
        for lineno, raw in enumerate(text.splitlines(), 1):
            tokens = raw.split()
            if not tokens:
                continue
            if final_count is not None:
                raise CertificateParseError(lineno, "content after END")
            kind = tokens[0]
            if kind == "DFL":
                if n_vertices is not None or initial or ops:
                    raise CertificateParseError(lineno, "misplaced DFL header")
                n_vertices = _int(tokens, 1, lineno, expect_len=2)
            elif n_vertices is None:
                raise CertificateParseError(lineno, "missing DFL header")
            elif kind == "S":
                if seen_op:
                    raise CertificateParseError(lineno, "simplex line after operations")
                initial.append(_simplex(tokens[1:], lineno))
            elif kind == "X":
                seen_op = True
                if ";" not in tokens:
                    raise CertificateParseError(lineno, "collapse line needs ';'")
                cut = tokens.index(";")
                ops.append(
                    CollapseOp(
                        _simplex(tokens[1:cut], lineno), _simplex(tokens[cut + 1:], lineno)
                    )
                )
            elif kind == "P":
                seen_op = True
                ops.append(PopOp(_simplex(tokens[1:], lineno)))
            elif kind == "C":
                seen_op = True
                if len(tokens) < 5 or tokens[2] != "{" or tokens[-1] != "}":
                    raise CertificateParseError(lineno, "malformed cone line")
                apex = _int(tokens, 1, lineno)
                bases = []
                current = []
                for tok in tokens[3:-1]:
                    if tok == ";":
                        bases.append(_simplex(current, lineno))
                        current = []
                    else:
                        current.append(tok)
                bases.append(_simplex(current, lineno))
                ops.append(ConeOp(apex, tuple(bases)))
            elif kind == "END":
                final_count = _int(tokens, 1, lineno, expect_len=2)
            else:
                raise CertificateParseError(lineno, f"unknown line kind {kind!r}")
        if n_vertices is None:
            raise CertificateParseError(0, "empty certificate")
        if final_count is None:
            raise CertificateParseError(0, "missing END footer")
        initial_sorted = tuple(sorted(set(initial), key=short_lex_key))
        return cls(n_vertices, initial_sorted, tuple(ops), final_count)


def _int(tokens, idx, lineno, expect_len=None):
    if expect_len is not None and len(tokens) != expect_len:
        raise CertificateParseError(lineno, f"expected {expect_len} tokens")
    try:
        return int(tokens[idx])
    except (IndexError, ValueError):
        raise CertificateParseError(lineno, "expected an integer") from None


def _simplex(tokens, lineno):
    if not tokens:
        raise CertificateParseError(lineno, "empty simplex")
    try:
        verts = tuple(int(t) for t in tokens)
    except ValueError:
        raise CertificateParseError(lineno, "bad vertex id") from None
    if len(set(verts)) != len(verts) or any(v < 0 for v in verts):
        raise CertificateParseError(lineno, f"invalid simplex {verts}")
    return verts


@dataclass
class ReplayReport:
    ok: bool
    failed_step: int | None = None
    reason: str | None = None
    final_maximal: tuple | None = None


class _ReplayState:
    """Closed-complex state for certificate replay, independent of the search
    machinery: a simplex set plus a per-vertex index for star queries."""

    def __init__(self, simplices):
        self.sims = set()
        self.by_vertex = {}
        for s in simplices:
            self.add(s)
            for k in range(1, len(s)):
                for sub in combinations(s, k):
                    self.add(sub)

    def add(self, s):
        if s in self.sims:
            return
        self.sims.add(s)
        for v in s:
            self.by_vertex.setdefault(v, set()).add(s)

    def remove(self, s):
        self.sims.discard(s)
        for v in s:
            bucket = self.by_vertex.get(v)
            if bucket is not None:
                bucket.discard(s)
                if not bucket:
                    del self.by_vertex[v]

    def proper_star(self, tau):
        """All simplices properly containing ``tau``."""
        pool = min((self.by_vertex.get(v, set()) for v in tau), key=len)
        return [
            rho for rho in pool if len(rho) > len(tau) and is_subsequence(tau, rho)
        ]

    def max_vertex(self):
        return max(self.by_vertex)

    def maximal_faces(self):
        return Complex(self.sims).maximal_faces()


def replay_certificate(cert):
    """Replay every operation, validating it against the current state.

    Collapses must remove a genuinely free face along its unique maximal
    coface, pops must remove a present maximal simplex, and cones must use
    bases contained in the complex with the apex numbered one past the current
    largest vertex. The terminal state must match the recorded footer.
    """
    state = _ReplayState(cert.initial)
    for idx, op in enumerate(cert.ops):
        if isinstance(op, CollapseOp):
            tau, sigma = op.tau, op.sigma
            if tau not in state.sims or sigma not in state.sims:
                return ReplayReport(False, idx, "collapse cells not present")
            if tau == sigma or not is_subsequence(tau, sigma):
                return ReplayReport(False, idx, "tau is not a proper face of sigma")
            star = state.proper_star(tau)
            if not all(is_subsequence(rho, sigma) for rho in star):
                return ReplayReport(False, idx, "tau is not a free face of sigma")
            state.remove(tau)
            for rho in star:
                state.remove(rho)
        elif isinstance(op, PopOp):
            s = op.simplex
            if s not in state.sims:
                return ReplayReport(False, idx, "pop target absent")
            if state.proper_star(s):
                return ReplayReport(False, idx, "pop target is not maximal")
            state.remove(s)
        elif isinstance(op, ConeOp):
            if op.apex != state.max_vertex() + 1:
                return ReplayReport(False, idx, "apex numbering broken")
            if not op.bases:
                return ReplayReport(False, idx, "empty cone base list")
            for b in op.bases:
                if b not in state.sims:
                    return ReplayReport(False, idx, "cone base not a subcomplex")
            for b in op.bases:
                state.add(b + (op.apex,))
                state.add((op.apex,))
                for k in range(1, len(b)):
                    for sub in combinations(b, k):
                        state.add(sub + (op.apex,))
        else:
            return ReplayReport(False, idx, f"unknown operation {op!r}")
    final = state.maximal_faces()
    if len(final) != cert.final_count:
        return ReplayReport(False, None, "final maximal-face count mismatch")
    if cert.final_maximal is not None and tuple(final.simplices) != tuple(
        cert.final_maximal
    ):
        return ReplayReport(False, None, "final complex mismatch")
    return ReplayReport(True, None, None, tuple(final.simplices))


def verify_certificate(cert):
    """True iff the certificate replays cleanly from its initial complex."""
    return replay_certificate(cert).ok


def unique_simplices(C):
    """For each list, the elements appearing in no other list, order kept."""
    lists = [list(ci) for ci in C]
    count = {}
    for ci in lists:
        for s in set(ci):
            count[s] = count.get(s, 0) + 1
    return [[s for s in ci if count[s] == 1] for ci in lists]


def find_good_cycles(M, prefilter=False):
    """Top-dimensional cycles whose supports qualify for coning off.

    The cycle basis is the standardised nullspace of the top boundary matrix;
    a support qualifies when popping one of its simplices that occurs in no
    other support leaves a collapsible complex. The output preserves the
    nullspace row order.
    """
    M = M if isinstance(M, Complex) else Complex(M)
    d = M.dim
    if d <= 0:
        return []
    X = M.closure()
    cells_d = [s for s in X.simplices if len(s) == d + 1]
    B = nullspace(boundary_matrix(X, d))
    supports = [
        [cells_d[j] for j, coef in enumerate(b) if coef] for b in B
    ]
    uniques = unique_simplices(supports)
    good = []
    for support, uniq in zip(supports, uniques):
        if prefilter and not _support_looks_spherical(support, d):
            continue
        for t in uniq:
            if seq_collapsible(pop(Complex(support), [t])):
                good.append(Complex(support))
                break
    return good


def _support_looks_spherical(support, d):
    # heuristic pre-filter: reject supports whose closure has reduced homology
    # outside the top degree (such supports can never qualify)
    profile = integral_homology(Complex(support).closure())
    if not profile.is_torsion_free():
        return False
    reduced = profile.reduced_betti()
    return all(reduced[i] == 0 for i in range(len(reduced)) if i != d)


def find_good_components(M):
    """Connected components of the top-cell subcomplex passing the
    pop-everything wedge check, with their popped witness cells.

    Components are ordered by the short-lex order of their sorted vertex sets.
    A passing component is rejected unless every witness cell is also maximal
    in the ambient complex; removed cells must be maximal in the total space
    for the wedge bookkeeping to be sound, and witnesses below the top degree
    only come with maximality inside the component.
    """
    M = M if isinstance(M, Complex) else Complex(M)
    d = M.dim
    top = [s for s in M.simplices if len(s) == d + 1]
    result = []
    for comp in Complex(top).components():
        ok, witness = pop_everything(comp)
        if not ok:
            continue
        if not all(w in M for w in witness):
            logger.info(
                "component %s rejected: witness not maximal in the ambient complex",
                comp.vertices(),
            )
            continue
        result.append((comp, witness))
    return result


@dataclass
class ConeAndCollapseResult:
    final: Complex
    certificate: Certificate
    cone_sphere_dims: Counter
    iterations: int

    @property
    def reached_vertex(self):
        return len(self.final) == 1 and len(self.final.simplices[0]) == 1


def cone_and_collapse(S, max_iterations=None, prefilter=False):
    """Iteratively collapse, find coneable cycles (or, failing that, coneable
    top-cell components), cone them off and recollapse.

    Returns the terminal maximal faces together with a certificate logging
    every collapse and cone. A single-vertex terminal complex means the input
    is homotopy equivalent to a wedge of spheres; otherwise the terminal
    complex is a simplified remainder wedge-complementing the input.
    """
    S = S if isinstance(S, Complex) else Complex(S)
    ops = []
    sphere_dims = Counter()
    M, steps = seq_collapse(S)
    ops.extend(CollapseOp(st.tau, st.sigma) for st in steps)
    iterations = 0
    while True:
        if M.dim <= 0:
            break
        if max_iterations is not None and iterations >= max_iterations:
            logger.warning("iteration budget exhausted; returning partial result")
            break
        cycles = find_good_cycles(M, prefilter=prefilter)
        if cycles:
            bases = cycles
            for _ in bases:
                sphere_dims[M.dim] += 1
        else:
            pairs = find_good_components(M)
            if not pairs:
                break
            bases = [comp for comp, _ in pairs]
            for _, witness in pairs:
                for w in witness:
                    sphere_dims[len(w) - 1] += 1
        m = M.max_vertex()
        coned = cone(M, bases)
        for i, base in enumerate(bases):
            ops.append(ConeOp(m + 1 + i, tuple(base.simplices)))
        M, steps = seq_collapse(coned)
        ops.extend(CollapseOp(st.tau, st.sigma) for st in steps)
        iterations += 1
        logger.info(
            "iteration %d: %d cones, %d maximal faces, dim %d",
            iterations,
            len(bases),
            len(M),
            M.dim,
        )
    cert = Certificate(
        n_vertices=(S.max_vertex() + 1 if len(S) else 0),
        initial=tuple(S.simplices),
        ops=tuple(ops),
        final_count=len(M),
        final_maximal=tuple(M.simplices),
    )
    return ConeAndCollapseResult(M, cert, sphere_dims, iterations)


def wedge_summary(cert):
    """Multiset of sphere dimensions split off by a complete certificate.

    Each coned base was qualified as a wedge of spheres, so its sphere
    dimensions are read off from the reduced homology of its closure (which
    must be free and connected). The result matches the homology profile of
    the initial complex whenever the pipeline produced the certificate.
    """
    if cert.final_maximal is not None:
        final = cert.final_maximal
    else:
        report = replay_certificate(cert)
        if not report.ok:
            raise CertificateError(f"certificate does not replay: {report.reason}")
        final = report.final_maximal
    if len(final) != 1 or len(final[0]) != 1:
        raise CertificateError("incomplete reduction: terminal complex is not a vertex")
    dims = Counter()
    for op in cert.ops:
        if not isinstance(op, ConeOp):
            continue
        profile = integral_homology(Complex(op.bases).closure())
        if not profile.is_torsion_free():
            raise CertificateError("cone base has torsion; not a sphere wedge")
        reduced = profile.reduced_betti()
        if reduced[0]:
            raise CertificateError("cone base is disconnected")
        for dd in range(1, len(reduced)):
            if reduced[dd]:
                dims[dd] += reduced[dd]
    return dims
