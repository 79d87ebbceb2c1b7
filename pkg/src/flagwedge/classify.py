"""Homotopy-type classification for directed flag complexes of tournaments.

The decision chain is cheapest-first: collapsibility, then the homology-only
Moore-space shortcut (valid because the fundamental group of the directed
flag complex of a tournament is free, so vanishing first homology already
gives simple connectivity), then the pop-everything detector, then the full
cone-and-collapse pipeline.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import gcd

from .collapse import pop_everything, seq_collapsible
from .flag import directed_flag_complex
from .homology import integral_homology
from .wedge import cone_and_collapse, verify_certificate, wedge_summary

__all__ = [
    "CERTIFIED_WEDGE",
    "MOORE_BY_PROPOSITION",
    "CONTRACTIBLE",
    "UNRESOLVED",
    "HomotopyDescriptor",
    "moore_decomposition",
    "classify_tournament",
    "BatchResult",
    "batch_classify",
]

CERTIFIED_WEDGE = "CERTIFIED-WEDGE"
MOORE_BY_PROPOSITION = "MOORE-BY-PROPOSITION"
CONTRACTIBLE = "CONTRACTIBLE"
UNRESOLVED = "UNRESOLVED"


class ClassificationError(RuntimeError):
    pass


@dataclass(frozen=True)
class HomotopyDescriptor:
    """Wedge of spheres and Moore spaces, plus how it was established.

    ``spheres`` holds (dimension, count) pairs and ``moores`` holds
    (cyclic order m, dimension, count) triples, both canonically sorted.
    Descriptors compare as multisets of summands; the verdict tag does not
    take part in equality-of-type comparisons.
    """

    spheres: tuple = ()
    moores: tuple = ()
    verdict: str = UNRESOLVED

    @classmethod
    def from_parts(cls, sphere_counts, moore_counts, verdict):
        spheres = tuple(sorted((d, k) for d, k in sphere_counts.items() if k))
        moores = tuple(
            sorted((m, d, k) for (m, d), k in moore_counts.items() if k)
        )
        for m, d, k in moores:
            if m < 2 or d < 1:
                raise ValueError(f"invalid Moore summand M(Z_{m},{d})")
        return cls(spheres, moores, verdict)

    def type_key(self):
        return (self.spheres, self.moores)

    def is_point(self):
        return not self.spheres and not self.moores

    def implied_reduced_homology(self):
        """Reduced Betti numbers and torsion chains implied by the summands."""
        dims = [d for d, _ in self.spheres] + [d for _, d, _ in self.moores]
        top = max(dims, default=0)
        betti = [0] * (top + 1)
        torsion_sets = [[] for _ in range(top + 1)]
        for d, k in self.spheres:
            betti[d] += k
        for m, d, k in self.moores:
            torsion_sets[d].extend([m] * k)
        torsion = tuple(_invariant_chain(ts) for ts in torsion_sets)
        return tuple(betti), torsion

    def __str__(self):
        items = []
        for d, k in self.spheres:
            items.append((d, 0, 0, f"S^{d}*{k}"))
        for m, d, k in self.moores:
            items.append((d, 1, m, f"M(Z_{m},{d})*{k}"))
        if not items:
            return "point" if self.verdict != UNRESOLVED else "?"
        items.sort()
        return "+".join(text for _, _, _, text in items)


def _invariant_chain(ms):
    """Invariant-factor chain of the direct sum of cyclic groups Z_m."""
    factors = [m for m in ms if m > 1]
    changed = True
    while changed:
        changed = False
        for i in range(len(factors)):
            for j in range(i + 1, len(factors)):
                a, b = factors[i], factors[j]
                if b % a:
                    g = gcd(a, b)
                    factors[i], factors[j] = g, a * b // g
                    changed = True
    return tuple(sorted(factors))


def moore_decomposition(profile, simply_connected):
    """The forced wedge decomposition of a simply connected complex whose
    reduced homology lives in two adjacent degrees n, n+1 (n > 1) with the
    upper one free; None when the hypotheses fail.

    Torsion in degree n contributes one Moore summand per invariant factor.
    """
    if not simply_connected:
        return None
    if profile.betti[0] != 1:
        return None
    reduced = profile.reduced_betti()
    support = [
        d
        for d in range(1, len(reduced))
        if reduced[d] or (d < len(profile.torsion) and profile.torsion[d])
    ]
    if not support:
        return HomotopyDescriptor(verdict=CONTRACTIBLE)
    n, top = min(support), max(support)
    if top - n > 1 or n <= 1:
        return None
    if top > n and profile.torsion[top]:
        return None
    spheres = Counter()
    moores = Counter()
    for d in (n, n + 1):
        if d < len(reduced) and reduced[d]:
            spheres[d] += reduced[d]
    for m in profile.torsion[n]:
        moores[(m, n)] += 1
    return HomotopyDescriptor.from_parts(spheres, moores, MOORE_BY_PROPOSITION)


def classify_tournament(T):
    """Homotopy descriptor of the directed flag complex of a tournament.

    The homology shortcut relies on the freeness of the fundamental group and
    is therefore refused for non-tournament digraphs.
    """
    if not T.is_tournament():
        raise ValueError("input is not a tournament")
    X = directed_flag_complex(T)
    if seq_collapsible(X):
        return HomotopyDescriptor(verdict=CONTRACTIBLE)
    profile = integral_homology(X)
    if len(profile.betti) > 1 and profile.torsion[1]:
        raise ClassificationError(
            "torsion in degree 1 of a tournament complex contradicts the free "
            "fundamental group"
        )
    simply_connected = len(profile.betti) < 2 or profile.betti[1] == 0
    moore = moore_decomposition(profile, simply_connected)
    if moore is not None:
        if moore.is_point():
            return HomotopyDescriptor(verdict=CONTRACTIBLE)
        return moore
    ok, witness = pop_everything(X)
    if ok:
        counts = Counter(len(w) - 1 for w in witness)
        if not counts:
            return HomotopyDescriptor(verdict=CONTRACTIBLE)
        return HomotopyDescriptor.from_parts(counts, Counter(), CERTIFIED_WEDGE)
    result = cone_and_collapse(X)
    if result.reached_vertex:
        if not verify_certificate(result.certificate):
            raise ClassificationError("produced certificate failed verification")
        dims = wedge_summary(result.certificate)
        expected = profile.reduced_betti()
        got = [dims.get(d, 0) for d in range(len(expected))]
        if not profile.is_torsion_free() or got != [0] + list(expected[1:]):
            raise ClassificationError("wedge summary does not match homology")
        return HomotopyDescriptor.from_parts(dims, Counter(), CERTIFIED_WEDGE)
    return HomotopyDescriptor(verdict=UNRESOLVED)


@dataclass
class BatchResult:
    rows: list  # (index, descriptor or None, error message or None)

    @property
    def resolved_type_count(self):
        keys = {
            desc.type_key()
            for _, desc, err in self.rows
            if err is None and desc.verdict != UNRESOLVED
        }
        return len(keys)

    @property
    def unresolved_count(self):
        return sum(
            1 for _, desc, err in self.rows if err is None and desc.verdict == UNRESOLVED
        )

    @property
    def error_count(self):
        return sum(1 for _, _, err in self.rows if err is not None)

    def table(self):
        lines = []
        for index, desc, err in self.rows:
            if err is not None:
                lines.append(f"{index} ERROR {err}")
            else:
                lines.append(f"{index} {desc.verdict} {desc}")
        lines.append(
            f"# homotopy types: {self.resolved_type_count} "
            f"(rows: {len(self.rows)}, unresolved: {self.unresolved_count}, "
            f"errors: {self.error_count})"
        )
        return "\n".join(lines) + "\n"


def batch_classify(tournaments):
    """Classify a collection; per-item failures are isolated into their row."""
    rows = []
    for index, T in enumerate(tournaments):
        try:
            rows.append((index, classify_tournament(T), None))
        except Exception as exc:  # noqa: BLE001 - row-level isolation is the contract
            rows.append((index, None, str(exc)))
    return BatchResult(rows)
