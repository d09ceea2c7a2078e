"""Shared constructions for the test suite."""

from __future__ import annotations

import itertools

from wpimod import (
    Pyramid,
    RelationSet,
    Tableau,
    TriIndex,
    all_relations,
    noncritical_satisfying_tableau,
    standard_set,
)
from wpimod.relations import Relation

GL2 = Pyramid((1, 1))
GL3 = Pyramid((1, 1, 1))
P12 = Pyramid((1, 2))
P22 = Pyramid((2, 2))


def spread_seed(C: RelationSet, gap: int = 4) -> Tableau:
    """A satisfying noncritical seed with offsets scaled to open the window.

    Scaling the canonical offsets by `gap` keeps every edge inequality and all
    same-row distinctness while leaving room for shifts of size < gap.
    """
    seed = noncritical_satisfying_tableau(C)
    entries = {t: (cls, off * gap) for t, (cls, off) in seed.entries.items()}
    return Tableau(C.pyramid, entries)


def try_relation_set(pi: Pyramid, rels) -> RelationSet | None:
    """Build a relation set, or None when construction rejects it (loops)."""
    try:
        return RelationSet(pi, rels)
    except ValueError:
        return None


def relation_subsets(pi: Pyramid, max_edges: int = 5):
    """Every constructible relation set with at most max_edges edges."""
    rels = all_relations(pi)
    for r in range(max_edges + 1):
        for combo in itertools.combinations(rels, r):
            C = try_relation_set(pi, combo)
            if C is not None:
                yield C


def rel(g, l, strict) -> Relation:
    return Relation(TriIndex(*g), TriIndex(*l), bool(strict))


# The two non-admissible two-edge patterns, minimally embedded in the
# one-column gl_3 pyramid at the middle row.
def bad_pattern_upper() -> RelationSet:
    """Chain through the row above only: (1,2,1) > (1,3,2) >= (1,2,2)."""
    return RelationSet(GL3, [rel((1, 2, 1), (1, 3, 2), True),
                             rel((1, 3, 2), (1, 2, 2), False)])


def bad_pattern_lower() -> RelationSet:
    """Chain through the row below only: (1,2,1) >= (1,1,1) > (1,2,2)."""
    return RelationSet(GL3, [rel((1, 2, 1), (1, 1, 1), False),
                             rel((1, 1, 1), (1, 2, 2), True)])


def diamond_set() -> RelationSet:
    """The admissible 4-edge diamond through both neighbouring rows of gl_3."""
    return RelationSet(GL3, [
        rel((1, 2, 1), (1, 3, 1), True),
        rel((1, 3, 1), (1, 2, 2), False),
        rel((1, 2, 1), (1, 1, 1), False),
        rel((1, 1, 1), (1, 2, 2), True),
    ])


def gl2_tableau(top1, top2, low) -> Tableau:
    """Instantiated gl_2 one-column tableau with the given values."""
    from wpimod.tableau import tableau_from_values

    return tableau_from_values(GL2, {
        TriIndex(1, 2, 1): top1,
        TriIndex(1, 2, 2): top2,
        TriIndex(1, 1, 1): low,
    })


def standard_gl2() -> RelationSet:
    return standard_set(GL2)
