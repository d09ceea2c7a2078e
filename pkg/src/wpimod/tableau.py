"""Gelfand-Tsetlin tableaux for a pyramid.

A tableau assigns an entry to every triple (k, i, j) with 1 <= j <= i <= n and
1 <= k <= p_j: row i, position j, layer k.  Entries are symbolic pairs
(class id, integer offset); two entries differ by an integer exactly when they
share a class.  Attaching a `GenericAssignment` turns entries into exact
rationals without losing the symbolic integrality structure.  The top row
(i = n) is frozen: integral shifts never touch it.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .exact_arith import GenericAssignment, UniPoly, as_scalar
from .pyramid import Pyramid


class TriIndex(NamedTuple):
    k: int  # layer
    i: int  # row
    j: int  # position


def all_indices(pi: Pyramid) -> list[TriIndex]:
    """Every valid triple for the pyramid, in lexicographic (i, j, k) order."""
    out = []
    for i in range(1, pi.n + 1):
        for j in range(1, i + 1):
            for k in range(1, pi.p(j) + 1):
                out.append(TriIndex(k, i, j))
    return out


def mutable_indices(pi: Pyramid) -> list[TriIndex]:
    """Triples below the frozen top row."""
    return [t for t in all_indices(pi) if t.i < pi.n]


def valid_index(pi: Pyramid, t: TriIndex) -> bool:
    return 1 <= t.j <= t.i <= pi.n and 1 <= t.k <= pi.p(t.j)


class TableauDelta:
    """Sparse integral shift with zero support on the top row."""

    __slots__ = ("offsets",)

    def __init__(self, offsets: dict[TriIndex, int] | None = None):
        self.offsets = {
            TriIndex(*t): int(v) for t, v in (offsets or {}).items() if v != 0
        }

    @staticmethod
    def unit(t: TriIndex, amount: int = 1) -> "TableauDelta":
        return TableauDelta({t: amount})

    def get(self, t: TriIndex) -> int:
        return self.offsets.get(t, 0)

    def __add__(self, other: "TableauDelta") -> "TableauDelta":
        out = dict(self.offsets)
        for t, v in other.offsets.items():
            out[t] = out.get(t, 0) + v
        return TableauDelta(out)

    def __neg__(self) -> "TableauDelta":
        return TableauDelta({t: -v for t, v in self.offsets.items()})

    def __sub__(self, other: "TableauDelta") -> "TableauDelta":
        return self + (-other)

    def __eq__(self, other) -> bool:
        return isinstance(other, TableauDelta) and self.offsets == other.offsets

    def __hash__(self) -> int:
        return hash(frozenset(self.offsets.items()))

    def norm_inf(self) -> int:
        return max((abs(v) for v in self.offsets.values()), default=0)

    def key(self):
        """Deterministic sort key."""
        return tuple(sorted(self.offsets.items()))

    def __repr__(self) -> str:
        items = ", ".join(f"{tuple(t)}:{v:+d}" for t, v in sorted(self.offsets.items()))
        return f"TableauDelta({{{items}}})"


class Tableau:
    """Symbolic Gelfand-Tsetlin tableau, optionally instantiated."""

    __slots__ = ("pyramid", "entries", "assignment")

    def __init__(
        self,
        pyramid: Pyramid,
        entries: dict[TriIndex, tuple],
        assignment: GenericAssignment | None = None,
    ):
        self.pyramid = pyramid
        self.entries = {}
        for t, (cls, off) in entries.items():
            t = TriIndex(*t)
            if not valid_index(pyramid, t):
                raise ValueError(f"index {tuple(t)} invalid for {pyramid}")
            self.entries[t] = (cls, int(off))
        for t in all_indices(pyramid):
            if t not in self.entries:
                raise ValueError(f"missing entry at {tuple(t)}")
        self.assignment = assignment

    def with_assignment(self, assignment: GenericAssignment) -> "Tableau":
        return Tableau(self.pyramid, self.entries, assignment)

    def entry(self, t: TriIndex) -> tuple:
        return self.entries[TriIndex(*t)]

    def value(self, t: TriIndex) -> Fraction:
        if self.assignment is None:
            raise ValueError("tableau is not instantiated")
        cls, off = self.entries[TriIndex(*t)]
        return self.assignment.value(cls, off)

    def classes(self) -> set:
        return {cls for cls, _ in self.entries.values()}

    def row_indices(self, i: int) -> list[TriIndex]:
        return [t for t in all_indices(self.pyramid) if t.i == i]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Tableau)
            and self.pyramid == other.pyramid
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.pyramid, frozenset(self.entries.items())))


def shift(l: Tableau, d: TableauDelta) -> Tableau:
    """Entrywise integral shift; classes unchanged; top row must be untouched."""
    entries = dict(l.entries)
    for t, v in d.offsets.items():
        if not valid_index(l.pyramid, t):
            raise ValueError(f"shift support {tuple(t)} outside the index set")
        if t.i == l.pyramid.n:
            raise ValueError("shifts cannot touch the top row")
        cls, off = entries[t]
        entries[t] = (cls, off + v)
    return Tableau(l.pyramid, entries, l.assignment)


def entries_equal(l: Tableau, a: TriIndex, b: TriIndex) -> bool:
    ca, oa = l.entry(a)
    cb, ob = l.entry(b)
    return ca == cb and oa == ob


def entry_int_diff(l: Tableau, a: TriIndex, b: TriIndex):
    """Integer difference entry(a) - entry(b) if the entries share a class, else None."""
    ca, oa = l.entry(a)
    cb, ob = l.entry(b)
    if ca != cb:
        return None
    return oa - ob


def is_noncritical(l: Tableau) -> bool:
    """No two entries coincide within any row below the top."""
    for i in range(1, l.pyramid.n):
        row = l.row_indices(i)
        for a in range(len(row)):
            for b in range(a + 1, len(row)):
                if entries_equal(l, row[a], row[b]):
                    return False
    return True


def weight(l: Tableau) -> list[Fraction]:
    """Row-sum weight of a one-column tableau: sum(row k) - sum(row k-1) + k - 1."""
    if l.pyramid.rows != (1,) * l.pyramid.n:
        raise ValueError("weight is defined for one-column pyramids only")
    w = []
    prev = Fraction(0)
    for k in range(1, l.pyramid.n + 1):
        cur = sum((l.value(t) for t in l.row_indices(k)), Fraction(0))
        w.append(cur - prev + k - 1)
        prev = cur
    return w


def row_polynomial(l: Tableau, r: int, i: int) -> UniPoly:
    """Monic product of (u + entry) over the layers of position i in row r."""
    shifts = [
        l.value(TriIndex(k, r, i)) for k in range(1, l.pyramid.p(i) + 1)
    ]
    return UniPoly.from_roots_shifted(shifts)


def is_standard(l: Tableau) -> bool:
    """Interlacing with strict right inequalities, plus non-integral layer gaps."""
    pi = l.pyramid
    for r in range(1, pi.n):
        for i in range(1, r + 1):
            for k in range(1, pi.p(i) + 1):
                up = entry_int_diff(l, TriIndex(k, r + 1, i), TriIndex(k, r, i))
                if up is None or up < 0:
                    return False
                if i + 1 <= r + 1 and k <= pi.p(i + 1):
                    dn = entry_int_diff(l, TriIndex(k, r, i), TriIndex(k, r + 1, i + 1))
                    if dn is None or dn <= 0:
                        return False
    # distinct layers at one position must not be integer-linked
    for i in range(1, pi.n + 1):
        for j in range(1, i + 1):
            for k1 in range(1, pi.p(j) + 1):
                for k2 in range(k1 + 1, pi.p(j) + 1):
                    if entry_int_diff(l, TriIndex(k1, i, j), TriIndex(k2, i, j)) is not None:
                        return False
    return True


def tableau_from_values(pi: Pyramid, values: dict[TriIndex, object]) -> Tableau:
    """Build an instantiated tableau from explicit rational values.

    Values whose difference is an integer share a class; each class is anchored
    at its fractional representative.
    """
    anchors: list[Fraction] = []
    entries = {}
    class_values = {}
    for t, v in values.items():
        v = as_scalar(v)
        cls = None
        for idx, a in enumerate(anchors):
            if (v - a).denominator == 1:
                cls = idx
                break
        if cls is None:
            anchors.append(v)
            cls = len(anchors) - 1
            class_values[cls] = v
        entries[TriIndex(*t)] = (cls, int(v - anchors[cls]))
    return Tableau(pi, entries, GenericAssignment(class_values, seed=0))


def tableau_to_json(l: Tableau) -> dict:
    ents = []
    for t in all_indices(l.pyramid):
        cls, off = l.entry(t)
        ents.append({"k": t.k, "i": t.i, "j": t.j, "class": str(cls), "offset": off})
    return {"pyramid": l.pyramid.to_json(), "entries": ents}


def tableau_from_json(obj: dict) -> Tableau:
    pi = Pyramid.from_json(obj["pyramid"])
    entries = {}
    for e in obj["entries"]:
        entries[TriIndex(e["k"], e["i"], e["j"])] = (e["class"], e["offset"])
    return Tableau(pi, entries)
