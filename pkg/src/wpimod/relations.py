"""Relation sets between tableau triples, and their decision procedures.

A relation set is a digraph on triples (k, i, j) with strictness flags.  Weak
edges run from a row to the row below (or within the top row); strict edges run
from a row to the row above.  The procedures here decide satisfaction,
noncriticality, pre-admissibility, admissibility (with certificates), compute
the unique reduced representative, remove extremal triples, and extract the
maximal set of relations held by a tableau.
"""

from __future__ import annotations

from typing import NamedTuple

from .pyramid import Pyramid
from .tableau import (
    Tableau,
    TriIndex,
    all_indices,
    entry_int_diff,
    valid_index,
)


class Relation(NamedTuple):
    greater: TriIndex
    lesser: TriIndex
    strict: bool


def _relation_shape_ok(pi: Pyramid, rel: Relation) -> bool:
    g, l = rel.greater, rel.lesser
    if not (valid_index(pi, g) and valid_index(pi, l)):
        return False
    if rel.strict:
        # strict edges climb one row
        return g.i == l.i - 1 and 2 <= l.i <= pi.n
    if g.i == pi.n and l.i == pi.n:
        return g.j != l.j
    return g.i == l.i + 1 and 2 <= g.i <= pi.n


class RelationSet:
    """A loop-free subset of the allowed relation patterns."""

    __slots__ = ("pyramid", "edges")

    def __init__(self, pyramid: Pyramid, edges):
        self.pyramid = pyramid
        es = set()
        for e in edges:
            rel = Relation(TriIndex(*e.greater), TriIndex(*e.lesser), bool(e.strict))
            if not _relation_shape_ok(pyramid, rel):
                raise ValueError(f"relation {rel} is not an allowed pattern")
            es.add(rel)
        self.edges = frozenset(es)
        if self._has_top_row_loop():
            raise ValueError("relation set contains a top-row loop")

    def _has_top_row_loop(self) -> bool:
        n = self.pyramid.n
        adj: dict[TriIndex, list[TriIndex]] = {}
        for e in self.edges:
            if e.greater.i == n and e.lesser.i == n:
                adj.setdefault(e.greater, []).append(e.lesser)
        state: dict[TriIndex, int] = {}

        def dfs(v: TriIndex) -> bool:
            state[v] = 1
            for w in adj.get(v, ()):
                s = state.get(w, 0)
                if s == 1 or (s == 0 and dfs(w)):
                    return True
            state[v] = 2
            return False

        return any(state.get(v, 0) == 0 and dfs(v) for v in list(adj))

    def sorted_edges(self) -> list[Relation]:
        return sorted(self.edges)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RelationSet)
            and self.pyramid == other.pyramid
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.pyramid, self.edges))

    def __len__(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        parts = [
            f"{tuple(e.greater)}{'>' if e.strict else '>='}{tuple(e.lesser)}"
            for e in self.sorted_edges()
        ]
        return "RelationSet{" + ", ".join(parts) + "}"

    def to_json(self) -> dict:
        return {
            "edges": [
                {
                    "greater": {"k": e.greater.k, "i": e.greater.i, "j": e.greater.j},
                    "lesser": {"k": e.lesser.k, "i": e.lesser.i, "j": e.lesser.j},
                    "strict": e.strict,
                }
                for e in self.sorted_edges()
            ]
        }

    @staticmethod
    def from_json(pi: Pyramid, obj: dict) -> "RelationSet":
        edges = [
            Relation(
                TriIndex(e["greater"]["k"], e["greater"]["i"], e["greater"]["j"]),
                TriIndex(e["lesser"]["k"], e["lesser"]["i"], e["lesser"]["j"]),
                bool(e["strict"]),
            )
            for e in obj["edges"]
        ]
        return RelationSet(pi, edges)


Component = RelationSet


def vertices(C: RelationSet) -> set[TriIndex]:
    out = set()
    for e in C.edges:
        out.add(e.greater)
        out.add(e.lesser)
    return out


def decompose(C: RelationSet) -> list[Component]:
    """Split into connected components, ordered by least triple."""
    parent: dict[TriIndex, TriIndex] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v in vertices(C):
        parent[v] = v
    for e in C.edges:
        ra, rb = find(e.greater), find(e.lesser)
        if ra != rb:
            parent[ra] = rb
    groups: dict[TriIndex, list[Relation]] = {}
    for e in C.edges:
        groups.setdefault(find(e.greater), []).append(e)
    comps = [RelationSet(C.pyramid, es) for es in groups.values()]
    comps.sort(key=lambda c: min(vertices(c)))
    return comps


def component_partition(C: RelationSet) -> dict[TriIndex, int]:
    """Map each involved triple to its component index."""
    out = {}
    for idx, comp in enumerate(decompose(C)):
        for v in vertices(comp):
            out[v] = idx
    return out


class ClosureOrder:
    """Reachability along relation chains, with strictness tracking."""

    def __init__(self, C: RelationSet):
        # best[a][b] = 1 if some chain a -> b contains a strict edge,
        # 0 if only weak chains exist, absent if unreachable.
        succ: dict[TriIndex, list[tuple[TriIndex, int]]] = {}
        for e in C.edges:
            succ.setdefault(e.greater, []).append((e.lesser, 1 if e.strict else 0))
        best: dict[TriIndex, dict[TriIndex, int]] = {v: {} for v in vertices(C)}
        changed = True
        while changed:
            changed = False
            for a in best:
                for b, w in succ.get(a, ()):
                    for tgt, wt in [(b, w)] + [
                        (c, max(w, wc)) for c, wc in best.get(b, {}).items()
                    ]:
                        if best[a].get(tgt, -1) < wt:
                            best[a][tgt] = wt
                            changed = True
        self._best = best

    def geq(self, a: TriIndex, b: TriIndex) -> bool:
        """Some chain of relations leads from a down to b."""
        return b in self._best.get(a, ())

    def gt(self, a: TriIndex, b: TriIndex) -> bool:
        """Some chain from a to b contains a strict relation."""
        return self._best.get(a, {}).get(b, 0) == 1


def closure_order(C: RelationSet) -> ClosureOrder:
    return ClosureOrder(C)


def satisfies(C: RelationSet, l: Tableau) -> bool:
    """Edge inequalities hold, and same-row integer links stay inside components."""
    for e in C.edges:
        diff = entry_int_diff(l, e.greater, e.lesser)
        if diff is None or diff < (1 if e.strict else 0):
            return False
    comp = component_partition(C)
    for i in range(1, l.pyramid.n + 1):
        row = [t for t in all_indices(l.pyramid) if t.i == i]
        for a in range(len(row)):
            for b in range(a + 1, len(row)):
                if entry_int_diff(l, row[a], row[b]) is not None:
                    ca, cb = comp.get(row[a]), comp.get(row[b])
                    if ca is None or cb is None or ca != cb:
                        return False
    return True


def _constraint_graph(C: RelationSet):
    """Edges lesser -> greater with weight: x_greater >= x_lesser + w."""
    adj: dict[TriIndex, list[tuple[TriIndex, int]]] = {}
    for e in C.edges:
        adj.setdefault(e.lesser, []).append((e.greater, 1 if e.strict else 0))
    return adj


def _has_positive_cycle(verts, arcs) -> bool:
    """Bellman-Ford style check on arcs (u, v, w) meaning x_v >= x_u + w."""
    dist = {v: 0 for v in verts}
    for it in range(len(verts) + 1):
        changed = False
        for u, v, w in arcs:
            if dist[u] + w > dist[v]:
                dist[v] = dist[u] + w
                changed = True
        if not changed:
            return False
    return True


def is_satisfiable(C: RelationSet) -> bool:
    """Some tableau satisfies C (the edge system admits an integral solution)."""
    verts = vertices(C)
    arcs = [
        (e.lesser, e.greater, 1 if e.strict else 0) for e in C.edges
    ]
    return not _has_positive_cycle(verts, arcs)


def critical_pair(C: RelationSet):
    """A same-row pair of one component that some satisfying tableau can equate.

    Returns the pair, or None when the set is noncritical.
    """
    for comp in decompose(C):
        vs = sorted(vertices(comp))
        base_arcs = [
            (e.lesser, e.greater, 1 if e.strict else 0) for e in comp.edges
        ]
        if _has_positive_cycle(vs, base_arcs):
            continue  # nothing satisfies this component
        for x in range(len(vs)):
            for y in range(x + 1, len(vs)):
                a, b = vs[x], vs[y]
                if a.i != b.i:
                    continue
                arcs = base_arcs + [(a, b, 0), (b, a, 0)]
                if not _has_positive_cycle(vs, arcs):
                    return (a, b)
    return None


def is_noncritical_set(C: RelationSet) -> bool:
    return critical_pair(C) is None


def tight_offsets(comp: RelationSet) -> dict[TriIndex, int]:
    """Least nonnegative offsets satisfying the component's edges (longest paths)."""
    vs = vertices(comp)
    succ: dict[TriIndex, list[tuple[TriIndex, int]]] = {}
    for e in comp.edges:
        succ.setdefault(e.greater, []).append((e.lesser, 1 if e.strict else 0))
    off = {v: 0 for v in vs}
    for _ in range(len(vs)):
        changed = False
        for g in vs:
            for l, w in succ.get(g, ()):
                if off[l] + w > off[g]:
                    off[g] = off[l] + w
                    changed = True
        if not changed:
            break
    return off


def noncritical_satisfying_tableau(C: RelationSet) -> Tableau:
    """A canonical symbolic tableau satisfying C with all same-row entries distinct.

    Component triples share a class; everything else gets its own class.  Raises
    when C is unsatisfiable or no noncritical satisfying assignment exists in a
    small search box.
    """
    if not is_satisfiable(C):
        raise ValueError("relation set is unsatisfiable")
    pi = C.pyramid
    entries: dict[TriIndex, tuple] = {}
    comps = decompose(C)
    for idx, comp in enumerate(comps):
        cls = f"c{idx}"
        vs = sorted(vertices(comp))
        base = tight_offsets(comp)
        rows: dict[int, list[TriIndex]] = {}
        for v in vs:
            rows.setdefault(v.i, []).append(v)

        def ok(assign: dict[TriIndex, int]) -> bool:
            for e in comp.edges:
                if e.greater in assign and e.lesser in assign:
                    if assign[e.greater] - assign[e.lesser] < (1 if e.strict else 0):
                        return False
            for row in rows.values():
                seen = set()
                for v in row:
                    if v in assign:
                        if assign[v] in seen:
                            return False
                        seen.add(assign[v])
            return True

        found = None

        def search(pos: int, assign: dict[TriIndex, int]):
            nonlocal found
            if found is not None:
                return
            if pos == len(vs):
                found = dict(assign)
                return
            v = vs[pos]
            for bump in range(0, 4):
                assign[v] = base[v] + bump
                if ok(assign):
                    search(pos + 1, assign)
                if found is not None:
                    return
            del assign[v]

        search(0, {})
        if found is None:
            raise ValueError("no noncritical satisfying tableau in search box")
        for v in vs:
            entries[v] = (cls, found[v])
    fresh = 0
    for t in all_indices(pi):
        if t not in entries:
            entries[t] = (f"g{fresh}", 0)
            fresh += 1
    return Tableau(pi, entries)


def critical_satisfying_tableau(C: RelationSet):
    """A symbolic tableau satisfying C that equates a same-row pair, or None.

    Witnesses set-level criticality: the returned tableau satisfies every edge
    of C while the pair reported by critical_pair coincides.
    """
    pair = critical_pair(C)
    if pair is None:
        return None
    a, b = pair
    pi = C.pyramid
    entries: dict[TriIndex, tuple] = {}
    for idx, comp in enumerate(decompose(C)):
        cls = f"c{idx}"
        vs = vertices(comp)
        arcs = [(e.lesser, e.greater, 1 if e.strict else 0) for e in comp.edges]
        if a in vs:
            arcs += [(a, b, 0), (b, a, 0)]
        off = {v: 0 for v in vs}
        for _ in range(len(vs) + 1):
            changed = False
            for src, dst, w in arcs:
                if off[src] + w > off[dst]:
                    off[dst] = off[src] + w
                    changed = True
            if not changed:
                break
        else:
            raise ValueError("offset relaxation did not converge")
        for v in vs:
            entries[v] = (cls, off[v])
    fresh = 0
    for t in all_indices(pi):
        if t not in entries:
            entries[t] = (f"g{fresh}", 0)
            fresh += 1
    return Tableau(pi, entries)


def has_cross(comp: Component):
    """A strict up-edge and a weak down-edge interleaving positions, if present."""
    for e1 in sorted(comp.edges):
        if not e1.strict:
            continue
        k, i, j = e1.greater
        if e1.lesser.k != k:
            continue
        t = e1.lesser.j
        for e2 in sorted(comp.edges):
            if e2.strict:
                continue
            if e2.greater.k != k or e2.lesser.k != k:
                continue
            if e2.greater.i != i + 1 or e2.lesser.i != i:
                continue
            s, r = e2.greater.j, e2.lesser.j
            if j < r and s < t:
                return (e1, e2)
    return None


def _lex_pair(t: TriIndex) -> tuple[int, int]:
    return (t.k, t.j)


def pre_admissibility_failure(C: RelationSet):
    """None if pre-admissible, else a (reason, witness) pair."""
    pair = critical_pair(C)
    if pair is not None:
        return ("critical", pair)
    for comp in decompose(C):
        order = ClosureOrder(comp)
        vs = sorted(vertices(comp))
        n = C.pyramid.n
        for a in vs:
            for b in vs:
                if a == b or a.i != b.i:
                    continue
                if a.i < n and order.gt(a, b) and not _lex_pair(a) < _lex_pair(b):
                    return ("order", (a, b))
                if a.i == n and order.geq(a, b) and not _lex_pair(a) < _lex_pair(b):
                    return ("order", (a, b))
        cross = has_cross(comp)
        if cross is not None:
            return ("cross", cross)
    return None


def is_pre_admissible(C: RelationSet) -> bool:
    return pre_admissibility_failure(C) is None


def adjoining_pairs(comp: Component) -> list[tuple[TriIndex, TriIndex]]:
    """Same-row comparable pairs below the top row with no triple strictly between."""
    order = ClosureOrder(comp)
    vs = sorted(vertices(comp))
    n = comp.pyramid.n
    out = []
    for a in vs:
        for b in vs:
            if a == b or a.i != b.i or a.i >= n:
                continue
            if not order.gt(a, b):
                continue
            between = any(
                c.i == a.i and c not in (a, b) and order.gt(a, c) and order.gt(c, b)
                for c in vs
            )
            if not between:
                out.append((a, b))
    return out


def _bridging_witness(comp: Component, a: TriIndex, b: TriIndex):
    """Witness edges certifying the adjoining pair (a, b), or None."""
    i = a.i
    ups = sorted(
        e.lesser for e in comp.edges if e.strict and e.greater == a and e.lesser.i == i + 1
    )
    downs_from_a = sorted(
        e.lesser for e in comp.edges if not e.strict and e.greater == a and e.lesser.i == i - 1
    )
    covers_b = sorted(
        e.greater for e in comp.edges if not e.strict and e.lesser == b and e.greater.i == i + 1
    )
    lifts_b = sorted(
        e.greater for e in comp.edges if e.strict and e.lesser == b and e.greater.i == i - 1
    )
    # both-rows bridge: a > m1 >= b through the row above and a >= m2 > b below
    m1s = [m for m in ups if m in covers_b]
    m2s = [m for m in downs_from_a if m in lifts_b]
    if m1s and m2s:
        return {"kind": "diamond", "upper": m1s[0], "lower": m2s[0]}
    # split bridge through the row above with lexicographically ordered middles
    for m1 in ups:
        for m2 in covers_b:
            if _lex_pair(m1) < _lex_pair(m2):
                return {"kind": "split", "from": m1, "to": m2}
    return None


def _literal_admissible(C: RelationSet):
    """Admissibility check with the labels taken at face value."""
    fail = pre_admissibility_failure(C)
    if fail is not None:
        reason, witness = fail
        return False, {"reason": reason, "witness": witness}
    witnesses = []
    for comp in decompose(C):
        for a, b in adjoining_pairs(comp):
            w = _bridging_witness(comp, a, b)
            if w is None:
                return False, {"reason": "unbridged", "witness": (a, b)}
            witnesses.append({"pair": (a, b), **w})
    return True, {"reason": "admissible", "witnesses": witnesses}


def _row_relabelings(pi: Pyramid):
    """Every product of within-row (layer, position) relabelings, identity first.

    Yields {row: mapping} dictionaries consumable by `permute`, one row entry
    per non-identity row mapping.
    """
    import itertools

    rows = []
    for i in range(1, pi.n + 1):
        pairs = sorted((t.k, t.j) for t in all_indices(pi) if t.i == i)
        rows.append((i, pairs))
    per_row = [
        [dict(zip(pairs, perm)) for perm in itertools.permutations(pairs)]
        for _, pairs in rows
    ]
    for combo in itertools.product(*per_row):
        yield {
            row: mapping
            for (row, _), mapping in zip(rows, combo)
            if any(a != b for a, b in mapping.items())
        }


def is_admissible(C: RelationSet):
    """Combinatorial admissibility verdict with a certificate.

    The generator formulas are symmetric under permuting entries within one
    row, so admissibility is invariant under within-row relabelings; the
    labelled characterization (lexicographic order compatibility and the
    bridging condition) is checked over every relabeling, identity first.
    Returns (verdict, certificate); a passing certificate carries the
    relabeling under which the labelled conditions hold, a failing one names
    the identity-labeling obstruction.
    """
    if not is_satisfiable(C):
        return False, {"reason": "unsatisfiable"}
    first_fail = None
    for relabeling in _row_relabelings(C.pyramid):
        sC = C
        try:
            for row, mapping in relabeling.items():
                sC = permute(sC, row, mapping)
        except ValueError:
            continue  # image leaves the allowed relation patterns
        ok, cert = _literal_admissible(sC)
        if ok:
            if relabeling:
                cert["relabeling"] = {
                    row: sorted((a, b) for a, b in m.items() if a != b)
                    for row, m in relabeling.items()
                }
            return True, cert
        if first_fail is None:
            first_fail = cert
    return False, first_fail


def reduce_set(C: RelationSet) -> RelationSet:
    """The unique reduced set equivalent to a noncritical C (redundant edges dropped)."""
    if not is_noncritical_set(C):
        raise ValueError("reduce requires a noncritical relation set")
    edges = set(C.edges)
    changed = True
    while changed:
        changed = False
        for e in sorted(edges):
            rest = RelationSet(C.pyramid, edges - {e})
            order = ClosureOrder(rest)
            implied = (
                order.gt(e.greater, e.lesser)
                if e.strict
                else order.geq(e.greater, e.lesser)
            )
            if implied:
                edges.discard(e)
                changed = True
                break
    return RelationSet(C.pyramid, edges)


def equivalent(C1: RelationSet, C2: RelationSet) -> bool:
    return reduce_set(C1) == reduce_set(C2)


def is_maximal_triple(C: RelationSet, t: TriIndex) -> bool:
    return t in vertices(C) and all(e.lesser != t for e in C.edges)


def is_minimal_triple(C: RelationSet, t: TriIndex) -> bool:
    return t in vertices(C) and all(e.greater != t for e in C.edges)


def rr_remove(C: RelationSet, t: TriIndex) -> RelationSet:
    """Drop every relation incident to an extremal triple."""
    t = TriIndex(*t)
    if not (is_maximal_triple(C, t) or is_minimal_triple(C, t)):
        raise ValueError(f"triple {tuple(t)} is not extremal")
    return RelationSet(
        C.pyramid, [e for e in C.edges if t not in (e.greater, e.lesser)]
    )


def permute(C: RelationSet, row: int, mapping: dict) -> RelationSet:
    """Relabel the (layer, position) pairs of one row by a bijection."""
    mapping = {tuple(a): tuple(b) for a, b in mapping.items()}
    if sorted(mapping) != sorted(mapping.values()):
        raise ValueError("mapping must be a bijection on (layer, position) pairs")
    for (k, j), (k2, j2) in mapping.items():
        if not valid_index(C.pyramid, TriIndex(k, row, j)) or not valid_index(
            C.pyramid, TriIndex(k2, row, j2)
        ):
            raise ValueError("mapping leaves the valid index set")

    def move(t: TriIndex) -> TriIndex:
        if t.i == row and (t.k, t.j) in mapping:
            k2, j2 = mapping[(t.k, t.j)]
            return TriIndex(k2, row, j2)
        return t

    return RelationSet(
        C.pyramid,
        [Relation(move(e.greater), move(e.lesser), e.strict) for e in C.edges],
    )


def held_relations(l: Tableau) -> list[Relation]:
    """Every allowed relation whose inequality the tableau satisfies."""
    pi = l.pyramid
    idx = all_indices(pi)
    out = []
    for a in idx:
        for b in idx:
            if a == b:
                continue
            if a.i == b.i + 1 and b.i <= pi.n - 1:
                d = entry_int_diff(l, a, b)
                if d is not None and d >= 0:
                    out.append(Relation(a, b, False))
            if a.i == b.i - 1:
                d = entry_int_diff(l, a, b)
                if d is not None and d >= 1:
                    out.append(Relation(a, b, True))
            if a.i == pi.n and b.i == pi.n and a.j != b.j:
                d = entry_int_diff(l, a, b)
                if d is not None and d >= 0:
                    out.append(Relation(a, b, False))
    return out


def maximal_set(l: Tableau) -> RelationSet:
    """Reduced representative of the maximal set of relations held by the tableau."""
    pi = l.pyramid
    for i in range(1, pi.n + 1):
        row = [t for t in all_indices(pi) if t.i == i]
        for x in range(len(row)):
            for y in range(x + 1, len(row)):
                d = entry_int_diff(l, row[x], row[y])
                if d == 0:
                    raise ValueError("tableau is critical")
    H = RelationSet(pi, held_relations(l))
    if not is_noncritical_set(H):
        raise ValueError(
            "the relations held by the tableau form a critical set; "
            "no noncritical set captures all of its integer links"
        )
    C = reduce_set(H)
    if not satisfies(C, l):
        raise ValueError(
            "tableau holds integer links that no chain of allowed relations connects"
        )
    return C


def standard_set(pi: Pyramid) -> RelationSet:
    """The interlacing pattern: (k,i+1,j) >= (k,i,j) > (k,i+1,j+1)."""
    edges = []
    for i in range(1, pi.n):
        for j in range(1, i + 1):
            for k in range(1, pi.p(j) + 1):
                edges.append(Relation(TriIndex(k, i + 1, j), TriIndex(k, i, j), False))
                edges.append(Relation(TriIndex(k, i, j), TriIndex(k, i + 1, j + 1), True))
    return RelationSet(pi, edges)


def all_relations(pi: Pyramid) -> list[Relation]:
    """The full list of allowed relation patterns for the pyramid."""
    idx = all_indices(pi)
    out = []
    for a in idx:
        for b in idx:
            if a == b:
                continue
            if a.i == b.i + 1 and b.i <= pi.n - 1:
                out.append(Relation(a, b, False))
            if a.i == b.i - 1:
                out.append(Relation(a, b, True))
            if a.i == pi.n and b.i == pi.n and a.j != b.j:
                out.append(Relation(a, b, False))
    return sorted(out)
