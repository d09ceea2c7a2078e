"""Relation modules at desk scale: basis windows, exact generator actions,
the defining-relation verifier, and the irreducibility test.

The infinite module is explored through a finite window of integral shifts
around a seed tableau.  Coefficients on shift targets that violate the relation
set are zero (the gating rule); a target that satisfies the relation set but
falls outside the window is a hard error, never a silent zero.
"""

from __future__ import annotations

from fractions import Fraction

from .exact_arith import (
    CriticalityError,
    GenericAssignment,
    UniPoly,
    generic_instantiate,
    poly_series_quotient,
)
from .pyramid import e_generator_min_degree
from .relations import (
    RelationSet,
    component_partition,
    equivalent,
    maximal_set,
    reduce_set,
    satisfies,
)
from .tableau import (
    Tableau,
    TableauDelta,
    TriIndex,
    all_indices,
    mutable_indices,
    shift,
)


class WindowOverflowError(RuntimeError):
    """A shift target satisfies the relation set but lies outside the window."""


class ShiftChecker:
    """Fast satisfaction test for integral shifts of a fixed seed.

    The class structure of the seed is shift-invariant, so the component
    clause is checked once; per-shift work is one inequality per edge.
    """

    def __init__(self, C: RelationSet, seed: Tableau):
        if not satisfies(C, seed):
            raise ValueError("seed tableau does not satisfy the relation set")
        self.checks = []
        for e in sorted(C.edges):
            cg, og = seed.entry(e.greater)
            cl, ol = seed.entry(e.lesser)
            base = og - ol
            self.checks.append((e.greater, e.lesser, base, 1 if e.strict else 0))

    def satisfied(self, d: TableauDelta) -> bool:
        for g, l, base, lo in self.checks:
            if base + d.get(g) - d.get(l) < lo:
                return False
        return True


class BasisWindow:
    """Finite slice of the shift lattice: all window shifts satisfying C."""

    def __init__(self, C: RelationSet, seed: Tableau, radius: int):
        self.relation_set = C
        self.seed = seed
        self.radius = int(radius)
        self.checker = ShiftChecker(C, seed)
        self.free = mutable_indices(seed.pyramid)
        members = []
        stack = [{}]
        for t in self.free:
            stack = [
                {**a, t: v}
                for a in stack
                for v in range(-self.radius, self.radius + 1)
            ]
        for a in stack:
            d = TableauDelta(a)
            if self.checker.satisfied(d):
                members.append(d)
        members.sort(key=lambda d: d.key())
        self.members = members
        self.member_set = set(members)

    def __contains__(self, d: TableauDelta) -> bool:
        return d in self.member_set

    def tableau(self, d: TableauDelta) -> Tableau:
        return shift(self.seed, d)


class FreeWindow:
    """Window substitute with no box bound: gating only, never overflow."""

    def __init__(self, C: RelationSet, seed: Tableau):
        self.relation_set = C
        self.seed = seed
        self.radius = None
        self.checker = ShiftChecker(C, seed)
        self.free = mutable_indices(seed.pyramid)

    def tableau(self, d: TableauDelta) -> Tableau:
        return shift(self.seed, d)


def enumerate_basis(C: RelationSet, l: Tableau, radius: int) -> BasisWindow:
    return BasisWindow(C, l, radius)


CLIP = "clip"
STRICT = "strict"


class ActionContext:
    """Instantiated generator actions over a basis window."""

    def __init__(self, window: BasisWindow, assignment: GenericAssignment):
        self.window = window
        self.pyramid = window.seed.pyramid
        self.n = self.pyramid.n
        self.assignment = assignment
        self.base = {
            t: assignment.value(*window.seed.entry(t))
            for t in all_indices(self.pyramid)
        }
        self._row_index = {
            r: [t for t in all_indices(self.pyramid) if t.i == r]
            for r in range(0, self.n + 1)
        }
        self._row_index[0] = []
        self._cache: dict = {}

    def value(self, t: TriIndex, d: TableauDelta) -> Fraction:
        return self.base[t] + d.get(t)

    def row_values(self, r: int, d: TableauDelta) -> list[tuple[TriIndex, Fraction]]:
        return [(t, self.value(t, d)) for t in self._row_index.get(r, ())]

    def _row_sig(self, rows: tuple[int, ...], d: TableauDelta):
        return tuple(
            d.get(t) for r in rows for t in self._row_index.get(r, ())
        )

    # -- diagonal series ---------------------------------------------------

    def d_series_coeff(self, r: int, sup: int, d: TableauDelta) -> Fraction:
        """Coefficient of u^-sup in the diagonal series of the r-th torus family."""
        key = ("d", r, sup, self._row_sig((r - 1, r), d))
        if key not in self._cache:
            num = UniPoly.one()
            for _, v in self.row_values(r, d):
                num = num * UniPoly.linear(v + r - 1)
            den = UniPoly((0,) * self.pyramid.p(r) + (1,))
            for _, v in self.row_values(r - 1, d):
                den = den * UniPoly.linear(v + r - 1)
            series = poly_series_quotient(num, den, sup)
            self._cache[key] = series.coeff(sup) if sup <= series.order else Fraction(0)
        return self._cache[key]

    def dprime_series_coeff(self, r: int, sup: int, d: TableauDelta) -> Fraction:
        """Coefficient of u^-sup in the inverse of the diagonal series."""
        key = ("dp", r, sup, self._row_sig((r - 1, r), d))
        if key not in self._cache:
            num = UniPoly.one()
            for _, v in self.row_values(r, d):
                num = num * UniPoly.linear(v + r - 1)
            den = UniPoly((0,) * self.pyramid.p(r) + (1,))
            for _, v in self.row_values(r - 1, d):
                den = den * UniPoly.linear(v + r - 1)
            series = poly_series_quotient(num, den, sup).inverse()
            self._cache[key] = series.coeff(sup)
        return self._cache[key]

    # -- ladder coefficient pieces ----------------------------------------

    def _ratio(self, r: int, other_row: int, pivot: TriIndex, d: TableauDelta) -> Fraction:
        """Prod over the other row of (entry - pivot) over the same-row denominator."""
        pv = self.value(pivot, d)
        num = Fraction(1)
        for _, v in self.row_values(other_row, d):
            num *= v - pv
        den = Fraction(1)
        for t, v in self.row_values(r, d):
            if t == pivot:
                continue
            diff = v - pv
            if diff == 0:
                raise CriticalityError(
                    f"coincident entries in row {r} at shift {d!r}"
                )
            den *= diff
        return num / den

    def e_terms(self, r: int, sup: int, d: TableauDelta) -> list[tuple[TableauDelta, Fraction]]:
        """Expansion of the raising generator applied to the shift basis vector.

        Returns (target shift, coefficient) pairs before gating.
        """
        mindeg = e_generator_min_degree(self.pyramid, r)
        if sup < mindeg:
            raise ValueError(
                f"raising superscript {sup} below the minimum {mindeg} for row {r}"
            )
        key = ("e", r, sup, self._row_sig((r, r + 1), d))
        if key in self._cache:
            terms = self._cache[key]
        else:
            terms = []
            gap = self.pyramid.p(r + 1) - self.pyramid.p(r)
            for pivot, pv in self.row_values(r, d):
                target = d + TableauDelta.unit(pivot, +1)
                ratio = self._ratio(r, r + 1, pivot, d)
                num = UniPoly.one()
                for t, v in self.row_values(r, d):
                    if t == pivot:
                        continue
                    num = num * UniPoly.linear(v + r - 1)
                den = UniPoly((0,) * gap + (1,)) if gap else UniPoly.one()
                for t, v in self.row_values(r, target):
                    den = den * UniPoly.linear(v + r - 1)
                b = poly_series_quotient(num, den, sup).coeff(sup)
                coeff = -ratio * b
                if coeff != 0:
                    terms.append((TableauDelta.unit(pivot, +1), coeff))
            self._cache[key] = terms
        return [(d + step, c) for step, c in terms]

    def f_terms(self, r: int, sup: int, d: TableauDelta) -> list[tuple[TableauDelta, Fraction]]:
        """Expansion of the lowering generator applied to the shift basis vector."""
        if sup < 1:
            raise ValueError("lowering superscript must be at least 1")
        key = ("f", r, sup, self._row_sig((r - 1, r), d))
        if key in self._cache:
            terms = self._cache[key]
        else:
            terms = []
            for pivot, pv in self.row_values(r, d):
                ratio = self._ratio(r, r - 1, pivot, d)
                num = UniPoly.one()
                for t, v in self.row_values(r, d):
                    if t == pivot:
                        continue
                    num = num * UniPoly.linear(v + r - 1)
                den = UniPoly.one()
                for t, v in self.row_values(r, d):
                    den = den * UniPoly.linear(v + r - 1)
                c = poly_series_quotient(num, den, sup).coeff(sup)
                coeff = ratio * c
                if coeff != 0:
                    terms.append((TableauDelta.unit(pivot, -1), coeff))
            self._cache[key] = terms
        return [(d + step, c) for step, c in terms]

    # -- vector-level application ------------------------------------------

    def apply(self, gen: tuple, vec: dict, policy: str = STRICT) -> dict:
        """Apply one generator to a sparse vector {shift: coefficient}.

        gen is (family, row, superscript) with family in {d, dprime, e, f}.
        Targets violating the relation set are dropped (gating); satisfying
        targets outside the window raise (strict) or are dropped (clip).
        """
        fam, row, sup = gen
        out: dict = {}
        checker = self.window.checker
        radius = self.window.radius
        for d, c in vec.items():
            if c == 0:
                continue
            if fam == "d":
                val = Fraction(1) if sup == 0 else self.d_series_coeff(row, sup, d)
                if val != 0:
                    out[d] = out.get(d, Fraction(0)) + c * val
                continue
            if fam == "dprime":
                val = Fraction(1) if sup == 0 else self.dprime_series_coeff(row, sup, d)
                if val != 0:
                    out[d] = out.get(d, Fraction(0)) + c * val
                continue
            terms = (
                self.e_terms(row, sup, d) if fam == "e" else self.f_terms(row, sup, d)
            )
            for tgt, coeff in terms:
                if not checker.satisfied(tgt):
                    continue
                if radius is not None and tgt.norm_inf() > radius:
                    if policy == STRICT:
                        raise WindowOverflowError(
                            f"target {tgt!r} satisfies the relations but leaves the window"
                        )
                    continue
                out[tgt] = out.get(tgt, Fraction(0)) + c * coeff
        return {d: c for d, c in out.items() if c != 0}

    def apply_word(self, word, d: TableauDelta, policy: str = STRICT) -> dict:
        """Apply a product of generators (rightmost acts first) to a basis vector."""
        vec = {d: Fraction(1)}
        for gen in reversed(word):
            vec = self.apply(gen, vec, policy)
            if not vec:
                break
        return vec


def _vec_sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for d, c in b.items():
        out[d] = out.get(d, Fraction(0)) - c
    return {d: c for d, c in out.items() if c != 0}


def _vec_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for d, c in b.items():
        out[d] = out.get(d, Fraction(0)) + c
    return {d: c for d, c in out.items() if c != 0}


def _vec_scale(a: dict, s: Fraction) -> dict:
    return {d: c * s for d, c in a.items() if c * s != 0}


def act_A(window: BasisWindow, r: int, assignment: GenericAssignment) -> dict:
    """Diagonal eigenvalues: shift -> monic polynomial (product of row factors)."""
    ctx = ActionContext(window, assignment)
    out = {}
    for d in window.members:
        p = UniPoly.one()
        for _, v in ctx.row_values(r, d):
            p = p * UniPoly.linear(v)
        out[d] = p
    return out


def act_BC_at(
    window: BasisWindow,
    r: int,
    u0: Fraction,
    family: str,
    vec: dict,
    assignment: GenericAssignment,
    policy: str = STRICT,
) -> dict:
    """Ladder operators evaluated at a point, by exact interpolation.

    family "B" raises (targets one step up), "C" lowers.  The value at u0 is
    the interpolation-form sum; gating and window policy as in `apply`.
    """
    if family not in ("B", "C"):
        raise ValueError("family must be B or C")
    ctx = ActionContext(window, assignment)
    out: dict = {}
    for d, c in vec.items():
        for pivot, pv in ctx.row_values(r, d):
            other = r + 1 if family == "B" else r - 1
            ratio = ctx._ratio(r, other, pivot, d)
            prod = Fraction(1)
            for t, v in ctx.row_values(r, d):
                if t == pivot:
                    continue
                prod *= u0 + v
            sign = Fraction(-1) if family == "B" else Fraction(1)
            coeff = sign * ratio * prod * c
            step = TableauDelta.unit(pivot, +1 if family == "B" else -1)
            tgt = d + step
            if coeff == 0:
                continue
            if not window.checker.satisfied(tgt):
                continue
            if window.radius is not None and tgt.norm_inf() > window.radius:
                if policy == STRICT:
                    raise WindowOverflowError(f"target {tgt!r} leaves the window")
                continue
            out[tgt] = out.get(tgt, Fraction(0)) + coeff
    return {d: c for d, c in out.items() if c != 0}


def _relation_cases(pyramid, budget: int):
    """Yield (family name, index dict, lhs words, rhs words) for every case.

    Words are lists of (signed coefficient, [generators]); both sides are sums
    of such words applied right-to-left.
    """
    n = pyramid.n
    d_sups = range(1, budget + 1)

    def e_sups(i):
        lo = e_generator_min_degree(pyramid, i)
        return range(lo, lo + budget)

    f_sups = range(1, budget + 1)

    # 1: torus commutativity
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            for r in d_sups:
                for s in d_sups:
                    yield (
                        "dd",
                        {"i": i, "j": j, "r": r, "s": s},
                        [
                            (1, [("d", i, r), ("d", j, s)]),
                            (-1, [("d", j, s), ("d", i, r)]),
                        ],
                        [],
                    )
    # 2: ladder pairing against the torus
    for i in range(1, n):
        for j in range(1, n):
            for r in e_sups(i):
                for s in f_sups:
                    lhs = [
                        (1, [("e", i, r), ("f", j, s)]),
                        (-1, [("f", j, s), ("e", i, r)]),
                    ]
                    rhs = []
                    if i == j:
                        for t in range(0, r + s):
                            rhs.append(
                                (-1, [("dprime", i, t), ("d", i + 1, r + s - t - 1)])
                            )
                    yield ("ef", {"i": i, "j": j, "r": r, "s": s}, lhs, rhs)
    # 3 and 4: torus moves ladders
    for i in range(1, n + 1):
        for j in range(1, n):
            for r in d_sups:
                for s in e_sups(j):
                    sign = (1 if i == j else 0) - (1 if i == j + 1 else 0)
                    lhs = [
                        (1, [("d", i, r), ("e", j, s)]),
                        (-1, [("e", j, s), ("d", i, r)]),
                    ]
                    rhs = [
                        (sign, [("d", i, t), ("e", j, r + s - t - 1)])
                        for t in range(0, r)
                        if sign
                    ]
                    yield ("de", {"i": i, "j": j, "r": r, "s": s}, lhs, rhs)
                for s in f_sups:
                    sign = (1 if i == j + 1 else 0) - (1 if i == j else 0)
                    lhs = [
                        (1, [("d", i, r), ("f", j, s)]),
                        (-1, [("f", j, s), ("d", i, r)]),
                    ]
                    rhs = [
                        (sign, [("f", j, r + s - t - 1), ("d", i, t)])
                        for t in range(0, r)
                        if sign
                    ]
                    yield ("df", {"i": i, "j": j, "r": r, "s": s}, lhs, rhs)
    # 5: same-row quadratic
    for i in range(1, n):
        for r in e_sups(i):
            for s in e_sups(i):
                lhs = [
                    (1, [("e", i, r), ("e", i, s + 1)]),
                    (-1, [("e", i, s + 1), ("e", i, r)]),
                    (-1, [("e", i, r + 1), ("e", i, s)]),
                    (1, [("e", i, s), ("e", i, r + 1)]),
                ]
                rhs = [
                    (1, [("e", i, r), ("e", i, s)]),
                    (1, [("e", i, s), ("e", i, r)]),
                ]
                yield ("ee", {"i": i, "r": r, "s": s}, lhs, rhs)
        for r in f_sups:
            for s in f_sups:
                lhs = [
                    (1, [("f", i, r + 1), ("f", i, s)]),
                    (-1, [("f", i, s), ("f", i, r + 1)]),
                    (-1, [("f", i, r), ("f", i, s + 1)]),
                    (1, [("f", i, s + 1), ("f", i, r)]),
                ]
                rhs = [
                    (1, [("f", i, r), ("f", i, s)]),
                    (1, [("f", i, s), ("f", i, r)]),
                ]
                yield ("ff", {"i": i, "r": r, "s": s}, lhs, rhs)
    # 6: adjacent-row quadratic
    for i in range(1, n - 1):
        for r in e_sups(i):
            for s in e_sups(i + 1):
                lhs = [
                    (1, [("e", i, r), ("e", i + 1, s + 1)]),
                    (-1, [("e", i + 1, s + 1), ("e", i, r)]),
                    (-1, [("e", i, r + 1), ("e", i + 1, s)]),
                    (1, [("e", i + 1, s), ("e", i, r + 1)]),
                ]
                rhs = [(-1, [("e", i, r), ("e", i + 1, s)])]
                yield ("ee-adj", {"i": i, "r": r, "s": s}, lhs, rhs)
        for r in f_sups:
            for s in f_sups:
                lhs = [
                    (1, [("f", i, r + 1), ("f", i + 1, s)]),
                    (-1, [("f", i + 1, s), ("f", i, r + 1)]),
                    (-1, [("f", i, r), ("f", i + 1, s + 1)]),
                    (1, [("f", i + 1, s + 1), ("f", i, r)]),
                ]
                rhs = [(-1, [("f", i + 1, s), ("f", i, r)])]
                yield ("ff-adj", {"i": i, "r": r, "s": s}, lhs, rhs)
    # 7: distant commutation
    for i in range(1, n):
        for j in range(i + 2, n):
            for r in e_sups(i):
                for s in e_sups(j):
                    yield (
                        "ee-far",
                        {"i": i, "j": j, "r": r, "s": s},
                        [
                            (1, [("e", i, r), ("e", j, s)]),
                            (-1, [("e", j, s), ("e", i, r)]),
                        ],
                        [],
                    )
            for r in f_sups:
                for s in f_sups:
                    yield (
                        "ff-far",
                        {"i": i, "j": j, "r": r, "s": s},
                        [
                            (1, [("f", i, r), ("f", j, s)]),
                            (-1, [("f", j, s), ("f", i, r)]),
                        ],
                        [],
                    )
    # 8: cubic triples for neighbours
    for i in range(1, n):
        for j in (i - 1, i + 1):
            if not 1 <= j <= n - 1:
                continue
            for r in list(e_sups(i))[:2]:
                for s in list(e_sups(i))[:2]:
                    for t in list(e_sups(j))[:1]:
                        lhs = []
                        for a, b in ((r, s), (s, r)):
                            lhs += [
                                (1, [("e", i, a), ("e", i, b), ("e", j, t)]),
                                (-1, [("e", i, a), ("e", j, t), ("e", i, b)]),
                                (-1, [("e", i, b), ("e", j, t), ("e", i, a)]),
                                (1, [("e", j, t), ("e", i, b), ("e", i, a)]),
                            ]
                        yield ("serre-e", {"i": i, "j": j, "r": r, "s": s, "t": t}, lhs, [])
            for r in [1, 2]:
                for s in [1, 2]:
                    lhs = []
                    for a, b in ((r, s), (s, r)):
                        lhs += [
                            (1, [("f", i, a), ("f", i, b), ("f", j, 1)]),
                            (-1, [("f", i, a), ("f", j, 1), ("f", i, b)]),
                            (-1, [("f", i, b), ("f", j, 1), ("f", i, a)]),
                            (1, [("f", j, 1), ("f", i, b), ("f", i, a)]),
                        ]
                    yield ("serre-f", {"i": i, "j": j, "r": r, "s": s}, lhs, [])


def _word_row_margins(words) -> dict[int, int]:
    """Worst-case number of ladder steps per row over all monomials."""
    margins: dict[int, int] = {}
    for _, word in words:
        counts: dict[int, int] = {}
        for fam, row, _ in word:
            if fam in ("e", "f"):
                counts[row] = counts.get(row, 0) + 1
        for row, c in counts.items():
            margins[row] = max(margins.get(row, 0), c)
    return margins


def verify_defining_relations(
    C: RelationSet,
    l: Tableau,
    radius: int,
    budget: int,
    instantiations: int = 3,
    seed0: int = 1,
    max_violations: int = 1,
) -> dict:
    """Check every defining relation on all sufficiently interior window shifts.

    Returns a report dict with per-family status and the violations found
    (stopping after max_violations; pass 0 for exhaustive collection).
    """
    window = BasisWindow(C, l, radius)
    report: dict = {
        "families": {},
        "violations": [],
        "members": len(window.members),
    }

    # criticality scan: equal same-row entries anywhere in the window
    for d in window.members:
        tab = window.tableau(d)
        for i in range(1, tab.pyramid.n + 1):
            row = [t for t in all_indices(tab.pyramid) if t.i == i]
            for x in range(len(row)):
                for y in range(x + 1, len(row)):
                    if tab.entry(row[x]) == tab.entry(row[y]):
                        report["violations"].append(
                            {
                                "family": "critical",
                                "indices": {},
                                "shift": d.key(),
                                "detail": f"equal entries at {tuple(row[x])}, {tuple(row[y])}",
                            }
                        )
                        report["families"]["critical"] = "fail"
                        return report

    classes = l.classes()
    contexts = [
        ActionContext(window, generic_instantiate(classes, seed0 + t))
        for t in range(instantiations)
    ]

    for fam, idx, lhs, rhs in _relation_cases(l.pyramid, budget):
        status = report["families"].setdefault(fam, "pass")
        if status == "fail" and max_violations:
            continue
        margins = _word_row_margins(lhs + rhs)
        if any(m > radius for m in margins.values()):
            raise WindowOverflowError(
                f"window radius {radius} is too small for relation family {fam}"
            )
        eligible = [
            d
            for d in window.members
            if all(
                abs(v) <= radius - margins.get(t.i, 0)
                for t, v in ((t, d.get(t)) for t in window.free)
            )
        ]
        for ctx in contexts:
            for d in eligible:
                acc: dict = {}
                try:
                    for sign, word in lhs:
                        acc = _vec_add(acc, _vec_scale(ctx.apply_word(word, d), sign))
                    for sign, word in rhs:
                        acc = _vec_sub(acc, _vec_scale(ctx.apply_word(word, d), sign))
                except CriticalityError as exc:
                    acc = {"criticality": str(exc)}
                if acc:
                    report["families"][fam] = "fail"
                    report["violations"].append(
                        {
                            "family": fam,
                            "indices": idx,
                            "shift": d.key(),
                            "detail": sorted(
                                (dd.key() if isinstance(dd, TableauDelta) else dd, str(c))
                                for dd, c in acc.items()
                            ),
                        }
                    )
                    if max_violations and len(report["violations"]) >= max_violations:
                        return report
                    break
            else:
                continue
            break
    return report


def report_passes(report: dict) -> bool:
    return not report["violations"]


def is_irreducible(C: RelationSet, l: Tableau) -> bool:
    """The module over the window seed is irreducible iff C is maximal for the seed."""
    return equivalent(reduce_set(C), maximal_set(l))


def cyclicity_probe(
    window: BasisWindow,
    start: TableauDelta,
    budget: int,
    assignment: GenericAssignment | None = None,
) -> set[TableauDelta]:
    """Shifts reachable from `start` by ladder generators inside the window.

    Eigenvalue separation makes every summand with a nonzero coefficient
    reachable, so the closure of supports is the generated subspace's basis.
    """
    if assignment is None:
        assignment = generic_instantiate(window.seed.classes(), 1)
    ctx = ActionContext(window, assignment)
    pyramid = window.seed.pyramid
    gens = []
    for i in range(1, pyramid.n):
        lo = e_generator_min_degree(pyramid, i)
        for sup in range(lo, lo + max(budget, 0)):
            gens.append(("e", i, sup))
        for sup in range(1, budget + 1):
            gens.append(("f", i, sup))
    reached = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for d in frontier:
            for gen in gens:
                vec = ctx.apply(gen, {d: Fraction(1)}, policy=CLIP)
                for tgt in vec:
                    if tgt not in reached:
                        reached.add(tgt)
                        nxt.append(tgt)
        frontier = nxt
    return reached
