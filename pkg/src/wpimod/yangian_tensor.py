"""Tensor products of highest-weight evaluation modules over the Yangian.

Each factor is a gl_n highest-weight module realized as a relation module over
a one-column pyramid, pulled back through the evaluation map
t_ij(u) -> delta_ij + E_ij/(u - a).  The coproduct spreads t_ij(u) over the
factors; quantum minors and the Drinfeld B-series are computed as exact
truncated series, and singular vectors are exact kernels of the resulting
linear systems on weight spaces.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .exact_arith import InvSeries, as_scalar
from .gt_module import CLIP, ActionContext, FreeWindow
from .pyramid import Pyramid
from .relations import maximal_set
from .tableau import TableauDelta, TriIndex, mutable_indices, tableau_from_values


class GlWeight:
    """A gl_n highest weight (lambda_1, ..., lambda_n) with exact entries."""

    __slots__ = ("values",)

    def __init__(self, values):
        self.values = tuple(as_scalar(v) for v in values)
        if not self.values:
            raise ValueError("weight needs at least one entry")

    @property
    def n(self) -> int:
        return len(self.values)

    def l_values(self) -> tuple[Fraction, ...]:
        """The shifted coordinates l_i = lambda_i - i + 1."""
        return tuple(v - i for i, v in enumerate(self.values))

    def is_good(self) -> bool:
        """Entry differences within indices 1..n-1 non-integral or above the index gap."""
        for i in range(self.n - 1):
            for j in range(i + 1, self.n - 1):
                diff = self.values[i] - self.values[j]
                if diff.denominator == 1 and diff <= i - j:
                    return False
        return True

    def is_dominant_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.values) and all(
            a >= b for a, b in zip(self.values, self.values[1:])
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, GlWeight) and self.values == other.values

    def __hash__(self) -> int:
        return hash(self.values)

    def __repr__(self) -> str:
        return f"GlWeight({[str(v) for v in self.values]})"


def dual_weight(w: GlWeight) -> GlWeight:
    """Reversal with negation; an involution."""
    return GlWeight(tuple(-v for v in reversed(w.values)))


def is_generic(weights) -> bool:
    """No cross-family entry difference is an integer."""
    ws = list(weights)
    for i in range(len(ws)):
        for j in range(i + 1, len(ws)):
            for a in ws[i].values:
                for b in ws[j].values:
                    if (a - b).denominator == 1:
                        return False
    return True


def is_good(column_weights, pyramid: Pyramid | None = None) -> bool:
    """Every per-column weight tuple is good."""
    cols = list(column_weights)
    if pyramid is not None and len(cols) != pyramid.rows[-1]:
        raise ValueError("one weight tuple per pyramid column expected")
    return all(w.is_good() for w in cols)


def weyl_dimension(w: GlWeight) -> int:
    """Dimension of the simple module with dominant integral highest weight."""
    if not w.is_dominant_integral():
        raise ValueError("Weyl dimension requires a dominant integral weight")
    num = 1
    den = 1
    n = w.n
    for i in range(n):
        for j in range(i + 1, n):
            num *= int(w.values[i] - w.values[j]) + j - i
            den *= j - i
    return num // den


# -- interval sets ----------------------------------------------------------


class IntervalSet:
    """A union of finite integer sets and half-infinite integer rays.

    A ray is (anchor, direction, excluded): the values anchor + direction*z for
    z >= 0, minus the excluded finite set.  Membership is exact.
    """

    __slots__ = ("bounded", "rays")

    def __init__(self, bounded=(), rays=()):
        self.bounded = frozenset(as_scalar(v) for v in bounded)
        self.rays = tuple(
            (as_scalar(a), int(d), frozenset(as_scalar(x) for x in ex))
            for a, d, ex in rays
        )

    def contains(self, x) -> bool:
        x = as_scalar(x)
        if x in self.bounded:
            return True
        for anchor, direction, excluded in self.rays:
            gap = (x - anchor) * direction
            if gap.denominator == 1 and gap >= 0 and x not in excluded:
                return True
        return False

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def is_empty(self) -> bool:
        return not self.bounded and not self.rays

    def finite_list(self) -> list[Fraction]:
        if self.rays:
            raise ValueError("set contains an infinite ray")
        return sorted(self.bounded)


def _integer_chains(values, indices):
    """Group (index, value) pairs into integer-linked chains, indices descending."""
    chains: list[list[tuple[int, Fraction]]] = []
    for idx in sorted(indices, reverse=True):
        v = values[idx - 1]
        for chain in chains:
            if (v - chain[0][1]).denominator == 1:
                chain.append((idx, v))
                break
        else:
            chains.append([(idx, v)])
    return chains


def interval_sets(l_values, i: int, j: int) -> tuple[IntervalSet, IntervalSet]:
    """The pair of sets attached to coordinates l_i, ..., l_j (1-based, i < j).

    Each integer-linked chain contributes either the bounded integer interval
    between its extreme values minus the chain, or a half-infinite ray minus the
    chain, depending on whether the chain reaches index j (minus side) or
    index i (plus side).
    """
    if not 1 <= i < j <= len(l_values):
        raise ValueError("need 1 <= i < j <= len(l_values)")
    values = [as_scalar(v) for v in l_values]
    chains = _integer_chains(values, range(i, j + 1))
    minus_bounded: set = set()
    minus_rays = []
    plus_bounded: set = set()
    plus_rays = []
    for chain in chains:
        members = frozenset(v for _, v in chain)
        first = chain[0]  # largest index
        last = chain[-1]  # smallest index
        filled = set()
        v = first[1]
        while v <= last[1]:
            filled.add(v)
            v += 1
        if first[0] == j:
            minus_bounded |= filled - members
        else:
            minus_rays.append((first[1], -1, members))
        if last[0] == i:
            plus_bounded |= filled - members
        else:
            plus_rays.append((last[1], +1, members))
    return (
        IntervalSet(minus_bounded, minus_rays),
        IntervalSet(plus_bounded, plus_rays),
    )


def integral_condition(lam: GlWeight, mu: GlWeight) -> bool:
    """Sufficient irreducibility condition for a two-factor integral tensor product."""
    if lam.n != mu.n:
        raise ValueError("weights must have the same length")
    if not lam.is_good() or not mu.is_good():
        raise ValueError("both weights must be good")
    ls = lam.l_values()
    ms = mu.l_values()
    for i in range(1, lam.n + 1):
        for j in range(i + 1, lam.n + 1):
            lminus, lplus = interval_sets(ls, i, j)
            first = ms[j - 1] not in lminus and ms[i - 1] not in lplus
            if first:
                continue
            mminus, mplus = interval_sets(ms, i, j)
            second = ls[j - 1] not in mminus and ls[i - 1] not in mplus
            if not second:
                return False
    return True


# -- evaluation factors -----------------------------------------------------


class EvaluationFactor:
    """A gl_n highest-weight module at an evaluation point.

    The carrier is the relation module of the maximal relation set of the
    highest-weight tableau over the one-column pyramid; basis vectors are
    integral shifts of the seed, graded by total lowering depth.
    """

    def __init__(self, weight: GlWeight, point=0, depth: int = 3):
        self.weight = weight
        self.point = as_scalar(point)
        self.depth = int(depth)
        n = weight.n
        self.n = n
        pi = Pyramid((1,) * n)
        ls = weight.l_values()
        values = {}
        for i in range(1, n + 1):
            for j in range(1, i + 1):
                values[TriIndex(1, i, j)] = ls[j - 1]
        seed = tableau_from_values(pi, values)
        self.seed = seed
        self.relations = maximal_set(seed)
        self.window = FreeWindow(self.relations, seed)
        self.ctx = ActionContext(self.window, seed.assignment)
        self.free = mutable_indices(pi)
        self._delta_cache: dict[int, list[TableauDelta]] = {}

    def highest(self) -> TableauDelta:
        return TableauDelta()

    def depth_of(self, d: TableauDelta) -> int:
        return -sum(d.offsets.values())

    def root_offset(self, d: TableauDelta) -> tuple[int, ...]:
        """Per-row lowering counts (c_1, ..., c_{n-1})."""
        out = [0] * (self.n - 1)
        for t, v in d.offsets.items():
            out[t.i - 1] -= v
        return tuple(out)

    def gl_weight(self, d: TableauDelta) -> tuple[Fraction, ...]:
        """Eigenvalues of the diagonal E_kk on the shifted basis vector."""
        sums = [Fraction(0)] * (self.n + 1)
        for t in self.ctx._row_index[self.n]:
            sums[self.n] += self.ctx.value(t, d)
        for t in self.free:
            sums[t.i] += self.ctx.value(t, d)
        return tuple(
            sums[k] - sums[k - 1] + (k - 1) for k in range(1, self.n + 1)
        )

    def deltas(self, depth: int) -> list[TableauDelta]:
        """All basis shifts of total depth at most `depth`."""
        depth = int(depth)
        if depth not in self._delta_cache:
            out = []
            ranges = [range(-depth, 1) for _ in self.free]
            for combo in itertools.product(*ranges):
                if -sum(combo) > depth:
                    continue
                d = TableauDelta(dict(zip(self.free, combo)))
                if self.window.checker.satisfied(d):
                    out.append(d)
            out.sort(key=lambda d: (self.depth_of(d), d.key()))
            self._delta_cache[depth] = out
        return self._delta_cache[depth]

    def E(self, a: int, b: int, vec: dict) -> dict:
        """The gl_n basis element E_ab on a sparse vector {shift: coefficient}."""
        if not (1 <= a <= self.n and 1 <= b <= self.n):
            raise IndexError(f"index out of range for gl_{self.n}")
        if a == b:
            out = {}
            for d, c in vec.items():
                val = c * self.gl_weight(d)[a - 1]
                if val != 0:
                    out[d] = out.get(d, Fraction(0)) + val
            return out
        if b == a + 1:
            return self.ctx.apply(("e", a, 1), vec, policy=CLIP)
        if a == b + 1:
            return self.ctx.apply(("f", b, 1), vec, policy=CLIP)
        mid = b - 1 if a < b else b + 1
        first = self.E(a, mid, self.E(mid, b, vec))
        second = self.E(mid, b, self.E(a, mid, vec))
        out = dict(first)
        for d, c in second.items():
            out[d] = out.get(d, Fraction(0)) - c
        return {d: c for d, c in out.items() if c != 0}


def evaluation_action(f: EvaluationFactor, i: int, j: int, r: int) -> dict:
    """Matrix of t_ij^(r) = E_ij * a^(r-1) over the depth-bounded basis."""
    if r < 1:
        raise ValueError("superscript must be at least 1")
    scale = f.point ** (r - 1)
    out = {}
    for d in f.deltas(f.depth):
        img = f.E(i, j, {d: Fraction(1)})
        out[d] = {tgt: c * scale for tgt, c in img.items() if c * scale != 0}
    return out


# -- tensor modules ---------------------------------------------------------


class TensorModule:
    """An ordered tensor product of evaluation factors, graded by root height."""

    def __init__(self, factors, depth: int = 3):
        self.factors = list(factors)
        if not self.factors:
            raise ValueError("need at least one factor")
        ns = {f.n for f in self.factors}
        if len(ns) > 1:
            raise ValueError("all factors must share the same rank")
        self.n = self.factors[0].n
        self.depth = int(depth)

    def highest(self) -> tuple:
        return tuple(f.highest() for f in self.factors)

    def depth_of(self, key) -> int:
        return sum(f.depth_of(d) for f, d in zip(self.factors, key))

    def root_offset(self, key) -> tuple[int, ...]:
        out = [0] * (self.n - 1)
        for f, d in zip(self.factors, key):
            for i, c in enumerate(f.root_offset(d)):
                out[i] += c
        return tuple(out)

    def gl_weight(self, key) -> tuple[Fraction, ...]:
        acc = [Fraction(0)] * self.n
        for f, d in zip(self.factors, key):
            for i, v in enumerate(f.gl_weight(d)):
                acc[i] += v
        return tuple(acc)

    def basis(self, depth: int | None = None) -> list[tuple]:
        depth = self.depth if depth is None else int(depth)
        out = []
        per = [f.deltas(depth) for f in self.factors]
        for key in itertools.product(*per):
            if self.depth_of(key) <= depth:
                out.append(key)
        out.sort(key=lambda k: (self.depth_of(k), tuple(d.key() for d in k)))
        return out

    def weight_space(self, offset) -> list[tuple]:
        """Basis keys whose root-height offset equals the given tuple."""
        offset = tuple(int(c) for c in offset)
        depth = sum(offset)
        return [k for k in self.basis(depth) if self.root_offset(k) == offset]


def _const_series(c, order: int) -> InvSeries:
    return InvSeries(c, [0] * order)


def _scale_series(s: InvSeries, c) -> InvSeries:
    c = as_scalar(c)
    return InvSeries(s.constant * c, [x * c for x in s.coeffs])


def _series_accum(out: dict, key, s: InvSeries):
    if key in out:
        out[key] = out[key] + s
    else:
        out[key] = s


def _slot_t(M: TensorModule, slot: int, a: int, b: int, arg_shift, vec: dict, order: int) -> dict:
    """t_ab(u - arg_shift) acting on factor `slot` of series-valued vectors."""
    f = M.factors[slot]
    pole = as_scalar(arg_shift) + f.point
    geom = InvSeries(0, [pole ** (m - 1) for m in range(1, order + 1)])
    out: dict = {}
    for key, ser in vec.items():
        if a == b:
            _series_accum(out, key, ser)
        img = f.E(a, b, {key[slot]: Fraction(1)})
        for d2, coeff in img.items():
            k2 = key[:slot] + (d2,) + key[slot + 1:]
            _series_accum(out, k2, ser * _scale_series(geom, coeff))
    return out


def _tensor_t(M: TensorModule, a: int, b: int, arg_shift, vec: dict, order: int, lo: int, hi: int) -> dict:
    """Iterated-coproduct image of t_ab(u - arg_shift) on factor slots [lo, hi)."""
    if hi - lo == 1:
        return _slot_t(M, lo, a, b, arg_shift, vec, order)
    out: dict = {}
    for mid in range(1, M.n + 1):
        inner = _tensor_t(M, mid, b, arg_shift, vec, order, lo + 1, hi)
        if not inner:
            continue
        for key, ser in _slot_t(M, lo, a, mid, arg_shift, inner, order).items():
            _series_accum(out, key, ser)
    return out


def _as_series_vec(vec: dict, order: int) -> dict:
    out = {}
    for key, c in vec.items():
        out[key] = c if isinstance(c, InvSeries) else _const_series(c, order)
    return out


def t_series_apply(M: TensorModule, i: int, j: int, vec: dict, order: int,
                   arg_shift=0, lo: int = 0, hi: int | None = None) -> dict:
    """Apply t_ij(u - arg_shift) to a vector; coefficients become series."""
    hi = len(M.factors) if hi is None else hi
    return _tensor_t(M, i, j, arg_shift, _as_series_vec(vec, order), order, lo, hi)


def t_coefficient(M: TensorModule, i: int, j: int, r: int, vec: dict,
                  lo: int = 0, hi: int | None = None) -> dict:
    """Apply the single generator coefficient t_ij^(r) (t^(0) is delta_ij)."""
    if r == 0:
        return dict(vec) if i == j else {}
    out_ser = t_series_apply(M, i, j, vec, r, 0, lo, hi)
    out = {}
    for key, s in out_ser.items():
        c = s.coeff(r)
        if c != 0:
            out[key] = c
    return out


def coproduct_action(M: TensorModule, i: int, j: int, r: int) -> dict:
    """Matrix of t_ij^(r) over the depth-bounded tensor basis."""
    out = {}
    for key in M.basis():
        out[key] = t_coefficient(M, i, j, r, {key: Fraction(1)})
    return out


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


class OperatorSeries:
    """A quantum minor as an applicable truncated-series operator."""

    def __init__(self, M: TensorModule, a_rows, b_cols, order: int,
                 lo: int = 0, hi: int | None = None):
        self.M = M
        self.a_rows = tuple(int(a) for a in a_rows)
        self.b_cols = tuple(int(b) for b in b_cols)
        if len(self.a_rows) != len(self.b_cols):
            raise ValueError("row and column index lists must have equal length")
        self.order = int(order)
        self.lo = lo
        self.hi = len(M.factors) if hi is None else hi
        self.repeated = (
            len(set(self.a_rows)) < len(self.a_rows)
            or len(set(self.b_cols)) < len(self.b_cols)
        )

    def apply(self, vec: dict) -> dict:
        """Image of a vector; keys map to truncated series."""
        if self.repeated:
            return {}
        r = len(self.a_rows)
        vec = _as_series_vec(vec, self.order)
        out: dict = {}
        for sigma in itertools.permutations(range(r)):
            sgn = _perm_sign(sigma)
            cur = vec
            for pos in range(r - 1, -1, -1):
                cur = _tensor_t(
                    self.M,
                    self.a_rows[sigma[pos]],
                    self.b_cols[pos],
                    Fraction(pos),
                    cur,
                    self.order,
                    self.lo,
                    self.hi,
                )
                if not cur:
                    break
            for key, s in cur.items():
                _series_accum(out, key, _scale_series(s, sgn))
        zero = _const_series(0, self.order)
        return {k: s for k, s in out.items() if s != zero}


def quantum_minor(M: TensorModule, a_rows, b_cols, order: int,
                  lo: int = 0, hi: int | None = None) -> OperatorSeries:
    return OperatorSeries(M, a_rows, b_cols, order, lo, hi)


def drinfeld_a(M: TensorModule, m: int, order: int) -> OperatorSeries:
    return quantum_minor(M, range(1, m + 1), range(1, m + 1), order)


def drinfeld_b(M: TensorModule, m: int, order: int) -> OperatorSeries:
    cols = list(range(1, m)) + [m + 1]
    return quantum_minor(M, range(1, m + 1), cols, order)


def drinfeld_c(M: TensorModule, m: int, order: int) -> OperatorSeries:
    rows = list(range(1, m)) + [m + 1]
    return quantum_minor(M, rows, range(1, m + 1), order)


# -- singular vectors -------------------------------------------------------


def _rational_kernel(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the null space of an exact rational matrix."""
    mat = [list(r) for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(mat)):
            if mat[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = 1 / mat[rank][col]
        mat[rank] = [x * inv for x in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                factor = mat[r][col]
                mat[r] = [a - factor * b for a, b in zip(mat[r], mat[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -mat[r][fc]
        basis.append(v)
    return basis


def find_singular_vectors(M: TensorModule, offset, order: int | None = None) -> list[dict]:
    """Exact kernel of all B-series coefficients on one weight space.

    `offset` gives per-row lowering counts; the returned vectors are sparse
    dicts over the weight-space basis keys.
    """
    offset = tuple(int(c) for c in offset)
    keys = M.weight_space(offset)
    if not keys:
        return []
    if order is None:
        order = M.n * max(sum(offset), 1) + M.n
    rows = []
    images = []
    for key in keys:
        per_m = []
        for m in range(1, M.n):
            per_m.append(drinfeld_b(M, m, order).apply({key: Fraction(1)}))
        images.append(per_m)
    out_keys = set()
    for per_m in images:
        for img in per_m:
            out_keys.update(img.keys())
    out_keys = sorted(out_keys, key=lambda k: tuple(d.key() for d in k))
    for m_idx in range(M.n - 1):
        for ok in out_keys:
            for t in range(order + 1):
                row = []
                for per_m in images:
                    s = per_m[m_idx].get(ok)
                    row.append(s.coeff(t) if s is not None else Fraction(0))
                if any(c != 0 for c in row):
                    rows.append(row)
    kernel = _rational_kernel(rows, len(keys))
    out = []
    for v in kernel:
        out.append({k: c for k, c in zip(keys, v) if c != 0})
    return out


def singular_dimensions(M: TensorModule, depth: int | None = None,
                        order: int | None = None) -> dict:
    """Kernel dimension per root-height offset, all offsets of height <= depth."""
    depth = M.depth if depth is None else int(depth)
    out = {}
    shape = M.n - 1
    for combo in itertools.product(range(depth + 1), repeat=shape):
        if sum(combo) > depth:
            continue
        out[combo] = len(find_singular_vectors(M, combo, order))
    return out


def only_top_singular(M: TensorModule, depth: int | None = None,
                      order: int | None = None) -> bool:
    """True when the only singular line in the probed depths is the top one."""
    dims = singular_dimensions(M, depth, order)
    for offset, dim in dims.items():
        expected = 1 if all(c == 0 for c in offset) else 0
        if dim != expected:
            return False
    return True
