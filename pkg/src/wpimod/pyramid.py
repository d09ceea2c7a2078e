"""Pyramid shapes and the index bookkeeping they induce.

A pyramid is a left-justified array with non-decreasing row lengths
p_1 <= ... <= p_n.  Row i of a tableau for the pyramid has positions
j = 1..i, and position j carries p_j entry layers.
"""

from __future__ import annotations


class Pyramid:
    """Left-justified pyramid with rows p_1 <= ... <= p_n."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(int(p) for p in rows)
        if not rows:
            raise ValueError("pyramid needs at least one row")
        if rows[0] < 1:
            raise ValueError("row lengths must be positive")
        for a, b in zip(rows, rows[1:]):
            if a > b:
                raise ValueError("row lengths must be non-decreasing")
        self.rows = rows

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def total(self) -> int:
        """N, the total number of boxes."""
        return sum(self.rows)

    def p(self, i: int) -> int:
        """Row length p_i, with p_0 = 0 for convenience."""
        if i == 0:
            return 0
        return self.rows[i - 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Pyramid) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"Pyramid{self.rows}"

    def to_json(self) -> dict:
        return {"rows": list(self.rows)}

    @staticmethod
    def from_json(obj: dict) -> "Pyramid":
        return Pyramid(obj["rows"])


def columns(pi: Pyramid) -> list[int]:
    """Column heights q_1 >= ... >= q_l, l = p_n; q_k = n - i + 1 for p_{i-1} < k <= p_i."""
    qs = []
    for k in range(1, pi.rows[-1] + 1):
        qs.append(sum(1 for p in pi.rows if p >= k))
    return qs


def e_generator_min_degree(pi: Pyramid, i: int) -> int:
    """Least superscript r for which the i-th raising generator exists: p_{i+1} - p_i + 1."""
    if not 1 <= i <= pi.n - 1:
        raise ValueError(f"row index {i} out of range for pyramid with {pi.n} rows")
    return pi.p(i + 1) - pi.p(i) + 1


def rows_from_columns(qs) -> tuple[int, ...]:
    """Inverse of `columns`: recover row lengths from column heights."""
    qs = list(qs)
    n = qs[0] if qs else 0
    return tuple(sum(1 for q in qs if q >= n - i + 1) for i in range(1, n + 1))
