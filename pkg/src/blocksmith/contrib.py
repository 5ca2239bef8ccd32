"""Contribution matrices of a Gram decomposition and the height data they
carry.

For Q with Q^t Q = C and defect order |D|, the contribution matrix is
M = |D| * Q * C^{-1} * Q^t. It is an exact integer matrix, symmetric,
idempotent up to the scale |D| (M * M = |D| * M), and has trace |D| * l.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .intmat import (
    IntMatrix,
    MatrixError,
    adjugate,
    det,
    p_adic_valuation,
)


class ContributionError(ValueError):
    pass


@dataclass(frozen=True)
class ContributionResult:
    matrix: IntMatrix
    defect_order: int

    @property
    def diagonal(self) -> tuple[int, ...]:
        return self.matrix.diagonal_entries()


@dataclass(frozen=True)
class HeightProfile:
    heights: tuple[int, ...]

    def count(self, h: int) -> int:
        return sum(1 for x in self.heights if x == h)

    @property
    def height_zero_count(self) -> int:
        return self.count(0)


def contribution_matrix(
    q: IntMatrix, c: IntMatrix, defect_order: int
) -> ContributionResult:
    """|D| * Q * C^{-1} * Q^t, computed exactly via the adjugate."""
    if defect_order <= 0:
        raise ContributionError("defect order must be positive")
    if q.col_count != c.col_count or not c.is_square:
        raise ContributionError("shape mismatch between decomposition and Gram matrix")
    d = det(c)
    if d == 0:
        raise ContributionError("Gram matrix is singular")
    if q.transpose().matmul(q) != c:
        raise ContributionError("Q^t Q does not reproduce the Gram matrix")
    scaled = q.matmul(adjugate(c)).matmul(q.transpose())
    rows = []
    for row in scaled.rows:
        out_row = []
        for x in row:
            num = defect_order * x
            if num % d != 0:
                raise ContributionError(
                    "contribution matrix is not integral; defect order does not "
                    "match the decomposition"
                )
            out_row.append(num // d)
        rows.append(out_row)
    m = IntMatrix.from_rows(rows)
    # invariants of a scaled idempotent
    assert m.is_symmetric
    assert m.matmul(m) == m.scale(defect_order)
    assert m.trace() == defect_order * c.col_count
    return ContributionResult(matrix=m, defect_order=defect_order)


def heights_from_contribution(
    m: IntMatrix | ContributionResult, p: int
) -> HeightProfile:
    """Character heights read off the contribution diagonal.

    An entry coprime to p means height zero. Entries divisible by p are
    assigned height v_p(entry) / 2; the even-valuation requirement is a
    working hypothesis checked here, not a theorem, so odd valuations and
    zero entries are rejected loudly rather than guessed at.
    """
    if p < 2:
        raise ContributionError(f"p must be at least 2, got {p}")
    mat = m.matrix if isinstance(m, ContributionResult) else m
    heights = []
    for i, x in enumerate(mat.diagonal_entries()):
        if x == 0:
            raise ContributionError(
                f"diagonal entry {i} vanishes; height undefined"
            )
        v = p_adic_valuation(x, p)
        if v % 2 != 0:
            raise ContributionError(
                f"diagonal entry {i} has odd {p}-adic valuation {v}; "
                "height rule does not apply"
            )
        heights.append(v // 2)
    return HeightProfile(heights=tuple(heights))


def complement_diag(
    known: Sequence[int] | Sequence[Sequence[int]], defect_order: int
) -> tuple[int, ...]:
    """Diagonal of the remaining contribution once the known ones are summed.

    The contribution matrices over a full set of subsections sum to
    |D| * identity on the diagonal. ``known`` is either one diagonal or a
    list of diagonals; the complement must stay within [0, |D|].
    """
    if defect_order <= 0:
        raise ContributionError("defect order must be positive")
    if not known:
        raise ContributionError("need at least one known diagonal")
    if isinstance(known[0], (list, tuple)):
        length = len(known[0])
        if any(len(d) != length for d in known):
            raise ContributionError("known diagonals differ in length")
        totals = [sum(d[i] for d in known) for i in range(length)]
    else:
        totals = list(known)  # type: ignore[arg-type]
    out = []
    for i, t in enumerate(totals):
        rem = defect_order - t
        if rem < 0 or rem > defect_order:
            raise ContributionError(
                f"position {i}: known contributions sum to {t}, outside [0, {defect_order}]"
            )
        out.append(rem)
    return tuple(out)
