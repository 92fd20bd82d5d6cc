"""Row-span linear algebra over Z/m: Howell form, kernels, and membership.

Vectors are plain tuples/lists of ints. The Howell form is what makes
greedy reduction a correct membership test over a ring with zero divisors:
every span vector whose first j entries vanish is spanned by the rows whose
pivot lies strictly right of column j.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .modring import normalizing_unit, xgcd


@dataclass(frozen=True)
class MatrixZm:
    m: int
    rows: tuple[tuple[int, ...], ...]
    ncols: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], m: int, ncols: int | None = None) -> "MatrixZm":
        rows = tuple(tuple(x % m for x in row) for row in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for an empty matrix")
            ncols = len(rows[0])
        if any(len(row) != ncols for row in rows):
            raise ValueError("ragged rows")
        return cls(m, rows, ncols)

    @classmethod
    def identity(cls, n: int, m: int) -> "MatrixZm":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], m, n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def __matmul__(self, other: "MatrixZm") -> "MatrixZm":
        if self.ncols != other.nrows or self.m != other.m:
            raise ValueError("shape or modulus mismatch")
        cols = list(zip(*other.rows)) if other.rows else [()] * other.ncols
        out = [[sum(a * b for a, b in zip(row, col)) % self.m for col in cols] for row in self.rows]
        return MatrixZm.from_rows(out, self.m, other.ncols)

    def transpose(self) -> "MatrixZm":
        return MatrixZm.from_rows([list(c) for c in zip(*self.rows)] if self.rows else [], self.m, self.nrows)

    def apply(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(row, x)) % self.m for row in self.rows)


class _Howell:
    """In-place Howell reduction of a list of rows, tracking the transform."""

    def __init__(self, rows: list[list[int]], m: int, ncols: int, track: bool):
        self.m = m
        self.ncols = ncols
        self.T = rows
        n = len(rows)
        self.U = [[int(i == j) for j in range(n)] for i in range(n)] if track else None
        self.pivots: dict[int, int] = {}  # column -> row index
        self.pending: list[int] = []

    def _combine(self, k: int, i: int, s: int, t: int, u: int, v: int) -> None:
        m = self.m
        rk, ri = self.T[k], self.T[i]
        self.T[k] = [(s * a + t * b) % m for a, b in zip(rk, ri)]
        self.T[i] = [(u * a + v * b) % m for a, b in zip(rk, ri)]
        if self.U is not None:
            uk, ui = self.U[k], self.U[i]
            self.U[k] = [(s * a + t * b) % m for a, b in zip(uk, ui)]
            self.U[i] = [(u * a + v * b) % m for a, b in zip(uk, ui)]

    def _scale(self, i: int, w: int) -> None:
        m = self.m
        self.T[i] = [(w * a) % m for a in self.T[i]]
        if self.U is not None:
            self.U[i] = [(w * a) % m for a in self.U[i]]

    def _addmul(self, dst: int, src: int, c: int) -> None:
        m = self.m
        self.T[dst] = [(a + c * b) % m for a, b in zip(self.T[dst], self.T[src])]
        if self.U is not None:
            self.U[dst] = [(a + c * b) % m for a, b in zip(self.U[dst], self.U[src])]

    def insert(self, i: int) -> None:
        row = self.T[i]
        for j in range(self.ncols):
            b = row[j]
            if b == 0:
                continue
            k = self.pivots.get(j)
            if k is None:
                self.pivots[j] = i
                self._scale(i, normalizing_unit(b, self.m))
                self.pending.append(i)
                return
            a = self.T[k][j]
            if b % a == 0:
                self._addmul(i, k, -(b // a))
            else:
                g, s, t = xgcd(a, b)
                self._combine(k, i, s, t, -(b // g), a // g)
                self._scale(k, normalizing_unit(self.T[k][j], self.m))
                self.pending.append(k)
            row = self.T[i]

    def _free_row(self) -> int:
        used = set(self.pivots.values())
        for z, row in enumerate(self.T):
            if z not in used and not any(row):
                return z
        raise RuntimeError("no scratch row available")

    def run(self) -> None:
        for i in range(len(self.T)):
            if i not in self.pivots.values():
                self.insert(i)
        while self.pending:
            k = self.pending.pop()
            j = next(c for c, x in enumerate(self.T[k]) if x)
            ann = self.m // self.T[k][j]
            if ann == self.m or not any(self.T[k][j + 1:]):
                continue
            z = self._free_row()
            self._addmul(z, k, ann)
            self.insert(z)
        cols = sorted(self.pivots)
        for idx, j in enumerate(cols):
            k = self.pivots[j]
            p = self.T[k][j]
            for j2 in cols[:idx]:
                k2 = self.pivots[j2]
                q = self.T[k2][j] // p
                if q:
                    self._addmul(k2, k, -q)

    def ordered(self) -> list[int]:
        cols = sorted(self.pivots)
        head = [self.pivots[j] for j in cols]
        used = set(head)
        return head + [i for i in range(len(self.T)) if i not in used]


def howell_form(A: MatrixZm) -> tuple[MatrixZm, MatrixZm]:
    """Howell normal form H and a unimodular U with H = U * A'.

    A' is A padded with zero rows to max(rows, cols + 1) rows, since the
    Howell form of a short matrix can have more rows than the input.
    Nonzero rows of H come first, ordered by pivot column; each pivot is a
    divisor of m and entries above a pivot are reduced modulo it.
    """
    n = max(A.nrows, A.ncols + 1)
    rows = [list(r) for r in A.rows] + [[0] * A.ncols for _ in range(n - A.nrows)]
    hw = _Howell(rows, A.m, A.ncols, track=True)
    hw.run()
    order = hw.ordered()
    H = MatrixZm.from_rows([hw.T[i] for i in order], A.m, A.ncols)
    U = MatrixZm.from_rows([hw.U[i] for i in order], A.m, n)
    return H, U


def howell_rows(rows: Sequence[Sequence[int]], m: int, ncols: int) -> list[tuple[int, ...]]:
    """Nonzero rows of the Howell form of ``rows`` (no transform tracking)."""
    n = max(len(rows), ncols + 1)
    work = [[x % m for x in r] for r in rows] + [[0] * ncols for _ in range(n - len(rows))]
    hw = _Howell(work, m, ncols, track=False)
    hw.run()
    return [tuple(hw.T[hw.pivots[j]]) for j in sorted(hw.pivots)]


def kernel_generators(A: MatrixZm) -> list[tuple[int, ...]]:
    """Generators of {x : A x = 0}; an empty list means the kernel is zero."""
    r, c, m = A.nrows, A.ncols, A.m
    if c == 0:
        return []
    # rows of [A^T | I] span {(Ax, x)}; Howell rows with a zero A-part span the kernel
    cols = list(zip(*A.rows)) if r else [()] * c
    aug = [list(cols[i]) + [int(i == j) for j in range(c)] for i in range(c)]
    return [row[r:] for row in howell_rows(aug, m, r + c) if not any(row[:r])]


def in_span(gens: Sequence[Sequence[int]], target: Sequence[int], m: int) -> Optional[list[int]]:
    """Coefficients c with sum(c_i * gens_i) == target mod m, or None."""
    k, L = len(gens), len(target)
    t = [x % m for x in target]
    if k == 0:
        return [] if not any(t) else None
    aug = [[x % m for x in g] + [int(i == j) for j in range(k)] for i, g in enumerate(gens)]
    H = howell_rows(aug, m, L + k)
    w = t + [0] * k
    for row in H:
        j = next(c for c, x in enumerate(row) if x)
        if j >= L:
            break
        # rows are pivot-ordered, so w[:j] is already clear
        if w[j] == 0:
            continue
        p = row[j]
        if w[j] % p:
            return None
        q = w[j] // p
        w = [(a - q * b) % m for a, b in zip(w, row)]
    if any(w[:L]):
        return None
    return [(-x) % m for x in w[L:]]


def span_contains_all(gens: Sequence[Sequence[int]], targets: Sequence[Sequence[int]], m: int) -> bool:
    return all(in_span(gens, t, m) is not None for t in targets)


class RowSpan:
    """A row span put in Howell form once, for many membership queries."""

    def __init__(self, gens: Sequence[Sequence[int]], m: int, ncols: int):
        self.m = m
        self.ncols = ncols
        self.rows = howell_rows(gens, m, ncols) if gens else []
        self._lead = [next(c for c, x in enumerate(row) if x) for row in self.rows]

    def residue(self, target: Sequence[int]) -> list[int]:
        """Greedy remainder of ``target``; zero exactly when target is in the span."""
        m = self.m
        w = [x % m for x in target]
        for j, row in zip(self._lead, self.rows):
            if w[j] == 0:
                continue
            p = row[j]
            if w[j] % p:
                return w
            q = w[j] // p
            w = [(a - q * b) % m for a, b in zip(w, row)]
        return w

    def __contains__(self, target: Sequence[int]) -> bool:
        return not any(self.residue(target))

    def contains_span(self, other: "RowSpan") -> bool:
        return all(row in self for row in other.rows)
