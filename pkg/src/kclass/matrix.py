"""Exact integer matrices and the Smith normal form.

Everything here works over plain Python ints, so there is no overflow and
no floating point anywhere.  Matrices are immutable; operations return new
objects.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence


class IntMatrix:
    """An immutable integer matrix.

    Stored as a tuple of row tuples.  `rows` and `cols` are counts.
    A matrix may have zero rows or zero columns; the missing dimension
    must then be passed explicitly.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Sequence[int]], cols: int | None = None):
        rows = tuple(tuple(int(x) for x in row) for row in data)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged rows")
            if cols is not None and cols != width:
                raise ValueError("cols does not match row width")
            cols = width
        elif cols is None:
            cols = 0
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "data", rows)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def diagonal(cls, entries: Sequence[int], rows: int | None = None,
                 cols: int | None = None) -> IntMatrix:
        n = len(entries)
        rows = n if rows is None else rows
        cols = n if cols is None else cols
        m = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(entries):
            if i < rows and i < cols:
                m[i][i] = int(d)
        return cls(m, cols=cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int | None = None) -> IntMatrix:
        if columns:
            rows = len(columns[0])
        elif rows is None:
            raise ValueError("need row count for a matrix with no columns")
        return cls([[col[i] for col in columns] for i in range(rows)], cols=len(columns))

    @classmethod
    def hstack(cls, left: IntMatrix, right: IntMatrix) -> IntMatrix:
        if left.rows != right.rows:
            raise ValueError("row counts differ")
        return cls([lr + rr for lr, rr in zip(left.data, right.data)],
                   cols=left.cols + right.cols) if left.rows else \
            cls([], cols=left.cols + right.cols)

    @classmethod
    def vstack(cls, top: IntMatrix, bottom: IntMatrix) -> IntMatrix:
        if top.cols != bottom.cols:
            raise ValueError("column counts differ")
        return cls(list(top.data) + list(bottom.data), cols=top.cols)

    # -- basic access -------------------------------------------------

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        return self.data[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.data[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> IntMatrix:
        return IntMatrix([[self.data[i][j] for j in col_idx] for i in row_idx],
                         cols=len(col_idx))

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    # -- arithmetic ---------------------------------------------------

    def __eq__(self, other) -> bool:
        return (isinstance(other, IntMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.data == other.data)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.data))

    def __add__(self, other: IntMatrix) -> IntMatrix:
        self._same_shape(other)
        return IntMatrix([[a + b for a, b in zip(ra, rb)]
                          for ra, rb in zip(self.data, other.data)], cols=self.cols)

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        self._same_shape(other)
        return IntMatrix([[a - b for a, b in zip(ra, rb)]
                          for ra, rb in zip(self.data, other.data)], cols=self.cols)

    def __neg__(self) -> IntMatrix:
        return IntMatrix([[-a for a in r] for r in self.data], cols=self.cols)

    def __rmul__(self, scalar: int) -> IntMatrix:
        return IntMatrix([[scalar * a for a in r] for r in self.data], cols=self.cols)

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        ot = list(zip(*other.data)) if other.data else []
        if not ot:
            return IntMatrix.zeros(self.rows, other.cols)
        out = [[sum(a * b for a, b in zip(row, col)) for col in ot] for row in self.data]
        return IntMatrix(out, cols=other.cols) if out else IntMatrix([], cols=other.cols)

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Matrix times column vector."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * v for a, v in zip(row, vec)) for row in self.data)

    def transpose(self) -> IntMatrix:
        return IntMatrix(list(zip(*self.data)) if self.data else [], cols=self.rows)

    def power(self, k: int) -> IntMatrix:
        if self.rows != self.cols:
            raise ValueError("power of a non-square matrix")
        if k < 0:
            raise ValueError("negative power")
        out = IntMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.data for a in r)

    def _same_shape(self, other: IntMatrix) -> None:
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")

    def __repr__(self) -> str:
        if not self.data:
            return f"IntMatrix([], cols={self.cols})"
        return "IntMatrix(" + repr(self.to_lists()) + ")"

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.to_lists()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SmithDecomposition:
    """Unimodular U, V and diagonal D with U @ M @ V == D.

    Diagonal entries are nonnegative and each divides the next.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    def diagonal(self) -> tuple[int, ...]:
        n = min(self.D.rows, self.D.cols)
        return tuple(self.D[i, i] for i in range(n))


def snf(M: IntMatrix) -> SmithDecomposition:
    """Smith normal form over the integers.

    Pivots are chosen as the smallest nonzero entry of the remaining
    submatrix, which keeps intermediate entries modest in practice.
    """
    m, n = M.rows, M.cols
    a = M.to_lists()
    u = IntMatrix.identity(m).to_lists()
    v = IntMatrix.identity(n).to_lists()

    def row_sub(i: int, k: int, q: int) -> None:
        # row i -= q * row k, mirrored on U
        ai, ak = a[i], a[k]
        for j in range(n):
            ai[j] -= q * ak[j]
        ui, uk = u[i], u[k]
        for j in range(m):
            ui[j] -= q * uk[j]

    def col_sub(j: int, k: int, q: int) -> None:
        # col j -= q * col k, mirrored on V
        for i in range(m):
            a[i][j] -= q * a[i][k]
        for i in range(n):
            v[i][j] -= q * v[i][k]

    t = 0
    bound = min(m, n)
    while t < bound:
        pi = pj = -1
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best):
                    best = abs(x)
                    pi, pj = i, j
        if best is None:
            break
        if pi != t:
            a[t], a[pi] = a[pi], a[t]
            u[t], u[pi] = u[pi], u[t]
        if pj != t:
            for row in a:
                row[t], row[pj] = row[pj], row[t]
            for row in v:
                row[t], row[pj] = row[pj], row[t]
        if a[t][t] < 0:
            for j in range(n):
                a[t][j] = -a[t][j]
            for j in range(m):
                u[t][j] = -u[t][j]
        pivot = a[t][t]
        dirty = False
        for i in range(t + 1, m):
            if a[i][t]:
                q = a[i][t] // pivot
                if q:
                    row_sub(i, t, q)
                if a[i][t]:
                    dirty = True
        for j in range(t + 1, n):
            if a[t][j]:
                q = a[t][j] // pivot
                if q:
                    col_sub(j, t, q)
                if a[t][j]:
                    dirty = True
        if dirty:
            continue
        # pivot now divides its row and column; force divisibility of the rest
        clean = True
        for i in range(t + 1, m):
            row = a[i]
            if any(x % pivot for x in row[t + 1:]):
                # fold row i into row t so the next pass shrinks the pivot to a gcd
                row_sub(t, i, -1)
                clean = False
                break
        if clean:
            t += 1
    return SmithDecomposition(IntMatrix(u, cols=m), IntMatrix(a, cols=n), IntMatrix(v, cols=n))


def unimodular_inverse(M: IntMatrix) -> IntMatrix:
    """Inverse of a matrix with determinant +-1, exactly."""
    dec = snf(M)
    if dec.D != IntMatrix.identity(M.rows) or M.rows != M.cols:
        raise ValueError("matrix is not unimodular")
    return dec.V @ dec.U


def kernel_basis(M: IntMatrix) -> list[tuple[int, ...]]:
    """A basis (as column vectors) of the integer kernel of M."""
    dec = snf(M)
    out = []
    for j in range(M.cols):
        d = dec.D[j, j] if j < min(M.rows, M.cols) else 0
        if d == 0:
            out.append(dec.V.column(j))
    return out


def solve(M: IntMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """One integer solution x of M x = b, or None if there is none."""
    if len(b) != M.rows:
        raise ValueError("rhs length mismatch")
    dec = snf(M)
    z = dec.U.apply(b)
    y = [0] * M.cols
    r = min(M.rows, M.cols)
    for i in range(M.rows):
        d = dec.D[i, i] if i < r else 0
        if i < M.cols and d != 0:
            if z[i] % d:
                return None
            y[i] = z[i] // d
        elif z[i] != 0:
            return None
    return dec.V.apply(y)


def in_column_span(M: IntMatrix, b: Sequence[int]) -> bool:
    """Whether b lies in the integer column span of M."""
    return solve(M, b) is not None


def column_space_basis(M: IntMatrix) -> list[tuple[int, ...]]:
    """A basis of the lattice spanned by the columns of M."""
    dec = snf(M)
    uinv = unimodular_inverse(dec.U)
    out = []
    for j in range(min(M.rows, M.cols)):
        d = dec.D[j, j]
        if d:
            col = uinv.column(j)
            out.append(tuple(d * x for x in col))
    return out


def preimage_lattice(F: IntMatrix, R: IntMatrix) -> list[tuple[int, ...]]:
    """Spanning vectors of the lattice {v : F v lies in the column span of R}.

    F and R must have the same number of rows.
    """
    if F.rows != R.rows:
        raise ValueError("row counts differ")
    stacked = IntMatrix.hstack(F, R)
    span = [col[:F.cols] for col in kernel_basis(stacked)]
    return span
