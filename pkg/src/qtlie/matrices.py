"""Exact dense linear algebra over a cyclotomic field.

Small dimensions only; everything is computed with exact field arithmetic and
equality means entrywise equality of canonical forms.
"""
from __future__ import annotations

from fractions import Fraction

from .cyclo import CycloField, CycloNum
from .errors import DimensionMismatch


class ExactMatrix:
    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: CycloField, data):
        self.field = field
        self.data = [list(self._coerce_row(field, row)) for row in data]
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        for row in self.data:
            if len(row) != self.cols:
                raise DimensionMismatch("ragged matrix rows")

    @staticmethod
    def _coerce_row(field, row):
        for x in row:
            if isinstance(x, CycloNum):
                if x.field.L != field.L:
                    raise ValueError("mixed fields in matrix")
                yield x
            else:
                yield field.from_rational(x)

    @classmethod
    def zeros(cls, field, rows, cols=None):
        cols = rows if cols is None else cols
        z = field.zero
        return cls(field, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    def copy(self):
        return ExactMatrix(self.field, [row[:] for row in self.data])

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __setitem__(self, ij, value):
        i, j = ij
        if not isinstance(value, CycloNum):
            value = self.field.from_rational(value)
        self.data[i][j] = value

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and all(a == b for ra, rb in zip(self.data, other.data) for a, b in zip(ra, rb))
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self.data)))

    def __add__(self, other):
        self._shape_check(other)
        return ExactMatrix(
            self.field,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)],
        )

    def __sub__(self, other):
        self._shape_check(other)
        return ExactMatrix(
            self.field,
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)],
        )

    def _shape_check(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch(f"{self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def scale(self, scalar):
        if not isinstance(scalar, CycloNum):
            scalar = self.field.from_rational(scalar)
        return ExactMatrix(self.field, [[scalar * a for a in row] for row in self.data])

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} times {other.rows}x{other.cols}")
        zero = self.field.zero
        out = [[zero] * other.cols for _ in range(self.rows)]
        for i, row in enumerate(self.data):
            out_i = out[i]
            for k, a in enumerate(row):
                if a.is_zero():
                    continue
                brow = other.data[k]
                for j, b in enumerate(brow):
                    if not b.is_zero():
                        out_i[j] = out_i[j] + a * b
        return ExactMatrix(self.field, out)

    def commutator(self, other):
        return self * other - other * self

    def apply(self, vec):
        """Matrix times column vector (list of CycloNum)."""
        if self.cols != len(vec):
            raise DimensionMismatch("matrix/vector size mismatch")
        zero = self.field.zero
        out = [zero] * self.rows
        for i, row in enumerate(self.data):
            acc = zero
            for a, v in zip(row, vec):
                if not a.is_zero() and not v.is_zero():
                    acc = acc + a * v
            out[i] = acc
        return out

    def transpose(self):
        return ExactMatrix(self.field, [list(col) for col in zip(*self.data)])

    def trace(self):
        t = self.field.zero
        for i in range(min(self.rows, self.cols)):
            t = t + self.data[i][i]
        return t

    def is_zero(self):
        return all(a.is_zero() for row in self.data for a in row)

    def kron(self, other):
        """Kronecker product self (x) other."""
        out = []
        for arow in self.data:
            for brow in other.data:
                out.append([a * b for a in arow for b in brow])
        return ExactMatrix(self.field, out)

    def flatten(self):
        return [a for row in self.data for a in row]

    def submatrix(self, row0, col0, nrows, ncols):
        return ExactMatrix(
            self.field, [row[col0 : col0 + ncols] for row in self.data[row0 : row0 + nrows]]
        )

    def paste(self, row0, col0, block: "ExactMatrix"):
        for i in range(block.rows):
            for j in range(block.cols):
                self.data[row0 + i][col0 + j] = block.data[i][j]

    def rref(self):
        """Reduced row echelon form; returns (matrix, pivot column list)."""
        m = self.copy()
        pivots = []
        r = 0
        for c in range(m.cols):
            pivot = None
            for i in range(r, m.rows):
                if not m.data[i][c].is_zero():
                    pivot = i
                    break
            if pivot is None:
                continue
            m.data[r], m.data[pivot] = m.data[pivot], m.data[r]
            inv = m.data[r][c].inverse()
            m.data[r] = [inv * a for a in m.data[r]]
            for i in range(m.rows):
                if i != r and not m.data[i][c].is_zero():
                    f = m.data[i][c]
                    m.data[i] = [a - f * b for a, b in zip(m.data[i], m.data[r])]
            pivots.append(c)
            r += 1
            if r == m.rows:
                break
        return m, pivots

    def rank(self):
        return len(self.rref()[1])

    def kernel(self):
        """Basis of the right null space, as a list of column vectors."""
        red, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        zero, one = self.field.zero, self.field.one
        for fc in free:
            vec = [zero] * self.cols
            vec[fc] = one
            for r, pc in enumerate(pivots):
                vec[pc] = -red.data[r][fc]
            basis.append(vec)
        return basis

    def solve(self, rhs):
        """Solve self * x = rhs exactly; returns x or None if inconsistent."""
        aug = ExactMatrix(self.field, [row + [b] for row, b in zip(self.data, rhs)])
        red, pivots = aug.rref()
        if self.cols in pivots:
            return None
        zero = self.field.zero
        x = [zero] * self.cols
        for r, pc in enumerate(pivots):
            x[pc] = red.data[r][self.cols]
        return x

    def inverse(self):
        if self.rows != self.cols:
            raise DimensionMismatch("inverse of a non-square matrix")
        n = self.rows
        aug = ExactMatrix(
            self.field,
            [row + ExactMatrix.identity(self.field, n).data[i] for i, row in enumerate(self.data)],
        )
        red, pivots = aug.rref()
        if pivots != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return red.submatrix(0, n, n, n)

    def serialize(self):
        return [[a.serialize() for a in row] for row in self.data]

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols})"

    def __str__(self):
        return "\n".join("[" + ", ".join(str(a) for a in row) + "]" for row in self.data)


class RowSpace:
    """Incrementally maintained row space with exact membership tests."""

    def __init__(self, field: CycloField, width: int):
        self.field = field
        self.width = width
        self.pivot_rows: dict[int, list[CycloNum]] = {}

    def _reduce(self, vec):
        vec = list(vec)
        for piv, row in sorted(self.pivot_rows.items()):
            c = vec[piv]
            if not c.is_zero():
                for j in range(self.width):
                    vec[j] = vec[j] - c * row[j]
        return vec

    def contains(self, vec) -> bool:
        return all(c.is_zero() for c in self._reduce(vec))

    def add(self, vec) -> bool:
        """Insert vec; True if it enlarged the space."""
        red = self._reduce(vec)
        piv = next((j for j, c in enumerate(red) if not c.is_zero()), None)
        if piv is None:
            return False
        inv = red[piv].inverse()
        red = [inv * c for c in red]
        for p, row in self.pivot_rows.items():
            c = row[piv]
            if not c.is_zero():
                self.pivot_rows[p] = [a - c * b for a, b in zip(row, red)]
        self.pivot_rows[piv] = red
        return True

    @property
    def dim(self) -> int:
        return len(self.pivot_rows)


def vec_add(a, b):
    return [x + y for x, y in zip(a, b)]


def vec_scale(s, a):
    return [s * x for x in a]


def vec_is_zero(a):
    return all(x.is_zero() for x in a)


def basis_matrix(field, columns):
    """Matrix whose columns are the given vectors."""
    if not columns:
        return ExactMatrix.zeros(field, 0, 0)
    n = len(columns[0])
    return ExactMatrix(field, [[col[i] for col in columns] for i in range(n)])


def rational_rank(rows: list[list[Fraction]]) -> int:
    """Rank of a matrix of plain rationals (used for genericity tests)."""
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = Fraction(1) / rows[rank][c]
        rows[rank] = [inv * a for a in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank
