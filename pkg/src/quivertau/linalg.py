"""Exact dense linear algebra over the rationals and prime fields.

All entries are canonical representatives: reduced ``Fraction`` values over
the rationals, least nonnegative residues modulo p otherwise.  Everything is
immutable after construction and safe for concurrent reads; there is no
floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13):
        if n % p == 0:
            return n == p
    # deterministic Miller-Rabin, valid for n < 3_215_031_751
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldSpec:
    """The rational field, or the prime field of ``p`` elements (p < 2**31)."""

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None:
            if p >= 2**31:
                raise ValueError("prime moduli must fit in a machine word (p < 2**31)")
            if not _is_prime(p):
                raise ValueError(f"{p} is not prime")
        self.p = p

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self.p == other.p

    def __hash__(self):
        return hash(("FieldSpec", self.p))

    def __repr__(self):
        return "Q" if self.p is None else f"GF({self.p})"

    # -- element construction and arithmetic ------------------------------

    def __call__(self, x):
        """Canonicalize ``x`` (int, Fraction or string) into a field element."""
        if isinstance(x, str):
            return self.parse(x)
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    @property
    def zero(self):
        return Fraction(0) if self.p is None else 0

    @property
    def one(self):
        return Fraction(1) if self.p is None else 1

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else (a * b) % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero field element")
        return 1 / a if self.p is None else pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def parse(self, s: str):
        s = s.strip()
        if self.p is None:
            return Fraction(s)
        if "/" in s:
            num, den = s.split("/", 1)
            return self(Fraction(int(num), int(den)))
        return int(s) % self.p

    def to_str(self, a) -> str:
        return str(a)


QQ = FieldSpec()


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


class Matrix:
    """Row-major dense matrix over a :class:`FieldSpec`.

    Treated as immutable after construction; rref results are cached.
    """

    __slots__ = ("field", "rows", "cols", "data", "_rref")

    def __init__(self, field: FieldSpec, rows: int, cols: int, data: Sequence):
        if len(data) != rows * cols:
            raise ShapeError(f"expected {rows * cols} entries, got {len(data)}")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.data = list(data)
        self._rref = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Iterable[Iterable]) -> "Matrix":
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        flat = []
        for r in rows:
            if len(r) != m:
                raise ShapeError("ragged rows")
            flat.extend(field(x) for x in r)
        return cls(field, n, m, flat)

    @classmethod
    def zero(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, rows, cols, [z] * (rows * cols))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        m = cls.zero(field, n, n)
        one = field.one
        for i in range(n):
            m.data[i * n + i] = one
        return m

    @classmethod
    def hstack(cls, mats: Sequence["Matrix"]) -> "Matrix":
        if not mats:
            raise ShapeError("hstack of nothing")
        rows = mats[0].rows
        field = mats[0].field
        data = []
        for i in range(rows):
            for m in mats:
                if m.rows != rows:
                    raise ShapeError("hstack row mismatch")
                data.extend(m.data[i * m.cols : (i + 1) * m.cols])
        return cls(field, rows, sum(m.cols for m in mats), data)

    @classmethod
    def vstack(cls, mats: Sequence["Matrix"]) -> "Matrix":
        if not mats:
            raise ShapeError("vstack of nothing")
        cols = mats[0].cols
        field = mats[0].field
        data = []
        for m in mats:
            if m.cols != cols:
                raise ShapeError("vstack column mismatch")
            data.extend(m.data)
        return cls(field, sum(m.rows for m in mats), cols, data)

    @classmethod
    def from_columns(cls, field: FieldSpec, cols: Sequence[Sequence]) -> "Matrix":
        if not cols:
            return cls(field, 0, 0, [])
        n = len(cols[0])
        m = cls.zero(field, n, len(cols))
        for j, c in enumerate(cols):
            if len(c) != n:
                raise ShapeError("ragged columns")
            for i, x in enumerate(c):
                m.data[i * len(cols) + j] = field(x)
        return m

    # -- access ------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i * self.cols + j]

    def row(self, i) -> list:
        return self.data[i * self.cols : (i + 1) * self.cols]

    def column(self, j) -> tuple:
        return tuple(self.data[i * self.cols + j] for i in range(self.rows))

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list:
        return [self.row(i) for i in range(self.rows)]

    def is_zero(self) -> bool:
        return not any(self.data)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, tuple(self.data)))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"Matrix({self.rows}x{self.cols} over {self.field}: [{body}])"

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        add = self.field.add
        return Matrix(self.field, self.rows, self.cols,
                      [add(a, b) for a, b in zip(self.data, other.data)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        sub = self.field.sub
        return Matrix(self.field, self.rows, self.cols,
                      [sub(a, b) for a, b in zip(self.data, other.data)])

    def __neg__(self) -> "Matrix":
        neg = self.field.neg
        return Matrix(self.field, self.rows, self.cols, [neg(a) for a in self.data])

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        mul = self.field.mul
        return Matrix(self.field, self.rows, self.cols, [mul(c, a) for a in self.data])

    def __mul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        f = self.field
        add, mul, zero = f.add, f.mul, f.zero
        out = [zero] * (self.rows * other.cols)
        oc = other.cols
        for i in range(self.rows):
            base = i * self.cols
            for k in range(self.cols):
                a = self.data[base + k]
                if not a:
                    continue
                ob = k * oc
                rb = i * oc
                for j in range(oc):
                    b = other.data[ob + j]
                    if b:
                        out[rb + j] = add(out[rb + j], mul(a, b))
        return Matrix(f, self.rows, oc, out)

    __matmul__ = __mul__

    def apply(self, vec: Sequence) -> tuple:
        """Matrix times column vector (given and returned as a tuple)."""
        if len(vec) != self.cols:
            raise ShapeError("vector length mismatch")
        f = self.field
        add, mul, zero = f.add, f.mul, f.zero
        out = []
        for i in range(self.rows):
            s = zero
            base = i * self.cols
            for j, x in enumerate(vec):
                if x:
                    a = self.data[base + j]
                    if a:
                        s = add(s, mul(a, x))
            out.append(s)
        return tuple(out)

    def transpose(self) -> "Matrix":
        out = Matrix.zero(self.field, self.cols, self.rows)
        for i in range(self.rows):
            base = i * self.cols
            for j in range(self.cols):
                out.data[j * self.rows + i] = self.data[base + j]
        return out

    def _check_same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ShapeError("shape mismatch")

    # -- elimination ---------------------------------------------------------

    def rref(self):
        """Reduced row echelon form.

        Returns ``(R, rank, pivots)`` where pivots is the tuple of pivot
        column indices.  Deterministic: the first nonzero entry in each
        column (scanning down) is chosen as pivot.
        """
        if self._rref is not None:
            return self._rref
        f = self.field
        sub, mul, inv = f.sub, f.mul, f.inv
        rows = [self.row(i) for i in range(self.rows)]
        pivots = []
        r = 0
        for c in range(self.cols):
            pivot_row = None
            for i in range(r, self.rows):
                if rows[i][c]:
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
            pv = inv(rows[r][c])
            if pv != f.one:
                rows[r] = [mul(pv, x) for x in rows[r]]
            for i in range(self.rows):
                if i != r and rows[i][c]:
                    factor = rows[i][c]
                    ri, rr = rows[i], rows[r]
                    rows[i] = [sub(a, mul(factor, b)) for a, b in zip(ri, rr)]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        R = Matrix(f, self.rows, self.cols, [x for row in rows for x in row])
        self._rref = (R, len(pivots), tuple(pivots))
        return self._rref

    def rank(self) -> int:
        return self.rref()[1]

    def kernel_basis(self) -> list:
        """Basis of the right null space, as a list of tuples."""
        R, rank, pivots = self.rref()
        pivot_set = set(pivots)
        free = [j for j in range(self.cols) if j not in pivot_set]
        f = self.field
        basis = []
        for j in free:
            v = [f.zero] * self.cols
            v[j] = f.one
            for i, pc in enumerate(pivots):
                v[pc] = f.neg(R[i, j])
            basis.append(tuple(v))
        return basis

    def solve(self, b: Sequence):
        """One solution of ``self @ x = b``, or ``None`` if inconsistent."""
        if len(b) != self.rows:
            raise ShapeError("rhs length mismatch")
        aug = Matrix(self.field, self.rows, self.cols + 1,
                     [x for i in range(self.rows) for x in (*self.row(i), self.field(b[i]))])
        R, rank, pivots = aug.rref()
        if pivots and pivots[-1] == self.cols:
            return None
        f = self.field
        x = [f.zero] * self.cols
        for i, pc in enumerate(pivots):
            x[pc] = R[i, self.cols]
        return tuple(x)

    def column_space_pivots(self) -> tuple:
        """Indices of a deterministic maximal independent set of columns."""
        return self.rref()[2]

    def submatrix_columns(self, cols: Sequence[int]) -> "Matrix":
        out = Matrix.zero(self.field, self.rows, len(cols))
        for i in range(self.rows):
            base = i * self.cols
            ob = i * len(cols)
            for k, j in enumerate(cols):
                out.data[ob + k] = self.data[base + j]
        return out


class ShapeError(ValueError):
    """Inconsistent matrix dimensions at the linear algebra layer."""


def solve_matrix(a: Matrix, b: Matrix):
    """Solve ``a @ X = b`` columnwise; ``None`` if any column is inconsistent."""
    cols = []
    for j in range(b.cols):
        x = a.solve(b.column(j))
        if x is None:
            return None
        cols.append(x)
    return Matrix.from_columns(a.field, cols)


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix (Bareiss elimination)."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(map(int, r)) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def complete_to_basis(sub: Matrix) -> list:
    """Standard coordinate indices completing ``columns(sub)`` to a basis.

    ``sub`` is a d x k matrix of independent columns; returns the list of
    standard basis indices e_j (ascending) spanning a complement.
    """
    if sub.rows == 0:
        return []
    pivots = set(sub.transpose().rref()[2])
    return [j for j in range(sub.rows) if j not in pivots]
