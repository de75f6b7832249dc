"""Dense exact matrices over Z, Q, and GF(p).

Provides the linear-algebra kernel the rest of the package sits on: Smith
normal form with unimodular certificates over Z, Gaussian elimination over
the fields, saturated integer kernels, image ranks, and solvability-in-image
queries.  Matrices are immutable after construction; zero-dimensional
matrices are legal everywhere.
"""

from __future__ import annotations

from .rings import Ring, ZZ


class DimensionError(ValueError):
    """Shapes of the operands do not match."""


class ExactMatrix:
    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: Ring, rows: int, cols: int, entries):
        entries = tuple(ring.canon(x) for x in entries)
        if len(entries) != rows * cols:
            raise DimensionError(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}"
            )
        self.ring = ring
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, ring: Ring, rows_list) -> "ExactMatrix":
        rows_list = [list(r) for r in rows_list]
        nrows = len(rows_list)
        ncols = len(rows_list[0]) if rows_list else 0
        if any(len(r) != ncols for r in rows_list):
            raise DimensionError("ragged rows")
        return cls(ring, nrows, ncols, [x for r in rows_list for x in r])

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "ExactMatrix":
        return cls(ring, n, n, [ring.one() if i == j else ring.zero()
                                for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, ring: Ring, rows: int, cols: int) -> "ExactMatrix":
        z = ring.zero()
        return cls(ring, rows, cols, [z] * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j):
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.ring == other.ring
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.ring, self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(
            " ".join(self.ring.format(x) for x in self.row(i)) for i in range(self.rows)
        )
        return f"ExactMatrix({self.ring}, {self.rows}x{self.cols}, [{body}])"

    def __add__(self, other):
        self._same_shape(other)
        R = self.ring
        return ExactMatrix(R, self.rows, self.cols,
                           [R.add(a, b) for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._same_shape(other)
        R = self.ring
        return ExactMatrix(R, self.rows, self.cols,
                           [R.sub(a, b) for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        R = self.ring
        return ExactMatrix(R, self.rows, self.cols, [R.neg(a) for a in self.entries])

    def __mul__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.ring != other.ring:
            raise DimensionError("ring mismatch")
        if self.cols != other.rows:
            raise DimensionError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        R = self.ring
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                acc = R.zero()
                for k in range(self.cols):
                    a = ri[k]
                    if a != 0:
                        acc = R.add(acc, R.mul(a, other.entries[k * other.cols + j]))
                out.append(acc)
        return ExactMatrix(R, self.rows, other.cols, out)

    def scale(self, c):
        R = self.ring
        c = R.canon(c)
        return ExactMatrix(R, self.rows, self.cols, [R.mul(c, a) for a in self.entries])

    def transpose(self):
        return ExactMatrix(self.ring, self.cols, self.rows,
                           [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def apply(self, vec):
        """Matrix times column vector (sequence of length cols)."""
        vec = [self.ring.canon(x) for x in vec]
        if len(vec) != self.cols:
            raise DimensionError(f"vector length {len(vec)} != cols {self.cols}")
        R = self.ring
        return tuple(
            _dot(R, self.row(i), vec) for i in range(self.rows)
        )

    def is_zero(self):
        return all(x == 0 for x in self.entries)

    def _same_shape(self, other):
        if self.ring != other.ring or self.rows != other.rows or self.cols != other.cols:
            raise DimensionError("shape or ring mismatch")


def _dot(R, u, v):
    acc = R.zero()
    for a, b in zip(u, v):
        if a != 0 and b != 0:
            acc = R.add(acc, R.mul(a, b))
    return acc


# ---------------------------------------------------------------------------
# Smith normal form over Z
# ---------------------------------------------------------------------------

def smith_normal_form(M: ExactMatrix):
    """U, D, V with U*M*V = D, D diagonal with d1 | d2 | ..., di >= 0.

    U and V are unimodular (products of elementary integer operations).
    Only defined over Z.
    """
    if M.ring != ZZ:
        raise ValueError("Smith normal form requires integer entries")
    m, n = M.rows, M.cols
    A = M.to_rows()
    U = ExactMatrix.identity(ZZ, m).to_rows()
    V = ExactMatrix.identity(ZZ, n).to_rows()

    def row_op(i1, i2, a, b, c, d):
        # (row i1, row i2) <- (a*row i1 + b*row i2, c*row i1 + d*row i2);
        # caller guarantees a*d - b*c = +-1
        for X in (A, U):
            r1, r2 = X[i1], X[i2]
            for j in range(len(r1)):
                r1[j], r2[j] = a * r1[j] + b * r2[j], c * r1[j] + d * r2[j]

    def col_op(j1, j2, a, b, c, d):
        for X in (A, V):
            for r in X:
                r[j1], r[j2] = a * r[j1] + b * r[j2], c * r[j1] + d * r[j2]

    def swap_rows(i1, i2):
        A[i1], A[i2] = A[i2], A[i1]
        U[i1], U[i2] = U[i2], U[i1]

    def swap_cols(j1, j2):
        for X in (A, V):
            for r in X:
                r[j1], r[j2] = r[j2], r[j1]

    t = 0
    limit = min(m, n)
    while t < limit:
        # find a pivot of least absolute value in the remaining block
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = A[i][j]
                if a != 0 and (best is None or abs(a) < best):
                    best = abs(a)
                    piv = (i, j)
        if piv is None:
            break
        i0, j0 = piv
        if i0 != t:
            swap_rows(t, i0)
        if j0 != t:
            swap_cols(t, j0)

        dirty = True
        while dirty:
            dirty = False
            # clear the pivot column
            for i in range(t + 1, m):
                a, b = A[t][t], A[i][t]
                if b == 0:
                    continue
                if b % a == 0:
                    q = b // a
                    row_op(t, i, 1, 0, -q, 1)
                else:
                    g, x, y = _xgcd(a, b)
                    row_op(t, i, x, y, -(b // g), a // g)
                    dirty = True
            # clear the pivot row
            for j in range(t + 1, n):
                a, b = A[t][t], A[t][j]
                if b == 0:
                    continue
                if b % a == 0:
                    q = b // a
                    col_op(t, j, 1, 0, -q, 1)
                else:
                    g, x, y = _xgcd(a, b)
                    col_op(t, j, x, y, -(b // g), a // g)
                    dirty = True
            if not dirty:
                # pivot must divide every remaining entry; if not, fold the
                # offending row into the pivot row and start over
                a = A[t][t]
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % a != 0:
                            row_op(t, i, 1, 1, 0, 1)
                            dirty = True
                            break
                    if dirty:
                        break
        if A[t][t] < 0:
            # negate the pivot row (unimodular)
            for X in (A, U):
                X[t] = [-x for x in X[t]]
        t += 1

    D = ExactMatrix(ZZ, m, n, [x for r in A for x in r])
    U_out = ExactMatrix(ZZ, m, m, [x for r in U for x in r])
    V_out = ExactMatrix(ZZ, n, n, [x for r in V for x in r])
    return U_out, D, V_out


def _xgcd(a: int, b: int):
    """g, x, y with x*a + y*b = g = gcd(a, b) > 0."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        g, x, y = -g, -x, -y
    return g, x, y


def diagonal_of(D: ExactMatrix):
    return [D[i, i] for i in range(min(D.rows, D.cols))]


# ---------------------------------------------------------------------------
# Gaussian elimination over fields
# ---------------------------------------------------------------------------

def _row_echelon(M: ExactMatrix):
    """Reduced row echelon form over a field; returns (rows, pivot columns)."""
    R = M.ring
    A = M.to_rows()
    pivots = []
    r = 0
    for c in range(M.cols):
        pr = next((i for i in range(r, M.rows) if A[i][c] != 0), None)
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        inv = R.inv(A[r][c])
        A[r] = [R.mul(inv, x) for x in A[r]]
        for i in range(M.rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == M.rows:
            break
    return A, pivots


def image_rank(M: ExactMatrix) -> int:
    """Rank of the image (= column rank, = number of nonzero SNF entries)."""
    if M.rows == 0 or M.cols == 0:
        return 0
    if M.ring.is_field:
        return len(_row_echelon(M)[1])
    _, D, _ = smith_normal_form(M)
    return sum(1 for d in diagonal_of(D) if d != 0)


def kernel_basis(M: ExactMatrix):
    """Columns spanning ker M.

    Over a field: one vector per free column.  Over Z: a basis of the full
    kernel lattice (saturated), obtained from the SNF column certificate.
    """
    R = M.ring
    if M.cols == 0:
        return []
    if M.rows == 0:
        return [tuple(R.one() if i == j else R.zero() for i in range(M.cols))
                for j in range(M.cols)]
    if R.is_field:
        A, pivots = _row_echelon(M)
        free = [c for c in range(M.cols) if c not in pivots]
        basis = []
        for fc in free:
            v = [R.zero()] * M.cols
            v[fc] = R.one()
            for r, pc in enumerate(pivots):
                v[pc] = R.neg(A[r][fc])
            basis.append(tuple(v))
        return basis
    _, D, V = smith_normal_form(M)
    rank = sum(1 for d in diagonal_of(D) if d != 0)
    # columns of V beyond the rank span ker(M) as a saturated lattice
    return [V.col(j) for j in range(rank, M.cols)]


def solve_in_image(M: ExactMatrix, b):
    """x with M*x = b, or None when b is not in the image (lattice) of M."""
    R = M.ring
    b = [R.canon(v) for v in b]
    if len(b) != M.rows:
        raise DimensionError(f"rhs length {len(b)} != rows {M.rows}")
    if M.cols == 0:
        return tuple() if all(v == 0 for v in b) else None
    if R.is_field:
        aug = ExactMatrix(R, M.rows, M.cols + 1,
                          [x for i in range(M.rows) for x in (*M.row(i), b[i])])
        A, pivots = _row_echelon(aug)
        if M.cols in pivots:
            return None
        x = [R.zero()] * M.cols
        for r, pc in enumerate(pivots):
            x[pc] = A[r][M.cols]
        return tuple(x)
    U, D, V = smith_normal_form(M)
    y = U.apply(b)
    z = [ZZ.zero()] * M.cols
    diag = diagonal_of(D)
    for i in range(M.rows):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if y[i] != 0:
                return None
        else:
            q, r = divmod(y[i], d)
            if r != 0:
                return None
            if i < M.cols:
                z[i] = q
    return V.apply(z)


def lattice_column_basis(M: ExactMatrix):
    """Independent columns generating the same column span (lattice over Z)."""
    if M.cols == 0:
        return []
    if M.ring.is_field:
        A, pivots = _row_echelon(M.transpose())
        basis = []
        for r, _ in enumerate(pivots):
            basis.append(tuple(A[r]))
        return basis
    _, D, V = smith_normal_form(M)
    MV = M * V
    rank = sum(1 for d in diagonal_of(D) if d != 0)
    return [MV.col(j) for j in range(rank)]


def columns_matrix(ring: Ring, nrows: int, cols) -> ExactMatrix:
    """Assemble column vectors into a matrix (cols may be empty)."""
    cols = list(cols)
    return ExactMatrix(ring, nrows, len(cols),
                       [c[i] for i in range(nrows) for c in cols])
