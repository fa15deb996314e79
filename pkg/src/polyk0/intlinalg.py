"""Exact linear algebra over the integers.

Matrices are stored dense, row-major, with plain Python ints, so coefficient
growth is a speed concern but never a correctness one.  Everything downstream
(finitely generated abelian groups, monoid-ring quotients, normalized chains)
reduces to the three workhorses here: Smith normal form, row Hermite
reduction, and exact solves.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix.

    Construct with `IntMatrix.from_rows`; the raw constructor expects a
    tuple-of-tuples already matching the declared shape.
    """

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimensions")
        if len(self.entries) != self.rows:
            raise ValueError("row count mismatch")
        for r in self.entries:
            if len(r) != self.cols:
                raise ValueError("ragged rows")
            for x in r:
                if type(x) is not int:     # exact type: rejects bool and numpy ints
                    raise ValueError("entries must be ints")

    @staticmethod
    def from_rows(rows, cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if rows:
            c = len(rows[0])
        else:
            c = 0 if cols is None else cols
        return IntMatrix(len(rows), c, tuple(tuple(int(x) for x in r) for r in rows))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @staticmethod
    def zero(r: int, c: int) -> "IntMatrix":
        return IntMatrix(r, c, tuple(tuple(0 for _ in range(c)) for _ in range(r)))

    def tolists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         tuple(tuple(self.entries[i][j] for i in range(self.rows))
                               for j in range(self.cols)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        bt = other.transpose().entries
        out = tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in bt)
                    for row in self.entries)
        return IntMatrix(self.rows, other.cols, out)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in sum")
        return IntMatrix(self.rows, self.cols,
                         tuple(tuple(a + b for a, b in zip(r1, r2))
                               for r1, r2 in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols,
                         tuple(tuple(-a for a in r) for r in self.entries))

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols,
                         tuple(tuple(c * a for a in r) for r in self.entries))

    def column(self, j: int) -> list[int]:
        return [self.entries[i][j] for i in range(self.rows)]

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        return IntMatrix(self.rows, self.cols + other.cols,
                         tuple(r1 + r2 for r1, r2 in zip(self.entries, other.entries)))

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("col mismatch in vstack")
        return IntMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def diagonal(self) -> list[int]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant needs a square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = [list(r) for r in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    # Bareiss update: exact division by the previous pivot
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and self.det() in (1, -1)


def _pivot(m: list[list[int]], t: int, rows: int, cols: int):
    """Spec'd pivot rule: minimal nonzero |entry| in m[t:, t:], ties by (row, col)."""
    best = None
    for i in range(t, rows):
        ri = m[i]
        for j in range(t, cols):
            v = ri[j]
            if v:
                a = -v if v < 0 else v
                if best is None or a < best[0]:
                    best = (a, i, j)
        # ties resolve themselves: later (row, col) never replaces an equal abs value
    return best


def smith_normal_form(a: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U @ a @ V == D.

    U and V are unimodular; D is diagonal with nonnegative entries satisfying
    the divisibility chain d1 | d2 | ... .  Deterministic: the pivot is always
    the minimal nonzero absolute value, ties broken by smallest (row, col).
    """
    rows, cols = a.rows, a.cols
    m = a.tolists()
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]
    # Invariant throughout: u @ a @ v == m.
    t = 0
    while t < rows and t < cols:
        found = _pivot(m, t, rows, cols)
        if found is None:
            break
        _, pi, pj = found
        if pi != t:
            m[t], m[pi] = m[pi], m[t]
            u[t], u[pi] = u[pi], u[t]
        if pj != t:
            for r in m:
                r[t], r[pj] = r[pj], r[t]
            for r in v:
                r[t], r[pj] = r[pj], r[t]
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            u[t] = [-x for x in u[t]]
        while True:
            d = m[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if m[i][t]:
                    q = m[i][t] // d
                    if q:
                        mi, mt = m[i], m[t]
                        for j in range(cols):
                            mi[j] -= q * mt[j]
                        ui, ut = u[i], u[t]
                        for j in range(rows):
                            ui[j] -= q * ut[j]
                    if m[i][t]:
                        # remainder smaller than the pivot: swap it up and restart
                        m[t], m[i] = m[i], m[t]
                        u[t], u[i] = u[i], u[t]
                        if m[t][t] < 0:
                            m[t] = [-x for x in m[t]]
                            u[t] = [-x for x in u[t]]
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(t + 1, cols):
                if m[t][j]:
                    q = m[t][j] // d
                    if q:
                        for r in m:
                            r[j] -= q * r[t]
                        for r in v:
                            r[j] -= q * r[t]
                    if m[t][j]:
                        for r in m:
                            r[t], r[j] = r[j], r[t]
                        for r in v:
                            r[t], r[j] = r[j], r[t]
                        if m[t][t] < 0:
                            m[t] = [-x for x in m[t]]
                            u[t] = [-x for x in u[t]]
                        dirty = True
                        break
            if dirty:
                continue
            # row and column t are clean; enforce d | (everything below-right)
            culprit = None
            for i in range(t + 1, rows):
                mi = m[i]
                for j in range(t + 1, cols):
                    if mi[j] % d:
                        culprit = i
                        break
                if culprit is not None:
                    break
            if culprit is None:
                break
            mi, mt = m[culprit], m[t]
            for j in range(cols):
                mt[j] += mi[j]
            ui, ut = u[culprit], u[t]
            for j in range(rows):
                ut[j] += ui[j]
        t += 1
    return (IntMatrix.from_rows(u, rows), IntMatrix.from_rows(m, cols),
            IntMatrix.from_rows(v, cols))


def row_hermite(a: IntMatrix, transform: bool = True):
    """Row-reduce to an integer echelon form.

    Returns (U, H, rank) with U @ a == H when transform is requested, else
    (None, H, rank).  H has its nonzero rows first, pivots strictly moving
    right, pivot entries positive.  Not the lexicographically canonical HNF
    (entries above pivots are only reduced, not normalized exhaustively), but
    the row span is exact, which is all callers need.
    """
    rows, cols = a.rows, a.cols
    m = a.tolists()
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)] if transform else None
    r = 0
    for c in range(cols):
        # smallest |nonzero| in column c at or below r
        piv = None
        for i in range(r, rows):
            v = m[i][c]
            if v:
                av = -v if v < 0 else v
                if piv is None or av < piv[0]:
                    piv = (av, i)
        if piv is None:
            continue
        while True:
            _, pi = piv
            if pi != r:
                m[r], m[pi] = m[pi], m[r]
                if u:
                    u[r], u[pi] = u[pi], u[r]
            if m[r][c] < 0:
                m[r] = [-x for x in m[r]]
                if u:
                    u[r] = [-x for x in u[r]]
            d = m[r][c]
            piv = None
            for i in range(r + 1, rows):
                if m[i][c]:
                    q = m[i][c] // d
                    if q:
                        mi, mr = m[i], m[r]
                        for j in range(c, cols):
                            mi[j] -= q * mr[j]
                        if u:
                            ui, ur = u[i], u[r]
                            for j in range(rows):
                                ui[j] -= q * ur[j]
                    v = m[i][c]
                    if v:
                        av = -v if v < 0 else v
                        if piv is None or av < piv[0]:
                            piv = (av, i)
            if piv is None:
                break
        # mild reduction above the pivot keeps entries small
        d = m[r][c]
        for i in range(r):
            q = m[i][c] // d
            if q:
                mi, mr = m[i], m[r]
                for j in range(cols):
                    mi[j] -= q * mr[j]
                if u:
                    ui, ur = u[i], u[r]
                    for j in range(rows):
                        ui[j] -= q * ur[j]
        r += 1
        if r == rows:
            break
    um = IntMatrix.from_rows(u, rows) if transform else None
    return um, IntMatrix.from_rows(m, cols), r


def integer_kernel(a: IntMatrix) -> IntMatrix:
    """Basis of {x : a @ x == 0} as the columns of the returned matrix.

    The basis spans the full kernel lattice (saturated), via row Hermite
    reduction of the transpose with transform tracking.
    """
    u, _, r = row_hermite_fast(a.transpose(), transform=True)
    ker_rows = [list(u.entries[i]) for i in range(r, a.cols)]
    if not ker_rows:
        return IntMatrix.zero(a.cols, 0)
    return IntMatrix.from_rows(ker_rows, a.cols).transpose()


def solve_exact(b: IntMatrix, c: IntMatrix) -> IntMatrix:
    """Solve b @ y == c exactly over Z.

    Requires b to have full column rank and every column of c to lie in the
    integer column span of b; raises ValueError otherwise.
    """
    u, h, r = row_hermite(b, transform=True)
    if r != b.cols:
        raise ValueError("solve_exact needs full column rank")
    rhs = (u @ c).tolists()
    hm = h.tolists()
    piv = []
    j = 0
    for i in range(r):
        while hm[i][j] == 0:
            j += 1
        piv.append(j)
    ncols = c.cols
    y = [[0] * ncols for _ in range(b.cols)]
    for i in range(r - 1, -1, -1):
        pj = piv[i]
        for col in range(ncols):
            s = rhs[i][col]
            for jj in range(pj + 1, b.cols):
                s -= hm[i][jj] * y[jj][col]
            if s % hm[i][pj]:
                raise ValueError("no integral solution")
            y[pj][col] = s // hm[i][pj]
    for i in range(r, b.rows):
        for col in range(ncols):
            s = rhs[i][col]
            # zero rows of h must see zero right-hand sides
            if s != 0:
                raise ValueError("right-hand side outside column span")
    return IntMatrix.from_rows(y, ncols)


def dedupe_rows(rows: list[list[int]]) -> list[list[int]]:
    seen = set()
    out = []
    for r in rows:
        t = tuple(r)
        if t not in seen and any(t):
            seen.add(t)
            out.append(list(t))
    return out


# int64 headroom for the vectorized Hermite path; products are checked
# against _SAFE before every elimination round so a bail-out happens strictly
# before any wraparound could.
_SAFE = 1 << 62
_START = 1 << 45


def _hermite_int64(a: IntMatrix, transform: bool):
    import numpy as np

    rows, cols = a.rows, a.cols
    m = np.array(a.tolists(), dtype=np.int64) if rows and cols else None
    if m is None or (rows and cols and int(np.abs(m).max(initial=0)) > _START):
        return None
    u = np.eye(rows, dtype=np.int64) if transform else None
    r = 0
    for c in range(cols):
        while True:
            sub = m[r:, c]
            nz = np.nonzero(sub)[0]
            if nz.size == 0:
                break
            k = int(np.argmin(np.abs(sub[nz])))
            i = r + int(nz[k])
            if i != r:
                m[[r, i]] = m[[i, r]]
                if transform:
                    u[[r, i]] = u[[i, r]]
            if m[r, c] < 0:
                m[r] = -m[r]
                if transform:
                    u[r] = -u[r]
            d = int(m[r, c])
            qs = m[r + 1:, c] // d
            if qs.size:
                mq = int(np.abs(qs).max())
                if mq:
                    if mq * int(np.abs(m[r]).max()) > _SAFE:
                        return None
                    if transform and mq * int(np.abs(u[r]).max(initial=1)) > _SAFE:
                        return None
                    m[r + 1:] -= np.outer(qs, m[r])
                    if transform:
                        u[r + 1:] -= np.outer(qs, u[r])
            if not np.any(m[r + 1:, c]):
                break
        if r < rows and m[r, c] != 0:
            d = int(m[r, c])
            qs = m[:r, c] // d
            if qs.size and np.any(qs):
                mq = int(np.abs(qs).max())
                if mq * int(np.abs(m[r]).max()) > _SAFE:
                    return None
                if transform and mq * int(np.abs(u[r]).max(initial=1)) > _SAFE:
                    return None
                m[:r] -= np.outer(qs, m[r])
                if transform:
                    u[:r] -= np.outer(qs, u[r])
            r += 1
            if r == rows:
                break
    um = IntMatrix.from_rows(u.tolist(), rows) if transform else None
    return um, IntMatrix.from_rows(m.tolist(), cols), r


def row_hermite_fast(a: IntMatrix, transform: bool = True):
    """row_hermite with a vectorized int64 fast path.

    Same pivot rule and reduction conventions, so the result is identical to
    `row_hermite`; the moment a coefficient bound check fails it falls back
    to the exact big-int path.  Small matrices skip numpy overhead entirely.
    """
    if a.rows * a.cols >= 512:
        out = _hermite_int64(a, transform)
        if out is not None:
            return out
    return row_hermite(a, transform)
