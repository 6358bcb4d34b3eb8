"""Small dense linear algebra over a finite field (lists of lists of ints)."""

from __future__ import annotations

from .gf_core import GF

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(F: GF, A: Matrix, B: Matrix) -> Matrix:
    rows, inner, cols = len(A), len(B), len(B[0]) if B else 0
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        for k in range(inner):
            a = A[i][k]
            if a:
                row = B[k]
                for j in range(cols):
                    if row[j]:
                        out[i][j] = F.add(out[i][j], F.mul(a, row[j]))
    return out


def mat_vec(F: GF, A: Matrix, v: list[int]) -> list[int]:
    return [col[0] for col in mat_mul(F, A, [[x] for x in v])]


def transpose(A: Matrix) -> Matrix:
    return [list(r) for r in zip(*A)] if A else []


def columns(A: Matrix) -> list[list[int]]:
    return transpose(A)


def from_columns(cols: list[list[int]]) -> Matrix:
    return transpose(cols)


def row_reduce(F: GF, A: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = [list(r) for r in A]
    pivots: list[int] = []
    r = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = F.inv(A[r][c])
        A[r] = [F.mul(inv, x) for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A, pivots


def rank(F: GF, A: Matrix) -> int:
    return len(row_reduce(F, A)[1]) if A else 0


def kernel(F: GF, A: Matrix, ncols: int | None = None) -> list[list[int]]:
    """Basis of {x : A x = 0}."""
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if not A:
        return [[int(i == j) for i in range(n)] for j in range(n)]
    R, pivots = row_reduce(F, A)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for row, pc in zip(R, pivots):
            v[pc] = F.negate(row[fc])
        basis.append(v)
    return basis


def inverse(F: GF, A: Matrix) -> Matrix:
    n = len(A)
    aug = [list(A[i]) + identity(n)[i] for i in range(n)]
    R, pivots = row_reduce(F, aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in R]


def det(F: GF, A: Matrix) -> int:
    A = [list(r) for r in A]
    n = len(A)
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = F.negate(d)
        d = F.mul(d, A[c][c])
        inv = F.inv(A[c][c])
        for i in range(c + 1, n):
            if A[i][c]:
                f = F.mul(A[i][c], inv)
                A[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(A[i], A[c])]
    return d


def solve(F: GF, A: Matrix, b: list[int]) -> list[int] | None:
    """One solution of A x = b, or None."""
    n = len(A[0]) if A else 0
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    R, pivots = row_reduce(F, aug)
    if n in pivots:
        return None
    x = [0] * n
    for row, pc in zip(R, pivots):
        x[pc] = row[n]
    return x


def vec_add(F: GF, u: list[int], v: list[int]) -> list[int]:
    return [F.add(a, b) for a, b in zip(u, v)]


def vec_scale(F: GF, c: int, v: list[int]) -> list[int]:
    return [F.mul(c, a) for a in v]
