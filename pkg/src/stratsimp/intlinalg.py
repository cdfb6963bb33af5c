"""Exact integer matrix reductions (lists of Python ints, no overflow)."""

from __future__ import annotations

from dataclasses import dataclass

Matrix = list[list[int]]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def eye(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = 1
    return m


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        oi = out[i]
        for k in range(inner):
            v = row[k]
            if v:
                bk = b[k]
                for j in range(cols):
                    if bk[j]:
                        oi[j] += v * bk[j]
    return out


def transpose(a: Matrix, cols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(cols or 0)]
    return [list(r) for r in zip(*a)]


def smith_invariants(m: Matrix) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix."""
    a = [list(r) for r in m if any(r)]
    if not a:
        return []
    rows, cols = len(a), len(a[0])
    diag: list[int] = []
    t = 0
    while t < min(rows, cols):
        # choose the smallest nonzero entry in the remaining block as pivot
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        a[t], a[pi] = a[pi], a[t]
        for r in a:
            r[t], r[pj] = r[pj], r[t]
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, rows):
                q = a[i][t] // p
                if q:
                    ai, at_ = a[i], a[t]
                    for j in range(t, cols):
                        ai[j] -= q * at_[j]
                if a[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = a[t][j] // p
                if q:
                    for r in a:
                        r[j] -= q * r[t]
                if a[t][j]:
                    done = False
            if done:
                # enforce divisibility of the remaining block
                bad = next(
                    ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                i, _ = bad
                at_, ai = a[t], a[i]
                for j in range(t, cols):
                    at_[j] += ai[j]
                continue
            # move the smallest nonzero entry of row/column t to the pivot
            cand = [(abs(a[i][t]), i, t) for i in range(t, rows) if a[i][t]]
            cand += [(abs(a[t][j]), t, j) for j in range(t, cols) if a[t][j]]
            _, pi, pj = min(cand)
            a[t], a[pi] = a[pi], a[t]
            for r in a:
                r[t], r[pj] = r[pj], r[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def rank(m: Matrix) -> int:
    return len(smith_invariants(m))


@dataclass
class ColumnEchelon:
    """M T = E with T unimodular; E has its nonzero columns first."""

    rank: int
    T: Matrix
    Tinv: Matrix
    E: Matrix

    def kernel_basis(self) -> Matrix:
        """Columns of T spanning ker M (as a list of column vectors)."""
        n = len(self.T)
        return [[self.T[i][j] for i in range(n)] for j in range(self.rank, n)]

    def kernel_coords(self, x: list[int]) -> list[int]:
        """Coordinates of x ∈ ker M in ``kernel_basis``."""
        n = len(self.T)
        y = [sum(self.Tinv[i][j] * x[j] for j in range(n) if x[j]) for i in range(n)]
        if any(y[: self.rank]):
            raise ValueError("vector is not in the kernel")
        return y[self.rank :]


def column_echelon(m: Matrix, ncols: int) -> ColumnEchelon:
    """Integer column reduction of an r × ncols matrix, tracking T and its inverse."""
    a = [list(r) for r in m]
    T = eye(ncols)
    Ti = eye(ncols)
    piv = 0

    def colop_add(dst: int, src: int, q: int) -> None:
        # column dst += q * column src ; inverse: row src -= q * row dst
        for r in a:
            if r[src]:
                r[dst] += q * r[src]
        for r in T:
            if r[src]:
                r[dst] += q * r[src]
        rs, rd = Ti[src], Ti[dst]
        for j in range(ncols):
            if rd[j]:
                rs[j] -= q * rd[j]

    def colswap(i: int, j: int) -> None:
        if i == j:
            return
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in T:
            r[i], r[j] = r[j], r[i]
        Ti[i], Ti[j] = Ti[j], Ti[i]

    def colneg(i: int) -> None:
        for r in a:
            r[i] = -r[i]
        for r in T:
            r[i] = -r[i]
        Ti[i] = [-v for v in Ti[i]]

    for row in a:
        if piv >= ncols:
            break
        while True:
            nz = [j for j in range(piv, ncols) if row[j]]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(row[j]))
            colswap(piv, j0)
            if row[piv] < 0:
                colneg(piv)
            p = row[piv]
            for j in range(piv + 1, ncols):
                if row[j]:
                    colop_add(j, piv, -(row[j] // p))
            if all(row[j] == 0 for j in range(piv + 1, ncols)):
                piv += 1
                break
    return ColumnEchelon(piv, T, Ti, a)


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group Z^rank ⊕ ⊕ Z/t."""

    rank: int
    torsion: tuple[int, ...]

    @property
    def order(self) -> int | None:
        if self.rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def __str__(self) -> str:
        parts = ["Z"] * self.rank + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def cokernel(relations: Matrix, ngens: int) -> AbelianGroup:
    """Z^ngens modulo the row span of ``relations``."""
    inv = smith_invariants(relations)
    return AbelianGroup(ngens - len(inv), tuple(d for d in inv if d > 1))
