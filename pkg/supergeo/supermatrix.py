"""Block supermatrices over the Grassmann algebra.

Rows and columns are split into an even block followed by an odd block. An
even supermatrix has even entries in the diagonal blocks (A, D) and odd
entries in the off-diagonal ones (B, C).
"""

import logging
from typing import Sequence

import numpy as np

from supergeo.errors import DomainError, NonInvertibleError, ParityError
from supergeo.grassmann import Algebra, GrassmannNumber, invert, residual

logger = logging.getLogger(__name__)


class SuperMatrix:
    """(p_r|q_r) × (p_c|q_c) matrix of Grassmann numbers."""

    __slots__ = ("entries", "row_split", "col_split", "algebra")

    def __init__(
        self,
        entries: Sequence[Sequence[GrassmannNumber]],
        row_split: int,
        col_split: int | None = None,
        check: bool = True,
    ):
        self.entries = [list(row) for row in entries]
        self.row_split = row_split
        self.col_split = row_split if col_split is None else col_split
        self.algebra = self.entries[0][0].algebra
        if check:
            self.check_parity()

    @classmethod
    def square(cls, entries, p: int, check: bool = True) -> "SuperMatrix":
        return cls(entries, p, p, check)

    @classmethod
    def identity(cls, algebra: Algebra, p: int, q: int) -> "SuperMatrix":
        n = p + q
        one, zero = algebra.scalar(1), algebra.zero()
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)], p, p)

    @classmethod
    def from_numeric(cls, algebra: Algebra, values, p: int) -> "SuperMatrix":
        rows = [[algebra.scalar(complex(v)) for v in row] for row in np.asarray(values)]
        return cls(rows, p, p, check=False)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.entries[0])

    def __getitem__(self, idx: tuple[int, int]) -> GrassmannNumber:
        i, j = idx
        return self.entries[i][j]

    def check_parity(self) -> None:
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                odd = (i >= self.row_split) ^ (j >= self.col_split)
                if not (x.is_odd() if odd else x.is_even()):
                    raise ParityError(f"entry ({i},{j}) should be {'odd' if odd else 'even'}: {x}")

    # Blocks

    def _block(self, rows: range, cols: range) -> list[list[GrassmannNumber]]:
        return [[self.entries[i][j] for j in cols] for i in rows]

    @property
    def A(self):
        return self._block(range(self.row_split), range(self.col_split))

    @property
    def B(self):
        n, m = self.shape
        return self._block(range(self.row_split), range(self.col_split, m))

    @property
    def C(self):
        n, m = self.shape
        return self._block(range(self.row_split, n), range(self.col_split))

    @property
    def D(self):
        n, m = self.shape
        return self._block(range(self.row_split, n), range(self.col_split, m))

    # Arithmetic

    def __matmul__(self, other: "SuperMatrix") -> "SuperMatrix":
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise DomainError(f"cannot multiply {self.shape} by {other.shape}")
        zero = self.algebra.zero()
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = zero
                for t in range(k):
                    a, b = self.entries[i][t], other.entries[t][j]
                    if a.terms and b.terms:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return SuperMatrix(out, self.row_split, other.col_split, check=False)

    def __add__(self, other: "SuperMatrix") -> "SuperMatrix":
        return SuperMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
            self.row_split, self.col_split, check=False,
        )

    def __sub__(self, other: "SuperMatrix") -> "SuperMatrix":
        return self + other.scaled(-1)

    def scaled(self, factor) -> "SuperMatrix":
        return SuperMatrix(
            [[factor * x for x in row] for row in self.entries],
            self.row_split, self.col_split, check=False,
        )

    def max_residual(self, other: "SuperMatrix") -> float:
        return max(residual(a, b) for r1, r2 in zip(self.entries, other.entries) for a, b in zip(r1, r2))

    def inverse(self) -> "SuperMatrix":
        return SuperMatrix(gauss_jordan_inverse(self.entries), self.col_split, self.row_split, check=False)

    def __repr__(self):
        return f"SuperMatrix({self.shape}, split=({self.row_split},{self.col_split}))"


def gauss_jordan_inverse(entries: Sequence[Sequence[GrassmannNumber]]) -> list[list[GrassmannNumber]]:
    """Inverse by row reduction with pivots chosen on body magnitude.

    Row operations multiply from the left, so the method is exact for even
    supermatrices over the graded-commutative algebra.
    """
    n = len(entries)
    algebra = entries[0][0].algebra
    work = [list(row) for row in entries]
    inv = [[algebra.scalar(1) if i == j else algebra.zero() for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot_row = max(range(col, n), key=lambda r: abs(work[r][col].body))
        if abs(work[pivot_row][col].body) == 0:
            raise NonInvertibleError(f"matrix body is singular at column {col}")
        work[col], work[pivot_row] = work[pivot_row], work[col]
        inv[col], inv[pivot_row] = inv[pivot_row], inv[col]
        p_inv = invert(work[col][col])
        work[col] = [p_inv * x for x in work[col]]
        inv[col] = [p_inv * x for x in inv[col]]
        for r in range(n):
            if r == col or not work[r][col].terms:
                continue
            factor = work[r][col]
            work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
            inv[r] = [x - factor * y for x, y in zip(inv[r], inv[col])]
    return inv


def det_even(entries: Sequence[Sequence[GrassmannNumber]]) -> GrassmannNumber:
    """Determinant of a matrix with even (mutually commuting) entries."""
    n = len(entries)
    if n == 0:
        raise DomainError("empty block")
    algebra = entries[0][0].algebra
    work = [list(row) for row in entries]
    result = algebra.scalar(1)
    for col in range(n):
        pivot_row = max(range(col, n), key=lambda r: abs(work[r][col].body))
        if abs(work[pivot_row][col].body) == 0:
            # nilpotent column: the determinant has zero body, compute by expansion
            return _det_expand(entries)
        if pivot_row != col:
            work[col], work[pivot_row] = work[pivot_row], work[col]
            result = -result
        pivot = work[col][col]
        result = result * pivot
        p_inv = invert(pivot)
        for r in range(col + 1, n):
            if not work[r][col].terms:
                continue
            factor = work[r][col] * p_inv
            work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
    return result


def _det_expand(entries) -> GrassmannNumber:
    n = len(entries)
    if n == 1:
        return entries[0][0]
    total = entries[0][0].algebra.zero()
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in entries[1:]]
        term = entries[0][j] * _det_expand(minor)
        total = total - term if j % 2 else total + term
    return total


def supertranspose(X: SuperMatrix) -> SuperMatrix:
    """Blocks (Aᵗ, Cᵗ // −Bᵗ, Dᵗ)."""
    n, m = X.shape
    out = []
    for j in range(m):
        row = []
        for i in range(n):
            x = X.entries[i][j]
            # lower-left block of the result is −Bᵗ
            if j >= X.col_split and i < X.row_split:
                x = -x
            row.append(x)
        out.append(row)
    return SuperMatrix(out, X.col_split, X.row_split, check=False)


def berezinian(X: SuperMatrix) -> GrassmannNumber:
    """Ber(X) = det(A − B D⁻¹ C) · det(D)⁻¹."""
    p = X.row_split
    n, _ = X.shape
    if n - p == 0:
        return det_even(X.A)
    D = X.D
    det_d = det_even(D)
    if det_d.body == 0:
        raise NonInvertibleError("odd-odd block is singular at the body")
    if p == 0:
        return invert(det_d)
    d_inv = gauss_jordan_inverse(D)
    A, B, C = X.A, X.B, X.C
    schur = []
    for i in range(p):
        row = []
        for j in range(p):
            acc = A[i][j]
            for k in range(n - p):
                for l in range(n - p):
                    if B[i][k].terms and d_inv[k][l].terms and C[l][j].terms:
                        acc = acc - B[i][k] * d_inv[k][l] * C[l][j]
            row.append(acc)
        schur.append(row)
    return det_even(schur) * invert(det_d)


def flat_form(algebra: Algebra, p: int) -> SuperMatrix:
    """g = diag(η_{1,p}, J₁) with η = diag(−1, 1, …, 1) and J₁ = ½[[0,1],[−1,0]]."""
    n = p + 1
    vals = np.zeros((n + 2, n + 2))
    vals[0, 0] = -1.0
    for i in range(1, n):
        vals[i, i] = 1.0
    vals[n, n + 1] = 0.5
    vals[n + 1, n] = -0.5
    return SuperMatrix.from_numeric(algebra, vals, n)


def is_orthosymplectic(X: SuperMatrix, g: SuperMatrix, tol: float = 1e-12) -> tuple[bool, float]:
    """Residual of XˢᵗgX − g and whether it stays under ``tol``."""
    res = (supertranspose(X) @ g @ X).max_residual(g)
    return res < tol, res


def hyperboloid_defect(H: Sequence[GrassmannNumber]) -> GrassmannNumber:
    """HᵗgH + 1 = −x₀² + Σx_i² + θ₁θ₂ + 1 for H = (x₀, x⃗, θ₁, θ₂)."""
    x0, *xs = H[:-2]
    t1, t2 = H[-2:]
    out = -(x0 * x0) + t1 * t2 + 1
    for x in xs:
        out = out + x * x
    return out


def coset_lift(H: Sequence[GrassmannNumber], variant: str = "corrected", tol: float = 1e-12) -> SuperMatrix:
    """Element X of OSp(1,p|2) with X·H₀ = H for a point H on the hyperboloid.

    ``printed`` uses D = [[0, −1+½θ₁θ₂], [1−½θ₁θ₂, 0]]; ``corrected`` scales the
    symplectic block by 1 − θ₁θ₂/(2(1+x₀)), which keeps the odd-odd block of
    XˢᵗgX equal to J₁ for every x⃗.
    """
    defect = hyperboloid_defect(H).max_abs()
    if defect > tol:
        raise DomainError(f"point is off the hyperboloid (defect {defect:.3g})")
    x0, *xs = H[:-2]
    t1, t2 = H[-2:]
    if x0.body.real <= 0:
        raise DomainError("hyperboloid points need ε₀(x₀) > 0")
    algebra = x0.algebra
    zero = algebra.zero()
    p = len(xs)
    inv1 = invert(x0 + 1)
    u = [x * inv1 for x in xs]
    n = p + 1
    rows: list[list[GrassmannNumber]] = []
    rows.append([x0, *xs, t1 * 0.5, t2 * 0.5])
    for i in range(p):
        row = [xs[i]]
        for j in range(p):
            row.append((1 if i == j else 0) + xs[i] * u[j])
        row += [u[i] * t1 * 0.5, u[i] * t2 * 0.5]
        rows.append(row)
    if variant == "printed":
        d = 1 - t1 * t2 * 0.5
    elif variant == "corrected":
        d = 1 - t1 * t2 * inv1 * 0.5
    else:
        raise DomainError(f"unknown coset lift variant {variant!r}")
    rows.append([t1, *(ui * t1 for ui in u), zero, -d])
    rows.append([t2, *(ui * t2 for ui in u), d, zero])
    return SuperMatrix(rows, n)


def base_vector(algebra: Algebra, p: int) -> SuperMatrix:
    """H₀ = (1, 0, …, 0 | 0, 0) as a column supervector."""
    one, zero = algebra.scalar(1), algebra.zero()
    col = [[one]] + [[zero] for _ in range(p + 2)]
    return SuperMatrix(col, p + 1, 1)


# osp(1|2) in the defining (2|1) representation

L1 = np.array([[0, 1, 0], [-1, 0, 0], [0, 0, 0]], dtype=float)
L2 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=float)
L3 = np.array([[1, 0, 0], [0, -1, 0], [0, 0, 0]], dtype=float)
Q1 = np.array([[0, 0, 1], [0, 0, 1], [1, -1, 0]], dtype=float)
Q2 = np.array([[0, 0, 1], [0, 0, -1], [-1, -1, 0]], dtype=float)
R1 = 0.5 * (Q1 + Q2)
R2 = 0.5 * (Q1 - Q2)

OSP_BASIS = {"L1": L1, "L2": L2, "L3": L3, "Q1": Q1, "Q2": Q2}
OSP_ODD = {"Q1", "Q2"}

SIGMA = [
    np.array([[0, 1], [-1, 0]], dtype=float),
    np.array([[1, 0], [0, -1]], dtype=float),
    np.array([[0, 1], [1, 0]], dtype=float),
]
EPS_C = np.array([[0, 1], [-1, 0]], dtype=float)
ETA = np.diag([-1.0, 1.0, 1.0])
KILLING_SCALE = 0.5


def _levi_civita(i: int, j: int, k: int) -> int:
    return int(np.sign((j - i) * (k - i) * (k - j)))


def supercommutator(x: str, y: str) -> np.ndarray:
    """[X, Y} = XY − (−1)^{|X||Y|} YX."""
    X, Y = OSP_BASIS[x], OSP_BASIS[y]
    if x in OSP_ODD and y in OSP_ODD:
        return X @ Y + Y @ X
    return X @ Y - Y @ X


def decompose(matrix: np.ndarray) -> dict[str, float]:
    """Coefficients of ``matrix`` on {L1, L2, L3, Q1, Q2}; raises if it leaves the span."""
    names = list(OSP_BASIS)
    basis = np.stack([OSP_BASIS[k].ravel() for k in names], axis=1)
    coeffs, *_ = np.linalg.lstsq(basis, matrix.ravel(), rcond=None)
    if np.abs(basis @ coeffs - matrix.ravel()).max() > 1e-12:
        raise DomainError("bracket leaves the osp(1|2) span")
    return {k: float(c) for k, c in zip(names, coeffs)}


def supertrace(matrix: np.ndarray) -> float:
    return float(matrix[0, 0] + matrix[1, 1] - matrix[2, 2])


def killing(x: str, y: str) -> float:
    """Str(X, Y) = k·str(XY) with k = ½."""
    return KILLING_SCALE * supertrace(OSP_BASIS[x] @ OSP_BASIS[y])


def osp_structure() -> dict:
    """Generators, the computed bracket table, the Killing table and relation residuals."""
    names = list(OSP_BASIS)
    brackets = {(x, y): decompose(supercommutator(x, y)) for x in names for y in names}
    killing_table = {(x, y): killing(x, y) for x in names for y in names}
    Ls, Qs = ["L1", "L2", "L3"], ["Q1", "Q2"]

    residuals = {}
    for i, x in enumerate(Ls):
        for j, y in enumerate(Ls):
            expected = sum(
                2 * _levi_civita(i, j, k) * ETA[k, k] * OSP_BASIS[Ls[k]] for k in range(3)
            )
            residuals[f"[{x},{y}]"] = float(np.abs(supercommutator(x, y) - expected).max())
        for a, qa in enumerate(Qs):
            expected = sum(SIGMA[i][a, b] * OSP_BASIS[Qs[b]] for b in range(2))
            residuals[f"[{x},{qa}]"] = float(np.abs(supercommutator(x, qa) - expected).max())
    for a, qa in enumerate(Qs):
        for b, qb in enumerate(Qs):
            expected = sum(2 * (EPS_C @ SIGMA[i])[a, b] * OSP_BASIS[Ls[i]] for i in range(3))
            residuals[f"{{{qa},{qb}}}"] = float(np.abs(supercommutator(qa, qb) - expected).max())
    for i, x in enumerate(Ls):
        for j, y in enumerate(Ls):
            residuals[f"Str({x},{y})"] = abs(killing(x, y) - ETA[i, j])
        for qa in Qs:
            residuals[f"Str({x},{qa})"] = abs(killing(x, qa))
    for a, qa in enumerate(Qs):
        for b, qb in enumerate(Qs):
            residuals[f"Str({qa},{qb})"] = abs(killing(qa, qb) + 2 * EPS_C[a, b])

    return {
        "generators": dict(OSP_BASIS),
        "bracket_table": brackets,
        "killing_table": killing_table,
        "killing_scale": KILLING_SCALE,
        "residuals": residuals,
    }


def numeric_supermatrix(algebra: Algebra, values: np.ndarray, coeff: GrassmannNumber | None = None) -> SuperMatrix:
    """coeff·values as a (2|1) supermatrix; values is a real 3×3 array."""
    rows = []
    for row in values:
        out = []
        for v in row:
            x = algebra.scalar(float(v))
            out.append(coeff * x if coeff is not None else x)
        rows.append(out)
    return SuperMatrix(rows, 2, 2, check=False)
