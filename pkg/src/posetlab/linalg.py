"""Dense exact linear algebra over a prime field GF(p).

Matrices are plain 2-D ``numpy`` integer arrays whose entries lie in
``0..p-1``.  A linear map V -> W is stored with shape ``(dim W, dim V)`` and
acts on column vectors.  Empty shapes such as ``(0, 3)`` are valid and stand
for zero maps to or from the zero space.

Elimination always pivots on the first nonzero entry scanning columns left to
right, so every basis returned here is a pure function of the input entries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatch

DTYPE = np.int64


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class GF:
    """The prime field with ``p`` elements together with matrix routines."""

    p: int = 2

    def __post_init__(self) -> None:
        if not _is_prime(self.p):
            raise ValueError(f"field size {self.p} is not prime")

    # construction -------------------------------------------------------

    def matrix(self, rows) -> np.ndarray:
        a = np.array(rows, dtype=DTYPE)
        if a.ndim == 1:
            a = a.reshape(1, -1) if a.size else np.zeros((0, 0), dtype=DTYPE)
        return a % self.p

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.zeros((rows, cols), dtype=DTYPE)

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=DTYPE)

    def random(self, rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(0, self.p, size=(rows, cols)).astype(DTYPE)

    def inverse_scalar(self, x: int) -> int:
        return pow(int(x) % self.p, -1, self.p)

    # arithmetic ---------------------------------------------------------

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] != b.shape[0]:
            raise ShapeMismatch(f"cannot multiply {a.shape} by {b.shape}")
        if a.size == 0 or b.size == 0:
            return np.zeros((a.shape[0], b.shape[1]), dtype=DTYPE)
        return (a @ b) % self.p

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape != b.shape:
            raise ShapeMismatch(f"cannot add {a.shape} and {b.shape}")
        return (a + b) % self.p

    def neg(self, a: np.ndarray) -> np.ndarray:
        return (-a) % self.p

    def scale(self, c: int, a: np.ndarray) -> np.ndarray:
        return (int(c) * a) % self.p

    def stack(self, blocks: list[np.ndarray], cols: int | None = None) -> np.ndarray:
        """Vertical concatenation; ``cols`` fixes the width when ``blocks`` is empty."""
        if not blocks:
            return np.zeros((0, cols or 0), dtype=DTYPE)
        widths = {b.shape[1] for b in blocks}
        if len(widths) != 1:
            raise ShapeMismatch(f"stacking blocks of widths {sorted(widths)}")
        return np.vstack(blocks).astype(DTYPE, copy=False)

    def concat(self, blocks: list[np.ndarray], rows: int | None = None) -> np.ndarray:
        """Horizontal concatenation; ``rows`` fixes the height when ``blocks`` is empty."""
        if not blocks:
            return np.zeros((rows or 0, 0), dtype=DTYPE)
        heights = {b.shape[0] for b in blocks}
        if len(heights) != 1:
            raise ShapeMismatch(f"concatenating blocks of heights {sorted(heights)}")
        return np.hstack(blocks).astype(DTYPE, copy=False)

    def block_diag(self, blocks: list[np.ndarray]) -> np.ndarray:
        rows = sum(b.shape[0] for b in blocks)
        cols = sum(b.shape[1] for b in blocks)
        out = np.zeros((rows, cols), dtype=DTYPE)
        r = c = 0
        for b in blocks:
            out[r : r + b.shape[0], c : c + b.shape[1]] = b
            r += b.shape[0]
            c += b.shape[1]
        return out

    # elimination --------------------------------------------------------

    def row_reduce(self, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
        """Reduced row echelon form and the list of pivot columns."""
        r = np.array(a, dtype=DTYPE) % self.p
        rows, cols = r.shape
        pivots: list[int] = []
        if self.p == 2:
            return self._row_reduce_gf2(r, pivots)
        row = 0
        for col in range(cols):
            if row == rows:
                break
            nz = np.flatnonzero(r[row:, col])
            if nz.size == 0:
                continue
            piv = row + int(nz[0])
            if piv != row:
                r[[row, piv]] = r[[piv, row]]
            inv = self.inverse_scalar(r[row, col])
            if inv != 1:
                r[row] = (r[row] * inv) % self.p
            others = np.flatnonzero(r[:, col])
            others = others[others != row]
            if others.size:
                r[others] = (r[others] - np.outer(r[others, col], r[row])) % self.p
            pivots.append(col)
            row += 1
        return r, pivots

    @staticmethod
    def _row_reduce_gf2(r: np.ndarray, pivots: list[int]) -> tuple[np.ndarray, list[int]]:
        rows, cols = r.shape
        row = 0
        for col in range(cols):
            if row == rows:
                break
            nz = np.flatnonzero(r[row:, col])
            if nz.size == 0:
                continue
            piv = row + int(nz[0])
            if piv != row:
                r[[row, piv]] = r[[piv, row]]
            others = np.flatnonzero(r[:, col])
            others = others[others != row]
            if others.size:
                r[others] ^= r[row]
            pivots.append(col)
            row += 1
        return r, pivots

    def rank(self, a: np.ndarray) -> int:
        if a.size == 0:
            return 0
        return len(self.row_reduce(a)[1])

    def nullspace_basis(self, a: np.ndarray) -> np.ndarray:
        """Columns spanning ker(a); each column is 1 at its own free position."""
        rows, cols = a.shape
        if rows == 0 or a.size == 0:
            return np.eye(cols, dtype=DTYPE)
        r, pivots = self.row_reduce(a)
        pivot_set = set(pivots)
        free = [c for c in range(cols) if c not in pivot_set]
        basis = np.zeros((cols, len(free)), dtype=DTYPE)
        for j, f in enumerate(free):
            basis[f, j] = 1
            for i, pc in enumerate(pivots):
                basis[pc, j] = (-r[i, f]) % self.p
        return basis

    def image_basis(self, a: np.ndarray) -> np.ndarray:
        """Columns spanning im(a), in reduced column echelon form."""
        rows, cols = a.shape
        if a.size == 0:
            return np.zeros((rows, 0), dtype=DTYPE)
        r, pivots = self.row_reduce(a.T)
        return r[: len(pivots)].T.copy()

    def solve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
        """Some ``x`` with ``a @ x == b``, or ``None`` when no solution exists."""
        vector = b.ndim == 1
        if vector:
            b = b.reshape(-1, 1)
        if a.shape[0] != b.shape[0]:
            raise ShapeMismatch(f"system {a.shape} with right side {b.shape}")
        rows, cols = a.shape
        x = np.zeros((cols, b.shape[1]), dtype=DTYPE)
        if rows == 0:
            return x[:, 0] if vector else x
        r, pivots = self.row_reduce(np.hstack([a % self.p, b % self.p]))
        for i, pc in enumerate(pivots):
            if pc >= cols:
                return None
            x[pc] = r[i, cols:]
        return x[:, 0] if vector else x

    def inverse(self, a: np.ndarray) -> np.ndarray | None:
        n = a.shape[0]
        if a.shape != (n, n):
            raise ShapeMismatch(f"inverse of non-square {a.shape}")
        if n == 0:
            return a.copy()
        r, pivots = self.row_reduce(np.hstack([a % self.p, np.eye(n, dtype=DTYPE)]))
        if pivots[:n] != list(range(n)):
            return None
        return r[:, n:].copy()

    def in_span(self, basis: np.ndarray, vectors: np.ndarray) -> bool:
        """Whether every column of ``vectors`` lies in the column span of ``basis``."""
        if vectors.shape[1] == 0:
            return True
        return self.rank(np.hstack([basis, vectors])) == self.rank(basis)


GF2 = GF(2)


def parse_matrix(text: str, field: GF = GF2) -> np.ndarray:
    """Parse the ``1 0; 1 1`` literal (rows split by ``;``)."""
    text = text.strip()
    if not text:
        return np.zeros((0, 0), dtype=DTYPE)
    rows = [row.split() for row in text.split(";")]
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError("ragged matrix literal")
    return np.array([[int(v) for v in row] for row in rows], dtype=DTYPE).reshape(len(rows), widths.pop()) % field.p


def format_matrix(a: np.ndarray) -> str:
    return "; ".join(" ".join(str(int(v)) for v in row) for row in a)


__all__ = ["GF", "GF2", "DTYPE", "parse_matrix", "format_matrix"]
