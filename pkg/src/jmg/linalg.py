"""Dense matrix kernel in two scalar regimes.

Exact rational matrices carry the graph-to-projection constructions, so the
"commute exactly when adjacent" checks run with zero tolerance.  Complex
float matrices carry POVMs, dilations, and the feasibility solver, where
eigendecompositions force floating point.

All matrix values are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InputError

DEFAULT_TOL = 1e-9

# int64 products stay exact below this bound; larger work falls back to
# Python integers (object dtype).
_INT64_SAFE = 2**62


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


def _max_abs(num: np.ndarray) -> int:
    if num.size == 0:
        return 0
    return int(max(abs(int(x)) for x in num.flat)) if num.dtype == object else int(np.abs(num).max())


def _entry_array(values) -> np.ndarray:
    arr = np.array(values, dtype=object)
    if arr.ndim != 2:
        raise InputError("matrix data must be two-dimensional")
    flat = []
    for x in arr.flat:
        if isinstance(x, bool) or not isinstance(x, (int, np.integer)):
            raise InputError(f"integer numerator expected, got {x!r}")
        flat.append(int(x))
    out = np.array(flat, dtype=object).reshape(arr.shape) if flat else arr.astype(object)
    return out


def _compact(num: np.ndarray) -> np.ndarray:
    """Store small integer matrices as int64 so numpy does the arithmetic."""
    if num.dtype == np.int64:
        return num
    if num.size == 0 or _max_abs(num) < _INT64_SAFE:
        return num.astype(np.int64)
    return num


class RationalMatrix:
    """Matrix of exact rationals: integer numerators over one common positive
    denominator, globally gcd-reduced so equal values compare equal."""

    __slots__ = ("_num", "_den")

    def __init__(self, numerators, denominator: int = 1):
        if denominator == 0:
            raise InputError("denominator must be nonzero")
        num = numerators if isinstance(numerators, np.ndarray) else _entry_array(numerators)
        if num.ndim != 2:
            raise InputError("matrix data must be two-dimensional")
        den = int(denominator)
        if den < 0:
            num, den = -num, -den
        self._num, self._den = self._normalize(num, den)

    @staticmethod
    def _normalize(num: np.ndarray, den: int) -> tuple[np.ndarray, int]:
        if num.size == 0 or not np.any(num):
            return np.zeros(num.shape, dtype=np.int64), 1
        if num.dtype == object:
            g = 0
            for x in num.flat:
                g = math.gcd(g, int(x))
                if g == 1:
                    break
        else:
            g = int(np.gcd.reduce(np.abs(num).ravel()))
        g = math.gcd(g, den)
        if g > 1:
            num = num // g
            den //= g
        return _compact(num), den

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_rows(cls, rows) -> "RationalMatrix":
        """Build from nested int / Fraction / "num/den" string entries."""
        parsed = [[_as_fraction(x) for x in row] for row in rows]
        ncols = {len(r) for r in parsed}
        if len(ncols) > 1:
            raise InputError("ragged rows")
        den = 1
        for row in parsed:
            for f in row:
                den = _lcm(den, f.denominator)
        num = [[int(f * den) for f in row] for row in parsed]
        shape = (len(parsed), ncols.pop() if parsed else 0)
        arr = np.array(num, dtype=object).reshape(shape)
        return cls(arr, den)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), 1)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(np.eye(n, dtype=np.int64), 1)

    @classmethod
    def outer(cls, u, v, denominator: int = 1) -> "RationalMatrix":
        """Outer product of integer vectors, divided by `denominator`."""
        a = np.array([int(x) for x in u], dtype=object)
        b = np.array([int(x) for x in v], dtype=object)
        return cls(np.outer(a, b), denominator)

    # -- structure ---------------------------------------------------------

    @property
    def rows(self) -> int:
        return self._num.shape[0]

    @property
    def cols(self) -> int:
        return self._num.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._num.shape

    @property
    def denominator(self) -> int:
        return self._den

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(int(self._num[i, j]), self._den)

    def to_fractions(self) -> list[list[Fraction]]:
        return [[Fraction(int(x), self._den) for x in row] for row in self._num]

    def to_ndarray(self) -> np.ndarray:
        if self._num.dtype == object:
            return np.array([[float(Fraction(int(x), self._den)) for x in row] for row in self._num])
        return self._num.astype(np.float64) / float(self._den)

    def nnz(self) -> int:
        return int(np.count_nonzero(self._num))

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not np.any(self._num)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and bool(np.array_equal(self._num, self._num.T))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and self._den == other._den
            and bool(np.array_equal(self._num, other._num))
        )

    def __hash__(self):
        return hash((self.shape, self._den, tuple(int(x) for x in self._num.flat)))

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self._add_sub(other, 1)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self._add_sub(other, -1)

    def _add_sub(self, other: "RationalMatrix", sign: int) -> "RationalMatrix":
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise InputError(f"shape mismatch {self.shape} vs {other.shape}")
        den = _lcm(self._den, other._den)
        fa, fb = den // self._den, sign * (den // other._den)
        a, b = self._num, other._num
        if a.dtype == np.int64 and b.dtype == np.int64:
            bound = max(_max_abs(a) * abs(fa), _max_abs(b) * abs(fb)) * 2
            if bound >= _INT64_SAFE:
                a, b = a.astype(object), b.astype(object)
        else:
            a, b = a.astype(object), b.astype(object)
        return RationalMatrix(a * fa + b * fb, den)

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix(-self._num, self._den)

    def __mul__(self, scalar) -> "RationalMatrix":
        f = _as_fraction(scalar)
        num = self._num
        if num.dtype == np.int64 and _max_abs(num) * abs(f.numerator) >= _INT64_SAFE:
            num = num.astype(object)
        return RationalMatrix(num * f.numerator, self._den * f.denominator)

    __rmul__ = __mul__

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise InputError(f"cannot multiply {self.shape} by {other.shape}")
        a, b = self._num, other._num
        out_shape = (self.rows, other.cols)
        if a.size == 0 or b.size == 0:
            prod = np.zeros(out_shape, dtype=np.int64)
        else:
            prod = _sparse_product(a, b)
            if prod is None:
                bound = self.cols * _max_abs(a) * _max_abs(b)
                if a.dtype == np.int64 and b.dtype == np.int64 and bound < _INT64_SAFE:
                    prod = a @ b
                else:
                    prod = np.dot(a.astype(object), b.astype(object))
        return RationalMatrix(prod, self._den * other._den)

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix(self._num.T.copy(), self._den)

    def trace(self) -> Fraction:
        return Fraction(sum(int(self._num[i, i]) for i in range(min(self.shape))), self._den)

    def __repr__(self) -> str:
        return f"RationalMatrix({self.to_fractions()!r})"


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad rational literal {x!r}") from exc
    raise InputError(f"exact rational expected, got {type(x).__name__}")


def _sparse_product(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """Cheap product when one factor is very sparse (unit diagonals, zeros)."""
    limit = 8
    nnz_a = int(np.count_nonzero(a))
    if nnz_a <= limit:
        out = np.zeros((a.shape[0], b.shape[1]), dtype=object)
        for i, k in zip(*np.nonzero(a)):
            out[i, :] += int(a[i, k]) * b[k, :].astype(object)
        return out
    nnz_b = int(np.count_nonzero(b))
    if nnz_b <= limit:
        out = np.zeros((a.shape[0], b.shape[1]), dtype=object)
        for k, j in zip(*np.nonzero(b)):
            out[:, j] += int(b[k, j]) * a[:, k].astype(object)
        return out
    return None


# -- shared operations (dispatch on scalar regime) ---------------------------


def commutator(a, b):
    """ab - ba, exact for rational inputs, complex float otherwise."""
    if isinstance(a, RationalMatrix) and isinstance(b, RationalMatrix):
        if a.rows != a.cols or a.shape != b.shape:
            raise InputError("commutator needs equal square matrices")
        ab = a @ b
        if a.is_symmetric() and b.is_symmetric():
            # ba = (ab)^T when both factors are symmetric
            return ab - ab.T
        return ab - b @ a
    a, b = _as_complex(a), _as_complex(b)
    if a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise InputError("commutator needs equal square matrices")
    return a @ b - b @ a


def direct_sum(blocks):
    """Block-diagonal matrix; an empty list yields the 0x0 rational matrix."""
    blocks = list(blocks)
    if not blocks:
        return RationalMatrix.zeros(0, 0)
    if isinstance(blocks[0], RationalMatrix):
        for blk in blocks:
            if not isinstance(blk, RationalMatrix) or blk.rows != blk.cols:
                raise InputError("direct_sum expects square blocks of one regime")
        den = 1
        for blk in blocks:
            den = _lcm(den, blk.denominator)
        dim = sum(blk.rows for blk in blocks)
        num = np.zeros((dim, dim), dtype=object)
        at = 0
        for blk in blocks:
            d = blk.rows
            if d:
                num[at : at + d, at : at + d] = blk._num.astype(object) * (den // blk.denominator)
            at += d
        return RationalMatrix(num, den)
    arrs = [_as_complex(blk) for blk in blocks]
    for arr in arrs:
        if arr.shape[0] != arr.shape[1]:
            raise InputError("direct_sum expects square blocks")
    dim = sum(arr.shape[0] for arr in arrs)
    out = np.zeros((dim, dim), dtype=complex)
    at = 0
    for arr in arrs:
        d = arr.shape[0]
        out[at : at + d, at : at + d] = arr
        at += d
    return out


def is_projection(p: RationalMatrix) -> bool:
    """Exact test: symmetric and idempotent."""
    if not isinstance(p, RationalMatrix):
        raise InputError("is_projection operates on exact matrices")
    if p.rows != p.cols:
        raise InputError("projection test needs a square matrix")
    return p.is_symmetric() and (p @ p) == p


def numerical_rank(a, tol: float = DEFAULT_TOL) -> int:
    """Singular values above tol (float) or exact pivot count (rational)."""
    if isinstance(a, RationalMatrix):
        return _exact_rank(a)
    arr = _as_complex(a)
    if arr.size == 0:
        return 0
    return int(np.sum(np.linalg.svd(arr, compute_uv=False) > tol))


def _exact_rank(m: RationalMatrix) -> int:
    grid = [[Fraction(int(x), 1) for x in row] for row in m._num]
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if grid[r][c] != 0), None)
        if piv is None:
            continue
        grid[rank], grid[piv] = grid[piv], grid[rank]
        lead = grid[rank][c]
        for r in range(rank + 1, rows):
            f = grid[r][c]
            if f:
                scale = f / lead
                grid[r] = [x - scale * y for x, y in zip(grid[r], grid[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


# -- float regime -------------------------------------------------------------


@dataclass(frozen=True)
class HermitianCheckReport:
    max_asymmetry: float
    min_eigenvalue: float
    verdict: bool


def _as_complex(a) -> np.ndarray:
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2:
        raise InputError("matrix expected")
    if arr.size and not np.all(np.isfinite(arr)):
        raise InputError("matrix entries must be finite")
    return arr


def hermitize(a: np.ndarray) -> np.ndarray:
    return (a + a.conj().T) / 2


def hermitian_check(a, require_psd: bool = False, tol: float = DEFAULT_TOL) -> HermitianCheckReport:
    """Asymmetry / spectrum report; to test a <= 1, pass 1 - a with PSD on."""
    arr = _as_complex(a)
    if arr.shape[0] != arr.shape[1]:
        raise InputError("hermitian_check needs a square matrix")
    if arr.size == 0:
        return HermitianCheckReport(0.0, 0.0, True)
    asym = float(np.abs(arr - arr.conj().T).max())
    min_eig = float(np.linalg.eigvalsh(hermitize(arr)).min())
    verdict = asym <= tol and (not require_psd or min_eig >= -tol)
    return HermitianCheckReport(asym, min_eig, verdict)


def psd_sqrt(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Hermitian PSD square root; eigenvalues in [-tol, 0) clamp to zero."""
    arr = _as_complex(a)
    if arr.shape[0] != arr.shape[1]:
        raise InputError("psd_sqrt needs a square matrix")
    if arr.size == 0:
        return arr.copy()
    asym = float(np.abs(arr - arr.conj().T).max())
    if asym > tol:
        raise InputError(f"matrix is not Hermitian within {tol} (asymmetry {asym:.3e})")
    w, v = np.linalg.eigh(hermitize(arr))
    if w.min() < -tol:
        raise InputError(f"matrix is not PSD within {tol} (eigenvalue {w.min():.3e})")
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return hermitize(root)


# -- JSON wire format ---------------------------------------------------------


def matrix_to_json_obj(m) -> dict:
    if isinstance(m, RationalMatrix):
        entries = [f"{f.numerator}/{f.denominator}" for row in m.to_fractions() for f in row]
        return {"rows": m.rows, "cols": m.cols, "scalar": "rational", "entries": entries}
    arr = _as_complex(m)
    entries = [[float(x.real), float(x.imag)] for x in arr.flat]
    return {"rows": arr.shape[0], "cols": arr.shape[1], "scalar": "complex", "entries": entries}


def matrix_from_json_obj(obj):
    try:
        rows, cols, scalar, entries = obj["rows"], obj["cols"], obj["scalar"], obj["entries"]
    except (TypeError, KeyError) as exc:
        raise InputError(f"matrix object missing field: {exc}") from exc
    if not isinstance(rows, int) or not isinstance(cols, int) or rows < 0 or cols < 0:
        raise InputError("matrix rows/cols must be nonnegative integers")
    if not isinstance(entries, list) or len(entries) != rows * cols:
        raise InputError(f"expected {rows * cols} entries, got {len(entries) if isinstance(entries, list) else 'non-list'}")
    if scalar == "rational":
        fracs = [_as_fraction(e) for e in entries]
        rows_data = [fracs[i * cols : (i + 1) * cols] for i in range(rows)] if cols else [[] for _ in range(rows)]
        return RationalMatrix.from_rows(rows_data) if rows else RationalMatrix.zeros(0, cols)
    if scalar == "complex":
        flat = []
        for e in entries:
            if not (isinstance(e, list) and len(e) == 2):
                raise InputError("complex entries must be [re, im] pairs")
            flat.append(complex(float(e[0]), float(e[1])))
        return np.array(flat, dtype=complex).reshape(rows, cols)
    raise InputError(f"unknown scalar regime {scalar!r}")


def rational_vector_to_json_obj(vec) -> list[str]:
    return [f"{_as_fraction(x).numerator}/{_as_fraction(x).denominator}" for x in vec]


def rational_vector_from_json_obj(obj) -> tuple[Fraction, ...]:
    if not isinstance(obj, list):
        raise InputError("rational vector must be a list")
    return tuple(_as_fraction(x) for x in obj)
