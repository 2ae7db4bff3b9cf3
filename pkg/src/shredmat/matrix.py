"""Binary matrices, their shredded row/column bundles, and permutations.

Conventions used throughout the package:

* Bits are packed little-first into uint8 words (``np.packbits`` with
  ``bitorder="little"``); bit ``j`` of a vector lives in byte ``j // 8``.
  Weights and sub-weights are population counts on the packed words.
* Indices are 0-based internally.  File formats, printed permutations and
  JSON are 1-based.
* A permutation is stored in one-line form as ``map0``, where ``map0[j]`` is
  the source index placed at slot ``j``.  For a solution pair (sigma, tau)
  this means: stacking shredded rows ``rho[sigma[0]], ..., rho[sigma[n-1]]``
  top to bottom equals placing shredded columns ``gamma[tau[0]], ...,
  gamma[tau[n-1]]`` left to right.
* All values are immutable after construction and safe to share across
  threads.

File formats (the package's on-disk interfaces):

* Matrix file: first line the decimal side length ``n``, then ``n`` lines of
  ``n`` characters from ``{0,1}``.
* Bundle file: line ``n=<int>``, line ``ROWS``, ``n`` rows as 0/1 strings,
  line ``COLS``, ``n`` columns as 0/1 strings written top-to-bottom.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .rng import SplitMix64, bernoulli_bits, mix64


def _pack(dense: np.ndarray) -> np.ndarray:
    return np.packbits(np.ascontiguousarray(dense, dtype=np.uint8), axis=-1, bitorder="little")


def _unpack(packed: np.ndarray, n: int) -> np.ndarray:
    return np.unpackbits(packed, axis=-1, count=n, bitorder="little")


def popcount(packed: np.ndarray) -> np.ndarray:
    """Per-row population count of a packed bit array."""
    return np.bitwise_count(packed).sum(axis=-1, dtype=np.int64)


def packed_to_ints(packed: np.ndarray) -> list[int]:
    """Each packed row as an arbitrary-precision int (bit j = coordinate j)."""
    buf = np.ascontiguousarray(packed)
    return [int.from_bytes(row.tobytes(), "little") for row in buf]


@dataclass(frozen=True, eq=False)
class BitVector:
    """A length-n binary vector with a row/column orientation tag."""

    n: int
    packed: np.ndarray
    orientation: str = "row"  # "row" | "col"

    @classmethod
    def from01(cls, s: str, orientation: str = "row") -> "BitVector":
        bits = np.frombuffer(s.encode(), dtype=np.uint8) - ord("0")
        if bits.size == 0 or np.any(bits > 1):
            raise ValueError(f"not a 0/1 string: {s!r}")
        return cls(len(s), _pack(bits), orientation)

    @classmethod
    def from_dense(cls, bits, orientation: str = "row") -> "BitVector":
        arr = np.asarray(bits, dtype=np.uint8)
        return cls(arr.size, _pack(arr), orientation)

    def dense(self) -> np.ndarray:
        return _unpack(self.packed, self.n)

    def to01(self) -> str:
        return "".join("01"[b] for b in self.dense())

    @property
    def weight(self) -> int:
        return int(popcount(self.packed))

    def as_int(self) -> int:
        return int.from_bytes(np.ascontiguousarray(self.packed).tobytes(), "little")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitVector)
            and self.n == other.n
            and np.array_equal(self.packed, other.packed)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.as_int()))

    def __repr__(self) -> str:
        return f"BitVector({self.to01()!r}, {self.orientation})"


@dataclass(frozen=True, eq=False)
class BitMatrix:
    """Dense n-by-n binary matrix, rows packed into uint8 words."""

    n: int
    row_packed: np.ndarray  # shape (n, ceil(n/8))

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("matrix side must be >= 1")
        if self.row_packed.shape != (self.n, (self.n + 7) // 8):
            raise ValueError("packed rows have the wrong shape")

    @classmethod
    def from_dense(cls, arr) -> "BitMatrix":
        a = np.asarray(arr, dtype=np.uint8)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("matrix must be square")
        if np.any(a > 1):
            raise ValueError("entries must be 0 or 1")
        return cls(a.shape[0], _pack(a))

    @classmethod
    def from_lines(cls, lines: list[str]) -> "BitMatrix":
        n = len(lines)
        if any(len(s) != n for s in lines):
            raise ValueError("matrix lines must form a square")
        return cls.from_dense([[int(c) for c in s] for s in lines])

    def dense(self) -> np.ndarray:
        return _unpack(self.row_packed, self.n)

    def to_lines(self) -> list[str]:
        return ["".join("01"[b] for b in row) for row in self.dense()]

    def row(self, i: int) -> BitVector:
        return BitVector(self.n, self.row_packed[i].copy(), "row")

    def col(self, j: int) -> BitVector:
        return BitVector.from_dense(self.dense()[:, j], "col")

    def col_packed(self) -> np.ndarray:
        """Columns packed top-to-bottom: row j of the result is column j."""
        return _pack(self.dense().T)

    def row_weights(self) -> np.ndarray:
        return popcount(self.row_packed)

    def col_weights(self) -> np.ndarray:
        return self.dense().sum(axis=0, dtype=np.int64)

    def total_weight(self) -> int:
        return int(self.row_weights().sum())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.n == other.n
            and np.array_equal(self.row_packed, other.row_packed)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.row_packed.tobytes()))


@dataclass(frozen=True)
class Permutation:
    """One-line permutation: ``map0[j]`` is the 0-based source placed at j."""

    map0: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.map0) != list(range(len(self.map0))):
            raise ValueError("not a bijection on 0..n-1")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_one_based(cls, values) -> "Permutation":
        return cls(tuple(int(v) - 1 for v in values))

    @classmethod
    def random(cls, n: int, rng: SplitMix64) -> "Permutation":
        return cls(rng.permutation(n))

    @property
    def n(self) -> int:
        return len(self.map0)

    def one_based(self) -> list[int]:
        return [v + 1 for v in self.map0]

    def __call__(self, j: int) -> int:
        return self.map0[j]

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for j, v in enumerate(self.map0):
            inv[v] = j
        return Permutation(tuple(inv))

    def compose(self, other: "Permutation") -> "Permutation":
        """(self o other)(j) = self(other(j))."""
        if self.n != other.n:
            raise ValueError("size mismatch")
        return Permutation(tuple(self.map0[v] for v in other.map0))

    def is_identity(self) -> bool:
        return all(v == j for j, v in enumerate(self.map0))


@dataclass(frozen=True, eq=False)
class ShredBundle:
    """Unordered row and column multisets of a matrix.

    ``row_packed[i]`` is shredded row rho_i over the n column coordinates;
    ``col_packed[i]`` is shredded column gamma_i over the n row coordinates,
    top to bottom.  Construction checks shapes only; whether the bundle is
    actually the shredding of some matrix is decided by the solver, which
    raises InconsistentBundle when it is not.
    """

    n: int
    row_packed: np.ndarray
    col_packed: np.ndarray

    def __post_init__(self):
        w = (self.n + 7) // 8
        if self.row_packed.shape != (self.n, w) or self.col_packed.shape != (self.n, w):
            raise ValueError("bundle arrays have the wrong shape")

    @classmethod
    def from01(cls, rows: list[str], cols: list[str]) -> "ShredBundle":
        n = len(rows)
        if len(cols) != n or any(len(s) != n for s in rows + cols):
            raise ValueError("bundle must hold n rows and n columns of length n")
        rp = _pack(np.array([[int(c) for c in s] for s in rows], dtype=np.uint8))
        cp = _pack(np.array([[int(c) for c in s] for s in cols], dtype=np.uint8))
        return cls(n, rp, cp)

    @classmethod
    def from_matrix(cls, m: BitMatrix) -> "ShredBundle":
        """The unshredded bundle: rows and columns in their original order."""
        return cls(m.n, m.row_packed.copy(), m.col_packed())

    def rows(self) -> list[BitVector]:
        return [BitVector(self.n, self.row_packed[i].copy(), "row") for i in range(self.n)]

    def cols(self) -> list[BitVector]:
        return [BitVector(self.n, self.col_packed[i].copy(), "col") for i in range(self.n)]

    def rows_dense(self) -> np.ndarray:
        return _unpack(self.row_packed, self.n)

    def cols_dense(self) -> np.ndarray:
        return _unpack(self.col_packed, self.n)

    def row_weights(self) -> np.ndarray:
        return popcount(self.row_packed)

    def col_weights(self) -> np.ndarray:
        return popcount(self.col_packed)

    def total_weight(self) -> int:
        """Total 1-count, taken from the column side."""
        return int(self.col_weights().sum())


@dataclass(frozen=True)
class GroundTruth:
    """The permutations a shred actually applied, for round-trip tests."""

    matrix: BitMatrix
    row_perm: Permutation
    col_perm: Permutation


def gen_random(n: int, p: float, seed: int) -> BitMatrix:
    """Random n-by-n matrix with iid Bernoulli(p) entries.

    Entry (i, j) consumes draw i*n+j of the SplitMix64 stream for ``seed``,
    so equal arguments give bit-identical matrices on every run.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    bits = bernoulli_bits(n * n, p, seed).reshape(n, n)
    return BitMatrix(n, _pack(bits))


def apply_shred(m: BitMatrix, row_perm: Permutation, col_perm: Permutation) -> ShredBundle:
    """Bundle whose ground truth is exactly (row_perm, col_perm).

    Defined so that stacking ``rho[row_perm[j]]`` recovers row j of ``m`` and
    placing ``gamma[col_perm[j]]`` recovers column j.
    """
    if row_perm.n != m.n or col_perm.n != m.n:
        raise ValueError("permutation size mismatch")
    rows = m.row_packed[list(row_perm.inverse().map0)].copy()
    cols = m.col_packed()[list(col_perm.inverse().map0)].copy()
    return ShredBundle(m.n, rows, cols)


def shred(m: BitMatrix, seed: int) -> tuple[ShredBundle, GroundTruth]:
    """Shred under two independent uniform permutations drawn from ``seed``."""
    rng = SplitMix64(seed)
    row_perm = Permutation.random(m.n, rng)
    col_perm = Permutation.random(m.n, rng)
    return apply_shred(m, row_perm, col_perm), GroundTruth(m, row_perm, col_perm)


def permute(m: BitMatrix, sigma: Permutation, tau: Permutation) -> BitMatrix:
    """Matrix with entry (i, j) equal to m(sigma(i), tau(j))."""
    if sigma.n != m.n or tau.n != m.n:
        raise ValueError("permutation size mismatch")
    dense = m.dense()[list(sigma.map0)][:, list(tau.map0)]
    return BitMatrix(m.n, _pack(dense))


def verify_solution(bundle: ShredBundle, sigma: Permutation, tau: Permutation) -> bool:
    """True iff stacking rows by sigma equals placing columns by tau."""
    if sigma.n != bundle.n or tau.n != bundle.n:
        raise ValueError("permutation size mismatch")
    by_rows = bundle.rows_dense()[list(sigma.map0)]
    by_cols = bundle.cols_dense()[list(tau.map0)].T
    return bool(np.array_equal(by_rows, by_cols))


# -- file formats -------------------------------------------------------------


def write_matrix(m: BitMatrix, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{m.n}\n")
        for line in m.to_lines():
            fh.write(line + "\n")


def read_matrix(path) -> BitMatrix:
    with open(path) as fh:
        lines = [s.strip() for s in fh if s.strip()]
    if not lines:
        raise ValueError("empty matrix file")
    n = int(lines[0])
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} matrix lines, found {len(lines) - 1}")
    return BitMatrix.from_lines(lines[1:])


def write_bundle(bundle: ShredBundle, path) -> None:
    rows = _unpack(bundle.row_packed, bundle.n)
    cols = _unpack(bundle.col_packed, bundle.n)
    with open(path, "w") as fh:
        fh.write(f"n={bundle.n}\nROWS\n")
        for r in rows:
            fh.write("".join("01"[b] for b in r) + "\n")
        fh.write("COLS\n")
        for c in cols:
            fh.write("".join("01"[b] for b in c) + "\n")


def read_bundle(path) -> ShredBundle:
    with open(path) as fh:
        lines = [s.strip() for s in fh if s.strip()]
    if not lines or not lines[0].startswith("n="):
        raise ValueError("bundle file must start with n=<int>")
    n = int(lines[0][2:])
    if len(lines) != 2 * n + 3 or lines[1] != "ROWS" or lines[n + 2] != "COLS":
        raise ValueError("malformed bundle file")
    return ShredBundle.from01(lines[2 : n + 2], lines[n + 3 :])


def derive_shred_seed(seed: int) -> int:
    """Documented derivation of the shred stream from a trial seed."""
    return mix64(seed)
