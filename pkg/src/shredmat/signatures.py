"""Weight-window fingerprints for positions and rows.

The discriminating statistics live on a window of column weights around the
empirical mean.  For each window weight k, a position j gets the count of
weight-k shredded columns that carry a 1 at coordinate j, and a shredded row
gets its sub-weight over the positions whose column weight is k.  On any
bundle that really is the shredding of a matrix, the two families of vectors
agree as multisets; matching them is what places rows into positions.
"""

import math
from dataclasses import dataclass

import numpy as np

from .matrix import ShredBundle, _pack, _unpack, popcount


@dataclass(frozen=True)
class Window:
    """Inclusive range [lo, hi] of column weights used for fingerprinting."""

    lo: int
    hi: int

    def __post_init__(self):
        if not 0 <= self.lo <= self.hi:
            raise ValueError("window bounds out of order")

    @property
    def width(self) -> int:
        return self.hi - self.lo + 1

    def weights(self) -> range:
        return range(self.lo, self.hi + 1)


@dataclass(frozen=True)
class WeightPartition:
    """by_weight[w]: ascending shredded-column indices of weight w."""

    by_weight: tuple[np.ndarray, ...]

    def sizes(self) -> list[int]:
        return [len(g) for g in self.by_weight]


@dataclass(frozen=True)
class PositionWeightIndex:
    """by_weight[w]: ascending column positions whose column has weight w."""

    by_weight: tuple[np.ndarray, ...]


def _group_by_weight(weights: np.ndarray, n: int) -> tuple[np.ndarray, ...]:
    return tuple(np.flatnonzero(weights == w) for w in range(n + 1))


def compute_window(bundle: ShredBundle, p: float | None = None) -> Window:
    """Window [floor(n*p), floor(n*p) + floor(sqrt(n*p))] clamped to [0, n].

    By default p is estimated from the bundle as total ones / n^2, which
    keeps the solver free of model parameters; pass ``p`` to override in
    experiments.  With the estimate, n*p = total // n is evaluated in exact
    integer arithmetic (floor(sqrt(x)) == isqrt(floor(x)) for real x >= 0).
    """
    n = bundle.n
    if p is None:
        mean = bundle.total_weight() // n
        lo, width = mean, math.isqrt(mean)
    else:
        if not 0.0 <= p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        lo = math.floor(n * p)
        width = math.floor(math.sqrt(n * p))
    return Window(min(lo, n), min(n, lo + width))


def column_weight_partition(bundle: ShredBundle) -> WeightPartition:
    return WeightPartition(_group_by_weight(bundle.col_weights(), bundle.n))


def position_weight_index(bundle: ShredBundle) -> PositionWeightIndex:
    """Groups positions by the weight of the column that belongs there.

    Column weights are sums over the rows, so they are computable from the
    shredded rows alone; row order is irrelevant.
    """
    position_weights = bundle.rows_dense().sum(axis=0, dtype=np.int64)
    return PositionWeightIndex(_group_by_weight(position_weights, bundle.n))


def _index_masks(index_sets, n: int) -> np.ndarray:
    """Packed bit masks, one per index set, for masked popcounts."""
    dense = np.zeros((len(index_sets), n), dtype=np.uint8)
    for r, idx in enumerate(index_sets):
        dense[r, idx] = 1
    return _pack(dense)


def _masked_subweights(packed: np.ndarray, masks: np.ndarray) -> np.ndarray:
    """subweights[j, k] = popcount(packed[j] & masks[k])."""
    out = np.empty((packed.shape[0], masks.shape[0]), dtype=np.int32)
    for k in range(masks.shape[0]):
        out[:, k] = popcount(packed & masks[k])
    return out


def position_subweight_vectors(
    bundle: ShredBundle, partition: WeightPartition, window: Window
) -> np.ndarray:
    """Row j holds position j's counts over the window's column-weight groups.

    Entry (j, k) counts the shredded columns of weight window.lo+k whose
    coordinate j is 1.  Computed as masked popcounts on the bit-transposed
    column collection.
    """
    cols_by_coord = _pack(bundle.cols_dense().T)  # coordinate-major bit rows
    masks = _index_masks([partition.by_weight[k] for k in window.weights()], bundle.n)
    return _masked_subweights(cols_by_coord, masks)


def row_signatures(
    bundle: ShredBundle, pos_index: PositionWeightIndex, window: Window
) -> np.ndarray:
    """Row j holds shredded row j's sub-weights over the position groups."""
    masks = _index_masks([pos_index.by_weight[k] for k in window.weights()], bundle.n)
    return _masked_subweights(bundle.row_packed, masks)
