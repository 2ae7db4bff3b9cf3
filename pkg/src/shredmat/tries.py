"""Tries for fingerprint grouping and column-multiset bookkeeping.

SignatureTrie maps equal integer vectors to a shared leaf, grouping the
positions (and later the rows) that carry the same fingerprint.  Child maps
are sparse dicts: symbols range over 0..n but few occur, so memory stays
proportional to the inserted paths.

ColumnTrie stores the column collection as a path-compressed binary trie
keyed on each column read top to bottom.  Path compression keeps the node
count O(#columns) instead of O(n^2) while preserving the bit-level trie
semantics: one leaf per distinct column, with its multiplicity and the
indices that reached it.  ``multiset_equal`` answers "same columns with the
same multiplicities" by decrement-counting and restores its counters
afterwards, so one trie serves many queries.

Lookups on a completed trie are concurrency-safe; ``multiset_equal`` mutates
counters and needs exclusive access per query.
"""

from dataclasses import dataclass, field

import numpy as np


# -- integer-alphabet trie over fingerprint vectors ---------------------------


@dataclass
class SignatureLeaf:
    """Positions (and matched rows) whose vector spells the leaf's path."""

    positions: list[int] = field(default_factory=list)
    rows: list[int] = field(default_factory=list)


class SignatureTrie:
    """Trie over equal-length integer vectors; leaves partition the owners."""

    def __init__(self, vectors: np.ndarray):
        """Build from an (n, width) array; row j is position j's vector."""
        self.width = int(vectors.shape[1])
        self._root: dict = {}
        self.leaves: list[SignatureLeaf] = []
        for j, vec in enumerate(np.asarray(vectors).tolist()):
            node = self._root
            for sym in vec[:-1]:
                node = node.setdefault(sym, {})
            leaf = node.get(vec[-1])
            if leaf is None:
                leaf = SignatureLeaf()
                node[vec[-1]] = leaf
                self.leaves.append(leaf)
            leaf.positions.append(j)

    @property
    def n_leaves(self) -> int:
        return len(self.leaves)

    def all_singleton(self) -> bool:
        return all(len(leaf.positions) == 1 for leaf in self.leaves)

    def lookup(self, vector) -> SignatureLeaf | None:
        """Leaf spelled by ``vector``, or None if no such path exists."""
        seq = [int(v) for v in vector]
        if len(seq) != self.width:
            raise ValueError("vector length does not match trie key length")
        node = self._root
        for sym in seq[:-1]:
            node = node.get(sym)
            if node is None:
                return None
        leaf = node.get(seq[-1])
        return leaf if isinstance(leaf, SignatureLeaf) else None


# -- path-compressed binary trie over columns ---------------------------------


class _ColumnNode:
    """Edge fragment (frag of flen bits, LSB first) plus children or a leaf."""

    __slots__ = ("frag", "flen", "children", "indices", "count", "remaining")

    def __init__(self, frag: int, flen: int):
        self.frag = frag
        self.flen = flen
        self.children: dict[int, _ColumnNode] = {}
        self.indices: list[int] = []
        self.count = 0
        self.remaining = 0


class ColumnTrie:
    """Binary trie over length-n columns with multiplicity-counting leaves."""

    def __init__(self, n: int):
        self.n = n
        self._root = _ColumnNode(0, 0)
        self.leaves: list[_ColumnNode] = []
        self.size = 0

    @classmethod
    def from_keys(cls, n: int, keys: list[int]) -> "ColumnTrie":
        """Build from columns encoded as ints (bit r = entry in row r)."""
        trie = cls(n)
        for key in keys:
            trie.insert(key)
        return trie

    @classmethod
    def from_vectors(cls, cols) -> "ColumnTrie":
        vecs = list(cols)
        lengths = {v.n for v in vecs}
        if len(lengths) != 1:
            raise ValueError("columns must share one length")
        return cls.from_keys(lengths.pop(), [v.as_int() for v in vecs])

    def insert(self, key: int) -> None:
        node, depth = self._root, 0
        while True:
            flen = node.flen
            if flen:
                seg = (key >> depth) & ((1 << flen) - 1)
                diff = seg ^ node.frag
                if diff:
                    self._split(node, diff, key, depth)
                    break
                depth += flen
            if depth == self.n:  # keys share one length, so leaves sit at depth n
                if node.count == 0:
                    self.leaves.append(node)
                node.count += 1
                node.indices.append(self.size)
                break
            branch = (key >> depth) & 1
            child = node.children.get(branch)
            if child is None:
                child = _ColumnNode(key >> (depth + 1), self.n - depth - 1)
                node.children[branch] = child
                child.count = 1
                child.indices.append(self.size)
                self.leaves.append(child)
                break
            node, depth = child, depth + 1
        self.size += 1

    def _split(self, node: _ColumnNode, diff: int, key: int, depth: int) -> None:
        """Split ``node``'s edge at the first mismatching bit of ``diff``."""
        t = (diff & -diff).bit_length() - 1
        old = _ColumnNode(node.frag >> (t + 1), node.flen - t - 1)
        old.children = node.children
        old.indices = node.indices
        old.count = node.count
        if old.count and old in ():  # pragma: no cover - placeholder never true
            pass
        if node.count:  # node was a leaf; leaf status moves to ``old``
            self.leaves[self.leaves.index(node)] = old
        new = _ColumnNode(key >> (depth + t + 1), self.n - depth - t - 1)
        new.count = 1
        new.indices = [self.size]
        self.leaves.append(new)
        node.frag &= (1 << t) - 1
        node.flen = t
        node.children = {(old.frag if False else (node.frag >> t)) & 1: old}  # replaced below
        node.children = {
            ((diff >> t) & 1) ^ ((key >> (depth + t)) & 1): old,
            (key >> (depth + t)) & 1: new,
        }
        node.indices = []
        node.count = 0

    def lookup(self, key: int) -> _ColumnNode | None:
        node, depth = self._root, 0
        while True:
            flen = node.flen
            if flen:
                seg = (key >> depth) & ((1 << flen) - 1)
                if seg != node.frag:
                    return None
                depth += flen
            if depth == self.n:
                return node if node.count else None
            node = node.children.get((key >> depth) & 1)
            if node is None:
                return None
            depth += 1

    @property
    def n_leaves(self) -> int:
        return len(self.leaves)

    def all_distinct(self) -> bool:
        return self.n_leaves == self.size and all(l.count == 1 for l in self.leaves)

    def has_duplicates(self) -> bool:
        return any(leaf.count > 1 for leaf in self.leaves)

    def duplicate_groups(self) -> list[tuple[int, ...]]:
        """Index groups of equal columns (size >= 2), ordered by first index."""
        groups = [tuple(leaf.indices) for leaf in self.leaves if leaf.count > 1]
        return sorted(groups, key=lambda g: g[0])

    def multiset_equal(self, keys: list[int]) -> bool:
        """True iff ``keys`` equals the stored multiset; counters restored."""
        if len(keys) != self.size:
            return False
        touched: list[_ColumnNode] = []
        ok = True
        for key in keys:
            leaf = self.lookup(key)
            if leaf is None:
                ok = False
                break
            if leaf.remaining == 0:
                leaf.remaining = leaf.count
                touched.append(leaf)
            leaf.remaining -= 1
            if leaf.remaining < 0:
                ok = False
                break
        for leaf in touched:
            leaf.remaining = 0
        return ok
