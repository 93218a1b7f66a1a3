# ComplexTrees/connectivity/unionfind.py

from typing import Dict, Iterable, List, Tuple

import numpy as np


class UnionFind:
    """
    Union-Find with path halving and union by rank over 0..n-1.
    """

    def __init__(self, n: int):
        self.size = n
        self.parent = list(range(n))
        self.rank = [0] * n

    def count(self) -> int:
        """Number of disjoint sets."""
        return self.size

    def find(self, x: int) -> int:
        i = x
        while i != self.parent[i]:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def linked(self, x: int, y: int) -> bool:
        return self.find(x) == self.find(y)

    def union(self, x: int, y: int) -> None:
        i = self.find(x)
        j = self.find(y)
        if i == j:
            return
        if self.rank[i] < self.rank[j]:
            self.parent[i] = j
        elif self.rank[i] > self.rank[j]:
            self.parent[j] = i
        else:
            self.parent[j] = i
            self.rank[i] += 1
        self.size -= 1

    def union_pairs(self, pairs: Iterable[Tuple[int, int]]) -> None:
        for x, y in pairs:
            self.union(int(x), int(y))

    def groups(self) -> List[List[int]]:
        """Members of every set, sets ordered by their smallest member."""
        buckets: Dict[int, List[int]] = {}
        for x in range(len(self.parent)):
            buckets.setdefault(self.find(x), []).append(x)
        return sorted(buckets.values(), key=lambda g: g[0])

    def labels(self) -> np.ndarray:
        """Component id per element, numbered by first appearance."""
        out = np.empty(len(self.parent), dtype=np.int64)
        for k, members in enumerate(self.groups()):
            out[members] = k
        return out


def connected_labels(n: int, first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """Component labels for n nodes and the edge list (first[k], second[k]).

    Vectorized hook-and-compress: every label ends as the smallest node
    index of its component.
    """
    labels = np.arange(n, dtype=np.int64)
    first = np.asarray(first, dtype=np.int64)
    second = np.asarray(second, dtype=np.int64)
    while True:
        a, b = labels[first], labels[second]
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        pending = lo != hi
        if not pending.any():
            return labels
        np.minimum.at(labels, hi[pending], lo[pending])
        while True:
            jumped = labels[labels]
            if np.array_equal(jumped, labels):
                break
            labels = jumped
