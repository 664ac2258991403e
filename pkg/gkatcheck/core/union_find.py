# core/union_find.py

from collections.abc import Hashable, Iterable


class UnionFind:
    """Union-Find (Disjoint Set Union) with path compression and union by rank.

    Elements are added on first use, so the product walk never has to
    enumerate both state spaces up front.
    """

    def __init__(self, elements: Iterable[Hashable] = ()) -> None:
        self.parent = {}
        self.rank = {}
        for el in elements:
            self.add(el)

    def add(self, el: Hashable) -> None:
        if el not in self.parent:
            self.parent[el] = el
            self.rank[el] = 0

    def find(self, i: Hashable) -> Hashable:
        self.add(i)
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        # Path compression, iterative so long chains cannot hit the recursion limit
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: Hashable, j: Hashable) -> bool:
        """Merge the sets of i and j; False if they were already one set."""
        root_i = self.find(i)
        root_j = self.find(j)

        if root_i == root_j:
            return False

        # Union by rank
        if self.rank[root_i] < self.rank[root_j]:
            self.parent[root_i] = root_j
        elif self.rank[root_i] > self.rank[root_j]:
            self.parent[root_j] = root_i
        else:
            self.parent[root_j] = root_i
            self.rank[root_i] += 1
        return True
