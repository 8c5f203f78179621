"""Disjoint-set forest with path compression and union by rank."""


class DisjointSet:
    """
    Union-find over the elements 0 .. n-1, each starting in its own set.

    find() compresses the path it walks, so after a call the queried element
    points straight at its root. union() hangs the shallower tree under the
    deeper one, which keeps every tree at most log2(n) + 1 levels tall.
    """

    def __init__(self, n):
        self.parent = list(range(n))
        self.rank = [0] * n
        self._count = n

    def __len__(self):
        return len(self.parent)

    def find(self, element):
        root = element
        parent = self.parent
        while parent[root] != root:
            root = parent[root]
        # Compress
        while parent[element] != root:
            parent[element], element = root, parent[element]
        return root

    def union(self, first, second):
        """Merge the sets of two elements; False when they already share one"""
        root_first = self.find(first)
        root_second = self.find(second)
        if root_first == root_second:
            return False

        if self.rank[root_first] < self.rank[root_second]:
            root_first, root_second = root_second, root_first
        self.parent[root_second] = root_first
        if self.rank[root_first] == self.rank[root_second]:
            self.rank[root_first] += 1

        self._count -= 1
        return True

    def connected(self, first, second):
        return self.find(first) == self.find(second)

    @property
    def component_count(self):
        return self._count

    def components(self):
        """Map of root -> sorted member list"""
        groups = {}
        for element in range(len(self.parent)):
            groups.setdefault(self.find(element), []).append(element)
        return groups
