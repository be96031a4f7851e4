"""Union-find over hashable elements, with path compression and union by rank."""

from __future__ import annotations

from collections import defaultdict
from typing import TYPE_CHECKING, Generic, TypeVar

if TYPE_CHECKING:
    from collections.abc import Hashable, Iterable

T = TypeVar("T", bound="Hashable")


class DisjointSet(Generic[T]):
    def __init__(self, elements: Iterable[T] = ()) -> None:
        self._parent: dict[T, T] = {}
        self._rank: dict[T, int] = {}
        self._count = 0
        for element in elements:
            self.add(element)

    def add(self, element: T) -> None:
        """Register ``element`` as a singleton class (no-op if known)."""
        if element in self._parent:
            return
        self._parent[element] = element
        self._rank[element] = 0
        self._count += 1

    def find(self, element: T) -> T:
        """Representative of the class of ``element``."""
        self.add(element)
        root = element
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[element] != root:
            self._parent[element], element = root, self._parent[element]
        return root

    def merge(self, x: T, y: T) -> bool:
        """Join the classes of ``x`` and ``y``; return False if already joined."""
        x_root, y_root = self.find(x), self.find(y)
        if x_root == y_root:
            return False
        if self._rank[x_root] < self._rank[y_root]:
            x_root, y_root = y_root, x_root
        self._parent[y_root] = x_root
        if self._rank[x_root] == self._rank[y_root]:
            self._rank[x_root] += 1
        self._count -= 1
        return True

    @property
    def class_count(self) -> int:
        """Number of disjoint classes."""
        return self._count

    def classes(self) -> list[list[T]]:
        """Classes as lists, in first-insertion order of their members."""
        grouped: dict[T, list[T]] = defaultdict(list)
        for element in self._parent:
            grouped[self.find(element)].append(element)
        return list(grouped.values())
