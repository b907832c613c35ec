"""Fixed-depth prefix tree over geohash-style keys with per-node caches.

Every node caches the records of its subtree, so the bucket of records
around a key is retrieved by walking at most ``key_length`` children and
handing back a cached list: cost is independent of the number of records.
All keys must have the same length, so the tree height equals the key
length (geohash precision plus any prepended parameter characters).

The tree is write-once: build it, then query it.  Deletion and rebalancing
are deliberately unsupported, and the lists returned by queries are the
live caches; treat them as read-only.
"""

from __future__ import annotations

from typing import Any, Callable, Hashable, Iterable

from .geocode import ALPHABET, GeoPoint, haversine_distance

_ALPHABET_SET = frozenset(ALPHABET)

GroupSpec = Any  # group value, predicate callable, or None for "all records"


class KeyLengthMismatch(ValueError):
    """Raised when a key's length differs from the tree's fixed key length."""


class EmptyTreeError(LookupError):
    """Raised when querying a tree that holds no records."""


def _key_text(key: Any) -> str:
    return key if isinstance(key, str) else key.text


def _id_set(exclude: Any) -> frozenset:
    if not exclude:
        return frozenset()
    if isinstance(exclude, str):
        return frozenset((exclude,))
    return frozenset(exclude)


class _Node:
    __slots__ = ("children", "cache", "groups")

    def __init__(self) -> None:
        self.children: dict[str, _Node] = {}
        self.cache: list = []
        self.groups: dict[Hashable, list] = {}


class GeoTree:
    """Prefix tree with cached record lists at every node.

    ``group_key`` optionally labels each record (typically with its listing
    month); nodes then also keep per-label lists so group-restricted
    queries read their candidates in one dictionary lookup.  Records must
    expose ``.id`` (orderable, unique) and ``.point`` (GeoPoint).
    """

    def __init__(
        self,
        key_length: int,
        group_key: Callable[[Any], Hashable] | None = None,
    ) -> None:
        if key_length < 1:
            raise ValueError("key_length must be at least 1")
        self.key_length = key_length
        self.group_key = group_key
        self._root = _Node()
        self._count = 0

    def __len__(self) -> int:
        return self._count

    @property
    def root(self) -> _Node:
        return self._root

    def insert(self, key: Any, record: Any) -> None:
        """Append ``record`` to the cache of every node along ``key``'s path."""
        text = _key_text(key)
        if len(text) != self.key_length:
            raise KeyLengthMismatch(
                f"key {text!r} has length {len(text)}, tree expects {self.key_length}"
            )
        for c in text:  # validate before touching any node
            if c not in _ALPHABET_SET:
                raise ValueError(f"key character {c!r} outside the geohash alphabet")
        label = self.group_key(record) if self.group_key is not None else None
        node = self._root
        node.cache.append(record)
        if self.group_key is not None:
            node.groups.setdefault(label, []).append(record)
        for c in text:
            child = node.children.get(c)
            if child is None:
                child = _Node()
                node.children[c] = child
            child.cache.append(record)
            if self.group_key is not None:
                child.groups.setdefault(label, []).append(record)
            node = child
        self._count += 1

    def _path(self, key: Any) -> list[_Node]:
        """Existing nodes along the key's path; index in the list = depth."""
        text = _key_text(key)
        if len(text) != self.key_length:
            raise KeyLengthMismatch(
                f"key {text!r} has length {len(text)}, tree expects {self.key_length}"
            )
        nodes = [self._root]
        node = self._root
        for c in text:
            node = node.children.get(c)
            if node is None:
                break
            nodes.append(node)
        return nodes

    def scb_query(self, key: Any, min_population: int = 1) -> tuple[list, int]:
        """Return the surrounding common bucket for ``key`` and its depth.

        The bucket is the cache of the deepest node on the key's path whose
        population meets ``min_population``; every record in it shares its
        first ``depth`` characters with the query.  If even the root falls
        short, the root cache is returned at depth 0.
        """
        if min_population < 1:
            raise ValueError("min_population must be at least 1")
        if self._count == 0:
            raise EmptyTreeError("scb_query on an empty tree")
        nodes = self._path(key)
        for depth in range(len(nodes) - 1, -1, -1):
            if len(nodes[depth].cache) >= min_population:
                return nodes[depth].cache, depth
        return self._root.cache, 0

    def _members(self, node: _Node, group: GroupSpec) -> list:
        if group is None:
            return node.cache
        if callable(group):
            return [r for r in node.cache if group(r)]
        if self.group_key is None:
            raise ValueError("tree was built without a group_key")
        return node.groups.get(group, [])

    def nearest_in_group(
        self,
        key: Any,
        point: GeoPoint,
        group: GroupSpec = None,
        *,
        exclude: Any = None,
        min_population: int = 1,
    ) -> Any | None:
        """Nearest record to ``point`` among the query's group bucket.

        Walks to the deepest node on the key's path holding at least
        ``min_population`` records that match ``group`` (a group label, a
        predicate, or None for all records) and are not in ``exclude``;
        within that bucket the record with the smallest great-circle
        distance wins, ties broken by smallest id.  Falls back to the root
        bucket when no node meets the threshold; returns None only when no
        matching record exists at all.
        """
        if min_population < 1:
            raise ValueError("min_population must be at least 1")
        if self._count == 0:
            raise EmptyTreeError("nearest_in_group on an empty tree")
        excluded = _id_set(exclude)
        nodes = self._path(key)
        candidates: list | None = None
        for depth in range(len(nodes) - 1, -1, -1):
            members = self._members(nodes[depth], group)
            if len(members) < min_population:
                continue
            filtered = (
                [r for r in members if r.id not in excluded] if excluded else members
            )
            if len(filtered) >= min_population:
                candidates = filtered
                break
        if candidates is None:
            members = self._members(self._root, group)
            candidates = (
                [r for r in members if r.id not in excluded] if excluded else members
            )
            if not candidates:
                return None
        return min(
            candidates, key=lambda r: (haversine_distance(point, r.point), r.id)
        )

    def walk(self) -> Iterable[tuple[int, _Node]]:
        """Yield ``(depth, node)`` over the whole tree, parents first."""
        stack = [(0, self._root)]
        while stack:
            depth, node = stack.pop()
            yield depth, node
            for child in node.children.values():
                stack.append((depth + 1, child))
