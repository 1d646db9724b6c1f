"""Tree-shaped reference ontologies.

A :class:`Taxonomy` is an immutable rooted tree of concept ids linked by ISA
edges.  Classification schemes that allow multiple parents (ACM-CCS) are
turned into trees with :func:`treeify_dag`, which creates one concept per
distinct path from a node up to a root.

Edge-list file format (UTF-8)::

    # comment
    <child_id><TAB><parent_id>
    <root_id><TAB>-
"""

from __future__ import annotations

import os
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import CycleError, ParseError, StructureError, UnknownConcept

ROOT_TOKEN = "-"


def _read_edge_lines(path: str | os.PathLike) -> list[tuple[int, str, str | None]]:
    records = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError(
                    f"line {lineno}: expected '<child>\\t<parent>', got {line!r}",
                    entity=f"line {lineno}",
                )
            child, parent = parts
            if not child or not parent:
                raise ParseError(f"line {lineno}: empty concept id", entity=f"line {lineno}")
            records.append((lineno, child, None if parent == ROOT_TOKEN else parent))
    return records


class Taxonomy:
    """Immutable rooted tree of concepts.

    Concepts are addressed by id from the public API; internally each concept
    also has a dense integer index (its position in :attr:`ids`), which the
    vectorised code paths use.
    """

    def __init__(self, edges: Iterable[tuple[str, str | None]]):
        ids: list[str] = []
        parent_of: dict[str, str | None] = {}
        for child, parent in edges:
            if child in parent_of:
                raise StructureError(f"duplicate concept id {child!r}", entity=child)
            parent_of[child] = parent
            ids.append(child)
        if not ids:
            raise StructureError("taxonomy has no concepts")

        roots = [c for c in ids if parent_of[c] is None]
        if len(roots) != 1:
            raise StructureError(
                f"expected exactly one root, found {len(roots)}: {roots[:5]}",
                entity=roots[1] if len(roots) > 1 else None,
            )
        for c in ids:
            p = parent_of[c]
            if p is not None and p not in parent_of:
                raise StructureError(f"concept {c!r} has undeclared parent {p!r}", entity=p)

        self._ids = tuple(ids)
        self._index = {c: i for i, c in enumerate(ids)}
        self._root = roots[0]
        n = len(ids)
        parent = np.full(n, -1, dtype=np.int64)
        children: list[list[int]] = [[] for _ in range(n)]
        for i, c in enumerate(ids):
            p = parent_of[c]
            if p is not None:
                parent[i] = self._index[p]
                children[parent[i]].append(i)
        self._parent = parent
        self._children = tuple(tuple(ch) for ch in children)

        # preorder walk from the root; anything unvisited sits on a cycle
        depth = np.full(n, -1, dtype=np.int64)
        tin = np.zeros(n, dtype=np.int64)
        order = []
        r = self._index[self._root]
        depth[r] = 0
        stack = [r]
        while stack:
            i = stack.pop()
            tin[i] = len(order)
            order.append(i)
            for ch in reversed(self._children[i]):
                depth[ch] = depth[i] + 1
                stack.append(ch)
        if len(order) != n:
            stuck = next(ids[i] for i in range(n) if depth[i] < 0)
            raise CycleError(f"concept {stuck!r} is not reachable from the root (cycle)", entity=stuck)
        size = np.ones(n, dtype=np.int64)
        for i in reversed(order):
            if parent[i] >= 0:
                size[parent[i]] += size[i]
        self._depth = depth
        self._tin = tin
        self._size = size
        self._preorder = np.asarray(order, dtype=np.int64)
        for arr in (parent, depth, tin, size, self._preorder):
            arr.setflags(write=False)

    # -- basic accessors ---------------------------------------------------

    @property
    def ids(self) -> tuple[str, ...]:
        return self._ids

    @property
    def root(self) -> str:
        return self._root

    @property
    def parent_index(self) -> np.ndarray:
        return self._parent

    @property
    def depth_array(self) -> np.ndarray:
        """Edge-counted depth of every concept, by index."""
        return self._depth

    @property
    def preorder(self) -> np.ndarray:
        return self._preorder

    @property
    def descendant_counts(self) -> np.ndarray:
        return self._size - 1

    def __len__(self) -> int:
        return len(self._ids)

    def __contains__(self, c: object) -> bool:
        return c in self._index

    def __iter__(self):
        return iter(self._ids)

    def __repr__(self) -> str:
        return f"Taxonomy({len(self)} concepts, root={self._root!r})"

    def index(self, c: str) -> int:
        try:
            return self._index[c]
        except KeyError:
            raise UnknownConcept(f"unknown concept {c!r}", entity=c) from None

    def parent(self, c: str) -> str | None:
        p = self._parent[self.index(c)]
        return None if p < 0 else self._ids[p]

    def children(self, c: str) -> tuple[str, ...]:
        return tuple(self._ids[i] for i in self._children[self.index(c)])

    def children_index(self, i: int) -> tuple[int, ...]:
        return self._children[i]

    def edges(self) -> list[tuple[str, str | None]]:
        return [(c, self.parent(c)) for c in self._ids]

    # -- structural queries ------------------------------------------------

    def descendants(self, c: str) -> set[str]:
        i = self.index(c)
        start = self._tin[i]
        return {self._ids[j] for j in self._preorder[start + 1 : start + self._size[i]]}

    def is_ancestor_or_self(self, a: str, c: str) -> bool:
        ia, ic = self.index(a), self.index(c)
        return self._tin[ia] <= self._tin[ic] < self._tin[ia] + self._size[ia]

    def depth_edges(self, c: str) -> int:
        return int(self._depth[self.index(c)])

    def depth_nodes(self, c: str) -> int:
        return int(self._depth[self.index(c)]) + 1

    def max_depth_edges(self) -> int:
        return int(self._depth.max())

    def lcs_index(self, i: int, j: int) -> int:
        depth, parent = self._depth, self._parent
        while depth[i] > depth[j]:
            i = parent[i]
        while depth[j] > depth[i]:
            j = parent[j]
        while i != j:
            i, j = parent[i], parent[j]
        return int(i)

    def lcs(self, c1: str, c2: str) -> str:
        """Least common subsumer: deepest concept subsuming both arguments."""
        return self._ids[self.lcs_index(self.index(c1), self.index(c2))]

    def path_length_edges(self, c1: str, c2: str) -> int:
        i, j = self.index(c1), self.index(c2)
        k = self.lcs_index(i, j)
        return int(self._depth[i] + self._depth[j] - 2 * self._depth[k])

    @cached_property
    def _ancestor_table(self) -> np.ndarray:
        # table[i, d] = ancestor of concept i at edge-depth d, or -1 below i's depth
        n, dmax = len(self), self.max_depth_edges()
        table = np.full((n, dmax + 1), -1, dtype=np.int64)
        for i in self._preorder:
            p = self._parent[i]
            if p >= 0:
                table[i, : self._depth[i]] = table[p, : self._depth[i]]
            table[i, self._depth[i]] = i
        table.setflags(write=False)
        return table

    def lcs_matrix(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        """Indices of lcs(rows[a], cols[b]) for every (a, b), vectorised."""
        table = self._ancestor_table
        ra = table[np.asarray(rows, dtype=np.int64)]
        cb = table[np.asarray(cols, dtype=np.int64)]
        # depth 0 is always the root, so at least one level matches
        same = ra[:, None, :] == cb[None, :, :]
        same &= ra[:, None, :] >= 0
        lcs_depth = same.sum(axis=2) - 1
        return ra[np.arange(len(ra))[:, None], lcs_depth]

    # -- persistence -------------------------------------------------------

    def dumps(self) -> str:
        lines = []
        for c, p in self.edges():
            lines.append(f"{c}\t{ROOT_TOKEN if p is None else p}\n")
        return "".join(lines)


def load_taxonomy(path: str | os.PathLike) -> Taxonomy:
    """Read a taxonomy from a TAB-separated edge-list file."""
    records = _read_edge_lines(path)
    if not records:
        raise ParseError(f"{path}: no concepts")
    return Taxonomy((child, parent) for _, child, parent in records)


def save_taxonomy(t: Taxonomy, path: str | os.PathLike) -> None:
    Path(path).write_text(t.dumps(), encoding="utf-8")


# -- DAG classification schemes ---------------------------------------------

@dataclass(frozen=True)
class DagScheme:
    """Directed acyclic classification scheme; nodes may have many parents."""

    parents: Mapping[str, frozenset[str]]
    nodes: frozenset[str] = field(init=False)

    def __post_init__(self):
        nodes = set(self.parents)
        for ps in self.parents.values():
            nodes |= ps
        object.__setattr__(self, "nodes", frozenset(nodes))

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str | None]]) -> "DagScheme":
        parents: dict[str, set[str]] = {}
        for child, parent in edges:
            ps = parents.setdefault(child, set())
            if parent is not None:
                ps.add(parent)
        return cls({c: frozenset(ps) for c, ps in parents.items()})

    @property
    def roots(self) -> frozenset[str]:
        return frozenset(n for n in self.nodes if not self.parents.get(n))


def load_dag(path: str | os.PathLike) -> DagScheme:
    """Read a DAG in the taxonomy edge-list format, repeated children allowed."""
    records = _read_edge_lines(path)
    if not records:
        raise ParseError(f"{path}: no nodes")
    return DagScheme.from_edges((child, parent) for _, child, parent in records)


def _root_paths(d: DagScheme) -> dict[str, list[tuple[str, ...]]]:
    """All paths node -> ... -> root for every node, leaf-most label first."""
    memo: dict[str, list[tuple[str, ...]]] = {}
    on_stack: set[str] = set()

    def visit(node: str) -> list[tuple[str, ...]]:
        if node in memo:
            return memo[node]
        if node in on_stack:
            raise CycleError(f"cycle through node {node!r}", entity=node)
        on_stack.add(node)
        ps = sorted(d.parents.get(node, ()))
        if not ps:
            paths = [(node,)]
        else:
            paths = [(node,) + tail for p in ps for tail in visit(p)]
        on_stack.discard(node)
        memo[node] = paths
        return paths

    for n in sorted(d.nodes):
        visit(n)
    return memo


def treeify_dag(d: DagScheme, separator: str = "_", root_label: str = "owl:Thing") -> Taxonomy:
    """Expand a DAG into a tree with one concept per node-to-root path.

    The concept for path ``(x, p, ..., r)`` is named
    ``x<sep>p<sep>...<sep>r<sep><root_label>`` and its parent is the concept
    for ``(p, ..., r)``; single-label paths hang off the synthetic root.
    """
    paths = _root_paths(d)
    all_paths = {p for ps in paths.values() for p in ps}

    def name(path: tuple[str, ...]) -> str:
        return separator.join(path) + separator + root_label

    edges = [(root_label, None)]
    for path in sorted(all_paths, key=name):
        parent = name(path[1:]) if len(path) > 1 else root_label
        edges.append((name(path), parent))
    return Taxonomy(edges)
