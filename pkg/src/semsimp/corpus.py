"""Annotated resources and the extensional statistics computed from them.

Corpus files are JSON Lines, one resource per line::

    {"id": "r1", "annotations": ["Worker", "Student"], "meta": {"year": "1991"}}
"""

from __future__ import annotations

import json
import os
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (
    DuplicateConcept,
    DuplicateResourceId,
    EmptyCorpus,
    EmptyVector,
    ParseError,
    UnknownConcept,
    UnknownResource,
)
from .taxonomy import Taxonomy

AnnotationVector = tuple[str, ...]


def check_vector(t: Taxonomy, concepts: Sequence[str], owner: str | None = None) -> AnnotationVector:
    """Validate an annotation vector against ``t`` and return it as a tuple."""
    where = f" in resource {owner!r}" if owner is not None else ""
    if len(concepts) == 0:
        raise EmptyVector(f"empty annotation vector{where}", entity=owner)
    seen = set()
    for c in concepts:
        if c not in t:
            raise UnknownConcept(f"unknown concept {c!r}{where}", entity=c)
        if c in seen:
            raise DuplicateConcept(f"concept {c!r} repeated{where}", entity=c)
        seen.add(c)
    return tuple(concepts)


@dataclass(frozen=True)
class Resource:
    id: str
    av: AnnotationVector
    meta: Mapping[str, str] = field(default_factory=dict)


class Corpus:
    """Immutable collection of annotated resources bound to one taxonomy."""

    def __init__(self, resources: Iterable[Resource], taxonomy: Taxonomy):
        self.taxonomy = taxonomy
        res = []
        index = {}
        for r in resources:
            if r.id in index:
                raise DuplicateResourceId(f"duplicate resource id {r.id!r}", entity=r.id)
            check_vector(taxonomy, r.av, owner=r.id)
            index[r.id] = len(res)
            res.append(r)
        self._resources = tuple(res)
        self._index = index

    @property
    def resources(self) -> tuple[Resource, ...]:
        return self._resources

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(r.id for r in self._resources)

    def __len__(self) -> int:
        return len(self._resources)

    def __iter__(self):
        return iter(self._resources)

    def __getitem__(self, rid: str) -> Resource:
        try:
            return self._resources[self._index[rid]]
        except KeyError:
            raise UnknownResource(f"unknown resource {rid!r}", entity=rid) from None

    def position(self, rid: str) -> int:
        try:
            return self._index[rid]
        except KeyError:
            raise UnknownResource(f"unknown resource {rid!r}", entity=rid) from None

    # -- extensional statistics (computed once) ----------------------------

    @cached_property
    def _stats(self) -> tuple[np.ndarray, np.ndarray, int]:
        t = self.taxonomy
        parent = t.parent_index
        n_plus = np.zeros(len(t), dtype=np.int64)
        av_plus = np.zeros(len(t), dtype=np.int64)
        total = 0
        for r in self._resources:
            marked = set()
            for c in r.av:
                i = t.index(c)
                n_plus[i] += 1
                total += 1
                while i >= 0 and i not in marked:
                    marked.add(i)
                    i = parent[i]
            av_plus[list(marked)] += 1
        # push raw occurrence counts up the tree (children before parents)
        for i in t.preorder[::-1]:
            p = parent[i]
            if p >= 0:
                n_plus[p] += n_plus[i]
        n_plus.setflags(write=False)
        av_plus.setflags(write=False)
        return n_plus, av_plus, total

    @property
    def occurrences_plus_array(self) -> np.ndarray:
        return self._stats[0]

    @property
    def vectors_containing_plus_array(self) -> np.ndarray:
        return self._stats[1]

    @property
    def total_occurrences(self) -> int:
        """N: total number of concept occurrences over all vectors."""
        return self._stats[2]

    def occurrences_plus(self, c: str) -> int:
        """n(c+): occurrences of ``c`` and of its descendants."""
        return int(self._stats[0][self.taxonomy.index(c)])

    def vectors_containing_plus(self, c: str) -> int:
        """|AV_{c+}|: vectors holding ``c`` or a descendant, each counted once."""
        return int(self._stats[1][self.taxonomy.index(c)])

    # -- persistence -------------------------------------------------------

    def dumps(self) -> str:
        """Canonical JSON Lines: records sorted by id, annotations sorted."""
        lines = []
        for r in sorted(self._resources, key=lambda r: r.id):
            rec: dict = {"id": r.id, "annotations": sorted(r.av)}
            if r.meta:
                rec["meta"] = dict(sorted(r.meta.items()))
            lines.append(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")
        return "".join(lines)


def _parse_record(line: str, lineno: int) -> Resource:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {lineno}: invalid JSON ({exc.msg})", entity=f"line {lineno}") from None
    if not isinstance(rec, dict) or not isinstance(rec.get("id"), str) or not rec["id"]:
        raise ParseError(f"line {lineno}: record needs a non-empty string 'id'", entity=f"line {lineno}")
    ann = rec.get("annotations")
    if not isinstance(ann, list) or not all(isinstance(c, str) for c in ann):
        raise ParseError(f"line {lineno}: 'annotations' must be a list of strings", entity=rec["id"])
    meta = rec.get("meta") or {}
    if not isinstance(meta, dict):
        raise ParseError(f"line {lineno}: 'meta' must be an object", entity=rec["id"])
    return Resource(rec["id"], tuple(ann), {str(k): str(v) for k, v in meta.items()})


def load_corpus(path: str | os.PathLike, t: Taxonomy) -> Corpus:
    resources = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if line.strip():
                resources.append(_parse_record(line, lineno))
    if not resources:
        raise EmptyCorpus(f"{path}: empty corpus")
    return Corpus(resources, t)


def save_corpus(corpus: Corpus, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(corpus.dumps())
