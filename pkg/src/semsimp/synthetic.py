"""Random taxonomies and corpora for property tests and benchmarks."""

from __future__ import annotations

import numpy as np

from .corpus import Corpus, Resource
from .taxonomy import Taxonomy


def random_taxonomy(n: int, rng: np.random.Generator, prefix: str = "c") -> Taxonomy:
    """Random recursive tree: concept ``i`` hangs under a uniform earlier concept."""
    edges = [(f"{prefix}0", None)]
    for i in range(1, n):
        edges.append((f"{prefix}{i}", f"{prefix}{int(rng.integers(0, i))}"))
    return Taxonomy(edges)


def random_vector(t: Taxonomy, rng: np.random.Generator, size: int, include_root: bool = False) -> tuple[str, ...]:
    pool = list(t.ids) if include_root else [c for c in t.ids if c != t.root]
    pick = rng.choice(len(pool), size=min(size, len(pool)), replace=False)
    return tuple(pool[i] for i in pick)


def random_corpus(t: Taxonomy, n: int, rng: np.random.Generator, min_len: int = 1,
                  max_len: int = 8) -> Corpus:
    resources = [
        Resource(f"r{i}", random_vector(t, rng, int(rng.integers(min_len, max_len + 1))))
        for i in range(n)
    ]
    return Corpus(resources, t)


def planted_cluster_corpus(t: Taxonomy, n: int, rng: np.random.Generator, cluster_size: int = 5,
                           vector_len: int = 10, shared_fraction: float = 0.7,
                           background_len: tuple[int, int] = (3, 10)) -> tuple[Corpus, list[str]]:
    """Corpus of ``n`` random resources in which ``cluster_size`` of them share
    ``shared_fraction`` of their annotation concepts.

    Returns the corpus and the ids of the cluster resources.
    """
    non_root = [c for c in t.ids if c != t.root]
    n_shared = int(round(shared_fraction * vector_len))
    order = rng.permutation(len(non_root))
    shared = [non_root[i] for i in order[:n_shared]]
    rest = [non_root[i] for i in order[n_shared:]]
    resources = []
    cluster_ids = []
    for i in range(cluster_size):
        own = rng.choice(len(rest), size=vector_len - n_shared, replace=False)
        rid = f"cluster{i}"
        cluster_ids.append(rid)
        resources.append(Resource(rid, tuple(shared) + tuple(rest[j] for j in own)))
    lo, hi = background_len
    for i in range(n - cluster_size):
        resources.append(Resource(f"r{i}", random_vector(t, rng, int(rng.integers(lo, hi + 1)))))
    return Corpus(resources, t), cluster_ids
