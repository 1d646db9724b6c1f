"""Concept similarity and annotation-vector similarity.

``consim`` compares two concepts through the information content of their
least common subsumer.  ``semsim`` compares two annotation vectors: it finds
the one-to-one pairing of their concepts that maximises the summed ``consim``
(a maximum-weight bipartite assignment of size ``min(n, m)``) and divides the
total by a normalisation factor of the two vector lengths.
"""

from __future__ import annotations

import enum
import json
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .corpus import Corpus, check_vector
from .errors import StructureError, UnknownResource
from .taxonomy import Taxonomy
from .weighting import WeightedTaxonomy


class NormFactor(str, enum.Enum):
    MAX = "max"
    MIN = "min"
    AVE = "ave"
    GAV = "gav"

    @property
    def code(self) -> int:
        return {"max": kernels.NORM_MAX, "min": kernels.NORM_MIN,
                "ave": kernels.NORM_AVE, "gav": kernels.NORM_GAV}[self.value]

    def mu(self, n: int, m: int) -> float:
        return kernels.norm_factor(n, m, self.code)

    @classmethod
    def parse(cls, value: "str | NormFactor") -> "NormFactor":
        try:
            return cls(str(value.value if isinstance(value, cls) else value).lower())
        except ValueError:
            raise ValueError(f"unknown normalisation {value!r}; expected max, min, ave or gav") from None


# -- concept similarity -----------------------------------------------------------

def consim_table(wt: WeightedTaxonomy, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
    """``consim`` for every (row concept, column concept) pair, by index.

    Degenerate cases: identical concepts score 1; a zero denominator or any
    infinite information content scores 0.
    """
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    ic = wt.ics
    lcs = wt.taxonomy.lcs_matrix(rows, cols)
    a = ic[rows][:, None]
    b = ic[cols][None, :]
    den = a + b
    num = 2.0 * ic[lcs]
    with np.errstate(divide="ignore", invalid="ignore"):
        out = num / den
    bad = (den == 0.0) | np.isinf(a) | np.isinf(b)
    out[bad] = 0.0
    out[rows[:, None] == cols[None, :]] = 1.0
    return np.ascontiguousarray(out)


def consim(wt: WeightedTaxonomy, c1: str, c2: str) -> float:
    t = wt.taxonomy
    i, j = t.index(c1), t.index(c2)
    if i == j:
        return 1.0
    ic = wt.ics
    a, b = float(ic[i]), float(ic[j])
    den = a + b
    if den == 0.0 or math.isinf(a) or math.isinf(b):
        return 0.0
    return 2.0 * float(ic[t.lcs_index(i, j)]) / den


# -- vector similarity ---------------------------------------------------------

@dataclass(frozen=True)
class Matching:
    """Optimal pairing: ``(index in av1, index in av2, consim)`` triples."""

    pairs: tuple[tuple[int, int, float], ...]
    total: float


def _sorted_indices(t: Taxonomy, av: Sequence[str]) -> list[int]:
    return sorted(t.index(c) for c in av)


def _canonical(x: list[int], y: list[int]) -> tuple[list[int], list[int]]:
    # shorter vector first, ties broken lexicographically: fixes argument order
    return (x, y) if (len(x), x) <= (len(y), y) else (y, x)


def semsim(wt: WeightedTaxonomy, av1: Sequence[str], av2: Sequence[str],
           norm: NormFactor | str = NormFactor.GAV) -> float:
    """Semantic similarity of two annotation vectors, in [0, 1]."""
    t = wt.taxonomy
    check_vector(t, av1)
    check_vector(t, av2)
    norm = NormFactor.parse(norm)
    rows, cols = _canonical(_sorted_indices(t, av1), _sorted_indices(t, av2))
    total, _, _ = kernels.max_assignment(consim_table(wt, rows, cols))
    return total / norm.mu(len(rows), len(cols))


def best_matching(wt: WeightedTaxonomy, av1: Sequence[str], av2: Sequence[str]) -> Matching:
    """The optimal pairing, choosing the lexicographically smallest among ties."""
    t = wt.taxonomy
    check_vector(t, av1)
    check_vector(t, av2)
    w = consim_table(wt, [t.index(c) for c in av1], [t.index(c) for c in av2])
    return lexicographic_assignment(w)


def lexicographic_assignment(w: np.ndarray, rtol: float = 1e-12) -> Matching:
    """Maximum-weight matching of size ``min(n, m)`` for non-negative ``w``.

    Rows are fixed greedily in order, each to the smallest column that still
    admits an optimal completion.
    """
    w = np.asarray(w, dtype=np.float64)
    n, m = w.shape
    best = kernels.max_assignment(w)[0]
    tol = rtol * max(1.0, abs(best))
    free_cols = list(range(m))
    pairs: list[tuple[int, int, float]] = []
    gained = 0.0
    for i in range(n):
        if len(pairs) == min(n, m):
            break
        rest_rows = list(range(i + 1, n))
        for j in free_cols:
            others = [c for c in free_cols if c != j]
            rest = kernels.max_assignment(w[np.ix_(rest_rows, others)])[0] if rest_rows and others else 0.0
            if gained + w[i, j] + rest >= best - tol:
                pairs.append((i, j, float(w[i, j])))
                gained += w[i, j]
                free_cols.remove(j)
                break
    # non-negative weights: any shortfall is made up of zero-valued pairs
    used_rows = {p[0] for p in pairs}
    spare_rows = [i for i in range(n) if i not in used_rows]
    for i, j in zip(spare_rows, list(free_cols)):
        if len(pairs) == min(n, m):
            break
        pairs.append((i, j, float(w[i, j])))
    pairs.sort()
    total = 0.0
    for p in pairs:
        total += p[2]
    return Matching(tuple(pairs), total)


# -- whole-corpus matrices -----------------------------------------------------

class CorpusLayout:
    """Compact CSR view of a corpus for the matrix kernels.

    Only the concepts that occur in the corpus get a column in the concept
    tables; local indices follow taxonomy order, and ``rank`` orders
    resources by (length, sorted concept indices) so every pair is evaluated
    in one canonical orientation.
    """

    def __init__(self, corpus: Corpus):
        t = corpus.taxonomy
        per_res = [_sorted_indices(t, r.av) for r in corpus]
        used = sorted({i for idx in per_res for i in idx})
        local = {g: k for k, g in enumerate(used)}
        self.concepts = np.asarray(used, dtype=np.int64)
        lens = [len(idx) for idx in per_res]
        self.indptr = np.zeros(len(per_res) + 1, dtype=np.int64)
        np.cumsum(lens, out=self.indptr[1:])
        self.indices = np.asarray([local[i] for idx in per_res for i in idx], dtype=np.int64)
        order = sorted(range(len(per_res)), key=lambda r: (lens[r], per_res[r]))
        self.rank = np.empty(len(per_res), dtype=np.int64)
        self.rank[order] = np.arange(len(per_res), dtype=np.int64)
        self.size = len(per_res)


def run_upper_triangle(fill: Callable[[int, int, np.ndarray], None], n: int, jobs: int = 1,
                       block: int = 16) -> np.ndarray:
    """Evaluate ``fill(start, stop, out)`` over row blocks and mirror the result.

    Each entry is computed by exactly one call, so the output does not depend
    on ``jobs``.
    """
    out = np.zeros((n, n), dtype=np.float64)
    starts = list(range(0, n, block))
    if jobs <= 1 or len(starts) <= 1:
        for s in starts:
            fill(s, min(s + block, n), out)
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for fut in [pool.submit(fill, s, min(s + block, n), out) for s in starts]:
                fut.result()
    lower = np.tril_indices(n, -1)
    out[lower] = out.T[lower]
    return out


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    ids: tuple[str, ...]
    values: np.ndarray
    method: str = ""

    def __post_init__(self):
        object.__setattr__(self, "_pos", {rid: k for k, rid in enumerate(self.ids)})

    def position(self, rid: str) -> int:
        try:
            return self._pos[rid]
        except KeyError:
            raise UnknownResource(f"unknown resource {rid!r}", entity=rid) from None

    def get(self, a: str, b: str) -> float:
        return float(self.values[self.position(a), self.position(b)])

    def to_csv(self) -> str:
        lines = ["," + ",".join(self.ids)]
        for rid, row in zip(self.ids, self.values):
            lines.append(rid + "," + ",".join(f"{v:.6f}" for v in row))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({"method": self.method, "ids": list(self.ids),
                           "values": [[round(v, 6) for v in row] for row in self.values.tolist()]})


def similarity_matrix(wt: WeightedTaxonomy, corpus: Corpus, norm: NormFactor | str = NormFactor.GAV,
                      jobs: int = 1, method: str = "") -> SimilarityMatrix:
    """``semsim`` for every pair of resources of ``corpus``."""
    if corpus.taxonomy is not wt.taxonomy and corpus.taxonomy.ids != wt.taxonomy.ids:
        raise StructureError("corpus and weighted taxonomy use different taxonomies")
    norm = NormFactor.parse(norm)
    lay = CorpusLayout(corpus)
    table = consim_table(wt, lay.concepts, lay.concepts)

    def fill(start, stop, out):
        kernels.assignment_block(table, lay.indptr, lay.indices, lay.rank, norm.code, start, stop, out)

    values = run_upper_triangle(fill, lay.size, jobs)
    return SimilarityMatrix(corpus.ids, values, method or f"semsim:{wt.method.value}:{norm.value}")
