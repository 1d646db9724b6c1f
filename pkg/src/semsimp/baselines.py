"""Comparison measures: three set-overlap and three taxonomy-based ones.

* Dice, Jaccard, Sigmoid treat annotation vectors as plain sets of ids.
* WNSim: IDF-weighted best match of Leacock-Chodorow path similarity.
* Rezaei & Franti: Wu-Palmer similarity over an optimal one-to-one pairing.
* Haase et al.: best match of ``exp(-alpha*l) * tanh(beta*h)``.

WNSim and Haase are directional; the ``_sym`` versions average both
directions.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

from . import kernels
from .corpus import Corpus, check_vector
from .errors import DegenerateTaxonomy, EmptyVector, StatisticsError, ZeroIDFSum
from .kernels._pykernels import _directed_rows
from .semsim import CorpusLayout, SimilarityMatrix, _canonical, _sorted_indices, run_upper_triangle
from .taxonomy import Taxonomy

HAASE_ALPHA = 0.2
HAASE_BETA = 0.6


# -- set-based -------------------------------------------------------------------

def _sets(av1: Sequence[str], av2: Sequence[str]) -> tuple[frozenset, frozenset]:
    if not av1 or not av2:
        raise EmptyVector("annotation vectors must be non-empty")
    return frozenset(av1), frozenset(av2)


def dice(av1: Sequence[str], av2: Sequence[str]) -> float:
    a, b = _sets(av1, av2)
    return 2.0 * len(a & b) / (len(a) + len(b))


def jaccard(av1: Sequence[str], av2: Sequence[str]) -> float:
    a, b = _sets(av1, av2)
    return len(a & b) / len(a | b)


def sigmoid(av1: Sequence[str], av2: Sequence[str]) -> float:
    a, b = _sets(av1, av2)
    e = math.exp(len(a & b))
    return (e - 1.0) / ((e + 1.0) * (len(a - b) + len(b - a) + 1))


SET_MEASURES = {"dice": dice, "jaccard": jaccard, "sigmoid": sigmoid}


def set_matrix(corpus: Corpus, name: str) -> SimilarityMatrix:
    fn = SET_MEASURES[name]
    sets = [frozenset(r.av) for r in corpus]
    n = len(sets)
    out = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i, n):
            out[i, j] = out[j, i] = fn(sets[i], sets[j])
    return SimilarityMatrix(corpus.ids, out, name)


# -- concept tables -------------------------------------------------------------

def lch_table(t: Taxonomy, rows, cols) -> np.ndarray:
    """Leacock-Chodorow ``-ln(length / (2 * maxdepth))``, edge lengths floored at 1."""
    maxdepth = t.max_depth_edges()
    if maxdepth < 1:
        raise DegenerateTaxonomy("path similarity needs a taxonomy of depth >= 1")
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    d = t.depth_array
    lcs = t.lcs_matrix(rows, cols)
    length = d[rows][:, None] + d[cols][None, :] - 2 * d[lcs]
    return np.ascontiguousarray(-np.log(np.maximum(length, 1) / (2.0 * maxdepth)))


def wup_table(t: Taxonomy, rows, cols) -> np.ndarray:
    """Wu-Palmer similarity with node-counted depth (root depth 1)."""
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    dn = t.depth_array + 1
    lcs = t.lcs_matrix(rows, cols)
    return np.ascontiguousarray(2.0 * dn[lcs] / (dn[rows][:, None] + dn[cols][None, :]))


def haase_table(t: Taxonomy, rows, cols, alpha: float = HAASE_ALPHA, beta: float = HAASE_BETA) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    d = t.depth_array
    lcs = t.lcs_matrix(rows, cols)
    h = d[lcs]
    length = d[rows][:, None] + d[cols][None, :] - 2 * h
    out = np.exp(-alpha * length) * np.tanh(beta * h)
    out[rows[:, None] == cols[None, :]] = 1.0
    return np.ascontiguousarray(out)


# -- taxonomy-based measures ----------------------------------------------------

def _check_idf(idf: np.ndarray, idx: Sequence[int], t: Taxonomy) -> None:
    vals = idf[list(idx)]
    if np.isinf(vals).any():
        bad = t.ids[idx[int(np.argmax(np.isinf(vals)))]]
        raise StatisticsError(f"concept {bad!r} never occurs in the IDF corpus", entity=bad)
    if vals.sum() == 0.0:
        raise ZeroIDFSum("every concept of the vector occurs in every annotation vector (IDF sum is 0)",
                         entity=t.ids[idx[0]])


def wnsim_sym(t: Taxonomy, idf: np.ndarray, av1: Sequence[str], av2: Sequence[str]) -> float:
    """Symmetrised WNSim; ``idf`` holds one IDF value per taxonomy concept."""
    check_vector(t, av1)
    check_vector(t, av2)
    a, b = _sorted_indices(t, av1), _sorted_indices(t, av2)
    _check_idf(idf, a, t)
    _check_idf(idf, b, t)
    sub = lch_table(t, a, b)
    ab = _directed_rows(sub.tolist(), idf[a].tolist())
    ba = _directed_rows(sub.T.tolist(), idf[b].tolist())
    return 0.5 * (ab + ba)


def rezaei_franti(t: Taxonomy, av1: Sequence[str], av2: Sequence[str]) -> float:
    check_vector(t, av1)
    check_vector(t, av2)
    rows, cols = _canonical(_sorted_indices(t, av1), _sorted_indices(t, av2))
    total, _, _ = kernels.max_assignment(wup_table(t, rows, cols))
    return total / max(len(rows), len(cols))


def haase_sym(t: Taxonomy, av1: Sequence[str], av2: Sequence[str],
              alpha: float = HAASE_ALPHA, beta: float = HAASE_BETA) -> float:
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    check_vector(t, av1)
    check_vector(t, av2)
    a, b = _sorted_indices(t, av1), _sorted_indices(t, av2)
    sub = haase_table(t, a, b, alpha, beta)
    ones_a = [1.0] * len(a)
    ones_b = [1.0] * len(b)
    return 0.5 * (_directed_rows(sub.tolist(), ones_a) + _directed_rows(sub.T.tolist(), ones_b))


# -- matrices -------------------------------------------------------------------

def _directed_matrix(corpus: Corpus, table: np.ndarray, weights: np.ndarray, label: str,
                     jobs: int, lay: CorpusLayout) -> SimilarityMatrix:
    w = np.ascontiguousarray(weights, dtype=np.float64)

    def fill(start, stop, out):
        kernels.directed_block(table, w, lay.indptr, lay.indices, start, stop, out)

    return SimilarityMatrix(corpus.ids, run_upper_triangle(fill, lay.size, jobs), label)


def wnsim_matrix(corpus: Corpus, idf: np.ndarray, jobs: int = 1) -> SimilarityMatrix:
    t = corpus.taxonomy
    for r in corpus:
        _check_idf(idf, _sorted_indices(t, r.av), t)
    lay = CorpusLayout(corpus)
    table = lch_table(t, lay.concepts, lay.concepts)
    return _directed_matrix(corpus, table, idf[lay.concepts], "wnsim", jobs, lay)


def haase_matrix(corpus: Corpus, alpha: float = HAASE_ALPHA, beta: float = HAASE_BETA,
                 jobs: int = 1) -> SimilarityMatrix:
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    lay = CorpusLayout(corpus)
    table = haase_table(corpus.taxonomy, lay.concepts, lay.concepts, alpha, beta)
    label = "haase" if (alpha, beta) == (HAASE_ALPHA, HAASE_BETA) else f"haase:alpha={alpha},beta={beta}"
    return _directed_matrix(corpus, table, np.ones(len(lay.concepts)), label, jobs, lay)


def rezaei_franti_matrix(corpus: Corpus, jobs: int = 1) -> SimilarityMatrix:
    lay = CorpusLayout(corpus)
    table = wup_table(corpus.taxonomy, lay.concepts, lay.concepts)

    def fill(start, stop, out):
        kernels.assignment_block(table, lay.indptr, lay.indices, lay.rank, kernels.NORM_MAX, start, stop, out)

    return SimilarityMatrix(corpus.ids, run_upper_triangle(fill, lay.size, jobs), "rezaei-franti")
