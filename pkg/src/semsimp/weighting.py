"""Concept weights and information content.

Four weighting methods are supported:

* ``CF``  concept frequency, ``n(c+) / N``
* ``AF``  annotation frequency, ``|AV_{c+}| / |AV|``
* ``TD``  top-down uniform split of the parent's probability among its children
* ``IIC`` intrinsic information content, ``1 - log(|desc(c)| + 1) / log(|C|)``

For CF, AF and TD the information content of a concept is ``-log(w(c))``
(``inf`` when ``w(c) == 0``); for IIC it is ``iic(c)`` itself.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .corpus import Corpus
from .errors import DegenerateTaxonomy, EmptyCorpus, MissingCorpus, StructureError
from .taxonomy import Taxonomy


class WeightingMethod(str, enum.Enum):
    CF = "CF"
    AF = "AF"
    TD = "TD"
    IIC = "IIC"

    @property
    def extensional(self) -> bool:
        return self in (WeightingMethod.CF, WeightingMethod.AF)

    @classmethod
    def parse(cls, value: "str | WeightingMethod") -> "WeightingMethod":
        try:
            return cls(str(value.value if isinstance(value, cls) else value).upper())
        except ValueError:
            raise ValueError(f"unknown weighting method {value!r}; expected one of CF, AF, TD, IIC") from None


def _check_corpus(t: Taxonomy, corpus: Corpus | None) -> Corpus:
    if corpus is None:
        raise MissingCorpus("extensional weighting needs an annotated corpus")
    if len(corpus) == 0:
        raise EmptyCorpus("cannot weight with an empty corpus")
    if corpus.taxonomy is not t and corpus.taxonomy.ids != t.ids:
        raise StructureError("corpus is bound to a different taxonomy")
    return corpus


def _neg_log(w: np.ndarray, log_base: float) -> np.ndarray:
    with np.errstate(divide="ignore"):
        ic = -np.log(w)
    if log_base != math.e:
        ic = ic / math.log(log_base)
    # -log(1) is -0.0; normalise so the root prints as 0
    return ic + 0.0


# -- single-concept weights ---------------------------------------------------

def w_cf(t: Taxonomy, corpus: Corpus, c: str, exact: bool = False) -> float | Fraction:
    corpus = _check_corpus(t, corpus)
    num, den = corpus.occurrences_plus(c), corpus.total_occurrences
    return Fraction(num, den) if exact else num / den


def w_af(t: Taxonomy, corpus: Corpus, c: str, exact: bool = False) -> float | Fraction:
    corpus = _check_corpus(t, corpus)
    num, den = corpus.vectors_containing_plus(c), len(corpus)
    return Fraction(num, den) if exact else num / den


def idf(t: Taxonomy, corpus: Corpus, c: str, log_base: float = math.e) -> float:
    """Inverse document frequency of ``c`` counting descendants; ``inf`` if unseen."""
    corpus = _check_corpus(t, corpus)
    hits = corpus.vectors_containing_plus(c)
    if hits == 0:
        return math.inf
    return math.log(len(corpus) / hits) / (1.0 if log_base == math.e else math.log(log_base))


def idf_array(corpus: Corpus, log_base: float = math.e) -> np.ndarray:
    hits = corpus.vectors_containing_plus_array.astype(np.float64)
    with np.errstate(divide="ignore"):
        out = np.log(len(corpus) / hits)
    if log_base != math.e:
        out = out / math.log(log_base)
    return out + 0.0


def w_td(t: Taxonomy, c: str, exact: bool = False) -> float | Fraction:
    # divide by the parent's child count, i.e. siblings(c) + 1
    w = Fraction(1)
    node = c
    while (p := t.parent(node)) is not None:
        w /= len(t.children(p))
        node = p
    return w if exact else float(w)


def iic(t: Taxonomy, c: str) -> float:
    n = len(t)
    if n == 1:
        raise DegenerateTaxonomy("intrinsic information content is undefined for a one-concept taxonomy")
    return 1.0 - math.log(len(t.descendants(c)) + 1) / math.log(n)


# -- whole-taxonomy weighting ---------------------------------------------------

def _td_array(t: Taxonomy) -> np.ndarray:
    w = np.empty(len(t), dtype=np.float64)
    parent = t.parent_index
    for i in t.preorder:
        p = parent[i]
        w[i] = 1.0 if p < 0 else w[p] / len(t.children_index(p))
    return w


def _iic_array(t: Taxonomy) -> np.ndarray:
    n = len(t)
    if n == 1:
        raise DegenerateTaxonomy("intrinsic information content is undefined for a one-concept taxonomy")
    return 1.0 - np.log(t.descendant_counts + 1.0) / math.log(n)


@dataclass(frozen=True, eq=False)
class WeightedTaxonomy:
    """A taxonomy plus per-concept weight and information content.

    ``weights`` is ``None`` under IIC, which defines the information content
    directly.
    """

    taxonomy: Taxonomy
    method: WeightingMethod
    weights: np.ndarray | None
    ics: np.ndarray
    log_base: float = math.e

    @cached_property
    def weight(self) -> Mapping[str, float]:
        if self.weights is None:
            return {}
        return dict(zip(self.taxonomy.ids, self.weights.tolist()))

    @cached_property
    def ic(self) -> Mapping[str, float]:
        return dict(zip(self.taxonomy.ids, self.ics.tolist()))

    def ic_of(self, c: str) -> float:
        return float(self.ics[self.taxonomy.index(c)])


def weigh(
    t: Taxonomy,
    method: WeightingMethod | str,
    corpus: Corpus | None = None,
    log_base: float = math.e,
) -> WeightedTaxonomy:
    """Weight every concept of ``t`` with ``method``.

    ``corpus`` is required for CF and AF and ignored for TD and IIC.  It may
    be a different corpus from the one later compared, as long as it is bound
    to the same taxonomy.
    """
    m = WeightingMethod.parse(method)
    if m is WeightingMethod.CF:
        corpus = _check_corpus(t, corpus)
        w = corpus.occurrences_plus_array / float(corpus.total_occurrences)
    elif m is WeightingMethod.AF:
        corpus = _check_corpus(t, corpus)
        w = corpus.vectors_containing_plus_array / float(len(corpus))
    elif m is WeightingMethod.TD:
        w = _td_array(t)
    else:
        ics = _iic_array(t)
        ics.setflags(write=False)
        return WeightedTaxonomy(t, m, None, ics, log_base)
    w = np.asarray(w, dtype=np.float64)
    ics = _neg_log(w, log_base)
    w.setflags(write=False)
    ics.setflags(write=False)
    return WeightedTaxonomy(t, m, w, ics, log_base)
