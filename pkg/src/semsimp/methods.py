"""Similarity-method specifications shared by the CLI and the experiment runner.

Grammar::

    semsim:<CF|AF|TD|IIC>:<max|min|ave|gav>
    dice | jaccard | sigmoid | wnsim | rezaei-franti
    haase[:alpha=<float>,beta=<float>]
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import baselines
from .corpus import Corpus
from .errors import ParseError
from .semsim import NormFactor, SimilarityMatrix, semsim, similarity_matrix
from .weighting import WeightingMethod, idf_array, weigh

BASELINE_NAMES = ("dice", "jaccard", "sigmoid", "wnsim", "rezaei-franti", "haase")


@dataclass(frozen=True)
class MethodSpec:
    kind: str
    weighting: WeightingMethod | None = None
    norm: NormFactor | None = None
    alpha: float = baselines.HAASE_ALPHA
    beta: float = baselines.HAASE_BETA

    @property
    def label(self) -> str:
        if self.kind == "semsim":
            return f"semsim:{self.weighting.value}:{self.norm.value}"
        if self.kind == "haase" and (self.alpha, self.beta) != (baselines.HAASE_ALPHA, baselines.HAASE_BETA):
            return f"haase:alpha={self.alpha:g},beta={self.beta:g}"
        return self.kind

    def __str__(self) -> str:
        return self.label


def parse_method(text: str) -> MethodSpec:
    s = text.strip()
    head, _, rest = s.partition(":")
    head = head.lower()
    if head == "semsim":
        parts = rest.split(":")
        if len(parts) != 2:
            raise ParseError(f"bad method {text!r}; expected semsim:<weighting>:<norm>", entity=text)
        try:
            return MethodSpec("semsim", WeightingMethod.parse(parts[0]), NormFactor.parse(parts[1]))
        except ValueError as exc:
            raise ParseError(str(exc), entity=text) from None
    if head == "haase":
        params = {"alpha": baselines.HAASE_ALPHA, "beta": baselines.HAASE_BETA}
        for item in filter(None, rest.split(",")):
            key, eq, val = item.partition("=")
            if not eq or key.strip() not in params:
                raise ParseError(f"bad haase parameter {item!r}", entity=text)
            try:
                params[key.strip()] = float(val)
            except ValueError:
                raise ParseError(f"bad haase parameter {item!r}", entity=text) from None
            if not params[key.strip()] > 0:
                raise ParseError(f"haase {key.strip()} must be positive", entity=text)
        return MethodSpec("haase", alpha=params["alpha"], beta=params["beta"])
    if head in BASELINE_NAMES and not rest:
        return MethodSpec(head)
    raise ParseError(f"unknown method {text!r}", entity=text)


def all_methods() -> list[MethodSpec]:
    """The 16 SemSim configurations followed by the six baselines."""
    out = [MethodSpec("semsim", w, n) for w in WeightingMethod for n in NormFactor]
    out += [MethodSpec(name) for name in BASELINE_NAMES]
    return out


def value_range(spec: MethodSpec, corpus: Corpus) -> tuple[float, float]:
    """Closed interval every similarity value of ``spec`` lies in."""
    if spec.kind == "wnsim":
        return 0.0, math.log(2.0 * corpus.taxonomy.max_depth_edges())
    return 0.0, 1.0


def method_matrix(spec: MethodSpec, corpus: Corpus, weight_corpus: Corpus | None = None,
                  jobs: int = 1) -> SimilarityMatrix:
    """Pairwise similarities of all resources of ``corpus``.

    ``weight_corpus`` (default: ``corpus``) supplies the frequencies used by
    CF/AF weighting and by the WNSim IDF.
    """
    stats = weight_corpus if weight_corpus is not None else corpus
    if spec.kind == "semsim":
        wt = weigh(corpus.taxonomy, spec.weighting, stats if spec.weighting.extensional else None)
        return similarity_matrix(wt, corpus, spec.norm, jobs=jobs, method=spec.label)
    if spec.kind in baselines.SET_MEASURES:
        return baselines.set_matrix(corpus, spec.kind)
    if spec.kind == "wnsim":
        return baselines.wnsim_matrix(corpus, idf_array(stats), jobs=jobs)
    if spec.kind == "rezaei-franti":
        return baselines.rezaei_franti_matrix(corpus, jobs=jobs)
    if spec.kind == "haase":
        m = baselines.haase_matrix(corpus, spec.alpha, spec.beta, jobs=jobs)
        return SimilarityMatrix(m.ids, m.values, spec.label)
    raise ParseError(f"unknown method {spec.kind!r}")


def method_similarity(spec: MethodSpec, corpus: Corpus, a: str, b: str,
                      weight_corpus: Corpus | None = None) -> float:
    """Similarity of two resources of ``corpus`` under ``spec``."""
    stats = weight_corpus if weight_corpus is not None else corpus
    t = corpus.taxonomy
    av1, av2 = corpus[a].av, corpus[b].av
    if spec.kind == "semsim":
        wt = weigh(t, spec.weighting, stats if spec.weighting.extensional else None)
        return semsim(wt, av1, av2, spec.norm)
    if spec.kind in baselines.SET_MEASURES:
        return baselines.SET_MEASURES[spec.kind](av1, av2)
    if spec.kind == "wnsim":
        return baselines.wnsim_sym(t, idf_array(stats), av1, av2)
    if spec.kind == "rezaei-franti":
        return baselines.rezaei_franti(t, av1, av2)
    if spec.kind == "haase":
        return baselines.haase_sym(t, av1, av2, spec.alpha, spec.beta)
    raise ParseError(f"unknown method {spec.kind!r}")
