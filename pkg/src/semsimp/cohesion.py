"""Semantic cohesion of resource sets and its statistical evaluation.

The cohesion of a set is the mean pairwise similarity over its unordered
pairs.  A set is tested against a Monte-Carlo null distribution built from
uniformly sampled sets of the same size::

    t = (observed - mean(null)) / std(null)
    confidence = StudentT(df).cdf(t)

Judgement data is compared with a method's pairwise similarities through the
Pearson correlation.

Sampling
--------
Samples are produced in fixed chunks of ``SAMPLE_CHUNK`` sets.  Chunk ``c``
draws from a PCG64 generator seeded with ``SeedSequence(seed,
spawn_key=(c,))``, so the sampled sets depend only on ``(seed, n, k, R)``
and never on the number of workers.  Within a chunk each set is an ordered
k-tuple of distinct resources: tuples are drawn with ``integers`` and rows
holding a repeat are redrawn until none do (uniform over k-subsets).  When
``k * (k - 1) > n`` repeats are frequent and a set is instead the first
``k`` entries of an ``argsort`` of ``n`` uniform draws.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from collections.abc import Iterable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .corpus import Corpus
from .errors import (
    ConstantVector,
    CorpusTooSmall,
    DuplicateResourceId,
    LengthMismatch,
    ParseError,
    StatisticsError,
    TooFewResources,
    ZeroVariance,
)
from .methods import MethodSpec, method_matrix
from .semsim import SimilarityMatrix

SAMPLE_CHUNK = 4096
DEFAULT_SAMPLES = 100_000


# -- cohesion -------------------------------------------------------------------

@dataclass(frozen=True)
class SetCohesion:
    resource_ids: tuple[str, ...]
    cohesion: float


def _pairwise_mean(values: np.ndarray, sets: np.ndarray) -> np.ndarray:
    # sorted members: a set's cohesion must not depend on the order it was drawn in
    sets = np.sort(sets, axis=1)
    k = sets.shape[1]
    total = np.zeros(sets.shape[0], dtype=np.float64)
    for a in range(k):
        for b in range(a + 1, k):
            total += values[sets[:, a], sets[:, b]]
    return total / (k * (k - 1) // 2)


def cohesion(matrix: SimilarityMatrix, resource_ids: Sequence[str]) -> SetCohesion:
    """Mean similarity over all unordered pairs of ``resource_ids``."""
    ids = tuple(resource_ids)
    if len(ids) < 2:
        raise TooFewResources(f"cohesion needs at least 2 resources, got {len(ids)}")
    if len(set(ids)) != len(ids):
        dup = next(r for r in ids if ids.count(r) > 1)
        raise DuplicateResourceId(f"resource {dup!r} listed twice in one set", entity=dup)
    pos = np.asarray([[matrix.position(r) for r in ids]], dtype=np.int64)
    return SetCohesion(ids, float(_pairwise_mean(matrix.values, pos)[0]))


# -- null distribution ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class NullDistribution:
    values: np.ndarray
    k: int
    seed: int
    method: str = ""

    @property
    def samples(self) -> int:
        return len(self.values)

    @property
    def mean(self) -> float:
        return float(self.values.mean())

    @property
    def sigma(self) -> float:
        """Sample standard deviation (ddof=1) of the sampled cohesion values."""
        if self.values.min() == self.values.max():
            return 0.0  # the mean of equal floats can round off the value itself
        return float(self.values.std(ddof=1))


def _chunk_sets(n: int, k: int, seed: int, chunk: int, size: int) -> np.ndarray:
    # a full chunk is always drawn, so shorter runs are prefixes of longer ones
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(chunk,))))
    if k * (k - 1) > n:
        return np.argsort(rng.random((SAMPLE_CHUNK, n)), axis=1, kind="stable")[:size, :k]
    sets = rng.integers(0, n, size=(SAMPLE_CHUNK, k))
    while True:
        s = np.sort(sets, axis=1)
        dup = (s[:, 1:] == s[:, :-1]).any(axis=1)
        n_dup = int(dup.sum())
        if n_dup == 0:
            return sets[:size]
        sets[dup] = rng.integers(0, n, size=(n_dup, k))


def sample_sets(n: int, k: int, samples: int, seed: int, jobs: int = 1) -> np.ndarray:
    """``samples`` x ``k`` array of resource positions, deterministic in ``seed``."""
    if k > n:
        raise CorpusTooSmall(f"cannot draw sets of {k} from {n} resources")
    if k < 2:
        raise TooFewResources(f"set size must be at least 2, got {k}")
    if samples < 2:
        raise StatisticsError(f"need at least 2 samples, got {samples}")
    sizes = [min(SAMPLE_CHUNK, samples - s) for s in range(0, samples, SAMPLE_CHUNK)]
    if jobs <= 1:
        parts = [_chunk_sets(n, k, seed, c, size) for c, size in enumerate(sizes)]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(lambda a: _chunk_sets(n, k, seed, *a), enumerate(sizes)))
    return np.concatenate(parts, axis=0)


def sample_null(matrix: SimilarityMatrix, k: int, samples: int = DEFAULT_SAMPLES, seed: int = 0,
                jobs: int = 1) -> NullDistribution:
    """Cohesion values of ``samples`` uniformly drawn ``k``-sets of resources."""
    sets = sample_sets(len(matrix.ids), k, samples, seed, jobs)
    return NullDistribution(_pairwise_mean(matrix.values, sets), k, seed, matrix.method)


# -- hypothesis test --------------------------------------------------------------

def student_t_cdf(t: float, df: float) -> float:
    return float(special.stdtr(df, t))


@dataclass(frozen=True)
class CohesionTest:
    observed: SetCohesion
    null: NullDistribution
    t: float
    confidence: float
    df: int


def t_test(observed: SetCohesion, null: NullDistribution, df: int | None = None) -> CohesionTest:
    """t-value of the observed cohesion against the null, and its Student-t CDF.

    ``df`` defaults to the size of the observed set.
    """
    sigma = null.sigma
    if not sigma > 0.0:
        raise ZeroVariance("null distribution has zero variance", entity=null.method or None)
    if df is None:
        df = len(observed.resource_ids)
    if df < 1:
        raise ValueError("degrees of freedom must be positive")
    t = (observed.cohesion - null.mean) / sigma
    return CohesionTest(observed, null, t, student_t_cdf(t, df), df)


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise LengthMismatch(f"length mismatch: {x.shape} vs {y.shape}")
    if len(x) < 2:
        raise LengthMismatch("pearson needs at least two observations")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = math.sqrt(float(dx @ dx))
    sy = math.sqrt(float(dy @ dy))
    if sx == 0.0 or sy == 0.0:
        raise ConstantVector("correlation undefined: one of the score vectors is constant")
    return max(-1.0, min(1.0, float(dx @ dy) / (sx * sy)))


# -- input files ---------------------------------------------------------------------

def load_benchmark_sets(path: str | os.PathLike) -> list[tuple[str, tuple[str, ...]]]:
    """``<set_id><TAB><id>,<id>,...`` per line."""
    out = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            set_id, tab, members = line.partition("\t")
            ids = tuple(m.strip() for m in members.split(",") if m.strip())
            if not tab or not set_id or not ids:
                raise ParseError(f"line {lineno}: expected '<set_id>\\t<id>,<id>,...'", entity=f"line {lineno}")
            if set_id in seen:
                raise ParseError(f"duplicate set id {set_id!r}", entity=set_id)
            seen.add(set_id)
            out.append((set_id, ids))
    return out


def load_judgements(path: str | os.PathLike) -> dict[frozenset, float]:
    """CSV ``resource_a,resource_b,score``; an optional header line is skipped."""
    out: dict[frozenset, float] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip():
                continue
            if len(row) != 3:
                raise ParseError(f"line {lineno}: expected 3 columns", entity=f"line {lineno}")
            a, b, score = (c.strip() for c in row)
            try:
                s = float(score)
            except ValueError:
                if lineno == 1:
                    continue
                raise ParseError(f"line {lineno}: bad score {score!r}", entity=f"line {lineno}") from None
            if not 0.0 <= s <= 1.0:
                raise ParseError(f"line {lineno}: score {s} outside [0, 1]", entity=f"line {lineno}")
            key = frozenset((a, b))
            if len(key) != 2 or key in out:
                raise ParseError(f"line {lineno}: repeated or degenerate pair ({a}, {b})", entity=f"{a},{b}")
            out[key] = s
    return out


def judged_pairs(matrix: SimilarityMatrix, judgements: Mapping[frozenset, float],
                 within: Iterable[str] | None = None) -> tuple[list[float], list[float]]:
    """Aligned (method, judgement) score lists, optionally restricted to one set."""
    members = set(within) if within is not None else None
    method_scores, judge_scores = [], []
    for pair in sorted(judgements, key=sorted):
        if members is not None and not pair <= members:
            continue
        a, b = sorted(pair)
        method_scores.append(matrix.get(a, b))
        judge_scores.append(judgements[pair])
    return method_scores, judge_scores


# -- histogram plot data -------------------------------------------------------------

def histogram_csv(test: CohesionTest, bins: int = 50) -> str:
    counts, edges = np.histogram(test.null.values, bins=bins)
    buf = io.StringIO()
    buf.write("bin_left,bin_right,count\n")
    for lo, hi, c in zip(edges[:-1], edges[1:], counts):
        buf.write(f"{lo:.6f},{hi:.6f},{int(c)}\n")
    buf.write(
        f"# stats: mean={test.null.mean:.6f} sigma={test.null.sigma:.6f} "
        f"observed={test.observed.cohesion:.6f} t={test.t:.6f} confidence={test.confidence:.6f} "
        f"samples={test.null.samples} df={test.df}\n"
    )
    return buf.getvalue()


# -- experiment runner ---------------------------------------------------------------

@dataclass
class ReportRow:
    method: str
    set_id: str
    cohesion: float
    t: float
    confidence: float
    pearson: float | None
    note: str = ""


@dataclass
class ExperimentReport:
    rows: list[ReportRow] = field(default_factory=list)
    averages: list[ReportRow] = field(default_factory=list)
    tests: dict[tuple[str, str], CohesionTest] = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("method,set_id,cohesion,t,confidence,pearson\n")
        for r in self.rows + self.averages:
            p = "-" if r.pearson is None else f"{r.pearson:.6f}"
            buf.write(f"{r.method},{r.set_id},{r.cohesion:.6f},{r.t:.6f},{r.confidence:.6f},{p}\n")
        return buf.getvalue()

    def to_json(self) -> str:
        def enc(r: ReportRow) -> dict:
            d = {"method": r.method, "set_id": r.set_id, "cohesion": round(r.cohesion, 6),
                 "t": round(r.t, 6), "confidence": round(r.confidence, 6),
                 "pearson": None if r.pearson is None else round(r.pearson, 6)}
            if r.note:
                d["note"] = r.note
            return d

        return json.dumps({"rows": [enc(r) for r in self.rows],
                           "averages": [enc(r) for r in self.averages]}, indent=1) + "\n"


def run_experiment(
    corpus: Corpus,
    methods: Sequence[MethodSpec],
    sets: Sequence[tuple[str, Sequence[str]]],
    judgements: Mapping[frozenset, float] | None = None,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    df: int | None = None,
    weight_corpus: Corpus | None = None,
    jobs: int = 1,
) -> ExperimentReport:
    """Cohesion test (and judgement correlation, if given) per method and set.

    The same sampled sets are reused for every method, so methods are
    compared on common random draws.
    """
    for set_id, ids in sets:
        for rid in ids:
            corpus.position(rid)
    report = ExperimentReport()
    sampled: dict[int, np.ndarray] = {}
    for spec in methods:
        matrix = method_matrix(spec, corpus, weight_corpus, jobs=jobs)
        rows = []
        for set_id, ids in sets:
            k = len(ids)
            if k not in sampled:
                sampled[k] = sample_sets(len(corpus), k, samples, seed, jobs)
            null = NullDistribution(_pairwise_mean(matrix.values, sampled[k]), k, seed, spec.label)
            test = t_test(cohesion(matrix, ids), null, df)
            p, note = None, ""
            if judgements:
                xs, ys = judged_pairs(matrix, judgements, ids)
                try:
                    p = pearson(xs, ys)
                except StatisticsError as exc:
                    note = f"{type(exc).__name__}: {exc}"
            row = ReportRow(spec.label, set_id, test.observed.cohesion, test.t, test.confidence, p, note)
            rows.append(row)
            report.tests[(spec.label, set_id)] = test
        report.rows.extend(rows)
        if rows:
            ps = [r.pearson for r in rows if r.pearson is not None]
            report.averages.append(ReportRow(
                spec.label, "Average",
                float(np.mean([r.cohesion for r in rows])),
                float(np.mean([r.t for r in rows])),
                float(np.mean([r.confidence for r in rows])),
                float(np.mean(ps)) if ps else None,
            ))
    return report
