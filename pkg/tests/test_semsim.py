import math

import numpy as np
import pytest

from oracles import brute_force_matching, root_path
from semsimp.corpus import Corpus, Resource
from semsimp.errors import DuplicateConcept, EmptyVector, UnknownConcept, UnknownResource
from semsimp.semsim import (
    NormFactor,
    best_matching,
    consim,
    lexicographic_assignment,
    semsim,
    similarity_matrix,
)
from semsimp.synthetic import random_corpus, random_taxonomy, random_vector
from semsimp.weighting import weigh


def td_ic_oracle(edges):
    """-ln of the top-down weight, from the edge list alone."""
    kids = {}
    for c, p in edges:
        kids.setdefault(p, []).append(c)
    ic = {}
    for c, _ in edges:
        path = root_path(edges, c)
        ic[c] = sum(math.log(len(kids[p])) for p in path[1:])
    return ic


def consim_oracle(edges, ic, a, b):
    if a == b:
        return 1.0
    pb = set(root_path(edges, b))
    lcs = next(x for x in root_path(edges, a) if x in pb)
    den = ic[a] + ic[b]
    return 0.0 if den == 0 else 2 * ic[lcs] / den


class TestRunningExample:
    def test_consim(self, fig3, table1):
        wt = weigh(fig3, "TD")
        assert consim(wt, "Employee", "Freelance") == pytest.approx(0.5, abs=1e-12)
        assert consim(wt, "Employee", "Student") == 0.0
        assert consim(wt, "Person", "Person") == 1.0
        # root vs non-root: numerator 0
        assert consim(wt, "Person", "Worker") == 0.0

    def test_semsim_norms(self, fig3):
        wt = weigh(fig3, "TD")
        a, b = ("Worker", "Student"), ("Student",)
        assert semsim(wt, a, b, "min") == 1.0
        assert semsim(wt, a, b, "max") == 0.5
        assert semsim(wt, a, b, "ave") == pytest.approx(2 / 3, abs=1e-12)
        assert semsim(wt, a, b, "gav") == pytest.approx(1 / math.sqrt(2), abs=1e-12)

    def test_table1_matrix(self, fig3, table1):
        m = similarity_matrix(weigh(fig3, "TD"), table1, "max")
        expected = np.array([[1, 1 / 3, .5, 1 / 3], [1 / 3, 1, 0, .5], [.5, 0, 1, 0], [1 / 3, .5, 0, 1]])
        np.testing.assert_allclose(m.values, expected, atol=1e-12)
        assert m.method == "semsim:TD:max"

    def test_root_only_vectors(self, fig3):
        # both ICs are zero: identical concept still scores 1
        wt = weigh(fig3, "TD")
        assert semsim(wt, ("Person",), ("Person",)) == 1.0
        assert semsim(wt, ("Person",), ("Worker",)) == 0.0

    def test_infinite_ic_scores_zero(self, fig3):
        corpus = Corpus([Resource("x", ("Student",)), Resource("y", ("Employee",))], fig3)
        wt = weigh(fig3, "CF", corpus)
        assert wt.ic_of("Freelance") == math.inf
        assert consim(wt, "Freelance", "Employee") == 0.0
        assert consim(wt, "Freelance", "Freelance") == 1.0


class TestValidation:
    def test_empty_vector(self, fig3):
        with pytest.raises(EmptyVector):
            semsim(weigh(fig3, "TD"), (), ("Worker",))

    def test_duplicate(self, fig3):
        with pytest.raises(DuplicateConcept):
            semsim(weigh(fig3, "TD"), ("Worker", "Worker"), ("Worker",))

    def test_unknown(self, fig3):
        with pytest.raises(UnknownConcept):
            semsim(weigh(fig3, "TD"), ("Robot",), ("Worker",))

    def test_unknown_resource_in_matrix(self, fig3, table1):
        m = similarity_matrix(weigh(fig3, "TD"), table1)
        with pytest.raises(UnknownResource):
            m.get("r1", "nope")

    def test_bad_norm(self):
        with pytest.raises(ValueError):
            NormFactor.parse("median")


def test_against_independent_oracle(rng):
    for _ in range(100):
        t = random_taxonomy(int(rng.integers(2, 30)), rng)
        edges = t.edges()
        ic = td_ic_oracle(edges)
        wt = weigh(t, "TD")
        a = random_vector(t, rng, int(rng.integers(1, 5)), include_root=True)
        b = random_vector(t, rng, int(rng.integers(1, 5)), include_root=True)
        w = [[consim_oracle(edges, ic, x, y) for y in b] for x in a]
        best = brute_force_matching(w)
        for norm in NormFactor:
            assert semsim(wt, a, b, norm) == pytest.approx(best / norm.mu(len(a), len(b)), abs=1e-12)


def test_norm_ordering(rng):
    t = random_taxonomy(40, rng)
    corpus = random_corpus(t, 30, rng)
    for method in "CF", "AF", "TD", "IIC":
        wt = weigh(t, method, corpus)
        for _ in range(50):
            a = random_vector(t, rng, int(rng.integers(1, 7)))
            b = random_vector(t, rng, int(rng.integers(1, 7)))
            v = {n: semsim(wt, a, b, n) for n in NormFactor}
            assert v[NormFactor.MAX] <= v[NormFactor.AVE] <= v[NormFactor.GAV] <= v[NormFactor.MIN]
            assert all(0.0 <= x <= 1.0 for x in v.values())


def test_symmetry_is_exact(rng):
    t = random_taxonomy(60, rng)
    corpus = random_corpus(t, 20, rng)
    for method in "CF", "AF", "TD", "IIC":
        wt = weigh(t, method, corpus)
        for _ in range(100):
            a = random_vector(t, rng, int(rng.integers(1, 7)))
            b = random_vector(t, rng, int(rng.integers(1, 7)))
            for norm in NormFactor:
                assert semsim(wt, a, b, norm) == semsim(wt, b, a, norm)
                # annotation order inside a vector must not matter either
                assert semsim(wt, a[::-1], b, norm) == semsim(wt, a, b, norm)


def test_self_similarity_is_one(rng):
    t = random_taxonomy(30, rng)
    wt = weigh(t, "IIC")
    for _ in range(20):
        a = random_vector(t, rng, int(rng.integers(1, 6)))
        assert semsim(wt, a, a) == pytest.approx(1.0, abs=1e-12)


class TestMatrix:
    def test_scalar_and_matrix_agree(self, rng):
        t = random_taxonomy(50, rng)
        corpus = random_corpus(t, 30, rng)
        for method in "AF", "IIC":
            wt = weigh(t, method, corpus)
            for norm in NormFactor:
                m = similarity_matrix(wt, corpus, norm)
                for a in corpus.ids[:10]:
                    for b in corpus.ids:
                        assert m.get(a, b) == semsim(wt, corpus[a].av, corpus[b].av, norm)

    def test_jobs_do_not_change_values(self, rng):
        t = random_taxonomy(50, rng)
        corpus = random_corpus(t, 70, rng)
        wt = weigh(t, "CF", corpus)
        one = similarity_matrix(wt, corpus, jobs=1).values
        four = similarity_matrix(wt, corpus, jobs=4).values
        assert np.array_equal(one, four)
        assert np.array_equal(one, one.T)

    def test_single_resource(self, fig3):
        corpus = Corpus([Resource("only", ("Worker",))], fig3)
        m = similarity_matrix(weigh(fig3, "TD"), corpus)
        assert m.values.shape == (1, 1) and m.values[0, 0] == 1.0
        assert m.to_csv() == ",only\nonly,1.000000\n"

    def test_json(self, fig3, table1):
        import json
        payload = json.loads(similarity_matrix(weigh(fig3, "TD"), table1, "max").to_json())
        assert payload["ids"] == ["r1", "r2", "r3", "r4"]
        assert payload["values"][0][1] == 0.333333


class TestMatching:
    def test_running_example(self, fig3):
        m = best_matching(weigh(fig3, "TD"), ("Worker", "Student"), ("Student",))
        assert m.pairs == ((1, 0, 1.0),)
        assert m.total == 1.0

    def test_lexicographic_tie_break(self):
        w = np.ones((2, 2))
        assert [p[:2] for p in lexicographic_assignment(w).pairs] == [(0, 0), (1, 1)]
        w = np.array([[0.5, 0.5, 0.0], [0.5, 0.0, 0.0]])
        assert [p[:2] for p in lexicographic_assignment(w).pairs] == [(0, 1), (1, 0)]

    def test_zero_pairs_included(self):
        m = lexicographic_assignment(np.zeros((2, 3)))
        assert len(m.pairs) == 2 and m.total == 0.0

    def test_total_is_optimal(self, rng):
        for _ in range(100):
            n, k = rng.integers(1, 6, size=2)
            w = np.round(rng.random((n, k)) * 4) / 4
            m = lexicographic_assignment(w)
            assert len(m.pairs) == min(n, k)
            assert m.total == pytest.approx(brute_force_matching(w.tolist()), abs=1e-12)
