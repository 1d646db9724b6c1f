"""Ontology-based semantic similarity between annotated resources.

Weighted information-content concept similarity combined through an optimal
one-to-one concept matching, six comparison measures, and a Monte-Carlo
cohesion test for validating similarity methods against curated sets.
"""

__version__ = "0.1.0"

from .corpus import Corpus, Resource, load_corpus, save_corpus
from .errors import SemsimError
from .kernels import BACKEND as KERNEL_BACKEND
from .semsim import Matching, NormFactor, SimilarityMatrix, best_matching, consim, semsim, similarity_matrix
from .taxonomy import DagScheme, Taxonomy, load_dag, load_taxonomy, treeify_dag
from .weighting import WeightedTaxonomy, WeightingMethod, weigh

__all__ = [
    "KERNEL_BACKEND",
    "Corpus",
    "DagScheme",
    "Matching",
    "NormFactor",
    "Resource",
    "SemsimError",
    "SimilarityMatrix",
    "Taxonomy",
    "WeightedTaxonomy",
    "WeightingMethod",
    "best_matching",
    "consim",
    "load_corpus",
    "load_dag",
    "load_taxonomy",
    "save_corpus",
    "semsim",
    "similarity_matrix",
    "treeify_dag",
    "weigh",
]
