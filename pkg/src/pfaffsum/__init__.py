"""Exact pfaffians of matrices of forms and certified bounds on how many
pfaffians with a prescribed degree matrix express a general form."""

__version__ = "0.1.0"

from .degree_matrix import DegreeMatrix, from_diagonal
from .exact_core import DEFAULT_PRIME, SECOND_PRIME, DenseMatrixFp, PrimeField, rank
from .pfaffian import SkewPolyMatrix, pfaffian, random_skew, submaximal_pfaffians
from .polyring import HomogeneousPoly, SeededRng, random_form
from .terracini import (GeneratorSet, RankWitness, estimate_s, generic_forms_full,
                        ideal_full_in_degree, lefschetz_surjective)

__all__ = [
    "DEFAULT_PRIME", "SECOND_PRIME", "DegreeMatrix", "DenseMatrixFp", "GeneratorSet",
    "HomogeneousPoly", "PrimeField", "RankWitness", "SeededRng", "SkewPolyMatrix",
    "estimate_s", "from_diagonal", "generic_forms_full", "ideal_full_in_degree",
    "lefschetz_surjective", "pfaffian", "random_form", "random_skew", "rank",
    "submaximal_pfaffians",
]
