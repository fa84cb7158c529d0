"""Blockage certificates for committee-tree games and packing/covering for uniform 2-sum trees."""

from .committee import CommitteeTree, Outcome, build, parse_ctree, vote_outcome
from .engine import Certificate, Kind, find_certificate, verify_certificate
from .kernels import BACKEND
from .matroids import MatroidPair, TreeOfMatroids, UniformMatroid, parse_tmat

__all__ = [
    "BACKEND", "Certificate", "CommitteeTree", "Kind", "MatroidPair", "Outcome",
    "TreeOfMatroids", "UniformMatroid", "build", "find_certificate", "parse_ctree",
    "parse_tmat", "verify_certificate", "vote_outcome",
]
