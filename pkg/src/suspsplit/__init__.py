"""Wedge decompositions of the suspension of simply connected (2n+2)-manifolds.

The pipeline reads the homology and operation data of a manifold, reduces
the attaching map of the top cell to a normal form and returns the
suspension as a wedge of elementary complexes.
"""

from .catalog import SpaceTerm, Wedge, format_term, parse_term, parse_wedge
from .decomposer import (
    DecompositionResult,
    ManifoldInput,
    OperationProfile,
    Sq2Data,
    decide,
    reduce_phi,
)
from .normalizer import AttachingVector, normalize
from .pi_tables import pi
from .torsion import FinAbGroup, PrimePower

__version__ = "0.1.0"

__all__ = [
    "AttachingVector", "DecompositionResult", "FinAbGroup", "ManifoldInput",
    "OperationProfile", "PrimePower", "SpaceTerm", "Sq2Data", "Wedge", "decide",
    "format_term", "normalize", "parse_term", "parse_wedge", "pi", "reduce_phi",
]
