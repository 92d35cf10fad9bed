"""Directed path spaces of finite pre-cubical sets.

Exact PL d-paths, tracks and progress functions, tamification, cube chains,
the cube chain category and integer homology of its nerve.
"""

from .chains import (
    ChainCategory,
    ChainMorphism,
    ChainType,
    CubeChain,
    OrderedPartition,
    assemble_path,
    category,
    chain_face,
    compose,
    enumerate_chains,
    morphisms_between,
)
from .homology import HomologyReport, homology, smith_normal_form
from .nerve import NerveComplex, build_nerve
from .precubical import (
    Cube,
    ModelError,
    Point,
    PrecubicalSet,
    boundary_cube,
    canonical_point,
    double_cube,
    grid_complex,
    iterated_face,
    standard_cube,
    validate,
    wedge,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "assemble_path",
    "boundary_cube",
    "build_nerve",
    "canonical_point",
    "category",
    "chain_face",
    "ChainCategory",
    "ChainMorphism",
    "ChainType",
    "compose",
    "Cube",
    "CubeChain",
    "double_cube",
    "enumerate_chains",
    "execution_space_homology",
    "grid_complex",
    "homology",
    "HomologyReport",
    "iterated_face",
    "ModelError",
    "morphisms_between",
    "NerveComplex",
    "OrderedPartition",
    "Point",
    "PrecubicalSet",
    "smith_normal_form",
    "standard_cube",
    "validate",
    "wedge",
]


def execution_space_homology(K: PrecubicalSet, n: int) -> HomologyReport:
    """Homology of the nerve of the cube chain category of length ``n``."""
    return homology(build_nerve(category(K, n)))
