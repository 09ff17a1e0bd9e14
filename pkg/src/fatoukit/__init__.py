"""fatoukit: Fatou/Julia-like sets, escaping sets and structure checks for
families of holomorphic functions on rectangular windows."""

from .backends import active_backend, set_backend
from .escape import EscapeParams, classify_I, classify_U, escape_profile
from .family import (FamilySpec, FiniteSet, Member, Parametric, Semigroup,
                     UnionSpec, enumerate_members, fingerprint,
                     intersect_families, print_family)
from .normality import (ClassificationMap, NormalityParams,
                        classify_normality, marty_score,
                        spherical_derivative)
from .orbit import (OrbitLimits, PointSet, backward_orbit,
                    exceptional_candidates, preimages)
from .parser import ParseError, parse_expr, parse_family
from .pipeline import analyze, classify
from .window import DiskMask, Window

__version__ = "0.1.0"

__all__ = [
    "ClassificationMap", "DiskMask", "EscapeParams", "FamilySpec",
    "FiniteSet", "Member", "NormalityParams", "OrbitLimits", "ParseError",
    "Parametric", "PointSet", "Semigroup", "UnionSpec", "Window",
    "active_backend", "analyze", "backward_orbit", "classify", "classify_I",
    "classify_U", "classify_normality", "enumerate_members",
    "escape_profile", "exceptional_candidates", "fingerprint",
    "intersect_families", "marty_score", "parse_expr", "parse_family",
    "preimages", "print_family", "set_backend", "spherical_derivative",
    "__version__",
]
