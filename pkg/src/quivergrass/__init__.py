"""Exact quiver representation toolkit over prime fields.

Covers Dynkin quiver indecomposables and AR theory, the category of
projective-resolution pairs with its bound quiver, subrepresentation
Grassmannians with point counts and stratifications, and the associated
desingularization reports.
"""

__version__ = "0.1.0"

from .fields import PrimeField
from .quiver import Quiver, load_quiver, parse_arrow_spec
from .reps import Representation, direct_sum, hom_basis, simple_rep, zero_rep
