"""Online deadline-constrained bipartite matching, exact and sketched."""

from .errors import (
    BadParameter, BadValue, DimensionMismatch, EmptyDimension, EmptyFile, EmptyInput,
    NonFiniteInput, OracleTooLarge, ParseError, RaggedRows, RoleAlreadyFixed, SketchMatchError,
)
from .market import Instance, MatchOutcome, Node, Role, edge_weight, feasible
from .kernels import BACKEND

__version__ = "0.1.0"
