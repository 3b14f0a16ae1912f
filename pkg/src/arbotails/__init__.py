"""Tails of the colored Jones polynomial for alternating arborescent links.

Weighted planar trees go in; out come Tait graphs, products of the theta-type
series h_b, explicit q-multisums to compare against, and numerical limits of
h log f(e^-h) as h -> 0.
"""
from . import asymptotics, qseries
from .errors import (
    AmbiguousZero,
    ArboTailsError,
    DegenerateLink,
    DomainError,
    FitError,
    InsufficientPrecision,
    InvalidArgument,
    NoConvergence,
    NotAlternating,
    NotInvertible,
    NotReduced,
    NumericalError,
    TheoremNotApplicable,
    TreeSyntaxError,
)
from .qseries import TruncatedSeries, hb, poch_finite, poch_infinite, qbinom
from .tait import (
    LinkTaitGraph,
    PolygonDecomposition,
    TaitPair,
    TwoTerminalGraph,
    close,
    link_tait,
    polygon_decomposition,
    tangle_tait,
)
from .tails import (
    MultisumSpec,
    TailProduct,
    montesinos_tails,
    multisum,
    tail_product,
    tail_series,
    two_bridge_tails,
)
from .trees import (
    KNOWN_TREES,
    Weight,
    WeightedTree,
    bipartition,
    mirror,
    montesinos,
    parse_tree,
    pretzel,
    to_dsl,
    two_bridge,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
