"""Fully dynamic transitive reduction for directed graphs.

Maintains the edge set of a minimal reachability-preserving subgraph
under centered edge-set insertions and arbitrary edge-set deletions,
through two independent engines (combinatorial snapshot counters and a
randomized prime-field matrix inverse) plus a brute-force oracle.
"""

from .algebraic import AlgebraicDag, AlgebraicGeneral
from .graph_core import DeleteSet, InsertCentered, TimestampedGraph
from .scc_snapshots import ParallelGroup, SccSnapshots
from .tr_dag import TrDag
from .tr_general import TrGeneral, minimal_scss

__version__ = "0.1.0"

__all__ = [
    "AlgebraicDag",
    "AlgebraicGeneral",
    "DeleteSet",
    "InsertCentered",
    "ParallelGroup",
    "SccSnapshots",
    "TimestampedGraph",
    "TrDag",
    "TrGeneral",
    "minimal_scss",
    "__version__",
]
