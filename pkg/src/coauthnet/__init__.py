"""Coauthorship network analytics.

Project paper/author records into a coauthorship graph, then compute
centralities, communities, whole-network statistics and rank tables.
"""

from .centrality import (
    BetweennessCentrality,
    CentralityVector,
    ClosenessCentrality,
    DegreeCentrality,
    PageRank,
    betweenness_centrality,
    closeness_centrality,
    compute_all,
    degree_centrality,
    pagerank,
)
from .community import Louvain, Partition, detect_communities, modularity
from .exceptions import (
    CoauthnetError,
    ConfigError,
    ConvergenceError,
    NodeNotFoundError,
    UndefinedValueError,
)
from .export import export_graph, read_edge_csv
from .graph import (
    CoauthorGraph,
    ComponentLabeling,
    build_graph,
    connected_components,
    induced_subgraph,
    neighborhood_closure,
    read_edgelist,
)
from .ingest import (
    AffiliationIndex,
    CoauthorshipProjector,
    PaperRecord,
    build_affiliation_index,
    filter_records,
    parse_records,
    project_coauthorship,
    read_records,
)
from .report import AffiliationReport, RankTable, affiliation_report, ego_network, rank_table
from .stats import (
    NetworkSummarizer,
    NetworkSummary,
    avg_clustering,
    avg_degree,
    diameter_and_apl,
    summarize,
)

__version__ = "0.1.0"
