"""Join-reachability graphs and indexes for pairs of directed graphs."""

from .graph import (
    CyclicGraphError,
    Digraph,
    DfsIntervals,
    GraphClassError,
    NcaIndex,
    ReachMatrix,
    condense_pair,
    dfs_intervals,
    dipath_of,
    layer_decompose,
    nca_build,
    nca_query,
    path_order,
    read_graph,
    transitive_closure,
    write_graph,
)
from .geom import (
    CartesianTree,
    EnclosureIndex,
    HSegment,
    Point2,
    RangeTree2D,
    Rect,
    SegRayIndex,
    ct_build,
    ct_dominance_report,
    ct_range_report,
    enclosure_build,
    enclosure_report,
    range2d_build,
    range2d_report,
    seg_build,
    seg_report,
)
from .hpd import (
    hpd_build,
    hpd_two_trees_build,
    hpd_two_trees_report,
    intree_build,
    intree_report,
    outtree_build,
    outtree_report,
)
from .minimal import and_closure, minimal_restricted_join, transitive_reduction
from .cover import FromRanks, PathCover, from_ranks, min_path_cover
from .explicit import (
    JoinGraph,
    build_pathcover,
    build_tree_path,
    build_two_paths,
    build_two_trees,
    build_unoriented_trees,
    gen_bitreversal,
    read_join,
    split_unoriented_path,
    verify_join_graph,
    write_join,
)
from .jrindex import (
    JRIndex,
    index_hpd_two_trees,
    index_pathcover,
    index_planar_st,
    index_tree_path,
    index_two_paths,
    index_two_trees,
    kameda_labels,
    query,
)
from .gen import GENERATOR_KINDS, InstanceSpec, generate

__all__ = [name for name in dir() if not name.startswith("_")]
