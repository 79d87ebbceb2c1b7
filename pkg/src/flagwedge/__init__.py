"""flagwedge: directed flag complexes and tournaplexes from digraphs, exact
integral homology, and collapse/cone machinery that decomposes complexes into
wedges of spheres and Moore spaces with verifiable certificates."""

from .classify import (
    HomotopyDescriptor,
    batch_classify,
    classify_tournament,
    moore_decomposition,
)
from .collapse import (
    CollapseStep,
    pop_everything,
    select_cells,
    seq_collapse,
    seq_collapsible,
)
from .digraph import (
    Digraph,
    automorphisms,
    degree_signature_partition,
    describe_group,
    random_digraph,
)
from .flag import (
    Tournaplex,
    WeightUnavailableError,
    directed_flag_complex,
    filtration_stage,
    flag_tournaplex,
    graph_with_3cycle_triangles,
    register_weight,
    undirected_flag_complex,
)
from .homology import (
    HomologyProfile,
    betti_only,
    boundary_matrix,
    integral_homology,
)
from .intlinalg import (
    IntMatrix,
    hermite_normal_form,
    nullspace,
    smith_normal_form,
)
from .simplex import Complex, cone, faces, pop, short_lex_compare
from .wedge import (
    Certificate,
    cone_and_collapse,
    find_good_components,
    find_good_cycles,
    unique_simplices,
    verify_certificate,
    wedge_summary,
)

__version__ = "0.1.0"
