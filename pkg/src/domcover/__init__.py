"""Distributed-style dominating-set algorithms built on vertex-cover
reductions: derived multigraphs, random-priority bounds, mark counting,
a round-synchronous simulator and several extensions."""

from .construct import (alon_spencer_is, build_g_dprime, build_g_prime, carowei_ds,
                        carowei_tds, caro_wei_bound, random_pair)
from .cover import CoverKind, CoverSolver, vc_exact, vc_greedy, vc_matching
from .errors import (DomcoverError, InfeasibleError, InvariantError, OracleLimitError,
                     ParseError, PreconditionError)
from .extensions import (SetCoverInstance, constrained_alg1, constrained_alg2,
                         dynamic_add_vertex, dynamic_remove_vertex, k_dominating, set_cover)
from .graph import (Graph, LoopMultigraph, SetKind, VertexSet, is_dominating,
                    is_total_dominating, is_vertex_cover, load_edge_list, load_metis,
                    power_graph)
from .marking import (MarkState, Scope, alg1, alg2, build_g1_dprime, combine_solutions,
                      mod1, mod2, run_alg2)
from .oracles import brute_force_mds, brute_force_mtds, brute_force_mvc
from .rng import RngPolicy
from .sim import RoundTrace, alg1_program, carowei_program, run_sync

__version__ = "0.1.0"
