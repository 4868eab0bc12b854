"""Storage codes on graphs: constructions, interleaving, exact bounds and an LP bound."""
from .bounds import (BoundCertificate, CapacityReport, LowerBound, anticode_certificate, anticode_max,
                     axial_dag_set, brute_anticode, capacity_certificate, code_anticode_bound,
                     diff_avoiding_bound, independence_certificate, mais_certificate, oracle_max_code,
                     window_series)
from .codes import Code, LinearCode, rate, verify_storage_code
from .construct import (clique_partition_code, edge_to_vertex_code, gcd_scheme_code, lattice_tiling,
                        matching_code, row_parity_code, stacked_code, tiling_code)
from .designs import (OrthogonalPartitionFamily, ResolvableDesign, affine_design, builtin_family_3x5,
                      design_from_family, family_from_design, verify_design, verify_family)
from .errors import CapExceeded, EmptySubcode, InconsistentBounds, InputError, StocError
from .experiments import PRESETS, run_experiment
from .graphs import Graph, RecoverySet, build_graph, is_dag, recovery_set, window_graph
from .interleave import build_interleaved_graph, greedy_coloring, interleave_tuple, interleaved_code
from .lp import lp_capacity_bound
from .search import clique_cover_number, independence_number, mais, max_b_avoiding, max_matching

__all__ = [name for name in dir() if not name.startswith("_")]
