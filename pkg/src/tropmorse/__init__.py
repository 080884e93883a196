#
#   Exact-arithmetic toolkit for tropical Morse trees and graphs on the
#   circle R/dZ: product tensors over truncated q-series, relation
#   verification with degeneration certificates, stable-graph bookkeeping,
#   and the t-graded permutation operad.
#

from .base_geometry import (CirclePoint, Lagrangian, IntersectionPoint,
                            intersection_points, hom_generators,
                            self_hom_generators, is_transversal, auto_perturb)
from .stable_graph import (StableGraph, Contraction, validate, total_genus,
                           contract, edge_count_identity, are_isomorphic,
                           star, enumerate_iso_classes)
from .perm_operad import (Permutation, STGenerator, parse_cycles, generators,
                          pi_ff, compose_edge, compose_loop,
                          feynman_preimages, generator_degree,
                          block_rotation_sign, loop_preimage_sign, F, FP)
from .graded_tensor import (NovikovSeries, GradedGenerator, PairingB, Tensor,
                            koszul_sign_oracle, tensor_degree, contract_pair,
                            contract_loop)
from .tropical_moduli import (RibbonType, ConstraintSystem, SolveResult,
                              TMGSolution, build_system, solve, instantiate,
                              mark_edges, enumerate_types, expected_dimension,
                              rigid_solutions, surface_area, surface_sign,
                              one_dim_cells, walk_family, cut_edge)
from .fukaya_products import (ProductRequest, MuTensor, RelationReport,
                              assemble_mu, as_multilinear, verify_a_infinity,
                              verify_quantum, chain_map_check)

__version__ = "0.1.0"

__all__ = [
    "CirclePoint", "Lagrangian", "IntersectionPoint", "intersection_points",
    "hom_generators", "self_hom_generators", "is_transversal", "auto_perturb",
    "StableGraph", "Contraction", "validate", "total_genus", "contract",
    "edge_count_identity", "are_isomorphic", "star", "enumerate_iso_classes",
    "Permutation", "STGenerator", "parse_cycles", "generators", "pi_ff",
    "compose_edge", "compose_loop", "feynman_preimages", "generator_degree",
    "block_rotation_sign", "loop_preimage_sign", "F", "FP",
    "NovikovSeries", "GradedGenerator", "PairingB", "Tensor",
    "koszul_sign_oracle", "tensor_degree", "contract_pair", "contract_loop",
    "RibbonType", "ConstraintSystem", "SolveResult", "TMGSolution",
    "build_system", "solve", "instantiate", "mark_edges", "enumerate_types",
    "expected_dimension", "rigid_solutions", "surface_area", "surface_sign",
    "one_dim_cells", "walk_family", "cut_edge",
    "ProductRequest", "MuTensor", "RelationReport", "assemble_mu",
    "as_multilinear", "verify_a_infinity", "verify_quantum",
    "chain_map_check",
]
