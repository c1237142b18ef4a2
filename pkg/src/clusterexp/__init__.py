"""Exact computations for abstract polymer gases and cluster-expansion criteria."""

from .criteria import (ALL_KINDS, DOB, FP, IMPDOB, KP, CriterionKind, FixedPointResult,
                       RadiusResult, bound_chain, bounded_degree_radius, condition_holds,
                       fixed_point, geometric_interpolation_check, homogeneous_radius, phi,
                       scott_sokal_reference, t_map)
from .exact import (IndependencePolynomial, OutsideRegionError, configuration_weight,
                    independence_polynomial, independent_sets, neighborhood_xi,
                    partition_function, pi_volume, pinned_derivative, pinned_log_ratio)
from .graph import (CapExceeded, ClusterGraph, InteractionGraph, are_compatible, build_graph,
                    closed_neighborhood, cluster_graph, graph_from_json, graph_to_json,
                    induced_subgraph, is_connected, load_graph, open_neighborhood,
                    parse_graph_text, format_graph_text)
from .models import (PAPER_TRIANGULAR_POLYNOMIAL, ModelDescriptor, SubsetPolymerFamily,
                     bounded_degree_phi, build_family_graph, central_polymer, complete_graph,
                     domino_family, gruber_kunz_condition, model_graph, model_phi,
                     neighborhood_polynomial, parse_model, regular_tree_graph, self_exclusion,
                     subset_criteria_table3, triangular_lattice_graph, triangular_site_family)
from .trees import (PlanarRootedTree, TruncationError, iterate_via_trees,
                    labeled_rooted_tree_count, planar_multiplicity, planar_trees, tree_bound_sum,
                    tree_layer, tree_remainder, vertex_function)
from .ursell import (PartitionReport, RootedLabeledTree, css_signed_sum,
                     enumerate_rooted_spanning_trees, mayer_log_truncated, penrose_closure,
                     penrose_tree_count, pi_truncated, truncated_function, ursell_coefficient,
                     verify_partition_scheme)

__all__ = ["ALL_KINDS", "are_compatible", "bound_chain", "bounded_degree_phi",
           "bounded_degree_radius", "build_family_graph", "build_graph", "CapExceeded",
           "central_polymer", "closed_neighborhood", "cluster_graph", "ClusterGraph",
           "complete_graph", "condition_holds", "configuration_weight", "CriterionKind",
           "css_signed_sum", "DOB", "domino_family", "enumerate_rooted_spanning_trees",
           "fixed_point", "FixedPointResult", "format_graph_text", "FP",
           "geometric_interpolation_check", "graph_from_json", "graph_to_json",
           "gruber_kunz_condition", "homogeneous_radius", "IMPDOB", "independence_polynomial",
           "IndependencePolynomial", "independent_sets", "induced_subgraph",
           "InteractionGraph", "is_connected", "iterate_via_trees", "KP",
           "labeled_rooted_tree_count", "load_graph", "mayer_log_truncated", "model_graph",
           "model_phi", "ModelDescriptor", "neighborhood_polynomial", "neighborhood_xi",
           "open_neighborhood", "OutsideRegionError", "PAPER_TRIANGULAR_POLYNOMIAL",
           "parse_graph_text", "parse_model", "partition_function", "PartitionReport",
           "penrose_closure", "penrose_tree_count", "phi", "pi_truncated", "pi_volume",
           "pinned_derivative", "pinned_log_ratio", "planar_multiplicity", "planar_trees",
           "PlanarRootedTree", "RadiusResult", "regular_tree_graph", "RootedLabeledTree",
           "scott_sokal_reference", "self_exclusion", "subset_criteria_table3",
           "SubsetPolymerFamily", "t_map", "tree_bound_sum", "tree_layer", "tree_remainder",
           "triangular_lattice_graph", "triangular_site_family", "truncated_function",
           "TruncationError", "ursell_coefficient", "verify_partition_scheme",
           "vertex_function"]

__version__ = "0.1.0"
