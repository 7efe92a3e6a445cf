"""Approximation algorithms for the subset k-connected subgraph problem."""

from .connectivity import (
    DeficientSet,
    enumerate_deficient_sets,
    exists_deficient_set,
    rooted_connectivity,
    subset_connectivity,
)
from .cores import CoreRecord, ThicknessTable, compute_cores, compute_core_records, compute_halo_set, thickness_table
from .errors import GuardViolation, InfeasibleError, InputError, SizeLimitError, StateError
from .graph import Graph, local_connectivity, min_cost_disjoint_paths, min_cut_side
from .oracle import Certificate, brute_force_rooted_optimum, brute_force_subset_optimum, verify_solution
from .reduction import ReductionMap, RootedInstance, map_solution_back, map_solution_forward, rooted_to_subset
from .rooted import RootedAugmentRequest, augment_rooted, root_pad
from .solver import Instance, SolveReport, SolverConfig, compose_small_T_solver, iterative_solve, solve, trivial_pairwise

__all__ = [
    "Certificate",
    "CoreRecord",
    "DeficientSet",
    "Graph",
    "GuardViolation",
    "InfeasibleError",
    "InputError",
    "Instance",
    "ReductionMap",
    "RootedAugmentRequest",
    "RootedInstance",
    "SizeLimitError",
    "SolveReport",
    "SolverConfig",
    "StateError",
    "ThicknessTable",
    "augment_rooted",
    "brute_force_rooted_optimum",
    "brute_force_subset_optimum",
    "compose_small_T_solver",
    "compute_core_records",
    "compute_cores",
    "compute_halo_set",
    "enumerate_deficient_sets",
    "exists_deficient_set",
    "iterative_solve",
    "local_connectivity",
    "map_solution_back",
    "map_solution_forward",
    "min_cost_disjoint_paths",
    "min_cut_side",
    "root_pad",
    "rooted_connectivity",
    "rooted_to_subset",
    "solve",
    "subset_connectivity",
    "thickness_table",
    "trivial_pairwise",
    "verify_solution",
]
