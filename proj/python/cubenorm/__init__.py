"""Data cube normalization: HOLAP storage cost and normalization heuristics.

Exact quantities (costs, densities, Independence Sums) are returned as
fractions.Fraction. Normalizations are lists of permutations, one per
dimension; entry i of a permutation is the source index placed at i.
"""

from ._core import (
    Cube,
    CubeError,
    add_noise,
    apply,
    compose,
    equivalence_class_cardinality,
    export_cube,
    fs_bound,
    holap_cost,
    import_cube,
    independence_sum,
    kernel_cube,
    load_relation,
    min_weight_perfect_matching,
    normalize,
    per_cell_cost,
    random_normalization,
    run_experiment,
)

__all__ = [
    "Cube",
    "CubeError",
    "add_noise",
    "apply",
    "compose",
    "equivalence_class_cardinality",
    "export_cube",
    "fs_bound",
    "holap_cost",
    "import_cube",
    "independence_sum",
    "kernel_cube",
    "load_relation",
    "min_weight_perfect_matching",
    "normalize",
    "per_cell_cost",
    "random_normalization",
    "run_experiment",
]
