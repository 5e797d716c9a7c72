"""Bigraded differential graded Lie algebras and the reduction machinery."""

from .algebra import (
    WDGLA, AxiomReport, BlockCohomology, Cohomology, DGLAMorphism, NotClosed, check_dgla_axioms,
    cohomology, induced_on_cohomology, is_one_quasi_iso, quasi_iso_report, quotient, subalgebra,
)
from .builders import (
    GradedAlgebra, GradedLie, check_cdga_axioms, chevalley_eilenberg, exterior_algebra,
    graded_lie_from_matrices, ground_field, lie_dgla, tensor_dgla,
)
from .equivariant import (
    Augmentation, AugmentationKernel, NotAutomorphic, augmentation_kernel, average_augmentations,
    averaging_projector, cohomology_fixed_dims, group_closure, invariants,
)
from .io import WDGLAFormatError, dump_wdgla, lie_from_spec, load_wdgla, wdgla_from_dict, wdgla_to_dict
from .mc import MCElement, bch, curvature, gauge, is_mc
from .weights import (
    PreconditionError, ReductionResult, TruncationResult, WeightReport, check_weight_axioms,
    reduce_to_quadratic, truncate, truncation_ideal,
)

__all__ = [
    "WDGLA", "AxiomReport", "BlockCohomology", "Cohomology", "DGLAMorphism", "NotClosed",
    "check_dgla_axioms", "cohomology", "induced_on_cohomology", "is_one_quasi_iso",
    "quasi_iso_report", "quotient", "subalgebra",
    "GradedAlgebra", "GradedLie", "check_cdga_axioms", "chevalley_eilenberg", "exterior_algebra",
    "graded_lie_from_matrices", "ground_field", "lie_dgla", "tensor_dgla",
    "Augmentation", "AugmentationKernel", "NotAutomorphic", "augmentation_kernel",
    "average_augmentations", "averaging_projector", "cohomology_fixed_dims", "group_closure",
    "invariants",
    "WDGLAFormatError", "dump_wdgla", "lie_from_spec", "load_wdgla", "wdgla_from_dict", "wdgla_to_dict",
    "MCElement", "bch", "curvature", "gauge", "is_mc",
    "PreconditionError", "ReductionResult", "TruncationResult", "WeightReport",
    "check_weight_axioms", "reduce_to_quadratic", "truncate", "truncation_ideal",
]
