"""Exact multiplier spectra of quadratic self-maps of the projective plane."""

from .errors import (
    DegenerateMap,
    MixedFields,
    NoInvariantLine,
    NonGenericTarget,
    NonSimpleLineFixedPoint,
    PreconditionError,
    QuadspecError,
    ResourceBudgetExceeded,
    TowerTooDeep,
)
from .scalars import QE, Scalar, make_qe, rat, scalar_from_str, scalar_to_str
from .poly import GREVLEX, GRLEX, LEX, BlockOrder, MPoly, homogeneous_check, lie_derivative
from .groebner import (
    Budget,
    Ideal,
    QuotientAlgebra,
    SaturatedAlgebra,
    univariate_roots,
    verify_groebner_basis,
)
from .projmap import (
    AffineNormalForm,
    FixedPointRecord,
    HomQuadVF,
    LineP2,
    QuadraticMapP2,
    SpectrumRecord,
    affine_normal_form,
    auxiliary_vf,
    fixed_points,
    invariant_lines,
    kowalevski_exponents,
    map_to_vf,
    normal_form_to_map,
    relative_fixed_point_sum,
    spectrum,
    vf_to_map,
)
from .relations import (
    BetaTriple,
    RelationReport,
    SymmetricProfile,
    check_known_relations,
    cleared_relation_values,
    discriminant,
    independence_certificate,
    jacobi_residues,
    known_relation_residuals,
    mattuck_complete,
    reduced_relation_polys,
    reduced_relations,
    symmetric_profile,
)
from .realizability import (
    NormalizationSolution,
    RealizationResult,
    TargetSpectrum,
    TestVerdict,
    build_family_ideal,
    compute_h,
    param_map,
    realize_maps,
    run_test,
    run_test_target,
    solve_normalization,
    spectral_rank,
)

from .kowalevski import (
    CandidateStore,
    ExponentCandidate,
    PipelineResult,
    enumerate_unit_fractions,
    expand_factorizations,
    extract_plane_triples,
    family_of,
    ode_dataset,
    pipeline_seventh_family,
    verify_ode_reduction,
)

__version__ = "0.1.0"
