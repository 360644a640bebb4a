from .errors import (
    AllOrthogonal,
    CanonicalPairNotInTable,
    CoincidentPoints,
    DepthOverflow,
    DimensionMismatch,
    EmptyQuadric,
    EmptySet,
    InvalidModule,
    InvalidSimpleSystem,
    IsotropicMirror,
    KernelCrossing,
    LimitRootsError,
    LimitSetUnknown,
    NotPositivelyIndependent,
    OnKernel,
    UnknownSystem,
    UnsupportedRank,
)
from .bilinear_core import (
    FormType,
    GeometricModule,
    SignatureReport,
    bilinear,
    build_module,
    components,
    form_type,
    quadratic,
    radical_cone_trivial,
    reflect,
    signature,
)
from .root_enumeration import (
    KappaReport,
    Root,
    RootTable,
    apply_word,
    audit_depth_norm,
    enumerate_roots,
    kappa_lambda,
    level_counts,
    root_descent,
    words_up_to,
)
from .projective_normalization import (
    NormalizedPoint,
    TransverseHyperplane,
    custom_hyperplane,
    default_hyperplane,
    make_transverse,
    normalize,
    rebase,
    simplex_coordinates,
)
from .limit_roots import (
    ConicProvenance,
    F0Sample,
    IntersectionResult,
    LimitPoint,
    PairProvenance,
    WordProvenance,
    act,
    conic_sample,
    dedup_points,
    directed_hausdorff,
    e2_circ_points,
    e2_points,
    f0_sample,
    line_quadric_intersect,
    orbit_limit_probe,
    reflect_point,
    visible,
    word_matrix,
)
from .subsystems import (
    DihedralInfo,
    DihedralKind,
    ParabolicRestriction,
    PhiReport,
    SubsystemEmbedding,
    canonical_module,
    dihedral_subsystem,
    exact_limit_set,
    parabolic_restriction,
    reducible_split,
    verify_phi_bijection,
)
from .render import RenderOptions, Scene, build_scene, render_svg

__all__ = [
    # errors
    "LimitRootsError", "InvalidModule", "IsotropicMirror", "DepthOverflow",
    "AllOrthogonal", "NotPositivelyIndependent", "OnKernel", "CoincidentPoints",
    "KernelCrossing", "EmptySet", "EmptyQuadric", "CanonicalPairNotInTable",
    "InvalidSimpleSystem", "UnsupportedRank", "LimitSetUnknown", "UnknownSystem",
    "DimensionMismatch",
    # bilinear core
    "GeometricModule", "SignatureReport", "FormType", "build_module", "bilinear",
    "quadratic", "reflect", "signature", "components", "radical_cone_trivial", "form_type",
    # enumeration
    "Root", "RootTable", "KappaReport", "enumerate_roots", "level_counts", "kappa_lambda",
    "audit_depth_norm", "root_descent", "words_up_to", "apply_word",
    # normalization
    "TransverseHyperplane", "NormalizedPoint", "default_hyperplane", "make_transverse",
    "custom_hyperplane", "normalize", "rebase", "simplex_coordinates",
    # limit roots
    "LimitPoint", "IntersectionResult", "F0Sample", "PairProvenance", "WordProvenance",
    "ConicProvenance", "line_quadric_intersect", "e2_points", "e2_circ_points", "act",
    "reflect_point", "visible", "directed_hausdorff", "conic_sample", "f0_sample", "dedup_points",
    "word_matrix", "orbit_limit_probe",
    # subsystems
    "DihedralKind", "DihedralInfo", "ParabolicRestriction", "SubsystemEmbedding",
    "PhiReport", "dihedral_subsystem", "parabolic_restriction", "reducible_split",
    "canonical_module", "verify_phi_bijection", "exact_limit_set",
    # render
    "Scene", "RenderOptions", "build_scene", "render_svg",
]
